"""Exact bad-set audit of the projection switching lemma on a small instance."""
from fractions import Fraction

from skewsip.core import Dnf, neg, pos

from skewsip.projections import ProjRestriction
from skewsip.sipser import AddressSpace, SipserParams
from skewsip.switching import (
    PslParams, SupportProfile, bad_set, decode_theta, encode_theta, random_instance_dnfs,
)

# two blocks of three sections, three variables per section: 18 variables, 49 support points
space = AddressSpace(SipserParams(3, 2, 3, 1))
# each term reads one variable in each block, so the canonical tree can reach depth 2
x = lambda beta, section, i=0: space.section_range(beta, section)[i]
F = Dnf(space.n, ((pos(x(0, 0)), pos(x(1, 1))), (neg(x(0, 2)), pos(x(1, 0, 2))), (pos(x(0, 1, 1)), neg(x(1, 2)))))
print("DNF:", F)
print("one random 2-DNF for comparison:", random_instance_dnfs(space, r=2, count=1, seed=2024)[0])

prof = SupportProfile(F, space)  # canonical tree depths at every support point, reused across q and s

for q in (Fraction(1, 20), Fraction(1, 10), Fraction(1, 5)):
    for s in (1, 2):
        rep = bad_set(F, PslParams(space, 2, s, q), profile=prof)
        print(f"q={q}  s={s}  |B|={len(rep.bad):2d}  exact={str(rep.exact_prob):>12}  "
              f"bound={str(rep.bound):>10}  optimal-DT={rep.optimal_prob}  ok={rep.ok}")

# look at one encoded bad restriction
bad = prof.bad(2)
if bad:
    rho = bad[0]
    theta = encode_theta(prof.engine, rho, s=2, r=2)
    print("\nbad restriction:", rho.expand())
    print("composed       :", theta.composed.expand())
    print("path bits      :", theta.path_bits, " eta code:", theta.eta_code)
    back = decode_theta(prof.engine, theta, s=2, r=2, verify=True)
    print("decodes back   :", back == rho)

# the all-free restriction is the most likely single point to be bad
print("\ndepth at all-star:", prof.engine.depth(ProjRestriction.all_star(space)))
