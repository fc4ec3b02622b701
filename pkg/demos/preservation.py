"""How often one random projection keeps the next-smaller formula inside the current one."""
from fractions import Fraction

from skewsip.core import is_subfunction, truth_table
from skewsip.projections import (
    ProjRestriction, apply_trim, preservation_closed_form, preservation_probability,
    project_semantic, sample_codes, survival_certificate, trimming_restriction,
)
from skewsip.rng import generator
from skewsip.sipser import AddressSpace, SipserParams, build_skewed_sipser

p = SipserParams(2, 3, 1, 1)
space = AddressSpace(p)
f = truth_table(build_skewed_sipser(p))
target = truth_table(build_skewed_sipser(p.lower()))

for q in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
    exact = preservation_probability(p, q)
    mc = preservation_probability(p, q, mode="monte_carlo", trials=50_000, seed=1)
    print(f"q={q}: exact {exact} (closed form {preservation_closed_form(p, q)}), "
          f"MC {mc.estimate:.4f} +- {mc.stderr:.4f}")

# the certificate is sufficient, not necessary; compare it with the subfunction oracle
cert = sub = 0
for codes in sample_codes(space.num_blocks, p.u, Fraction(1, 2), generator(3), 200):
    rho = ProjRestriction.from_codes(space, codes)
    c = survival_certificate(rho)
    s = is_subfunction(target, project_semantic(f, rho))
    cert += c
    sub += s
    assert s or not c
    if c:
        assert apply_trim(project_semantic(f, rho), trimming_restriction(rho)) == target
print(f"200 samples: {cert} certified, {sub} contain the target")
