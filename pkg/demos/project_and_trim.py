"""Drive project-and-trim down a two-level formula, one certified projection per level."""
from fractions import Fraction

from skewsip.core import truth_table
from skewsip.sipser import SipserParams, build_skewed_sipser, demorgan_convert
from skewsip.switching import project_and_trim

p = SipserParams(2, 2, 1, 2)
q = Fraction(1, 2)
rep = project_and_trim(p, q, seed=7)
print("completed:", rep.completed, " all equivalent:", rep.all_equivalent, " S =", rep.S)
for st in rep.steps:
    print(f"level {st.level}: {st.attempts} sample(s), circuit size {st.circuit_size}, "
          f"depth {st.circuit_depth}, matches target {st.matches_target}")
print("final target:", truth_table(rep.final_target).to_string(), f"(OR over {rep.final_target.num_vars} input)")

# the same driver runs on any circuit for the formula, e.g. the depth d+1 de Morgan circuit
C = demorgan_convert(p)
rep2 = project_and_trim(p, q, seed=7, circuit=C)
print("\nde Morgan circuit: size", C.size, "depth", C.depth, "-> final size", rep2.final_circuit.size)
print("final circuit computes the target:",
      truth_table(rep2.final_circuit, rep2.final_target.num_vars) == truth_table(build_skewed_sipser(p.lower().lower())))
