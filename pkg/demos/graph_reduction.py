"""From a read-once formula to a series-parallel graph, and back to connectivity."""
from skewsip.graphs import (
    check_connectivity_equivalence, formula_to_graph, reduction_params, shortest_st_path, subgraph,
)
from skewsip.sipser import SipserParams, build_dagger, build_skewed_sipser

p = SipserParams(2, 2, 2, 2)
f = build_skewed_sipser(p)
G = formula_to_graph(f)
print(f"{f.num_vars} variables -> {G.vertex_count} vertices, {G.edge_count} edges")
print("s-t distance:", shortest_st_path(G), "= u^d =", p.u ** p.d)

# the bottom OR gates become parallel edges; the dagger variant splits them into paths of length 2
D = formula_to_graph(build_dagger(p))
print("plain graph simple:", G.is_simple(), " dagger graph simple:", D.is_simple(),
      " dagger distance:", shortest_st_path(D))

# a few assignments: the subgraph connects s and t exactly when the formula is 1
for z in ["1" * 32, "0" * 32, "11" + "0" * 30, "1010" * 8, "1100" * 8]:
    H = subgraph(G, z)
    print(z, "f =", f.evaluate(z), " dist =", shortest_st_path(H),
          " agree =", check_connectivity_equivalence(f, z, G))

# parameters of the lower-bound reduction for a concrete input size
rp = reduction_params(10 ** 6, 16, 2)
print(f"\nn = 10^6, k = 16, d = 2: u0 = {rp.u0}, k0 = {rp.k0}, w0 = {rp.w0}, "
      f"bottom fan-in {rp.bottom_fanin}, n0 ~ {rp.n0_display:.1f}")
print("dagger formula:", rp.dagger_params())
