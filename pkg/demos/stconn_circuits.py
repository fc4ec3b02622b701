"""The two small-depth circuits for distance-k connectivity, checked against BFS."""
import math

from skewsip.core import truth_table
from skewsip.stconn import AdjacencyInput, bfs_oracle, build_power_circuit, build_squaring_circuit

n = 5
adj = AdjacencyInput(n)
graphs = [adj.bits_from_mask(m) for m in range(1 << adj.num_vars)]
print(f"{len(graphs)} graphs on {n} nodes, s = 0, t = {n - 1}")

print(" k | squaring size depth | power d=1   d=2   d=3 (size/depth)")
for k in range(1, 7):
    oracle = [bfs_oracle(g, n, 0, n - 1, k) for g in graphs]
    sq = build_squaring_circuit(n, k)
    ok = list(truth_table(sq).bits.astype(int)) == oracle
    row = f"{k:2d} | {sq.size:8d} {sq.depth:5d} {'ok' if ok else 'BAD'} |"
    assert sq.depth == 2 * math.ceil(math.log2(k))
    for d in (1, 2, 3):
        pw = build_power_circuit(n, k, d)
        ok = list(truth_table(pw).bits.astype(int)) == oracle
        row += f" {pw.size:4d}/{pw.depth}{'' if ok else '!'}"
    print(row)
