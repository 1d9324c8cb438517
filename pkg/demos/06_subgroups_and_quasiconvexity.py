"""Stallings graphs and obstructions to quasiconvexity.

A subgroup that carries an attracting fixed point, or arbitrarily long
lamination segments, is not quasiconvex in the mapping torus.  Finding no
such obstruction within the budgets is a one-sided answer.
"""

from fgdyn import carries_leaf, collect_attracting_points, invert, qc_verdict, stallings_graph, tribonacci
from fgdyn.laminations import lamination_fingerprint

H = stallings_graph(["ab", "ac"], 3)
print(f"<ab, ac>: {len(H)} states, contains Bc: {H.membership('Bc')}, contains a: {H.membership('a')}")

phi = invert(tribonacci())
fixed = (collect_attracting_points(phi, 1), collect_attracting_points(phi.inverse(), 1))

ab = stallings_graph(["a", "b"], 3)
for k in (2, 8):
    fp = lamination_fingerprint(phi, "a", k)
    print(f"<a,b> carries k={k} leaf segments of length 16:", carries_leaf(ab, fp, 16).status)
print("<a,b>:", qc_verdict(ab, phi, fixed_points=fixed).as_dict())

# A subgroup generated by a long fixed-point prefix reads that whole prefix.
p = fixed[0].points[0]
print("<P>:", qc_verdict(stallings_graph([p.prefix], 3), phi, fixed_points=fixed).status)
