"""Ending lamination lines and the boundary identifications they induce.

Lines from weak limits of short classes under ``phi`` and ``phi^-1`` are
glued along shared endpoints.  In a sound graph only attracting fixed
points sit on several lines, and no component is larger than the per-lift
counts allow.
"""

from fgdyn import ending_lamination_set, identification_graph, parse_automorphism

phi = parse_automorphism("a -> b; b -> c; c -> ab", label="plastic")
els = ending_lamination_set(phi, max_sample_len=2)
summary = els.as_dict()
print(f"{len(els)} lines from {els.samples} classes:", summary["counts"])

g = identification_graph(els)
print("component sizes:", sorted((len(c) for c in g.components), reverse=True))
print(f"largest component {g.max_component_size}, ceiling {g.ceiling}, sound: {g.sound}")
print("undetermined endpoint pairs:", len(g.unresolved))
