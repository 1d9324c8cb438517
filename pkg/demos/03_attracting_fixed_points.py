"""Attracting fixed points of twisted lifts on the boundary.

Each lift ``i_w o phi`` is iterated on seeds until its prefixes settle; the
points are grouped by lift and audited against the ``2N`` bound.
"""

from fgdyn import collect_attracting_points, invert, tribonacci

phi = invert(tribonacci())
for sign, f in (("phi", phi), ("phi^-1", phi.inverse())):
    fps = collect_attracting_points(f, twist_length_bound=1)
    print(f"{sign}: {len(fps)} points over {len(fps.by_lift)} lifts")
    for twist, count in sorted(fps.per_lift_counts().items()):
        pts = ", ".join(p.stable[:12] + "..." for p in fps.lift_points(twist))
        print(f"  lift {twist or '1':>3}: {count} distinct  {pts}")
    print("  lifts above 2N:", fps.gjll_violations() or "none")
