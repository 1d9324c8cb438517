"""Ending-lamination lines of a cyclic extension and their boundary identifications.

Lines come from weak limits of sampled conjugacy classes under both
``phi`` and ``phi^-1``.  Gluing lines along shared endpoints gives a graph
whose components approximate the fibers of the boundary map; the audit
checks that only attracting fixed points sit on several lines and that no
component outgrows the per-lift fixed point counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .automorphisms import Automorphism, invert, verify_inverse
from .boundary import (
    DEFAULT_MERGE_DEPTH,
    BoundaryPrefix,
    Comparison,
    FixedPointSet,
    collect_attracting_points,
    common_prefix_length,
    same_point,
)
from .dynamics import NotHyperbolic, certify_hyperbolicity
from .errors import PreconditionError
from .laminations import (
    DEFAULT_K,
    DEFAULT_LINE_DEPTH,
    DEFAULT_N_MAX,
    LimitLine,
    LineClass,
    fingerprints,
    weak_limit_lines,
)
from .words import CyclicWord, all_words_up_to, enumerate_cyclic_words, inverse, is_reduced

DEFAULT_SAMPLE_LEN = 3
DEFAULT_CONNECTOR_BOUND = 2


@dataclass
class EndingLaminationSet:
    lines: list[LimitLine] = field(default_factory=list)
    samples: int = 0
    fixed_points_plus: FixedPointSet | None = None
    fixed_points_minus: FixedPointSet | None = None

    def __len__(self) -> int:
        return len(self.lines)

    def by_direction(self, direction: str) -> list[LimitLine]:
        return [ln for ln in self.lines if ln.direction == direction]

    def violation_candidates(self) -> list[LimitLine]:
        return [ln for ln in self.lines if ln.theorem_violation_candidate]

    def as_dict(self) -> dict:
        counts: dict[str, int] = {}
        for ln in self.lines:
            key = f"{ln.direction}{ln.classification.value}" if ln.converged else f"{ln.direction}unconverged"
            counts[key] = counts.get(key, 0) + 1
        return {
            "samples": self.samples,
            "lines": [ln.as_dict() for ln in self.lines],
            "counts": dict(sorted(counts.items())),
            "violation_candidates": len(self.violation_candidates()),
            "coverage": "reported only: finite samples need not witness every line of the ending lamination",
        }


def _same_line(a: LimitLine, b: LimitLine, merge_depth: int) -> bool:
    def same(p, q):
        return same_point(p, q, merge_depth) is Comparison.SAME

    return (same(a.end1, b.end1) and same(a.end2, b.end2)) or (same(a.end1, b.end2) and same(a.end2, b.end1))


def ending_lamination_set(
    phi: Automorphism,
    phi_inv: Automorphism | None = None,
    samples=None,
    *,
    max_sample_len: int = DEFAULT_SAMPLE_LEN,
    k: int = DEFAULT_K,
    n_max: int = DEFAULT_N_MAX,
    depth: int = DEFAULT_LINE_DEPTH,
    merge_depth: int = DEFAULT_MERGE_DEPTH,
    twist_bound: int = 2,
    verdict=None,
    check_len: int = 4,
    check_period: int = 4,
) -> EndingLaminationSet:
    """Weak-limit lines of sampled classes under ``phi`` (``+``) and ``phi^-1`` (``-``).

    Refuses input with a periodic class.  Lines are deduplicated by their
    unordered pair of ends, so a line and its flip count once.
    """
    if phi_inv is None:
        phi = invert(phi)
    elif not verify_inverse(phi, phi_inv):
        raise PreconditionError("phi_inv is not the inverse of phi")
    else:
        phi = phi.with_inverse(phi_inv.images)
    phi_inv = phi.inverse()
    if verdict is None:
        verdict = certify_hyperbolicity(phi, check_len, check_period)
    if isinstance(verdict, NotHyperbolic):
        raise PreconditionError(
            f"automorphism is not hyperbolic: [{verdict.witness.letters}] has period {verdict.period}"
        )
    if samples is None:
        samples = [c for n in range(1, max_sample_len + 1) for c in enumerate_cyclic_words(phi.rank, n)]
    samples = [c if isinstance(c, CyclicWord) else CyclicWord(c, phi.rank) for c in samples]
    fps_plus = collect_attracting_points(phi, twist_bound, target_depth=max(48, depth), merge_depth=merge_depth)
    fps_minus = collect_attracting_points(phi_inv, twist_bound, target_depth=max(48, depth), merge_depth=merge_depth)
    els = EndingLaminationSet(samples=len(samples), fixed_points_plus=fps_plus, fixed_points_minus=fps_minus)
    if not samples:
        return els
    for sign, f, fps in (("+", phi, fps_plus), ("-", phi_inv, fps_minus)):
        lams = fingerprints(f, k)
        seen: dict[tuple[str, str], LimitLine] = {}
        for c in samples:
            for ln in weak_limit_lines(
                f, c, k, n_max, fixed_points=fps, laminations=lams, depth=depth,
                merge_depth=merge_depth, direction=sign,
            ):
                key = tuple(sorted((ln.end1.stable, ln.end2.stable)))
                if key in seen or any(_same_line(ln, other, merge_depth) for other in seen.values()):
                    continue
                seen[key] = ln
        els.lines.extend(seen.values())
    return els


def assemble_singular_lines(
    fps: FixedPointSet, connector_length_bound: int = DEFAULT_CONNECTOR_BOUND, merge_depth: int | None = None
) -> list[LimitLine]:
    """Lines joining two Distinct attracting points of one lift.

    The ends are kept as absolute boundary points; the witness is the part
    of the line around its closest approach to the identity, with the
    connector placed at the junction.
    """
    md = fps.merge_depth if merge_depth is None else merge_depth
    done: set[tuple[int, int]] = set()
    lines = []
    for twist in sorted(fps.by_lift, key=lambda t: (len(t), t)):
        idx = sorted(set(fps.by_lift[twist]))
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                pair = (idx[a], idx[b])
                if pair in done:
                    continue
                p, q = fps.points[pair[0]], fps.points[pair[1]]
                if same_point(p, q, md) is not Comparison.DISTINCT:
                    continue
                m = common_prefix_length(p.stable, q.stable)
                left, right = inverse(p.stable[m:]), q.stable[m:]
                connector = next(
                    (w for w in all_words_up_to(fps.rank, connector_length_bound) if is_reduced(left + w + right)),
                    None,
                )
                if connector is None:
                    continue
                done.add(pair)
                witness = left[-8:] + connector + right[:8]
                lines.append(LimitLine(p, q, witness, LineClass.FIX_PLUS_JOINING))
    return lines


@dataclass
class IdentificationGraph:
    nodes: list[BoundaryPrefix] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)
    components: list[list[int]] = field(default_factory=list)
    unresolved: list[tuple[int, int]] = field(default_factory=list)
    review: list[int] = field(default_factory=list)
    loops: list[int] = field(default_factory=list)
    ceiling: int = 2
    rank: int = 0

    @property
    def max_component_size(self) -> int:
        return max((len(c) for c in self.components), default=0)

    def degrees(self) -> list[int]:
        deg = [0] * len(self.nodes)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    @property
    def exceeds_ceiling(self) -> bool:
        return self.max_component_size > self.ceiling

    @property
    def sound(self) -> bool:
        return not self.review and not self.loops and not self.exceeds_ceiling

    def as_dict(self) -> dict:
        return {
            "nodes": [{"prefix": p.stable, "depth": p.depth} for p in self.nodes],
            "edges": [list(e) for e in self.edges],
            "component_sizes": sorted((len(c) for c in self.components), reverse=True),
            "max_component_size": self.max_component_size,
            "ceiling": self.ceiling,
            "gjll_bound_per_lift": 2 * self.rank,
            "unmatched_branch_nodes": self.review,
            "degenerate_edges": self.loops,
            "unresolved_pairs": [list(p) for p in self.unresolved],
            "sound": self.sound,
        }


def _per_lift_max(fps: FixedPointSet | None) -> int:
    if fps is None or not fps.by_lift:
        return 0
    return max(fps.per_lift_counts().values())


def identification_graph(
    els: EndingLaminationSet,
    merge_depth: int = DEFAULT_MERGE_DEPTH,
    fps_plus: FixedPointSet | None = None,
    fps_minus: FixedPointSet | None = None,
) -> IdentificationGraph:
    """Glue lines along Same endpoints; Undetermined pairs stay separate and are reported."""
    fps_plus = els.fixed_points_plus if fps_plus is None else fps_plus
    fps_minus = els.fixed_points_minus if fps_minus is None else fps_minus
    rank = fps_plus.rank if fps_plus is not None else 0
    ceiling = max(2, _per_lift_max(fps_plus), _per_lift_max(fps_minus))
    graph = IdentificationGraph(ceiling=ceiling, rank=rank)
    unresolved: set[tuple[int, int]] = set()

    def node_of(p: BoundaryPrefix) -> int:
        pending = []
        for i, q in enumerate(graph.nodes):
            cmp = same_point(p, q, merge_depth)
            if cmp is Comparison.SAME:
                return i
            if cmp is Comparison.UNDETERMINED:
                pending.append(i)
        graph.nodes.append(p)
        new = len(graph.nodes) - 1
        unresolved.update((i, new) for i in pending)
        return new

    for n, ln in enumerate(ln for ln in els.lines if ln.converged):
        i, j = node_of(ln.end1), node_of(ln.end2)
        if i == j:
            graph.loops.append(n)
            continue
        graph.edges.append((min(i, j), max(i, j)))
    g = nx.Graph()
    g.add_nodes_from(range(len(graph.nodes)))
    g.add_edges_from(graph.edges)
    graph.components = sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: (-len(c), c[0]))
    for v, d in enumerate(graph.degrees()):
        if d < 2:
            continue
        p = graph.nodes[v]
        if not any(f is not None and f.match(p, merge_depth) is not None for f in (fps_plus, fps_minus)):
            graph.review.append(v)
    graph.unresolved = sorted(unresolved)
    return graph
