"""Finite-precision points of the boundary of the free group.

A boundary point is an infinite reduced word; we hold a finite prefix of it
together with the length ``depth`` of the part that is known to be stable.
Attracting fixed points of a lift are found by iterating the lift on a seed
word and watching the common prefix of successive iterates grow.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx

from .automorphisms import Automorphism, TwistedLift, power
from .errors import BudgetExceeded, NoConvergence
from .words import all_words_up_to, concat, inverse, order_key, reduced_words

DEFAULT_TARGET_DEPTH = 48
DEFAULT_MERGE_DEPTH = 32
DEFAULT_POWER_BOUND = 3
DEFAULT_WINDOW = 6
DEFAULT_MAX_ITER = 80
# iterates longer than this are abandoned (the seed is treated as non-convergent)
DEFAULT_ITERATE_CAP = 2_000_000
# minimum stable length inspected when screening out fixed-subgroup endpoints
_PROBE_DEPTH = 24


class Comparison(str, Enum):
    SAME = "Same"
    DISTINCT = "Distinct"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class BoundaryPrefix:
    """``prefix`` approximates a point of the boundary; its first ``depth`` letters are stable."""

    prefix: str
    depth: int
    twist: str = ""
    seed: str = ""
    power: int = 1

    def __post_init__(self):
        if self.depth > len(self.prefix) or self.depth < 0:
            raise ValueError("depth must lie between 0 and len(prefix)")

    @property
    def stable(self) -> str:
        return self.prefix[: self.depth]

    def as_dict(self) -> dict:
        return {
            "prefix": self.prefix,
            "depth": self.depth,
            "twist": self.twist,
            "seed": self.seed,
            "power": self.power,
        }


def common_prefix_length(u: str, v: str) -> int:
    n = min(len(u), len(v))
    if u[:n] == v[:n]:
        return n
    lo, hi = 0, n  # u[:lo] == v[:lo], u[:hi] != v[:hi]
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if u[:mid] == v[:mid]:
            lo = mid
        else:
            hi = mid
    return lo


def same_point(p: BoundaryPrefix, q: BoundaryPrefix, min_depth: int = DEFAULT_MERGE_DEPTH) -> Comparison:
    """Compare two finite-precision points.

    Distinct when they differ inside the smaller stable depth.  Same when
    they are the identical record, or agree through the smaller stable depth
    and that depth is at least ``min_depth``.  Undetermined otherwise.
    """
    agree = common_prefix_length(p.prefix, q.prefix)
    shared = min(p.depth, q.depth)
    if agree < shared:
        return Comparison.DISTINCT
    if p == q:
        return Comparison.SAME
    if shared >= min_depth:
        return Comparison.SAME
    return Comparison.UNDETERMINED


def _as_automorphism(lift) -> tuple[Automorphism, str]:
    if isinstance(lift, TwistedLift):
        return lift.automorphism, lift.twist
    return lift, ""


def _iterate(f: Automorphism, seed: str, target_depth: int, window: int, max_iter: int, cap: int):
    """Iterate ``f`` on ``seed`` until the common prefix of two successive steps reaches the target."""
    x = seed
    last = -1
    best = -1
    stall = 0
    for _ in range(max_iter):
        try:
            y = f.image(x, cap)
        except BudgetExceeded as exc:
            raise NoConvergence(f"iterate exceeded the length cap: {exc}") from exc
        if y == x:
            raise NoConvergence("seed word is fixed; no boundary point")
        lcp = common_prefix_length(x, y)
        if lcp >= target_depth and last >= target_depth:
            keep = max(2 * target_depth, target_depth)
            prefix = y[:keep]
            return prefix, min(lcp, last, len(prefix))
        if lcp > best:
            best = lcp
            stall = 0
        else:
            stall += 1
            if stall >= window:
                raise NoConvergence(f"common prefix stuck at {best} letters for {window} iterates")
        last = lcp
        x = y
    raise NoConvergence(f"no convergence within {max_iter} iterates")


def fixed_subgroup_generator(f: Automorphism, stable: str) -> str | None:
    """Return ``g`` with ``f(g) = g`` when ``stable`` reads like ``h u u u ...`` for ``g = h u h^-1``.

    Such a point is an endpoint of the fixed subgroup of the lift rather
    than an attracting point produced by expansion.
    """
    n = len(stable)
    for offset in range(0, n // 3 + 1):
        tail = stable[offset:]
        for period in range(1, len(tail) // 3 + 1):
            if tail[period:] == tail[: len(tail) - period]:
                h, u = stable[:offset], tail[:period]
                g = concat(concat(h, u), inverse(h))
                if g and f.image(g) == g:
                    return g
                break
    return None


def iterate_to_fixed_point(
    lift,
    seed,
    target_depth: int = DEFAULT_TARGET_DEPTH,
    *,
    power_bound: int = DEFAULT_POWER_BOUND,
    window: int = DEFAULT_WINDOW,
    max_iter: int = DEFAULT_MAX_ITER,
    max_len: int | None = None,
) -> BoundaryPrefix:
    """Attracting fixed point of ``lift`` (or of a power up to ``power_bound``) reached from ``seed``.

    The base lift is tried first; ``lift^2``, ``lift^3``, ... only when it fails.
    """
    f, twist = _as_automorphism(lift)
    s = str(seed)
    f.alphabet.validate(s)
    if not s:
        raise ValueError("seed must be a nontrivial word")
    cap = DEFAULT_ITERATE_CAP if max_len is None else max_len
    reasons = []
    for q in range(1, power_bound + 1):
        fq = f if q == 1 else power(f, q)
        try:
            prefix, depth = _iterate(fq, s, target_depth, window, max_iter, cap)
        except NoConvergence as exc:
            reasons.append(f"power {q}: {exc}")
            continue
        probe = prefix[:depth]
        if depth < _PROBE_DEPTH:
            try:
                deep, deep_depth = _iterate(fq, s, _PROBE_DEPTH, window, max_iter, cap)
                probe = deep[:deep_depth]
            except NoConvergence:
                pass
        g = fixed_subgroup_generator(fq, probe)
        if g is not None:
            reasons.append(f"power {q}: limit is an endpoint of the fixed subgroup <{g}>")
            continue
        return BoundaryPrefix(prefix, depth, twist=twist, seed=s, power=q)
    raise NoConvergence("; ".join(reasons))


def default_seeds(rank: int) -> list[str]:
    """Generators, their inverses and every reduced word of length two."""
    return list(reduced_words(rank, 1)) + list(reduced_words(rank, 2))


@dataclass
class FixedPointSet:
    """Deduplicated attracting points grouped by the lift that produced them."""

    rank: int
    points: list[BoundaryPrefix] = field(default_factory=list)
    by_lift: dict[str, list[int]] = field(default_factory=dict)
    failures: list[tuple[str, str, str]] = field(default_factory=list)
    unresolved: list[tuple[int, int]] = field(default_factory=list)
    twist_bound: int = 0
    merge_depth: int = DEFAULT_MERGE_DEPTH

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def lift_points(self, twist: str) -> list[BoundaryPrefix]:
        return [self.points[i] for i in self.by_lift.get(twist, [])]

    def distinct_count(self, indices) -> int:
        """Size of the largest set of pairwise Distinct points among ``indices``."""
        idx = list(indices)
        if len(idx) <= 1:
            return len(idx)
        g = nx.Graph()
        g.add_nodes_from(idx)
        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                pa, pb = self.points[idx[a]], self.points[idx[b]]
                if same_point(pa, pb, self.merge_depth) is Comparison.DISTINCT:
                    g.add_edge(idx[a], idx[b])
        return max(len(c) for c in nx.find_cliques(g))

    def per_lift_counts(self) -> dict[str, int]:
        return {t: self.distinct_count(ix) for t, ix in self.by_lift.items()}

    def gjll_violations(self) -> dict[str, int]:
        """Lifts with more than ``2N`` pairwise Distinct attracting points."""
        bound = 2 * self.rank
        return {t: c for t, c in self.per_lift_counts().items() if c > bound}

    def match(self, p: BoundaryPrefix, min_depth: int | None = None) -> int | None:
        """Index of a collected point Same as ``p``, if any."""
        md = self.merge_depth if min_depth is None else min_depth
        for i, q in enumerate(self.points):
            if same_point(p, q, md) is Comparison.SAME:
                return i
        return None

    def add(self, p: BoundaryPrefix) -> int:
        undetermined = []
        for i, q in enumerate(self.points):
            cmp = same_point(p, q, self.merge_depth)
            if cmp is Comparison.SAME:
                idx = i
                break
            if cmp is Comparison.UNDETERMINED:
                undetermined.append(i)
        else:
            self.points.append(p)
            idx = len(self.points) - 1
            self.unresolved.extend((i, idx) for i in undetermined)
        group = self.by_lift.setdefault(p.twist, [])
        if idx not in group:
            group.append(idx)
        return idx

    def as_dict(self) -> dict:
        counts = self.per_lift_counts()
        return {
            "rank": self.rank,
            "twist_bound": self.twist_bound,
            "merge_depth": self.merge_depth,
            "points": [p.as_dict() for p in self.points],
            "lifts": {t: {"points": ix, "distinct": counts[t]} for t, ix in self.by_lift.items()},
            "gjll_bound_per_lift": 2 * self.rank,
            "gjll_violations": self.gjll_violations(),
            "unresolved_pairs": [list(pair) for pair in self.unresolved],
            "failures": len(self.failures),
            "completeness": "heuristic: sampled twists may miss isogredience classes",
        }


def _run_lift(args):
    phi, twist, seeds, target_depth, power_bound, window, max_iter = args
    lift = TwistedLift(phi, twist)
    found, failed = [], []
    for s in seeds:
        try:
            found.append(
                iterate_to_fixed_point(
                    lift, s, target_depth, power_bound=power_bound, window=window, max_iter=max_iter
                )
            )
        except NoConvergence as exc:
            failed.append((twist, s, str(exc)))
    return found, failed


def twist_words(rank: int, bound: int) -> list[str]:
    return list(all_words_up_to(rank, bound))


def collect_attracting_points(
    phi: Automorphism,
    twist_length_bound: int = 2,
    seeds=None,
    target_depth: int = DEFAULT_TARGET_DEPTH,
    *,
    merge_depth: int = DEFAULT_MERGE_DEPTH,
    power_bound: int = DEFAULT_POWER_BOUND,
    window: int = DEFAULT_WINDOW,
    max_iter: int = DEFAULT_MAX_ITER,
    workers: int | None = None,
) -> FixedPointSet:
    """Attracting points of every lift twisted by a word of length ``<= twist_length_bound``.

    Per-seed failures are recorded, not raised.  Assembly is deterministic:
    lifts in twist order, then points sorted by prefix within each lift.
    """
    seeds = default_seeds(phi.rank) if seeds is None else [str(s) for s in seeds]
    twists = twist_words(phi.rank, twist_length_bound)
    jobs = [(phi, t, seeds, target_depth, power_bound, window, max_iter) for t in twists]
    if workers is None:
        workers = int(os.environ.get("FGDYN_WORKERS", "1") or 1)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_lift, jobs))
    else:
        results = [_run_lift(job) for job in jobs]
    fps = FixedPointSet(rank=phi.rank, twist_bound=twist_length_bound, merge_depth=merge_depth)
    for found, failed in results:
        for p in sorted(found, key=lambda p: (order_key(p.prefix), p.seed, p.power)):
            fps.add(p)
        fps.failures.extend(failed)
    return fps
