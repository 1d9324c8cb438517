"""Stallings graphs of finitely generated subgroups and carrying tests.

A subgroup is represented by its folded core graph: a deterministic
automaton whose closed paths at the base state read exactly the reduced
words of the subgroup.  Boundary points and lamination segments are tested
against the graph by reading them as paths.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .automorphisms import Automorphism, invert
from .boundary import BoundaryPrefix, FixedPointSet, collect_attracting_points
from .dynamics import NotHyperbolic, certify_hyperbolicity
from .errors import InputError, PreconditionError
from .laminations import LaminationFingerprint, fingerprints
from .words import Alphabet, inverse_letter, order_key, parse_letters, reduce

DEFAULT_QC_K = 8
DEFAULT_QC_WINDOW = 16


class _Folder:
    """Union-find over states with an edge map kept deterministic under folding."""

    def __init__(self):
        self.parent: list[int] = []
        self.out: list[dict[str, int]] = []

    def new_state(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        return len(self.parent) - 1

    def find(self, s: int) -> int:
        while self.parent[s] != s:
            self.parent[s] = self.parent[self.parent[s]]
            s = self.parent[s]
        return s

    def add_edge(self, u: int, x: str, v: int, pending: list):
        for a, y, b in ((u, x, v), (v, inverse_letter(x), u)):
            a = self.find(a)
            t = self.out[a].get(y)
            if t is None:
                self.out[a][y] = b
            elif self.find(t) != self.find(b):
                pending.append((t, b))

    def merge(self, a: int, b: int, pending: list):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if b < a:
            a, b = b, a
        self.parent[b] = a
        moved = self.out[b]
        self.out[b] = {}
        for y, t in moved.items():
            cur = self.out[a].get(y)
            if cur is None:
                self.out[a][y] = t
            elif self.find(cur) != self.find(t):
                pending.append((cur, t))


@dataclass(frozen=True)
class StallingsGraph:
    """Folded core graph; ``edges[s]`` maps a letter to the target state."""

    rank: int
    edges: tuple[dict, ...]
    base: int = 0
    generators: tuple[str, ...] = field(default=(), compare=False)
    folded: bool = True

    @property
    def states(self) -> range:
        return range(len(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def step(self, s: int, x: str) -> int | None:
        return self.edges[s].get(x)

    def read(self, w: str, start: int | None = None) -> tuple[int | None, int]:
        """Follow ``w`` from ``start``; return ``(end state or None, letters read)``."""
        s = self.base if start is None else start
        for i, x in enumerate(w):
            t = self.edges[s].get(x)
            if t is None:
                return None, i
            s = t
        return s, len(w)

    def membership(self, w) -> bool:
        end, _ = self.read(reduce(str(w), self.rank).letters)
        return end == self.base

    def __contains__(self, w) -> bool:
        return self.membership(w)

    def transitions(self) -> list[tuple[int, str, int]]:
        return [(s, x, t) for s in self.states for x, t in sorted(self.edges[s].items(), key=lambda e: order_key(e[0]))]

    def canonical_form(self) -> tuple:
        """Transitions after relabelling states in breadth-first order from the base."""
        letters = Alphabet(self.rank).letters
        order = {self.base: 0}
        queue = [self.base]
        for s in queue:
            for x in letters:
                t = self.edges[s].get(x)
                if t is not None and t not in order:
                    order[t] = len(order)
                    queue.append(t)
        return tuple(sorted((order[s], order_key(x), order[t]) for s, x, t in self.transitions()))

    def as_dict(self) -> dict:
        return {
            "states": len(self),
            "base": self.base,
            "transitions": [[s, x, t] for s, x, t in self.transitions() if x.islower()],
        }


def _generator_words(gens, rank):
    words = []
    for g in gens:
        w = reduce(g if isinstance(g, str) else str(g), rank).letters if rank else parse_letters(str(g))
        if not w:
            raise InputError(f"generator {g!r} is trivial")
        words.append(w)
    return words


def stallings_graph(gens, rank: int | None = None, rng: random.Random | None = None) -> StallingsGraph:
    """Folded core graph of ``<gens>``.

    With ``rng`` the petals are attached and the folds resolved in a random
    order; the result is the same graph up to relabelling.
    """
    gens = [gens] if isinstance(gens, str) else list(gens)
    if not gens:
        raise InputError("at least one generator is required")
    if rank is None:
        letters = "".join(parse_letters(str(g)) for g in gens)
        rank = max((ord(x.lower()) - ord("a") + 1 for x in letters), default=1)
    words = _generator_words(gens, rank)
    f = _Folder()
    base = f.new_state()
    edges = []
    for w in words:
        prev = base
        for i, x in enumerate(w):
            nxt = base if i == len(w) - 1 else f.new_state()
            edges.append((prev, x, nxt))
            prev = nxt
    if rng is not None:
        rng.shuffle(edges)
    pending: list = []
    for u, x, v in edges:
        f.add_edge(u, x, v, pending)
    while pending:
        i = rng.randrange(len(pending)) if rng is not None else len(pending) - 1
        pending[i], pending[-1] = pending[-1], pending[i]
        a, b = pending.pop()
        f.merge(a, b, pending)
    roots = sorted({f.find(s) for s in range(len(f.parent))})
    out = {r: {x: f.find(t) for x, t in f.out[r].items()} for r in roots}
    base = f.find(base)
    # prune hanging trees so only the core remains
    alive = set(roots)
    changed = True
    while changed:
        changed = False
        for s in sorted(alive):
            if s != base and len(out[s]) <= 1:
                for x, t in out[s].items():
                    out[t].pop(inverse_letter(x), None)
                out[s] = {}
                alive.discard(s)
                changed = True
    index = {s: i for i, s in enumerate(sorted(alive))}
    table = tuple({x: index[t] for x, t in out[s].items()} for s in sorted(alive))
    return StallingsGraph(rank, table, index[base], tuple(words))


def has_infinite_index(g: StallingsGraph, rank: int | None = None) -> bool:
    letters = Alphabet(rank or g.rank).letters
    return any(x not in g.edges[s] for s in g.states for x in letters)


@dataclass(frozen=True)
class RayVerdict:
    status: str
    read: int
    depth: int

    def as_dict(self) -> dict:
        return {"status": self.status, "read": self.read, "depth": self.depth}


CARRIED, NOT_CARRIED, UNDETERMINED = "Carried", "NotCarried", "Undetermined"


def carries_ray(g: StallingsGraph, p: BoundaryPrefix) -> RayVerdict:
    """Read the point's prefix from the base state.

    Carried when the whole prefix reads; NotCarried when reading breaks
    inside the stable depth; Undetermined when it breaks only past it.
    """
    end, n = g.read(p.prefix)
    if end is not None:
        return RayVerdict(CARRIED, n, p.depth)
    return RayVerdict(NOT_CARRIED if n < p.depth else UNDETERMINED, n, p.depth)


@dataclass(frozen=True)
class LeafVerdict:
    carries: bool
    witness: str = ""

    @property
    def status(self) -> str:
        return "CarriesLongSegments" if self.carries else "No"

    def as_dict(self) -> dict:
        return {"status": self.status, "witness": self.witness}


def carries_leaf(g: StallingsGraph, fp: LaminationFingerprint, window: int) -> LeafVerdict:
    """Is some reduced path of length ``window`` in ``g`` made only of fingerprint subwords?

    Layered search over (state, recent letters); the witness is the
    order-least word reaching the final layer.
    """
    if window < 1:
        raise ValueError("window must be positive")
    k = fp.k
    legal = fp.subwords
    m = max(k - 1, 1)

    def ok(word: str) -> bool:
        return len(word) < k or word[-k:] in legal

    letters = Alphabet(g.rank).letters
    layer: dict[tuple[int, str], str] = {}
    for s in g.states:
        for x, t in g.edges[s].items():
            if ok(x) and (k > 1 or x in legal):
                key = (t, x[-m:])
                if key not in layer or order_key(x) < order_key(layer[key]):
                    layer[key] = x
    for _ in range(window - 1):
        nxt: dict[tuple[int, str], str] = {}
        for (s, tail), word in layer.items():
            for x in letters:
                if x == inverse_letter(word[-1]):
                    continue
                t = g.edges[s].get(x)
                if t is None:
                    continue
                w2 = word + x
                if not ok(w2):
                    continue
                key = (t, w2[-m:])
                if key not in nxt or order_key(w2) < order_key(nxt[key]):
                    nxt[key] = w2
        if not nxt:
            return LeafVerdict(False)
        layer = nxt
    if not layer:
        return LeafVerdict(False)
    return LeafVerdict(True, min(layer.values(), key=order_key))


@dataclass(frozen=True)
class NotQuasiconvex:
    witness: dict
    status = "NotQuasiconvex"

    def as_dict(self) -> dict:
        return {"status": self.status, "witness": self.witness}


@dataclass(frozen=True)
class QCNoObstructionFound:
    budgets: dict
    undetermined: int = 0
    status = "NoObstructionFound"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "budgets": self.budgets,
            "undetermined_rays": self.undetermined,
            "note": "one-sided: only sampled lifts and fingerprints at the given k were checked",
        }


def qc_verdict(
    g: StallingsGraph,
    phi: Automorphism,
    phi_inv: Automorphism | None = None,
    *,
    twist_bound: int = 2,
    depth: int = 48,
    k: int = DEFAULT_QC_K,
    window: int = DEFAULT_QC_WINDOW,
    verdict=None,
    fixed_points: tuple[FixedPointSet, FixedPointSet] | None = None,
    check_len: int = 4,
    check_period: int = 4,
) -> NotQuasiconvex | QCNoObstructionFound:
    """Look for a carried attracting fixed point, then for a carried lamination segment."""
    if not has_infinite_index(g, phi.rank):
        raise PreconditionError("subgroup has finite index")
    phi = invert(phi) if phi_inv is None else phi.with_inverse(phi_inv.images)
    phi_inv = phi.inverse()
    if verdict is None:
        verdict = certify_hyperbolicity(phi, check_len, check_period)
    if isinstance(verdict, NotHyperbolic):
        raise PreconditionError(f"automorphism is not hyperbolic: [{verdict.witness.letters}] is periodic")
    if fixed_points is not None:
        twist_bound = fixed_points[0].twist_bound
    else:
        fixed_points = (
            collect_attracting_points(phi, twist_bound, target_depth=depth),
            collect_attracting_points(phi_inv, twist_bound, target_depth=depth),
        )
    undetermined = 0
    for sign, fps in zip("+-", fixed_points):
        for p in fps.points:
            v = carries_ray(g, p)
            if v.status == CARRIED:
                return NotQuasiconvex({"kind": "carried_fixed_point", "direction": sign, "point": p.as_dict()})
            if v.status == UNDETERMINED:
                undetermined += 1
    for sign, f in (("+", phi), ("-", phi_inv)):
        for fp in fingerprints(f, k):
            lv = carries_leaf(g, fp, window)
            if lv.carries:
                return NotQuasiconvex(
                    {"kind": "leaf_segment", "direction": sign, "generator": fp.generator, "segment": lv.witness}
                )
    budgets = {"twist_bound": twist_bound, "depth": depth, "k": k, "window": window}
    return QCNoObstructionFound(budgets, undetermined)
