"""Subword fingerprints of attracting laminations and weak limits of classes.

A lamination is a closed set of bi-infinite lines; the weak topology on
lines is generated by finite subwords, so the set of length-``k`` subwords
of a high iterate of an expanding generator is a finite surrogate for the
lamination.  Weak limits of a conjugacy class are approximated by lines
built around subwords that persist in every late iterate of the class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .automorphisms import Automorphism
from .boundary import (
    DEFAULT_MERGE_DEPTH,
    DEFAULT_POWER_BOUND,
    BoundaryPrefix,
    FixedPointSet,
    collect_attracting_points,
    common_prefix_length,
)
from .errors import BudgetExceeded, NoStabilization
from .words import CyclicWord, inverse, order_key, split_cyclic

DEFAULT_K = 3
DEFAULT_N_MAX = 40
DEFAULT_LINE_DEPTH = 32
# iterate the class until it is at least this long before reading persistent windows
DEFAULT_TAIL_LEN = 4000
_LINE_CAP = 4_000_000


def subwords(s: str, k: int) -> set[str]:
    return {s[i : i + k] for i in range(len(s) - k + 1)} if k > 0 else set()


def with_inverses(words) -> frozenset[str]:
    words = set(words)
    return frozenset(words | {inverse(w) for w in words})


@dataclass(frozen=True)
class LaminationFingerprint:
    k: int
    subwords: frozenset[str]
    automorphism: str = ""
    generator: str = ""
    iterate: int = 0

    def __len__(self) -> int:
        return len(self.subwords)

    def __contains__(self, w: str) -> bool:
        return w in self.subwords

    def sorted(self) -> list[str]:
        return sorted(self.subwords, key=order_key)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "subwords": self.sorted(),
            "automorphism": self.automorphism,
            "generator": self.generator,
            "iterate": self.iterate,
        }


def lamination_fingerprint(
    phi: Automorphism, x: str, k: int = DEFAULT_K, n_max: int = DEFAULT_N_MAX, max_len: int | None = None
) -> LaminationFingerprint:
    """Inversion-closed ``k``-subwords of ``phi^n(x)`` at the first ``n`` where they repeat twice."""
    phi.alphabet.validate(x)
    w = x
    sets = [with_inverses(subwords(w, k))]
    lengths = [len(w)]
    for n in range(1, n_max + 1):
        try:
            w = phi.image(w, max_len)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"fingerprint of {x} stopped at iterate {n}: {exc}", reached=n - 1) from exc
        sets.append(with_inverses(subwords(w, k)))
        lengths.append(len(w))
        # words shorter than k have no subwords yet; that emptiness is not stability
        long_enough = lengths[n - 2] >= k or lengths[n - 2] == lengths[n]
        if n >= 2 and long_enough and sets[n - 2] == sets[n - 1] == sets[n]:
            return LaminationFingerprint(k, sets[n - 2], phi.label, x, n - 2)
    raise NoStabilization(f"{k}-subwords of iterates of {x} did not stabilise within {n_max} iterates")


def fingerprints(phi: Automorphism, k: int = DEFAULT_K, n_max: int = DEFAULT_N_MAX) -> list[LaminationFingerprint]:
    """Distinct fingerprints over the generators whose iterates grow."""
    out: list[LaminationFingerprint] = []
    for g in phi.alphabet.generators:
        fp = lamination_fingerprint(phi, g, k, n_max)
        if len(phi.image(phi.image(g))) <= 1:
            continue
        if not any(fp.subwords == other.subwords for other in out):
            out.append(fp)
    return out


def fingerprint_equal(fp1: LaminationFingerprint, fp2: LaminationFingerprint) -> bool:
    return fp1.k == fp2.k and fp1.subwords == fp2.subwords


def common_lamination_check(phi: Automorphism, psi: Automorphism, k: int = DEFAULT_K, n_max: int = DEFAULT_N_MAX) -> bool:
    """True iff some fingerprint of ``phi`` equals some fingerprint of ``psi`` at this ``k``."""
    fa = fingerprints(phi, k, n_max)
    fb = fingerprints(psi, k, n_max)
    return any(fingerprint_equal(a, b) for a in fa for b in fb)


@dataclass(frozen=True)
class Attracted:
    iterate: int
    status = "Attracted"


@dataclass(frozen=True)
class NotObserved:
    n_max: int
    status = "NotObserved"


def cyclic_subwords(s: str, k: int) -> set[str]:
    return CyclicWord._trusted(s).subwords(k)


def attraction_test(
    phi: Automorphism, c, fp: LaminationFingerprint, n_max: int = 15, max_len: int | None = None
) -> Attracted | NotObserved:
    """First iterate of ``[c]`` containing every subword of ``fp`` (either orientation)."""
    s = c.raw if isinstance(c, CyclicWord) else CyclicWord(c, phi.rank).raw
    need = fp.subwords
    for n in range(n_max + 1):
        if s:
            seen = cyclic_subwords(s, fp.k)
            if all(w in seen or inverse(w) in seen for w in need):
                return Attracted(n)
        if n < n_max:
            s, _ = split_cyclic(phi.image(s, max_len))
    return NotObserved(n_max)


class LineClass(str, Enum):
    GENERIC_LEAF_LIKE = "GenericLeafLike"
    FIX_PLUS_JOINING = "FixPlusJoining"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class LimitLine:
    """A line ``end1 <-> end2`` through the identity; ``witness`` sits just after the identity."""

    end1: BoundaryPrefix
    end2: BoundaryPrefix
    witness: str
    classification: LineClass = LineClass.UNCLASSIFIED
    also_fix_plus: bool = False
    converged: bool = True
    direction: str = "+"
    closure: frozenset = field(default=frozenset(), compare=False)

    @property
    def theorem_violation_candidate(self) -> bool:
        return self.converged and self.classification is LineClass.UNCLASSIFIED

    def central_word(self) -> str:
        return inverse(self.end1.stable) + self.end2.stable

    def as_dict(self) -> dict:
        return {
            "end1": self.end1.as_dict(),
            "end2": self.end2.as_dict(),
            "witness": self.witness,
            "classification": self.classification.value,
            "also_fix_plus": self.also_fix_plus,
            "converged": self.converged,
            "direction": self.direction,
        }


def _settled(history, which, depth, power_bound):
    """Smallest lag ``q`` at which one end agrees with the previous two ``q``-steps to ``depth``."""
    for q in range(1, power_bound + 1):
        if len(history) < 2 * q + 1:
            continue
        a, b, c = history[-1][which], history[-1 - q][which], history[-1 - 2 * q][which]
        d = min(common_prefix_length(a, b), common_prefix_length(b, c))
        if d >= depth:
            return q, min(d, len(a))
    return None


def _extend_line(phi, g, depth, power_bound, max_iter=60):
    """Follow the line through ``...g g | g g...`` under ``phi``, re-basing on the axis each step.

    Each end may settle with its own period.  Returns
    ``(backward, forward, back_depth, fwd_depth, back_q, fwd_q)`` or ``None``.
    """
    keep = 2 * depth
    history = []
    for _ in range(max_iter):
        if len(g) >= 2 * keep:
            history.append((g[:keep], inverse(g[-keep:])))
            fwd = _settled(history, 0, depth, power_bound)
            back = _settled(history, 1, depth, power_bound)
            if fwd and back:
                return history[-1][1], history[-1][0], back[1], fwd[1], back[0], fwd[0]
        try:
            g, _ = split_cyclic(phi.image(g, _LINE_CAP))
        except BudgetExceeded:
            return None
        if not g:
            return None
    return None


_FPS_CACHE: dict = {}


def _default_fixed_points(phi: Automorphism, depth: int) -> FixedPointSet:
    key = (phi.images, depth)
    if key not in _FPS_CACHE:
        _FPS_CACHE[key] = collect_attracting_points(phi, 2, target_depth=max(48, depth))
    return _FPS_CACHE[key]


def weak_limit_lines(
    phi: Automorphism,
    c,
    k: int = DEFAULT_K,
    n_max: int = DEFAULT_N_MAX,
    *,
    fixed_points: FixedPointSet | None = None,
    laminations: list[LaminationFingerprint] | None = None,
    depth: int = DEFAULT_LINE_DEPTH,
    merge_depth: int = DEFAULT_MERGE_DEPTH,
    power_bound: int = DEFAULT_POWER_BOUND,
    tail_len: int = DEFAULT_TAIL_LEN,
    direction: str = "+",
) -> list[LimitLine]:
    """Approximate weak limits of ``[c]`` under iterates of ``phi``.

    A window is persistent when it occurs in every iterate of the final
    third.  Each persistent window is followed under further iteration to a
    line whose two ends are finite-precision boundary points, which is then
    labelled by comparing its subword closure with the fingerprints and its
    ends with the collected attracting fixed points.
    """
    s = c.raw if isinstance(c, CyclicWord) else CyclicWord(c, phi.rank).raw
    if not s:
        return []
    iterates = [s]
    for _ in range(n_max):
        if len(iterates[-1]) >= tail_len:
            break
        nxt, _ = split_cyclic(phi.image(iterates[-1]))
        if any(len(nxt) == len(prev) and nxt in prev + prev for prev in iterates):
            return []  # periodic class: no limit lines
        iterates.append(nxt)
    if len(iterates) < 2 or len(iterates[-1]) <= len(iterates[0]):
        return []
    last = len(iterates) - 1
    tail = iterates[last - last // 3 :]
    persistent = set.intersection(*(cyclic_subwords(t, k) for t in tail))
    if not persistent:
        return []
    if laminations is None:
        laminations = fingerprints(phi, k)
    if fixed_points is None:
        fixed_points = _default_fixed_points(phi, depth)
    lam_sets = [fp.subwords for fp in laminations if fp.k == k]

    # every tail iterate contains each window; start from the shortest one
    top = tail[0]
    wrapped = top + top[: k - 1]
    lines = []
    for w in sorted(persistent, key=order_key):
        i = wrapped.find(w)
        g = top[i:] + top[:i]
        ext = _extend_line(phi, g, depth, power_bound)
        if ext is None:
            stub = BoundaryPrefix(w, 0, seed=w)
            back = BoundaryPrefix(inverse(top[-1] if i == 0 else top[i - 1]), 0, seed=w)
            lines.append(LimitLine(back, stub, w, LineClass.UNCLASSIFIED, converged=False, direction=direction))
            continue
        b, f, db, df, qb, qf = ext
        end1 = BoundaryPrefix(b, db, seed=w, power=qb)
        end2 = BoundaryPrefix(f, df, seed=w, power=qf)
        central = inverse(b[:db]) + f[:df]
        closure = with_inverses(subwords(central, k))
        generic = any(closure == lam for lam in lam_sets)
        fix_plus = fixed_points.match(end1, merge_depth) is not None and fixed_points.match(end2, merge_depth) is not None
        if generic:
            cls = LineClass.GENERIC_LEAF_LIKE
        elif fix_plus:
            cls = LineClass.FIX_PLUS_JOINING
        else:
            cls = LineClass.UNCLASSIFIED
        lines.append(LimitLine(end1, end2, w, cls, also_fix_plus=generic and fix_plus, direction=direction, closure=closure))
    return lines
