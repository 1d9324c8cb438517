"""Iteration of conjugacy classes: growth, periodic classes, hyperbolicity.

An outer automorphism is hyperbolic exactly when it has no periodic
conjugacy class.  Searching all classes up to a length bound gives a
one-sided test: a periodic class is a certificate of non-hyperbolicity,
while an empty search only says that nothing was found within the bounds.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .automorphisms import Automorphism, invert
from .errors import BudgetExceeded, InverseNotFound, PreconditionError
from .words import CyclicWord, enumerate_cyclic_words, split_cyclic

DEFAULT_MAX_LEN = 6
DEFAULT_MAX_PERIOD = 6


@dataclass(frozen=True)
class GrowthProfile:
    lengths: tuple[int, ...]
    estimated_rate: float

    def as_dict(self) -> dict:
        return {"lengths": list(self.lengths), "estimated_rate": self.estimated_rate}


@dataclass(frozen=True)
class NotHyperbolic:
    witness: CyclicWord
    period: int

    status = "NotHyperbolic"

    def as_dict(self) -> dict:
        return {"status": self.status, "witness": self.witness.letters, "period": self.period}


@dataclass(frozen=True)
class NoObstructionFound:
    max_len: int
    max_period: int
    growth: dict = field(default_factory=dict, compare=False)

    status = "NoObstructionFound"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "max_len": self.max_len,
            "max_period": self.max_period,
            "note": "semi-decision: no periodic class within the bounds; not a proof of hyperbolicity",
            "growth": self.growth,
        }


HyperbolicityVerdict = NotHyperbolic | NoObstructionFound


def estimate_rate(lengths) -> float:
    """Exponential rate from a least-squares fit of log-length over the last third."""
    n = len(lengths) - 1
    if n < 1:
        return 1.0
    start = max(0, min(n - 1, n - n // 3))
    ks = np.arange(start, n + 1)
    logs = np.log(np.asarray(lengths[start:], dtype=float))
    slope = np.polyfit(ks, logs, 1)[0]
    return max(1.0, float(math.exp(slope)))


def growth_profile(phi: Automorphism, c, n: int, max_len: int | None = None) -> GrowthProfile:
    """Lengths of ``phi^k([c])`` for ``k = 0..n`` and their tail growth rate."""
    if n < 1:
        raise ValueError("growth_profile needs n >= 1")
    cw = c if isinstance(c, CyclicWord) else CyclicWord(c, phi.rank)
    if len(cw) == 0:
        raise ValueError("the trivial class has no growth")
    lengths = [len(cw)]
    for k in range(1, n + 1):
        try:
            cw = phi.apply_cyclic(cw, max_len)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"growth profile stopped at iterate {k}: {exc}", reached=k - 1) from exc
        lengths.append(len(cw))
    return GrowthProfile(tuple(lengths), estimate_rate(lengths))


def perron_root(matrix) -> float:
    """Spectral radius of a nonnegative matrix."""
    return float(max(abs(np.linalg.eigvals(np.asarray(matrix, dtype=float)))))


def return_period(phi: Automorphism, w: CyclicWord, max_period: int, max_len: int | None = None):
    """Smallest ``p <= max_period`` with ``phi^p([w]) = [w]``, else ``None``."""
    target = w.raw
    n = len(target)
    doubled = target + target
    x = target
    for p in range(1, max_period + 1):
        x, _ = split_cyclic(phi.image(x, max_len))
        if len(x) == n and x in doubled:
            return p
    return None


def _scan(args):
    phi, words, max_period, max_len = args
    found = []
    for s in words:
        w = CyclicWord._trusted(s)
        p = return_period(phi, w, max_period, max_len)
        if p is not None:
            found.append((s, p))
    return found


def find_periodic_classes(
    phi: Automorphism,
    max_len: int,
    max_period: int,
    workers: int | None = None,
    max_word_len: int | None = None,
) -> list[tuple[CyclicWord, int]]:
    """Every class of length ``<= max_len`` whose orbit returns within ``max_period`` steps.

    Classes are enumerated by length and then by canonical rotation, and the
    result keeps that order whether or not ``workers`` processes are used.
    """
    if max_len < 1 or max_period < 1:
        raise ValueError("max_len and max_period must be >= 1")
    chunks = []
    for n in range(1, max_len + 1):
        words = [c.letters for c in enumerate_cyclic_words(phi.rank, n)]
        step = 2000
        chunks.extend(words[i : i + step] for i in range(0, len(words), step))
    jobs = [(phi, chunk, max_period, max_word_len) for chunk in chunks]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan, jobs))
    else:
        results = [_scan(job) for job in jobs]
    found = [(CyclicWord._trusted(s), p) for part in results for s, p in part]
    found.sort(key=lambda item: item[0].sort_key())
    return found


def two_sided_growth(phi: Automorphism, n: int = 8, max_len: int | None = None) -> dict:
    """Growth rates of every generator class under ``phi`` and ``phi^-1``."""
    out = {}
    directions = [("+", phi)]
    if phi.has_inverse:
        directions.append(("-", phi.inverse()))
    for sign, f in directions:
        rates = {}
        for g in phi.alphabet.generators:
            try:
                rates[g] = growth_profile(f, g, n, max_len).estimated_rate
            except BudgetExceeded:
                rates[g] = None
        out[sign] = rates
    return out


def certify_hyperbolicity(
    phi: Automorphism,
    max_len: int = DEFAULT_MAX_LEN,
    max_period: int = DEFAULT_MAX_PERIOD,
    workers: int | None = None,
    growth_iterates: int = 8,
) -> HyperbolicityVerdict:
    """Search for a periodic conjugacy class; return the shortest one found."""
    if not phi.has_inverse:
        try:
            phi = invert(phi)
        except InverseNotFound as exc:
            raise PreconditionError(f"hyperbolicity check needs phi^-1: {exc}") from exc
    periodic = find_periodic_classes(phi, max_len, max_period, workers=workers)
    if periodic:
        witness, period = periodic[0]
        return NotHyperbolic(witness, period)
    return NoObstructionFound(max_len, max_period, two_sided_growth(phi, growth_iterates))
