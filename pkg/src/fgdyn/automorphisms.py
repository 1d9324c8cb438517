"""Automorphisms of a free group given by the images of the generators.

An :class:`Automorphism` acts on reduced words by substitution followed by
free reduction.  A representative of an outer class is only defined up to
inner automorphisms; :class:`TwistedLift` realises the lift
``x -> w . phi(x) . w^-1`` so that lifts can be sampled by twist word.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InputError, InverseNotFound
from .words import (
    GENERATORS,
    Alphabet,
    CyclicWord,
    Word,
    check_budget,
    concat,
    free_reduce,
    inverse,
    parse_letters,
    split_cyclic,
)

_CLAUSE = re.compile(r"^\s*([A-Za-z])\s*(?:->|→|=|:)\s*(.*?)\s*$")


def _letters(w) -> str:
    if isinstance(w, Word):
        return w.letters
    if isinstance(w, CyclicWord):
        return w.raw
    return free_reduce(parse_letters(w))


class Automorphism:
    """Endomorphism of ``F_N`` fixed by generator images.

    ``inverse_images``, when given, must describe a two-sided inverse; this
    is checked on construction, so an instance carrying inverse data is a
    verified automorphism.
    """

    def __init__(self, images, inverse_images=None, label: str = "", verify: bool = True):
        imgs = tuple(_letters(w) for w in images)
        if not imgs:
            raise InputError("an automorphism needs at least one generator image")
        self.rank = len(imgs)
        self.alphabet = Alphabet(self.rank)
        for g, img in zip(self.alphabet.generators, imgs):
            self.alphabet.validate(img)
            if not img:
                raise InputError(f"generator {g} is sent to the identity")
        self.images: tuple[str, ...] = imgs
        self.label = label
        table = {}
        for g, img in zip(self.alphabet.generators, imgs):
            table[ord(g)] = img
            table[ord(g.upper())] = inverse(img)
        self._table = table
        self.inverse_images: tuple[str, ...] | None = None
        if inverse_images is not None:
            inv = tuple(_letters(w) for w in inverse_images)
            if len(inv) != self.rank:
                raise InputError("inverse data has the wrong number of images")
            for img in inv:
                self.alphabet.validate(img)
            self.inverse_images = inv
            if verify and not verify_inverse(self, Automorphism(inv, verify=False)):
                raise InputError(f"supplied inverse of {label or 'automorphism'} does not invert it")

    # -- basic protocol -------------------------------------------------
    def __repr__(self) -> str:
        body = "; ".join(f"{g}->{img}" for g, img in zip(self.alphabet.generators, self.images))
        return f"Automorphism({body!r}{', label=' + repr(self.label) if self.label else ''})"

    def __str__(self) -> str:
        return format_automorphism(self, with_inverse=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __call__(self, w) -> Word:
        return self.apply(w)

    def __mul__(self, other: "Automorphism") -> "Automorphism":
        return compose(self, other)

    def __pow__(self, n: int) -> "Automorphism":
        return power(self, n)

    # -- action ---------------------------------------------------------
    def image(self, s: str, max_len: int | None = None) -> str:
        """Reduced image of a reduced letter string (no validation)."""
        t = s.translate(self._table)
        check_budget(len(t), max_len)
        return free_reduce(t)

    def apply(self, w, max_len: int | None = None) -> Word:
        s = _letters(w)
        self.alphabet.validate(s)
        return Word._trusted(self.image(s, max_len))

    def apply_cyclic(self, c, max_len: int | None = None) -> CyclicWord:
        s = c.raw if isinstance(c, CyclicWord) else CyclicWord(c).raw
        core, _ = split_cyclic(self.image(s, max_len))
        return CyclicWord._trusted(core)

    # -- properties -----------------------------------------------------
    @property
    def has_inverse(self) -> bool:
        return self.inverse_images is not None

    def inverse(self) -> "Automorphism":
        if self.inverse_images is None:
            raise InverseNotFound("no verified inverse attached; call invert() first")
        label = f"{self.label}^-1" if self.label else ""
        return Automorphism(self.inverse_images, self.images, label=label, verify=False)

    def is_positive(self) -> bool:
        return all(img.islower() for img in self.images)

    def is_identity(self) -> bool:
        return self.images == tuple(self.alphabet.generators)

    @cached_property
    def incidence_matrix(self) -> np.ndarray:
        """``M[i, j]`` = occurrences of generator ``i`` (either sign) in the image of ``j``."""
        m = np.zeros((self.rank, self.rank), dtype=np.int64)
        for j, img in enumerate(self.images):
            for x in img:
                m[GENERATORS.index(x.lower()), j] += 1
        return m

    def with_inverse(self, inverse_images) -> "Automorphism":
        return Automorphism(self.images, inverse_images, label=self.label)

    def relabel(self, label: str) -> "Automorphism":
        return Automorphism(self.images, self.inverse_images, label=label, verify=False)


def identity(rank: int) -> Automorphism:
    gens = Alphabet(rank).generators
    return Automorphism(list(gens), list(gens), label="id", verify=False)


def apply(phi: Automorphism, w, max_len: int | None = None) -> Word:
    return phi.apply(w, max_len)


def apply_cyclic(phi: Automorphism, c, max_len: int | None = None) -> CyclicWord:
    return phi.apply_cyclic(c, max_len)


def compose(phi: Automorphism, psi: Automorphism, max_len: int | None = None) -> Automorphism:
    """``phi o psi``: first ``psi``, then ``phi``."""
    if phi.rank != psi.rank:
        raise InputError("cannot compose automorphisms of different rank")
    images = [phi.image(img, max_len) for img in psi.images]
    inv = None
    if phi.inverse_images is not None and psi.inverse_images is not None:
        psi_inv = Automorphism(psi.inverse_images, verify=False)
        inv = [psi_inv.image(img, max_len) for img in phi.inverse_images]
    label = f"{phi.label}*{psi.label}" if phi.label and psi.label else ""
    return Automorphism(images, inv, label=label, verify=False)


def power(phi: Automorphism, n: int, max_len: int | None = None) -> Automorphism:
    if n < 0:
        if phi.inverse_images is None:
            raise InverseNotFound(f"negative power {n} needs a verified inverse")
        return power(phi.inverse(), -n, max_len)
    exponent = n
    result = identity(phi.rank)
    base = phi
    while n:
        if n & 1:
            result = compose(result, base, max_len)
        n >>= 1
        if n:
            base = compose(base, base, max_len)
    return result.relabel(f"{phi.label}^{exponent}" if phi.label else "")


def verify_inverse(phi: Automorphism, psi: Automorphism) -> bool:
    """True when ``phi o psi`` and ``psi o phi`` both fix every generator."""
    if phi.rank != psi.rank:
        return False
    gens = phi.alphabet.generators
    return all(phi.image(psi.images[i]) == g and psi.image(phi.images[i]) == g for i, g in enumerate(gens))


def _nielsen_moves(T):
    n = len(T)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            tj = T[j]
            for tj_e, e in ((tj, 1), (inverse(tj), -1)):
                yield i, j, e, "R", concat(T[i], tj_e)
                yield i, j, e, "L", concat(tj_e, T[i])


def _apply_move(W, i, j, e, side):
    wj = W[j] if e == 1 else inverse(W[j])
    new = concat(W[i], wj) if side == "R" else concat(wj, W[i])
    return W[:i] + (new,) + W[i + 1 :]


def invert(phi: Automorphism, budget: int = 20000) -> Automorphism:
    """Find an inverse by length-reducing Nielsen transformations.

    The image tuple is reduced greedily; when no move shortens it, a
    breadth-first search over length-preserving moves (bounded by
    ``budget`` visited states) looks for a state that can be shortened.
    The returned automorphism carries the verified inverse.
    """
    if phi.inverse_images is not None:
        return phi
    n = phi.rank
    T = phi.images
    W = tuple(phi.alphabet.generators)
    spent = 0

    def total(t):
        return sum(len(x) for x in t)

    while total(T) > n or any(len(x) != 1 for x in T):
        best = None
        cur = total(T)
        for i, j, e, side, new in _nielsen_moves(T):
            spent += 1
            delta = len(new) - len(T[i])
            if delta < 0 and (best is None or delta < best[0]):
                best = (delta, i, j, e, side, new)
        if best is not None:
            _, i, j, e, side, new = best
            if not new:
                raise InverseNotFound("images do not form a basis (a Nielsen move produced the identity)")
            T = T[:i] + (new,) + T[i + 1 :]
            W = _apply_move(W, i, j, e, side)
        else:
            # plateau: search length-preserving moves for a shortenable state
            seen = {T}
            queue = deque([(T, W)])
            found = None
            while queue and found is None:
                t, w = queue.popleft()
                for i, j, e, side, new in _nielsen_moves(t):
                    spent += 1
                    if spent > budget:
                        raise InverseNotFound(f"Nielsen search budget of {budget} exhausted")
                    if len(new) > len(t[i]) or not new:
                        continue
                    t2 = t[:i] + (new,) + t[i + 1 :]
                    w2 = _apply_move(w, i, j, e, side)
                    if len(new) < len(t[i]):
                        found = (t2, w2)
                        break
                    if t2 not in seen:
                        seen.add(t2)
                        queue.append((t2, w2))
            if found is None:
                raise InverseNotFound("Nielsen search stalled: images are not a basis")
            T, W = found
        if spent > budget:
            raise InverseNotFound(f"Nielsen search budget of {budget} exhausted")
    # now T[i] = x^e for distinct generators x
    inv = [None] * n
    for t, w in zip(T, W):
        idx = GENERATORS.index(t.lower())
        if inv[idx] is not None:
            raise InverseNotFound("images collapse onto a proper subset of the generators")
        inv[idx] = w if t.islower() else inverse(w)
    result = Automorphism(phi.images, inv, label=phi.label)
    return result


@dataclass(frozen=True)
class TwistedLift:
    """The lift ``x -> twist . base(x) . twist^-1`` of the outer class of ``base``."""

    base: Automorphism
    twist: str = ""

    def __post_init__(self):
        t = _letters(self.twist)
        self.base.alphabet.validate(t)
        object.__setattr__(self, "twist", t)

    @cached_property
    def automorphism(self) -> Automorphism:
        w, wi = self.twist, inverse(self.twist)
        if not w:
            return self.base
        images = [concat(concat(w, img), wi) for img in self.base.images]
        inv = None
        if self.base.inverse_images is not None:
            base_inv = Automorphism(self.base.inverse_images, verify=False)
            u = base_inv.image(w)  # phi^-1(w)
            inv = [concat(concat(inverse(u), img), u) for img in self.base.inverse_images]
        label = f"{self.base.label}[{w}]" if self.base.label else ""
        return Automorphism(images, inv, label=label, verify=False)

    def apply(self, w, max_len: int | None = None) -> Word:
        return self.automorphism.apply(w, max_len)

    def __call__(self, w) -> Word:
        return self.apply(w)

    def power(self, q: int) -> Automorphism:
        return power(self.automorphism, q)


def twisted_lift(phi: Automorphism, w="") -> TwistedLift:
    return TwistedLift(phi, _letters(w))


def parse_automorphism(text: str, rank: int | None = None, label: str = "") -> Automorphism:
    """Parse ``"a->ab; b->ac; c->a"`` (clauses split by ``;`` or newlines).

    An optional ``inverse:`` block using the same syntax supplies inverse
    images.  ``#`` starts a comment.  Without ``rank`` the rank is the
    largest generator mentioned anywhere in the text.
    """
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    body = "\n".join(lines)
    parts = re.split(r"(?im)^\s*inverse\s*:|;\s*inverse\s*:", body)
    if len(parts) > 2:
        raise InputError("more than one inverse: block")
    forward = _parse_clauses(parts[0])
    backward = _parse_clauses(parts[1]) if len(parts) == 2 else None
    used = set("".join(forward) + "".join(forward.values()))
    if backward:
        used |= set("".join(backward) + "".join(backward.values()))
    inferred = max((GENERATORS.index(x.lower()) + 1 for x in used), default=0)
    if rank is None:
        rank = inferred
    elif inferred > rank:
        raise InputError(f"text mentions generators beyond rank {rank}")
    if rank < 1:
        raise InputError("empty automorphism text")
    gens = Alphabet(rank).generators
    images = _collect(forward, gens, "image")
    inv = _collect(backward, gens, "inverse image") if backward is not None else None
    return Automorphism(images, inv, label=label)


def _parse_clauses(text: str) -> dict[str, str]:
    clauses: dict[str, str] = {}
    for chunk in re.split(r"[;\n]", text):
        if not chunk.strip():
            continue
        m = _CLAUSE.match(chunk)
        if not m:
            raise InputError(f"cannot parse clause {chunk.strip()!r}; expected 'g->word'")
        g, rhs = m.group(1), m.group(2)
        if not g.islower():
            raise InputError(f"left-hand side {g!r} must be a generator (lowercase)")
        if g in clauses:
            raise InputError(f"duplicate image for generator {g}")
        clauses[g] = free_reduce(parse_letters(rhs))
    return clauses


def _collect(clauses: dict[str, str], gens: str, what: str) -> list[str]:
    extra = set(clauses) - set(gens)
    if extra:
        raise InputError(f"{what} given for generators {sorted(extra)} outside the alphabet")
    missing = [g for g in gens if g not in clauses]
    if missing:
        raise InputError(f"missing {what} for generator(s) {', '.join(missing)}")
    return [clauses[g] for g in gens]


def format_automorphism(phi: Automorphism, with_inverse: bool = True) -> str:
    gens = phi.alphabet.generators
    text = "; ".join(f"{g}->{img or '1'}" for g, img in zip(gens, phi.images))
    if with_inverse and phi.inverse_images is not None:
        text += "\ninverse: " + "; ".join(f"{g}->{img}" for g, img in zip(gens, phi.inverse_images))
    return text


def load_automorphism(path, rank: int | None = None) -> Automorphism:
    from pathlib import Path

    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read automorphism file {p}: {exc}") from exc
    return parse_automorphism(text, rank=rank, label=p.stem)


# Named examples used throughout the tests and demos.
def tribonacci() -> Automorphism:
    return parse_automorphism("a->ab; b->ac; c->a", label="tribonacci")


def fibonacci() -> Automorphism:
    return parse_automorphism("a->ab; b->a", label="fibonacci")


def cyclic_permutation(rank: int = 3) -> Automorphism:
    gens = Alphabet(rank).generators
    return Automorphism(gens[1:] + gens[0], label="perm")
