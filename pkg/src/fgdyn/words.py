"""Freely reduced and cyclic words over the alphabet of a free group.

Generators are the lowercase letters ``a..z`` taken in rank order and the
inverse of a generator is the matching uppercase letter, so ``A`` is
``a^-1``.  Words are stored as plain Python strings internally; the
:class:`Word` and :class:`CyclicWord` wrappers add reduction guarantees,
hashing and a canonical form for conjugacy classes.
"""

from __future__ import annotations

import os
import re
import string
from typing import Iterator

from .errors import BudgetExceeded, InputError

GENERATORS = string.ascii_lowercase
DEFAULT_MAX_WORD_LEN = 10**7

# letter order used for canonical rotations: a < A < b < B < ...
_ORDER = "".join(g + g.upper() for g in GENERATORS)
_KEY_TABLE = str.maketrans(_ORDER, "".join(chr(0x100 + i) for i in range(len(_ORDER))))
_RANK_CANCEL_RE = [
    re.compile("|".join(f"{g}{g.upper()}|{g.upper()}{g}" for g in GENERATORS[:r])) for r in range(1, 27)
]
_INVERSE_MARK = re.compile(r"([a-zA-Z])(?:⁻¹|\^-1|\^\{-1\})")


def max_word_len() -> int:
    """Global word-length cap, overridable through ``FGDYN_MAX_WORD_LEN``."""
    raw = os.environ.get("FGDYN_MAX_WORD_LEN")
    if raw is None:
        return DEFAULT_MAX_WORD_LEN
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"FGDYN_MAX_WORD_LEN must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError("FGDYN_MAX_WORD_LEN must be positive")
    return value


def check_budget(length: int, cap: int | None = None, what: str = "word") -> None:
    cap = max_word_len() if cap is None else cap
    if length > cap:
        raise BudgetExceeded(f"{what} length {length} exceeds the cap of {cap} letters")


class Alphabet:
    """The ``2N`` letters of a rank-``N`` free group."""

    __slots__ = ("rank", "generators", "letters")

    def __init__(self, rank: int) -> None:
        if not 1 <= rank <= len(GENERATORS):
            raise InputError(f"rank must be between 1 and {len(GENERATORS)}, got {rank}")
        self.rank = rank
        self.generators = GENERATORS[:rank]
        self.letters = "".join(g + g.upper() for g in self.generators)

    def __repr__(self) -> str:
        return f"Alphabet(rank={self.rank})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and other.rank == self.rank

    def __hash__(self) -> int:
        return hash(("Alphabet", self.rank))

    def __contains__(self, letter: str) -> bool:
        return len(letter) == 1 and letter in self.letters

    def validate(self, letters: str) -> None:
        bad = set(letters) - set(self.letters)
        if bad:
            raise InputError(
                f"letters {''.join(sorted(bad))!r} are outside the rank-{self.rank} alphabet"
            )

    def index(self, letter: str) -> int:
        """Generator index of ``letter`` (ignores orientation)."""
        return GENERATORS.index(letter.lower())

    def cyclic_words(self, length: int) -> Iterator["CyclicWord"]:
        """All conjugacy classes of cyclically reduced length, canonical order."""
        yield from enumerate_cyclic_words(self.rank, length)


def inverse_letter(x: str) -> str:
    return x.swapcase()


def inverse(s: str) -> str:
    """Inverse of a reduced word given as a string."""
    return s[::-1].swapcase()


def order_key(s: str) -> str:
    """Sort key realising the fixed letter order ``a < A < b < B < ...``."""
    return s.translate(_KEY_TABLE)


def _cancel_re(s: str) -> re.Pattern:
    i = ord(max(s.lower())) - ord("a")
    return _RANK_CANCEL_RE[i if 0 <= i < 26 else 25]


def is_reduced(s: str) -> bool:
    # single-case words cannot cancel; checking that first skips the regex scan
    return not s or s.islower() or s.isupper() or _cancel_re(s).search(s) is None


def free_reduce(s: str) -> str:
    """Freely reduce a string of letters (no alphabet validation)."""
    if not s or s.islower() or s.isupper():
        return s
    rx = _cancel_re(s)
    # a few C-level passes remove shallow cancellation; deep nesting falls back to a stack
    for _ in range(8):
        t = rx.sub("", s)
        if len(t) == len(s):
            return s
        s = t
    out: list[str] = []
    for x in s:
        if out and out[-1] == x.swapcase():
            out.pop()
        else:
            out.append(x)
    return "".join(out)


def concat(u: str, v: str) -> str:
    """Reduced product of two reduced strings."""
    i = 0
    n = min(len(u), len(v))
    while i < n and u[-1 - i] == v[i].swapcase():
        i += 1
    return u[: len(u) - i] + v[i:]


def split_cyclic(s: str) -> tuple[str, str]:
    """Split a reduced word as ``g . core . g^-1``; returns ``(core, g)``."""
    i = 0
    n = len(s)
    while 2 * i + 1 < n and s[i] == s[n - 1 - i].swapcase():
        i += 1
    return s[i : n - i], s[:i]


def least_rotation(s: str) -> str:
    """Lexicographically least rotation of ``s`` under :func:`order_key`."""
    n = len(s)
    if n <= 1:
        return s
    key = order_key(s)
    if n <= 64:
        k = min(range(n), key=lambda i: key[i:] + key[:i])
        return s[k:] + s[:k]
    # Booth's algorithm for long words
    doubled = key + key
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        c = doubled[j]
        i = fail[j - k - 1]
        while i != -1 and c != doubled[k + i + 1]:
            if c < doubled[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if c != doubled[k + i + 1]:
            if c < doubled[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return s[k:] + s[:k]


def parse_letters(text: str) -> str:
    """Turn user text into a raw letter string.

    Whitespace is ignored, ``1`` and ``e`` alone denote the identity and a
    trailing ``^-1`` or superscript ``-1`` inverts the preceding letter.
    """
    text = "".join(text.split())
    if text in ("1", "e"):
        return ""
    text = _INVERSE_MARK.sub(lambda m: m.group(1).swapcase(), text)
    if not all(ch in string.ascii_letters for ch in text):
        raise InputError(f"cannot parse word {text!r}: only letters a-z/A-Z are allowed")
    return text


class Word:
    """A freely reduced word; the empty word is the identity."""

    __slots__ = ("letters",)

    def __init__(self, letters: str = "", rank: int | None = None) -> None:
        raw = parse_letters(letters)
        if rank is not None:
            Alphabet(rank).validate(raw)
        self.letters = free_reduce(raw)

    @classmethod
    def _trusted(cls, letters: str) -> "Word":
        w = cls.__new__(cls)
        w.letters = letters
        return w

    def __str__(self) -> str:
        return self.letters

    def __repr__(self) -> str:
        return f"Word({self.letters!r})"

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Word):
            return self.letters == other.letters
        if isinstance(other, str):
            return self.letters == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.letters)

    def __getitem__(self, item):
        return self.letters[item]

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __mul__(self, other: "Word | str") -> "Word":
        other_letters = other.letters if isinstance(other, Word) else free_reduce(other)
        return Word._trusted(concat(self.letters, other_letters))

    def __invert__(self) -> "Word":
        return Word._trusted(inverse(self.letters))

    def inverse(self) -> "Word":
        return ~self

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else ~self
        out = ""
        for _ in range(abs(n)):
            out = concat(out, base.letters)
        return Word._trusted(out)

    def is_identity(self) -> bool:
        return not self.letters

    def is_positive(self) -> bool:
        return self.letters.islower() or not self.letters


class CyclicWord:
    """A conjugacy class, stored as a cyclically reduced word up to rotation.

    ``letters`` is the canonical representative: the least rotation under
    the order ``a < A < b < B < ...``.  It is computed lazily because the
    iteration engine mostly needs lengths of very long classes.
    """

    __slots__ = ("_raw", "_canon")

    def __init__(self, letters: "str | Word" = "", rank: int | None = None) -> None:
        if isinstance(letters, Word):
            reduced = letters.letters
        else:
            reduced = Word(letters, rank).letters
        self._raw, _ = split_cyclic(reduced)
        self._canon: str | None = None

    @classmethod
    def _trusted(cls, cyclically_reduced: str) -> "CyclicWord":
        c = cls.__new__(cls)
        c._raw = cyclically_reduced
        c._canon = None
        return c

    @property
    def letters(self) -> str:
        if self._canon is None:
            self._canon = least_rotation(self._raw)
        return self._canon

    @property
    def raw(self) -> str:
        """Some cyclically reduced rotation (cheap, not canonical)."""
        return self._raw

    def __len__(self) -> int:
        return len(self._raw)

    def __str__(self) -> str:
        return self.letters

    def __repr__(self) -> str:
        return f"CyclicWord({self.letters!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CyclicWord):
            return NotImplemented
        return len(self._raw) == len(other._raw) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def sort_key(self) -> tuple[int, str]:
        return (len(self._raw), order_key(self.letters))

    def inverse(self) -> "CyclicWord":
        return CyclicWord._trusted(inverse(self._raw))

    def word(self) -> Word:
        return Word._trusted(self.letters)

    def subwords(self, k: int) -> set[str]:
        """Length-``k`` cyclic subwords (wrapping around the class)."""
        s = self._raw
        if not s or k <= 0:
            return set()
        ext = s * (k // len(s) + 2)
        return {ext[i : i + k] for i in range(len(s))}


def reduce(raw: str, rank: int | None = None) -> Word:
    """Freely reduce ``raw``; letters are validated when ``rank`` is given."""
    return Word(raw, rank)


def cyclic_reduce(w: Word | str) -> tuple[CyclicWord, Word]:
    """Return ``(core, g)`` with ``w = g . core . g^-1`` as group elements."""
    letters = w.letters if isinstance(w, Word) else Word(w).letters
    core, g = split_cyclic(letters)
    return CyclicWord._trusted(core), Word._trusted(g)


def is_conjugate(u: CyclicWord | str, v: CyclicWord | str) -> bool:
    """True iff the two classes are rotations of each other."""
    a = u.raw if isinstance(u, CyclicWord) else CyclicWord(u).raw
    b = v.raw if isinstance(v, CyclicWord) else CyclicWord(v).raw
    return len(a) == len(b) and b in a + a


def reduced_words(rank: int, length: int) -> Iterator[str]:
    """All reduced words of exactly ``length`` letters, in :func:`order_key` order."""
    letters = Alphabet(rank).letters
    if length == 0:
        yield ""
        return

    def extend(prefix: str, remaining: int) -> Iterator[str]:
        if remaining == 0:
            yield prefix
            return
        last = prefix[-1].swapcase() if prefix else None
        for x in letters:
            if x != last:
                yield from extend(prefix + x, remaining - 1)

    yield from extend("", length)


def enumerate_cyclic_words(rank: int, length: int) -> Iterator[CyclicWord]:
    """Canonical representatives of all conjugacy classes of a given length.

    Only words equal to their own least rotation are kept, so each class is
    produced exactly once, in lexicographic order of its canonical form.  A
    canonical word never contains a letter smaller than its first letter,
    which prunes the search.
    """
    if length <= 0:
        return
    letters = Alphabet(rank).letters  # already in key order
    for first_idx, first in enumerate(letters):
        allowed = letters[first_idx:]
        stack = [first]
        while stack:
            prefix = stack.pop()
            if len(prefix) == length:
                if length > 1 and prefix[0] == prefix[-1].swapcase():
                    continue
                if least_rotation(prefix) == prefix:
                    yield CyclicWord._trusted(prefix)
                continue
            last = prefix[-1].swapcase()
            for x in reversed(allowed):
                if x != last:
                    stack.append(prefix + x)


def all_words_up_to(rank: int, max_length: int) -> Iterator[str]:
    for n in range(max_length + 1):
        yield from reduced_words(rank, n)


def random_word(rng, rank: int, length: int) -> str:
    """Uniformly random reduced word of the given length."""
    letters = Alphabet(rank).letters
    out: list[str] = []
    for _ in range(length):
        choices = [x for x in letters if not out or x != out[-1].swapcase()]
        out.append(choices[rng.randrange(len(choices))])
    return "".join(out)


def random_letters(rng, rank: int, length: int) -> str:
    """Random unreduced letter string (for reduction tests)."""
    letters = Alphabet(rank).letters
    return "".join(letters[rng.randrange(len(letters))] for _ in range(length))


__all__ = [
    "Alphabet",
    "CyclicWord",
    "Word",
    "all_words_up_to",
    "concat",
    "cyclic_reduce",
    "enumerate_cyclic_words",
    "free_reduce",
    "inverse",
    "is_conjugate",
    "least_rotation",
    "max_word_len",
    "order_key",
    "reduce",
    "reduced_words",
    "split_cyclic",
]
