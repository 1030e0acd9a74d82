"""Reduced words in the rank-2 free group and directions to infinity.

Letters are the four characters ``a``, ``A``, ``b``, ``B`` where the upper
case letter is the inverse of the lower case one (``"abAB"`` is the
commutator).  A :class:`Word` is always stored reduced, so word length is
the graph distance from the identity in the 4-regular Cayley tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import ConfigError

LETTERS = "aAbB"

_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


def inverse_letter(letter: str) -> str:
    try:
        return _INVERSE[letter]
    except KeyError:
        raise ConfigError(f"invalid letter {letter!r}; expected one of {LETTERS}")


def reduce_letters(letters: Iterable[str]) -> str:
    """Stack-based free reduction of a letter sequence."""
    stack: list[str] = []
    for ch in letters:
        if ch not in _INVERSE:
            raise ConfigError(f"invalid letter {ch!r}; expected one of {LETTERS}")
        if stack and stack[-1] == _INVERSE[ch]:
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


class Word:
    """An immutable, reduced word over {a, A, b, B}.

    ``Word("abA")`` reduces its argument; multiplication is reduced
    concatenation, ``~w`` is the group inverse, ``len(w)`` the Cayley
    distance from the identity.
    """

    __slots__ = ("_s",)

    def __init__(self, letters: str | Iterable[str] = ""):
        if isinstance(letters, str):
            s = letters
            if not _is_reduced(s):
                s = reduce_letters(s)
            elif any(ch not in _INVERSE for ch in s):
                raise ConfigError(f"invalid letters in {letters!r}")
        else:
            s = reduce_letters(letters)
        object.__setattr__(self, "_s", s)

    @property
    def letters(self) -> str:
        return self._s

    def __len__(self) -> int:
        return len(self._s)

    def __bool__(self) -> bool:
        return bool(self._s)

    def __iter__(self) -> Iterator[str]:
        return iter(self._s)

    def __getitem__(self, idx):
        picked = self._s[idx]
        if isinstance(idx, slice):
            return Word(picked)  # contiguous slices of reduced words stay reduced
        return picked

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return Word("".join(_INVERSE[ch] for ch in reversed(self._s)))

    def inverse(self) -> "Word":
        return ~self

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self._s == other._s

    def __hash__(self) -> int:
        return hash(self._s)

    def __str__(self) -> str:
        return self._s

    def __repr__(self) -> str:
        return f"Word({self._s!r})"

    def starts_with(self, prefix: "Word") -> bool:
        return self._s.startswith(prefix._s)


def _is_reduced(s: str) -> bool:
    return all(_INVERSE.get(s[i]) != s[i + 1] for i in range(len(s) - 1))


EMPTY = Word("")


def reduce(letters: Iterable[str]) -> Word:
    """Fully reduced word of a letter sequence; idempotent."""
    return Word(reduce_letters(letters))


def concat(w1: Word, w2: Word) -> Word:
    """Reduced product ``w1 w2``.

    Cancellation can only happen at the seam, so strip the matching
    inverse run instead of re-reducing from scratch.
    """
    s1, s2 = w1.letters, w2.letters
    i = len(s1)
    j = 0
    while i > 0 and j < len(s2) and _INVERSE[s1[i - 1]] == s2[j]:
        i -= 1
        j += 1
    out = Word.__new__(Word)
    object.__setattr__(out, "_s", s1[:i] + s2[j:])
    return out


def cayley_distance(w1: Word, w2: Word) -> int:
    """Graph distance d(w1, w2) = |w1^-1 w2| in the Cayley tree."""
    k = len(longest_common_prefix(w1, w2))
    return (len(w1) - k) + (len(w2) - k)


def longest_common_prefix(w1: Word, w2: Word) -> Word:
    s1, s2 = w1.letters, w2.letters
    n = min(len(s1), len(s2))
    k = 0
    while k < n and s1[k] == s2[k]:
        k += 1
    return w1[:k]


def ball_count(n: int) -> int:
    """Number of reduced words of length at most ``n``: 2*3^n - 1."""
    if n < 0:
        raise ConfigError("ball radius must be nonnegative")
    return 2 * 3**n - 1


def enumerate_words(length: int) -> Iterator[Word]:
    """All reduced words of exactly the given length (4 * 3^(L-1) of them)."""
    if length < 0:
        raise ConfigError("word length must be nonnegative")
    if length == 0:
        yield EMPTY
        return

    def rec(prefix: list[str]) -> Iterator[str]:
        if len(prefix) == length:
            yield "".join(prefix)
            return
        for ch in LETTERS:
            if prefix and prefix[-1] == _INVERSE[ch]:
                continue
            prefix.append(ch)
            yield from rec(prefix)
            prefix.pop()

    for s in rec([]):
        w = Word.__new__(Word)
        object.__setattr__(w, "_s", s)
        yield w


@dataclass(frozen=True)
class EndPrefix:
    """A direction to infinity, given as a finite reduced prefix.

    Eventually periodic ends carry a ``repeat`` block; ``prefix(depth)``
    then expands ``word . repeat . repeat ...`` to the requested number of
    letters.  The expansion must be reduction-free, which is checked at
    construction time.
    """

    word: Word
    repeat: Optional[Word] = None

    def __post_init__(self) -> None:
        if self.repeat is not None:
            if len(self.repeat) == 0:
                raise ConfigError("repeat block must be nonempty")
            seam1 = len(self.word) + len(self.repeat)
            if len(concat(self.word, self.repeat)) != seam1:
                raise ConfigError("prefix/repeat seam cancels; end is not reduced")
            if len(concat(self.repeat, self.repeat)) != 2 * len(self.repeat):
                raise ConfigError("repeat block cancels against itself")

    @property
    def declared_infinite(self) -> bool:
        return self.repeat is not None

    def prefix(self, depth: int) -> Word:
        """First ``depth`` letters of the end."""
        if depth < 0:
            raise ConfigError("depth must be nonnegative")
        s = self.word.letters
        if len(s) < depth:
            if self.repeat is None:
                raise ConfigError(
                    f"finite end of length {len(s)} cannot supply depth {depth}"
                )
            block = self.repeat.letters
            reps = (depth - len(s)) // len(block) + 1
            s = s + block * reps
        return Word(s[:depth])


@dataclass(frozen=True)
class ConePoint:
    """A point of the cone over the ends: escape speed plus direction.

    Speed zero is the cone vertex, where the direction collapses.
    """

    speed: float
    direction: Optional[EndPrefix] = None

    def __post_init__(self) -> None:
        if self.speed < 0.0:
            raise ConfigError("cone speed must be nonnegative")
        if self.speed == 0.0 and self.direction is not None:
            object.__setattr__(self, "direction", None)
        if self.speed > 0.0 and self.direction is None:
            raise ConfigError("nonzero speed requires a direction")
