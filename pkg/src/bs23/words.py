"""Syllable-level words over the generators a and b.

A word is stored as a tuple of ``(base, exponent)`` syllables, freely reduced:
adjacent syllables have different bases and no exponent is zero.  Exponents are
plain Python ints, so there is no overflow when a-powers get pushed through many
stable letters.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

A = "a"
B = "b"


class Syllable(NamedTuple):
    base: str
    exp: int


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _reduce(syllables: Iterable[tuple[str, int]]) -> tuple[Syllable, ...]:
    out: list[Syllable] = []
    for base, exp in syllables:
        if exp == 0:
            continue
        if out and out[-1].base == base:
            total = out[-1].exp + exp
            out.pop()
            if total:
                out.append(Syllable(base, total))
        else:
            out.append(Syllable(base, exp))
    return tuple(out)


class Word:
    """Immutable freely reduced word.  Supports ``*``, ``~`` (inverse) and ``**``."""

    __slots__ = ("syllables", "_hash")

    def __init__(self, syllables: Iterable[tuple[str, int]] = ()):
        syls = _reduce(syllables)
        for base, _ in syls:
            if base not in (A, B):
                raise ValueError(f"unknown generator {base!r}")
        object.__setattr__(self, "syllables", syls)
        object.__setattr__(self, "_hash", hash(syls))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def _trusted(cls, syls: tuple[Syllable, ...]) -> "Word":
        w = object.__new__(cls)
        object.__setattr__(w, "syllables", syls)
        object.__setattr__(w, "_hash", hash(syls))
        return w

    @classmethod
    def identity(cls) -> "Word":
        return _IDENTITY

    @classmethod
    def a(cls, k: int = 1) -> "Word":
        return cls([(A, k)])

    @classmethod
    def b(cls, k: int = 1) -> "Word":
        return cls([(B, k)])

    @classmethod
    def parse(cls, text: str) -> "Word":
        return parse_word(text)

    def __len__(self):
        return len(self.syllables)

    def __iter__(self):
        return iter(self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.syllables == other.syllables

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        return power(self, k)

    def __str__(self):
        return format_word(self)

    def __repr__(self):
        return f"Word({format_word(self)!r})"

    def letters(self) -> list[tuple[str, int]]:
        """Expand into single letters ``(base, +-1)``."""
        out = []
        for base, exp in self.syllables:
            step = 1 if exp > 0 else -1
            out.extend([(base, step)] * abs(exp))
        return out


_IDENTITY = Word._trusted(())


def multiply(u: Word, v: Word) -> Word:
    left = list(u.syllables)
    right = v.syllables
    i = 0
    while left and i < len(right) and left[-1].base == right[i].base:
        total = left[-1].exp + right[i].exp
        base = left.pop().base
        i += 1
        if total:
            left.append(Syllable(base, total))
            break
    return Word._trusted(tuple(left) + right[i:])


def invert(u: Word) -> Word:
    return Word._trusted(tuple(Syllable(base, -exp) for base, exp in reversed(u.syllables)))


def power(u: Word, k: int) -> Word:
    if k < 0:
        u, k = invert(u), -k
    result = _IDENTITY
    base = u
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def product(*words: Word) -> Word:
    result = _IDENTITY
    for w in words:
        result = multiply(result, w)
    return result


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x y x^-1 y^-1``."""
    return product(x, y, invert(x), invert(y))


def conjugate(x: Word, by: Word) -> Word:
    """``by x by^-1``; in particular ``conjugate(a, b)`` is ``a^b = b a b^-1``."""
    return product(by, x, invert(by))


def cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``u = conjugator * core * conjugator^-1``."""
    syls = list(u.syllables)
    prefix: list[Syllable] = []
    while len(syls) >= 2 and syls[0].base == syls[-1].base:
        first, last = syls[0], syls[-1]
        total = first.exp + last.exp
        if total == 0:
            prefix.append(first)
            syls = syls[1:-1]
        else:
            # u = first * mid * last = first * (mid * last * first) * first^-1
            prefix.append(first)
            syls = syls[1:-1] + [Syllable(first.base, total)]
            break
    return Word(syls), Word(prefix)


def rho(u: Word) -> int:
    """Sum of the b-exponents."""
    return sum(exp for base, exp in u.syllables if base == B)


def rho_a(u: Word) -> int:
    """Sum of the absolute b-exponents (number of stable letters)."""
    return sum(abs(exp) for base, exp in u.syllables if base == B)


def height(u: Word) -> int:
    """Image under a -> 0, b -> 1."""
    return rho(u)


def format_word(u: Word) -> str:
    if not u.syllables:
        return "1"
    parts = []
    for base, exp in u.syllables:
        parts.append(base if exp == 1 else f"{base}^{exp}")
    return " ".join(parts)


# -- parser -----------------------------------------------------------------

_LETTERS = {"a": (A, 1), "b": (B, 1), "A": (A, -1), "B": (B, -1)}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise WordSyntaxError(f"expected {ch!r}, got {got!r}", self.pos)
        self.pos += 1

    def sequence(self, stop: str) -> Word:
        result = Word.identity()
        while True:
            ch = self.peek()
            if ch == "" or ch in stop:
                return result
            result = multiply(result, self.factor())

    def factor(self) -> Word:
        ch = self.peek()
        start = self.pos
        if ch in _LETTERS:
            self.pos += 1
            base, sign = _LETTERS[ch]
            atom = Word([(base, sign)])
        elif ch == "1":
            self.pos += 1
            atom = Word.identity()
        elif ch == "(":
            self.pos += 1
            atom = self.sequence(")")
            self.expect(")")
        elif ch == "[":
            self.pos += 1
            x = self.sequence(",]")
            self.expect(",")
            y = self.sequence("]")
            self.expect("]")
            atom = commutator(x, y)
        else:
            raise WordSyntaxError(f"unexpected character {ch!r}", start)
        if self.peek() == "^":
            self.pos += 1
            atom = power(atom, self.integer())
        return atom

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            raise WordSyntaxError("expected an integer exponent", start)
        return int(self.text[start:self.pos])


def parse_word(text: str) -> Word:
    """Parse the word grammar: ``a b A B``, ``^k`` exponents, ``[u,v]`` and ``(u)^k``."""
    p = _Parser(text)
    w = p.sequence("")
    if p.peek():
        raise WordSyntaxError(f"unexpected character {p.peek()!r}", p.pos)
    return w


def as_word(w) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return parse_word(w)
    return Word(w)
