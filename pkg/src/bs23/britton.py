"""Word problem for BS(n, m) = <a, b | b a^n = a^m b> via Britton's lemma.

A *pinch* is a subword ``b a^(kn) b^-1`` (kind ``"up"``) or ``b^-1 a^(km) b``
(kind ``"down"``); replacing it by ``a^(km)`` resp. ``a^(kn)`` removes two
stable letters.  A word represents the identity iff pinch removal plus free
reduction empties it.

Normal forms push a-powers to the right:
``a^(mq+r) b = a^r b a^(nq)`` and ``a^(nq+r) b^-1 = a^r b^-1 a^(mq)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .words import A, B, Syllable, Word, as_word, invert, multiply, product

UP = 1
DOWN = -1


@dataclass(frozen=True)
class GroupParams:
    n: int = 2
    m: int = 3

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"BS(n,m) needs n, m >= 1, got ({self.n}, {self.m})")

    def __str__(self):
        return f"BS({self.n},{self.m})"


BS23 = GroupParams(2, 3)


def _require_bs23(params: GroupParams):
    if (params.n, params.m) != (2, 3):
        raise ValueError(f"only defined for BS(2,3), got {params}")


# -- pinches ------------------------------------------------------------------


@dataclass(frozen=True)
class Pinch:
    """A pinch applied at syllable index ``position`` (the first b-syllable)."""

    position: int
    kind: str  # "up" for b a^(kn) b^-1, "down" for b^-1 a^(km) b
    k: int

    def to_json(self) -> dict:
        return {"position": self.position, "kind": self.kind, "k": self.k}


def find_pinch(u: Word, params: GroupParams = BS23) -> Optional[Pinch]:
    """Leftmost pinch of ``u``, or None."""
    syls = as_word(u).syllables
    for i in range(len(syls) - 2):
        first, mid, last = syls[i], syls[i + 1], syls[i + 2]
        if first.base != B or mid.base != A or last.base != B:
            continue
        if first.exp > 0 > last.exp and mid.exp % params.n == 0:
            return Pinch(i, "up", mid.exp // params.n)
        if first.exp < 0 < last.exp and mid.exp % params.m == 0:
            return Pinch(i, "down", mid.exp // params.m)
    return None


def apply_pinch(u: Word, pinch: Pinch, params: GroupParams = BS23) -> Word:
    """Remove one pair of stable letters at ``pinch``; raises if it does not fit."""
    syls = as_word(u).syllables
    i = pinch.position
    try:
        first, mid, last = syls[i], syls[i + 1], syls[i + 2]
    except IndexError:
        raise ValueError(f"no pinch at position {i}") from None
    if pinch.kind == "up":
        ok = first.exp > 0 > last.exp and mid.exp == pinch.k * params.n
        new_a = pinch.k * params.m
        step = 1
    else:
        ok = first.exp < 0 < last.exp and mid.exp == pinch.k * params.m
        new_a = pinch.k * params.n
        step = -1
    if not ok or first.base != B or last.base != B:
        raise ValueError(f"no {pinch.kind} pinch with k={pinch.k} at position {i}")
    middle = [(B, first.exp - step), (A, new_a), (B, last.exp + step)]
    return Word(list(syls[:i]) + middle + list(syls[i + 3:]))


@dataclass(frozen=True)
class BrittonWitness:
    """Outcome of pinch removal.

    ``trace`` replays on the input (via :func:`apply_pinch`) to ``reduced``.
    The element is trivial iff ``reduced`` is the empty word.
    """

    reduced: Word
    trace: tuple[Pinch, ...] = field(default=())

    @property
    def trivial(self) -> bool:
        return not self.reduced

    def trace_json(self) -> str:
        return json.dumps([p.to_json() for p in self.trace])


def britton_reduce(u: Word, params: GroupParams = BS23, *, record: bool = True) -> BrittonWitness:
    """Remove pinches leftmost-first until none is left.

    Runs as a single left-to-right stack pass: the stack is always pinch-free,
    so any new pinch must involve the stable letter being pushed.
    """
    n, m = params.n, params.m
    stack: list[list] = []
    trace: list[Pinch] = []
    for base, exp in as_word(u).syllables:
        if base == A:
            if stack and stack[-1][0] == A:
                stack[-1][1] += exp
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([A, exp])
            continue
        f = exp
        while f:
            if stack and stack[-1][0] == B:
                total = stack[-1][1] + f
                if not total:
                    stack.pop()
                    break
                if (total > 0) == (stack[-1][1] > 0):
                    stack[-1][1] = total
                    break
                # the sign flipped, so the syllable below may now form a pinch
                stack.pop()
                f = total
                continue
            if len(stack) >= 2 and (stack[-2][1] > 0) != (f > 0):
                e, x = stack[-2][1], stack[-1][1]
                if e > 0 and x % n == 0:
                    k, new_a = x // n, (x // n) * m
                    kind = "up"
                elif e < 0 and x % m == 0:
                    k, new_a = x // m, (x // m) * n
                    kind = "down"
                else:
                    stack.append([B, f])
                    break
                if record:
                    trace.append(Pinch(len(stack) - 2, kind, k))
                stack.pop()
                e -= 1 if e > 0 else -1
                f -= 1 if f > 0 else -1
                if e:
                    stack[-1][1] = e
                    stack.append([A, new_a])
                else:
                    stack.pop()
                    if stack and stack[-1][0] == A:
                        stack[-1][1] += new_a
                        if stack[-1][1] == 0:
                            stack.pop()
                    else:
                        stack.append([A, new_a])
                continue
            stack.append([B, f])
            break
    reduced = Word._trusted(tuple(Syllable(b, e) for b, e in stack))
    return BrittonWitness(reduced, tuple(trace))


def replay(u: Word, trace, params: GroupParams = BS23) -> Word:
    w = as_word(u)
    for p in trace:
        w = apply_pinch(w, p, params)
    return w


def is_trivial(u: Word, params: GroupParams = BS23) -> bool:
    return britton_reduce(u, params, record=False).trivial


def words_equal(u: Word, v: Word, params: GroupParams = BS23) -> bool:
    return is_trivial(multiply(as_word(u), invert(as_word(v))), params)


# -- normal form ----------------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    """``(a^s1 b^e1)(a^s2 b^e2)...(a^sk b^ek) a^tail`` with reduced residues.

    ``letters`` holds ``(s, e)`` pairs, ``e`` being UP (+1) or DOWN (-1).
    """

    letters: tuple[tuple[int, int], ...]
    tail: int

    def to_word(self) -> Word:
        return product(self.prefix_word(), Word([(A, self.tail)]))

    def prefix_word(self) -> Word:
        """The letters without the tail, i.e. a coset representative."""
        syls = []
        for s, e in self.letters:
            syls.append((A, s))
            syls.append((B, e))
        return Word(syls)

    def __str__(self):
        return str(self.to_word())

    def to_json(self) -> dict:
        return {
            "letters": [{"s": s, "dir": "up" if e == UP else "down"} for s, e in self.letters],
            "tail": self.tail,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NormalForm":
        letters = tuple((item["s"], UP if item["dir"] == "up" else DOWN) for item in data["letters"])
        return cls(letters, data["tail"])

    @property
    def is_identity(self) -> bool:
        return not self.letters and self.tail == 0


def normal_form(u: Word, params: GroupParams = BS23) -> NormalForm:
    n, m = params.n, params.m
    letters: list[tuple[int, int]] = []
    tail = 0
    for base, exp in as_word(u).syllables:
        if base == A:
            tail += exp
            continue
        e = UP if exp > 0 else DOWN
        for _ in range(abs(exp)):
            if e == UP:
                q, r = divmod(tail, m)
                if r == 0 and letters and letters[-1][1] == DOWN:
                    tail = letters.pop()[0] + n * q
                else:
                    letters.append((r, UP))
                    tail = n * q
            else:
                q, r = divmod(tail, n)
                if r == 0 and letters and letters[-1][1] == UP:
                    tail = letters.pop()[0] + m * q
                else:
                    letters.append((r, DOWN))
                    tail = m * q
    return NormalForm(tuple(letters), tail)


# -- rewriting lemmas used for BS(2,3) ----------------------------------------------


def bezout_coefficients(beta: int, beta_prime: int) -> tuple[int, int]:
    """``(lam, mu)`` with ``lam 2^beta + mu 3^beta' = 1``, ``lam`` least in absolute value."""
    if beta < 1 or beta_prime < 1:
        raise ValueError("beta and beta' must be positive")
    two, three = 2**beta, 3**beta_prime
    lam = pow(two, -1, three)
    if 2 * lam > three:
        lam -= three
    mu = (1 - lam * two) // three
    return lam, mu


def bezout_merge(beta: int, alpha: int, beta_prime: int) -> Word:
    """Rewrite ``b^beta a^alpha b^beta'`` (beta, beta' > 0) as ``a^x b^(beta+beta') a^y``."""
    lam, mu = bezout_coefficients(beta, beta_prime)
    return Word([(A, alpha * lam * 3**beta), (B, beta + beta_prime), (A, alpha * mu * 2**beta_prime)])


def _merge_same_sign_run(u: Word) -> Optional[Word]:
    syls = u.syllables
    for i in range(len(syls) - 2):
        first, mid, last = syls[i], syls[i + 1], syls[i + 2]
        if first.base == B and last.base == B and (first.exp > 0) == (last.exp > 0):
            if first.exp > 0:
                merged = bezout_merge(first.exp, mid.exp, last.exp)
            else:
                merged = invert(bezout_merge(-last.exp, -mid.exp, -first.exp))
            return product(Word(syls[:i]), merged, Word(syls[i + 3:]))
    return None


def minimize_alternating(u: Word, params: GroupParams = BS23) -> Word:
    """Equal word with alternating b-signs and no pinch; rho_a never grows."""
    _require_bs23(params)
    w = britton_reduce(as_word(u), params, record=False).reduced
    while True:
        merged = _merge_same_sign_run(w)
        if merged is None:
            return w
        w = britton_reduce(merged, params, record=False).reduced

