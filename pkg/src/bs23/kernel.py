"""Free basis of Ker(phi) and decomposition of kernel elements into it.

Notation: ``c = a^b = b a b^-1`` and ``K = [c, a]``.  A basis element is
``w a^i K^j a^-i w^-1`` with ``i`` in {0, 1}, ``j`` in {-1, 1} and ``w`` the
canonical good representative of an end-essential nepalese path.  One is
picked per sibling component, where besides triplet and twin moves the
residue in front of a final ``b^-1 b^-1`` may be flipped: ``a b^-1 = b^-1 c``
and ``c`` normalises the fiber, so without that merge the two conjugates
coincide and the set would not be free (see ``test_kernel.py``).

Useful facts, all checked by the test-suite:

* ``u_t = a^t c a^-t`` has period 3 in ``t`` because ``c^2 = a^3``, and
  ``a^k K a^-k = u_k u_{k+1}^-1``.  So conjugating K by any a-power lands in
  the free group on the two *fiber generators* ``K`` and ``a K a^-1``.
* ``[c, a^s] = u_0 u_s^-1`` depends only on ``s mod 3``.
* ``b a^x b^-1 a^y b = a^(3p) [c, a^y] a^y b a``          (x = 2p + 1)
* ``b^-1 a^x b a^y b^-1 = (a^-1 b^-1) [c, a^s] (b a) a^-1 b^-1 a^(s+3)``
  with ``s = x + 3p`` and ``y = 2p + 1``.

Every rewrite below is an exact group identity; :func:`decompose` still
re-verifies the final product with the Britton engine.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .britton import DOWN, UP, britton_reduce, is_trivial, normal_form, words_equal
from .endo import KERNEL_GENERATOR, PHI, apply_endo, in_kernel
from .tree import (
    Move,
    SiblingCapExceeded,
    TreeVertex,
    canonical_key,
    classify_path,
    moves_at,
    sibling_component,
)
from .words import A, B, Word, as_word, cyclic_reduce, invert, multiply, product, rho_a

a = Word.a()
c = Word([(B, 1), (A, 1), (B, -1)])


class NonKernel(ValueError):
    def __init__(self, u: Word, image: Word):
        super().__init__(f"{u} is not in Ker(phi); its image reduces to {image}")
        self.word = u
        self.image = image


@dataclass(frozen=True)
class BasisElement:
    conjugator: Word
    offset: int
    sign: int

    def word(self) -> Word:
        shift = product(self.conjugator, Word.a(self.offset))
        return product(shift, KERNEL_GENERATOR if self.sign > 0 else invert(KERNEL_GENERATOR), invert(shift))

    def inverse(self) -> "BasisElement":
        return BasisElement(self.conjugator, self.offset, -self.sign)

    def to_json(self) -> dict:
        return {"conjugator": str(self.conjugator), "i": self.offset, "j": self.sign}

    def __str__(self):
        return f"({self.conjugator}; {self.offset}, {self.sign:+d})"


def denote(factors) -> Word:
    return product(*(f.word() for f in factors))


def invert_factors(factors) -> list[BasisElement]:
    return [f.inverse() for f in reversed(factors)]


def free_reduce(factors) -> list[BasisElement]:
    out: list[BasisElement] = []
    for f in factors:
        if out and out[-1] == f.inverse():
            out.pop()
        else:
            out.append(f)
    return out


# -- fiber --------------------------------------------------------------------


def fiber_generators() -> list[BasisElement]:
    one = Word.identity()
    return [BasisElement(one, i, j) for i in (0, 1) for j in (1, -1)]


def fiber_reduce(k: int, j: int) -> list[tuple[int, int]]:
    """``a^k K^j a^-k`` as a product of fiber generators ``(offset, sign)``."""
    r = k % 3
    if r == 2:
        word = [(1, -1), (0, -1)]
    else:
        word = [(r, 1)]
    if j < 0:
        word = [(i, -s) for i, s in reversed(word)]
    return word


def commutator_with_a_power(s: int) -> list[tuple[int, int]]:
    """``[c, a^s]`` as a product of fiber generators."""
    return {0: [], 1: [(0, 1)], 2: [(0, 1), (1, 1)]}[s % 3]


def shifted(conjugator: Word, gens) -> list[BasisElement]:
    """``g x g^-1`` for each fiber word letter ``x``, conjugators brought to good representatives."""
    nf = normal_form(as_word(conjugator))
    rep = nf.prefix_word()
    out = []
    for i, j in gens:
        out += [BasisElement(rep, i2, j2) for i2, j2 in fiber_reduce(nf.tail + i, j)]
    return out


def normalize(factor) -> list[BasisElement]:
    """Bring ``(word, i, j)`` to basis form: good-representative conjugator, offset in {0, 1}."""
    w, i, j = factor if not isinstance(factor, BasisElement) else (factor.conjugator, factor.offset, factor.sign)
    return shifted(w, [(i, j)])


_MONODROMY: dict[tuple[int, int], list[tuple[int, int]]] = {}


def _fiber_words(max_len: int):
    gens = [(0, 1), (0, -1), (1, 1), (1, -1)]
    yield []
    frontier = [[]]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for g in gens:
                if w and w[-1] == (g[0], -g[1]):
                    continue
                nxt.append(w + [g])
        yield from nxt
        frontier = nxt


def monodromy(gen: tuple[int, int], max_len: int = 4) -> list[tuple[int, int]]:
    """``c g c^-1`` for a fiber generator ``g``, found by bounded search in the fiber."""
    if gen not in _MONODROMY:
        target = product(c, BasisElement(Word.identity(), *gen).word(), invert(c))
        for w in _fiber_words(max_len):
            if words_equal(denote(BasisElement(Word.identity(), i, j) for i, j in w), target):
                _MONODROMY[gen] = w
                break
        else:
            raise RuntimeError(f"no fiber word of length <= {max_len} for c {gen} c^-1")
    return _MONODROMY[gen]


# -- extraction identities --------------------------------------------------------


def _extract(x0: int, d: int, x1: int, x2: int) -> tuple[Word, int, Word]:
    """Split ``a^x0 b^d a^x1 b^-d a^x2 b^d`` as ``g [c, a^t] g^-1 R``; returns ``(g, t, R)``.

    Needs the middle stable letter to be a run of length one with no pinch on
    either side, i.e. the up-down pair carries an odd a-power and the
    down-up pair an a-power prime to 3.
    """
    if d == UP:
        p = (x1 - 1) // 2
        g = Word.a(x0 + 3 * p)
        return g, x2, Word([(A, x0 + 3 * p + x2), (B, 1), (A, 1)])
    p = (x2 - 1) // 2
    s = x1 + 3 * p
    return Word([(A, x0 - 1), (B, -1)]), s, Word([(A, x0 - 1), (B, -1), (A, s + 3)])


def _cyclic_letters(w: Word) -> list[tuple[int, int]]:
    """``w`` (ending with a stable letter) as pairs ``(a-power before, direction)``."""
    out = []
    pending = 0
    for base, exp in w.syllables:
        if base == A:
            pending += exp
            continue
        d = UP if exp > 0 else DOWN
        for _ in range(abs(exp)):
            out.append((pending, d))
            pending = 0
    return out


def _letters_word(letters) -> Word:
    return Word(itertools.chain.from_iterable(((A, x), (B, d)) for x, d in letters))


def _cyclic_pinch(letters) -> bool:
    if len(letters) < 2:
        return False
    (x, d), (_, d_prev) = letters[0], letters[-1]
    if d_prev == d:
        return False
    return x % 2 == 0 if d_prev == UP else x % 3 == 0


def conjugate_factorize(u: Word, trace: Optional[list] = None) -> list[BasisElement]:
    """Write a kernel element as a product of conjugates of ``K^(+-1)``.

    Each extraction rewrites three stable letters of the remainder as one;
    ``trace`` (if given) collects ``(before, rewritten, reduced)`` stable-letter
    counts per extraction, the last one after free cancellation.
    """
    u = as_word(u)
    if not in_kernel(u):
        raise NonKernel(u, britton_reduce(apply_endo(u, PHI), record=False).reduced)
    factors: list[BasisElement] = []
    conj = Word.identity()
    w = u
    while True:
        w = britton_reduce(w, record=False).reduced
        core, g = cyclic_reduce(w)
        conj, w = multiply(conj, g), core
        if len(w.syllables) > 1 and w.syllables[-1].base == A:
            # w = X a^x is conjugate to a^x X
            last = Word([w.syllables[-1]])
            conj, w = multiply(conj, invert(last)), multiply(last, Word(w.syllables[:-1]))
        letters = _cyclic_letters(w)
        if not letters:
            if w:
                raise NonKernel(u, britton_reduce(apply_endo(u, PHI), record=False).reduced)
            return factors
        if _cyclic_pinch(letters):
            x0, d0 = letters[0]
            head = Word([(A, x0), (B, d0)])
            conj, w = multiply(conj, head), _letters_word(letters[1:] + letters[:1])
            continue
        n = len(letters)
        best = None
        for i in range(n):
            d_prev, d, d_next = letters[i - 1][1], letters[i][1], letters[(i + 1) % n][1]
            if n >= 3 and d_prev == d_next == -d:
                # prefer the extraction whose conjugator is shortest
                start = (i - 1) % n
                rot = letters[start:] + letters[:start]
                head = multiply(conj, _letters_word(letters[:start]))
                g, t, rest_head = _extract(*rot[0], rot[1][0], rot[2][0])
                h = multiply(head, g)
                key = (rho_a(TreeVertex.of(h).representative()), len(str(h)))
                if best is None or key < best[0]:
                    best = (key, rot, head, h, t, rest_head)
        if best is None:
            raise NonKernel(u, britton_reduce(apply_endo(u, PHI), record=False).reduced)
        _, rot, conj, h, t, rest_head = best
        before = len(rot)
        factors += shifted(h, commutator_with_a_power(t))
        tail = _letters_word(rot[3:])
        w = multiply(rest_head, tail)
        if trace is not None:
            trace.append((before, rho_a(rest_head) + rho_a(tail), rho_a(w)))


# -- conjugator reductions ------------------------------------------------------------


def _as_factor(factor):
    if isinstance(factor, BasisElement):
        return factor.conjugator, factor.offset, factor.sign
    w, i, j = factor
    return as_word(w), i, j


def _pieces(factor):
    """``(letters, k, j)`` with the factor equal to ``rep a^k K^j a^-k rep^-1``."""
    w, i, j = _as_factor(factor)
    nf = normal_form(w)
    return nf.letters, nf.tail + i, j


def _prefix(letters, upto: int, extra_a: int = 0) -> Word:
    return product(_letters_word([(s, e) for s, e in letters[:upto]]), Word.a(extra_a))


def _main(rep: Word, k: int, j: int) -> list[BasisElement]:
    return shifted(rep, [(k, j)])


def swiss_reduce(factor) -> list[BasisElement]:
    """Split off the first up-down-up or down-up-down pattern of the conjugator.

    Returns ``E, F', E^-1`` where ``E`` has conjugators ending before the pattern
    and ``F'`` is the factor conjugated by a path two steps shorter.
    """
    letters, k, j = _pieces(factor)
    dirs = [e for _, e in letters]
    for p in range(len(dirs) - 2):
        if dirs[p] == dirs[p + 2] == -dirs[p + 1]:
            break
    else:
        raise ValueError("conjugator path is not swiss")
    (x0, d), (x1, _), (x2, _) = letters[p], letters[p + 1], letters[p + 2]
    w1 = _prefix(letters, p)
    w2 = _prefix(letters, len(letters))  # placeholder replaced below
    w2 = _letters_word([(s, e) for s, e in letters[p + 3:]])
    g, t, rest = _extract(x0, d, x1, x2)
    e_part = shifted(multiply(w1, g), commutator_with_a_power(t))
    main = _main(product(w1, rest, w2), k, j)
    return e_part + main + invert_factors(e_part)


def end_reduce(factor) -> list[BasisElement]:
    """Drop a trailing tip ``b a b^-1`` by conjugating within the fiber."""
    letters, k, j = _pieces(factor)
    if len(letters) < 2 or not (letters[-2][1] == UP and letters[-1][1] == DOWN):
        raise ValueError("conjugator path is end-essential")
    w1 = _prefix(letters, len(letters) - 2, letters[-2][0])
    inner = []
    for gen in fiber_reduce(k, j):
        inner += monodromy(gen)
    return shifted(w1, inner)


_SIBLINGS: dict[TreeVertex, tuple[TreeVertex, Optional[Move]]] = {}


def _route_table(v: TreeVertex, cap: int) -> None:
    comp = sibling_component(v, cap, flips=True)
    if comp.truncated:
        raise SiblingCapExceeded(v, cap)
    canon = comp.canonical
    members = set(comp.members)
    _SIBLINGS[canon] = (canon, None)
    queue = deque([canon])
    while queue:
        x = queue.popleft()
        x_rep = x.representative()
        for move in moves_at(x, flips=True):
            y = TreeVertex.of(move.word(x_rep))
            if y in _SIBLINGS or y not in members:
                continue
            y_rep = y.representative()
            back = next(m for m in moves_at(y, flips=True) if TreeVertex.of(m.word(y_rep)) == x)
            _SIBLINGS[y] = (canon, back)
            queue.append(y)


def sibling_step(v: TreeVertex, cap: int = 10_000) -> Optional[Move]:
    """Move from ``v`` one step closer to its canonical relative, or None if ``v`` is canonical."""
    if v not in _SIBLINGS:
        _route_table(v, cap)
    return _SIBLINGS[v][1]


def canonical_relative(v: TreeVertex, cap: int = 10_000) -> TreeVertex:
    if v not in _SIBLINGS:
        _route_table(v, cap)
    return _SIBLINGS[v][0]


def clear_sibling_cache() -> None:
    _SIBLINGS.clear()


def sibling_move_factors(factor, move: Move) -> list[BasisElement]:
    """Rewrite the factor through one triplet, twin or flip move: ``E, F(sibling), E^-1``."""
    letters, k, j = _pieces(factor)
    rep = _letters_word(letters)
    if move.kind == "flip":
        # w a b^-1 = w b^-1 c, and conjugating the fiber by c is an involution since c^2 = a^3
        inner = []
        for gen in fiber_reduce(k, j):
            inner += monodromy(gen)
        return shifted(move.word(rep), inner)
    p = move.index
    w1 = _prefix(letters, p, letters[p][0])
    if move.kind == "triplet+":
        e_part = shifted(w1, [(0, 1)])
    elif move.kind == "triplet-":
        e_part = shifted(multiply(w1, Word.a(-1)), [(0, -1)])
    else:
        e_part = shifted(product(w1, Word([(A, -1), (B, -1)])), commutator_with_a_power(letters[p + 1][0]))
    main = _main(move.word(rep), k, j)
    return e_part + main + invert_factors(e_part)


def sibling_reduce(factor, cap: int = 10_000) -> list[BasisElement]:
    letters, _, _ = _pieces(factor)
    move = sibling_step(TreeVertex(letters), cap)
    if move is None:
        raise ValueError("conjugator is already the canonical relative")
    return sibling_move_factors(factor, move)


# -- full pipeline -------------------------------------------------------------------


@dataclass
class Decomposition:
    factors: list[BasisElement]
    certificate: bool

    def to_json(self) -> dict:
        return {"factors": [f.to_json() for f in self.factors], "certified": self.certificate}


class DecompositionCapExceeded(SiblingCapExceeded):
    def __init__(self, err: SiblingCapExceeded, partial: list[BasisElement]):
        super().__init__(err.start, err.cap)
        self.partial = partial


def reduce_factor(f: BasisElement, cap: int = 10_000, memo: Optional[dict] = None) -> list[BasisElement]:
    """Rewrite one factor until its conjugator is a canonical relative."""
    if memo is None:
        memo = {}
    if f in memo:
        return memo[f]
    if f.inverse() in memo:
        return invert_factors(memo[f.inverse()])
    v = TreeVertex.of(f.conjugator)
    cls = classify_path(v)
    if cls.swiss:
        pieces = swiss_reduce(f)
    elif not cls.end_essential:
        pieces = end_reduce(f)
    elif sibling_step(v, cap) is not None:
        pieces = sibling_reduce(f, cap)
    else:
        memo[f] = [f]
        return [f]
    out: list[BasisElement] = []
    for piece in pieces:
        out += reduce_factor(piece, cap, memo)
    out = free_reduce(out)
    memo[f] = out
    return out


def decompose(u: Word, cap: int = 10_000) -> Decomposition:
    u = as_word(u)
    factors = conjugate_factorize(u)
    out: list[BasisElement] = []
    memo: dict = {}
    for f in factors:
        try:
            out += reduce_factor(f, cap, memo)
        except SiblingCapExceeded as err:
            raise DecompositionCapExceeded(err, free_reduce(out)) from None
    out = free_reduce(out)
    return Decomposition(out, words_equal(denote(out), u))


def is_basis_conjugator(w: Word, cap: int = 10_000) -> bool:
    v = TreeVertex.of(w)
    if as_word(w) != v.representative():
        return False
    cls = classify_path(v)
    return cls.nepalese and cls.end_essential and canonical_relative(v, cap) == v


# -- freeness --------------------------------------------------------------------------


def random_path(rng: random.Random, max_len: int) -> TreeVertex:
    v = TreeVertex.base()
    for _ in range(rng.randint(0, max_len)):
        options = [w for w in v.neighbors() if len(w.address) > len(v.address)]
        v = rng.choice(options)
    return v


def random_basis_element(rng: random.Random, conj_bound: int, cap: int = 10_000) -> BasisElement:
    while True:
        v = random_path(rng, conj_bound)
        cls = classify_path(v)
        if cls.nepalese and cls.end_essential:
            break
    rep = canonical_relative(v, cap).representative()
    return BasisElement(rep, rng.randint(0, 1), rng.choice((1, -1)))


def random_reduced_expression(rng: random.Random, max_factors: int, conj_bound: int) -> list[BasisElement]:
    out: list[BasisElement] = []
    target = rng.randint(1, max_factors)
    while len(out) < target:
        f = random_basis_element(rng, conj_bound)
        if out and out[-1] == f.inverse():
            continue
        out.append(f)
    return out


@dataclass
class FreenessReport:
    trials: int
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "checks": [
                {
                    "name": f"{self.trials} reduced basis products are nontrivial",
                    "pass": self.passed,
                    **({"witness": self.violations[0]} if self.violations else {}),
                }
            ]
        }


def freeness_probe(trials: int, max_factors: int, conj_bound: int, seed: int = 0) -> FreenessReport:
    rng = random.Random(seed)
    violations = []
    for _ in range(trials):
        expr = random_reduced_expression(rng, max_factors, conj_bound)
        if is_trivial(denote(expr)):
            violations.append(" ".join(str(f) for f in expr))
    return FreenessReport(trials, violations)


def fiber_exhaustive_check(max_len: int = 8) -> list[list[tuple[int, int]]]:
    """Reduced nonempty fiber words up to ``max_len`` letters that are trivial (expected: none)."""
    one = Word.identity()
    bad = []
    for w in _fiber_words(max_len):
        if w and is_trivial(denote(BasisElement(one, i, j) for i, j in w)):
            bad.append(w)
    return bad


def basis_elements(depth: int, cap: int = 10_000) -> list[BasisElement]:
    """All basis elements whose conjugator path has at most ``depth`` steps."""
    reps = set()
    frontier = [TreeVertex.base()]
    seen = {TreeVertex.base()}
    for _ in range(depth + 1):
        nxt = []
        for v in frontier:
            cls = classify_path(v)
            if cls.nepalese and cls.end_essential:
                reps.add(canonical_relative(v, cap))
            for w in v.neighbors():
                if w not in seen and len(w.address) > len(v.address):
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    out = []
    for v in sorted(reps, key=lambda x: (len(x.address), canonical_key(x))):
        rep = v.representative()
        out += [BasisElement(rep, i, j) for i in (0, 1) for j in (1, -1)]
    return out
