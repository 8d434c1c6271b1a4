"""The epimorphisms a -> a^2 (phi) and a -> a^3 (phi'), both fixing b, and their kernels."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .britton import britton_reduce, is_trivial, words_equal
from .words import A, B, Word, as_word, commutator, conjugate, invert, parse_word, product

a = Word.a()
b = Word.b()
# a^b = b a b^-1 throughout
A_B = conjugate(a, b)
KERNEL_GENERATOR = commutator(A_B, a)


@dataclass(frozen=True)
class EndoSpec:
    a_image_exponent: int = 2
    power: int = 1

    def __post_init__(self):
        if self.a_image_exponent < 1 or self.power < 1:
            raise ValueError("exponent and power must be positive")

    @property
    def scale(self) -> int:
        return self.a_image_exponent**self.power


PHI = EndoSpec(2, 1)
PHI_PRIME = EndoSpec(3, 1)


def phi(power: int = 1) -> EndoSpec:
    return EndoSpec(2, power)


def apply_endo(u: Word, e: EndoSpec = PHI) -> Word:
    s = e.scale
    return Word((base, exp * s if base == A else exp) for base, exp in as_word(u).syllables)


def in_kernel(u: Word, e: EndoSpec = PHI) -> bool:
    return is_trivial(apply_endo(u, e))


def kernel_witness(u: Word, e: EndoSpec = PHI) -> Word:
    """Pinch-reduced phi-image; empty iff ``u`` is in the kernel."""
    return britton_reduce(apply_endo(u, e), record=False).reduced


def b_conjugate_of_a(m: int) -> Word:
    return product(Word.b(m), a, Word.b(-m))


def kernel_normal_generators(n: int) -> list[Word]:
    """``[b^m a b^-m, a]`` for ``0 < m <= n``: normal generators of Ker(phi^n)."""
    if n < 1:
        raise ValueError("n must be positive")
    return [commutator(b_conjugate_of_a(m), a) for m in range(1, n + 1)]


@dataclass
class Check:
    name: str
    passed: bool
    witness: Optional[str] = None

    def to_json(self) -> dict:
        out = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks]}


COROLLARY_IDENTITIES = [
    ("[a^b,a^-1] = a^-1 [a^b,a]^-1 a", "[b a B, A]", "A ([b a B, a])^-1 a"),
    ("[a^b,a^2] = [a^b,a] a [a^b,a] a^-1", "[b a B, a^2]", "[b a B, a] a [b a B, a] A"),
    (
        "[a^b,a^-2] = a^-1 [a^b,a]^-1 a^-1 [a^b,a]^-1 a^2",
        "[b a B, a^-2]",
        "A ([b a B, a])^-1 A ([b a B, a])^-1 a^2",
    ),
]


def check_corollary_identities() -> Report:
    checks = []
    for name, lhs, rhs in COROLLARY_IDENTITIES:
        ok = words_equal(parse_word(lhs), parse_word(rhs))
        checks.append(Check(name, ok, None if ok else str(parse_word(lhs) * ~parse_word(rhs))))
    return Report(checks)


def limit_commutator_order(m: int, k: int, cap: int) -> Optional[int]:
    """Least ``N <= cap`` with ``[b^m a b^-m, b^k a b^-k]`` in Ker(phi^N)."""
    if min(m, k, cap) < 1:
        raise ValueError("m, k and cap must be positive")
    w = commutator(b_conjugate_of_a(m), b_conjugate_of_a(k))
    for n in range(1, cap + 1):
        if in_kernel(w, phi(n)):
            return n
    return None


def tietze_relator(lam: Word, mu: Word) -> tuple[Word, Word]:
    """Both sides of ``lam^2 = mu lam mu^-1 lam^-1 mu lam mu^-1``."""
    lam, mu = as_word(lam), as_word(mu)
    rhs = product(mu, lam, invert(mu), invert(lam), mu, lam, invert(mu))
    return product(lam, lam), rhs


def tietze_relator_check(lam: Word, mu: Word) -> bool:
    lhs, rhs = tietze_relator(lam, mu)
    return words_equal(lhs, rhs)


def random_word(rng: random.Random, max_syllables: int, max_exp: int = 9) -> Word:
    """Random freely reduced word with up to ``max_syllables`` syllables."""
    length = rng.randint(0, max_syllables)
    syls = []
    base = rng.choice((A, B))
    for _ in range(length):
        exp = rng.choice([e for e in range(-max_exp, max_exp + 1) if e])
        syls.append((base, exp))
        base = B if base == A else A
    return Word(syls)


def random_kernel_element(rng: random.Random, factors: int = 4, conj_syllables: int = 6, max_exp: int = 3) -> Word:
    """Product of conjugates of [a^b,a]^(+-1) by random words."""
    w = Word.identity()
    for _ in range(rng.randint(1, factors)):
        g = random_word(rng, conj_syllables, max_exp)
        gen = KERNEL_GENERATOR if rng.random() < 0.5 else invert(KERNEL_GENERATOR)
        w = w * conjugate(gen, g)
    return w


def same_kernel_probe(sample_count: int, max_len: int, seed: int = 0, kernel_samples: int = 0) -> Report:
    """Compare membership in Ker(phi) and Ker(phi') on random and constructed words."""
    rng = random.Random(seed)
    checks = []
    disagreements = []
    both = 0
    samples = [random_word(rng, max_len) for _ in range(sample_count)]
    samples += [random_kernel_element(rng) for _ in range(kernel_samples)]
    for w in samples:
        k1, k2 = in_kernel(w, PHI), in_kernel(w, PHI_PRIME)
        both += k1 and k2
        if k1 != k2:
            disagreements.append(str(w))
    checks.append(Check(f"agreement on {len(samples)} samples ({both} in both kernels)", not disagreements,
                        disagreements[0] if disagreements else None))
    return Report(checks)


def homomorphism_probe(pairs: int, max_len: int, seed: int = 0, e: EndoSpec = PHI) -> Report:
    rng = random.Random(seed)
    bad = None
    for _ in range(pairs):
        u, v = random_word(rng, max_len), random_word(rng, max_len)
        if not words_equal(apply_endo(u * v, e), apply_endo(u, e) * apply_endo(v, e)):
            bad = f"{u} ; {v}"
            break
    return Report([Check(f"phi(uv) = phi(u)phi(v) on {pairs} pairs", bad is None, bad)])
