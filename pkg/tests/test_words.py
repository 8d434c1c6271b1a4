import pytest
from hypothesis import given
from hypothesis import strategies as st

from bs23.words import (
    Word,
    WordSyntaxError,
    commutator,
    conjugate,
    cyclic_reduce,
    format_word,
    height,
    invert,
    parse_word,
    power,
    product,
    rho,
    rho_a,
)
from oracles import letter_string

syllable = st.tuples(st.sampled_from("ab"), st.integers(-9, 9))
words = st.lists(syllable, max_size=12).map(Word)


def test_parse_basic():
    assert str(parse_word("a^2 b a^-1")) == "a^2 b a^-1"
    assert str(parse_word("a b b^-1 a")) == "a^2"
    assert str(parse_word("[b,a]")) == "b a b^-1 a^-1"


def test_parse_shorthand_and_groups():
    assert parse_word("B A b a") == parse_word("b^-1 a^-1 b a")
    assert parse_word("(a b)^2") == parse_word("a b a b")
    assert parse_word("(a b)^-1") == parse_word("b^-1 a^-1")
    assert parse_word("1") == Word.identity()
    assert parse_word("") == Word.identity()
    assert parse_word("a^+3") == Word.a(3)
    assert parse_word("[b a b^-1, a]") == commutator(parse_word("b a B"), Word.a())


@pytest.mark.parametrize("bad", ["a^", "c", "(a b", "[a b]", "a^x", "a)"])
def test_parse_errors_carry_position(bad):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(bad)
    assert info.value.position >= 0


def test_format_identity():
    assert format_word(Word.identity()) == "1"


def test_conjugate_convention():
    # a^b = b a b^-1
    assert conjugate(Word.a(), Word.b()) == parse_word("b a b^-1")


def test_counts():
    u = parse_word("b^2 a b^-1 a^3 b^-3")
    assert rho(u) == -2 == height(u)
    assert rho_a(u) == 6


def test_cyclic_reduce_examples():
    core, g = cyclic_reduce(parse_word("a b a^-1"))
    assert core == Word.b() and g == Word.a()
    core, g = cyclic_reduce(parse_word("b a^2 b^-1"))
    assert core == parse_word("a^2") and g == Word.b()


def test_word_immutable():
    w = Word.a()
    with pytest.raises(AttributeError):
        w.syllables = ()


@given(words)
def test_free_reduction_canonical(u):
    syls = u.syllables
    assert all(e != 0 for _, e in syls)
    assert all(x.base != y.base for x, y in zip(syls, syls[1:]))


@given(words)
def test_roundtrip_format_parse(u):
    assert parse_word(str(u)) == u


@given(words, words)
def test_multiply_matches_letter_concatenation(u, v):
    # free reduction of the flattened letter string
    stack = []
    for ch in letter_string(u) + letter_string(v):
        if stack and stack[-1] == ch.swapcase():
            stack.pop()
        else:
            stack.append(ch)
    assert letter_string(u * v) == "".join(stack)


@given(words)
def test_inverse(u):
    assert u * invert(u) == Word.identity()
    assert invert(invert(u)) == u


@given(words, st.integers(-4, 4))
def test_power(u, k):
    expected = Word.identity()
    for _ in range(abs(k)):
        expected = expected * (u if k > 0 else invert(u))
    assert power(u, k) == expected


@given(words)
def test_cyclic_reduce_conjugates(u):
    core, g = cyclic_reduce(u)
    assert product(g, core, invert(g)) == u
    s = core.syllables
    assert len(s) < 2 or s[0].base != s[-1].base
