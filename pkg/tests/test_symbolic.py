import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zipshift.spec import AlphabetMismatch, bernoulli_spec
from zipshift.symbolic import (
    GeneralizedCylinder as Cyl,
    IndexConstraint,
    cylinder_measure,
    measure_preservation_check,
    shift_pullback,
    shift_pushforward,
    shift_word,
)

from .conftest import specs


def sym(spec, name):
    for s in spec.s_plus + spec.s_minus:
        if s.name == name:
            return s
    raise KeyError(name)


def test_whole_space_has_measure_one(e1):
    assert cylinder_measure(e1, Cyl()) == 1


def test_two_index_cylinder(e1):
    c = Cyl([IndexConstraint(0, {sym(e1, "0")}), IndexConstraint(-1, {sym(e1, "a")})])
    assert cylinder_measure(e1, c) == F(1, 4) * F(1, 2)


def test_extended_cylinder_over_fiber(e2):
    a = sym(e2, "a")
    c = Cyl([IndexConstraint(0, set(e2.fiber(a)))])
    assert cylinder_measure(e2, c) == F(1, 2) + F(1, 4)


def test_wrong_side_symbol_is_rejected(e1):
    with pytest.raises(AlphabetMismatch):
        IndexConstraint(-1, {sym(e1, "0")})
    with pytest.raises(AlphabetMismatch):
        Cyl.basic(2, sym(e1, "b"))


def test_pullback_zero_is_identity(e1):
    c = Cyl.word(-2, [sym(e1, "a"), sym(e1, "b"), sym(e1, "3")])
    assert shift_pullback(e1, c, 0) == c
    assert shift_pushforward(e1, c, 0) == c


def test_pullback_across_the_boundary(e1):
    got = shift_pullback(e1, Cyl.basic(-1, sym(e1, "a")), 1)
    assert got == Cyl([IndexConstraint(0, {sym(e1, "0"), sym(e1, "1")})])


def test_pullback_twice_positive_index(e1):
    c = Cyl.basic(1, sym(e1, "3"))
    assert shift_pullback(e1, c, 2) == Cyl.basic(3, sym(e1, "3"))
    assert shift_pullback(e1, shift_pullback(e1, c, 1), 1) == shift_pullback(e1, c, 2)


def test_pushforward_through_phi(e1, e2):
    assert shift_pushforward(e1, Cyl.basic(0, sym(e1, "0")), 1) == Cyl.basic(-1, sym(e1, "a"))
    assert shift_pushforward(e2, Cyl.basic(0, sym(e2, "2")), 1) == Cyl.basic(-1, sym(e2, "b"))


def test_iterated_pullback_matches_single_steps(e2):
    c = Cyl.word(-3, [sym(e2, "a"), sym(e2, "b"), sym(e2, "a"), sym(e2, "1")])
    step = c
    for k in range(1, 6):
        step = shift_pullback(e2, step, 1)
        assert step == shift_pullback(e2, c, k)


def basic_cylinders(spec, lo, hi):
    for i in range(lo, hi + 1):
        for s in spec.alphabet_at(i):
            yield Cyl.basic(i, s)


@settings(max_examples=60, deadline=None)
@given(specs(max_l=5), st.integers(0, 5))
def test_push_after_pull_recovers_cylinder(spec, k):
    for c in basic_cylinders(spec, -4, 4):
        back = shift_pushforward(spec, shift_pullback(spec, c, k), k)
        assert back.contains(c)
        # phi is surjective, so phi(phi^-1(S)) == S and inclusion is equality
        assert back == c


@settings(max_examples=60, deadline=None)
@given(specs(max_l=5), st.integers(0, 6))
def test_pullback_preserves_measure(spec, k):
    for c in basic_cylinders(spec, -5, 3):
        assert cylinder_measure(spec, shift_pullback(spec, c, k)) == cylinder_measure(spec, c)


def test_disjoint_union_is_additive(e2):
    lo, hi = -2, 2
    total = F(0)
    alph = [e2.alphabet_at(i) for i in range(lo, hi)]
    for w in itertools.product(*alph):
        total += cylinder_measure(e2, Cyl.word(lo, w))
    assert total == 1
    # words agreeing at index 0 union to the basic cylinder there
    s0 = sym(e2, "0")
    part = sum(
        (cylinder_measure(e2, Cyl.word(lo, w)) for w in itertools.product(*alph) if w[-lo] == s0),
        F(0),
    )
    assert part == cylinder_measure(e2, Cyl.basic(0, s0))


def test_shift_word(e1):
    word = (sym(e1, "b"), sym(e1, "a"), sym(e1, "2"), sym(e1, "1"))
    shifted, lo = shift_word(e1, word, -2)
    assert lo == -3
    assert shifted == (sym(e1, "b"), sym(e1, "a"), sym(e1, "b"), sym(e1, "1"))
    # a word entirely on one side is just relabelled
    assert shift_word(e1, word[2:], 1) == (word[2:], 0)


@pytest.mark.parametrize("depth", [1, 3])
def test_measure_preservation_check_passes(e1, e2, depth):
    assert measure_preservation_check(e1, depth).passed
    assert measure_preservation_check(e2, depth).passed


def test_measure_preservation_bernoulli():
    v = measure_preservation_check(bernoulli_spec(["1/5", "4/5"]), 4)
    assert v.passed and v.checked > 0


def test_measure_preservation_on_boundary_case(e2):
    a = sym(e2, "a")
    c = Cyl.basic(-1, a)
    assert cylinder_measure(e2, shift_pullback(e2, c, 1)) == F(3, 4) == cylinder_measure(e2, c)
