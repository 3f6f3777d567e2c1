from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from zipshift.spec import (
    DuplicateSymbol,
    NonSurjectivePhi,
    ParseError,
    Side,
    Symbol,
    WeightsNotNormalized,
    ZeroWeight,
    derive_measures,
    random_spec,
    validate_spec,
)

from .conftest import specs


def raw(**overrides):
    base = {
        "s_plus": ["0", "1", "2"],
        "s_minus": ["a", "b"],
        "phi": {"0": "a", "1": "a", "2": "b"},
        "p_plus": ["1/2", "1/4", "1/4"],
    }
    base.update(overrides)
    return base


def test_two_to_one_baker_spec_is_valid(e1):
    assert (e1.l, e1.m) == (4, 2)
    assert e1.p_plus == (F(1, 4),) * 4
    assert [e1.phi[s].name for s in e1.s_plus] == ["a", "a", "b", "b"]


def test_uneven_spec_is_valid():
    spec = validate_spec(raw())
    # the three invariants, checked by hand
    assert set(spec.phi.values()) == set(spec.s_minus)
    assert sum(spec.p_plus) == 1
    assert all(p > 0 for p in spec.p_plus)


def test_non_surjective_phi():
    with pytest.raises(NonSurjectivePhi) as err:
        validate_spec(raw(s_plus=["0", "1"], phi={"0": "a", "1": "a"}, p_plus=["1/2", "1/2"]))
    assert err.value.symbol == "b"


@pytest.mark.parametrize(
    "overrides, error",
    [
        ({"p_plus": ["1/2", "1/4", "1/8"]}, WeightsNotNormalized),
        ({"p_plus": ["1/2", "1/2", "0"]}, ZeroWeight),
        ({"p_plus": ["3/4", "1/2", "-1/4"]}, WeightsNotNormalized),
        ({"s_plus": ["0", "0", "2"]}, DuplicateSymbol),
        ({"s_minus": ["a", "a"]}, DuplicateSymbol),
        ({"phi": {"0": "a", "1": "a"}}, ParseError),
        ({"phi": {"0": "a", "1": "a", "2": "c"}}, ParseError),
        ({"p_plus": [0.5, 0.25, 0.25]}, ParseError),
        ({"p_plus": ["1/2", "1/2"]}, ParseError),
        ({"s_plus": []}, ParseError),
    ],
)
def test_invalid_specs(overrides, error):
    with pytest.raises(error):
        validate_spec(raw(**overrides))


def test_symbols_carry_their_side(e1):
    assert all(s.side is Side.POSITIVE for s in e1.s_plus)
    assert all(t.side is Side.NEGATIVE for t in e1.s_minus)
    assert Symbol("a", Side.NEGATIVE) != Symbol("a", Side.POSITIVE)


def test_derive_measures_two_to_one(e1):
    m = derive_measures(e1)
    a, b = e1.s_minus
    assert m.p_minus == {a: F(1, 2), b: F(1, 2)}
    assert list(m.q[a].values()) == [F(1, 2), F(1, 2)]
    assert list(m.q[b].values()) == [F(1, 2), F(1, 2)]


def test_derive_measures_uneven(e2):
    m = derive_measures(e2)
    a, b = e2.s_minus
    s0, s1, s2 = e2.s_plus
    assert m.p_minus == {a: F(3, 4), b: F(1, 4)}
    assert dict(m.q[a]) == {s0: F(2, 3), s1: F(1, 3)}
    assert dict(m.q[b]) == {s2: F(1)}


def test_bijective_phi_reindexes(bijective):
    m = derive_measures(bijective)
    for s, p in zip(bijective.s_plus, bijective.p_plus):
        t = bijective.phi[s]
        assert m.p_minus[t] == p
        assert dict(m.q[t]) == {s: F(1)}


@settings(max_examples=200, deadline=None)
@given(specs())
def test_derived_measure_invariants(spec):
    m = derive_measures(spec)
    assert sum(m.p_minus.values()) == 1
    for t in spec.s_minus:
        assert sum(m.q[t].values()) == 1
        assert m.p_minus[t] == sum(p for s, p in zip(spec.s_plus, spec.p_plus) if spec.phi[s] == t)
    for s, p in zip(spec.s_plus, spec.p_plus):
        t = spec.phi[s]
        assert m.p_minus[t] * m.q[t][s] == p
    assert spec.m <= spec.l


def test_numerators_share_the_common_denominator(e2):
    plus, minus = e2.numerators
    d = e2.common_denominator
    assert [F(a, d) for a in plus] == list(e2.p_plus)
    assert [F(b, d) for b in minus] == [e2.measures.p_minus[t] for t in e2.s_minus]


def test_random_spec_is_reproducible():
    a = random_spec(np.random.default_rng(3), 5, 3)
    b = random_spec(np.random.default_rng(3), 5, 3)
    assert a.to_raw() == b.to_raw()
    assert a.l <= 5 and a.m <= 3
