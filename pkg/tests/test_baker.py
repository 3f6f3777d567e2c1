import math

import numpy as np
import pytest

from zipshift.baker import (
    BakerSystem,
    BoundaryPoint,
    Point,
    baker_apply,
    baker_preimages,
    chunk_rng,
    empirical_block_entropy,
    empirical_folding_entropy,
    encode,
)
from zipshift.spec import BudgetExceeded, bernoulli_spec
from zipshift.symbolic import shift_word


def names(word):
    return [s.name for s in word]


@pytest.fixture
def b1(e1):
    return BakerSystem(e1)


@pytest.fixture
def b2(e2):
    return BakerSystem(e2)


def test_geometry(b1, b2):
    assert sum(b1.strip_width) == 1 and sum(b1.band_height) == 1
    assert [float(v) for v in b2.strip_left] == [0.0, 0.5, 0.75]
    assert [float(v) for v in b2.band_bottom] == [0.0, 0.75]


def test_apply_by_hand(b1):
    # strip 0: left 0, width 1/4, phi -> a with bottom 0, height 1/2
    p = baker_apply(b1, Point(0.1, 0.3))
    assert (p.x, p.y) == pytest.approx((0.4, 0.15), abs=1e-15)
    # strip 2: left 1/2, phi -> b with bottom 1/2
    p = baker_apply(b1, Point(0.6, 0.5))
    assert (p.x, p.y) == pytest.approx((0.4, 0.75), abs=1e-15)


def test_single_symbol_system_is_identity():
    b = BakerSystem(bernoulli_spec(["1"]))
    for x, y in [(0.0, 0.0), (0.3, 0.7), (0.999, 0.5)]:
        assert baker_apply(b, Point(x, y)) == Point(x, y)


def test_preimages_by_hand(b1):
    pre = baker_preimages(b1, Point(0.4, 0.15))
    assert len(pre) == 2
    assert (pre[0].x, pre[0].y) == pytest.approx((0.1, 0.3), abs=1e-15)
    assert (pre[1].x, pre[1].y) == pytest.approx((0.35, 0.3), abs=1e-15)


def test_preimage_counts(b2):
    assert len(baker_preimages(b2, Point(0.3, 0.9))) == 1
    assert len(baker_preimages(b2, Point(0.3, 0.2))) == 2
    bij = BakerSystem(bernoulli_spec(["1/6", "1/3", "1/2"]))
    rng = np.random.default_rng(1)
    for x, y in rng.random((200, 2)):
        assert len(baker_preimages(bij, Point(x, y))) == 1


@pytest.mark.parametrize("fixture", ["b1", "b2"])
def test_preimages_round_trip(request, fixture):
    b = request.getfixturevalue(fixture)
    rng = np.random.default_rng(5)
    x, y = rng.random(20000), rng.random(20000)
    owner, px, py, strips = b.preimage_arrays(x, y)
    fx, fy = b.apply_arrays(px, py)
    assert np.max(np.abs(fx - x[owner])) <= 1e-12
    assert np.max(np.abs(fy - y[owner])) <= 1e-12
    assert np.array_equal(b.strip_of(px), strips)
    fiber_sizes = np.bincount(b.spec.phi_index, minlength=b.spec.m)
    assert np.array_equal(np.bincount(owner, minlength=len(x)), fiber_sizes[b.band_of(y)])


def test_encode_by_hand(b1):
    p = Point(0.1, 0.3)
    assert names(encode(b1, p, 0, 1)) == ["0"]
    # forward: 0.1 -> 0.4 -> 0.6, strips 0, 1, 2; backward: 0.3 in a, then 0.6 in b
    assert names(encode(b1, p, 2, 3)) == ["b", "a", "0", "1", "2"]


def test_encode_boundary(b1):
    with pytest.raises(BoundaryPoint) as err:
        encode(b1, Point(0.25, 0.3), 0, 2)
    assert err.value.coordinate == "x" and err.value.depth == 0
    with pytest.raises(BoundaryPoint) as err:
        encode(b1, Point(0.1, 0.5), 1, 1)
    assert err.value.coordinate == "y"
    # 0.125 -> 0.5 lands on a boundary only at the second forward step
    with pytest.raises(BoundaryPoint) as err:
        encode(b1, Point(0.125, 0.3), 0, 3)
    assert err.value.depth == 1
    assert names(encode(b1, Point(0.125, 0.3), 0, 1)) == ["0"]


@pytest.mark.parametrize("fixture", ["b1", "b2"])
def test_semiconjugacy_sample(request, fixture):
    b = request.getfixturevalue(fixture)
    rng = np.random.default_rng(11)
    for x, y in rng.random((500, 2)):
        p = Point(x, y)
        word = encode(b, p, 3, 6)
        expected, lo = shift_word(b.spec, word, -3)
        assert lo == -4
        assert encode(b, baker_apply(b, p), 4, 5) == expected


@pytest.mark.parametrize("fixture", ["b1", "b2"])
def test_measure_preservation_statistical(request, fixture):
    b = request.getfixturevalue(fixture)
    n = 200_000
    rng = chunk_rng(99, 0)
    x, y = rng.random(n), rng.random(n)
    fx, fy = b.apply_arrays(x, y)
    for s in range(b.spec.l):
        for t in range(b.spec.m):
            area = float(b.strip_width[s] * b.band_height[t])
            inside = (b.strip_of(fx) == s) & (b.band_of(fy) == t)
            se = math.sqrt(area * (1 - area) / n)
            assert abs(inside.mean() - area) <= 4 * se


def test_cylinder_frequencies(b2):
    n = 200_000
    x = chunk_rng(7, 0).random(n)
    digits = b2.forward_digits(x, 3)
    codes = digits @ np.array([9, 3, 1])
    freq = np.bincount(codes, minlength=27) / n
    p = [float(w) for w in b2.spec.p_plus]
    for code in range(27):
        a, r = divmod(code, 9)
        bb, c = divmod(r, 3)
        target = p[a] * p[bb] * p[c]
        assert abs(freq[code] - target) <= 4 * math.sqrt(target * (1 - target) / n)


def test_block_entropy_converges(b1, b2):
    one = empirical_block_entropy(b1, 200_000, 1, seed=3)
    assert abs(one.value - math.log(4)) <= 1e-3
    est = empirical_block_entropy(b2, 1_000_000, 4, seed=2024)
    assert abs(est.value - 1.5 * math.log(2)) <= 0.02
    assert est.stderr > 0


def test_block_entropy_degenerate():
    b = BakerSystem(bernoulli_spec(["1"]))
    est = empirical_block_entropy(b, 1000, 3, seed=1)
    assert est.value == 0.0 and est.stderr == 0.0


def test_block_entropy_budget(b1):
    with pytest.raises(BudgetExceeded):
        empirical_block_entropy(b1, 10, 12, seed=0, budget=1000)


def test_folding_estimates(b1, b2):
    assert empirical_folding_entropy(BakerSystem(bernoulli_spec(["1/2", "1/2"])), 5000, 1).value == 0.0
    assert abs(empirical_folding_entropy(b1, 100_000, 5).value - math.log(2)) <= 0.01
    f2 = 0.75 * (math.log(3) - (2 / 3) * math.log(2))
    assert abs(empirical_folding_entropy(b2, 1_000_000, 5).value - f2) <= 0.005


def test_estimates_do_not_depend_on_workers(b2):
    a = empirical_block_entropy(b2, 300_000, 3, seed=8, workers=1)
    b = empirical_block_entropy(b2, 300_000, 3, seed=8, workers=4)
    assert a == b
    assert empirical_folding_entropy(b2, 300_000, 8, workers=1) == empirical_folding_entropy(b2, 300_000, 8, workers=3)


def test_point_validation():
    with pytest.raises(ValueError):
        Point(1.0, 0.2)
    with pytest.raises(ValueError):
        Point(0.2, -0.1)
