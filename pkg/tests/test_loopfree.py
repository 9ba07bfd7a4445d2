from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from closed_forms import loop_closed_form
from quivercount.arith import ONE, Q, ZERO, Polynomial, RationalFunction
from quivercount.counting import CountingContext, certify_polynomial
from quivercount.loopfree import (
    LoopSeries,
    free_algebra_poly,
    kac_euler_prediction,
    partition_inverse,
    untwist,
)
from quivercount.quiver import Quiver, euler_form
from quivercount.series import TwistedSeries, invert


def test_untwist():
    assert untwist(1, 5) == ONE
    assert untwist(3, 0) == ONE
    assert untwist(3, 2) == RationalFunction.q_power(-2)
    assert untwist(2, 3) == RationalFunction.q_power(-3)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("d,e", [(1, 1), (2, 3), (4, 2)])
def test_untwist_turns_twist_into_ordinary_product(m, d, e):
    # q^{-<d,e>} u(d) u(e) = u(d+e) with u the untwist factor
    lhs = RationalFunction.q_power(-euler_form(Quiver.loop(m), (d,), (e,))) * untwist(m, d).inverse() * untwist(m, e).inverse()
    assert lhs == untwist(m, d + e).inverse()


def _divide_directly(coeffs):
    out = [ONE]
    for d in range(1, len(coeffs)):
        out.append(-sum((coeffs[k] * out[d - k] for k in range(1, d + 1)), ZERO))
    return out


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=6))
def test_partition_inverse_matches_division(tail):
    coeffs = [ONE] + [RationalFunction(c) for c in tail]
    a = LoopSeries(1, len(tail), tuple(coeffs))
    assert list(partition_inverse(a).coeffs) == _divide_directly(coeffs)


def test_partition_inverse_degree_two():
    a1, a2 = Q + 1, Q ** 3
    inv = partition_inverse(LoopSeries(1, 2, (ONE, a1, a2)))
    assert inv.coeffs[2] == a1 * a1 - a2
    with pytest.raises(ValueError):
        partition_inverse(LoopSeries(1, 1, (Q, ONE)))


def test_partition_inverse_agrees_with_twisted_inverse():
    m = 3
    q = Quiver.loop(m)
    coeffs = {(d,): Q ** (d + 1) - d for d in range(1, 5)}
    coeffs[(0,)] = ONE
    twisted = invert(TwistedSeries(q, (4,), coeffs))
    ordinary = partition_inverse(
        LoopSeries(m, 4, tuple(coeffs[(d,)] * untwist(m, d) for d in range(5)))
    )
    for d in range(5):
        assert twisted[(d,)] == ordinary.coeffs[d] * untwist(m, d).inverse()


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("d", [1, 2, 3])
def test_closed_forms(d, m):
    assert free_algebra_poly(d, m) == loop_closed_form(d, m)


def test_closed_form_examples():
    assert free_algebra_poly(2, 1).is_zero()
    assert free_algebra_poly(2, 2) == Q ** 5 - Q ** 4
    assert free_algebra_poly(2, 3) == Q ** 9 - Q ** 6
    expected = Polynomial([0] * 10 + [1, 0, -1, -1, -1, -1, 1, 1, 0, 1])
    assert certify_polynomial(free_algebra_poly(3, 3)) == expected
    with pytest.raises(ValueError):
        free_algebra_poly(0, 2)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_two_paths_agree(m, d):
    general = CountingContext(Quiver.loop(m), (0,), (d,)).stable_count((d,))
    assert free_algebra_poly(d, m) == general


def test_kac_prediction():
    assert kac_euler_prediction(2, 2) == 1
    assert kac_euler_prediction(3, 1) == 0
    assert kac_euler_prediction(2, 3) == 3
    assert kac_euler_prediction(6, 2) == 9
    with pytest.raises(ValueError):
        kac_euler_prediction(0, 2)
