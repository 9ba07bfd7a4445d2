from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivercount.arith import ONE, Q, Polynomial, RationalFunction
from quivercount.counting import (
    CertificationError,
    CountingContext,
    TypeFunction,
    certify_polynomial,
    counting_polynomial,
    enumerate_type_functions,
    euler_characteristic,
    gl_order,
    identity_check,
    rd_gd_ratio,
    type_summand,
)
from quivercount.quiver import Quiver, enumerate_below, total_dim


def test_gl_order():
    assert gl_order(0) == Polynomial([1])
    assert gl_order(1) == Q.num - 1
    assert gl_order(2)(2) == 6
    assert gl_order(3)(2) == 168


def test_rd_gd_ratio():
    assert rd_gd_ratio(Quiver.loop(1), (1,)) == Q / (Q - 1)
    assert rd_gd_ratio(Quiver.kronecker(2), (1, 1)) == Q ** 2 / (Q - 1) ** 2
    assert rd_gd_ratio(Quiver.loop(2), (0,)) == ONE


def test_ss_ratio_kronecker():
    ctx = CountingContext(Quiver.kronecker(2), (1, 0), (1, 1))
    # (1,1) is unstable exactly when both maps vanish
    assert ctx.ss_ratio((1, 1)) == (Q + 1) / (Q - 1)
    assert ctx.ss_ratio((0, 0)) == ONE


def test_trivial_stability_ss_is_everything():
    q = Quiver(("a", "b"), (("a", "b"), ("b", "a"), ("a", "a")))
    ctx = CountingContext(q, (0, 0), (2, 2))
    for e in enumerate_below((2, 2)):
        assert ctx.ss_ratio(e) == rd_gd_ratio(q, e)


def test_beta_examples():
    ctx = CountingContext(Quiver.loop(1), (0,), (2,))
    # 1 + sum q^d/|GL_d| t^d has inverse 1 - ... ; check degree 1
    assert ctx.beta((1,)) == -Q / (Q - 1)
    k = CountingContext(Quiver.kronecker(2), (1, 0), (1, 1))
    assert k.beta((1, 1)) == -(Q + 1) / (Q - 1)
    with pytest.raises(ValueError):
        k.beta((1, 0))


def test_type_function_enumeration():
    loop = CountingContext(Quiver.loop(1), (0,), (2,))
    xis = enumerate_type_functions(loop, (2,))
    # (2,1,1), (2,2,1), (1,1,2), 2*(1,1,1)
    assert len(xis) == 4
    assert all(xi.dim == (2,) for xi in xis)
    k = CountingContext(Quiver.kronecker(2), (1, 0), (1, 1))
    assert [xi.as_dict() for xi in enumerate_type_functions(k, (1, 1))] == [{((1, 1), 1, 1): 1}]


def test_type_function_validation():
    with pytest.raises(ValueError):
        TypeFunction.from_dict({((1, 2), 2, 1): 1})
    xi = TypeFunction.from_dict({((1, 1), 1, 2): 1, ((1, 1), 1, 1): 0})
    assert xi.dim == (2, 2) and xi.support == ((((1, 1), 1, 2), 1),)


def test_s_from_a_degree_two():
    for m in (1, 2, 3):
        ctx = CountingContext(Quiver.loop(m), (0,), (2,))
        ctx.stable_count((1,))
        assert ctx.memo_a[(1,)] == Q ** m
        assert ctx.s_from_a((2,), 2) == (Q ** (2 * m) - Q ** m) * Fraction(1, 2)
        assert ctx.s_from_a((1,), 2).is_zero()
        assert ctx.min_field_count((1,)) == Q ** m


def test_type_summand_examples():
    ctx = CountingContext(Quiver.loop(1), (0,), (2,))
    ctx.stable_count((1,))
    assert type_summand(ctx, TypeFunction.from_dict({((1,), 1, 1): 1})) == Q / (1 - Q)
    two_distinct = type_summand(ctx, TypeFunction.from_dict({((1,), 1, 1): 2}))
    assert two_distinct == Q * (Q - 1) / 2 / (1 - Q) ** 2


def test_stable_count_examples():
    assert CountingContext(Quiver.loop(1), (0,), (2,)).stable_count((2,)).is_zero()
    assert counting_polynomial(Quiver.loop(2), (0,), (2,)) == Polynomial([0, 0, 0, 0, -1, 1])
    assert counting_polynomial(Quiver.kronecker(3), (1, 0), (1, 1)) == Polynomial([1, 1, 1])
    with pytest.raises(ValueError):
        CountingContext(Quiver.kronecker(2), (1, 0), (1, 1)).stable_count((1, 0))
    with pytest.raises(ValueError):
        CountingContext(Quiver.loop(1), (0,), (0,))


def test_bottom_up_reads_only_smaller_classes():
    ctx = CountingContext(Quiver.kronecker(3), (1, 0), (3, 3))
    ctx.stable_count((2, 2))
    ctx.memo_a.trace = set()
    ctx._fill((3, 3))
    assert ctx.memo_a.trace
    assert all(total_dim(e) < 6 for e in ctx.memo_a.trace)


def test_certify():
    assert certify_polynomial((Q ** 2 - 1) / (Q - 1)) == Polynomial([1, 1])
    with pytest.raises(CertificationError) as info:
        certify_polynomial(1 / (Q - 1))
    assert info.value.value == 1 / (Q - 1)
    with pytest.raises(CertificationError):
        certify_polynomial(Q * Fraction(1, 2))


def test_euler_characteristic():
    assert euler_characteristic(Polynomial([1, 1, 1])) == 3
    assert euler_characteristic(Polynomial([0, 0, 0, 0, -1, 1])) == 0


@pytest.mark.parametrize(
    "quiver,theta,d",
    [
        (Quiver.loop(2), (0,), (3,)),
        (Quiver.loop(1), (0,), (4,)),
        (Quiver.kronecker(3), (1, 0), (2, 2)),
        (Quiver.kronecker(2), (1, 0), (2, 4)),
        (Quiver.star(4), (1, 0, 0, 0, 0), (2, 1, 1, 1, 1)),
    ],
)
def test_identity_holds(quiver, theta, d):
    ctx = CountingContext(quiver, theta, d)
    for e in ctx.slope_class_below(d)[1:]:
        assert identity_check(ctx, e)


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.sampled_from([(1, 1), (2, 2), (1, 2), (2, 3)]))
def test_shift_by_dimension_changes_nothing(c, d):
    q = Quiver.kronecker(3)
    base = CountingContext(q, (1, 0), d)
    shifted = CountingContext(q, (1 + c, c), d)
    for e in base.slope_class_below(d)[1:]:
        assert base.ss_ratio(e) == shifted.ss_ratio(e)
        assert base.beta(e) == shifted.beta(e)
        assert base.stable_count(e) == shifted.stable_count(e)
