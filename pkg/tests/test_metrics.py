import math

import pytest
from hypothesis import given, strategies as st

from sbmetric import (
    BMetricSpec,
    InputError,
    PreconditionError,
    SbMetricSpec,
    UnknownNameError,
    builtin,
    builtin_bmetric,
    evaluate,
    induce_b_from_sb,
    induce_s_from_metric,
    induce_sb_from_b,
    resolve,
)
from sbmetric.metrics import catalog, l1_metric

reals = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


def test_ex2_1_values():
    m = builtin("ex2_1")
    assert evaluate(m, 4, 6, 8) == 4
    assert evaluate(m, 4, 4, 5) == 0.25
    assert evaluate(m, 6, 6, 5) == 0.25
    assert evaluate(m, 8, 8, 5) == 2.25


def test_ex2_5_closed_form():
    # |0 - 2| + |0 + 2 - 2|
    assert evaluate(builtin("ex2_5"), 0, 1, 2) == 2


def test_ex2_3_cases():
    m = builtin("ex2_3")
    assert m(0, 0, 1) == 2
    assert m(1, 1, 0) == 4
    assert m(3, 3, 3) == 0
    assert m(0, 1, 0) == 1
    assert not m.symmetric and m.b == 2


def test_ex2_2_default_and_parameter():
    m = builtin("ex2_2")
    assert m(0, 1, 2) == (1 + 1 + 2) ** 2
    assert builtin("ex2_2", p=3)(0, 1, 2) == 64
    with pytest.raises(InputError):
        builtin("ex2_2", p=1)


def test_s1_diagonal_and_dimension():
    m = builtin("s1", n=3)
    assert m((1, 2, 3), (1, 2, 3), (1, 2, 3)) == 0
    assert m((0, 0, 0), (1, 1, 1), (1, 0, 0)) == 1 + 2
    with pytest.raises(InputError):
        m((1, 2), (1, 2), (1, 2))


def test_claims_attached():
    assert (builtin("ex2_1").b, builtin("ex2_1").symmetric) == (4, True)
    assert builtin("ex2_5").b == 1
    assert builtin("ex2_6", b=3).b == 3
    assert builtin("s1").b == 1


def test_unknown_name():
    with pytest.raises(UnknownNameError):
        builtin("ex9_9")
    with pytest.raises(UnknownNameError):
        resolve("nothing")


def test_b_must_be_at_least_one():
    with pytest.raises(InputError):
        SbMetricSpec("bad", lambda x, y, z: 0.0, b=0.5)


def test_non_finite_point_rejected():
    with pytest.raises(InputError):
        builtin("ex2_1")(math.nan, 0, 0)


def test_induce_s_from_abs():
    s = induce_s_from_metric(builtin_bmetric("abs"))
    assert s(1, 2, 4) == 3 + 2
    assert s(5, 2, 2) == 3
    assert s.b == 1 and s.symmetric


def test_induce_s_from_l1_is_s1():
    s = induce_s_from_metric(l1_metric(2))
    ref = builtin("s1", n=2)
    for x, y, z in [((0, 1), (2, -1), (3, 3)), ((1.5, 0), (0, 0), (-2, 4))]:
        assert s(x, y, z) == ref(x, y, z)


def test_induce_s_rejects_b_metric():
    with pytest.raises(PreconditionError):
        induce_s_from_metric(builtin_bmetric("sq"))


def test_induce_sb_from_squared():
    s = induce_sb_from_b(builtin_bmetric("sq"))
    assert s(0, 1, 3) == 9 + 4
    assert s.b == 2
    assert s(2, 2, 2) == 0


def test_induce_sb_matches_induce_s_for_ordinary_metric():
    d = builtin_bmetric("abs")
    a, b = induce_sb_from_b(d), induce_s_from_metric(d)
    for t in [(1, 2, 4), (-3, 0, 0.5), (2, 2, 7)]:
        assert a(*t) == b(*t)


def test_induce_b_from_ex2_1():
    d = induce_b_from_sb(builtin("ex2_1"))
    assert d.b == 6
    for x, y in [(0, 2), (1, -3), (0.5, 0.25)]:
        assert d(x, y) == pytest.approx((x - y) ** 2 / 4, abs=1e-12)
    assert d(3, 3) == 0


def test_induce_b_from_ex2_5():
    d = induce_b_from_sb(builtin("ex2_5"))
    assert d.b == 1.5
    assert d(1, 4) == 6


def test_induce_b_requires_symmetry():
    with pytest.raises(PreconditionError):
        induce_b_from_sb(builtin("ex2_3"))
    d = induce_b_from_sb(builtin("ex2_3"), require_symmetric=False)
    assert d(0, 1) == 2 and d(1, 0) == 4


def test_resolve_forms():
    assert resolve("ex2_2:3").b == 9
    assert resolve("s1:4").space.dim == 4
    assert isinstance(resolve("abs"), BMetricSpec)
    assert isinstance(resolve("b-from:ex2_1"), BMetricSpec)
    assert resolve("s-from:abs")(1, 2, 4) == 5
    assert resolve("sb-from:sq").b == 2
    with pytest.raises(InputError):
        resolve("ex2_1:3")


@given(reals)
def test_catalog_vanishes_on_diagonal(x):
    for m in catalog():
        if isinstance(m, SbMetricSpec) and m.space.dim == 1:
            assert m(x, x, x) == 0


@given(reals, reals, reals)
def test_catalog_nonnegative(x, y, z):
    for m in catalog():
        if isinstance(m, SbMetricSpec) and m.space.dim == 1:
            assert m(x, y, z) >= 0


@given(reals, reals, reals, reals)
def test_induced_s_metric_triangle(x, y, z, a):
    s = induce_s_from_metric(builtin_bmetric("abs"))
    assert s(x, y, z) <= s(x, x, a) + s(y, y, a) + s(z, z, a) + 1e-9


@given(reals, reals, reals, reals)
def test_induced_sb_triangle_with_input_b(x, y, z, a):
    s = induce_sb_from_b(builtin_bmetric("sq"))
    rhs = 2 * (s(x, x, a) + s(y, y, a) + s(z, z, a))
    assert s(x, y, z) <= rhs * (1 + 1e-12) + 1e-9


@given(reals, reals, reals)
def test_induced_b_metric_triangle(x, y, z):
    d = induce_b_from_sb(builtin("ex2_1"))
    assert d(x, y) <= 6 * (d(x, z) + d(y, z)) * (1 + 1e-12) + 1e-9


@given(reals, reals)
def test_round_trip_doubles_metric(x, y):
    d = builtin_bmetric("abs")
    back = induce_b_from_sb(induce_s_from_metric(d))
    assert back(x, y) == 2 * d(x, y)
