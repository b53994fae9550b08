from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from derived_brackets.core.linear import GradedBasis, LinMap, Vector, series_map, series_vector
from derived_brackets.core.scalar import format_scalar, parse_scalar
from derived_brackets.core.series import FormalSeries, TruncationMismatch

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
series3 = st.lists(fracs, min_size=4, max_size=4).map(FormalSeries)


@given(series3, series3, series3)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == FormalSeries([0, 0, 0, 0])


@given(series3)
def test_inverse(a):
    if a[0] == 0:
        with pytest.raises(ZeroDivisionError):
            a.invert()
        return
    assert a * a.invert() == 1


@given(series3)
def test_derivative_of_integral(a):
    assert a.integrate().differentiate() == a


def test_product_rule():
    a = FormalSeries([1, 2, 0, 5])
    b = FormalSeries([0, 1, 3, 1])
    lhs = (a * b).differentiate()
    rhs = a.differentiate() * b.truncate(2) + a.truncate(2) * b.differentiate()
    assert lhs == rhs


def test_truncation_mismatch():
    with pytest.raises(TruncationMismatch):
        FormalSeries([1, 2]) * FormalSeries([1, 2, 3])
    with pytest.raises(ValueError):
        FormalSeries([1]).differentiate()


def test_variable_and_exp():
    t = FormalSeries.variable(3)
    exp = FormalSeries([F(1), F(1), F(1, 2), F(1, 6)])
    assert exp.differentiate() == exp.truncate(2)
    assert t * t * t * t == 0


def test_map_valued_inverse():
    m = LinMap(0, {0: Vector({1: F(1)}), 1: Vector()})
    series = FormalSeries([LinMap.identity(), m, LinMap.zero(), LinMap.zero()])
    inv = series.invert()
    prod = series_map(list((series * inv).coeffs))
    for k in (0, 1):
        assert prod.column(k) == Vector.basis(k)


def test_vector_arithmetic():
    v = Vector({0: F(1), 1: F(2)})
    w = Vector({1: F(-2)})
    assert v + w == Vector({0: F(1)})
    assert 2 * v - v == v
    assert (v - v) == 0
    assert not Vector({3: F(0)})
    assert v.restrict(lambda k: k == 1) == Vector({1: F(2)})


def test_vector_degrees():
    b = GradedBasis((("a", 0), ("b", 1)))
    assert Vector({0: F(1)}).degree(b.degree) == 0
    with pytest.raises(ValueError):
        Vector({0: F(1), 1: F(1)}).degree(b.degree)
    with pytest.raises(ValueError):
        GradedBasis((("a", 0), ("a", 1)))


def test_series_vector_and_coefficients():
    v = series_vector([Vector({0: F(1)}), Vector({0: F(2), 1: F(1)}), Vector()])
    assert v.t_coefficient(1) == Vector({0: F(2), 1: F(1)})
    assert v.t_derivative(2) .t_coefficient(0) == Vector({0: F(2), 1: F(1)})
    assert v.t_truncate(0) == Vector({0: F(1)})


def test_linmap_algebra():
    a = LinMap(1, {0: Vector({1: F(1)})})
    b = LinMap(0, fn=lambda k: Vector({k: F(k + 1)}))
    assert (a * b).column(0) == Vector({1: F(1)})
    assert (b * a).column(0) == Vector({1: F(2)})
    assert (a + a).column(0) == Vector({1: F(2)})
    with pytest.raises(ValueError):
        a + b


@pytest.mark.parametrize("text,value", [("3", F(3)), ("-2/6", F(-1, 3)), (" 5 / 10 ", F(1, 2)), (7, F(7))])
def test_parse_scalar(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["0.5", 0.5, "1/0", "x", True, None, "1e3"])
def test_parse_scalar_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad)


def test_format_scalar():
    assert format_scalar(F(-3, 6)) == "-1/2"
    assert format_scalar(F(4)) == "4"
