from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinising.algebra import (QSqrt, SparsePoly, TruncatedSeries, determinant,
                               pfaffian, series_inverse_square, sqrt_fraction)
from spinising.errors import (IncompatibleRadicands, NonUnitConstantTerm,
                              OddDimension)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=20)


def test_sparse_poly_arithmetic():
    x = SparsePoly.variable(2, 0)
    y = SparsePoly.variable(2, 1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.coefficient((2, 0)) == 1
    assert p.coefficient((0, 2)) == -1
    assert p.coefficient((1, 1)) == 0
    assert p.evaluate([Fraction(3), Fraction(2)]) == 5


def test_partial_and_truncate():
    x = SparsePoly.variable(1, 0)
    p = 1 + 3 * x + x * x * x
    assert p.partial(0) == 3 * SparsePoly.constant(1, 1) + 3 * x * x
    assert p.truncate(1) == 1 + 3 * x


def test_halve_exponents_requires_even():
    x = SparsePoly.variable(1, 0)
    assert (x * x).halve_exponents() == x
    with pytest.raises(ValueError):
        x.halve_exponents()


def test_inverse_square_single_variable():
    x = SparsePoly.variable(1, 0)
    series = series_inverse_square(1 + x, 6)
    for d in range(7):
        assert series.coefficient((d,)) == (-1) ** d * (d + 1)


def test_inverse_square_requires_unit_constant():
    x = SparsePoly.variable(1, 0)
    with pytest.raises(NonUnitConstantTerm):
        series_inverse_square(2 + x, 4)


def test_truncated_series_ring():
    x = SparsePoly.variable(1, 0)
    a = TruncatedSeries(1 + x, 3)
    b = TruncatedSeries(1 - x + x * x, 3)
    assert (a * b).poly == 1 + x * x * x  # the degree-4 cross term is truncated


def _skew_from(vals, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    it = iter(vals)
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(next(it))
            m[i][j] = v
            m[j][i] = -v
    return m


def test_pfaffian_small_cases():
    m = _skew_from([Fraction(5)], 2)
    assert pfaffian(m) == 5
    # pf of 4x4 = a01 a23 - a02 a13 + a03 a12
    vals = [1, 2, 3, 4, 5, 6]
    m = _skew_from(vals, 4)
    assert pfaffian(m) == 1 * 6 - 2 * 5 + 3 * 4


def test_pfaffian_odd_dimension():
    with pytest.raises(OddDimension):
        pfaffian([[Fraction(0)] * 3 for _ in range(3)])


@settings(max_examples=25, deadline=None)
@given(st.lists(rationals, min_size=15, max_size=15))
def test_pfaffian_squares_to_determinant(vals):
    m = _skew_from(vals, 6)
    assert pfaffian(m) ** 2 == determinant(m)


def test_qsqrt_normalization():
    assert QSqrt(1, 8) == QSqrt(2, 2)
    assert sqrt_fraction(Fraction(4, 9)) == QSqrt(Fraction(2, 3))
    assert sqrt_fraction(Fraction(1, 2)) == QSqrt(Fraction(1, 2), 2)
    assert float(QSqrt(1, 2)) == pytest.approx(2 ** 0.5)


def test_qsqrt_arithmetic():
    a = QSqrt(1, 2)
    assert a * a == QSqrt(2)
    assert a + a == QSqrt(2, 2)
    assert (a - a).is_zero()
    with pytest.raises(IncompatibleRadicands):
        QSqrt(1, 2) + QSqrt(1, 3)


@settings(max_examples=50, deadline=None)
@given(rationals, rationals)
def test_sqrt_fraction_squares_back(p, q):
    x = abs(p * q)
    s = sqrt_fraction(x)
    assert s * s == QSqrt(x)
