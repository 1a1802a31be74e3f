import math

import pytest

from app.core.errors import DomainError
from app.utils import interval as iv
from app.utils.interval import Interval


def test_arithmetic_encloses_exact_result():
    a = Interval(1.0, 2.0)
    b = Interval(-3.0, 0.5)

    assert (a + b).encloses(Interval(-2.0, 2.5))
    assert (a - b).encloses(Interval(0.5, 5.0))
    assert (a * b).encloses(Interval(-6.0, 1.0))
    assert (1.0 / a).encloses(Interval(0.5, 1.0))


def test_outward_rounding_strictly_widens_point_sums():
    total = Interval.point(0.1) + Interval.point(0.2)

    assert total.lo < 0.1 + 0.2 < total.hi
    assert total.contains(0.30000000000000004)


def test_even_power_of_interval_straddling_zero_starts_at_zero():
    squared = Interval(-2.0, 1.0) ** 2

    assert squared.lo == 0.0
    assert squared.hi >= 4.0


def test_reciprocal_rejects_interval_containing_zero():
    with pytest.raises(DomainError):
        iv.reciprocal(Interval(-1.0, 1.0))


def test_constructor_rejects_unordered_endpoints():
    with pytest.raises(DomainError):
        Interval(2.0, 1.0)


def test_cos_includes_interior_extrema():
    around_pi = iv.cos(Interval(3.0, 3.3))
    around_zero = iv.cos(Interval(-0.5, 0.5))

    assert around_pi.lo == -1.0
    assert around_zero.hi == 1.0
    assert around_zero.lo <= math.cos(0.5)


def test_elementary_functions_contain_point_values():
    x = Interval(0.3, 0.7)
    for enclose, point in [
        (iv.exp, math.exp), (iv.log, math.log), (iv.sqrt, math.sqrt), (iv.sinh, math.sinh),
        (iv.cosh, math.cosh), (iv.tanh, math.tanh), (iv.arcsinh, math.asinh), (iv.arccos, math.acos),
        (iv.arctanh, math.atanh), (iv.sin, math.sin),
    ]:
        enc = enclose(x)
        for t in (0.3, 0.45, 0.7):
            assert enc.contains(point(t)), enclose.__name__


def test_log_of_nonpositive_interval_is_domain_error():
    with pytest.raises(DomainError):
        iv.log(Interval(0.0, 1.0))


def test_split_and_hull_round_trip_to_original():
    whole = Interval(-1.0, 3.0)
    left, right = whole.split()

    assert left.hi == right.lo == whole.mid
    assert iv.hull([left, right]) == whole
