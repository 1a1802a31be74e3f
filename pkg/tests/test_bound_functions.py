import math

import numpy as np
import pytest

from app.core.errors import DomainError, RangeError
from app.services import bound_functions as bf
from app.services.bound_functions import EPS2, EPS2_BAR, FUNCTIONS, get_function
from app.utils.interval import Interval


def test_margulis_constants():
    assert EPS2 == pytest.approx(0.881373587, abs=1e-9)
    assert EPS2_BAR == pytest.approx(0.549306144, abs=1e-9)


def test_teo_constant_at_margulis_points():
    assert bf.c_teo(EPS2) == pytest.approx(0.743852, abs=2e-6)
    assert bf.c_teo(EPS2_BAR) == pytest.approx(1.0917405, abs=2e-6)
    # r → ∞ 时趋于 √(3/4π)
    assert bf.c_teo(40.0) == pytest.approx(math.sqrt(3.0 / (4.0 * math.pi)), rel=1e-12)


def test_teo_constant_is_strictly_decreasing_on_grid():
    values = bf.c_teo(np.geomspace(1e-6, 12.0, 400))

    assert np.all(np.diff(values) < 0)


def test_teo_constant_saturates_beyond_strict_range():
    # 1 − sech⁶(r/2) 在 r 约 13 之后与 1 只差几个 ulp
    values = bf.c_teo(np.geomspace(12.0, 40.0, 50))

    assert np.allclose(values, math.sqrt(3.0 / (4.0 * math.pi)), rtol=1e-12, atol=0.0)


@pytest.mark.parametrize("func, grid", [
    (bf.f_tail, np.geomspace(0.005, EPS2_BAR, 300)),
    (bf.k_cusp, np.geomspace(0.005, EPS2, 300)),
])
def test_tail_functions_are_strictly_increasing_on_grid(func, grid):
    values = func(grid)

    assert np.all(values > 0)
    assert np.all(np.diff(values) > 0)


@pytest.mark.parametrize("func, grid", [
    (bf.h_collar, np.geomspace(1e-6, 20.0, 400)),
    (bf.c0, np.geomspace(0.01, 20.0, 400)),
])
def test_collar_functions_are_strictly_decreasing_on_grid(func, grid):
    values = func(grid)

    assert np.all(values > 0)
    assert np.all(np.diff(values) < 0)


def test_collar_extent_values():
    assert bf.h_collar(0.1) == pytest.approx(1.520817, abs=1e-6)
    assert bf.s_collar(math.log(3.0)) == pytest.approx(5.98915, abs=1e-5)


def test_c0_matches_small_length_expansion():
    for L in np.linspace(0.005, 0.5, 100):
        assert abs(bf.c0(L) - (math.pi / 2.0 - L ** 3 / 12.0)) <= 0.05 * L ** 5


def test_g_bound_matches_small_radius_expansion():
    # F 项在 r ≈ 0.17 以上超过 r⁵ 量级，展开只在更小的 r 上检查
    for r in np.linspace(0.002, 0.15, 75):
        residual = bf.g_bound(r) * math.sqrt(math.pi * r) - 1.0 - 2.0 * r ** 3 / (3.0 * math.pi)
        assert abs(residual) <= 0.5 * r ** 5


def test_tail_functions_equal_teo_constant_at_right_endpoint():
    assert bf.f_tail(EPS2_BAR) == pytest.approx(bf.c_teo(EPS2_BAR), rel=1e-12)
    assert bf.k_cusp(EPS2) == pytest.approx(bf.c_teo(EPS2), rel=1e-12)


def test_tail_function_reference_values():
    assert bf.f_tail(0.45) == pytest.approx(0.45357, rel=1e-4)
    assert bf.f_tail(0.1) == pytest.approx(2.0025e-10, rel=1e-3)
    assert bf.k_cusp(0.2) == pytest.approx(7.102e-5, rel=1e-3)


def test_h_is_g_times_sqrt_r():
    r = np.linspace(0.01, EPS2_BAR, 50)

    np.testing.assert_allclose(bf.h_of_g(r), bf.g_bound(r) * np.sqrt(r), rtol=1e-13)


def test_minimum_functions_stay_below_printed_suprema():
    r = np.geomspace(1e-6, EPS2_BAR, 5000)

    assert np.max(bf.m_min(r)) <= bf.M0
    assert np.max(bf.m_prime_min(r)) <= bf.MPRIME0
    assert np.max(bf.m_min(r)) > 0.905


def test_point_functions_reject_out_of_domain_arguments():
    with pytest.raises(DomainError):
        bf.f_tail(0.6)
    with pytest.raises(DomainError):
        bf.k_cusp(1.0)
    with pytest.raises(DomainError):
        bf.c_teo(0.0)


def test_point_functions_accept_scalars_and_arrays():
    scalar = bf.c_teo(0.5)
    vector = bf.c_teo(np.array([0.5, 0.6]))

    assert isinstance(scalar, float)
    assert vector.shape == (2,)
    assert vector[0] == scalar


@pytest.mark.parametrize("function_id", sorted(FUNCTIONS))
def test_enclosures_contain_point_values(function_id):
    func = get_function(function_id)
    hi = min(func.domain[1], 2.0)
    lo = 0.05 if func.domain[0] == 0.0 else func.domain[0]
    for a, b in [(lo, 0.5 * (lo + hi)), (0.5 * (lo + hi), hi)]:
        enc = func.enclose(Interval(a, b))
        for x in np.linspace(a, b, 7):
            assert enc.contains(float(func.point(x))), (function_id, x)


@pytest.mark.parametrize("function_id", ["C", "sqrtRC", "F", "H", "K", "kernel", "h", "c0"])
def test_derivative_enclosures_contain_finite_differences(function_id):
    func = get_function(function_id)
    for x in (0.2, 0.35, 0.5):
        step = 1e-6
        slope = (float(func.point(x + step)) - float(func.point(x - step))) / (2.0 * step)
        enc = func.derivative(Interval(x - step, x + step))
        assert enc.lo - 1e-6 * abs(slope) <= slope <= enc.hi + 1e-6 * abs(slope), (function_id, x)


def test_unknown_function_id_is_domain_error():
    with pytest.raises(DomainError):
        get_function("nope")


def test_collar_profile_is_increasing_below_tan_threshold():
    profile = bf.collar_profile(1.0)
    ts = np.linspace(profile.domain[0], profile.domain[1], 200)

    assert np.all(np.diff(profile.point(ts)) > 0)


def test_wolpert_target_and_inj_bound():
    assert bf.wolpert_target(0.0, 2.0 / math.pi) == pytest.approx(1.0)
    assert bf.inj_sup_bound(0.25) == pytest.approx(2.0)
    assert bf.holk_gradient_asymptotic(3.0 / math.pi) == pytest.approx(-1.0)


def test_self_consistent_ball_radius_requires_cosh_below_two():
    assert bf.ball_radius_self_consistent(0.0 + 1e-9) == pytest.approx(math.atanh(0.5), rel=1e-9)
    with pytest.raises(DomainError):
        bf.ball_radius_self_consistent(3.0)


@pytest.mark.parametrize("eps", [1e-3, 1e-4, 1e-5])
def test_delta_of_eps_follows_cube_root_asymptotic(eps):
    ratio = bf.delta_of_eps(eps) / (12.0 * eps / math.pi ** 2) ** (1.0 / 3.0)

    assert 0.95 <= ratio <= 1.05


def test_delta_of_eps_is_capped_and_rejects_unreachable_targets():
    assert bf.delta_of_eps(0.5) <= 1.0 / (2.0 * math.pi)
    with pytest.raises(RangeError):
        bf.delta_of_eps(10.0)
    with pytest.raises(DomainError):
        bf.delta_of_eps(0.0)


def test_published_constants_are_recomputed():
    constants = bf.published_constants()

    assert constants.K0 == pytest.approx(1.6697, abs=5e-5)
    assert constants.c_eps2 ** 2 == pytest.approx(0.5533, abs=5e-5)


def test_crossings_of_figure_pairs():
    (first,) = bf.locate_crossings("H", "sqrtRC", 1e-3, EPS2_BAR)
    (second,) = bf.locate_crossings("twoF", "C", 1e-3, EPS2_BAR)

    assert 0.40 <= first <= 0.48
    assert 0.45 <= second <= 0.52
