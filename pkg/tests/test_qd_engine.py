import math

import numpy as np
import pytest

from app.core.errors import DomainError, InfiniteWeightError
from app.services.bound_functions import c0
from app.services.hyperbolic_domains import CollarGeometry, CollarPoint, CuspGeometry, inj_collar
from app.services.qd_engine import (
    LaurentQD,
    Region,
    adversarial_qds,
    boundary_sup,
    bromberg_sum,
    c0_quadrature,
    decompose,
    density_square_integral,
    extremal_coefficients,
    extremal_ratio,
    gardiner_pairing,
    gardiner_pairing_quadrature,
    grid_sup,
    inner_product,
    l2_norm,
    l2_norm_quadrature,
    l4_integral,
    l4_integral_reduced,
    mode_weight,
    mode_weight_quadrature,
    normalized,
    orthonormal_mode_family,
    pointwise_norm,
    project_perp,
    random_collar_point,
    random_qd,
    region_area,
    sup_norm,
    w0_closed_form,
)


def _build_collar(L: float = 0.8) -> CollarGeometry:
    return CollarGeometry(L)


def _build_rng(seed: int = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


@pytest.mark.parametrize("region", [Region.full(), Region.ambient(), Region.sub(0.6)])
@pytest.mark.parametrize("n", [-3, 0, 1, 4])
def test_collar_mode_weight_matches_quadrature(region, n):
    geom = _build_collar(0.8)

    assert mode_weight(geom, n, region).weight == pytest.approx(mode_weight_quadrature(geom, n, region), rel=1e-9)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_cusp_mode_weight_matches_quadrature(n):
    geom = CuspGeometry()

    for region in (Region.full(), Region.maximal_cusp()):
        assert mode_weight(geom, n, region).weight == pytest.approx(mode_weight_quadrature(geom, n, region),
                                                                    rel=1e-9)


def test_mode_weight_is_symmetric_in_mode_sign():
    geom = _build_collar(0.3)

    assert mode_weight(geom, 7).log_weight == pytest.approx(mode_weight(geom, -7).log_weight, rel=1e-15)


def test_zero_mode_weight_closed_form():
    geom = _build_collar(0.4)

    assert mode_weight(geom, 0).weight == pytest.approx(w0_closed_form(geom), rel=1e-13)
    assert c0_quadrature(0.4) == pytest.approx(c0(0.4), rel=1e-12)


def test_mode_weight_stays_finite_in_log_for_huge_modes():
    weight = mode_weight(_build_collar(0.01), 500)

    assert math.isinf(weight.weight)
    assert math.isfinite(weight.log_weight)


def test_cusp_rejects_nonpositive_modes():
    geom = CuspGeometry()

    with pytest.raises(DomainError):
        LaurentQD(geom, {0: 1.0})
    with pytest.raises(InfiniteWeightError):
        mode_weight(geom, 0)


@pytest.mark.parametrize("seed", range(5))
def test_closed_form_l2_norm_matches_quadrature(seed):
    geom = _build_collar(1.2)
    phi = random_qd(geom, 3, _build_rng(seed))

    assert l2_norm(phi) == pytest.approx(l2_norm_quadrature(phi).value, rel=1e-8)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_closed_form_l2_norm_matches_quadrature_full_scale(seed):
    geom = _build_collar(1.2)
    phi = random_qd(geom, 3, _build_rng(seed))

    assert l2_norm(phi) == pytest.approx(l2_norm_quadrature(phi).value, rel=1e-8)


def test_cusp_l2_norm_matches_quadrature():
    phi = random_qd(CuspGeometry(), 3, _build_rng(11))

    assert l2_norm(phi) == pytest.approx(l2_norm_quadrature(phi).value, rel=1e-8)


def test_parseval_splits_norm_over_signed_parts():
    geom = _build_collar(0.5)
    phi = random_qd(geom, 6, _build_rng(3))
    minus, zero, plus = decompose(phi)

    total = sum(l2_norm(part) ** 2 for part in (minus, zero, plus))
    assert l2_norm(phi) ** 2 == pytest.approx(total, rel=1e-12)
    assert inner_product(minus, plus) == 0


def test_inner_product_is_consistent_with_norm():
    geom = _build_collar(0.5)
    phi = random_qd(geom, 4, _build_rng(5))

    assert inner_product(phi, phi).real == pytest.approx(l2_norm(phi) ** 2, rel=1e-12)


def test_normalized_has_unit_norm_in_requested_region():
    geom = _build_collar(0.2)
    phi = normalized(random_qd(geom, 5, _build_rng(8)), Region.ambient())

    assert l2_norm(phi, Region.ambient()) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(DomainError):
        normalized(LaurentQD.zero(geom))


def test_ambient_norm_dominates_collar_norm():
    geom = _build_collar(0.3)
    phi = random_qd(geom, 5, _build_rng(9))

    assert l2_norm(phi, Region.collar()) <= l2_norm(phi, Region.ambient())
    assert l2_norm(phi, Region.sub(0.5)) <= l2_norm(phi, Region.collar())


def test_pointwise_norm_is_homogeneous():
    geom = _build_collar(0.5)
    phi = random_qd(geom, 4, _build_rng(1))
    p = CollarPoint(2.0, 1.0)

    assert pointwise_norm(phi.scaled(-3j), p) == pytest.approx(3.0 * pointwise_norm(phi, p), rel=1e-13)


def test_gardiner_pairing_is_zero_mode_times_length():
    geom = _build_collar(1.5)
    phi = LaurentQD(geom, {-1: 0.5, 0: 2.0 - 1.0j, 1: 0.25j})

    assert gardiner_pairing(phi) == pytest.approx((2.0 - 1.0j) * 1.5)
    assert gardiner_pairing_quadrature(phi) == pytest.approx(gardiner_pairing(phi), rel=1e-8)
    assert gardiner_pairing(project_perp(phi)) == 0


def test_gardiner_pairing_undefined_on_cusp():
    with pytest.raises(DomainError):
        gardiner_pairing(LaurentQD(CuspGeometry(), {1: 1.0}))


def test_zero_mode_ratio_is_the_phi0_profile():
    L = 0.25
    geom = _build_collar(L)
    for u in np.linspace(0.0, geom.s, 7):
        p = CollarPoint(float(u))
        r = inj_collar(geom, p)
        profile = math.sinh(L / 2.0) ** 2 / math.sinh(r) ** 2 / math.sqrt(L * c0(L))
        assert extremal_ratio(geom, p, 0, "all", Region.collar()) == pytest.approx(profile, rel=1e-12)


def test_extremal_coefficients_attain_extremal_ratio():
    geom = _build_collar(0.4)
    p = CollarPoint(5.0, 0.7)
    best = extremal_coefficients(geom, p, 8, "all", Region.ambient())

    ratio = pointwise_norm(best, p) / l2_norm(best, Region.ambient())
    assert ratio == pytest.approx(extremal_ratio(geom, p, 8, "all", Region.ambient()), rel=1e-10)


def test_random_differentials_never_beat_extremal_ratio():
    geom = _build_collar(0.4)
    rng = _build_rng(21)
    for _ in range(20):
        phi = random_qd(geom, 8, rng)
        p = random_collar_point(geom, rng)
        assert pointwise_norm(phi, p) / l2_norm(phi) <= extremal_ratio(geom, p, 8) * (1.0 + 1e-12)


def test_bromberg_sum_equals_squared_extremal_ratio():
    geom = _build_collar(0.3)
    family = orthonormal_mode_family(geom, 12, Region.ambient())
    rng = _build_rng(4)
    for _ in range(100):
        p = random_collar_point(geom, rng)
        expected = extremal_ratio(geom, p, 12, "all", Region.ambient()) ** 2
        assert bromberg_sum(family, p) == pytest.approx(expected, rel=1e-10)


def test_perp_extremal_ratio_stays_below_sqrt2():
    for L in (0.05, 0.5, 1.5):
        geom = _build_collar(L)
        for u in np.linspace(-geom.s, geom.s, 21):
            ratio = extremal_ratio(geom, CollarPoint(float(u)), 32, "perp", Region.ambient())
            assert ratio <= math.sqrt(2.0)


def test_empty_admissible_mode_set_is_error():
    with pytest.raises(DomainError):
        extremal_ratio(_build_collar(0.5), CollarPoint(0.0), 0, "perp")


def test_random_qd_is_reproducible():
    geom = _build_collar(0.5)
    a = random_qd(geom, 5, _build_rng(42))
    b = random_qd(geom, 5, _build_rng(42))

    assert dict(a.coeffs) == dict(b.coeffs)
    assert dict(a.log_scale) == dict(b.log_scale)


def test_adversarial_cases_are_unit_norm():
    geom = _build_collar(0.1)
    cases = adversarial_qds(geom, 16, Region.collar())

    assert len(cases) >= 4
    for phi in cases:
        assert l2_norm(phi, Region.collar()) == pytest.approx(1.0, rel=1e-12)


def test_maximum_principle_for_positive_modes():
    geom = _build_collar(0.6)
    rng = _build_rng(13)
    for _ in range(10):
        plus = decompose(random_qd(geom, 6, rng))[2]
        boundary = boundary_sup(plus, Region.collar())
        interior = grid_sup(plus, Region.collar(), n_u=41, n_theta=64, interior_fraction=0.98, refine=False)
        assert interior.value <= boundary.value * (1.0 + 1e-9)


@pytest.mark.slow
def test_maximum_principle_for_positive_modes_full_scale():
    geom = _build_collar(0.6)
    rng = _build_rng(17)
    for _ in range(200):
        plus = decompose(random_qd(geom, 6, rng))[2]
        boundary = boundary_sup(plus, Region.collar())
        interior = grid_sup(plus, Region.collar(), n_u=41, n_theta=64, interior_fraction=0.98, refine=False)
        assert interior.value <= boundary.value * (1.0 + 1e-9)


def test_sup_norm_dispatches_on_mode_signs():
    geom = _build_collar(0.6)
    plus = LaurentQD(geom, {1: 1.0, 3: 0.5})
    mixed = LaurentQD(geom, {-1: 1.0, 2: 0.5})

    assert sup_norm(plus).method == "boundary"
    assert sup_norm(mixed).method == "grid"
    assert sup_norm(LaurentQD.zero(geom)).value == 0.0


def test_collar_area_closed_form():
    geom = _build_collar(0.7)

    assert region_area(geom, Region.collar()) == pytest.approx(2.0 * 0.7 / math.sinh(0.35), rel=1e-13)
    assert math.isinf(region_area(CuspGeometry()))
    assert region_area(CuspGeometry(), Region.maximal_cusp()) == pytest.approx(2.0)


def test_single_mode_quartic_integral_agrees_with_reduced_form():
    geom = _build_collar(1.0)
    phi = normalized(LaurentQD(geom, {2: 1.0}))

    assert l4_integral(phi).value == pytest.approx(l4_integral_reduced(phi), rel=1e-6)


def test_quartic_integral_obeys_cauchy_schwarz():
    geom = _build_collar(1.0)
    phi = normalized(random_qd(geom, 2, _build_rng(6)))

    assert l4_integral(phi).value >= 1.0 / region_area(geom, Region.full())


def test_density_square_integral_obeys_cauchy_schwarz():
    geom = _build_collar(0.5)
    count = 2 * 6 + 1

    q = density_square_integral(geom, 6, Region.collar())
    assert q >= count ** 2 / region_area(geom, Region.collar())
