import math

import pytest

from app.core.errors import DomainError, HypothesisError
from app.services.bound_functions import EPS2, ball_radius_self_consistent
from app.services.hyperbolic_domains import (
    CollarGeometry,
    CollarPoint,
    CuspGeometry,
    RegionKind,
    collar_boundary_inj,
    collar_half_width,
    collar_metric_density,
    cusp_cutoff_log,
    cusp_metric_density,
    dist_to_collar_boundary,
    inj_collar,
    inj_collar_from_complex,
    inj_cusp,
    inj_strip,
    self_consistent_radius,
    subcollar_extent,
    thick_thin_region,
    to_strip,
)


def _build_collar(L: float = 0.2) -> CollarGeometry:
    return CollarGeometry(L)


def test_collar_rejects_lengths_beyond_hypothesis():
    with pytest.raises(HypothesisError):
        CollarGeometry(2.0)
    with pytest.raises(DomainError):
        CollarGeometry(0.0)


def test_permissive_collar_allows_margin_but_is_not_certified():
    geom = CollarGeometry(2.0, permissive=True)

    assert not geom.certified
    assert CollarGeometry(2.0 * EPS2).certified


def test_injectivity_radius_reference_value():
    geom = _build_collar(0.2)

    assert inj_collar(geom, CollarPoint(20.0, 1.3)) == pytest.approx(0.124246, abs=1e-6)


def test_injectivity_radius_on_core_and_boundary():
    geom = _build_collar(0.3)

    assert inj_collar(geom, CollarPoint(0.0)) == pytest.approx(0.15, rel=1e-14)
    assert inj_collar(geom, CollarPoint(geom.s)) == pytest.approx(collar_boundary_inj(geom), rel=1e-12)


def test_injectivity_radius_is_symmetric_under_reflection():
    geom = _build_collar(0.5)
    p = CollarPoint(3.7, 2.0)

    assert inj_collar(geom, p) == pytest.approx(inj_collar(geom, p.reflected()), rel=1e-15)


def test_three_injectivity_formulas_agree():
    geom = _build_collar(0.7)
    p = CollarPoint(-2.5, 0.4)

    expected = inj_collar(geom, p)
    assert inj_strip(geom, to_strip(geom, p)) == pytest.approx(expected, rel=1e-13)
    assert inj_collar_from_complex(geom, p.to_complex()) == pytest.approx(expected, rel=1e-13)


def test_point_outside_collar_is_rejected():
    geom = _build_collar(0.2)

    with pytest.raises(DomainError):
        inj_collar(geom, CollarPoint(geom.s * 1.01))


def test_collar_metric_density_at_core():
    geom = _build_collar(0.4)

    assert collar_metric_density(geom, CollarPoint(0.0)) == pytest.approx(0.4 / (2.0 * math.pi))


def test_cusp_injectivity_and_density():
    assert inj_cusp(-10.0) == pytest.approx(0.309208, abs=1e-6)
    assert inj_cusp(-math.pi) == pytest.approx(EPS2, rel=1e-14)
    assert cusp_metric_density(-math.pi) == pytest.approx(7.36594, abs=1e-5)
    with pytest.raises(DomainError):
        inj_cusp(-1.0)


def test_cusp_geometry_bounds():
    geom = CuspGeometry()

    assert geom.point_log_bound == -math.pi
    assert geom.norm_log_bound == 0.0


def test_distance_to_boundary_endpoints():
    geom = _build_collar(0.6)

    assert dist_to_collar_boundary(geom, 0.3) == pytest.approx(collar_half_width(geom), abs=1e-10)
    assert dist_to_collar_boundary(geom, collar_boundary_inj(geom)) == pytest.approx(0.0, abs=1e-10)


def test_self_consistent_radius_matches_closed_form():
    geom = _build_collar(1.0)

    assert self_consistent_radius(geom) == pytest.approx(ball_radius_self_consistent(1.0), abs=1e-9)


def test_subcollar_extent_limits():
    geom = _build_collar(0.5)

    assert subcollar_extent(geom, 0.25) == pytest.approx(0.0, abs=1e-7)
    assert subcollar_extent(geom, 10.0) == geom.h
    assert 0.0 < subcollar_extent(geom, 0.6) < geom.h
    with pytest.raises(DomainError):
        subcollar_extent(geom, 0.1)


def test_cusp_cutoff_at_margulis_radius_is_maximal_cusp():
    assert cusp_cutoff_log(EPS2) == pytest.approx(-math.pi)
    with pytest.raises(DomainError):
        cusp_cutoff_log(1.0)


def test_thick_thin_classification():
    assert thick_thin_region(1.0) == RegionKind.THICK
    assert thick_thin_region(0.3) == RegionKind.COLLAR_THIN
    assert thick_thin_region(0.3, in_cusp=True) == RegionKind.CUSP_THIN
