import math

import pytest
from pydantic import ValidationError

from app.core.errors import DomainError, HypothesisError
from app.models.report_models import CurvatureQuery
from app.services.bound_functions import EPS2
from app.services.curvature import (
    assemble_bounds,
    holk_envelope,
    perp_sup_bound,
    pointwise_density_bound,
    ric_lower,
    sca_envelope,
    sca_lower,
    sca_lower_teo,
    sca_upper,
    sec_lower,
    sec_perp_lower,
    systole_sup_bound,
)
from app.services.hyperbolic_domains import RegionKind


def _build_query(genus: int = 2, punctures: int = 0, systole: float = 0.1) -> CurvatureQuery:
    return CurvatureQuery(genus=genus, punctures=punctures, systole=systole)


def test_ricci_lower_bound_thin_regime():
    q = _build_query()

    assert ric_lower(q, "sharp") == pytest.approx(-33.394, rel=1e-3)
    assert ric_lower(q, "rounded") == pytest.approx(-40.0)


def test_ricci_lower_bound_thick_regime_uses_teo():
    assert ric_lower(_build_query(systole=10.0)) == pytest.approx(-0.47747, rel=1e-3)


def test_ricci_rejects_unknown_mode():
    with pytest.raises(DomainError):
        ric_lower(_build_query(), "loose")


def test_scalar_lower_bound_takes_tighter_source():
    assert sca_lower(_build_query()) == pytest.approx(-110.0)
    assert sca_lower(_build_query(genus=1, punctures=3)) == pytest.approx(-4.0 * 3 / 0.1)


def test_scalar_lower_bound_thick_closed_surface():
    assert sca_lower(_build_query(systole=2.0)) == pytest.approx(-3.3199, abs=1e-3)


def test_scalar_lower_bound_missing_for_thick_punctured():
    assert sca_lower(_build_query(genus=1, punctures=3, systole=2.0)) is None


def test_scalar_upper_bound():
    assert sca_upper(_build_query()) == pytest.approx(-0.95493, rel=1e-4)
    assert sca_upper(_build_query(genus=1, punctures=2)) is None


def test_scalar_teo_bound_reported_separately():
    q = _build_query(systole=10.0)

    assert sca_lower_teo(q) == pytest.approx(-6.0 * 0.47747 / 2.0, rel=1e-3)
    assert sca_lower_teo(_build_query(genus=1, punctures=2)) is None


def test_sectional_lower_bounds():
    assert sec_lower(_build_query(systole=2.0 * EPS2)) == pytest.approx(-2.26919, rel=1e-4)
    assert sec_lower(_build_query(systole=0.01)) == pytest.approx(-400.0)
    assert sec_lower(_build_query(), "sharp") == pytest.approx(-33.394, rel=1e-3)
    assert sec_perp_lower() == -4.0


def test_sectional_bound_out_of_hypothesis():
    with pytest.raises(HypothesisError) as exc_info:
        sec_lower(_build_query(systole=2.0))

    assert exc_info.value.error_type == "out_of_hypothesis"


def test_invalid_query_is_rejected():
    with pytest.raises(ValidationError):
        _build_query(genus=1, punctures=1)
    with pytest.raises(ValidationError):
        _build_query(systole=0.0)


def test_thin_bounds_weaken_as_systole_grows():
    values = [ric_lower(_build_query(systole=ell)) for ell in (0.01, 0.1, 0.5, 1.0)]

    assert values == sorted(values)


def test_holk_envelope_is_scale_invariant():
    envelope = holk_envelope(3.0, 1.0)
    doubled = holk_envelope(3.0 * 2.0 ** 4, 2.0)

    assert envelope.lo == pytest.approx(-6.0)
    assert envelope.hi == pytest.approx(-2.0)
    assert doubled.lo == pytest.approx(envelope.lo)
    assert doubled.hi == pytest.approx(envelope.hi)
    assert holk_envelope(0.0, 1.0).as_list() == [0.0, 0.0]


def test_holk_envelope_rejects_zero_norm():
    with pytest.raises(DomainError):
        holk_envelope(1.0, 0.0)


def test_scalar_envelope():
    envelope = sca_envelope(6.0)

    assert envelope.lo == pytest.approx(-12.0)
    assert envelope.hi == pytest.approx(-2.0)


def test_pointwise_density_bounds():
    assert pointwise_density_bound(RegionKind.THICK) == pytest.approx(0.5533, abs=5e-5)
    assert pointwise_density_bound(RegionKind.CUSP_THIN) == pointwise_density_bound(RegionKind.THICK)
    assert pointwise_density_bound(RegionKind.COLLAR_THIN, 1.0) == pytest.approx(1.6697, abs=1e-4)
    assert pointwise_density_bound(RegionKind.COLLAR_THIN, 2.0 * EPS2) == pytest.approx(0.9472, abs=1e-4)
    with pytest.raises(HypothesisError):
        pointwise_density_bound(RegionKind.COLLAR_THIN, 2.0)


def test_sup_bounds():
    assert perp_sup_bound() == pytest.approx(math.sqrt(2.0))
    assert systole_sup_bound(8.0) == pytest.approx(1.06517, rel=1e-4)
    assert systole_sup_bound(0.5) == pytest.approx(2.0)


def test_assemble_bounds_thin_closed_surface():
    bounds = assemble_bounds(_build_query())

    assert bounds.regime == "thin"
    assert bounds.sca_lo == pytest.approx(-110.0)
    assert bounds.ric_lo == pytest.approx(-33.394, rel=1e-3)
    assert bounds.sec_perp_lo == -4.0
    assert bounds.sca_hi == pytest.approx(-0.95493, rel=1e-4)
    assert {"ric_lo", "sca_lo", "sca_hi", "sec_lo"} <= set(bounds.constants_used)


def test_assemble_bounds_thick_reports_notice_instead_of_error():
    bounds = assemble_bounds(_build_query(systole=2.0))

    assert bounds.regime == "thick"
    assert bounds.sec_lo is None
    assert bounds.notices


def test_assemble_bounds_punctured_surface_explains_missing_scalar_upper_bound():
    bounds = assemble_bounds(_build_query(genus=1, punctures=2, systole=0.1))

    assert bounds.sca_hi is None
    assert "sca_hi" not in bounds.constants_used
    assert any("n = 0" in notice for notice in bounds.notices)
