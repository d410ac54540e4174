import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focalfluc.geometry import (
    TWO_RAY_LIMIT,
    FocalPoint,
    MirrorGeometry,
    PartnerMultiplicityError,
    SingularPartnerDerivativeError,
    critical_angles,
    edge_shift,
    incident_map,
    incident_map_derivative,
    pair_domain,
    partner_angle,
    partner_derivative,
    partner_series,
    path_difference_factor,
    ray_pair,
)

from conftest import central_difference, rel_err

HALF_PI = 0.5 * math.pi

angles = st.floats(min_value=-2.0, max_value=2.0)
gammas = st.floats(min_value=0.0, max_value=math.pi)


def printed_map(t, g):
    # the quotient form, evaluated literally (test-side oracle)
    return math.sin(t) ** 2 * math.sin(t - g) / (1.0 - math.cos(t))


def scan_partners(alpha, theta0, gamma, n=40001):
    """Dense-scan oracle: all roots of f = f(alpha) other than alpha."""
    xs = np.linspace(-theta0, theta0, n)
    fv = (1.0 + np.cos(xs)) * np.sin(xs - gamma) - incident_map(alpha, gamma)
    idx = np.nonzero(np.sign(fv[:-1]) * np.sign(fv[1:]) < 0)[0]
    roots = []
    for i in idx:
        lo, hi = xs[i], xs[i + 1]
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if np.sign((1.0 + np.cos(mid)) * np.sin(mid - gamma)
                       - incident_map(alpha, gamma)) == np.sign(fv[i]):
                lo = mid
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        if abs(root - alpha) > 1e-6:
            roots.append(root)
    return roots


class TestIncidentMap:
    def test_on_axis_value(self):
        assert incident_map(0.5, 0.0) == pytest.approx(0.9001610310081513, rel=1e-14)
        assert incident_map(0.5, 0.0) == pytest.approx(printed_map(0.5, 0.0), rel=1e-13)

    def test_perpendicular_zero(self):
        assert incident_map(HALF_PI, HALF_PI) == 0.0

    def test_exact_rational_point(self):
        assert incident_map(math.pi / 3, HALF_PI) == pytest.approx(-0.75, abs=1e-15)

    @given(angles.filter(lambda t: abs(t) > 1e-3), gammas)
    def test_matches_printed_quotient_form(self, t, g):
        # the quotient form itself loses ~eps/t^2 to cancellation near zero;
        # the product form is its exact smooth extension
        tol = max(1e-13, 1e-15 / (t * t))
        assert incident_map(t, g) == pytest.approx(printed_map(t, g), abs=tol)

    @given(angles, gammas)
    def test_reflection_identity(self, t, g):
        assert incident_map(-t, math.pi - g) == pytest.approx(
            incident_map(t, g), abs=1e-14)

    @given(angles)
    def test_even_at_perpendicular(self, t):
        assert incident_map(-t, HALF_PI) == pytest.approx(
            incident_map(t, HALF_PI), abs=1e-14)

    @given(angles.filter(lambda t: abs(t) > 1e-3))
    def test_on_axis_reduces_to_cubed_sine(self, t):
        ref = math.sin(t) ** 3 / (1.0 - math.cos(t))
        assert incident_map(t, 0.0) == pytest.approx(ref, abs=1e-12)


class TestDerivatives:
    def test_first_derivative_closed_point(self):
        got = incident_map_derivative(math.pi / 3, HALF_PI, 1)
        assert got == pytest.approx(math.sqrt(3.0), rel=1e-14)

    def test_second_derivative_origin_limit(self):
        # series-evaluated limit of (f(h) - 2 f(0) + f(-h)) / h^2
        got = incident_map_derivative(0.0, HALF_PI, 2)
        fd = central_difference(lambda t: incident_map(t, HALF_PI), 0.0, 2,
                                h=0.02)
        assert got == pytest.approx(3.0, rel=1e-14)
        assert fd == pytest.approx(got, rel=1e-8)

    @given(st.floats(min_value=-1.8, max_value=1.8), gammas,
           st.integers(min_value=1, max_value=4))
    def test_matches_central_differences(self, t, g, order):
        got = incident_map_derivative(t, g, order)
        h = 0.05 if order <= 2 else 0.02
        fd = central_difference(lambda x: incident_map(x, g), t, order, h=h)
        assert got == pytest.approx(fd, rel=1e-6, abs=1e-6)

    def test_first_derivative_tight_fd(self):
        got = incident_map_derivative(0.7, 1.234, 1)
        fd = central_difference(lambda x: incident_map(x, 1.234), 0.7, 1, h=0.03)
        assert rel_err(fd, got) < 1e-8

    @pytest.mark.parametrize("order", [0, 8, -1])
    def test_order_out_of_range(self, order):
        with pytest.raises(ValueError):
            incident_map_derivative(0.3, 0.1, order)


class TestPathDifference:
    def test_coincident_rays(self):
        assert path_difference_factor(0.4, 0.4, 1.1) == 0.0

    def test_symmetric_pair(self):
        assert path_difference_factor(0.6, -0.6, HALF_PI) == pytest.approx(
            2.0 * math.sin(0.6), rel=1e-15)

    def test_sqrt3_pair(self):
        assert path_difference_factor(math.pi / 3, -math.pi / 3, HALF_PI) == \
            pytest.approx(math.sqrt(3.0), rel=1e-15)

    @given(angles, angles, gammas)
    def test_symmetric_nonnegative(self, a, b, g):
        h1 = path_difference_factor(a, b, g)
        assert h1 >= 0.0
        assert h1 == pytest.approx(path_difference_factor(b, a, g), abs=1e-16)


class TestCriticalAngles:
    def test_perpendicular_single(self):
        crits = critical_angles(MirrorGeometry(1.0), HALF_PI)
        assert len(crits) == 1
        assert crits[0] == pytest.approx(0.0, abs=1e-12)

    def test_two_extrema(self):
        crits = critical_angles(MirrorGeometry(1.8), 0.9)
        assert len(crits) == 2
        assert crits[0] == pytest.approx((2 * 0.9 - math.pi) / 3, abs=1e-10)
        assert crits[1] == pytest.approx((2 * 0.9 + math.pi) / 3, abs=1e-10)

    def test_empty(self):
        assert critical_angles(MirrorGeometry(0.5), 0.0) == []

    @given(st.floats(min_value=0.15, max_value=TWO_RAY_LIMIT - 0.02), gammas)
    def test_closed_form_and_stationarity(self, t0, g):
        geom = MirrorGeometry(t0)
        for tc in critical_angles(geom, g):
            forms = [(2 * g + (2 * m + 1) * math.pi) / 3 for m in (-2, -1, 0)]
            assert min(abs(tc - c) for c in forms) < 1e-9
            assert abs(incident_map_derivative(tc, g, 1)) < 1e-10


class TestPartnerAngle:
    def test_symmetric(self):
        beta = partner_angle(0.6, MirrorGeometry(1.0), HALF_PI)
        assert beta == pytest.approx(-0.6, abs=1e-12)

    def test_absent_at_extremum(self):
        assert partner_angle(0.0, MirrorGeometry(1.0), HALF_PI) is None

    def test_dense_scan_agreement_no_partner(self):
        # f(0.9) is attained once only on this mirror; the scan confirms it
        geom = MirrorGeometry(1.0)
        assert scan_partners(0.9, 1.0, 0.2) == []
        assert partner_angle(0.9, geom, 0.2) is None

    def test_dense_scan_agreement_with_partner(self):
        geom = MirrorGeometry(1.0)
        beta = partner_angle(-0.95, geom, 0.2)
        # independent high-precision oracle value
        assert beta == pytest.approx(-0.877941242847081, abs=1e-9)
        scan = scan_partners(-0.95, 1.0, 0.2)
        assert len(scan) == 1
        assert beta == pytest.approx(scan[0], abs=1e-7)

    @given(st.floats(min_value=0.3, max_value=TWO_RAY_LIMIT - 0.05),
           gammas, st.floats(min_value=-0.95, max_value=0.95))
    @settings(max_examples=25)
    def test_partner_level_and_residual(self, t0, g, frac):
        geom = MirrorGeometry(t0)
        alpha = frac * t0
        beta = partner_angle(alpha, geom, g)
        if beta is None:
            return
        target = incident_map(alpha, g)
        assert abs(incident_map(beta, g) - target) <= 1e-11 * max(1.0, abs(target))
        assert -t0 - 1e-9 <= beta <= t0 + 1e-9

    @given(st.floats(min_value=0.3, max_value=TWO_RAY_LIMIT - 0.05), gammas)
    @settings(max_examples=15)
    def test_at_most_one_partner(self, t0, g):
        # level sets of the ray map never hold more than two angles
        xs = np.linspace(-t0, t0, 4001)
        fv = (1.0 + np.cos(xs)) * np.sin(xs - g)
        for alpha in (-0.77 * t0, 0.13 * t0, 0.61 * t0):
            level = incident_map(alpha, g)
            crossings = np.count_nonzero(
                np.sign(fv[:-1] - level) * np.sign(fv[1:] - level) < 0)
            assert crossings <= 2


class TestPartnerDerivative:
    def test_symmetric_pair(self):
        pair = ray_pair(0.6, MirrorGeometry(1.0), HALF_PI)
        assert pair.dbeta_dalpha == pytest.approx(-1.0, rel=1e-12)
        assert partner_derivative(pair, HALF_PI) == pytest.approx(-1.0, rel=1e-12)

    def test_matches_finite_difference(self):
        geom = MirrorGeometry(1.3)
        g = 1.1
        h = 1e-4
        alpha = 0.52
        pair = ray_pair(alpha, geom, g)
        fd = (partner_angle(alpha + h, geom, g)
              - partner_angle(alpha - h, geom, g)) / (2 * h)
        assert partner_derivative(pair, g) == pytest.approx(fd, rel=1e-6)

    def test_singular_near_extremum(self):
        from focalfluc.geometry import RayPair
        pair = RayPair(alpha=1e-12, beta=-1e-12, h=0.0, dbeta_dalpha=-1.0)
        with pytest.raises(SingularPartnerDerivativeError):
            partner_derivative(pair, HALF_PI)


class TestPairDomain:
    def test_perpendicular_full_interval(self):
        fams = pair_domain(MirrorGeometry(1.0), HALF_PI)
        assert len(fams) == 1
        fam = fams[0]
        assert fam.critical_angle == pytest.approx(0.0, abs=1e-12)
        assert fam.alpha_interval[0] == pytest.approx(-1.0, abs=1e-9)
        assert fam.alpha_interval[1] == pytest.approx(1.0, abs=1e-9)
        assert fam.extremum_kind == "minimum"

    def test_two_families_frozen_boundaries(self):
        fams = pair_domain(MirrorGeometry(1.8), 0.9)
        assert len(fams) == 2
        # independent high-precision oracle values
        assert fams[0].alpha_interval[0] == pytest.approx(-1.8, abs=1e-12)
        assert fams[0].alpha_interval[1] == pytest.approx(
            0.710975438115455, abs=1e-8)
        assert fams[1].alpha_interval[0] == pytest.approx(
            1.50242258541169, abs=1e-8)
        assert fams[1].alpha_interval[1] == pytest.approx(1.8, abs=1e-12)

    def test_empty(self):
        assert pair_domain(MirrorGeometry(0.5), 0.0) == []

    @given(st.floats(min_value=0.3, max_value=TWO_RAY_LIMIT - 0.05), gammas)
    @settings(max_examples=20)
    def test_membership_matches_partner_existence(self, t0, g):
        geom = MirrorGeometry(t0)
        fams = pair_domain(geom, g)
        for frac in (-0.93, -0.41, 0.07, 0.55, 0.97):
            alpha = frac * t0
            inside = any(f.alpha_interval[0] - 1e-9 <= alpha
                         <= f.alpha_interval[1] + 1e-9 for f in fams)
            near_crit = any(abs(alpha - f.critical_angle) < 1e-6 for f in fams)
            has_partner = partner_angle(alpha, geom, g) is not None
            if near_crit:
                continue
            assert inside == has_partner

    @given(st.floats(min_value=0.3, max_value=TWO_RAY_LIMIT - 0.05), gammas)
    @settings(max_examples=20)
    def test_families_disjoint_and_ordered(self, t0, g):
        fams = pair_domain(MirrorGeometry(t0), g)
        for fam in fams:
            lo, hi = fam.alpha_interval
            assert lo < fam.critical_angle < hi
        for f1, f2 in zip(fams, fams[1:]):
            assert f1.alpha_interval[1] <= f2.alpha_interval[0] + 1e-9

    def test_mirror_image_under_gamma_reflection(self):
        fams = pair_domain(MirrorGeometry(1.8), 0.9)
        mirrored = pair_domain(MirrorGeometry(1.8), math.pi - 0.9)
        assert len(fams) == len(mirrored)
        for fam, mir in zip(fams, reversed(mirrored)):
            assert fam.critical_angle == pytest.approx(-mir.critical_angle,
                                                       abs=1e-9)
            assert fam.alpha_interval[0] == pytest.approx(
                -mir.alpha_interval[1], abs=1e-7)


class TestPartnerSeries:
    def test_symmetric_a2_vanishes(self):
        a = partner_series(0.0, HALF_PI, 4)
        assert a[0] == pytest.approx(0.0, abs=1e-14)

    @given(st.floats(min_value=0.4, max_value=TWO_RAY_LIMIT - 0.05), gammas)
    @settings(max_examples=25)
    def test_leading_coefficients_closed_forms(self, t0, g):
        geom = MirrorGeometry(t0)
        for tc in critical_angles(geom, g):
            a = partner_series(tc, g, 3)
            f2 = incident_map_derivative(tc, g, 2)
            f3 = incident_map_derivative(tc, g, 3)
            assert a[0] == pytest.approx(-f3 / (3 * f2), rel=1e-10, abs=1e-12)
            assert a[1] == pytest.approx(-f3 ** 2 / (9 * f2 ** 2), rel=1e-10,
                                         abs=1e-12)

    def test_sixth_order_convergence(self):
        geom = MirrorGeometry(1.8)
        g = 0.9
        tc = critical_angles(geom, g)[0]
        coeffs = partner_series(tc, g, 6)

        def predicted(alpha):
            xi = alpha - tc
            beta = 2 * tc - alpha
            for k, a_k in enumerate(coeffs, start=2):
                beta += a_k * xi ** k
            return beta

        errs = []
        for xi in (0.4, 0.2, 0.1):
            alpha = tc + xi
            errs.append(abs(predicted(alpha) - partner_angle(alpha, geom, g)))
        # halving the offset must shrink the error by at least 2^6 (until the
        # root solver's own resolution floor takes over)
        assert errs[1] <= errs[0] / 2 ** 6 * 1.5 or errs[1] < 5e-11
        assert errs[2] <= errs[1] / 2 ** 6 * 1.5 or errs[2] < 5e-11

    @pytest.mark.parametrize("order", [1, 7])
    def test_order_cap(self, order):
        with pytest.raises(ValueError):
            partner_series(0.0, HALF_PI, order)


class TestEdgeShift:
    def test_right_angle_mirror(self):
        assert edge_shift(MirrorGeometry(HALF_PI), HALF_PI - 0.1) == \
            pytest.approx(0.2, rel=1e-12)

    def test_zero_at_perpendicular(self):
        assert edge_shift(MirrorGeometry(1.234), HALF_PI) == pytest.approx(
            0.0, abs=1e-15)

    def test_unit_mirror(self):
        assert edge_shift(MirrorGeometry(1.0), HALF_PI - 0.1) == \
            pytest.approx(0.1480629521995288, rel=1e-12)


class TestValidation:
    def test_mirror_bounds(self):
        with pytest.raises(ValueError):
            MirrorGeometry(0.0)
        with pytest.raises(ValueError):
            MirrorGeometry(TWO_RAY_LIMIT)
        with pytest.raises(ValueError):
            MirrorGeometry(1.0, b=0.0)

    def test_point_bounds(self):
        with pytest.raises(ValueError):
            FocalPoint(0.0, 1.0)
        with pytest.raises(ValueError):
            FocalPoint(1.0, -0.1)
        with pytest.raises(ValueError):
            FocalPoint(1.0, math.pi + 0.1)
