import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from focalfluc.fields import e_squared_perp_exact
from focalfluc.geometry import MirrorGeometry
from focalfluc.observables import (
    AtomParams,
    ObservableInputs,
    beam_deflection,
    casimir_polder_potential,
    interferometer_phase,
    lambda_coefficient,
    trap_temperature,
)

REF = ObservableInputs(lambda_coeff=1e-3, a_microns=1.0, t_millis=1.0)
SODIUM = AtomParams()

positive = st.floats(min_value=0.05, max_value=20.0)


class TestLambdaCoefficient:
    def test_identity_on_scaled_field(self):
        assert lambda_coefficient(0.0) == 0.0
        assert lambda_coefficient(-2.3555e-3) == -2.3555e-3

    def test_large_mirror_positive(self):
        lam = lambda_coefficient(
            e_squared_perp_exact(MirrorGeometry(1.8), 1.0).scaled)
        assert lam == pytest.approx(7.66091598323685e-4, rel=1e-12)

    def test_unit_mirror_negative(self):
        lam = lambda_coefficient(
            e_squared_perp_exact(MirrorGeometry(1.0), 1.0).scaled)
        assert lam == pytest.approx(-2.35543886138212e-3, rel=1e-12)


class TestCasimirPolder:
    def test_zero_field(self):
        assert casimir_polder_potential(3.0e-22, 0.0) == 0.0

    @given(st.floats(min_value=1e-24, max_value=1e-20),
           st.floats(min_value=-10.0, max_value=10.0).filter(
               lambda x: abs(x) > 1e-6))
    def test_sign_opposite_to_field(self, alpha, e2):
        v = casimir_polder_potential(alpha, e2)
        assert v * e2 < 0.0

    def test_linear_in_polarizability(self):
        v1 = casimir_polder_potential(1.0e-22, 2.0)
        v2 = casimir_polder_potential(2.0e-22, 2.0)
        assert v2 == pytest.approx(2.0 * v1, rel=1e-14)

    def test_gaussian_to_internal_conversion(self):
        # the internal polarizability is 4*pi times the Gaussian input
        assert casimir_polder_potential(1.0, 1.0) == pytest.approx(
            -0.5 * 4.0 * math.pi, rel=1e-14)


class TestBeamDeflection:
    def test_reference_point(self):
        assert beam_deflection(REF, SODIUM) == pytest.approx(0.25, rel=1e-14)

    def test_sixth_power_distance(self):
        inputs = ObservableInputs(1e-3, a_microns=2.0)
        assert beam_deflection(inputs, SODIUM) == pytest.approx(0.25 / 64.0,
                                                                rel=1e-14)

    def test_quadratic_time(self):
        inputs = ObservableInputs(1e-3, t_millis=2.0)
        assert beam_deflection(inputs, SODIUM) == pytest.approx(1.0, rel=1e-14)

    def test_heavier_atom_deflects_less(self):
        heavy = AtomParams(mass_ratio=4.0)
        assert beam_deflection(REF, heavy) == pytest.approx(0.25 / 4.0,
                                                            rel=1e-14)


class TestInterferometerPhase:
    def test_reference_point(self):
        assert interferometer_phase(REF, SODIUM) == pytest.approx(0.04,
                                                                  rel=1e-14)

    def test_fourth_power_distance(self):
        inputs = ObservableInputs(1e-3, a_microns=10.0 ** 0.25)
        assert interferometer_phase(inputs, SODIUM) == pytest.approx(
            0.004, rel=1e-12)

    def test_zero_coefficient(self):
        assert interferometer_phase(ObservableInputs(0.0), SODIUM) == 0.0

    @given(positive, positive)
    def test_deflection_phase_ratio_invariant(self, lam_scale, pol_ratio):
        # both observables are linear in the coefficient and polarizability,
        # so their ratio depends on neither
        atom = AtomParams(polarizability_ratio=pol_ratio)
        inputs = ObservableInputs(1e-3 * lam_scale, a_microns=1.3,
                                  t_millis=0.7)
        ratio = (beam_deflection(inputs, atom)
                 / interferometer_phase(inputs, atom))
        ref = (beam_deflection(ObservableInputs(1e-3, 1.3, 0.7), SODIUM)
               / interferometer_phase(ObservableInputs(1e-3, 1.3, 0.7), SODIUM))
        assert ratio == pytest.approx(ref, rel=1e-12)


class TestTrapTemperature:
    def test_reference_point(self):
        assert trap_temperature(REF, SODIUM) == pytest.approx(2e-9, rel=1e-14)

    def test_linear_in_coefficient(self):
        assert trap_temperature(ObservableInputs(2e-3), SODIUM) == \
            pytest.approx(4e-9, rel=1e-14)

    @pytest.mark.parametrize("lam", [0.0, -1e-3])
    def test_no_trap_without_positive_coefficient(self, lam):
        if lam == 0.0:
            with pytest.raises(ValueError):
                trap_temperature(ObservableInputs(lam), SODIUM)
        else:
            with pytest.raises(ValueError, match="no trap"):
                trap_temperature(ObservableInputs(lam), SODIUM)

    def test_end_to_end_from_large_mirror(self):
        lam = lambda_coefficient(
            e_squared_perp_exact(MirrorGeometry(1.8), 1.0).scaled)
        t = trap_temperature(ObservableInputs(lam), SODIUM)
        assert t == pytest.approx(2e-9 * lam / 1e-3, rel=1e-12)


class TestValidation:
    def test_atom_params(self):
        with pytest.raises(ValueError):
            AtomParams(polarizability_ratio=0.0)
        with pytest.raises(ValueError):
            AtomParams(mass_ratio=-1.0)

    def test_inputs(self):
        with pytest.raises(ValueError):
            ObservableInputs(1e-3, a_microns=0.0)
        with pytest.raises(ValueError):
            ObservableInputs(1e-3, t_millis=-1.0)
