"""Unit tests for reaction kinetics and coefficient identification."""

import math

import numpy as np
import pytest

from fireda.models import DiffusionMode, ModelCoefficients, NondimParams, Scales, WaveMetrics
from fireda.services import kinetics
from fireda.utils.errors import ValidationError
from tests.fixtures import grass_coefficients


def test_reaction_rate_vanishes_below_cutoff(grass_coefficients: ModelCoefficients) -> None:
    """Test that the rate is zero at and below the cutoff temperature."""
    assert kinetics.reaction_rate(300.0, grass_coefficients) == 0.0
    assert kinetics.reaction_rate(250.0, grass_coefficients) == 0.0
    coeffs = ModelCoefficients(k=1.0, A=1.0, B=100.0, C=0.0, C_S=1.0, T_a=300.0)
    assert kinetics.reaction_rate(400.0, coeffs) == pytest.approx(math.exp(-1.0))


def test_reaction_rate_is_increasing(grass_coefficients: ModelCoefficients) -> None:
    """Test that the rate increases with temperature and stays below one."""
    T = np.linspace(301.0, 5000.0, 200)
    rate = kinetics.reaction_rate(T, grass_coefficients)
    assert np.all(np.diff(rate) > 0)
    assert np.all(rate < 1.0)


def test_identify_bc_places_roots_at_given_temperatures() -> None:
    """Test that identified B and C make Ti and Tc roots of the heat balance."""
    B, C = kinetics.identify_BC(670.0, 1200.0, 300.0, 300.0)
    assert B == pytest.approx(558.5, rel=1e-3)
    assert C == pytest.approx(5.974e-4, rel=1e-3)
    assert kinetics.heat_balance(670.0, B, C, 300.0, 300.0) == pytest.approx(0.0, abs=1e-12)
    assert kinetics.heat_balance(1200.0, B, C, 300.0, 300.0) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("Ti", [400.0, 500.0, 670.0, 900.0])
@pytest.mark.parametrize("gap", [100.0, 300.0, 800.0])
def test_identified_equilibria_are_recovered(Ti: float, gap: float) -> None:
    """Test that the equilibria of identified coefficients sit at Ti and Tc."""
    Tc = Ti + gap
    B, C = kinetics.identify_BC(Ti, Tc, 300.0, 300.0)
    equilibria = kinetics.equilibrium_points(B, C, 300.0, 300.0)
    assert equilibria.is_bistable
    assert equilibria.Ti == pytest.approx(Ti, abs=1e-3)
    assert equilibria.Tc == pytest.approx(Tc, abs=1e-3)


def test_identify_bc_rejects_bad_ordering() -> None:
    """Test that Ti must lie strictly between T_a and Tc."""
    with pytest.raises(ValidationError) as exc:
        kinetics.identify_BC(1200.0, 1200.0, 300.0, 300.0)
    assert exc.value.code == "KIN_007"
    with pytest.raises(ValidationError):
        kinetics.identify_BC(250.0, 1200.0, 300.0, 300.0)


def test_equilibrium_points_classify_three_roots() -> None:
    """Test that the identified balance has cold, ignition and combustion equilibria."""
    B, C = kinetics.identify_BC(670.0, 1200.0, 300.0, 300.0)
    equilibria = kinetics.equilibrium_points(B, C, 300.0, 300.0)
    assert equilibria.is_bistable
    assert equilibria.Tp == 300.0
    assert equilibria.Ti == pytest.approx(670.0, abs=1e-3)
    assert equilibria.Tc == pytest.approx(1200.0, abs=1e-3)


def test_equilibrium_points_reject_low_ceiling() -> None:
    """Test that the scan ceiling must exceed ambient."""
    with pytest.raises(ValidationError):
        kinetics.equilibrium_points(558.5, 6e-4, 300.0, 300.0, T_max_scan=300.0)


def test_equilibrium_points_without_heat_loss_warns(caplog: pytest.LogCaptureFixture) -> None:
    """Test that an insulated balance is reported as not bistable."""
    equilibria = kinetics.equilibrium_points(558.5, 0.0, 300.0, 300.0)
    assert not equilibria.is_bistable
    assert "expected cold, ignition and combustion" in caplog.text


def test_heat_potential_extrema_match_equilibria() -> None:
    """Test that the potential dips between the ambient and ignition temperatures."""
    B, C = kinetics.identify_BC(670.0, 1200.0, 300.0, 300.0)
    assert kinetics.heat_potential(300.0, B, C, 300.0, 300.0) == 0.0
    at_ignition = kinetics.heat_potential(670.0, B, C, 300.0, 300.0)
    assert at_ignition < kinetics.heat_potential(500.0, B, C, 300.0, 300.0)
    assert at_ignition < kinetics.heat_potential(800.0, B, C, 300.0, 300.0)


def test_heat_balance_curve() -> None:
    """Test that the sampled potential integrates the sampled balance from T_a."""
    B, C = kinetics.identify_BC(670.0, 1200.0, 300.0, 300.0)
    T, f, U = kinetics.heat_balance_curve(B, C, 300.0, 300.0, 1500.0, points=121)
    assert T[0] == 300.0
    assert T[-1] == 1500.0
    np.testing.assert_allclose(f, kinetics.heat_balance(T, B, C, 300.0, 300.0))
    assert U[0] == 0.0
    for index in (37, 90, 120):
        expected = kinetics.heat_potential(float(T[index]), B, C, 300.0, 300.0)
        assert U[index] == pytest.approx(expected, rel=1e-8, abs=1e-10)
    with pytest.raises(ValidationError) as exc:
        kinetics.heat_balance_curve(B, C, 300.0, 300.0, 300.0)
    assert exc.value.code == "KIN_009"


def test_identify_a_from_cooling_time() -> None:
    """Test that A follows from the cooling time and is its inverse."""
    A = kinetics.identify_A(5.9739e-4, 110.0)
    assert A == pytest.approx(15.218, rel=1e-3)
    assert kinetics.cooling_time(A, 5.9739e-4) == pytest.approx(110.0)
    assert kinetics.cooling_time(A, 0.0) == math.inf
    with pytest.raises(ValidationError):
        kinetics.identify_A(0.0, 110.0)


def test_nondim_params_of_calibrated_set(grass_coefficients: ModelCoefficients) -> None:
    """Test that the calibrated set has lambda = 2.7e-2 and beta = 0.4829."""
    nd = kinetics.nondim_params(grass_coefficients)
    assert nd.lam == pytest.approx(2.700e-2, rel=5e-3)
    assert nd.beta == pytest.approx(0.4829, rel=5e-3)


def test_rescale_round_trip_on_random_inputs() -> None:
    """Test that nondim_params undoes rescale_coefficients."""
    rng = np.random.default_rng(0)
    for _ in range(1000):
        nd = NondimParams(lam=float(rng.uniform(0.0, 1.0)), beta=float(rng.uniform(0.01, 5.0)))
        scales = Scales(
            T1=float(rng.uniform(10.0, 2000.0)),
            x1=float(rng.uniform(0.01, 100.0)),
            t1=float(rng.uniform(0.01, 100.0)),
        )
        back = kinetics.nondim_params(kinetics.rescale_coefficients(nd, scales, T_a=300.0))
        assert back.lam == pytest.approx(nd.lam, rel=1e-12, abs=1e-15)
        assert back.beta == pytest.approx(nd.beta, rel=1e-12)


def test_unit_scales_give_dimensionless_coefficients() -> None:
    """Test that unit scales reproduce k = A = B = 1, C = lambda, C_S = beta."""
    nd = NondimParams(lam=0.027, beta=0.4829)
    coeffs = kinetics.rescale_coefficients(nd, Scales(T1=1.0, x1=1.0, t1=1.0), T_a=300.0)
    assert (coeffs.k, coeffs.A, coeffs.B) == (1.0, 1.0, 1.0)
    assert coeffs.C == 0.027
    assert coeffs.C_S == 0.4829
    dimensionless = kinetics.dimensionless_coefficients(nd)
    assert dimensionless.T_a == 0.0
    assert dimensionless.cutoff == 0.0


def test_natural_scales_invert_rescaling() -> None:
    """Test that natural_scales recovers the scales a set was built from."""
    nd = NondimParams(lam=0.027, beta=0.4829)
    scales = Scales(T1=558.49, x1=0.797, t1=2.97)
    for mode in DiffusionMode:
        coeffs = kinetics.rescale_coefficients(nd, scales, T_a=300.0, diffusion=mode)
        recovered = kinetics.natural_scales(coeffs)
        assert recovered.T1 == pytest.approx(scales.T1, rel=1e-12)
        assert recovered.x1 == pytest.approx(scales.x1, rel=1e-12)
        assert recovered.t1 == pytest.approx(scales.t1, rel=1e-12)


def test_natural_scales_of_calibrated_set(grass_coefficients: ModelCoefficients) -> None:
    """Test the length and time scales of the calibrated set."""
    scales = kinetics.natural_scales(grass_coefficients)
    assert scales.T1 == 558.49
    assert scales.t1 == pytest.approx(2.972, rel=1e-3)
    assert scales.x1 == pytest.approx(0.797, rel=1e-3)


def test_scales_from_wave_matches_target() -> None:
    """Test that the fitted scales map the dimensionless wave onto the target."""
    nondim_wave = WaveMetrics(Tmax=1.6, width=12.0, speed=0.05)
    target = WaveMetrics(Tmax=900.0, width=10.0, speed=0.17)
    scales = kinetics.scales_from_wave(nondim_wave, target)
    physical = kinetics.dimensionalize_wave(nondim_wave, scales)
    assert physical.Tmax == pytest.approx(target.Tmax)
    assert physical.width == pytest.approx(target.width)
    assert physical.speed == pytest.approx(target.speed)
    back = kinetics.nondimensionalize_wave(physical, scales)
    assert back.speed == pytest.approx(nondim_wave.speed)
