"""Reaction kinetics, equilibrium analysis and coefficient identification.

The model coefficients are identified from observable fire behaviour rather
than material properties: B and C from the auto-ignition and combustion
temperatures, A from the cooling time, and the remaining freedom from the
dimensionless pair (lambda, beta) together with the scales of a measured wave.
"""

import logging
import math
from typing import overload

import numpy as np
import numpy.typing as npt
from scipy import integrate, optimize

from fireda.models.coefficients import (
    DiffusionMode,
    EquilibriumSet,
    ModelCoefficients,
    NondimParams,
    Scales,
)
from fireda.models.wave import WaveMetrics
from fireda.utils.errors import ValidationError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

DEFAULT_SCAN_CEILING = 3000.0
DEFAULT_SCAN_STEP = 1.0
DEFAULT_ROOT_TOLERANCE = 1e-6
DERIVATIVE_STEP = 1e-3


def _modified_arrhenius(T: npt.ArrayLike, B: float, T_0: float) -> FloatArray:
    excess = np.asarray(T, dtype=np.float64) - T_0
    hot = excess > 0
    safe = np.where(hot, excess, 1.0)
    return np.where(hot, np.exp(-B / safe), 0.0)


@overload
def reaction_rate(T: float, coeffs: ModelCoefficients) -> float: ...


@overload
def reaction_rate(T: FloatArray, coeffs: ModelCoefficients) -> FloatArray: ...


def reaction_rate(T: float | FloatArray, coeffs: ModelCoefficients) -> float | FloatArray:
    """Arrhenius rate with no oxidation below the cutoff temperature.

    Args:
        T: Temperature (K), scalar or array
        coeffs: Coefficients supplying B and the cutoff T_0

    Returns:
        exp(-B / (T - T_0)) where T > T_0, else 0

    Examples:
        >>> coeffs = ModelCoefficients(k=1.0, A=1.0, B=100.0, C=0.0, C_S=1.0, T_a=300.0)
        >>> reaction_rate(400.0, coeffs)  # doctest: +ELLIPSIS
        0.36787944...
    """
    rate = _modified_arrhenius(T, coeffs.B, coeffs.cutoff)
    return float(rate) if np.ndim(T) == 0 else rate


@overload
def heat_balance(T: float, B: float, C: float, T_a: float, T_0: float) -> float: ...


@overload
def heat_balance(T: FloatArray, B: float, C: float, T_a: float, T_0: float) -> FloatArray: ...


def heat_balance(
    T: float | FloatArray, B: float, C: float, T_a: float, T_0: float
) -> float | FloatArray:
    """Reaction heat minus heat lost to the environment, f(T).

    Args:
        T: Temperature (K)
        B: Arrhenius coefficient (K)
        C: Scaled heat transfer coefficient (1/K)
        T_a: Ambient temperature (K)
        T_0: Reaction cutoff temperature (K)

    Returns:
        r(T) - C (T - T_a)
    """
    balance = _modified_arrhenius(T, B, T_0) - C * (np.asarray(T, dtype=np.float64) - T_a)
    return float(balance) if np.ndim(T) == 0 else balance


def heat_potential(T: float, B: float, C: float, T_a: float, T_0: float) -> float:
    """Heat balance potential U with U' = f and U(T_a) = 0.

    Since dT/dt = A U'(T), stable equilibria sit at local maxima of U and the
    ignition temperature at the local minimum between them.
    """
    value, _ = integrate.quad(lambda s: heat_balance(float(s), B, C, T_a, T_0), T_a, T)
    return float(value)


def heat_balance_curve(
    B: float, C: float, T_a: float, T_0: float, T_max: float, points: int = 201
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """Heat balance f and potential U sampled on [T_a, T_max].

    Returns:
        Tuple (T, f, U) of equally long arrays

    Raises:
        ValidationError: If T_max <= T_a or fewer than 2 points are requested
    """
    if not (T_max > T_a and points >= 2):
        raise ValidationError(
            f"Need T_max > T_a and at least 2 points, got T_max={T_max}, points={points}",
            code="KIN_009",
        )
    T = np.linspace(T_a, T_max, points)
    f = heat_balance(T, B, C, T_a, T_0)
    # quad on each interval, so the kink at the cutoff stays exact
    steps = [
        integrate.quad(lambda s: heat_balance(float(s), B, C, T_a, T_0), lo, hi)[0]
        for lo, hi in zip(T[:-1], T[1:])
    ]
    U = np.concatenate(([0.0], np.cumsum(steps)))
    return T, f, U


def _derivative(T: float, B: float, C: float, T_a: float, T_0: float) -> float:
    h = DERIVATIVE_STEP
    return (heat_balance(T + h, B, C, T_a, T_0) - heat_balance(T - h, B, C, T_a, T_0)) / (2 * h)


def equilibrium_points(
    B: float,
    C: float,
    T_a: float,
    T_0: float,
    T_max_scan: float = DEFAULT_SCAN_CEILING,
    step: float = DEFAULT_SCAN_STEP,
    tolerance: float = DEFAULT_ROOT_TOLERANCE,
) -> EquilibriumSet:
    """Find and classify the roots of the heat balance.

    Sign changes are bracketed on a uniform scan of (T_0, T_max_scan] and refined
    by bisection. A root is stable when f decreases through it. With T_0 = T_a
    the ambient temperature is itself a (degenerate) stable root.

    Args:
        B: Arrhenius coefficient (K)
        C: Scaled heat transfer coefficient (1/K)
        T_a: Ambient temperature (K)
        T_0: Reaction cutoff temperature (K)
        T_max_scan: Upper end of the scan (K)
        step: Scan step (K)
        tolerance: Bisection tolerance (K)

    Returns:
        Classified equilibria; absent ones are None

    Raises:
        ValidationError: If the scan range is empty
    """
    if not T_max_scan > T_a:
        raise ValidationError(
            f"Scan ceiling {T_max_scan} must exceed ambient {T_a}", code="KIN_006"
        )

    def balance(T: float) -> float:
        return heat_balance(T, B, C, T_a, T_0)

    roots: list[float] = []
    if T_0 == T_a:
        roots.append(T_a)
    nodes = np.arange(T_0 + step, T_max_scan + 0.5 * step, step)
    values = heat_balance(nodes, B, C, T_a, T_0)
    for i in range(len(nodes) - 1):
        left, right = values[i], values[i + 1]
        if left == 0.0:
            roots.append(float(nodes[i]))
        elif left * right < 0:
            roots.append(float(optimize.bisect(balance, nodes[i], nodes[i + 1], xtol=tolerance)))

    stable = [root for root in roots if _derivative(root, B, C, T_a, T_0) < 0]
    unstable = [root for root in roots if root not in stable]

    Tp: float | None = None
    Ti: float | None = None
    Tc: float | None = None
    if unstable:
        Ti = unstable[0]
        below = [root for root in stable if root < Ti]
        above = [root for root in stable if root > Ti]
        Tp = below[-1] if below else None
        Tc = above[0] if above else None
    elif stable:
        # Without an ignition threshold the single stable state is either cold or burning.
        if heat_balance(T_a, B, C, T_a, T_0) > 0 and stable[0] > T_a:
            Tc = stable[0]
        else:
            Tp = stable[0]

    result = EquilibriumSet(Tp=Tp, Ti=Ti, Tc=Tc, roots=tuple(roots))
    if not result.is_bistable:
        logger.warning(
            "Heat balance has %d root(s) %s; expected cold, ignition and combustion equilibria",
            len(roots),
            [round(r, 3) for r in roots],
        )
    return result


def identify_BC(Ti: float, Tc: float, T_a: float, T_0: float) -> tuple[float, float]:
    """Coefficients B and C placing equilibria at Ti and Tc.

    Args:
        Ti: Auto-ignition temperature (K)
        Tc: Combustion temperature (K)
        T_a: Ambient temperature (K)
        T_0: Reaction cutoff temperature (K)

    Returns:
        Tuple (B, C)

    Raises:
        ValidationError: Unless T_0 <= T_a < Ti < Tc
    """
    if not (T_0 <= T_a < Ti < Tc):
        raise ValidationError(
            f"Need T_0 <= T_a < Ti < Tc, got T_0={T_0}, T_a={T_a}, Ti={Ti}, Tc={Tc}",
            code="KIN_007",
        )
    B = math.log((Ti - T_a) / (Tc - T_a)) / (1.0 / (Tc - T_0) - 1.0 / (Ti - T_0))
    C = math.exp(-B / (Ti - T_0)) / (Ti - T_a)
    return B, C


def identify_A(C: float, t_c: float) -> float:
    """Temperature rise rate from the characteristic cooling time.

    Raises:
        ValidationError: If C or t_c is not positive
    """
    if not (C > 0 and t_c > 0):
        raise ValidationError(f"C and t_c must be positive, got C={C}, t_c={t_c}", code="KIN_008")
    return 1.0 / (C * t_c)


def cooling_time(A: float, C: float) -> float:
    """Time for an unfuelled temperature excess to decay by a factor e."""
    return 1.0 / (A * C) if C > 0 else math.inf


def nondim_params(coeffs: ModelCoefficients) -> NondimParams:
    """Dimensionless coefficients lambda = C B and beta = B C_S / A."""
    return NondimParams(lam=coeffs.C * coeffs.B, beta=coeffs.B * coeffs.C_S / coeffs.A)


def rescale_coefficients(
    nd: NondimParams,
    scales: Scales,
    T_a: float,
    diffusion: DiffusionMode = DiffusionMode.LINEAR,
) -> ModelCoefficients:
    """Coefficients whose solution is the dimensionless one stretched by scales.

    Args:
        nd: Dimensionless coefficients
        scales: Temperature, length and time scales
        T_a: Ambient temperature (K)
        diffusion: Diffusion term form, which fixes the units of k

    Returns:
        Physical coefficient set with T_0 = T_a
    """
    if diffusion is DiffusionMode.CUBIC:
        k = scales.x1**2 / (scales.T1**3 * scales.t1)
    else:
        k = scales.x1**2 / scales.t1
    return ModelCoefficients(
        k=k,
        A=scales.T1 / scales.t1,
        B=scales.T1,
        C=nd.lam / scales.T1,
        C_S=nd.beta / scales.t1,
        T_a=T_a,
        diffusion=diffusion,
    )


def dimensionless_coefficients(
    nd: NondimParams, diffusion: DiffusionMode = DiffusionMode.LINEAR
) -> ModelCoefficients:
    """The dimensionless system written as an ordinary coefficient set."""
    return rescale_coefficients(nd, Scales(T1=1.0, x1=1.0, t1=1.0), T_a=0.0, diffusion=diffusion)


def natural_scales(coeffs: ModelCoefficients) -> Scales:
    """Scales that map a coefficient set onto its dimensionless system."""
    t1 = coeffs.B / coeffs.A
    if coeffs.diffusion is DiffusionMode.CUBIC:
        x1 = math.sqrt(coeffs.k * coeffs.B**3 * t1)
    else:
        x1 = math.sqrt(coeffs.k * t1)
    return Scales(T1=coeffs.B, x1=x1, t1=t1)


def scales_from_wave(nondim_wave: WaveMetrics, physical_wave: WaveMetrics) -> Scales:
    """Scales matching a dimensionless wave to a measured one.

    The physical speed is (x1 / t1) times the dimensionless speed.

    Args:
        nondim_wave: Wave of the dimensionless system
        physical_wave: Measured (target) wave

    Returns:
        Scales T1, x1, t1
    """
    x1 = physical_wave.width / nondim_wave.width
    return Scales(
        T1=physical_wave.Tmax / nondim_wave.Tmax,
        x1=x1,
        t1=x1 * nondim_wave.speed / physical_wave.speed,
    )


def nondimensionalize_wave(wave: WaveMetrics, scales: Scales) -> WaveMetrics:
    """Express a physical wave in the units of the given scales."""
    return WaveMetrics(
        Tmax=wave.Tmax / scales.T1,
        width=wave.width / scales.x1,
        speed=wave.speed * scales.t1 / scales.x1,
    )


def dimensionalize_wave(wave: WaveMetrics, scales: Scales) -> WaveMetrics:
    """Inverse of nondimensionalize_wave."""
    return WaveMetrics(
        Tmax=wave.Tmax * scales.T1,
        width=wave.width * scales.x1,
        speed=wave.speed * scales.x1 / scales.t1,
    )
