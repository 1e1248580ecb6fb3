"""Model coefficient and scale models."""

import math
from dataclasses import dataclass
from dataclasses import replace as dataclass_replace
import sys

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # pragma: no cover - Python 3.10 compatibility
    from enum import Enum

    class StrEnum(str, Enum):
        """Backport of enum.StrEnum (Python 3.11+)."""

        def __str__(self) -> str:
            return str(self.value)

from fireda.utils.errors import ValidationError


class DiffusionMode(StrEnum):
    """Form of the heat diffusion term.

    LINEAR is div(k grad T) with k in m^2/s; CUBIC is div(k T^3 grad T) with
    k in m^2 s^-1 K^-3.
    """

    LINEAR = "linear"
    CUBIC = "cubic"


@dataclass(frozen=True)
class ModelCoefficients:
    """Immutable coefficient set of the heat and fuel equations.

    Attributes:
        k: Diffusivity
        A: Temperature rise rate (K/s)
        B: Arrhenius coefficient (K)
        C: Scaled heat transfer coefficient (1/K); 0 is the insulated case
        C_S: Fuel disappearance rate (1/s)
        T_a: Ambient temperature (K)
        T_0: Reaction cutoff temperature (K); None means T_a
        wind: Wind vector (m/s), one component per dimension; empty means calm
        diffusion: Diffusion term form
    """

    k: float
    A: float
    B: float
    C: float
    C_S: float
    T_a: float = 300.0
    T_0: float | None = None
    wind: tuple[float, ...] = ()
    diffusion: DiffusionMode = DiffusionMode.LINEAR

    def __post_init__(self) -> None:
        """Validate coefficients.

        Raises:
            ValidationError: If a coefficient is out of range
        """
        for name in ("k", "A", "B", "C_S"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive, got {value}", code="KIN_001")
        if not (math.isfinite(self.C) and self.C >= 0):
            raise ValidationError(f"C must be non-negative, got {self.C}", code="KIN_001")
        if self.T_0 is not None and self.T_0 > self.T_a:
            raise ValidationError(
                f"T_0 ({self.T_0}) must not exceed T_a ({self.T_a})", code="KIN_002"
            )
        object.__setattr__(self, "wind", tuple(float(v) for v in self.wind))
        object.__setattr__(self, "diffusion", DiffusionMode(self.diffusion))

    @property
    def cutoff(self) -> float:
        """Temperature below which no reaction occurs."""
        return self.T_a if self.T_0 is None else self.T_0

    def wind_vector(self, dims: int) -> tuple[float, ...]:
        """Wind components padded with zeros to the given dimension."""
        if len(self.wind) > dims:
            raise ValidationError(
                f"Wind has {len(self.wind)} components for a {dims}D grid", code="KIN_003"
            )
        return self.wind + (0.0,) * (dims - len(self.wind))

    def replace(self, **kwargs: object) -> "ModelCoefficients":
        """Create a new ModelCoefficients with updated fields.

        Args:
            **kwargs: Fields to update

        Returns:
            New ModelCoefficients instance with updated fields
        """
        return dataclass_replace(self, **kwargs)  # type: ignore[arg-type]


@dataclass(frozen=True)
class NondimParams:
    """The two dimensionless coefficients governing wave behaviour.

    Attributes:
        lam: C*B, heat loss relative to reaction heat
        beta: B*C_S/A, fuel burn rate relative to heating rate
    """

    lam: float
    beta: float

    def __post_init__(self) -> None:
        """Validate parameters.

        Raises:
            ValidationError: If a parameter is out of range
        """
        if not self.lam >= 0:
            raise ValidationError(f"lambda must be non-negative, got {self.lam}", code="KIN_004")
        if not self.beta > 0:
            raise ValidationError(f"beta must be positive, got {self.beta}", code="KIN_004")


@dataclass(frozen=True)
class Scales:
    """Temperature, length and time scales of a scaled solution.

    Attributes:
        T1: Temperature scale (K)
        x1: Length scale (m)
        t1: Time scale (s)
    """

    T1: float
    x1: float
    t1: float

    def __post_init__(self) -> None:
        """Validate scales.

        Raises:
            ValidationError: If a scale is not positive
        """
        for name in ("T1", "x1", "t1"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive, got {value}", code="KIN_005")


@dataclass(frozen=True)
class EquilibriumSet:
    """Equilibria of the spatially uniform, no-fuel-loss heat balance.

    Attributes:
        Tp: Stable low equilibrium (K)
        Ti: Unstable auto-ignition temperature (K)
        Tc: Stable combustion temperature (K)
        roots: Every root found, ascending
    """

    Tp: float | None
    Ti: float | None
    Tc: float | None
    roots: tuple[float, ...] = ()

    @property
    def is_bistable(self) -> bool:
        """True when all three equilibria exist."""
        return self.Tp is not None and self.Ti is not None and self.Tc is not None
