"""Traveling wave and trajectory models."""

from dataclasses import dataclass

from fireda.models.state import FireState
from fireda.utils.errors import ValidationError


@dataclass(frozen=True)
class WaveMetrics:
    """Observable properties of a traveling combustion wave.

    Attributes:
        Tmax: Peak temperature above ambient (K)
        width: Width of the region above 50% of the peak (m)
        speed: Front propagation speed (m/s)
    """

    Tmax: float
    width: float
    speed: float

    def __post_init__(self) -> None:
        """Validate metrics.

        Raises:
            ValidationError: If a metric is not positive
        """
        for name in ("Tmax", "width", "speed"):
            value = getattr(self, name)
            if not value > 0:
                raise ValidationError(f"Wave {name} must be positive, got {value}", code="WAVE_001")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Snapshots of one simulation at increasing times.

    Attributes:
        states: Snapshots in time order
    """

    states: tuple[FireState, ...]

    def __post_init__(self) -> None:
        """Validate snapshot ordering.

        Raises:
            ValidationError: If times are not strictly increasing
        """
        if not self.states:
            raise ValidationError("Trajectory needs at least one snapshot", code="SOLV_005")
        times = self.times
        if any(b <= a for a, b in zip(times, times[1:], strict=False)):
            raise ValidationError("Trajectory times must be strictly increasing", code="SOLV_005")

    @property
    def times(self) -> tuple[float, ...]:
        """Snapshot times."""
        return tuple(state.time for state in self.states)

    @property
    def final(self) -> FireState:
        """Last snapshot."""
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.states)
