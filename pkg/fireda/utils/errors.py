"""Custom exception classes for fireda."""


class FiredaError(Exception):
    """Base exception for all fireda errors."""

    def __init__(self, message: str, code: str) -> None:
        """Initialize error with message and code.

        Args:
            message: Human-readable error message
            code: Error code for programmatic handling
        """
        self.message = message
        self.code = code
        super().__init__(message)


class ValidationError(FiredaError):
    """Raised when an argument or model invariant is violated."""

    pass


class ConfigError(ValidationError):
    """Raised when an experiment configuration cannot be parsed or validated."""

    def __init__(self, message: str, code: str, key: str | None = None) -> None:
        """Initialize error with the offending configuration key.

        Args:
            message: Human-readable error message
            code: Error code for programmatic handling
            key: Dotted path of the offending key, if known
        """
        super().__init__(message, code)
        self.key = key

    def __str__(self) -> str:
        return f"{self.key}: {self.message}" if self.key else self.message


class NumericalDivergenceError(FiredaError):
    """Raised when a simulation produces non-finite values."""

    def __init__(
        self,
        message: str,
        code: str,
        time: float | None = None,
        member: int | None = None,
        cycle: int | None = None,
    ) -> None:
        """Initialize divergence error with its location.

        Args:
            message: Human-readable error message
            code: Error code for programmatic handling
            time: Simulation time of the offending step
            member: Ensemble member index, if any
            cycle: Assimilation cycle, if any
        """
        super().__init__(message, code)
        self.time = time
        self.member = member
        self.cycle = cycle
        self.detail = message

    def located(
        self, member: int | None = None, cycle: int | None = None
    ) -> "NumericalDivergenceError":
        """Return a copy annotated with the member and cycle that diverged."""
        where = []
        if member is not None:
            where.append(f"member {member}")
        if cycle is not None:
            where.append(f"cycle {cycle}")
        suffix = f" ({', '.join(where)})" if where else ""
        located = NumericalDivergenceError(
            f"{self.detail}{suffix}", self.code, time=self.time, member=member, cycle=cycle
        )
        located.detail = self.detail
        return located


class NoSustainedWaveError(FiredaError):
    """Raised when no developed traveling combustion wave can be measured."""

    pass


class WaveLeftDomainError(NoSustainedWaveError):
    """Raised when a burning wave has run into the far end of the domain."""

    pass


class ObservationError(FiredaError):
    """Raised when an observation specification does not fit the state."""

    pass


class AnalysisError(FiredaError):
    """Raised when the ensemble analysis step cannot be carried out."""

    pass


class SnapshotFormatError(FiredaError):
    """Raised when a snapshot file is corrupt or does not match its header."""

    pass
