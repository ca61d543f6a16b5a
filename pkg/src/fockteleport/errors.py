"""Exception types shared across the package."""


class FockTeleportError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FockTeleportError, ValueError):
    """Bad mode names, mappings, optical specs or run configuration."""


class InvalidStateError(FockTeleportError, ValueError):
    """A state violates a construction invariant (norm, photon number, finiteness)."""


class InvariantViolation(FockTeleportError, RuntimeError):
    """An internal invariant failed during a run."""


class ConventionViolation(InvariantViolation):
    """A detector pattern that the calibrated Bell beam splitter can never produce.

    Seeing one means the beam splitter in front of the detector pair is wired
    with a different convention than the classifier assumes.
    """
