"""Exceptions raised by the compiler.  The CLI maps each one to a fixed exit code."""

import numpy as np


class DAQCError(Exception):
    """Base class."""


class UnsimulableError(DAQCError, ValueError):
    """A target coupling has no source counterpart."""

    def __init__(self, key, strength):
        self.key = key
        self.strength = strength
        i, j, mu, nu = key
        super().__init__(
            f"unsimulable: target coupling ({i},{j},{mu},{nu}) = {strength:g} "
            f"has zero source coupling"
        )


class SingularSystemError(DAQCError, np.linalg.LinAlgError):
    """The block-time system has no exact solution."""


class NegativeTimeError(DAQCError, ValueError):
    """The exact solve produced negative block durations."""

    def __init__(self, offending, message=None):
        self.offending = list(offending)
        labels = ", ".join(f"{g}:{t:.3g}" for g, t in self.offending[:8])
        more = "" if len(self.offending) <= 8 else f" (+{len(self.offending) - 8} more)"
        super().__init__(
            message
            or f"negative block times for columns {labels}{more}; "
            f"use solve_positive_times for an implementable schedule"
        )


class ResidualError(DAQCError, RuntimeError):
    """Non-negative solve converged with residual above tolerance."""

    def __init__(self, residual, tolerance):
        self.residual = residual
        self.tolerance = tolerance
        super().__init__(f"residual {residual:.3e} exceeds tolerance {tolerance:.3e}")
