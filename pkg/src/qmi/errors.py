"""Exception hierarchy shared across the toolkit.

Every domain failure maps to a distinct class so callers (and the CLI)
can tell validation problems, regime problems, and numerical faults apart.
"""


class QmiError(Exception):
    """Base class for all toolkit errors."""


class NotHermitianError(QmiError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""

    def __init__(self, deviation, tol):
        self.deviation = float(deviation)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not Hermitian: max deviation {self.deviation:.3e} "
            f"exceeds tolerance {self.tol:.1e}"
        )


class NotPositiveError(QmiError):
    """Eigenvalue below the numerical PSD floor, or too much clamped mass."""

    def __init__(self, message, eigenvalue=None):
        self.eigenvalue = eigenvalue
        super().__init__(message)


class BadTraceError(QmiError):
    """Trace differs from 1 beyond tolerance."""

    def __init__(self, trace, tol):
        self.trace = float(trace)
        self.tol = float(tol)
        super().__init__(
            f"trace {self.trace!r} differs from 1 by more than {self.tol:.1e}"
        )


class DimensionMismatchError(QmiError):
    """Subsystem dimension lists are inconsistent with the data or each other."""


class EigensolverError(QmiError):
    """The eigensolver failed to converge or returned an inconsistent result."""


class BoundInapplicableError(QmiError):
    """Bound evaluated outside its regime (epsilon > 1 or epsilon < 0).

    Carries ``fallback``, the trivial a-priori cap on the bounded quantity,
    so callers can still report something meaningful.
    """

    def __init__(self, epsilon, fallback):
        self.epsilon = float(epsilon)
        self.fallback = float(fallback)
        super().__init__(
            f"bound not applicable at epsilon={self.epsilon!r}; "
            f"a-priori cap is {self.fallback!r}"
        )


class DegenerateCaseError(QmiError):
    """The two states coincide (epsilon = 0); the decomposition is undefined."""


class OutOfRegimeError(QmiError):
    """Trace distance exceeds 1, outside the regime of the decomposition."""


class NegativeCMIError(QmiError):
    """Conditional mutual information below -tolerance.

    Strong subadditivity forbids this for valid states, so a genuinely
    negative value signals a numerical or logic fault.
    """


class IsometryError(QmiError):
    """Extension machinery produced a non-isometry or lost the marginal."""


class StateFileError(QmiError):
    """State file violates the JSON schema."""
