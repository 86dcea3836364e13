"""Exception hierarchy shared by all modules."""


class UmbilicError(Exception):
    """Base class for all package errors."""


class DomainError(UmbilicError):
    """A chart point lies outside the valid model region."""


class EmptyBodyError(UmbilicError):
    """The intersection of the given balls is empty."""


class NonCompactError(UmbilicError):
    """The body is unbounded, touches the model boundary, or leaves the
    open hemisphere (spherical case)."""


class DegenerateError(UmbilicError):
    """A tangency or non-generic incidence was detected within tolerance.
    Callers may jitter the input and retry."""


class BlowUpError(UmbilicError):
    """The curvature ODE reached its blow-up time."""


class NonCompactSphereError(UmbilicError):
    """A closed-form quantity was requested for a non-compact lambda-sphere."""


class ToleranceError(UmbilicError):
    """An adaptive quadrature failed to meet the requested tolerance."""


class UnattainableError(UmbilicError):
    """No body with the requested property exists in the searched range."""


class EventNearbyError(UmbilicError):
    """A combinatorial flow event lies inside the finite-difference stencil."""
