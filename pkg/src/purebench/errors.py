"""Exception hierarchy shared by every module."""


class PurityError(Exception):
    """Base class for all errors raised by purebench."""


class ValidationError(PurityError, ValueError):
    """An object, morphism or table violates one of its defining axioms."""


class CapabilityError(PurityError):
    """The request is well-formed but cannot be computed at finite scale.

    Raised when a hom-object would exceed the size guard, or when an operation
    asks for something that has no finite representation (e.g. enumerating
    every tolerance of an interval quantale).
    """


class Unsupported(PurityError):
    """The operation is defined, but not for this combination of inputs."""
