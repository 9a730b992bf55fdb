"""Exception hierarchy shared by all reslat modules."""


class ReslatError(Exception):
    """Base class for all package errors."""


class InvalidSpecError(ReslatError):
    """A construction request was malformed (bad size, bad kind, ...)."""


class DomainError(ReslatError):
    """An argument fell outside the operation's declared domain."""


class SignatureError(ReslatError):
    """A required operation table is missing or shaped wrongly."""


class ResourceError(ReslatError):
    """A configured size/closure budget was exceeded."""


class InternalError(ReslatError):
    """An impossible state was reached; indicates a bug or broken input."""


class ClosureError(ReslatError):
    """An assignment set is not closed under a required substitution."""

    def __init__(self, world, assignment, tau):
        self.world = world
        self.assignment = assignment
        self.tau = tau
        super().__init__(
            "assignment set of world %r lacks %r o %r" % (world, assignment, tau)
        )


class NotComplementedError(ReslatError):
    """The requested element has no lattice complement."""


class PreconditionError(ReslatError):
    """A documented operation precondition does not hold."""


class NoGenericPointError(ReslatError):
    """Every admissible maximal filter is excluded; carries the obstruction."""

    def __init__(self, message, inside=None, avoid=None):
        self.inside = inside
        self.avoid = avoid
        super().__init__(message)
