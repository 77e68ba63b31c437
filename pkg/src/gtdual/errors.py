"""Exception hierarchy shared by all gtdual modules."""


class GroupTestingError(ValueError):
    """Base class for every error raised by gtdual."""


class IndexOutOfRange(GroupTestingError):
    pass


class DuplicateMember(GroupTestingError):
    pass


class EmptyGroup(GroupTestingError):
    pass


class EmptyInput(GroupTestingError):
    pass


class InvalidParameter(GroupTestingError):
    pass


class LengthMismatch(GroupTestingError):
    pass


class InconsistentObservation(GroupTestingError):
    """A positive test whose members are all certainly negative."""


class ProblemTooLarge(GroupTestingError):
    """The requested engine would exceed its configured enumeration cap."""


class ZeroEvidence(GroupTestingError):
    """The normalization constant of the posterior vanished."""
