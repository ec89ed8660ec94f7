"""Exception hierarchy shared by every ordlab module."""


class OrdlabError(Exception):
    """Base class for all library errors."""


class VarCountMismatch(OrdlabError, ValueError):
    pass


class NotDivisible(OrdlabError, ArithmeticError):
    pass


class EndpointRoot(OrdlabError, ValueError):
    """A polynomial vanishes at an endpoint of the interval being inspected."""


class NotTotal(OrdlabError):
    """A nonzero vector vanished on every form of a tower."""


class NotPositive(OrdlabError, ValueError):
    pass


class OracleInconsistent(OrdlabError):
    """A sign oracle gave answers no order could produce."""


class Underdetermined(OrdlabError):
    """The element lies deeper in the convex chain than the configured stages reach."""


class DepthExceeded(OrdlabError, ValueError):
    pass


class CannotPerturb(OrdlabError):
    pass


class RankMismatch(OrdlabError, ValueError):
    pass


class IndexOrder(OrdlabError, ValueError):
    pass


class NotInDerived(OrdlabError, ValueError):
    pass


class StageDomain(OrdlabError, ValueError):
    pass


class NotInImage(OrdlabError, ValueError):
    pass


class RankTooSmall(OrdlabError, ValueError):
    pass


class BadLetter(OrdlabError, ValueError):
    pass


class ConfigError(OrdlabError, ValueError):
    pass
