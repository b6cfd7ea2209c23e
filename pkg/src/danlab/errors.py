"""Exception hierarchy.

Domain errors (bad input, unreachable targets) derive from ``DomainError``;
the CLI maps them to exit code 2.  ``InvariantBreach`` signals a bug or a
numerical failure of a guarantee the library promised, and maps to exit 70.
"""


class DanlabError(Exception):
    pass


class DomainError(DanlabError, ValueError):
    pass


class InvariantBreach(DanlabError, AssertionError):
    pass


class ZeroPolynomial(DomainError):
    pass


class ZeroLeadingCoefficient(DomainError):
    pass


class NotSquarefree(DomainError):
    pass


class NotOnSurface(DomainError):
    def __init__(self, residual, message=None):
        self.residual = residual
        super().__init__(message or f"point is not on the surface (xy - P(z) = {residual})")


class BackendMismatch(DomainError):
    pass


class ExactBackendUnsupported(BackendMismatch):
    pass


class DuplicatePoint(DomainError):
    pass


class MixedSurfaces(DomainError):
    pass


class DuplicateNode(DomainError):
    pass


class NotInjective(DomainError):
    pass


class NoExactFlowTime(DomainError):
    pass


class SearchDiverged(DomainError):
    pass


class ExhaustedAttempts(DomainError):
    pass


class InjectivityLost(DomainError):
    pass


class InfeasibleRegion(DomainError):
    pass


class BoundNotAchievable(DomainError):
    pass
