"""Exception hierarchy shared by all engines."""


class SflowError(Exception):
    """Base class for every error raised by sflowkit."""


class ExprSyntaxError(SflowError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(SflowError, ValueError):
    def __init__(self, name, offset):
        super().__init__(f"unknown identifier {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


class DomainError(SflowError, ArithmeticError):
    pass


class NotDifferentiable(SflowError):
    pass


class ConfigError(SflowError, ValueError):
    pass


class XDependentUnsupported(SflowError):
    pass


class InvalidEndpoint(SflowError):
    pass


class EndpointSingular(InvalidEndpoint):
    pass


class DegenerateCrossing(SflowError):
    pass


class UnresolvedCluster(SflowError):
    pass


class IrregularCrossing(SflowError):
    def __init__(self, lambdas):
        lams = ", ".join(f"{lam:.12g}" for lam in lambdas)
        super().__init__(f"irregular crossing(s) at lambda = {lams}")
        self.lambdas = list(lambdas)


class IntegrationFailure(SflowError):
    pass


class NotConverged(SflowError):
    pass


class InvalidOrder(SflowError, ValueError):
    pass


class NoBranch(SflowError):
    pass
