"""Exception hierarchy shared by all maxentlab modules."""


class MaxEntError(Exception):
    """Base class for every error raised by maxentlab."""


class DomainError(MaxEntError, ValueError):
    """An input lies outside the domain of the requested operation."""


class DivergenceError(DomainError):
    """A bosonic occupation would diverge or turn negative (alpha + beta*E <= 0)."""


class NonEvaluableError(DomainError):
    """The gradient of the objective is undefined at a boundary occupation."""


class InfeasibleError(DomainError):
    """The requested constraint targets cannot be met."""


class BracketError(InfeasibleError):
    """A root-finding target lies outside the attainable range."""


class ConvergenceError(MaxEntError, ArithmeticError):
    """An iterative solver hit its iteration cap without converging."""
