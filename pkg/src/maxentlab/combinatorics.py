"""Microstate counting for exclusion and bosonic ensembles.

``P`` particles are placed in ``N`` states.  With at most one particle per
state the number of configurations is the binomial coefficient
``N! / ((N-P)! P!)``; without that restriction it is the stars-and-bars count
``(N+P-1)! / ((N-1)! P!)``.  Both are exact big integers up to
``N + P <= EXACT_LIMIT``; past that only ``ln W`` is produced, by summing
logarithms of the product form of the binomial (never through Stirling), so
that the Stirling error measurement below always has an independent
reference.

All logarithms are natural (nats).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError
from .kinds import Kind

__all__ = [
    "EXACT_LIMIT",
    "EnsembleSpec",
    "MicrostateCount",
    "count_microstates",
    "log_binomial",
    "stirling_entropy",
    "stirling_relative_error",
]

#: Largest ``N + P`` for which the exact integer count is materialised.
EXACT_LIMIT = 10_000


@dataclass(frozen=True)
class EnsembleSpec:
    """``n_states`` states holding ``n_particles`` particles of a given kind."""

    n_states: int
    n_particles: int
    kind: Kind = Kind.BOSONIC

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        for name in ("n_states", "n_particles"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.n_states < 1:
            raise DomainError(f"n_states must be >= 1, got {self.n_states}")
        if self.n_particles < 0:
            raise DomainError(f"n_particles must be >= 0, got {self.n_particles}")
        if self.kind is Kind.PROBABILITY:
            raise DomainError("an ensemble kind must be 'exclusion' or 'bosonic'")
        if self.kind is Kind.EXCLUSION and self.n_particles > self.n_states:
            raise DomainError(
                f"exclusion principle violated: n_particles={self.n_particles} "
                f"> n_states={self.n_states}"
            )

    @property
    def occupation(self) -> float:
        """Mean occupation ``P / N``."""
        return self.n_particles / self.n_states


@dataclass(frozen=True)
class MicrostateCount:
    """Configuration count ``W`` and ``ln W``.

    ``exact`` is ``None`` when the ensemble is too large to materialise.
    """

    exact: Optional[int]
    log_value: float

    @property
    def has_exact(self) -> bool:
        return self.exact is not None


def log_binomial(n: int, k: int) -> float:
    """``ln C(n, k)`` as an accurately summed product of ratios.

    Uses ``C(n, k) = prod_{j=1..k} (n - k + j) / j`` with each factor taken
    through ``log1p`` and the sum through :func:`math.fsum`.
    """
    if k < 0 or k > n:
        raise DomainError(f"binomial C({n}, {k}) is zero; log undefined")
    # C(n, k) == C(n, n-k); the shorter product is cheaper and more accurate
    k = min(k, n - k)
    rest = n - k
    return math.fsum(math.log1p(rest / j) for j in range(1, k + 1))


def _binomial_arguments(spec: EnsembleSpec) -> tuple[int, int]:
    if spec.kind is Kind.EXCLUSION:
        return spec.n_states, spec.n_particles
    return spec.n_states + spec.n_particles - 1, spec.n_particles


def count_microstates(spec: EnsembleSpec) -> MicrostateCount:
    """Number of configurations of ``spec.n_particles`` in ``spec.n_states``.

    >>> count_microstates(EnsembleSpec(3, 2, Kind.BOSONIC)).exact
    6
    """
    n, k = _binomial_arguments(spec)
    if spec.n_states + spec.n_particles <= EXACT_LIMIT:
        exact = math.comb(n, k)
        # math.log is correctly scaled for arbitrarily large ints
        return MicrostateCount(exact=exact, log_value=math.log(exact))
    return MicrostateCount(exact=None, log_value=log_binomial(n, k))


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


def stirling_entropy(spec: EnsembleSpec) -> float:
    """Stirling-approximated ``ln W`` in nats.

    Exclusion: ``-N [p ln p + (1-p) ln(1-p)]`` with ``p = P/N``.
    Bosonic: ``N [(n+1) ln(n+1) - n ln n]`` with ``n = P/N``.
    Boundary occupations return 0 by continuous extension.
    """
    N = spec.n_states
    n = spec.occupation
    if spec.kind is Kind.EXCLUSION:
        return -N * (_xlogx(n) + _xlogx(1.0 - n))
    return N * (_xlogx(n + 1.0) - _xlogx(n))


def stirling_relative_error(spec: EnsembleSpec) -> float:
    """``|S_stirling - ln W| / ln W``.

    When ``W == 1`` the relative error is undefined and the absolute error is
    returned instead.
    """
    log_w = count_microstates(spec).log_value
    gap = abs(stirling_entropy(spec) - log_w)
    if log_w == 0.0:
        return gap
    return gap / log_w
