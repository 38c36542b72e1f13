"""Per-state entropy functionals.

Three functionals are provided, each as a per-state term array and as a sum:

* Gibbs, ``-sum p ln p`` over a normalised distribution;
* exclusion, ``-sum [n ln n + (1-n) ln(1-n)]`` for occupations in ``[0, 1]``;
* bosonic, ``sum [(n+1) ln(n+1) - n ln n]`` for occupations ``>= 0``.

``x ln x`` is extended continuously to 0 at ``x = 0`` everywhere.  Inputs
are validated but never renormalised.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlog1py, xlogy

from .errors import DomainError
from .kinds import Kind

__all__ = [
    "NORMALIZATION_TOL",
    "OccupationDistribution",
    "gibbs_terms",
    "exclusion_terms",
    "bosonic_terms",
    "entropy_terms",
    "gibbs_entropy",
    "exclusion_entropy",
    "bosonic_entropy",
    "entropy_of",
    "low_occupation_deviation",
]

#: Absolute tolerance on ``sum(p) == 1`` for probability distributions.
NORMALIZATION_TOL = 1e-9


def _as_values(values) -> np.ndarray:
    arr = np.array(values, dtype=float, ndmin=1)
    if arr.ndim != 1:
        raise DomainError(f"occupations must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DomainError("occupations must contain at least one state")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise DomainError(f"occupation at state {bad} is not finite: {float(arr[bad])!r}")
    return arr


def _check_domain(arr: np.ndarray, kind: Kind) -> None:
    if kind is Kind.BOSONIC:
        bad = np.flatnonzero(arr < 0)
        if bad.size:
            i = int(bad[0])
            raise DomainError(f"bosonic occupation must be >= 0; state {i} has {float(arr[i])!r}")
        return
    bad = np.flatnonzero((arr < 0) | (arr > 1))
    if bad.size:
        i = int(bad[0])
        raise DomainError(f"{kind.value} occupation must lie in [0, 1]; state {i} has {float(arr[i])!r}")
    if kind is Kind.PROBABILITY:
        total = float(np.sum(arr))
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DomainError(
                f"probabilities must sum to 1 within {NORMALIZATION_TOL:g}; sum is {total!r}"
            )


@dataclass(frozen=True, eq=False)
class OccupationDistribution:
    """Per-state occupations (or probabilities) tagged with their statistics.

    Parameters
    ----------
    values : array_like
        One entry per state.
    kind : Kind or str
        ``probability`` (entries in ``[0, 1]`` summing to 1), ``exclusion``
        (entries in ``[0, 1]``) or ``bosonic`` (entries ``>= 0``).
    """

    values: np.ndarray
    kind: Kind

    def __post_init__(self):
        kind = Kind.parse(self.kind)
        arr = _as_values(self.values)
        _check_domain(arr, kind)
        arr.setflags(write=False)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    @property
    def total(self) -> float:
        return float(np.sum(self.values))

    def entropy(self) -> float:
        return entropy_of(self.values, self.kind)

    def tolist(self) -> list[float]:
        return self.values.tolist()


def _values(dist, kind: Kind) -> np.ndarray:
    if isinstance(dist, OccupationDistribution):
        if dist.kind is not kind:
            raise DomainError(f"expected a {kind.value} distribution, got {dist.kind.value}")
        return dist.values
    arr = _as_values(dist)
    _check_domain(arr, kind)
    return arr


def gibbs_terms(p) -> np.ndarray:
    """``-p ln p`` per entry (no normalisation check)."""
    p = np.asarray(p, dtype=float)
    return -xlogy(p, p)


def exclusion_terms(n) -> np.ndarray:
    """``-[n ln n + (1-n) ln(1-n)]`` per entry."""
    n = np.asarray(n, dtype=float)
    # xlog1py keeps (1-n) ln(1-n) accurate for small n and exact 0 at n = 1
    return -(xlogy(n, n) + xlog1py(1.0 - n, -n))


def bosonic_terms(n) -> np.ndarray:
    """``(n+1) ln(n+1) - n ln n`` per entry.

    Evaluated as ``ln(1+n) + n ln(1 + 1/n)`` to avoid cancellation at large n.
    """
    n = np.asarray(n, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        # n ln(1 + 1/n); below n = 1 the split form avoids overflowing 1/n
        tail = np.where(n >= 1, n * np.log1p(1.0 / n), xlog1py(n, n) - xlogy(n, n))
    return np.log1p(n) + tail


_TERMS = {
    Kind.PROBABILITY: gibbs_terms,
    Kind.EXCLUSION: exclusion_terms,
    Kind.BOSONIC: bosonic_terms,
}


def entropy_terms(values, kind) -> np.ndarray:
    """Per-state entropy terms for ``kind`` (vectorised over leading axes)."""
    return _TERMS[Kind.parse(kind)](values)


def gibbs_entropy(dist) -> float:
    """Gibbs entropy ``-sum p ln p`` of a probability distribution, in nats."""
    return float(np.sum(gibbs_terms(_values(dist, Kind.PROBABILITY))))


def exclusion_entropy(dist) -> float:
    """Entropy of exclusion (Fermi-Dirac) occupations, in nats."""
    return float(np.sum(exclusion_terms(_values(dist, Kind.EXCLUSION))))


def bosonic_entropy(dist) -> float:
    """Entropy of bosonic (Planck) occupations, in nats."""
    return float(np.sum(bosonic_terms(_values(dist, Kind.BOSONIC))))


def entropy_of(values, kind) -> float:
    """Dispatch to the functional matching ``kind``."""
    kind = Kind.parse(kind)
    return float(np.sum(_TERMS[kind](_values(values, kind))))


def low_occupation_deviation(dist, kind) -> float:
    """Largest relative gap between the per-state entropy and ``-n ln n + n``.

    Both the exclusion and the bosonic per-state forms reduce to
    ``-n ln n + n`` as ``n -> 0``; this measures how far a given occupation
    vector is from that regime.  All entries must lie strictly inside
    ``(0, 1)``.
    """
    kind = Kind.parse(kind)
    if kind is Kind.PROBABILITY:
        raise DomainError("low-occupation deviation is defined for exclusion or bosonic kinds")
    n = dist.values if isinstance(dist, OccupationDistribution) else _as_values(dist)
    bad = np.flatnonzero((n <= 0) | (n >= 1))
    if bad.size:
        i = int(bad[0])
        raise DomainError(f"occupations must lie in (0, 1); state {i} has {float(n[i])!r}")
    exact = _TERMS[kind](n)
    limit = -xlogy(n, n) + n
    return float(np.max(np.abs(exact - limit) / exact))
