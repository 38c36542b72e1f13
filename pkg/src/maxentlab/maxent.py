"""Constrained entropy maximisation and Lagrange multiplier solvers.

The objective minimised throughout is

    f(n) = -S(n) + alpha * sum(n) + beta * sum(n * E)

whose stationary points are the canonical law (Gibbs entropy), the
Fermi-Dirac law ``n = 1 / (exp(alpha + beta E) + 1)`` (exclusion entropy) and
the Bose-Einstein law ``n = 1 / (exp(alpha + beta E) - 1)`` (bosonic entropy).
Planck mode is the bosonic law with ``alpha = 0``: only the energy constraint
is imposed.

``beta`` is an abstract multiplier and is required to be positive.  Energies
are per-state and non-negative; :class:`EnergyLevels` stores them sorted
ascending and every occupation vector follows that order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import expit

from .entropy import OccupationDistribution, entropy_of
from .errors import (
    BracketError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    InfeasibleError,
    NonEvaluableError,
)
from .kinds import Kind

__all__ = [
    "MAX_ITER",
    "EnergyLevels",
    "LagrangeSolution",
    "canonical_distribution",
    "bosonic_occupation",
    "planck_occupation",
    "exclusion_occupation",
    "occupation_law",
    "total_energy",
    "objective_value",
    "objective_gradient",
    "stationarity_residual",
    "stationarity_check",
    "solve_beta",
    "solve_alpha_beta",
]

MAX_ITER = 200
_MAX_EXPAND = 60
_NEWTON_POLISH = 5
_BRACKET_RTOL = 1e-12
#: Residual tolerance (relative to the target) a solver must reach.
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class EnergyLevels:
    """Per-state energies, finite, non-negative, stored in ascending order."""

    energies: np.ndarray

    def __post_init__(self):
        arr = np.array(self.energies, dtype=float, ndmin=1)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("energy levels must be a non-empty one-dimensional sequence")
        if not np.all(np.isfinite(arr)):
            i = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise DomainError(f"energy level {i} is not finite: {float(arr[i])!r}")
        if np.any(arr < 0):
            i = int(np.flatnonzero(arr < 0)[0])
            raise DomainError(f"energy level {i} is negative: {float(arr[i])!r}")
        arr = np.sort(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "energies", arr)

    def __len__(self) -> int:
        return self.energies.size

    def __iter__(self):
        return iter(self.energies.tolist())

    @classmethod
    def coerce(cls, levels) -> "EnergyLevels":
        return levels if isinstance(levels, cls) else cls(levels)


@dataclass(frozen=True, eq=False)
class LagrangeSolution:
    """Multipliers, occupations and residuals of a maximum-entropy solve.

    ``particle_residual`` is ``None`` when no particle-number constraint was
    imposed.  Residuals on the constraints are relative to their targets;
    ``stationarity_residual`` is the max-norm of the objective gradient.
    ``mode`` records which multipliers were fixed: ``planck`` (bosonic with
    ``alpha = 0``), ``fixed-alpha``, ``solved-alpha`` or ``canonical``.
    """

    alpha: float
    beta: float
    occupations: OccupationDistribution
    energy_residual: float
    particle_residual: Optional[float]
    stationarity_residual: float
    kind: Kind
    mode: str
    iterations: int = 0

    @property
    def entropy(self) -> float:
        return self.occupations.entropy()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "mode": self.mode,
            "alpha": self.alpha,
            "beta": self.beta,
            "occupations": self.occupations.tolist(),
            "entropy": self.entropy,
            "residuals": {
                "energy": self.energy_residual,
                "particles": self.particle_residual,
                "stationarity": self.stationarity_residual,
            },
            "iterations": self.iterations,
        }


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def canonical_distribution(levels, beta: float) -> OccupationDistribution:
    """Boltzmann probabilities ``exp(-beta E) / Z``."""
    E = EnergyLevels.coerce(levels).energies
    beta = _finite("beta", beta)
    x = beta * E
    w = np.exp(-(x - x.min()))
    return OccupationDistribution(w / w.sum(), Kind.PROBABILITY)


def _exponents(E: np.ndarray, beta: float, alpha: float) -> np.ndarray:
    return _finite("alpha", alpha) + _finite("beta", beta) * E


def bosonic_occupation(levels, beta: float, alpha: float = 0.0) -> OccupationDistribution:
    """Bose-Einstein occupations ``1 / (exp(alpha + beta E) - 1)``.

    Raises
    ------
    DivergenceError
        If ``alpha + beta * E_i <= 0`` for any level.
    """
    E = EnergyLevels.coerce(levels).energies
    x = _exponents(E, beta, alpha)
    bad = np.flatnonzero(x <= 0)
    if bad.size:
        i = int(bad[0])
        raise DivergenceError(
            f"bosonic occupation diverges at level {i} (E={float(E[i])!r}): "
            f"alpha + beta*E = {float(x[i])!r} <= 0"
        )
    with np.errstate(over="ignore"):
        n = 1.0 / np.expm1(x)
    return OccupationDistribution(n, Kind.BOSONIC)


def planck_occupation(levels, beta: float) -> OccupationDistribution:
    """Planck law: bosonic occupations with the particle multiplier dropped."""
    return bosonic_occupation(levels, beta, 0.0)


def exclusion_occupation(levels, beta: float, alpha: float = 0.0) -> OccupationDistribution:
    """Fermi-Dirac occupations ``1 / (exp(alpha + beta E) + 1)``."""
    E = EnergyLevels.coerce(levels).energies
    return OccupationDistribution(expit(-_exponents(E, beta, alpha)), Kind.EXCLUSION)


def occupation_law(levels, beta: float, alpha: float, kind) -> OccupationDistribution:
    """Stationary occupations for ``kind``; ``alpha`` is unused for probabilities."""
    kind = Kind.parse(kind)
    if kind is Kind.BOSONIC:
        return bosonic_occupation(levels, beta, alpha)
    if kind is Kind.EXCLUSION:
        return exclusion_occupation(levels, beta, alpha)
    return canonical_distribution(levels, beta)


def total_energy(levels, occupations) -> float:
    E = EnergyLevels.coerce(levels).energies
    n = occupations.values if isinstance(occupations, OccupationDistribution) else np.asarray(occupations, float)
    return float(np.dot(n, E))


def _occupation_values(levels: EnergyLevels, occupations, kind: Kind) -> np.ndarray:
    if isinstance(occupations, LagrangeSolution):
        occupations = occupations.occupations
    if isinstance(occupations, OccupationDistribution):
        if occupations.kind is not kind:
            raise DomainError(f"occupations are {occupations.kind.value}, expected {kind.value}")
        n = occupations.values
    else:
        n = OccupationDistribution(occupations, kind).values
    if n.size != len(levels):
        raise DomainError(f"{n.size} occupations given for {len(levels)} energy levels")
    return n


def objective_value(levels, occupations, beta: float, alpha: float, kind) -> float:
    """``-S(n) + alpha * sum(n) + beta * sum(n E)``.

    Planck mode is ``alpha = 0``, where the particle term vanishes.
    """
    kind = Kind.parse(kind)
    levels = EnergyLevels.coerce(levels)
    n = _occupation_values(levels, occupations, kind)
    beta = _finite("beta", beta)
    alpha = _finite("alpha", alpha)
    return -entropy_of(n, kind) + alpha * float(n.sum()) + beta * float(np.dot(n, levels.energies))


def objective_gradient(levels, occupations, beta: float, alpha: float, kind) -> np.ndarray:
    """Analytic ``df/dn_i``.

    Bosonic ``ln(n/(n+1)) + alpha + beta E``, exclusion
    ``ln(n/(1-n)) + alpha + beta E``, probability ``ln p + 1 + alpha + beta E``.

    Raises
    ------
    NonEvaluableError
        At a boundary occupation (0, or 1 for exclusion) where the logarithm
        is unbounded.
    """
    kind = Kind.parse(kind)
    levels = EnergyLevels.coerce(levels)
    n = _occupation_values(levels, occupations, kind)
    x = _exponents(levels.energies, beta, alpha)
    boundary = n <= 0
    if kind is Kind.EXCLUSION:
        boundary |= n >= 1
    if np.any(boundary):
        i = int(np.flatnonzero(boundary)[0])
        raise NonEvaluableError(
            f"gradient not evaluable at boundary occupation n[{i}] = {float(n[i])!r}"
        )
    return _gradient(n, x, kind)


def _gradient(n: np.ndarray, x: np.ndarray, kind: Kind) -> np.ndarray:
    if kind is Kind.BOSONIC:
        return x - np.log1p(1.0 / n)
    if kind is Kind.EXCLUSION:
        return x + np.log(n) - np.log1p(-n)
    return x + np.log(n) + 1.0


def stationarity_residual(levels, occupations, beta: float, alpha: float, kind) -> float:
    """Max-norm of :func:`objective_gradient`."""
    return float(np.max(np.abs(objective_gradient(levels, occupations, beta, alpha, kind))))


def stationarity_check(levels, solution: LagrangeSolution, kind=None) -> float:
    """Max-norm of the objective gradient at ``solution``."""
    kind = solution.kind if kind is None else Kind.parse(kind)
    return stationarity_residual(levels, solution.occupations, solution.beta, solution.alpha, kind)


# --- one-dimensional root finding -------------------------------------------


def _solve_decreasing(
    func: Callable[[float], float],
    dfunc: Optional[Callable[[float], float]],
    lower: float,
    start: float,
    name: str,
) -> tuple[float, int]:
    """Root of a strictly decreasing ``func`` on ``(lower, inf)``.

    Bracket by geometric expansion away from ``start`` (distance to a finite
    ``lower`` doubles or halves; with ``lower = -inf`` the step doubles), then
    bisect to a relative width of ``_BRACKET_RTOL`` and finish with at most
    ``_NEWTON_POLISH`` Newton steps kept inside the bracket.
    """
    finite_lower = math.isfinite(lower)
    x = start
    fx = func(x)
    if fx == 0.0:
        return x, 0
    lo, hi = (x, None) if fx > 0 else (None, x)
    step = 1.0
    for _ in range(_MAX_EXPAND):
        if hi is None:
            x_new = lower + 2.0 * (x - lower) if finite_lower else x + step
        else:
            x_new = lower + 0.5 * (x - lower) if finite_lower else x - step
        step *= 2.0
        if x_new == x or x_new <= lower:
            break
        x = x_new
        fx = func(x)
        if fx == 0.0:
            return x, 0
        if fx > 0:
            lo = x
        else:
            hi = x
        if lo is not None and hi is not None:
            break
    if lo is None or hi is None:
        raise ConvergenceError(
            f"could not bracket {name} after {_MAX_EXPAND} expansions "
            f"(last bracket lo={lo!r}, hi={hi!r})"
        )

    iterations = 0
    while hi - lo > _BRACKET_RTOL * max(1.0, abs(lo), abs(hi)):
        iterations += 1
        if iterations > MAX_ITER:
            raise ConvergenceError(
                f"{name} bisection did not converge in {MAX_ITER} iterations "
                f"(last bracket [{lo!r}, {hi!r}])"
            )
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = func(mid)
        if fm == 0.0:
            return mid, iterations
        if fm > 0:
            lo = mid
        else:
            hi = mid

    x = 0.5 * (lo + hi)
    fx = func(x)
    if dfunc is not None:
        for _ in range(_NEWTON_POLISH):
            d = dfunc(x)
            if d == 0.0 or not math.isfinite(d) or fx == 0.0:
                break
            cand = x - fx / d
            if not lo <= cand <= hi:
                break
            fc = func(cand)
            if abs(fc) >= abs(fx):
                break
            x, fx = cand, fc
            iterations += 1
    return x, iterations


# --- energy and particle sums as functions of the multipliers --------------


def _occupations_raw(E: np.ndarray, beta: float, alpha: float, kind: Kind) -> np.ndarray:
    x = alpha + beta * E
    if kind is Kind.BOSONIC:
        if np.any(x <= 0):
            return np.full_like(E, np.inf)
        with np.errstate(over="ignore"):
            return 1.0 / np.expm1(x)
    if kind is Kind.EXCLUSION:
        return expit(-x)
    y = beta * E
    w = np.exp(-(y - y.min()))
    return w / w.sum()


def _weights(n: np.ndarray, kind: Kind) -> np.ndarray:
    """``-dn/dx`` for each occupation law."""
    if kind is Kind.BOSONIC:
        return n * (n + 1.0)
    return n * (1.0 - n)


def _energy_sum(E: np.ndarray, beta: float, alpha: float, kind: Kind) -> float:
    n = _occupations_raw(E, beta, alpha, kind)
    with np.errstate(invalid="ignore"):
        value = float(np.dot(n, E))
    return math.inf if math.isnan(value) else value


def _energy_slope(E: np.ndarray, beta: float, alpha: float, kind: Kind) -> float:
    n = _occupations_raw(E, beta, alpha, kind)
    if kind is Kind.PROBABILITY:
        mean = float(np.dot(n, E))
        return -float(np.dot(n, (E - mean) ** 2))
    return -float(np.dot(_weights(n, kind), E * E))


def _beta_lower_bound(E: np.ndarray, alpha: float, kind: Kind) -> float:
    if kind is not Kind.BOSONIC or alpha > 0:
        return 0.0
    if E[0] == 0.0:
        raise DivergenceError(
            f"a zero-energy level diverges for bosonic occupations unless alpha > 0 (alpha={alpha!r})"
        )
    return max(0.0, -alpha / E[0])


def _energy_range(E: np.ndarray, alpha: float, kind: Kind) -> tuple[float, float]:
    """Attainable ``sum(n E)`` over ``beta`` in the open admissible interval."""
    if kind is Kind.PROBABILITY:
        return float(E[0]), float(E.mean())
    if kind is Kind.EXCLUSION:
        return 0.0, float(expit(-alpha) * E.sum())
    if alpha > 0:
        with np.errstate(over="ignore"):
            return 0.0, float(E.sum() / np.expm1(alpha))
    return 0.0, math.inf


def _solution(levels, n, beta, alpha, kind, mode, energy_target, particle_target, iterations):
    dist = OccupationDistribution(n, kind)
    energy = float(np.dot(dist.values, levels.energies))
    energy_res = abs(energy - energy_target) / energy_target
    particle_res = None
    if particle_target is not None:
        particle_res = abs(dist.total - particle_target) / particle_target
    worst = max(energy_res, particle_res or 0.0)
    if worst > RESIDUAL_TOL:
        raise ConvergenceError(
            f"solver stopped with relative constraint residual {worst:.3g} > {RESIDUAL_TOL:g} "
            f"(alpha={alpha!r}, beta={beta!r})"
        )
    n = dist.values
    interior = (n > 0) & (n < 1) if kind is Kind.EXCLUSION else n > 0
    # states whose occupation under/overflowed to the boundary carry no gradient
    x = alpha + beta * levels.energies[interior]
    grad = _gradient(n[interior], x, kind)
    return LagrangeSolution(
        alpha=float(alpha),
        beta=float(beta),
        occupations=dist,
        energy_residual=energy_res,
        particle_residual=particle_res,
        stationarity_residual=float(np.max(np.abs(grad), initial=0.0)),
        kind=kind,
        mode=mode,
        iterations=iterations,
    )


def solve_beta(levels, kind, target_energy: float, alpha: float = 0.0) -> LagrangeSolution:
    """Find ``beta > 0`` with ``sum(n(beta) E) == target_energy`` at fixed ``alpha``.

    Total energy falls strictly with ``beta``, so the root is bracketed and
    bisected, then polished with Newton steps.  For the probability kind the
    normalisation fixes ``alpha`` (reported as ``ln Z - 1``) and the argument
    is ignored.

    Raises
    ------
    BracketError
        If the target is outside the attainable energy range.
    ConvergenceError
        If bracketing or bisection exceed their caps.
    """
    kind = Kind.parse(kind)
    levels = EnergyLevels.coerce(levels)
    E = levels.energies
    target = _finite("target_energy", target_energy)
    alpha = _finite("alpha", alpha)
    if kind is Kind.PROBABILITY:
        alpha = 0.0
    lower = _beta_lower_bound(E, alpha, kind)
    lo_u, hi_u = _energy_range(E, alpha, kind)
    if not lo_u < target < hi_u:
        raise BracketError(
            f"target_energy={target!r} outside attainable range ({lo_u!r}, {hi_u!r}) "
            f"for {kind.value} with alpha={alpha!r}"
        )

    beta, iterations = _solve_decreasing(
        lambda b: _energy_sum(E, b, alpha, kind) - target,
        lambda b: _energy_slope(E, b, alpha, kind),
        lower,
        max(1.0, 2.0 * lower),
        "beta",
    )
    n = _occupations_raw(E, beta, alpha, kind)
    if kind is Kind.PROBABILITY:
        y = beta * E
        log_z = -y.min() + math.log(float(np.exp(-(y - y.min())).sum()))
        alpha, mode = log_z - 1.0, "canonical"
    elif kind is Kind.BOSONIC and alpha == 0.0:
        mode = "planck"
    else:
        mode = "fixed-alpha"
    return _solution(levels, n, beta, alpha, kind, mode, target, None, iterations)


# --- two-constraint solve ----------------------------------------------------


def _dual(E: np.ndarray, alpha: float, beta: float, P: float, U: float, kind: Kind) -> float:
    """Convex dual whose gradient is ``(P - sum n, U - sum n E)``."""
    x = alpha + beta * E
    if kind is Kind.BOSONIC:
        if np.any(x <= 0):
            return math.inf
        c = -np.log(-np.expm1(-x))
    else:
        c = np.logaddexp(0.0, -x)
    return float(c.sum()) + alpha * P + beta * U


def _ground_energy(E: np.ndarray, P: float, kind: Kind) -> float:
    if kind is Kind.BOSONIC:
        return P * float(E[0])
    full = int(math.floor(P))
    frac = P - full
    energy = float(E[:full].sum())
    if frac > 0:
        energy += frac * float(E[full])
    return energy


def _check_joint_feasible(E: np.ndarray, P: float, U: float, kind: Kind) -> None:
    N = E.size
    if not P > 0:
        raise InfeasibleError(f"target_particles must be > 0, got {P!r}")
    if not U > 0:
        raise InfeasibleError(f"target_energy must be > 0, got {U!r}")
    if kind is Kind.EXCLUSION and not P < N:
        raise InfeasibleError(
            f"target_particles={P!r} must be < n_states={N} for exclusion statistics"
        )
    ground = _ground_energy(E, P, kind)
    top = P * float(E.mean())
    slack = 1e-12 * max(1.0, abs(top))
    if E[-1] == E[0]:
        if abs(U - top) > slack:
            raise InfeasibleError(
                f"all levels share E={float(E[0])!r}; target_energy must equal {float(top)!r}, got {U!r}"
            )
        return
    if not ground < U <= top + slack:
        raise InfeasibleError(
            f"target_energy={U!r} not attainable with beta >= 0 for target_particles={P!r}; "
            f"attainable range is ({ground!r}, {top!r}]"
        )


def _solve_alpha(E: np.ndarray, beta: float, P: float, kind: Kind) -> tuple[float, int]:
    lower = -beta * float(E[0]) if kind is Kind.BOSONIC else -math.inf
    start = lower + 1.0 if kind is Kind.BOSONIC else 0.0

    def residual(a):
        with np.errstate(invalid="ignore"):
            total = float(_occupations_raw(E, beta, a, kind).sum())
        return (math.inf if math.isnan(total) else total) - P

    def slope(a):
        return -float(_weights(_occupations_raw(E, beta, a, kind), kind).sum())

    return _solve_decreasing(residual, slope, lower, start, "alpha")


def _nested_solve(E: np.ndarray, P: float, U: float, kind: Kind) -> tuple[float, float, int]:
    count = 0

    def residual(b):
        nonlocal count
        a, it = _solve_alpha(E, b, P, kind)
        count += it
        return _energy_sum(E, b, a, kind) - U

    beta0 = 1.0
    r0 = residual(beta0)
    if abs(r0) <= 1e-13 * U:
        beta = beta0
    else:
        beta, it = _solve_decreasing(residual, None, 0.0, beta0, "beta")
        count += it
    alpha, it = _solve_alpha(E, beta, P, kind)
    return alpha, beta, count + it


def _newton_solve(E: np.ndarray, P: float, U: float, kind: Kind) -> Optional[tuple[float, float, int]]:
    """Damped Newton on the convex dual; ``None`` signals a singular Hessian."""
    beta = 1.0
    alpha, _ = _solve_alpha(E, beta, P, kind)
    L = _dual(E, alpha, beta, P, U, kind)
    for iteration in range(1, MAX_ITER + 1):
        n = _occupations_raw(E, beta, alpha, kind)
        g = np.array([P - n.sum(), U - np.dot(n, E)])
        if abs(g[0]) <= 1e-14 * P and abs(g[1]) <= 1e-14 * U:
            return alpha, beta, iteration
        w = _weights(n, kind)
        H = np.array([[w.sum(), np.dot(w, E)], [np.dot(w, E), np.dot(w, E * E)]])
        if not np.all(np.isfinite(H)) or np.linalg.cond(H) > 1e12:
            return None
        step = -np.linalg.solve(H, g)
        slope = float(np.dot(g, step))
        gnorm = float(np.max(np.abs(g / (P, U))))
        t = 1.0
        for _ in range(_MAX_EXPAND):
            a_new, b_new = alpha + t * step[0], beta + t * step[1]
            L_new = _dual(E, a_new, b_new, P, U, kind)
            if math.isfinite(L_new):
                if L_new <= L + 1e-4 * t * slope:
                    break
                n_new = _occupations_raw(E, b_new, a_new, kind)
                g_new = np.array([P - n_new.sum(), U - np.dot(n_new, E)])
                if float(np.max(np.abs(g_new / (P, U)))) < gnorm:
                    break
            t *= 0.5
        else:
            raise ConvergenceError(
                f"line search failed at alpha={alpha!r}, beta={beta!r} (iteration {iteration})"
            )
        if a_new == alpha and b_new == beta:
            return alpha, beta, iteration
        alpha, beta, L = a_new, b_new, L_new
    raise ConvergenceError(
        f"two-constraint Newton did not converge in {MAX_ITER} iterations "
        f"(last alpha={alpha!r}, beta={beta!r})"
    )


def solve_alpha_beta(levels, kind, target_energy: float, target_particles: float) -> LagrangeSolution:
    """Find ``(alpha, beta)`` meeting both the particle and the energy target.

    Damped Newton on the convex dual of the constrained problem; when its
    Hessian is singular (for instance all levels equal) the solve falls back
    to nested one-dimensional solves, ``alpha`` for the particle count inside
    ``beta`` for the energy.  ``beta`` is returned non-negative; a target
    sitting exactly on the ``beta = 0`` limit ``P * mean(E)`` yields
    ``beta ~ 0`` up to roundoff.

    Raises
    ------
    InfeasibleError
        If the targets cannot be met jointly with ``beta >= 0``.
    ConvergenceError
        If an iteration cap is hit.
    """
    kind = Kind.parse(kind)
    if kind is Kind.PROBABILITY:
        raise DomainError("probabilities are normalised; use solve_beta for the canonical law")
    levels = EnergyLevels.coerce(levels)
    E = levels.energies
    U = _finite("target_energy", target_energy)
    P = _finite("target_particles", target_particles)
    _check_joint_feasible(E, P, U, kind)
    if kind is Kind.BOSONIC and E[0] == 0.0 and E[-1] == 0.0:
        raise InfeasibleError("all levels have zero energy; target_energy must be 0")

    result = _newton_solve(E, P, U, kind)
    if result is None:
        result = _nested_solve(E, P, U, kind)
    alpha, beta, iterations = result
    if beta < -1e-12 * max(1.0, abs(alpha)):
        raise InfeasibleError(f"targets require beta={beta!r} < 0")
    if beta < 0:
        # roundoff around the beta = 0 limit
        beta = 0.0
        alpha, _ = _solve_alpha(E, beta, P, kind)
    n = _occupations_raw(E, beta, alpha, kind)
    return _solution(levels, n, beta, alpha, kind, "solved-alpha", U, P, iterations)
