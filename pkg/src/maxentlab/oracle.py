"""Brute-force checks that stay independent of the closed forms they verify.

* :func:`enumerate_occupations` lists every configuration of a small
  ensemble, so its cardinality can be compared with the binomial counts.
* :func:`grid_search_maxent` maximises entropy over a grid of occupation
  vectors meeting both constraints, with no reference to the analytic laws.
* :func:`perturbation_test` probes a candidate maximum with random
  constraint-preserving moves.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .combinatorics import EnsembleSpec, count_microstates
from .entropy import OccupationDistribution, entropy_terms
from .errors import DomainError, InfeasibleError
from .kinds import Kind
from .maxent import EnergyLevels, LagrangeSolution

__all__ = [
    "ENUMERATION_LIMIT",
    "GRID_STATE_LIMIT",
    "DEFAULT_SEED",
    "OccupationVector",
    "GridSearchResult",
    "enumerate_occupations",
    "enumeration_report",
    "grid_search_maxent",
    "perturbation_test",
]

ENUMERATION_LIMIT = 12
GRID_STATE_LIMIT = 4
DEFAULT_SEED = 42
TIE_TOL = 1e-12
ASCENT_TOL = 1e-12

#: Particle counts per state, summing to the ensemble's particle number.
OccupationVector = tuple[int, ...]


def enumerate_occupations(spec: EnsembleSpec) -> Iterator[OccupationVector]:
    """Yield every occupation vector of ``spec`` exactly once.

    Vectors come in descending lexicographic order, e.g. ``(2, 0), (1, 1),
    (0, 2)`` for two bosons in two states.

    Raises
    ------
    DomainError
        If ``n_states`` or ``n_particles`` exceeds ``ENUMERATION_LIMIT``.
    """
    N, P = spec.n_states, spec.n_particles
    if N > ENUMERATION_LIMIT or P > ENUMERATION_LIMIT:
        raise DomainError(
            f"enumeration refused for N={N}, P={P}: both must be <= {ENUMERATION_LIMIT}"
        )
    if spec.kind is Kind.EXCLUSION:
        return _exclusion_vectors(N, P)
    return _bosonic_vectors(N, P)


def _exclusion_vectors(N: int, P: int) -> Iterator[OccupationVector]:
    for occupied in itertools.combinations(range(N), P):
        counts = [0] * N
        for i in occupied:
            counts[i] = 1
        yield tuple(counts)


def _bosonic_vectors(N: int, P: int) -> Iterator[OccupationVector]:
    # multisets of state labels <-> occupation vectors (stars and bars)
    for labels in itertools.combinations_with_replacement(range(N), P):
        counts = [0] * N
        for i in labels:
            counts[i] += 1
        yield tuple(counts)


def enumeration_report(max_states: int = 6, max_particles: int = 6) -> list[dict]:
    """Closed-form vs enumerated counts for every valid small ensemble."""
    rows = []
    for kind in (Kind.EXCLUSION, Kind.BOSONIC):
        for N in range(1, max_states + 1):
            for P in range(0, max_particles + 1):
                if kind is Kind.EXCLUSION and P > N:
                    continue
                spec = EnsembleSpec(N, P, kind)
                closed = count_microstates(spec).exact
                enumerated = sum(1 for _ in enumerate_occupations(spec))
                rows.append(
                    {
                        "kind": kind.value,
                        "n_states": N,
                        "n_particles": P,
                        "closed_form": closed,
                        "enumerated": enumerated,
                        "ok": closed == enumerated,
                    }
                )
    return rows


@dataclass(frozen=True, eq=False)
class GridSearchResult:
    """Best grid point found by :func:`grid_search_maxent`.

    ``ties`` holds every scanned vector whose entropy is within ``TIE_TOL``
    of the maximum, the best one included.  ``particle_tolerance`` and
    ``energy_tolerance`` are the feasibility bands applied to the two
    constraints.
    """

    occupations: OccupationDistribution
    entropy: float
    ties: tuple[np.ndarray, ...]
    grid_step: float
    particle_tolerance: float
    energy_tolerance: float
    evaluated: int


def _grid(upper: float, step: float) -> np.ndarray:
    count = int(math.floor(upper / step + 1e-9))
    return np.arange(count + 1) * step


def grid_search_maxent(levels, kind, target_energy: float, target_particles: float,
                       grid_step: float = 0.01) -> GridSearchResult:
    """Exhaustive entropy maximisation over a grid of occupation vectors.

    All but two occupations are scanned on multiples of ``grid_step``; the
    lowest and highest level occupations are then fixed by solving the two
    linear constraints, so every candidate meets them up to roundoff (with
    all energies equal only the particle constraint can be eliminated).  A
    candidate is kept when it lies in the kind's domain and satisfies
    ``|sum n - P| <= grid_step`` and ``|sum n E - U| <= grid_step * max(E)``.

    Raises
    ------
    DomainError
        If more than ``GRID_STATE_LIMIT`` states are given or ``grid_step`` is
        outside ``[1e-3, 0.1]``.
    InfeasibleError
        If no grid point is feasible.
    """
    kind = Kind.parse(kind)
    E = EnergyLevels.coerce(levels).energies
    N = E.size
    if N > GRID_STATE_LIMIT:
        raise DomainError(f"grid search supports at most {GRID_STATE_LIMIT} states, got {N}")
    step = float(grid_step)
    if not 1e-3 <= step <= 0.1:
        raise DomainError(f"grid_step must lie in [1e-3, 0.1], got {grid_step!r}")
    P, U = float(target_particles), float(target_energy)
    if not (P >= 0 and math.isfinite(P) and math.isfinite(U)):
        raise DomainError(f"targets must be finite with P >= 0 (P={P!r}, U={U!r})")

    upper = P if kind is Kind.BOSONIC else 1.0
    p_tol = step
    e_tol = step * float(E.max())

    if N >= 2 and E[-1] > E[0]:
        solved = [0, N - 1]
    else:
        solved = [N - 1]
    free = [i for i in range(N) if i not in solved]
    axis = _grid(upper, step)

    best_s = -math.inf
    ties: list[tuple[float, np.ndarray]] = []
    evaluated = 0

    outer = axis if free else [None]
    for first in outer:
        if free:
            rest = [axis] * (len(free) - 1)
            mesh = np.meshgrid(*([np.array([first])] + rest), indexing="ij")
            block = np.stack([m.ravel() for m in mesh], axis=1)
            if kind is Kind.BOSONIC:
                block = block[block.sum(axis=1) <= P + p_tol]
        else:
            block = np.zeros((1, 0))
        if block.shape[0] == 0:
            continue
        cand = np.zeros((block.shape[0], N))
        cand[:, free] = block
        s_free = block.sum(axis=1)
        e_free = block @ E[free]
        if len(solved) == 2:
            a, b = solved
            n_b = ((U - e_free) - E[a] * (P - s_free)) / (E[b] - E[a])
            cand[:, b] = n_b
            cand[:, a] = P - s_free - n_b
        else:
            cand[:, solved[0]] = P - s_free
        # snap roundoff at the domain edges
        cand[np.abs(cand) < 1e-12] = 0.0
        if kind is not Kind.BOSONIC:
            cand[np.abs(cand - 1.0) < 1e-12] = 1.0
            ok = np.all((cand >= 0) & (cand <= 1), axis=1)
        else:
            ok = np.all(cand >= 0, axis=1)
        ok &= np.abs(cand.sum(axis=1) - P) <= p_tol
        ok &= np.abs(cand @ E - U) <= e_tol
        cand = cand[ok]
        evaluated += cand.shape[0]
        if cand.shape[0] == 0:
            continue
        s = entropy_terms(cand, kind).sum(axis=1)
        best_s = max(best_s, float(s.max()))
        ties = [(v, row) for v, row in ties if v >= best_s - TIE_TOL]
        keep = s >= best_s - TIE_TOL
        ties.extend(zip(s[keep].tolist(), cand[keep]))

    if not ties:
        raise InfeasibleError(
            f"no grid point meets P={P!r} within {p_tol:g} and U={U!r} within {e_tol:g} "
            f"at grid_step={step:g}"
        )
    scores = [v for v, _ in ties]
    best = ties[int(np.argmax(scores))][1]
    return GridSearchResult(
        occupations=OccupationDistribution(best, kind),
        entropy=best_s,
        ties=tuple(row for _, row in ties),
        grid_step=step,
        particle_tolerance=p_tol,
        energy_tolerance=e_tol,
        evaluated=evaluated,
    )


def _solution_values(solution):
    if isinstance(solution, LagrangeSolution):
        return solution.occupations.values, solution.kind
    if isinstance(solution, OccupationDistribution):
        return solution.values, solution.kind
    return np.asarray(solution, dtype=float), None


def perturbation_test(levels, solution, kind=None, trials: int = 1000,
                      magnitude: float = 0.01, seed: int = DEFAULT_SEED) -> bool:
    """Check that no constraint-preserving move raises the entropy.

    Each trial picks three distinct states ``i, j, k`` and moves along
    ``(E_j - E_k, E_k - E_i, E_i - E_j)``, which conserves both ``sum n`` and
    ``sum n E``, by a random signed amount of at most ``magnitude`` (shrunk
    where needed to stay inside the kind's domain).  Returns ``True`` iff no
    trial increases the entropy by more than ``1e-12``.

    Raises
    ------
    DomainError
        With fewer than three states, or a boundary occupation.
    """
    E = EnergyLevels.coerce(levels).energies
    n0, sol_kind = _solution_values(solution)
    kind = Kind.parse(kind if kind is not None else sol_kind or Kind.BOSONIC)
    N = E.size
    if N < 3:
        raise DomainError(f"perturbation test needs at least 3 states to conserve both constraints, got {N}")
    if n0.size != N:
        raise DomainError(f"{n0.size} occupations given for {N} energy levels")
    upper = math.inf if kind is Kind.BOSONIC else 1.0
    if np.any(n0 <= 0) or np.any(n0 >= upper):
        raise DomainError("perturbation test requires an interior solution")
    trials = int(trials)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")

    rng = np.random.default_rng(seed)
    picks = np.argsort(rng.random((trials, N)), axis=1)[:, :3]
    Ei, Ej, Ek = (E[picks[:, c]] for c in range(3))
    d3 = np.stack([Ej - Ek, Ek - Ei, Ei - Ej], axis=1)
    flat = np.all(d3 == 0, axis=1)
    d3[flat] = (1.0, -1.0, 0.0)
    d3 /= np.max(np.abs(d3), axis=1, keepdims=True)
    t = magnitude * (1.0 - rng.random(trials)) * rng.choice((-1.0, 1.0), size=trials)

    moves = d3 * t[:, None]
    base = n0[picks]
    # largest fraction of each move that keeps every state inside the domain
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        down = np.where(moves < 0, base / -moves, np.inf)
        up = np.where(moves > 0, (upper - base) / moves, np.inf)
    shrink = np.minimum(1.0, np.minimum(down, up).min(axis=1))
    moves *= shrink[:, None]

    trial_n = np.repeat(n0[None, :], trials, axis=0)
    np.add.at(trial_n, (np.arange(trials)[:, None], picks), moves)
    trial_n = np.clip(trial_n, 0.0, upper)
    s0 = float(entropy_terms(n0, kind).sum())
    s = entropy_terms(trial_n, kind).sum(axis=1)
    return bool(np.all(s - s0 <= ASCENT_TOL))
