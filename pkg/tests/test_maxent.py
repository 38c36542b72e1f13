import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maxentlab import (
    BracketError,
    DivergenceError,
    DomainError,
    EnergyLevels,
    InfeasibleError,
    NonEvaluableError,
    bosonic_occupation,
    canonical_distribution,
    exclusion_occupation,
    objective_value,
    planck_occupation,
    solve_alpha_beta,
    solve_beta,
    stationarity_check,
)
from maxentlab.maxent import objective_gradient, stationarity_residual, total_energy

energies = st.lists(st.floats(0.0, 5.0), min_size=1, max_size=6)


# --- occupation laws ---------------------------------------------------------


def test_levels_sorted_and_validated():
    assert list(EnergyLevels([3, 1, 2])) == [1.0, 2.0, 3.0]
    for bad in ([], [1.0, -0.5], [float("inf")]):
        with pytest.raises(DomainError):
            EnergyLevels(bad)


@pytest.mark.parametrize("beta", [0.0, 0.3, 7.0])
def test_canonical_equal_energies_uniform(beta):
    p = canonical_distribution([2.0, 2.0, 2.0, 2.0], beta).values
    assert np.allclose(p, 0.25, rtol=0, atol=1e-15)


def test_canonical_beta_zero_uniform():
    assert np.allclose(canonical_distribution([0, 1, 5], 0.0).values, 1 / 3, atol=1e-15)


def test_canonical_two_levels():
    p = canonical_distribution([0.0, 1.0], math.log(2)).values
    assert p == pytest.approx([2 / 3, 1 / 3], rel=1e-15)


@given(energies, st.floats(-50, 2000))
def test_canonical_normalised_without_overflow(E, beta):
    p = canonical_distribution(E, beta)
    assert abs(p.total - 1.0) <= 1e-12


@pytest.mark.parametrize(
    "phi, expected, rel",
    [(math.log(2), 1.0, 1e-15), (1.0, 1 / (math.e - 1), 1e-15), (20.0, math.exp(-20.0), 1e-8)],
)
def test_bosonic_values(phi, expected, rel):
    assert bosonic_occupation([phi], 1.0).values[0] == pytest.approx(expected, rel=rel)
    assert bosonic_occupation([1.0], 0.0, alpha=phi).values[0] == pytest.approx(expected, rel=rel)


def test_bosonic_divergence_names_level():
    with pytest.raises(DivergenceError, match="level 0"):
        bosonic_occupation([0.0, 1.0], 2.0)
    with pytest.raises(DivergenceError, match=r"E=0\.5"):
        bosonic_occupation([0.5, 2.0], 1.0, alpha=-1.0)
    assert planck_occupation([1.0], 1.0).values[0] == pytest.approx(1 / math.expm1(1.0))


@pytest.mark.parametrize("x, expected", [(0.0, 0.5), (math.log(3), 0.25), (800.0, 0.0)])
def test_exclusion_values(x, expected):
    assert exclusion_occupation([1.0], x).values[0] == pytest.approx(expected, rel=1e-15, abs=1e-300)


@given(st.floats(-30, 30))
def test_exclusion_in_unit_interval(x):
    n = exclusion_occupation([1.0], 1.0, alpha=x).values[0]
    assert 0.0 < n < 1.0


@given(st.floats(1e-3, 30), st.floats(0.0, 5.0))
def test_bosonic_exclusion_duality(alpha, E):
    nb = bosonic_occupation([E], 1.0, alpha).values[0]
    ne = exclusion_occupation([E], 1.0, alpha).values[0]
    assert abs((1 / ne - 1 / nb) - 2.0) <= 1e-12 * max(1.0, 1 / ne)


@given(st.floats(5.0, 600.0))
def test_canonical_limit(x):
    boltz = math.exp(-x)
    nb = bosonic_occupation([1.0], x).values[0]
    ne = exclusion_occupation([1.0], x).values[0]
    assert abs(nb - boltz) / boltz < 0.01
    assert abs(ne - boltz) / boltz < 0.01


@pytest.mark.parametrize("alpha", [0.0, 0.5])
def test_total_energy_decreasing_in_beta(alpha):
    E = [0.5, 1.0, 2.5, 4.0]
    betas = np.geomspace(1e-3, 50, 400)
    bos = [total_energy(E, bosonic_occupation(E, b, alpha)) for b in betas]
    exc = [total_energy(E, exclusion_occupation(E, b, alpha)) for b in betas]
    assert np.all(np.diff(bos) < 0)
    assert np.all(np.diff(exc) < 0)


# --- objective and gradient ----------------------------------------------------


def test_objective_zero_occupations():
    assert objective_value([1.0, 2.0], [0.0, 0.0], 1.3, 0.0, "bosonic") == 0.0


def test_objective_at_solution_is_minimal_under_feasible_moves():
    E = np.array([0.3, 1.0, 1.7, 2.4])
    beta, alpha = 0.9, 0.4
    n = bosonic_occupation(E, beta, alpha).values
    f0 = objective_value(E, n, beta, alpha, "bosonic")
    assert objective_value(E, n + 0.0, beta, alpha, "bosonic") == f0
    rng = np.random.default_rng(7)
    for _ in range(500):
        i, j, k = rng.choice(4, 3, replace=False)
        d = np.zeros(4)
        d[[i, j, k]] = (E[j] - E[k], E[k] - E[i], E[i] - E[j])
        m = n + rng.uniform(-0.05, 0.05) * d
        if np.any(m < 0):
            continue
        assert objective_value(E, m, beta, alpha, "bosonic") >= f0 - 1e-14


@pytest.mark.parametrize("law, kind", [(bosonic_occupation, "bosonic"), (exclusion_occupation, "exclusion")])
def test_stationarity_of_laws(law, kind):
    E = [0.2, 1.0, 3.0]
    n = law(E, 1.1, 0.3)
    assert stationarity_residual(E, n, 1.1, 0.3, kind) < 1e-12
    bumped = n.values + 0.01
    assert stationarity_residual(E, bumped, 1.1, 0.3, kind) > 1e-3


def test_stationarity_of_canonical():
    E = [0.0, 1.0, 2.0]
    sol = solve_beta(E, "probability", 0.6)
    assert stationarity_check(E, sol) < 1e-12


def test_gradient_boundary_not_evaluable():
    with pytest.raises(NonEvaluableError):
        objective_gradient([1.0, 2.0], [0.0, 0.5], 1.0, 0.0, "bosonic")
    with pytest.raises(NonEvaluableError):
        objective_gradient([1.0, 2.0], [1.0, 0.5], 1.0, 0.0, "exclusion")


def test_gradient_length_mismatch():
    with pytest.raises(DomainError, match="2 occupations"):
        objective_gradient([1.0, 2.0, 3.0], [0.1, 0.2], 1.0, 0.0, "bosonic")


# --- solve_beta ---------------------------------------------------------------


def _bisect_beta(E, U, lo=1e-3, hi=50.0, tol=1e-14):
    """Plain bisection on the Planck energy sum; independent of the library."""
    def energy(b):
        return sum(e / math.expm1(b * e) for e in E)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if energy(mid) > U:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_solve_beta_single_level():
    sol = solve_beta([1.0], "bosonic", 1.0)
    assert sol.beta == pytest.approx(math.log(2), rel=1e-12)
    assert sol.mode == "planck"
    assert sol.particle_residual is None


def test_solve_beta_two_levels_against_bisection():
    sol = solve_beta([1.0, 2.0], "bosonic", 1.0, alpha=0.0)
    oracle = _bisect_beta([1.0, 2.0], 1.0)
    assert sol.beta == pytest.approx(oracle, rel=1e-12)
    # 50-digit bisection of the same equation
    assert sol.beta == pytest.approx(0.94061364210720876, rel=1e-13)
    assert sol.energy_residual <= 1e-10
    assert sol.stationarity_residual <= 1e-8


def test_solve_beta_exclusion_analytic():
    sol = solve_beta([0.0, 1.0], "exclusion", 0.25)
    assert sol.beta == pytest.approx(math.log(3), rel=1e-12)
    assert sol.mode == "fixed-alpha"


def test_solve_beta_bracket_errors():
    with pytest.raises(BracketError, match="attainable range"):
        solve_beta([1.0, 2.0], "exclusion", 1.5)  # sup is sum(E)/2 = 1.5, open
    with pytest.raises(BracketError):
        solve_beta([1.0, 2.0], "bosonic", 10.0, alpha=1.0)
    with pytest.raises(BracketError):
        solve_beta([1.0], "bosonic", -1.0)


def test_solve_beta_zero_level_needs_positive_alpha():
    with pytest.raises(DivergenceError):
        solve_beta([0.0, 1.0], "bosonic", 0.5)
    sol = solve_beta([0.0, 1.0], "bosonic", 0.5, alpha=0.2)
    assert sol.energy_residual <= 1e-10


def test_solve_beta_negative_alpha():
    sol = solve_beta([1.0, 2.0, 4.0], "bosonic", 3.0, alpha=-0.5)
    assert sol.alpha + sol.beta * 1.0 > 0
    assert sol.energy_residual <= 1e-10


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0.1, 5.0), min_size=1, max_size=6),
    st.sampled_from(["bosonic", "exclusion", "probability"]),
    st.floats(0.05, 5.0),
    st.floats(0.0, 2.0),
)
def test_solve_beta_round_trip(E, kind, beta, alpha):
    levels = EnergyLevels(E)
    if kind == "probability" and levels.energies[-1] - levels.energies[0] < 1e-3:
        return
    n = bosonic_occupation(levels, beta, alpha) if kind == "bosonic" else None
    if kind == "exclusion":
        n = exclusion_occupation(levels, beta, alpha)
    if kind == "probability":
        n = canonical_distribution(levels, beta)
    U = total_energy(levels, n)
    sol = solve_beta(levels, kind, U, alpha)
    assert abs(total_energy(levels, sol.occupations) - U) <= 1e-10 * U
    assert sol.beta == pytest.approx(beta, rel=1e-6)
    assert sol.stationarity_residual <= 1e-8


# --- solve_alpha_beta -----------------------------------------------------------


def _zoom_oracle(E, P, U, kind, centre=(1.0, 1.0), width=2.0, rounds=60):
    """Grid refinement on the max relative residual over (alpha, beta)."""
    E = np.asarray(E, float)

    def resid(a, b):
        x = a + b * E
        if kind == "bosonic":
            if np.any(x <= 0):
                return np.inf
            n = 1 / np.expm1(x)
        else:
            n = 1 / (np.exp(x) + 1)
        return max(abs(n.sum() - P) / P, abs(n @ E - U) / U)

    a, b = centre
    g = np.linspace(-1, 1, 41)
    for _ in range(rounds):
        _, a, b = min((resid(a + da, b + db), a + da, b + db) for da in g * width for db in g * width)
        width *= 0.25
    return a, b


def test_solve_alpha_beta_three_levels():
    sol = solve_alpha_beta([1.0, 2.0, 3.0], "bosonic", 2.5, 1.5)
    a, b = _zoom_oracle([1.0, 2.0, 3.0], 1.5, 2.5, "bosonic")
    assert sol.alpha == pytest.approx(a, rel=1e-9)
    assert sol.beta == pytest.approx(b, rel=1e-9)
    # frozen from a 40-digit Newton solve
    assert sol.alpha == pytest.approx(0.47683752339095284, rel=1e-12)
    assert sol.beta == pytest.approx(0.35018000326270302, rel=1e-12)
    assert sol.particle_residual <= 1e-10 and sol.energy_residual <= 1e-10
    assert sol.mode == "solved-alpha"


def test_solve_alpha_beta_equal_levels():
    n_star = 0.7
    sol = solve_alpha_beta([2.0, 2.0], "bosonic", 2 * n_star * 2.0, 2 * n_star)
    assert sol.alpha + sol.beta * 2.0 == pytest.approx(math.log(1 + 1 / n_star), rel=1e-12)
    assert np.allclose(sol.occupations.values, n_star, rtol=1e-12)


def test_solve_alpha_beta_exclusion_symmetric_pair():
    sol = solve_alpha_beta([1.0, 2.0], "exclusion", 1.5, 1.0)
    assert abs(sol.alpha + 1.5 * sol.beta) <= 1e-12
    assert sol.beta == pytest.approx(0.0, abs=1e-12)
    assert sol.occupations.values == pytest.approx([0.5, 0.5], abs=1e-12)


def test_solve_alpha_beta_exclusion_interior():
    E = [0.0, 1.0, 2.0]
    n = exclusion_occupation(E, 1.3, -0.4)
    sol = solve_alpha_beta(E, "exclusion", total_energy(E, n), n.total)
    assert sol.alpha == pytest.approx(-0.4, rel=1e-9)
    assert sol.beta == pytest.approx(1.3, rel=1e-9)


@pytest.mark.parametrize(
    "E, kind, U, P",
    [
        ([1.0, 2.0], "exclusion", 1.5, 2.0),  # P == N
        ([1.0, 2.0], "bosonic", 0.9, 1.0),  # below the ground-state energy
        ([1.0, 2.0], "bosonic", 1.8, 1.0),  # needs beta < 0
        ([2.0, 2.0], "bosonic", 3.0, 1.0),  # equal levels, inconsistent
        ([1.0, 2.0], "bosonic", 1.5, -1.0),
    ],
)
def test_solve_alpha_beta_infeasible(E, kind, U, P):
    with pytest.raises(InfeasibleError):
        solve_alpha_beta(E, kind, U, P)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0.0, 4.0), min_size=2, max_size=6, unique=True),
    st.sampled_from(["bosonic", "exclusion"]),
    st.floats(0.1, 3.0),
    st.floats(0.05, 2.0),
)
def test_solve_alpha_beta_round_trip(E, kind, beta, shift):
    levels = EnergyLevels(E)
    if levels.energies[-1] - levels.energies[0] < 0.05:
        return
    alpha = shift - beta * levels.energies[0]
    law = bosonic_occupation if kind == "bosonic" else exclusion_occupation
    n = law(levels, beta, alpha)
    sol = solve_alpha_beta(levels, kind, total_energy(levels, n), n.total)
    assert sol.particle_residual <= 1e-10 and sol.energy_residual <= 1e-10
    assert sol.stationarity_residual <= 1e-8
    assert sol.beta == pytest.approx(beta, rel=1e-6, abs=1e-9)


def test_solution_dict_keys():
    d = solve_beta([1.0, 2.0], "bosonic", 1.0).to_dict()
    assert {"alpha", "beta", "occupations", "residuals"} <= set(d)
    assert set(d["residuals"]) == {"energy", "particles", "stationarity"}
