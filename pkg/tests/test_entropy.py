import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from maxentlab import (
    DomainError,
    EnsembleSpec,
    Kind,
    OccupationDistribution,
    bosonic_entropy,
    exclusion_entropy,
    gibbs_entropy,
    low_occupation_deviation,
    stirling_entropy,
)
from maxentlab.entropy import bosonic_terms, exclusion_terms

unit = st.floats(0.0, 1.0, allow_nan=False)
occ = st.floats(0.0, 1e6, allow_nan=False)


@pytest.mark.parametrize("W", [1, 2, 7, 1000])
def test_gibbs_uniform_is_log_W(W):
    assert gibbs_entropy(np.full(W, 1.0 / W)) == pytest.approx(math.log(W), rel=1e-12, abs=1e-15)


def test_gibbs_point_mass_and_direct_value():
    assert gibbs_entropy([0.0, 1.0, 0.0]) == 0.0
    assert gibbs_entropy([0.5, 0.25, 0.25]) == pytest.approx(1.5 * math.log(2), rel=1e-15)


def test_gibbs_rejects_unnormalised():
    with pytest.raises(DomainError, match="sum to 1"):
        gibbs_entropy([0.5, 0.4])
    # inside the 1e-9 band nothing is renormalised
    p = np.array([0.5, 0.5 + 5e-10])
    assert gibbs_entropy(p) == pytest.approx(float(-(p * np.log(p)).sum()), rel=1e-15)


def test_exclusion_known_values():
    assert exclusion_entropy(np.full(8, 0.5)) == pytest.approx(8 * math.log(2), rel=1e-15)
    assert exclusion_entropy([0.0, 1.0, 1.0, 0.0]) == 0.0
    # -[0.1 ln 0.1 + 0.9 ln 0.9] - [0.2 ln 0.2 + 0.8 ln 0.8], 50-digit evaluation
    assert exclusion_entropy([0.1, 0.2]) == pytest.approx(0.82548539692963612, rel=1e-14)


def test_exclusion_domain():
    with pytest.raises(DomainError, match=r"\[0, 1\]"):
        exclusion_entropy([0.5, 1.2])
    with pytest.raises(DomainError):
        exclusion_entropy([-0.1])


def test_bosonic_known_values():
    assert bosonic_entropy(np.ones(5)) == pytest.approx(5 * 2 * math.log(2), rel=1e-15)
    assert bosonic_entropy(np.zeros(3)) == 0.0
    # (1.5 ln 1.5 - 0.5 ln 0.5) + (3 ln 3 - 2 ln 2), 50-digit evaluation
    assert bosonic_entropy([0.5, 2.0]) == pytest.approx(2.8643137573266577, rel=1e-14)


def test_bosonic_domain():
    with pytest.raises(DomainError, match=">= 0"):
        bosonic_entropy([1.0, -1e-3])


def test_kind_mismatch_rejected():
    dist = OccupationDistribution([0.2, 0.3], Kind.EXCLUSION)
    with pytest.raises(DomainError):
        bosonic_entropy(dist)
    assert exclusion_entropy(dist) == pytest.approx(float(exclusion_terms([0.2, 0.3]).sum()))


def test_distribution_is_read_only():
    dist = OccupationDistribution([0.2, 0.3], "bosonic")
    with pytest.raises(ValueError):
        dist.values[0] = 1.0


@given(st.lists(unit, min_size=1, max_size=20))
def test_exclusion_nonnegative(values):
    assert exclusion_entropy(values) >= 0.0


@given(st.lists(occ, min_size=1, max_size=20))
def test_bosonic_nonnegative(values):
    assert bosonic_entropy(values) >= 0.0


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=20))
def test_gibbs_nonnegative(raw):
    p = np.asarray(raw) + 1e-3
    assert gibbs_entropy(p / p.sum()) >= 0.0


def test_bosonic_term_increasing():
    n = np.geomspace(1e-8, 1e6, 4001)
    s = bosonic_terms(n)
    assert np.all(np.diff(s) > 0)
    # finite difference against ln(1 + 1/n)
    h = 1e-6 * n
    fd = (bosonic_terms(n + h) - bosonic_terms(n - h)) / (2 * h)
    assert np.allclose(fd, np.log1p(1 / n), rtol=1e-5)


def test_exclusion_term_symmetric():
    n = np.linspace(0.0, 1.0, 1001)
    assert np.allclose(exclusion_terms(n), exclusion_terms(1.0 - n), rtol=1e-13, atol=1e-16)


def test_large_occupation_stable():
    # (n+1) ln(n+1) - n ln n -> ln n + 1 for large n, no cancellation
    assert float(bosonic_terms(1e15)) == pytest.approx(math.log(1e15) + 1.0, rel=1e-12)


@given(st.integers(1, 500), st.integers(0, 500))
def test_uniform_matches_stirling(N, P):
    bos = bosonic_entropy(np.full(N, P / N))
    assert bos == pytest.approx(stirling_entropy(EnsembleSpec(N, P, Kind.BOSONIC)), rel=1e-12, abs=1e-300)
    if P <= N:
        exc = exclusion_entropy(np.full(N, P / N))
        assert exc == pytest.approx(stirling_entropy(EnsembleSpec(N, P, Kind.EXCLUSION)), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("kind", ["exclusion", "bosonic"])
def test_low_occupation_deviation_small(kind):
    assert low_occupation_deviation(np.full(4, 1e-6), kind) < 1e-5


def test_low_occupation_deviation_half_filled():
    dev = max(low_occupation_deviation(np.full(3, 0.5), k) for k in ("exclusion", "bosonic"))
    assert 0.1 <= dev <= 1.0


def test_both_kinds_agree_at_low_occupation():
    a = exclusion_entropy([1e-3])
    b = bosonic_entropy([1e-3])
    assert abs(a - b) / b < 1e-2


def test_low_occupation_deviation_domain():
    with pytest.raises(DomainError):
        low_occupation_deviation([0.0, 0.5], "bosonic")
    with pytest.raises(DomainError):
        low_occupation_deviation([0.5], "probability")
