"""Shape of the Planck occupation curve on log-log axes.

With ``phi = beta * E`` the Planck occupation is ``n = 1 / (e^phi - 1)`` and
its log-log slope is

    s(phi) = d ln n / d ln phi = -phi e^phi / (e^phi - 1).

For ``phi -> 0`` the slope tends to -1 (``n ~ 1/phi``, the Rayleigh-Jeans
long tail); for large ``phi`` it tends to ``-phi`` (``n ~ e^-phi``, the
canonical law).  ``n = 1`` exactly at ``phi = ln 2``.

The density ``1/x`` carried by a slope -1 tail spreads evenly in
``log10 x``, which is where the leading digit law ``log10(1 + 1/d)`` comes
from; :func:`benford_frequencies` computes it analytically and by sampling.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Regime",
    "CurvePoint",
    "Table",
    "planck_n",
    "log_planck_n",
    "analytic_slope",
    "classify_regime",
    "planck_curve",
    "numeric_slope",
    "rayleigh_jeans_gap",
    "BenfordMode",
    "benford_law",
    "benford_frequencies",
    "figure1_table",
    "FIGURE1_HEADER",
]

CROSSOVER_BAND = 0.1


class Regime(str, enum.Enum):
    POWER_LAW = "PowerLaw"
    CROSSOVER = "Crossover"
    CANONICAL = "Canonical"

    def __str__(self) -> str:
        return self.value


def _positive_phi(phi) -> np.ndarray:
    arr = np.asarray(phi, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"phi must be finite and > 0 (phi = 0 diverges), got {phi!r}")
    return arr


def planck_n(phi):
    """``1 / (e^phi - 1)``."""
    phi = _positive_phi(phi)
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(phi)


def log_planck_n(phi):
    """``ln n`` evaluated as ``-phi - ln(1 - e^-phi)``, stable at both ends."""
    phi = _positive_phi(phi)
    return -phi - np.log(-np.expm1(-phi))


def analytic_slope(phi):
    """``d ln n / d ln phi = -phi e^phi / (e^phi - 1) = phi / expm1(-phi)``."""
    phi = _positive_phi(phi)
    return phi / np.expm1(-phi)


def classify_regime(phi: float, occupation: float, slope: float) -> Regime:
    """``PowerLaw`` above ``n = 1``; below it ``Canonical`` unless in the crossover band.

    The band is where the slope is more than 0.1 away from both -1 and
    ``-phi``.
    """
    if occupation > 1.0:
        return Regime.POWER_LAW
    if occupation < 1.0 and not (
        abs(slope + 1.0) > CROSSOVER_BAND and abs(slope + phi) > CROSSOVER_BAND
    ):
        return Regime.CANONICAL
    return Regime.CROSSOVER


@dataclass(frozen=True)
class CurvePoint:
    phi: float
    occupation: float
    log_phi: float
    log_n: float
    local_slope: float
    regime: Regime


def planck_curve(phi_min: float, phi_max: float, points: int) -> list[CurvePoint]:
    """Log-spaced samples of the Planck curve between ``phi_min`` and ``phi_max``."""
    if not (math.isfinite(phi_min) and math.isfinite(phi_max)) or phi_min <= 0:
        raise DomainError(f"phi_min must be finite and > 0, got {phi_min!r}")
    if not phi_min < phi_max:
        raise DomainError(f"phi_min must be < phi_max, got {phi_min!r} >= {phi_max!r}")
    if int(points) != points or points < 2:
        raise DomainError(f"points must be an integer >= 2, got {points!r}")
    phi = np.geomspace(phi_min, phi_max, int(points))
    n = planck_n(phi)
    log_n = log_planck_n(phi)
    slope = analytic_slope(phi)
    return [
        CurvePoint(
            phi=float(p),
            occupation=float(o),
            log_phi=float(math.log(p)),
            log_n=float(ln),
            local_slope=float(s),
            regime=classify_regime(float(p), float(o), float(s)),
        )
        for p, o, ln, s in zip(phi, n, log_n, slope)
    ]


def numeric_slope(phi: float, ratio: float = 1.01) -> float:
    """Central difference of ``ln n`` against ``ln phi`` with step factor ``ratio``.

    The truncation error is ``O((ln ratio)**2)``.
    """
    if not 1.0 < ratio <= 1.1:
        raise DomainError(f"ratio must lie in (1, 1.1], got {ratio!r}")
    phi = float(_positive_phi(phi))
    hi, lo = phi * ratio, phi / ratio
    if not math.isfinite(hi) or lo <= 0:
        raise DomainError(f"step ratio {ratio!r} takes phi={phi!r} out of (0, inf)")
    return float((log_planck_n(hi) - log_planck_n(lo)) / (math.log(hi) - math.log(lo)))


def rayleigh_jeans_gap(phi):
    """``|n - 1/phi| * phi``: relative distance from the pure ``1/phi`` tail."""
    phi = _positive_phi(phi)
    gap = np.abs(phi / np.expm1(phi) - 1.0)
    return float(gap) if gap.ndim == 0 else gap


class BenfordMode(str, enum.Enum):
    ANALYTIC = "analytic"
    SAMPLED = "sampled"


def benford_law() -> np.ndarray:
    """``log10(1 + 1/d)`` for ``d = 1..9`` as telescoped CDF differences.

    Every difference is exact in floating point, so the nine values sum to
    exactly 1.
    """
    cdf = np.log10(np.arange(1, 11, dtype=float))
    return np.diff(cdf)


def benford_frequencies(decades: int = 6, mode: str = "analytic", samples: int = 1_000_000,
                        seed: int = 42) -> np.ndarray:
    """Leading-digit frequencies of a ``1/x`` density on ``[1, 10**decades]``.

    ``analytic`` integrates the density per leading digit; because the support
    is whole decades every decade contributes the same shares and the answer
    is the digit law regardless of ``decades``.  ``sampled`` draws
    ``x = 10**(u * decades)`` with ``u`` uniform on ``[0, 1)`` and counts
    leading digits.
    """
    mode = BenfordMode(str(mode).lower())
    if int(decades) != decades or decades < 1:
        raise DomainError(f"decades must be an integer >= 1, got {decades!r}")
    if mode is BenfordMode.ANALYTIC:
        return benford_law()
    if int(samples) != samples or samples < 10_000:
        raise DomainError(f"sampled mode needs samples >= 10000, got {samples!r}")
    rng = np.random.default_rng(seed)
    exponent = rng.random(int(samples)) * decades
    mantissa = 10.0 ** np.mod(exponent, 1.0)
    digits = np.clip(np.floor(mantissa).astype(int), 1, 9)
    counts = np.bincount(digits, minlength=10)[1:]
    return counts / float(samples)


FIGURE1_HEADER = ("phi", "n", "log_phi", "log_n", "slope", "regime")


@dataclass(frozen=True)
class Table:
    """Header plus rows, written as comma-separated text with LF endings."""

    header: tuple[str, ...]
    rows: tuple[tuple, ...]

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list:
        j = self.header.index(name)
        return [row[j] for row in self.rows]

    def write_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([_cell(v) for v in row])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def figure1_table(phi_min: float = 1e-4, phi_max: float = 20.0, points: int = 200) -> Table:
    """Rows ``(phi, n, log_phi, log_n, slope, regime)`` of the log-log Planck curve."""
    curve = planck_curve(phi_min, phi_max, points)
    return Table(
        header=FIGURE1_HEADER,
        rows=tuple(
            (p.phi, p.occupation, p.log_phi, p.log_n, p.local_slope, p.regime.value)
            for p in curve
        ),
    )
