"""Command-line front end.

::

    maxentlab count --states 3 --particles 2 --kind bosonic
    maxentlab solve --levels 1,2 --kind bosonic --alpha 0 --energy 1.0
    maxentlab figure1 --min 1e-4 --max 20 --points 200 --format csv

Every subcommand accepts ``--format {csv,json,plain}``, ``--output PATH``,
``--seed N`` and ``--quiet``.  The default format comes from the
``MAXENTLAB_FORMAT`` environment variable, falling back to a per-command
default.  Plain and CSV output start with ``#`` comment lines (version, seed,
command echo, log base) unless ``--quiet`` is given.

Exit status: 0 on success, 1 on a domain or validation error (or a failed
``verify``), 2 when a numerical solver does not converge.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .analysis import benford_frequencies, benford_law, figure1_table, numeric_slope, analytic_slope, Table
from .combinatorics import EnsembleSpec, count_microstates, stirling_entropy, stirling_relative_error
from .entropy import entropy_of
from .errors import ConvergenceError, DomainError, MaxEntError
from .kinds import Kind
from .maxent import (
    EnergyLevels,
    bosonic_occupation,
    exclusion_occupation,
    solve_alpha_beta,
    solve_beta,
)
from .oracle import enumeration_report, grid_search_maxent, perturbation_test

__all__ = ["RunConfig", "UsageError", "parse_levels", "parse_numbers", "build_parser", "run", "main"]

DEFAULT_SEED = 42
FORMAT_ENV = "MAXENTLAB_FORMAT"
FORMATS = ("csv", "json", "plain")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_NUMERICAL = 2


class UsageError(DomainError):
    """Malformed command line or configuration."""


REQUIRED = object()

# command -> (allowed parameter -> default, natural output format)
COMMANDS: dict[str, tuple[dict[str, Any], str]] = {
    "count": ({"states": REQUIRED, "particles": REQUIRED, "kind": "bosonic"}, "plain"),
    "stirling": ({"states": REQUIRED, "particles": REQUIRED, "kind": "bosonic"}, "plain"),
    "entropy": ({"kind": "bosonic", "values": None, "solution": None}, "plain"),
    "solve": (
        {"levels": REQUIRED, "kind": "bosonic", "energy": REQUIRED, "particles": None,
         "alpha": 0.0, "per_state": False},
        "json",
    ),
    "verify": (
        {"max_states": 6, "max_particles": 6, "trials": 1000, "magnitude": 0.01,
         "grid_step": 0.01},
        "json",
    ),
    "figure1": ({"min": 1e-4, "max": 20.0, "points": 200}, "csv"),
    "slope": ({"phi": REQUIRED, "ratio": 1.01}, "plain"),
    "benford": ({"decades": 6, "mode": "analytic", "samples": 1_000_000}, "csv"),
}


@dataclass
class RunConfig:
    """A validated, fully-resolved command invocation."""

    command: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output_format: Optional[str] = None
    output_path: Optional[str] = None
    seed: Optional[int] = None
    quiet: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        allowed, natural = COMMANDS[self.command]
        unknown = sorted(set(self.parameters) - set(allowed))
        if unknown:
            raise UsageError(f"unknown parameter(s) for {self.command}: {', '.join(unknown)}")
        self.parameters = {**allowed, **self.parameters}
        missing = sorted(k for k, v in self.parameters.items() if v is REQUIRED or
                         (v is None and allowed[k] is REQUIRED))
        if missing:
            raise UsageError(f"{self.command} requires --{', --'.join(m.replace('_', '-') for m in missing)}")
        fmt = self.output_format or os.environ.get(FORMAT_ENV) or natural
        if fmt not in FORMATS:
            raise UsageError(f"output format must be one of {', '.join(FORMATS)}, got {fmt!r}")
        self.output_format = fmt
        if self.seed is None:
            self.seed = DEFAULT_SEED

    def echo(self) -> str:
        parts = [self.command]
        for key, value in self.parameters.items():
            if value is None or value is False:
                continue
            flag = "--" + key.replace("_", "-")
            parts.append(flag if value is True else f"{flag} {value}")
        return " ".join(parts)


# --- parsing -----------------------------------------------------------------


def parse_numbers(text: str) -> list[float]:
    """Comma-separated decimals, or ``@path`` naming a one-value-per-line file."""
    text = text.strip()
    if text.startswith("@"):
        path = Path(text[1:])
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read values file {str(path)!r}: {exc.strerror}") from None
        tokens = [(f"line {i}", line.strip()) for i, line in enumerate(lines, 1) if line.strip()]
    else:
        tokens = [(f"position {i}", tok.strip()) for i, tok in enumerate(text.split(","), 1)]
    if not tokens or tokens == [("position 1", "")]:
        raise UsageError("empty list of values")
    values = []
    for where, tok in tokens:
        try:
            value = float(tok)
        except ValueError:
            raise UsageError(f"non-numeric token {tok!r} at {where}") from None
        if not math.isfinite(value):
            raise UsageError(f"non-finite value {tok!r} at {where}")
        values.append(value)
    return values


def parse_levels(text: str) -> EnergyLevels:
    """Parse and sort energy levels; negative energies are rejected with their position."""
    values = parse_numbers(text)
    for i, v in enumerate(values, 1):
        if v < 0:
            raise UsageError(f"negative energy {v!r} at position {i}")
    return EnergyLevels(values)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=FORMATS, default=None,
                        help=f"output format (default: ${FORMAT_ENV} or per-command)")
    common.add_argument("--output", dest="output_path", default=None, help="write here instead of stdout")
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--quiet", action="store_true", help="omit the # comment banner")

    parser = _Parser(prog="maxentlab", description="Maximum-entropy occupation statistics.")
    parser.add_argument("--version", action="version", version=f"maxentlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def kind_arg(p, choices=("exclusion", "bosonic")):
        p.add_argument("--kind", choices=choices, default="bosonic")

    p = sub.add_parser("count", parents=[common], help="exact microstate count W")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    kind_arg(p)

    p = sub.add_parser("stirling", parents=[common], help="Stirling entropy vs ln W")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    kind_arg(p)

    p = sub.add_parser("entropy", parents=[common], help="evaluate an entropy functional")
    kind_arg(p, ("probability", "exclusion", "bosonic"))
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--values", help="comma-separated occupations or @file")
    src.add_argument("--solution", help="JSON file written by `solve` ('-' for stdin)")

    p = sub.add_parser("solve", parents=[common], help="solve for the Lagrange multipliers")
    p.add_argument("--levels", required=True, help="comma-separated energies or @file")
    kind_arg(p, ("probability", "exclusion", "bosonic"))
    p.add_argument("--energy", type=float, required=True, help="target total energy")
    p.add_argument("--particles", type=float, default=None,
                   help="target total particle number; solves alpha as well")
    p.add_argument("--alpha", type=float, default=0.0, help="fixed alpha when --particles is absent")
    p.add_argument("--per-state", action="store_true", help="targets are per-state means (multiplied by N)")

    p = sub.add_parser("verify", parents=[common], help="run the brute-force oracles")
    p.add_argument("--max-states", type=int, default=6)
    p.add_argument("--max-particles", type=int, default=6)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--magnitude", type=float, default=0.01)
    p.add_argument("--grid-step", type=float, default=0.01)

    p = sub.add_parser("figure1", parents=[common], help="log-log Planck curve table")
    p.add_argument("--min", type=float, default=1e-4)
    p.add_argument("--max", type=float, default=20.0)
    p.add_argument("--points", type=int, default=200)

    p = sub.add_parser("slope", parents=[common], help="finite-difference vs analytic log-log slope")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--ratio", type=float, default=1.01)

    p = sub.add_parser("benford", parents=[common], help="leading-digit frequencies of a 1/x density")
    p.add_argument("--decades", type=int, default=6)
    p.add_argument("--mode", choices=("analytic", "sampled"), default="analytic")
    p.add_argument("--samples", type=int, default=1_000_000)
    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    meta = {k: ns.pop(k) for k in ("output_format", "output_path", "seed", "quiet")}
    return RunConfig(command=command, parameters=ns, **meta)


# --- output ------------------------------------------------------------------


def _json_value(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise ValueError(f"cannot encode non-finite number {value!r} as JSON")
        text = format(value, ".17g")
        # keep integral floats typed as floats on the way back in
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


def dumps_json(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _json_value(obj) + "\n"


def _plain_scalar(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (list, tuple, np.ndarray)):
        return " ".join(_plain_scalar(v) for v in value)
    return str(value)


def _flatten(result: dict, prefix: str = "") -> dict:
    """Nested dicts become dotted keys; lists of dicts are indexed."""
    flat = {}
    for key, value in result.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                flat.update(_flatten(item, f"{name}.{i}."))
        elif isinstance(value, (list, tuple)) and not value:
            flat[name] = "none"
        else:
            flat[name] = value
    return flat


def _render(result, fmt: str) -> str:
    if isinstance(result, Table):
        if fmt == "csv":
            return result.to_csv()
        if fmt == "json":
            return dumps_json([dict(zip(result.header, row)) for row in result.rows])
        out = io.StringIO()
        out.write("\t".join(result.header) + "\n")
        for row in result.rows:
            out.write("\t".join(_plain_scalar(v) for v in row) + "\n")
        return out.getvalue()
    if fmt == "json":
        return dumps_json(result)
    flat = _flatten(result)
    if fmt == "csv":
        cells = tuple("" if v is None else _plain_scalar(v) if isinstance(v, (list, tuple, np.ndarray)) else v
                      for v in flat.values())
        return Table(tuple(flat), (cells,)).to_csv()
    if "_plain" in result:
        return result["_plain"]
    return "".join(f"{k} = {_plain_scalar(v)}\n" for k, v in flat.items())


def _banner(config: RunConfig) -> str:
    return (
        f"# maxentlab {__version__}\n"
        f"# command: {config.echo()}\n"
        f"# seed: {config.seed}\n"
        "# logarithms: natural (nats)\n"
    )


# --- commands ----------------------------------------------------------------


def _ensemble(p) -> EnsembleSpec:
    return EnsembleSpec(int(p["states"]), int(p["particles"]), Kind.parse(p["kind"]))


def _cmd_count(p, config):
    spec = _ensemble(p)
    count = count_microstates(spec)
    result = {
        "n_states": spec.n_states,
        "n_particles": spec.n_particles,
        "kind": spec.kind.value,
        "exact": count.exact,
        "log_value": count.log_value,
    }
    result["_plain"] = f"{count.exact}\n" if count.has_exact else f"ln_W = {_plain_scalar(count.log_value)}\n"
    return result


def _cmd_stirling(p, config):
    spec = _ensemble(p)
    return {
        "n_states": spec.n_states,
        "n_particles": spec.n_particles,
        "kind": spec.kind.value,
        "stirling_entropy": stirling_entropy(spec),
        "log_W": count_microstates(spec).log_value,
        "relative_error": stirling_relative_error(spec),
    }


def _read_solution(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read solution file {path!r}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"solution file {path!r} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(data, dict) or "occupations" not in data:
        raise UsageError(f"solution file {path!r} has no 'occupations' key")
    return data


def _cmd_entropy(p, config):
    if p.get("solution"):
        data = _read_solution(p["solution"])
        kind = Kind.parse(data.get("kind", p["kind"]))
        values = [float(v) for v in data["occupations"]]
    elif p.get("values"):
        kind = Kind.parse(p["kind"])
        values = parse_numbers(p["values"])
    else:
        raise UsageError("entropy requires --values or --solution")
    return {"kind": kind.value, "n_states": len(values), "entropy": entropy_of(values, kind)}


def _cmd_solve(p, config):
    levels = parse_levels(p["levels"]) if isinstance(p["levels"], str) else EnergyLevels.coerce(p["levels"])
    kind = Kind.parse(p["kind"])
    scale = len(levels) if p["per_state"] else 1
    energy = float(p["energy"]) * scale
    if p["particles"] is None:
        sol = solve_beta(levels, kind, energy, alpha=float(p["alpha"]))
    else:
        sol = solve_alpha_beta(levels, kind, energy, float(p["particles"]) * scale)
    result = {"levels": levels.energies.tolist(), **sol.to_dict()}
    result["target_energy"] = energy
    result["target_particles"] = None if p["particles"] is None else float(p["particles"]) * scale
    return result


def _verify_instances(rng: np.random.Generator, count: int):
    for _ in range(count):
        N = int(rng.integers(3, 5))
        E = np.sort(rng.uniform(0.0, 3.0, N))
        beta = float(rng.uniform(0.3, 2.0))
        yield E, beta


def _cmd_verify(p, config):
    rng = np.random.default_rng(config.seed)
    enum_rows = enumeration_report(int(p["max_states"]), int(p["max_particles"]))
    enum_fail = [r for r in enum_rows if not r["ok"]]

    grid = []
    step = float(p["grid_step"])
    for E, alpha, beta in (((1.0, 2.0), 0.0, 1.0), ((0.0, 1.0, 2.0), 0.5, 1.0)):
        for kind, law in ((Kind.BOSONIC, bosonic_occupation), (Kind.EXCLUSION, exclusion_occupation)):
            n = law(E, beta, alpha).values
            found = grid_search_maxent(E, kind, float(np.dot(n, E)), float(n.sum()), step)
            gap = float(np.max(np.abs(found.occupations.values - n)))
            grid.append({"levels": list(E), "kind": kind.value, "max_gap": gap, "ok": gap <= 2 * step})

    perturb = []
    for i, (E, beta) in enumerate(_verify_instances(rng, 10)):
        for kind, law in ((Kind.BOSONIC, bosonic_occupation), (Kind.EXCLUSION, exclusion_occupation)):
            alpha = 0.5 if kind is Kind.BOSONIC else -1.0
            n = law(E, beta, alpha)
            ok = perturbation_test(E, n, kind, trials=int(p["trials"]),
                                   magnitude=float(p["magnitude"]), seed=config.seed + i)
            perturb.append({"levels": E.tolist(), "kind": kind.value, "ok": ok})

    passed = not enum_fail and all(g["ok"] for g in grid) and all(q["ok"] for q in perturb)
    return {
        "passed": passed,
        "enumeration": {"cases": len(enum_rows), "failures": enum_fail},
        "grid_search": {"cases": len(grid), "grid_step": step, "results": grid},
        "perturbation": {
            "cases": len(perturb),
            "trials": int(p["trials"]),
            "failures": sum(not q["ok"] for q in perturb),
        },
    }


def _cmd_figure1(p, config):
    return figure1_table(float(p["min"]), float(p["max"]), int(p["points"]))


def _cmd_slope(p, config):
    phi, ratio = float(p["phi"]), float(p["ratio"])
    numeric = numeric_slope(phi, ratio)
    analytic = float(analytic_slope(phi))
    return {"phi": phi, "ratio": ratio, "numeric_slope": numeric, "analytic_slope": analytic,
            "difference": numeric - analytic}


def _cmd_benford(p, config):
    freqs = benford_frequencies(int(p["decades"]), p["mode"], int(p["samples"]), config.seed)
    law = benford_law()
    rows = tuple((d, float(f), float(law[d - 1]), float(f - law[d - 1])) for d, f in enumerate(freqs, 1))
    return Table(("digit", "frequency", "benford", "deviation"), rows)


_DISPATCH = {
    "count": _cmd_count,
    "stirling": _cmd_stirling,
    "entropy": _cmd_entropy,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "figure1": _cmd_figure1,
    "slope": _cmd_slope,
    "benford": _cmd_benford,
}


def execute(config: RunConfig) -> tuple[str, int]:
    """Run ``config`` and return ``(rendered output, exit status)``; errors propagate."""
    result = _DISPATCH[config.command](config.parameters, config)
    status = EXIT_OK
    if config.command == "verify" and not result["passed"]:
        status = EXIT_DOMAIN
    if isinstance(result, dict) and config.output_format != "plain":
        result = {k: v for k, v in result.items() if k != "_plain"}
    text = _render(result, config.output_format)
    if config.output_format in ("plain", "csv") and not config.quiet:
        text = _banner(config) + text
    return text, status


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    """Execute ``config``, write its output, and return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        text, status = execute(config)
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        return status
    except ConvergenceError as exc:
        stderr.write(f"maxentlab {config.command}: numerical error: {exc}\n")
        return EXIT_NUMERICAL
    except (MaxEntError, ValueError, OSError) as exc:
        stderr.write(f"maxentlab {config.command}: error: {exc}\n")
        return EXIT_DOMAIN


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = config_from_args(argv)
    except MaxEntError as exc:
        sys.stderr.write(f"maxentlab: error: {exc}\n")
        return EXIT_DOMAIN
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
