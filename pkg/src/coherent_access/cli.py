"""Command-line front end emitting CSV or JSON tables.

Exit codes: 0 success, 2 invalid arguments, 3 domain error raised by the
library, 4 I/O failure. Failures also print a one-line JSON error record on
stderr.

Lists of numbers are comma separated; use ``--grid=-1,0,1`` when the first
value is negative.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import counting
from .distributions import (
    ExponentSeries,
    epsilon_star,
    is_perturbative,
    modified_boltzmann_weight,
    modified_bose_einstein,
    normalize,
)
from .errors import ConvergenceError, DomainError
from .maxent import MAX_ORDER, MomentConstraints, moments, solve_multipliers
from .tsallis import (
    QParams,
    q_exponential_clamped,
    q_exponential_weight,
    series_vs_q_residual,
    series_weight,
)

_log = logging.getLogger("coherent_access")

#: Default output directory when ``--output`` is not given; stdout if unset.
OUTPUT_DIR_ENV = "COHERENT_ACCESS_OUTPUT_DIR"

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4

COMMAND_PARAMS = {
    "count": {"g", "n"},
    "omega": {"levels", "n", "by_macrostate"},
    "enumerate": {"g", "n"},
    "be-curve": {"beta", "alpha1", "alphas", "e_min", "e_max", "steps"},
    "boltzmann-curve": {"beta", "alpha1", "alphas", "e_min", "e_max", "steps", "q"},
    "maxent": {"grid", "moments", "tol", "max_iter"},
    "q-compare": {"q", "beta", "beta_e_min", "beta_e_max", "steps", "order"},
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    output_format: str = "csv"
    output_path: Optional[str] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMAND_PARAMS:
            raise UsageError(f"unknown command {self.command!r}")
        unknown = set(self.params) - COMMAND_PARAMS[self.command]
        if unknown:
            raise UsageError(f"unknown parameters for {self.command}: {sorted(unknown)}")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown output format {self.output_format!r}")
        if self.seed is not None and not (0 <= self.seed < 2**64):
            raise UsageError("seed must be a 64-bit unsigned integer")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_common(p):
    p.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv",
                   help="output table format (default csv)")
    p.add_argument("--output", dest="output_path", default=None,
                   help=f"output file; defaults to ${OUTPUT_DIR_ENV}/<command>.<format> "
                        "when that variable is set, else stdout")
    p.add_argument("--seed", type=int, default=None,
                   help="64-bit seed, echoed into JSON metadata")


def _add_series_flags(p):
    p.add_argument("--beta", type=float, default=1.0,
                   help="inverse temperature 1/kT, in 1/energy units (default 1)")
    p.add_argument("--alpha1", type=float, default=0.0,
                   help="dimensionless coefficient of (beta E)^2 in the exponent "
                        "eps* = beta E + alpha1 (beta E)^2 (default 0)")
    p.add_argument("--alphas", type=_float_list, default=None,
                   help="full list alpha1,alpha2,... of coefficients of (beta E)^2, (beta E)^3, ...; "
                        "overrides --alpha1")
    p.add_argument("--steps", type=int, default=50, help="number of grid points (default 50)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coherent-access", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(
        "count",
        help="coherent vs standard microstate count of one level",
        description="Count placements of n bosons on one level with g sublevels. "
                    "Coherent states G = sum_k C(g,k) = 2^g - 1; "
                    "w = (G+n-1)!/((G-1)! n!).",
    )
    p.add_argument("--g", type=int, required=True, help="sublevels in the level (integer >= 1)")
    p.add_argument("--n", type=int, required=True, help="particles in the level (integer >= 0)")
    _add_common(p)

    p = sub.add_parser(
        "omega",
        help="total microstate count Omega over all macrostates",
        description="Omega = sum_k w*_k with w*_k = prod_j (G_j+N_j-1)!/((G_j-1)! N_j!), "
                    "summed over all occupancies with sum_j N_j = n.",
    )
    p.add_argument("--levels", type=_int_list, required=True,
                   help="comma-separated sublevel counts g_j of each level (integers >= 1)")
    p.add_argument("--n", type=int, required=True, help="total particles (integer >= 0)")
    p.add_argument("--by-macrostate", action="store_true",
                   help="one row per occupancy vector with its weight w*_k")
    _add_common(p)

    p = sub.add_parser(
        "enumerate",
        help="list every coherent-access configuration explicitly",
        description="Enumerate multisets of n particles over the 2^g - 1 nonempty sublevel "
                    "subsets; the row count equals w = (G+n-1)!/((G-1)! n!).",
    )
    p.add_argument("--g", type=int, required=True, help="sublevels (integer >= 1)")
    p.add_argument("--n", type=int, required=True, help="particles (integer >= 0)")
    _add_common(p)

    p = sub.add_parser(
        "be-curve",
        help="equilibrium vs corrected Bose-Einstein occupation",
        description="Occupation per coherent state N*/G = 1/(exp(eps*) - 1) with "
                    "eps* = beta E + alpha1 (beta E)^2 + ..., against 1/(exp(beta E) - 1).",
    )
    _add_series_flags(p)
    p.add_argument("--e-min", type=float, default=0.1,
                   help="lowest energy, energy units, must be > 0 (default 0.1)")
    p.add_argument("--e-max", type=float, required=True, help="highest energy, energy units")
    _add_common(p)

    p = sub.add_parser(
        "boltzmann-curve",
        help="equilibrium vs corrected Boltzmann weight and probabilities",
        description="Weight exp(-beta E - alpha1 (beta E)^2 - ...) and P(E) = weight/Z on a "
                    "uniform energy grid, against exp(-beta E).",
    )
    _add_series_flags(p)
    p.add_argument("--e-min", type=float, default=0.0,
                   help="lowest energy, energy units (default 0)")
    p.add_argument("--e-max", type=float, required=True, help="highest energy, energy units")
    p.add_argument("--q", type=float, default=None,
                   help="also emit the q-exponential [1-(1-q) beta E]^(1/(1-q)), "
                        "set to 0 past its cutoff (dimensionless)")
    _add_common(p)

    p = sub.add_parser(
        "maxent",
        help="Lagrange multipliers matching raw energy moments",
        description="Solve for beta_n so that P(E) = exp(-sum_n beta_n E^n)/Z matches "
                    "<E^n> = sum_j p_j E_j^n for n = 1..m.",
    )
    p.add_argument("--grid", type=_float_list, required=True,
                   help="comma-separated energies E_j, energy units")
    p.add_argument("--moments", type=_float_list, required=True,
                   help=f"targets <E>,<E^2>,... in energy^n units (at most {MAX_ORDER})")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="max abs moment mismatch, energy^n units (default 1e-10)")
    p.add_argument("--max-iter", type=int, default=200, help="Newton iteration cap (default 200)")
    _add_common(p)

    p = sub.add_parser(
        "q-compare",
        help="truncated exponent series vs q-exponential",
        description="Compare exp(-sum_{n<=order} c_n (beta E)^n), c_n = (1-q)^(n-1)/n, with "
                    "[1-(1-q) beta E]^(1/(1-q)); requires |(1-q) beta E| < 1.",
    )
    p.add_argument("--q", type=float, required=True, help="entropic index q (dimensionless)")
    p.add_argument("--beta", type=float, default=1.0, help="inverse temperature, 1/energy (default 1)")
    p.add_argument("--beta-e-min", type=float, default=0.0,
                   help="lowest beta E, dimensionless (default 0)")
    p.add_argument("--beta-e-max", type=float, required=True, help="highest beta E, dimensionless")
    p.add_argument("--steps", type=int, default=50, help="number of grid points (default 50)")
    p.add_argument("--order", type=int, default=10, help="series truncation order (integer >= 1)")
    _add_common(p)
    return parser


def _require(cond, message):
    if not cond:
        raise UsageError(message)


def _validate(cmd, prm):
    if cmd in ("count", "enumerate"):
        _require(prm["g"] >= 1, "--g must be >= 1")
        _require(prm["n"] >= 0, "--n must be >= 0")
        if cmd == "enumerate":
            size = counting.microstate_count(counting.coherent_degeneracy(prm["g"]), prm["n"])
            _require(size <= counting.MAX_ENUMERATION,
                     f"enumeration would produce {size} rows (limit {counting.MAX_ENUMERATION})")
    elif cmd == "omega":
        _require(len(prm["levels"]) >= 1, "--levels must list at least one level")
        _require(all(g >= 1 for g in prm["levels"]), "every level needs g >= 1")
        _require(prm["n"] >= 0, "--n must be >= 0")
    elif cmd in ("be-curve", "boltzmann-curve"):
        _require(prm["beta"] > 0, "--beta must be > 0")
        _require(prm["steps"] >= 1, "--steps must be >= 1")
        _require(prm["e_max"] >= prm["e_min"], "--e-max must be >= --e-min")
        if cmd == "be-curve":
            _require(prm["e_min"] > 0, "--e-min must be > 0 (occupation diverges at E = 0)")
    elif cmd == "maxent":
        m = len(prm["moments"])
        _require(1 <= m <= MAX_ORDER, f"--moments needs between 1 and {MAX_ORDER} values")
        _require(len(set(prm["grid"])) > m, f"--grid needs more than {m} distinct energies")
        _require(prm["tol"] > 0, "--tol must be > 0")
        _require(prm["max_iter"] >= 1, "--max-iter must be >= 1")
    elif cmd == "q-compare":
        _require(prm["beta"] > 0, "--beta must be > 0")
        _require(prm["steps"] >= 1, "--steps must be >= 1")
        _require(prm["order"] >= 1, "--order must be >= 1")
        _require(prm["beta_e_max"] >= prm["beta_e_min"], "--beta-e-max must be >= --beta-e-min")


def parse_args(argv) -> RunConfig:
    """Parse and validate a command line; raises UsageError on bad input."""
    ns = vars(build_parser().parse_args(list(argv)))
    command = ns.pop("command")
    config = RunConfig(
        command=command,
        output_format=ns.pop("output_format"),
        output_path=ns.pop("output_path"),
        seed=ns.pop("seed"),
        params=ns,
    )
    _validate(command, config.params)
    return config


def _series(prm) -> ExponentSeries:
    alphas = prm["alphas"] if prm.get("alphas") is not None else [prm["alpha1"]]
    while alphas and alphas[-1] == 0:
        alphas = alphas[:-1]
    return ExponentSeries(prm["beta"], tuple(alphas))


def _grid(lo, hi, steps):
    return np.linspace(lo, hi, steps).tolist()


def _count(prm):
    g, n = prm["g"], prm["n"]
    G = counting.coherent_degeneracy(g)
    return [{
        "g": g, "G": G, "L": counting.coherent_excess(g), "n": n,
        "w": str(counting.microstate_count(G, n)),
        "w_standard": str(counting.microstate_count(g, n)),
        "w_distinguishable": str(counting.distinguishable_count(G, n)),
    }]


def _omega(prm):
    levels, n = prm["levels"], prm["n"]
    label = ";".join(map(str, levels))
    if prm.get("by_macrostate"):
        rows = []
        for occ in counting.compositions(n, len(levels)):
            m = counting.MacrostateSpec.from_pairs(zip(levels, occ))
            rows.append({
                "levels": label,
                "occupancies": ";".join(map(str, occ)),
                "weight": str(counting.macrostate_weight(m)),
                "weight_standard": str(counting.macrostate_weight(m, coherent=False)),
            })
        return rows
    G_total = sum(counting.coherent_degeneracy(g) for g in levels)
    return [{
        "levels": label,
        "G_total": G_total,
        "n": n,
        "omega": str(counting.total_omega(levels, n)),
        "omega_closed_form": str(counting.microstate_count(G_total, n)),
        "omega_standard": str(counting.total_omega(levels, n, coherent=False)),
    }]


def _enumerate(prm):
    g = prm["g"]
    return [
        {
            "index": i,
            "sequence": counting.format_sequence(occ, g),
            "occupation": ";".join(
                "".join(map(str, s)) + ":" + str(c) for s, c in occ.items()
            ),
        }
        for i, occ in enumerate(counting.enumerate_coherent_sequences(g, prm["n"]))
    ]


def _warn_nonperturbative(series, beta_es):
    if len(series.alphas) == 1:
        bad = [x for x in beta_es if not is_perturbative(x, series.alphas[0])]
        if bad:
            _log.warning(
                "1 + 2 alpha1 beta E <= 0 for %d grid points (first at beta E = %r); "
                "outside the perturbative regime", len(bad), bad[0])


def _be_curve(prm):
    series = _series(prm)
    energies = _grid(prm["e_min"], prm["e_max"], prm["steps"])
    beta_es = [series.beta * E for E in energies]
    _warn_nonperturbative(series, beta_es)
    rows = []
    for E, x in zip(energies, beta_es):
        es = epsilon_star(x, series)
        rows.append({
            "E": E,
            "beta_E": x,
            "eps_star": es,
            "occupation_equilibrium": modified_bose_einstein(x),
            "occupation_modified": modified_bose_einstein(es),
        })
    return rows


def _boltzmann_curve(prm):
    series = _series(prm)
    eq = ExponentSeries(series.beta)
    energies = _grid(prm["e_min"], prm["e_max"], prm["steps"])
    _warn_nonperturbative(series, [series.beta * E for E in energies])
    p_eq = normalize(energies, eq).probabilities
    p_mod = normalize(energies, series).probabilities
    qp = QParams(prm["q"], series.beta) if prm.get("q") is not None else None
    rows = []
    for i, E in enumerate(energies):
        row = {
            "E": E,
            "beta_E": series.beta * E,
            "weight_equilibrium": modified_boltzmann_weight(E, eq),
            "weight_modified": modified_boltzmann_weight(E, series),
            "p_equilibrium": float(p_eq[i]),
            "p_modified": float(p_mod[i]),
        }
        if qp is not None:
            row["weight_q_exponential"] = q_exponential_clamped(E, qp)
        rows.append(row)
    return rows


def _maxent(prm):
    sol = solve_multipliers(
        MomentConstraints(tuple(prm["moments"]), tuple(prm["grid"])),
        tol=prm["tol"], max_iter=prm["max_iter"],
    )
    achieved = moments(sol.distribution, len(sol.betas))
    row = {f"beta_{n}": b for n, b in enumerate(sol.betas, start=1)}
    row.update({f"moment_{n}": a for n, a in enumerate(achieved, start=1)})
    row["residual"] = sol.residual
    row["iterations"] = sol.iterations
    return [row]


def _q_compare(prm):
    qp = QParams(prm["q"], prm["beta"])
    rows = []
    for x in _grid(prm["beta_e_min"], prm["beta_e_max"], prm["steps"]):
        E = x / qp.beta
        rows.append({
            "beta_E": x,
            "q_exponential": q_exponential_weight(E, qp),
            "series": series_weight(E, qp, prm["order"]),
            "residual": series_vs_q_residual(E, qp, prm["order"]),
        })
    return rows


_HANDLERS = {
    "count": _count,
    "omega": _omega,
    "enumerate": _enumerate,
    "be-curve": _be_curve,
    "boltzmann-curve": _boltzmann_curve,
    "maxent": _maxent,
    "q-compare": _q_compare,
}


def _cell(value):
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render(config: RunConfig, rows: list[dict]) -> str:
    """Serialize rows as CSV (header + rows) or JSON (``meta`` + ``rows``)."""
    if config.output_format == "json":
        doc = {"meta": asdict(config), "rows": rows}
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    columns = list(rows[0]) if rows else []
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def _destination(config: RunConfig) -> Optional[Path]:
    if config.output_path:
        return Path(config.output_path)
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir:
        return Path(outdir) / f"{config.command}.{config.output_format}"
    return None


def _error(kind, message, code):
    record = {"error": kind, "message": str(message), "exit_code": code}
    print(json.dumps(record), file=sys.stderr)
    return code


def run(config: RunConfig, stdout=None) -> int:
    """Execute ``config`` and write its table. Returns the exit status."""
    stdout = stdout or sys.stdout
    try:
        rows = _HANDLERS[config.command](config.params)
    except (DomainError, ConvergenceError, ValueError, ArithmeticError) as exc:
        return _error(type(exc).__name__, exc, EXIT_DOMAIN)
    text = render(config, rows)
    dest = _destination(config)
    try:
        if dest is None:
            stdout.write(text)
        else:
            dest.parent.mkdir(parents=True, exist_ok=True)
            with open(dest, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
    except OSError as exc:
        return _error("IOError", exc, EXIT_IO)
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        return _error("UsageError", exc, EXIT_USAGE)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
