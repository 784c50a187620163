"""Batch front-end: run configured cases and emit a CSV report.

Config format (line-oriented key = value, '#' starts a comment):

    # optional global defaults before the first case
    seed = 42
    max_sweeps = 100

    [case row1]
    marginal = uniform 0 0.4
    marginal = uniform 0.1 0.5
    marginal = uniform 0 1
    weights = 0.5 0.2 0.3          # or: aggregation = sum
    transform = stop_loss 0.3      # identity | stop_loss k | power p
    n = 100000
    restarts = 3
    seed = 7                       # optional per-case override
    oracle = on                    # exhaustive cross-check (tiny cases only)
    oracle_budget = 1000000
    auto_truncate = on             # default on

Marginal syntax: ``uniform a b`` | ``exponential rate`` | ``pareto alpha`` |
``normal mu sigma`` | ``empirical path`` (one value per line, path relative
to the config file), each optionally followed by ``truncate p_lo p_hi``.

One CSV row per case, in config order; a failing case carries its error
string in the last column and does not abort the batch. Exit code is 0 iff
no row carries an error. Identical config and seed produce identical CSV
except for the runtime columns.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import marginals as mg
from .bounds import estimate_inf
from .costfn import CostFunction, identity, power, stop_loss, sum_agg, weighted_sum
from .errors import RaboundsError
from .marginals import MarginalSpec, discretize, truncate_unbounded_sides
from .oracle import (
    arrangement_count,
    brute_force_min,
    brute_force_min_over_opposite_set,
)
from .ra_core import ArrangementMatrix

__all__ = [
    "ParseError",
    "ValidationError",
    "CaseConfig",
    "RunConfig",
    "parse_config",
    "run_cases",
    "write_csv",
    "main",
]


class ParseError(RaboundsError):
    """Config text is malformed; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(RaboundsError):
    """Config parsed but is semantically invalid."""


CSV_COLUMNS = [
    "case",
    "n",
    "d",
    "restarts",
    "seed",
    "lower",
    "upper",
    "sup_lower",
    "sup_upper",
    "sweeps_lower",
    "sweeps_upper",
    "converged_lower",
    "converged_upper",
    "runtime_ms_lower",
    "runtime_ms_upper",
    "truncated",
    "oracle_lower",
    "oracle_upper",
    "theorem_check",
    "error",
]

RUNTIME_COLUMNS = ("runtime_ms_lower", "runtime_ms_upper")


@dataclass(frozen=True)
class CaseConfig:
    case_id: str
    specs: Tuple[MarginalSpec, ...]
    cost: CostFunction
    n: int
    restarts: int = 1
    seed: Optional[int] = None  # None -> global default
    oracle: bool = False
    oracle_budget: int = 1_000_000
    auto_truncate: bool = True


@dataclass(frozen=True)
class RunConfig:
    cases: Tuple[CaseConfig, ...]
    seed: int = 0
    max_sweeps: int = 100


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _parse_number(token: str, line_no: int, kind=float):
    try:
        if kind is int:
            try:
                return int(token)
            except ValueError:
                as_float = float(token)  # allow exponent spellings like 1e5
                as_int = int(as_float)
                if as_int != as_float:
                    raise ValueError(token)
                return as_int
        return kind(token)
    except (ValueError, OverflowError):
        raise ParseError(line_no, f"expected a number, got {token!r}") from None


def _parse_flag(value: str, line_no: int) -> bool:
    if value in ("on", "true", "1"):
        return True
    if value in ("off", "false", "0"):
        return False
    raise ParseError(line_no, f"expected on/off, got {value!r}")


def _parse_marginal(tokens: List[str], line_no: int, base_dir: Path) -> MarginalSpec:
    if not tokens:
        raise ParseError(line_no, "marginal needs a family name")
    family, args = tokens[0], tokens[1:]
    window = None
    if "truncate" in args:
        pos = args.index("truncate")
        tail = args[pos + 1 :]
        if len(tail) != 2:
            raise ParseError(line_no, "truncate needs exactly p_lo and p_hi")
        window = (
            _parse_number(tail[0], line_no),
            _parse_number(tail[1], line_no),
        )
        args = args[:pos]
    try:
        if family == "uniform":
            if len(args) != 2:
                raise ParseError(line_no, "uniform needs: a b")
            spec = mg.uniform(_parse_number(args[0], line_no), _parse_number(args[1], line_no))
        elif family == "exponential":
            if len(args) != 1:
                raise ParseError(line_no, "exponential needs: rate")
            spec = mg.exponential(_parse_number(args[0], line_no))
        elif family == "pareto":
            if len(args) != 1:
                raise ParseError(line_no, "pareto needs: alpha")
            spec = mg.pareto(_parse_number(args[0], line_no))
        elif family == "normal":
            if len(args) != 2:
                raise ParseError(line_no, "normal needs: mu sigma")
            spec = mg.normal(_parse_number(args[0], line_no), _parse_number(args[1], line_no))
        elif family == "empirical":
            if len(args) != 1:
                raise ParseError(line_no, "empirical needs: path")
            spec = mg.empirical(_load_empirical(base_dir / args[0], line_no))
        else:
            raise ParseError(line_no, f"unknown marginal family {family!r}")
    except ValueError as exc:
        raise ValidationError(f"line {line_no}: {exc}") from None
    if window is not None:
        try:
            spec = mg.truncate(spec, *window)
        except RaboundsError as exc:
            raise ValidationError(f"line {line_no}: {exc}") from None
    return spec


def _load_empirical(path: Path, line_no: int) -> List[float]:
    if not path.is_file():
        raise ValidationError(f"line {line_no}: empirical file not found: {path}")
    values = []
    for raw in path.read_text().splitlines():
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            raise ValidationError(
                f"line {line_no}: bad value {text!r} in empirical file {path}"
            ) from None
    if not values:
        raise ValidationError(f"line {line_no}: empirical file {path} holds no values")
    return values


def _parse_transform(tokens: List[str], line_no: int):
    if not tokens:
        raise ParseError(line_no, "transform needs a form name")
    form, args = tokens[0], tokens[1:]
    if form == "identity":
        if args:
            raise ParseError(line_no, "identity takes no parameter")
        return identity()
    if form == "stop_loss":
        if len(args) != 1:
            raise ValidationError(f"line {line_no}: stop_loss needs its threshold k")
        return stop_loss(_parse_number(args[0], line_no))
    if form == "power":
        if len(args) != 1:
            raise ValidationError(f"line {line_no}: power needs its exponent p")
        try:
            return power(_parse_number(args[0], line_no))
        except ValueError as exc:
            raise ValidationError(f"line {line_no}: {exc}") from None
    raise ParseError(line_no, f"unknown transform {form!r}")


_CASE_KEYS = (
    "marginal",
    "weights",
    "aggregation",
    "transform",
    "n",
    "restarts",
    "seed",
    "oracle",
    "oracle_budget",
    "auto_truncate",
)


def _finish_case(raw: Dict, line_no: int) -> CaseConfig:
    cid = raw["id"]
    specs = raw["marginals"]
    if len(specs) < 2:
        raise ValidationError(f"case {cid!r}: needs at least two marginals")
    if raw["weights"] is not None and raw["aggregation"] is not None:
        raise ValidationError(f"case {cid!r}: give either weights or aggregation, not both")
    if raw["weights"] is not None:
        if len(raw["weights"]) != len(specs):
            raise ValidationError(
                f"case {cid!r}: {len(raw['weights'])} weights for {len(specs)} marginals"
            )
        try:
            agg = weighted_sum(raw["weights"])
        except ValueError as exc:
            raise ValidationError(f"case {cid!r}: {exc}") from None
    elif raw["aggregation"] == "sum":
        agg = sum_agg(len(specs))
    elif raw["aggregation"] is None:
        raise ValidationError(f"case {cid!r}: needs weights or aggregation = sum")
    else:
        raise ValidationError(f"case {cid!r}: unknown aggregation {raw['aggregation']!r}")
    if raw["n"] is None:
        raise ValidationError(f"case {cid!r}: n is required")
    if raw["n"] < 1:
        raise ValidationError(f"case {cid!r}: n must be >= 1")
    if raw["restarts"] < 1:
        raise ValidationError(f"case {cid!r}: restarts must be >= 1")
    if raw["seed"] is not None and raw["seed"] < 0:
        raise ValidationError(f"case {cid!r}: seed must be non-negative")
    if raw["oracle_budget"] < 1:
        raise ValidationError(f"case {cid!r}: oracle_budget must be >= 1")
    transform = raw["transform"] if raw["transform"] is not None else identity()
    return CaseConfig(
        case_id=cid,
        specs=tuple(specs),
        cost=CostFunction(agg, transform),
        n=raw["n"],
        restarts=raw["restarts"],
        seed=raw["seed"],
        oracle=raw["oracle"],
        oracle_budget=raw["oracle_budget"],
        auto_truncate=raw["auto_truncate"],
    )


def _blank_case(cid: str) -> Dict:
    return {
        "id": cid,
        "marginals": [],
        "weights": None,
        "aggregation": None,
        "transform": None,
        "n": None,
        "restarts": 1,
        "seed": None,
        "oracle": False,
        "oracle_budget": 1_000_000,
        "auto_truncate": True,
    }


def parse_config(text: str, base_dir: str | Path = ".") -> RunConfig:
    """Parse and validate a run configuration.

    Raises :class:`ParseError` for malformed lines and
    :class:`ValidationError` for semantic problems (arity mismatches,
    nonpositive weights, missing stop-loss threshold, ...).
    """
    base = Path(base_dir)
    global_seed = 0
    global_max_sweeps = 100
    cases: List[CaseConfig] = []
    current: Optional[Dict] = None
    seen_ids = set()

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not (line.endswith("]") and line[1:-1].split()):
                raise ParseError(line_no, f"malformed case header {line!r}")
            head = line[1:-1].split()
            if head[0] != "case" or len(head) != 2:
                raise ParseError(line_no, f"case header must be [case <id>], got {line!r}")
            if current is not None:
                cases.append(_finish_case(current, line_no))
            cid = head[1]
            if cid in seen_ids:
                raise ValidationError(f"duplicate case id {cid!r}")
            seen_ids.add(cid)
            current = _blank_case(cid)
            continue
        if "=" not in line:
            raise ParseError(line_no, f"expected key = value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        tokens = value.split()
        if current is None:
            if key == "seed":
                global_seed = _parse_number(value, line_no, int)
                if global_seed < 0:
                    raise ValidationError("global seed must be non-negative")
            elif key == "max_sweeps":
                global_max_sweeps = _parse_number(value, line_no, int)
                if global_max_sweeps < 1:
                    raise ValidationError("max_sweeps must be >= 1")
            else:
                raise ParseError(
                    line_no, f"key {key!r} must appear inside a [case ...] block"
                )
            continue
        if key not in _CASE_KEYS:
            raise ParseError(line_no, f"unknown key {key!r}")
        if key == "marginal":
            current["marginals"].append(_parse_marginal(tokens, line_no, base))
        elif key == "weights":
            current["weights"] = [_parse_number(t, line_no) for t in tokens]
        elif key == "aggregation":
            current["aggregation"] = value
        elif key == "transform":
            current["transform"] = _parse_transform(tokens, line_no)
        elif key == "n":
            current["n"] = _parse_number(value, line_no, int)
        elif key == "restarts":
            current["restarts"] = _parse_number(value, line_no, int)
        elif key == "seed":
            current["seed"] = _parse_number(value, line_no, int)
        elif key == "oracle":
            current["oracle"] = _parse_flag(value, line_no)
        elif key == "oracle_budget":
            current["oracle_budget"] = _parse_number(value, line_no, int)
        elif key == "auto_truncate":
            current["auto_truncate"] = _parse_flag(value, line_no)

    if current is not None:
        cases.append(_finish_case(current, len(text.splitlines())))
    if not cases:
        raise ParseError(0, "config declares no cases")
    return RunConfig(cases=tuple(cases), seed=global_seed, max_sweeps=global_max_sweeps)


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _truncation_summary(result) -> str:
    parts = [
        f"F{i + 1}:{w[0]:.6g}..{w[1]:.6g}"
        for i, w in enumerate(result.truncation_applied)
        if w is not None
    ]
    return ";".join(parts) if parts else "-"


def _oracle_check(case: CaseConfig) -> Dict[str, str]:
    """Exhaustive min per grid, plus the fixed-point-set equality verdict."""
    out = {}
    verdicts = []
    for kind, column in (("lower", "oracle_lower"), ("upper", "oracle_upper")):
        prepared = [
            truncate_unbounded_sides(s) if case.auto_truncate else s for s in case.specs
        ]
        margs = [discretize(s, case.n, kind) for s in prepared]
        X = ArrangementMatrix.comonotonic(margs)
        global_min, _ = brute_force_min(X, case.cost, budget=case.oracle_budget)
        restricted_min = brute_force_min_over_opposite_set(
            X, case.cost, budget=case.oracle_budget
        )
        out[column] = _fmt(global_min / case.n)
        verdicts.append(
            abs(global_min - restricted_min) <= 1e-12 * (1.0 + abs(global_min))
        )
    out["theorem_check"] = "pass" if all(verdicts) else "fail"
    return out


def run_cases(
    config: RunConfig,
    force_oracle: bool = False,
    seed_override: Optional[int] = None,
    max_sweeps_override: Optional[int] = None,
) -> List[Dict[str, str]]:
    """One report row per case, in config order; errors stay on their row."""
    rows = []
    max_sweeps = max_sweeps_override if max_sweeps_override is not None else config.max_sweeps
    for case in config.cases:
        seed = seed_override if seed_override is not None else (
            case.seed if case.seed is not None else config.seed
        )
        row = {c: "" for c in CSV_COLUMNS}
        row.update(
            case=case.case_id,
            n=str(case.n),
            d=str(len(case.specs)),
            restarts=str(case.restarts),
            seed=str(seed),
        )
        try:
            result = estimate_inf(
                case.specs,
                case.cost,
                n=case.n,
                restarts=case.restarts,
                seed=seed,
                max_sweeps=max_sweeps,
                auto_truncate=case.auto_truncate,
            )
            row.update(
                lower=_fmt(result.lower_estimate),
                upper=_fmt(result.upper_estimate),
                sup_lower=_fmt(result.sup_lower),
                sup_upper=_fmt(result.sup_upper),
                sweeps_lower=str(result.sweeps_lower),
                sweeps_upper=str(result.sweeps_upper),
                converged_lower=_fmt(result.converged_lower),
                converged_upper=_fmt(result.converged_upper),
                runtime_ms_lower=str(result.runtime_ms_lower),
                runtime_ms_upper=str(result.runtime_ms_upper),
                truncated=_truncation_summary(result),
            )
            want_oracle = case.oracle or force_oracle
            within_budget = (
                arrangement_count(case.n, len(case.specs)) <= case.oracle_budget
            )
            if want_oracle and within_budget:
                row.update(_oracle_check(case))
        except RaboundsError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def write_csv(rows: Sequence[Dict[str, str]], stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="rabounds",
        description="Bracket worst-case expectations under fixed marginals.",
    )
    parser.add_argument("config", help="path to the run configuration file")
    parser.add_argument("--out", help="write the CSV report here (default: stdout)")
    parser.add_argument(
        "--oracle",
        action="store_true",
        help="force the exhaustive cross-check on all cases within budget",
    )
    parser.add_argument("--seed", type=int, help="override every seed in the config")
    parser.add_argument("--max-sweeps", type=int, help="override the sweep limit")
    args = parser.parse_args(argv)

    config_path = Path(args.config)
    try:
        text = config_path.read_text()
    except OSError as exc:
        print(f"rabounds: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_config(text, base_dir=config_path.parent)
    except RaboundsError as exc:
        print(f"rabounds: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None and args.seed < 0:
        print("rabounds: --seed must be non-negative", file=sys.stderr)
        return 2

    rows = run_cases(
        config,
        force_oracle=args.oracle,
        seed_override=args.seed,
        max_sweeps_override=args.max_sweeps,
    )
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    return 0 if all(not r["error"] for r in rows) else 1
