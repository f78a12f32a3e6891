"""Batch front end: strict config parsing, dispatch, report emission.

Config files are JSON with a strict schema: unknown keys are rejected by
name, defaults are filled for everything else, and the effective config is
echoed into the report.  Flag overrides beat file values, which beat
defaults.  Exit codes: 0 all checks passed, 1 config/schema error,
2 condition refusal, 3 resource infeasibility, 4 checks ran and failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile
from dataclasses import dataclass

from .conditions import Schedule, TimeChange, WeightFunction
from .measures import PathFunctional
from .model import JumpLaw, LevyModel
from . import theorems
from .theorems import ConditionRefusal, ResourceBudgetError, TheoremReport

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "serialize_config",
           "run_experiment", "dispatch", "main"]

EXPERIMENTS = ("fclt", "asclt", "integral-asclt", "moment-audit", "cf-check")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_REFUSED = 2
EXIT_RESOURCE = 3
EXIT_FAILED = 4


class ConfigError(ValueError):
    """Schema violation; the message names the offending key."""


_LAW_PARAM_KEYS = {
    "degenerate": ("c",),
    "gaussian": ("mean", "sd"),
    "exponential": ("rate",),
    "uniform": ("lo", "hi"),
}


@dataclass
class ExperimentConfig:
    """Validated, fully-defaulted experiment description (plain JSON values)."""

    experiment: str
    model: dict
    schedule: dict
    weight: dict
    time_change: dict
    t: float
    n: int
    S: float
    dt: float
    m: int
    N: int
    xs: list
    u_grid: list
    pairs: list
    functional: dict
    seeds: dict
    output: dict

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _expect(block: dict, where: str, allowed: dict) -> dict:
    """Check a mapping against {key: (type, default)}; reject unknown keys."""
    if not isinstance(block, dict):
        raise ConfigError(f'"{where}": expected an object')
    for key in block:
        if key not in allowed:
            raise ConfigError(f'unknown key "{key}" in "{where}"')
    out = {}
    for key, (kind, default) in allowed.items():
        if key in block and block[key] is not None:
            out[key] = _coerce(block[key], kind, f"{where}.{key}")
        else:
            out[key] = default
    return out


def _coerce(value, kind, where: str):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f'key "{where}": expected number, got {type(value).__name__}')
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f'key "{where}": expected integer, got {type(value).__name__}')
        return int(value)
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f'key "{where}": expected string, got {type(value).__name__}')
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ConfigError(f'key "{where}": expected list, got {type(value).__name__}')
        return value
    if kind is dict:
        if not isinstance(value, dict):
            raise ConfigError(f'key "{where}": expected object, got {type(value).__name__}')
        return value
    raise AssertionError(kind)


def _validate_model(block: dict) -> dict:
    out = _expect(block, "model", {
        "jump_law": (dict, {"kind": "degenerate", "c": 1.0}),
        "rate": (float, 1.0),
        "diffusion_sd": (float, 0.0),
    })
    law = out["jump_law"]
    if "kind" not in law:
        raise ConfigError('key "model.jump_law.kind": required')
    kind = _coerce(law["kind"], str, "model.jump_law.kind")
    if kind not in _LAW_PARAM_KEYS:
        raise ConfigError(
            f'key "model.jump_law.kind": expected one of {sorted(_LAW_PARAM_KEYS)}, got {kind!r}'
        )
    allowed = {"kind": (str, kind)}
    defaults = {"c": 1.0, "mean": 0.0, "sd": 1.0, "rate": 1.0, "lo": -1.0, "hi": 1.0}
    for p in _LAW_PARAM_KEYS[kind]:
        allowed[p] = (float, defaults[p])
    out["jump_law"] = _expect(law, "model.jump_law", allowed)
    return out


def _validate_functional(value) -> dict:
    if isinstance(value, str):
        value = {"kind": value}
    out = _expect(value, "functional", {"kind": (str, "endpoint"), "x0": (float, 0.5)})
    if out["kind"] not in ("endpoint", "supremum", "value_at"):
        raise ConfigError(
            f'key "functional.kind": expected endpoint|supremum|value_at, got {out["kind"]!r}'
        )
    if out["kind"] != "value_at":
        out.pop("x0")
    return out


def _validate_u_grid(value) -> list:
    if isinstance(value, dict):
        rng = _expect(value, "u_grid", {"lo": (float, -3.0), "hi": (float, 3.0), "step": (float, 0.5)})
        if rng["step"] <= 0 or rng["hi"] < rng["lo"]:
            raise ConfigError('key "u_grid": need step > 0 and hi >= lo')
        out, u = [], rng["lo"]
        while u <= rng["hi"] + 1e-12:
            out.append(round(u, 12))
            u += rng["step"]
        return out
    grid = _coerce(value, list, "u_grid")
    return [_coerce(u, float, "u_grid[]") for u in grid]


_ROOT_KEYS = {
    "experiment", "model", "schedule", "weight", "time_change", "t", "n", "S",
    "dt", "m", "N", "xs", "u_grid", "pairs", "functional", "seeds", "output",
}


def validate_config(raw: dict) -> ExperimentConfig:
    """Strict-schema validation with defaults: m=1000, N=2000, panel=20, dt=0.1,
    schedule s_k = k, weight d(s) = 1/(2s), time change f(t) = t."""
    if not isinstance(raw, dict):
        raise ConfigError("config root: expected an object")
    for key in raw:
        if key not in _ROOT_KEYS:
            raise ConfigError(f'unknown key "{key}" in config root')
    if "experiment" not in raw:
        raise ConfigError('key "experiment": required')
    experiment = _coerce(raw["experiment"], str, "experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError(f'key "experiment": expected one of {list(EXPERIMENTS)}, got {experiment!r}')

    n = _coerce(raw.get("n", 10_000), int, "n")
    pairs = _coerce(raw.get("pairs", [[1, 10], [2, 20], [5, 50]]), list, "pairs")
    norm_pairs = []
    for i, pair in enumerate(pairs):
        pair = _coerce(pair, list, f"pairs[{i}]")
        if len(pair) != 2:
            raise ConfigError(f'key "pairs[{i}]": expected [l, k]')
        norm_pairs.append([_coerce(pair[0], int, f"pairs[{i}][0]"),
                           _coerce(pair[1], int, f"pairs[{i}][1]")])
    max_pair_k = max((k for _, k in norm_pairs), default=2)

    schedule = _expect(raw.get("schedule", {}), "schedule", {
        "coeff": (float, 1.0),
        "power": (float, 1.0),
        "beta": (float, 1.0),
        "n_max": (int, max(n, max_pair_k, 2)),
    })
    weight = _expect(raw.get("weight", {}), "weight", {"coeff": (float, 2.0)})
    time_change = _expect(raw.get("time_change", {}), "time_change", {
        "coeff": (float, 1.0),
        "power": (float, 1.0),
        "beta": (float, 1.0),
    })
    seeds = _expect(raw.get("seeds", {}), "seeds", {"master": (int, 1), "panel": (int, 20)})
    output = _expect(raw.get("output", {}), "output", {
        "path": (str, None),
        "format": (str, "json"),
        "verbosity": (int, 1),
    })
    if output["format"] not in ("json", "csv"):
        raise ConfigError(f'key "output.format": expected json|csv, got {output["format"]!r}')

    xs = [_coerce(x, float, "xs[]") for x in _coerce(raw.get("xs", [0.25, 0.5, 1.0]), list, "xs")]

    return ExperimentConfig(
        experiment=experiment,
        model=_validate_model(raw.get("model", {})),
        schedule=schedule,
        weight=weight,
        time_change=time_change,
        t=_coerce(raw.get("t", 10_000.0), float, "t"),
        n=n,
        S=_coerce(raw.get("S", 10_000.0), float, "S"),
        dt=_coerce(raw.get("dt", 0.1), float, "dt"),
        m=_coerce(raw.get("m", 1000), int, "m"),
        N=_coerce(raw.get("N", 2000), int, "N"),
        xs=xs,
        u_grid=_validate_u_grid(raw.get("u_grid", {"lo": -3.0, "hi": 3.0, "step": 0.5})),
        pairs=norm_pairs,
        functional=_validate_functional(raw.get("functional", "endpoint")),
        seeds=seeds,
        output=output,
    )


def parse_config(text: str) -> ExperimentConfig:
    """Parse a JSON config document; see validate_config for schema and defaults."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return validate_config(raw)


def serialize_config(config: ExperimentConfig) -> str:
    return json.dumps(config.to_dict(), indent=2)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _build_model(config: ExperimentConfig) -> LevyModel:
    law_cfg = dict(config.model["jump_law"])
    kind = law_cfg.pop("kind")
    law = JumpLaw(kind, tuple(law_cfg[p] for p in _LAW_PARAM_KEYS[kind]))
    return LevyModel(law, rate=config.model["rate"], diffusion_sd=config.model["diffusion_sd"])


def _build_functional(config: ExperimentConfig) -> PathFunctional:
    f = config.functional
    if f["kind"] == "value_at":
        return PathFunctional.value_at(f["x0"])
    return PathFunctional(f["kind"])


def dispatch(config: ExperimentConfig, threads: int = 1) -> TheoremReport:
    """Run the configured experiment and return its report."""
    model = _build_model(config)
    master = config.seeds["master"]
    panel = config.seeds["panel"]
    if config.experiment == "fclt":
        return theorems.run_fclt_test(
            model, config.t, config.xs, config.m, config.N, master, workers=threads
        )
    if config.experiment == "asclt":
        sched = Schedule(**config.schedule)
        return theorems.run_asclt(
            model, sched, config.n, _build_functional(config), config.m, master,
            panel=panel, workers=threads,
        )
    if config.experiment == "integral-asclt":
        tc = TimeChange(**config.time_change)
        w = WeightFunction(**config.weight)
        return theorems.run_integral_asclt(
            model, tc, w, config.S, config.dt, _build_functional(config), config.m, master,
            panel=panel, workers=threads,
        )
    if config.experiment == "moment-audit":
        sched = Schedule(**config.schedule)
        return theorems.audit_moment_bound(
            model, sched, config.pairs, config.N, config.m, master, workers=threads
        )
    return theorems.run_cf_check(model, config.t, config.u_grid, config.N, master)


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".levylim-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _report_text(report: TheoremReport, fmt: str) -> str:
    if fmt == "csv":
        return "\n".join(report.to_csv_rows()) + "\n"
    return report.to_json(indent=2) + "\n"


def run_experiment(config: ExperimentConfig, *, threads: int = 1, out: str | None = None):
    """Run, write the report atomically, and return (exit code, report path).

    Exit 0 only if every check passed; 2 with a condition report if a
    structural hypothesis failed; 3 if the horizon is infeasible; 4 if the
    run completed but some check failed.
    """
    fmt = config.output["format"]
    path = out or config.output["path"] or f"levylim-{config.experiment}-report.{fmt}"
    verbosity = config.output["verbosity"]
    try:
        report = dispatch(config, threads=threads)
    except ConditionRefusal as exc:
        refusal = {
            "schema_version": theorems.SCHEMA_VERSION,
            "theorem": config.experiment,
            "refused": True,
            "condition_report": exc.report.to_dict(),
            "config": config.to_dict(),
        }
        _write_atomic(path, json.dumps(refusal, indent=2) + "\n")
        if verbosity >= 1:
            print(f"REFUSED {exc}", file=sys.stderr)
        return EXIT_REFUSED, path
    except ResourceBudgetError as exc:
        if verbosity >= 1:
            print(f"INFEASIBLE {exc}", file=sys.stderr)
        return EXIT_RESOURCE, None

    report.config["experiment_config"] = config.to_dict()
    _write_atomic(path, _report_text(report, fmt))
    if verbosity >= 1:
        for c in report.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: "
                  f"{c.statistic:.6g} {c.comparison} {c.threshold:.6g}")
        print(f"{'OK' if report.passed else 'FAILED'} {config.experiment} -> {path}")
    return (EXIT_OK if report.passed else EXIT_FAILED), path


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="JSON config file")
    common.add_argument("--seed", type=int, default=None, help="master seed (seeds.master)")
    common.add_argument("--threads", type=int, default=None, help="worker processes (default 1)")
    common.add_argument("--out", type=str, default=None, help="report path")
    common.add_argument("--format", type=str, default=None, choices=["json", "csv"],
                        help="report format (output.format)")
    common.add_argument("--panel", type=int, default=None, help="seed panel size (seeds.panel)")
    for knob, kind in (("t", float), ("n", int), ("S", float), ("dt", float),
                       ("m", int), ("N", int)):
        common.add_argument(f"--{knob}", type=kind, default=None)
    common.add_argument("--functional", type=str, default=None,
                        choices=["endpoint", "supremum", "value_at"])
    common.add_argument("--x0", type=float, default=None, help="point for value_at")

    parser = argparse.ArgumentParser(
        prog="levylim",
        description="Simulate scaled centered jump processes and verify their Wiener limits.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    descriptions = {
        "fclt": "finite-dimensional and supremum laws of the scaled process at large t",
        "asclt": "single-path log-average convergence along a schedule",
        "integral-asclt": "single-path weighted integral-average convergence",
        "moment-audit": "coupled-path sup-distance moment bound",
        "cf-check": "empirical vs closed-form characteristic function",
    }
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common], help=descriptions[name])
    return parser


def _merged_raw_config(args: argparse.Namespace) -> dict:
    raw: dict = {}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config root: expected an object")
    raw["experiment"] = args.experiment
    for knob in ("t", "n", "S", "dt", "m", "N"):
        value = getattr(args, knob)
        if value is not None:
            raw[knob] = value
    if args.seed is not None or args.panel is not None:
        seeds = dict(raw.get("seeds", {}))
        if args.seed is not None:
            seeds["master"] = args.seed
        if args.panel is not None:
            seeds["panel"] = args.panel
        raw["seeds"] = seeds
    if args.out is not None or args.format is not None:
        output = dict(raw.get("output", {}))
        if args.out is not None:
            output["path"] = args.out
        if args.format is not None:
            output["format"] = args.format
        raw["output"] = output
    if args.functional is not None or args.x0 is not None:
        functional = raw.get("functional", "endpoint")
        if isinstance(functional, str):
            functional = {"kind": functional}
        functional = dict(functional)
        if args.functional is not None:
            functional["kind"] = args.functional
        if args.x0 is not None:
            functional["x0"] = args.x0
        raw["functional"] = functional
    return raw


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = validate_config(_merged_raw_config(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    threads = args.threads if args.threads is not None else 1
    code, _ = run_experiment(config, threads=threads, out=args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
