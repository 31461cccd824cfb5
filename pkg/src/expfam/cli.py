"""Command-line front end: ``expfam fit | simulate | plot``.

Exit codes: 0 ok, 2 configuration error, 3 data error, 4 estimation failure,
5 simulation finished with failed cells (results still written).
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .baselines import fit_map_numeric, fit_ml_numeric
from .errors import ConfigError, DomainError, EstimationError, ExpFamError
from .fitting import fit_closed_form
from .generators import REGISTRY, fit_spec
from .montecarlo import DEFAULT_N_GRID, SimConfig, SimDistribution, default_workers, run_grid
from .plotting import write_plots
from .statistics import HyperParams

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_ESTIMATION, EXIT_PARTIAL = 0, 2, 3, 4, 5

CSV_HEADER = (
    "distribution",
    "method",
    "parameter",
    "n",
    "rel_bias",
    "mc_se_bias",
    "mse",
    "mc_se_mse",
    "failures",
    "seed",
)

METHOD_ALIASES = {"closed": "closed_form", "map": "map_numeric", "ml": "ml_numeric"}

PRESETS = {
    "reference": {
        "distributions": "gamma; inverse_gamma; weibull:delta=2; inverse_weibull:delta=2",
        "methods": "closed_form",
        "replications": "10000",
    },
    "comparison": {
        "distributions": "gamma",
        "methods": "closed_form, map_numeric, ml_numeric",
        "replications": "10000",
    },
}


class DataError(ExpFamError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers


def parse_kv_list(items, what: str) -> dict[str, float]:
    """``["a=1,b=2", "c=3"]`` -> {"a": 1.0, "b": 2.0, "c": 3.0}."""
    out = {}
    for item in items or ():
        for part in str(item).split(","):
            part = part.strip()
            if not part:
                continue
            key, sep, value = part.partition("=")
            if not sep:
                raise ConfigError(f"{what}: expected key=value, got {part!r}")
            try:
                out[key.strip()] = float(value)
            except ValueError:
                raise ConfigError(f"{what}: {key.strip()!r} is not a number: {value!r}") from None
    return out


def read_data(text: str) -> list[float]:
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = float(line)
        except ValueError:
            raise DataError(f"line {lineno}: not a number: {line!r}") from None
        if not (v > 0 and math.isfinite(v)):
            raise DataError(f"line {lineno}: observations must be finite and positive, got {line!r}")
        values.append(v)
    if not values:
        raise DataError("no observations found")
    return values


def _hp_from(values: dict[str, float]) -> HyperParams:
    unknown = set(values) - {"alpha1", "beta1", "alpha2", "beta2"}
    if unknown:
        raise ConfigError(f"unknown hyperparameter(s): {', '.join(sorted(unknown))}")
    return HyperParams(**values)


def parse_distribution(item) -> SimDistribution:
    """``"weibull:delta=2"`` or a JSON object ``{"name", "shape_params", "s"}``."""
    if isinstance(item, dict):
        shape = item.get("shape_params", {})
        return SimDistribution(
            item["name"],
            tuple(sorted((k, float(v)) for k, v in shape.items())),
            None if item.get("s") is None else float(item["s"]),
        )
    name, _, rest = str(item).strip().partition(":")
    shape = parse_kv_list([rest], f"distribution {name}")
    s = shape.pop("s", None)
    return SimDistribution(name.strip(), tuple(sorted(shape.items())), s)


def _split(value, sep=",") -> list:
    if isinstance(value, list):
        return value
    return [v.strip() for v in str(value).split(sep) if v.strip()]


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines (``#`` comments) or a JSON object."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object")
        return data
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config line {lineno}: expected key = value")
        out[key.strip()] = value.strip()
    return out


_CONFIG_KEYS = {
    "distributions", "true_mu", "true_sigma", "n_grid", "replications",
    "alpha1", "beta1", "alpha2", "beta2", "methods", "seed",
}


def build_sim_config(raw: dict) -> SimConfig:
    unknown = set(raw) - _CONFIG_KEYS - {"hp"}
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    if "distributions" not in raw:
        raise ConfigError("config needs 'distributions'")
    try:
        dists = tuple(parse_distribution(d) for d in _split(raw["distributions"], ";"))
        hp_values = dict(raw.get("hp", {}))
        for key in ("alpha1", "beta1", "alpha2", "beta2"):
            if key in raw:
                hp_values[key] = float(raw[key])
        kwargs = {"distributions": dists, "hp": _hp_from({k: float(v) for k, v in hp_values.items()})}
        if "true_mu" in raw:
            kwargs["true_mu"] = float(raw["true_mu"])
        if "true_sigma" in raw:
            kwargs["true_sigma"] = float(raw["true_sigma"])
        if "n_grid" in raw:
            kwargs["n_grid"] = tuple(int(v) for v in _split(raw["n_grid"]))
        if "replications" in raw:
            kwargs["replications"] = int(raw["replications"])
        if "methods" in raw:
            kwargs["methods"] = tuple(METHOD_ALIASES.get(m, m) for m in _split(raw["methods"]))
        if "seed" in raw:
            kwargs["seed"] = int(raw["seed"])
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config value: {exc}") from None
    return SimConfig(**kwargs)


def config_echo(cfg: SimConfig) -> dict:
    return {
        "distributions": [
            {"name": d.name, "shape_params": dict(d.shape_params), "s": d.s} for d in cfg.distributions
        ],
        "true_mu": cfg.true_mu,
        "true_sigma": cfg.true_sigma,
        "n_grid": list(cfg.n_grid),
        "replications": cfg.replications,
        "hp": asdict(cfg.hp),
        "methods": list(cfg.methods),
        "seed": cfg.seed,
    }


# ---------------------------------------------------------------------------
# results.csv


def _num(v: float) -> str:
    return f"{v:.17g}"


def format_results_csv(rows) -> str:
    lines = [",".join(CSV_HEADER)]
    for r in rows:
        lines.append(
            ",".join(
                [
                    r.distribution,
                    r.method,
                    r.parameter,
                    str(r.n),
                    _num(r.rel_bias),
                    _num(r.mc_se_bias),
                    _num(r.mse),
                    _num(r.mc_se_mse),
                    str(r.failures),
                    str(r.seed),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def read_results_csv(path: Path) -> list[dict]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CSV_HEADER:
                raise DataError(f"{path}: header does not match {','.join(CSV_HEADER)}")
            rows = []
            for i, rec in enumerate(reader, 2):
                try:
                    rows.append(
                        {
                            "distribution": rec["distribution"],
                            "method": rec["method"],
                            "parameter": rec["parameter"],
                            "n": int(rec["n"]),
                            "rel_bias": float(rec["rel_bias"]),
                            "mc_se_bias": float(rec["mc_se_bias"]),
                            "mse": float(rec["mse"]),
                            "mc_se_mse": float(rec["mc_se_mse"]),
                            "failures": int(rec["failures"]),
                            "seed": int(rec["seed"]),
                        }
                    )
                except (TypeError, ValueError):
                    raise DataError(f"{path}: malformed row at line {i}") from None
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no data rows")
    return rows


# ---------------------------------------------------------------------------
# commands


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def cmd_fit(args) -> int:
    try:
        shape = parse_kv_list(args.params, "--params")
        spec = fit_spec(args.dist, shape, free=args.free)
        hp = _hp_from(parse_kv_list(args.hp, "--hp"))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.stdin:
            text = sys.stdin.read()
        else:
            text = Path(args.data).read_text()
        sample = read_data(text)
    except (OSError, DataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA

    methods = ["closed", "map", "ml"] if args.method == "all" else [args.method]
    results, failed = {}, False
    for m in methods:
        name = METHOD_ALIASES[m]
        try:
            if m == "closed":
                est = fit_closed_form(spec, sample, hp)
                block = est.as_dict()
            else:
                if m == "map":
                    est, report = fit_map_numeric(spec, sample, hp)
                else:
                    est, report = fit_ml_numeric(spec, sample)
                block = est.as_dict()
                block["diagnostics"].update(
                    iterations=report.iterations,
                    converged=report.converged,
                    final_gradient_norm=report.final_gradient_norm,
                    objective=report.objective,
                )
                if not report.converged:
                    failed = True
        except DomainError as exc:
            print(f"data error: {exc}", file=sys.stderr)
            return EXIT_DATA
        except (EstimationError, ArithmeticError, ConfigError) as exc:
            failed = True
            block = {"error": getattr(exc, "reason", type(exc).__name__), "message": str(exc)}
        results[name] = _jsonable(block)

    if args.json:
        print(json.dumps(results, indent=2, sort_keys=True))
    else:
        for name, block in results.items():
            print(f"[{name}]")
            if "error" in block:
                print(f"  FAILED ({block['error']}): {block['message']}")
                continue
            print(f"  method    {block['method']}")
            print(f"  mu_hat    {block['mu']!r}")
            print(f"  sigma_hat {block['sigma']!r}")
            for key, value in block["diagnostics"].items():
                print(f"  {key:<20}{value!r}")
    return EXIT_ESTIMATION if failed else EXIT_OK


def cmd_simulate(args) -> int:
    try:
        raw = {}
        if args.preset:
            raw.update(PRESETS[args.preset])
        if args.config:
            try:
                raw.update(parse_config_text(Path(args.config).read_text()))
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from None
        if args.n_grid:
            raw["n_grid"] = args.n_grid
        if args.reps is not None:
            raw["replications"] = args.reps
        if args.seed is not None:
            raw["seed"] = args.seed
        if not raw:
            raise ConfigError("give --config and/or --preset")
        cfg = build_sim_config(raw)
        workers = args.workers if args.workers is not None else default_workers()
        if workers < 1:
            raise ConfigError("--workers must be >= 1")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = _dt.datetime.now(_dt.timezone.utc).isoformat()
    result = run_grid(cfg, workers=workers)
    finished = _dt.datetime.now(_dt.timezone.utc).isoformat()

    (out / "results.csv").write_text(format_results_csv(result.rows))
    manifest = {
        "software": {"name": "expfam", "version": __version__},
        "config": config_echo(cfg),
        "seed": cfg.seed,
        "workers": workers,
        "started": started,
        "finished": finished,
        "results": "results.csv",
        "cell_failures": {
            f"{r.distribution}|{r.method}|{r.n}": r.failures for r in result.rows if r.parameter == "mu"
        },
        "failure_reasons": result.failure_reasons,
        "errors": [asdict(e) for e in result.errors],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(result.rows)} rows to {out / 'results.csv'}")
    if result.errors:
        for e in result.errors:
            print(f"cell failed: {e.distribution} {e.method} n={e.n}: {e.message}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        rows = read_results_csv(Path(args.inp))
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    written = write_plots(rows, Path(args.out))
    for p in written:
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expfam",
        description="Closed-form MAP estimation for generator-defined exponential families.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="estimate (mu, sigma) from a data file")
    p.add_argument("--dist", required=True, choices=sorted(REGISTRY), metavar="NAME",
                   help="registry name, e.g. gamma, weibull, burr_xii")
    p.add_argument("--params", action="append", metavar="K=V",
                   help="known shape constants inside T, e.g. delta=2 (repeatable)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", metavar="PATH", help="one positive value per line, # comments")
    src.add_argument("--stdin", action="store_true", help="read data from standard input")
    p.add_argument("--method", choices=["closed", "map", "ml", "all"], default="closed")
    p.add_argument("--hp", action="append", metavar="K=V",
                   help="prior hyperparameters alpha1,beta1,alpha2,beta2 (default 0.01 each)")
    p.add_argument("--free", action="store_true",
                   help="ignore the row's fixed/linked parameter and fit both mu and sigma")
    p.add_argument("--json", action="store_true", help="emit one JSON object")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="Monte Carlo bias/MSE grid")
    p.add_argument("--config", metavar="PATH", help="key=value text or JSON config")
    p.add_argument("--preset", choices=sorted(PRESETS), help="start from a built-in configuration")
    p.add_argument("--n-grid", metavar="N,N,...",
                   help=f"sample sizes (default {','.join(map(str, DEFAULT_N_GRID))})")
    p.add_argument("--reps", type=int, help="replications per cell")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="worker processes (default $EXPFAM_THREADS or CPU count)")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plot", help="SVG + .dat figures from results.csv")
    p.add_argument("--in", dest="inp", required=True, metavar="CSV")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
