"""Command-line front door.

Subcommands map one-to-one onto harness operations plus three utilities:

    gen-graph   write a random graph as JSON
    spectrum    operator/covariance spectra of a BA vs regular graph pair
    train       one-off tuned training run on synthesized data
    compare     tuned SGD vs tuned ridge over seeded trials
    oversmooth  task risk as aggregation depth grows
    bounds      measured risk vs sample budget with bound overlays
    plot        re-render an SVG line plot from a results CSV

Flags mirror config keys (kebab-case to snake_case); a flag wins over the
config file.  `SRL_SEED` supplies a default master seed.  Exit codes:
0 success, 1 user error, 2 internal error.  Every successful run prints
its manifest path as the final stdout line.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import harness
from .errors import SrlError
from .graphs import generate_ba, generate_regular, save_graph
from .harness import (
    ExperimentConfig,
    config_from_dict,
    config_to_dict,
    run_bounds_sweep,
    run_comparison,
    run_oversmoothing,
    run_spectrum_study,
    split_indices,
    tune_hyperparameter,
)
from .learners import estimator_to_json
from .risk import RISK_CSV_HEADER, risk_report
from .rng import derive
from .svgplot import AxesConfig, Series, emit_svg_plot
from .synthesis import generate_responses, subset_rows


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors (2 is reserved for internal faults)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_layers(text: str) -> tuple[int, ...]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse layer range {text!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse float list {text!r}")


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse integer list {text!r}")


_CONFIG_FLAGS = (
    ("data", str, "data path: graph or spectrum"),
    ("graph_model", str, "graph model: ba or regular"),
    ("n", int, "rows (spectrum path) or vertices (graph path)"),
    ("d", int, "feature dimension"),
    ("ba_m", int, "BA attachments per new vertex"),
    ("reg_degree", int, "regular-graph degree"),
    ("operator", str, "aggregation operator kind"),
    ("beta", float, "spectrum decay exponent"),
    ("layers", _parse_layers, "aggregation rounds, e.g. 1..4 or 1,2,3"),
    ("sigma", float, "response noise level"),
    ("iterations", int, "SGD iteration / sample budget N"),
    ("align", str, "target alignment: head, tail, or weighted"),
    ("align_k", int, "how many eigendirections carry the target"),
    ("align_p", float, "exponent for weighted alignment"),
    ("gamma_grid", _parse_floats, "stepsize grid, comma separated"),
    ("lambda_grid", _parse_floats, "ridge penalty grid, comma separated"),
    ("trials", int, "independent trials"),
    ("validation_fraction", float, "held-out fraction for tuning"),
    ("algorithm", str, "learner for single-algorithm runs: sgd or ridge"),
    ("sampling", str, "SGD sampling: with_replacement or one_pass"),
    ("n_grid", _parse_ints, "sample budgets for the bounds sweep"),
    ("head_window", int, "eigenvalues used by the decay fit"),
    ("b", float, "ridge cutoff constant"),
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON config file")
    parser.add_argument("--out", metavar="DIR", default=".",
                        help="output directory, created if absent (default: .)")
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (default: SRL_SEED env or 0)")
    parser.add_argument("--jobs", type=int, default=None,
                        help="concurrent trials (default: logical cores)")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    defaults = ExperimentConfig()
    for key, parse, help_text in _CONFIG_FLAGS:
        shown = getattr(defaults, key)
        if isinstance(shown, tuple):
            shown = ",".join(str(v) for v in shown) or "auto"
        parser.add_argument(
            "--" + key.replace("_", "-"),
            type=parse,
            default=None,
            dest=key,
            metavar="V",
            help=f"{help_text} (default: {shown})",
        )
    parser.add_argument("--gamma", type=float, default=None,
                        help="single stepsize, replaces the gamma grid")
    parser.add_argument("--lam", type=float, default=None,
                        help="single ridge penalty, replaces the lambda grid")


def build_parser() -> _Parser:
    parser = _Parser(prog="srl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND",
                               parser_class=_Parser)

    p = sub.add_parser("gen-graph", help="write a random graph as JSON")
    _add_common(p)
    p.add_argument("--model", choices=("ba", "regular"), default="ba")
    p.add_argument("--n", type=int, default=500, help="vertices (default: 500)")
    p.add_argument("--m", type=int, default=3, help="BA attachments (default: 3)")
    p.add_argument("--degree", type=int, default=6, help="regular degree (default: 6)")
    p.set_defaults(handler=_cmd_gen_graph)

    p = sub.add_parser("spectrum",
                       help="spectra and decay fits for a BA vs regular pair")
    _add_common(p)
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("train", help="one-off tuned training run")
    _add_common(p)
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("compare", help="tuned SGD vs tuned ridge")
    _add_common(p)
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("oversmooth",
                       help="task risk as aggregation depth grows")
    _add_common(p)
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_oversmooth)

    p = sub.add_parser("bounds",
                       help="measured risk vs budget with bound overlays")
    _add_common(p)
    _add_config_flags(p)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("plot", help="render an SVG from a results CSV")
    _add_common(p)
    p.add_argument("--input", required=True, metavar="CSV", help="results CSV to plot")
    p.add_argument("--x", required=True, metavar="COL", help="x column name")
    p.add_argument("--y", required=True, metavar="COL", help="y column name")
    p.add_argument("--group", default=None, metavar="COL", help="one series per value")
    p.add_argument("--log-x", action="store_true")
    p.add_argument("--log-y", action="store_true")
    p.add_argument("--title", default="")
    p.set_defaults(handler=_cmd_plot)

    return parser


def _seed_value(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("SRL_SEED", "0"))


def _jobs_value(args) -> int:
    if args.jobs is not None:
        return args.jobs
    return os.cpu_count() or 1


def _experiment_config(args, experiment: str, defaults: dict | None = None) -> ExperimentConfig:
    payload: dict = dict(defaults or {})
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            payload.update(json.load(fh))
    for key, _, _ in _CONFIG_FLAGS:
        value = getattr(args, key)
        if value is not None:
            payload[key] = value
    if args.gamma is not None:
        if args.gamma <= 0:
            raise SrlError(f"--gamma must be > 0, got {args.gamma}")
        payload["gamma_grid"] = (args.gamma,)
    if args.lam is not None:
        if args.lam < 0:
            raise SrlError(f"--lam must be >= 0, got {args.lam}")
        payload["lambda_grid"] = (args.lam,)
    payload["experiment"] = experiment
    payload["seed"] = _seed_value(args)
    payload["jobs"] = _jobs_value(args)
    return config_from_dict(payload)


def _mini_manifest(out: Path, name: str, seed: int, config: dict, outputs: list[str]) -> Path:
    payload = {
        "version": harness.MANIFEST_VERSION,
        "experiment": name,
        "seed": seed,
        "config": config,
        "outputs": sorted(outputs),
    }
    path = out / "manifest.json"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _out_dir(args) -> Path:
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_gen_graph(args) -> int:
    seed = _seed_value(args)
    if args.model == "ba":
        graph = generate_ba(args.n, args.m, seed)
        config = {"model": "ba", "n": args.n, "m": args.m}
    else:
        graph = generate_regular(args.n, args.degree, seed)
        config = {"model": "regular", "n": args.n, "degree": args.degree}
    out = _out_dir(args)
    save_graph(graph, out / "graph.json")
    print(_mini_manifest(out, "gen-graph", seed, config, ["graph.json"]))
    return 0


def _cmd_spectrum(args) -> int:
    cfg = _experiment_config(args, "spectrum_study", defaults={"n": 500, "d": 64})
    print(run_spectrum_study(cfg, _out_dir(args)))
    return 0


def _cmd_compare(args) -> int:
    cfg = _experiment_config(args, "sgd_vs_ridge")
    print(run_comparison(cfg, _out_dir(args)))
    return 0


def _cmd_oversmooth(args) -> int:
    cfg = _experiment_config(args, "oversmoothing",
                             defaults={"data": "graph", "n": 300, "d": 64})
    print(run_oversmoothing(cfg, _out_dir(args)))
    return 0


def _cmd_bounds(args) -> int:
    cfg = _experiment_config(args, "bounds_sweep", defaults={"data": "spectrum"})
    print(run_bounds_sweep(cfg, _out_dir(args)))
    return 0


def _cmd_train(args) -> int:
    cfg = _experiment_config(args, "sgd_vs_ridge")
    out = _out_dir(args)
    ds, basis = harness._trial_dataset(cfg, 0, layers=min(cfg.layers))
    gt = harness._ground_truth(cfg, basis)
    y = generate_responses(ds, gt, derive(cfg.seed, 0, 1))
    train_idx, val_idx = split_indices(ds.n, cfg.validation_fraction, derive(cfg.seed, 0, 2))
    train_ds, val_ds = subset_rows(ds, train_idx), subset_rows(ds, val_idx)
    if cfg.algorithm == "sgd":
        trainer = harness._sgd_trainer(cfg, derive(cfg.seed, 0, 3))
        grid = harness._effective_gamma_grid(cfg, train_ds)
    else:
        trainer = harness._ridge_trainer
        grid = harness._effective_lambda_grid(cfg)
    hyper, est = tune_hyperparameter(trainer, grid, (train_ds, y[train_idx]),
                                     (val_ds, y[val_idx]))
    report = risk_report(est.theta, gt, ds)
    with open(out / "estimator.json", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(estimator_to_json(est) + "\n")
    with open(out / "report.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(RISK_CSV_HEADER + "\n" + report.csv_row() + "\n")
    config = dict(config_to_dict(cfg), chosen_hyperparameter=hyper)
    print(_mini_manifest(out, "train", cfg.seed, config, ["estimator.json", "report.csv"]))
    return 0


def _cmd_plot(args) -> int:
    with open(args.input, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SrlError(f"no data rows in {args.input}")
    for column in (args.x, args.y) + ((args.group,) if args.group else ()):
        if column not in rows[0]:
            raise SrlError(f"column {column!r} not in {args.input}")
    groups: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        label = row[args.group] if args.group else args.y
        groups.setdefault(label, []).append((float(row[args.x]), float(row[args.y])))
    series = [
        Series.make(label, [p[0] for p in points], [p[1] for p in points])
        for label, points in groups.items()
    ]
    out = _out_dir(args)
    axes = AxesConfig(title=args.title, x_label=args.x, y_label=args.y,
                      log_x=args.log_x, log_y=args.log_y)
    emit_svg_plot(series, axes, out / "plot.svg")
    config = {"input": str(args.input), "x": args.x, "y": args.y, "group": args.group,
              "log_x": args.log_x, "log_y": args.log_y}
    print(_mini_manifest(out, "plot", 0, config, ["plot.svg"]))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return args.handler(args)
    except (SrlError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything else is a bug, not a usage problem
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
