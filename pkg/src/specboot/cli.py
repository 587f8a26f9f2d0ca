"""Command line entry point: ``specboot <command> [options]``.

Commands
--------
simulate          draw an elliptical dataset (CSV or binary by extension)
bootstrap         bootstrap spectral statistics of a dataset
ci                stable-rank confidence interval
test-rank         test r/p <= epsilon0
test-sphericity   test Sigma proportional to the identity
reproduce-table   rerun one of the reference tables at reduced scale
experiment        run an experiment described by a JSON config
mp-density        tabulate the limiting spectral distribution as CSV

Every command accepts ``--config`` (a JSON document whose keys fill in the
command's options), ``--seed``, ``--workers`` (default ``SPECBOOT_WORKERS``)
and ``--out``.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bootstrap import config_from_data, bootstrap_distribution
from .errors import SpecbootError
from .experiments import ExperimentConfig, parse_statistic, reproduce_table, run_experiment
from .inference import sphericity_test, stable_rank_ci, stable_rank_test
from .mp import esd_grid
from .sampling import EllipticalLaw, NAMED_LAWS, load_dataset, sample_dataset
from .spectra import CovarianceSpec, make_covariance_setting


def _law(value):
    if value in NAMED_LAWS:
        return NAMED_LAWS[value]
    return EllipticalLaw.from_dict(json.loads(value))


def _covariance(args):
    if getattr(args, "covariance", None):
        cov = args.covariance
        return CovarianceSpec.from_dict(cov if isinstance(cov, dict) else json.loads(cov))
    return make_covariance_setting(args.setting, args.p, args.rotation_seed)


def cmd_simulate(args):
    spec = _covariance(args)
    ds = sample_dataset(spec, _law(args.law), args.n, args.seed)
    out = args.out or "dataset.csv"
    if out.endswith(".bin"):
        ds.write_binary(out)
    else:
        ds.to_csv(out)
    print(f"wrote {ds.n}x{ds.p} dataset to {out}")


def _quest_opts(args):
    return {"k": args.quest_k} if getattr(args, "quest_k", None) else None


def cmd_bootstrap(args):
    X = load_dataset(args.data)
    stats = tuple(parse_statistic(s) for s in (args.stat or ["largest_eig"]))
    cfg = config_from_data(X, stats, B=args.B, master_seed=args.seed, quest_opts=_quest_opts(args))
    draws = bootstrap_distribution(cfg, workers=args.workers)
    out = args.out or "draws.csv"
    draws.to_csv(out)
    vals = draws.values if draws.values.ndim == 2 else draws.values[:, None]
    for label, col in zip(draws.labels, vals.T):
        print(f"{label}: mean={col.mean():.6g} sd={col.std(ddof=1) if col.size > 1 else 0:.6g} B={col.size}")
    print(f"wrote draws to {out}")


def _inference_opts(args):
    opts = {"master_seed": args.seed, "workers": args.workers}
    q = _quest_opts(args)
    if q:
        opts["quest"] = q
    return opts


def _emit(result, out):
    print(result.summary())
    if out:
        with open(out, "w") as fh:
            fh.write(result.to_json())


def cmd_ci(args):
    X = load_dataset(args.data)
    _emit(stable_rank_ci(X, args.B, args.alpha, _inference_opts(args)), args.out)


def cmd_test_rank(args):
    X = load_dataset(args.data)
    _emit(stable_rank_test(X, args.epsilon0, args.alpha, args.B, _inference_opts(args)), args.out)


def cmd_test_sphericity(args):
    X = load_dataset(args.data)
    opts = {"master_seed": args.seed, "workers": args.workers}
    _emit(sphericity_test(X, args.alpha, args.B, opts), args.out)


def _parse_cell(text):
    law, setting, ratio = text.split("/")
    return law, setting, float(ratio)


def cmd_reproduce_table(args):
    cells = [_parse_cell(c) for c in args.cells] if args.cells else None
    res = reproduce_table(
        args.table, args.scale, args.out or f"table{args.table}", cells=cells,
        master_seed=args.seed, workers=args.workers, theta_method=args.theta_method,
        progress=lambda msg: print(msg, file=sys.stderr),
    )
    with open(res.summary_csv) as fh:
        sys.stdout.write(fh.read())


def cmd_experiment(args):
    d = dict(args.experiment or {})
    if args.out:
        d["output_dir"] = args.out
    if args.seed is not None and "master_seed" not in d:
        d["master_seed"] = args.seed
    cfg = ExperimentConfig.from_dict(d)
    res = run_experiment(cfg, workers=args.workers, progress=lambda m: print(m, file=sys.stderr))
    print(f"wrote {res.trials_csv}, {res.summary_csv}, {res.manifest}")


def cmd_mp_density(args):
    if args.eigenvalues:
        lam = np.loadtxt(args.eigenvalues, delimiter=",", ndmin=1).ravel()
    else:
        lam = _covariance(args).eigenvalues
    c = args.c if args.c is not None else lam.size / args.n
    dist = esd_grid(lam, c, grid_points=args.grid_points)
    out = args.out or "mp_density.csv"
    dist.to_csv(out)
    intervals = ", ".join(f"[{lo:.4g}, {hi:.4g}]" for lo, hi in dist.support_intervals)
    print(f"c={c:g} zero_atom={dist.zero_atom:.6g} support {intervals}; wrote {out}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file supplying option values")
    common.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    common.add_argument("--workers", type=int, default=None, help="worker threads (default $SPECBOOT_WORKERS or 1)")
    common.add_argument("--out", default=None, help="output path")

    parser = argparse.ArgumentParser(prog="specboot", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"specboot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cov(p):
        p.add_argument("--setting", choices=("S1", "S2", "S3"), default="S1")
        p.add_argument("--p", type=int, default=200)
        p.add_argument("--rotation-seed", type=int, default=None)

    p = sub.add_parser("simulate", parents=[common], help="draw a dataset")
    add_cov(p)
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--law", default="i", help="i, ii, iii or a JSON law document")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bootstrap", parents=[common], help="bootstrap spectral statistics")
    p.add_argument("--data", required=False)
    p.add_argument("--stat", action="append", help="lss:<f>, lss_raw:<f>, largest_eig, eigen_gap, stable_rank_star")
    p.add_argument("--B", type=int, default=250)
    p.add_argument("--quest-k", type=int, default=None)
    p.set_defaults(func=cmd_bootstrap)

    for name, func, helptext in (
        ("ci", cmd_ci, "stable-rank confidence interval"),
        ("test-rank", cmd_test_rank, "test r/p <= epsilon0"),
        ("test-sphericity", cmd_test_sphericity, "test sphericity"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--data", required=False)
        p.add_argument("--B", type=int, default=250)
        p.add_argument("--alpha", type=float, default=0.05)
        if name != "test-sphericity":
            p.add_argument("--quest-k", type=int, default=None)
        if name == "test-rank":
            p.add_argument("--epsilon0", type=float, default=0.1)
        p.set_defaults(func=func)

    p = sub.add_parser("reproduce-table", parents=[common], help="rerun a reference table")
    p.add_argument("--table", type=int, choices=(1, 2, 3, 4, 5), required=False)
    p.add_argument("--scale", type=float, default=0.1)
    p.add_argument("--cells", action="append", help="law/setting/ratio, e.g. i/S1/0.5 (repeatable)")
    p.add_argument("--theta-method", choices=("quadrature", "mc"), default="quadrature")
    p.set_defaults(func=cmd_reproduce_table)

    p = sub.add_parser("experiment", parents=[common], help="run an experiment config")
    p.set_defaults(func=cmd_experiment, experiment=None)

    p = sub.add_parser("mp-density", parents=[common], help="tabulate Psi(H, c)")
    add_cov(p)
    p.add_argument("--eigenvalues", default=None, help="CSV file of population eigenvalues")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--grid-points", type=int, default=2048)
    p.set_defaults(func=cmd_mp_density)
    return parser


def _apply_config(parser, args, argv):
    """Fill options from ``--config``; explicit command-line flags win."""
    if not args.config:
        return args
    with open(args.config) as fh:
        doc = json.load(fh)
    if args.command == "experiment":
        args.experiment = doc
        return args
    explicit = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in doc.items():
        attr = key.replace("-", "_")
        if attr in ("command", "func"):
            continue
        if attr not in explicit:
            setattr(args, attr, value)
    return args


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config(parser, args, argv)
    if args.seed is None:
        args.seed = 0
    for needed in ("data", "table"):
        if hasattr(args, needed) and getattr(args, needed) is None:
            parser.error(f"{args.command} needs --{needed}")
    try:
        args.func(args)
    except SpecbootError as exc:
        print(f"specboot: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
