"""Simulation harness for the reference tables and the rank-test power curves.

A *cell* is one ``(law, setting, ratio)`` combination with ``n`` fixed and
``p = round(ratio * n)``.  For every cell the harness draws ``trials``
datasets for ground truth and runs the bootstrap on the first ``boot_runs`` of
them.  Dataset ``t`` of a cell uses a seed derived from the master seed, the
cell key and ``t``, so dropping cells or changing the worker count never
changes any number.
"""

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from ._reference import REFERENCE_VALUES
from ._seeding import derive_seed
from .bootstrap import (
    EIGEN_GAP,
    LARGEST_EIG,
    BootstrapConfig,
    StatisticSpec,
    bootstrap_distribution,
    centering_for,
    config_from_data,
    default_workers,
    estimate_inputs,
    evaluate_statistic,
    gamma_xi_params,
    lss,
)
from .errors import ConfigurationError, DimensionError
from .estimators import sample_covariance_eigs
from .inference import empirical_quantile, stable_rank_ci, stable_rank_test
from .mp import centering_parameter_mc
from .sampling import NAMED_LAWS, paper_law, sample_dataset
from .spectra import SETTINGS, make_covariance_setting, rescaled_s1, s1_scale_for_ratio

DESIGNS = ("table1", "table2", "table3", "table4", "table5", "rank_power", "adhoc")

TRIAL_HEADER = ["law", "setting", "ratio", "trial", "stat", "kind", "value", "seed"]
SUMMARY_HEADER = [
    "law", "setting", "ratio", "stat",
    "ground_mean", "ground_sd", "ground_p95",
    "boot_mean_mean", "boot_mean_sd", "boot_sd_mean", "boot_sd_sd", "boot_p95_mean", "boot_p95_sd",
    "paper_ref_value",
]

_TABLE_RATIOS = {
    "table1": (0.5, 1.0, 1.5),
    "table2": (0.3, 0.5, 0.7),
    "table3": (0.5, 1.0, 1.5),
    "table4": (0.5, 1.0, 1.5),
    "table5": (0.5, 1.0, 1.5),
}
_TABLE_STAT = {
    "table1": lambda: lss("square", True),
    "table2": lambda: lss("x_minus_log", True),
    "table3": lambda: LARGEST_EIG,
    "table4": lambda: EIGEN_GAP,
}
RANK_GRID = tuple(round(0.098 + 0.0005 * k, 4) for k in range(15))


@dataclass(frozen=True)
class ExperimentConfig:
    design: str = "adhoc"
    n: int = 400
    ratios: tuple = (0.5,)
    laws: tuple = ("i",)
    settings: tuple = ("S1",)
    trials: int = 100
    boot_runs: int = 10
    B: int = 250
    master_seed: int = 0
    output_dir: str = "specboot-out"
    theta_method: str = "quadrature"
    statistics: tuple = ("lss:square",)
    rank_grid: tuple = RANK_GRID
    epsilon0: float = 0.1
    alpha: float = 0.05
    mc_reps: int = 30
    mc_expansion: int = 40
    rotation_seed: int = 20190101

    def __post_init__(self):
        for name in ("ratios", "laws", "settings", "statistics", "rank_grid"):
            val = getattr(self, name)
            if isinstance(val, (str, int, float)):
                val = (val,)
            object.__setattr__(self, name, tuple(val))
        object.__setattr__(self, "ratios", tuple(float(r) for r in self.ratios))

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigurationError(f"unknown experiment config keys {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def validate(self):
        if self.design not in DESIGNS:
            raise ConfigurationError(f"unknown design {self.design!r}")
        if self.trials < 1:
            raise ConfigurationError("trials must be at least 1")
        if not 0 <= self.boot_runs <= self.trials:
            raise ConfigurationError("boot_runs must lie between 0 and trials")
        if self.B < 1 or self.n < 2:
            raise ConfigurationError("B must be >= 1 and n >= 2")
        if not self.ratios or any(not r > 0 for r in self.ratios):
            raise ConfigurationError("ratios must be positive")
        bad = set(self.laws) - set(NAMED_LAWS)
        if bad or not self.laws:
            raise ConfigurationError(f"laws must be drawn from {sorted(NAMED_LAWS)}")
        bad = set(self.settings) - set(SETTINGS)
        if bad or not self.settings:
            raise ConfigurationError(f"settings must be drawn from {SETTINGS}")
        if self.theta_method not in ("quadrature", "mc"):
            raise ConfigurationError("theta_method must be 'quadrature' or 'mc'")
        if not 0 < self.alpha < 1:
            raise ConfigurationError("alpha must be in (0, 1)")
        for setting in self.settings:
            for r in self.ratios:
                p = _dimension(self.n, r)
                try:
                    if self.design != "rank_power":
                        make_covariance_setting(setting, p)
                    else:
                        for target in self.rank_grid:
                            s1_scale_for_ratio(p, target)
                except DimensionError as exc:
                    raise ConfigurationError(f"cell ({setting}, {r}): {exc}") from None
        for s in self.statistics:
            parse_statistic(s)


def parse_statistic(label):
    """``lss:<f>`` (centred), ``lss_raw:<f>``, ``largest_eig``, ``eigen_gap`` or ``stable_rank_star``."""
    if isinstance(label, StatisticSpec):
        return label
    kind, _, f = str(label).partition(":")
    if kind == "lss":
        return lss(f, True)
    if kind == "lss_raw":
        return lss(f)
    if kind in ("largest_eig", "eigen_gap", "stable_rank_star") and not f:
        return StatisticSpec(kind)
    raise ConfigurationError(f"unknown statistic label {label!r}")


def _dimension(n, ratio):
    return max(1, int(round(ratio * n)))


def _fmt(v):
    return f"{v:.6g}"


@dataclass
class _Cell:
    law: str
    setting: str
    ratio: float
    key: tuple
    spec: object = None
    extra: dict = field(default_factory=dict)


def _cells(cfg):
    law_ix = {k: i for i, k in enumerate(sorted(NAMED_LAWS))}
    set_ix = {k: i for i, k in enumerate(SETTINGS)}
    out = []
    for law in cfg.laws:
        if cfg.design == "rank_power":
            for ratio in cfg.ratios:
                for target in cfg.rank_grid:
                    key = (law_ix[law], 9, int(round(ratio * 1000)), int(round(target * 1e5)))
                    out.append(_Cell(law, "S1", ratio, key, extra={"target": target}))
            continue
        for setting in cfg.settings:
            for ratio in cfg.ratios:
                key = (law_ix[law], set_ix[setting], int(round(ratio * 1000)))
                out.append(_Cell(law, setting, ratio, key))
    return out


def _stat_list(cfg):
    if cfg.design in _TABLE_STAT:
        return (_TABLE_STAT[cfg.design](),)
    return tuple(parse_statistic(s) for s in cfg.statistics)


def _ground_centering(cfg, cell, stat, n, p):
    if stat.kind != "lss" or stat.centering is not True:
        return stat
    lam = cell.spec.eigenvalues
    if cfg.theta_method == "quadrature":
        theta = centering_for(lam, n, stat.f)
    else:
        theta = centering_parameter_mc(
            lam, paper_law(cell.law), n, p, stat.f, reps=cfg.mc_reps, expansion=cfg.mc_expansion,
            seed=derive_seed(cfg.master_seed, 3, *cell.key), max_dim=cfg.mc_expansion * p,
        )
    return stat.with_centering(theta)


def _trial_rows(cfg, cell, t, stats):
    """All per-trial CSV rows for trial ``t`` of ``cell``."""
    n = cfg.n
    law = paper_law(cell.law)
    seed = derive_seed(cfg.master_seed, 1, *cell.key, t)
    X = sample_dataset(cell.spec, law, n, seed)
    base = [cell.law, cell.setting, _fmt(cell.ratio), t]
    rows = []
    boot_seed = derive_seed(cfg.master_seed, 2, *cell.key, t)
    if cfg.design == "table5":
        if t < cfg.boot_runs:
            res = stable_rank_ci(X, cfg.B, cfg.alpha, {"master_seed": boot_seed, "workers": 1})
            lo, hi = res.interval
            r = cell.spec.stable_rank
            rows.append(base + ["stable_rank", "r_hat", _fmt(res.r_hat), seed])
            rows.append(base + ["stable_rank", "width_pct", _fmt(100 * (hi - lo) / r), boot_seed])
            rows.append(base + ["stable_rank", "covered", int(lo <= r <= hi), boot_seed])
        return rows
    if cfg.design == "rank_power":
        if t < cfg.boot_runs:
            res = stable_rank_test(X, cfg.epsilon0, cfg.alpha, cfg.B, {"master_seed": boot_seed, "workers": 1})
            stat = f"reject_{cell.extra['target']:g}"
            rows.append(base + [stat, "reject", int(res.reject), boot_seed])
        return rows
    lam = sample_covariance_eigs(X)
    aux = {"n": n, "reference": cell.spec.eigenvalues}
    for s in stats:
        v = evaluate_statistic(s, lam, aux)
        rows.append(base + [s.name, "ground", _fmt(v), seed])
    if t < cfg.boot_runs:
        bstats = _stat_list(cfg)
        inputs = estimate_inputs(X)
        bcfg = config_from_data(
            X, bstats, cfg.B, boot_seed, centering=cfg.theta_method, inputs=inputs
        ) if cfg.theta_method == "quadrature" else _mc_boot_config(cfg, X, bstats, boot_seed, inputs)
        draws = bootstrap_distribution(bcfg, workers=1)
        vals = draws.values if draws.values.ndim == 2 else draws.values[:, None]
        for k, s in enumerate(bstats):
            col = vals[:, k]
            rows.append(base + [s.name, "boot_mean", _fmt(col.mean()), boot_seed])
            rows.append(base + [s.name, "boot_sd", _fmt(col.std(ddof=1) if col.size > 1 else 0.0), boot_seed])
            rows.append(base + [s.name, "boot_p95", _fmt(empirical_quantile(col, 0.95)), boot_seed])
    return rows


def _mc_boot_config(cfg, X, stats, seed, inputs):
    """Bootstrap config whose LSS centering is one expanded Monte Carlo realisation."""
    b = inputs.bundle
    law = gamma_xi_params(b.p, b.varsigma_sq_hat).law
    resolved = []
    for s in stats:
        if s.kind == "lss" and s.centering is True:
            theta = centering_parameter_mc(
                inputs.spectrum_tilde, law, b.n, b.p, s.f, reps=1, expansion=cfg.mc_expansion,
                seed=seed, max_dim=cfg.mc_expansion * b.p,
            )
            s = s.with_centering(theta)
        resolved.append(s)
    return BootstrapConfig(cfg.B, b.n, b.p, b.varsigma_sq_hat, inputs.spectrum_tilde, seed, tuple(resolved))


def _prepare(cfg, cell):
    p = _dimension(cfg.n, cell.ratio)
    if cfg.design == "rank_power":
        s = s1_scale_for_ratio(p, cell.extra["target"])
        cell.spec = rescaled_s1(p, s, rotation_seed=cfg.rotation_seed)
    else:
        rot = cfg.rotation_seed if cell.setting in ("S1", "S2") else None
        cell.spec = make_covariance_setting(cell.setting, p, rotation_seed=rot)
    return cell


def _check_output_dir(path):
    probe = os.path.join(path, ".write-test")
    try:
        os.makedirs(path, exist_ok=True)
        with open(probe, "w") as fh:
            fh.write("")
        os.remove(probe)
    except OSError as exc:
        raise ConfigurationError(f"output directory {path!r} is not writable: {exc}") from None


def _reference_value(design, cell, stat):
    table = {"table1": 1, "table2": 2, "table3": 3, "table4": 4, "table5": 5}.get(design)
    if table is None:
        return ""
    entry = REFERENCE_VALUES[table].get((cell[0], cell[1], float(cell[2])))
    if entry is None:
        return ""
    if table == 5:
        if stat == "width_pct":
            m, s = entry["width"]
            return f"{m:.2f}({s:.2f})"
        if stat == "coverage_pct":
            return f"{entry['coverage']:.2f}"
        return ""
    g = "/".join(f"{v:g}" for v in entry["ground"])
    b = "/".join(f"{m:g}({s:g})" for m, s in entry["boot"])
    return f"ground {g}; boot {b}"


def _sd(x):
    return float(np.std(x, ddof=1)) if len(x) > 1 else 0.0


def _p95(x):
    return empirical_quantile(x, 0.95)


def summarize(rows, design):
    """Aggregate per-trial rows into summary rows (full precision)."""
    groups = {}
    for law, setting, ratio, trial, stat, kind, value, seed in rows:
        groups.setdefault((law, setting, ratio, stat), {}).setdefault(kind, []).append(float(value))
    out = []
    for (law, setting, ratio, stat), kinds in groups.items():
        cell = (law, setting, ratio)
        if design == "table5":
            w = kinds.get("width_pct", [])
            cov = kinds.get("covered", [])
            if w:
                out.append([law, setting, ratio, "width_pct", np.mean(w), _sd(w), _p95(w)]
                           + [None] * 6 + [_reference_value(design, cell, "width_pct")])
            if cov:
                out.append([law, setting, ratio, "coverage_pct", 100 * np.mean(cov), None, None]
                           + [None] * 6 + [_reference_value(design, cell, "coverage_pct")])
            continue
        if "reject" in kinds:
            rej = kinds["reject"]
            out.append([law, setting, ratio, stat, 100 * np.mean(rej), None, None] + [None] * 6 + [""])
            continue
        g = kinds.get("ground", [])
        row = [law, setting, ratio, stat]
        row += [np.mean(g), _sd(g), _p95(g)] if g else [None] * 3
        for kind in ("boot_mean", "boot_sd", "boot_p95"):
            v = kinds.get(kind, [])
            row += [np.mean(v), _sd(v)] if v else [None, None]
        row.append(_reference_value(design, cell, stat))
        out.append(row)
    return out


def _render(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return f"{v:.2f}"


@dataclass(frozen=True)
class ExperimentResult:
    trials_csv: str
    summary_csv: str
    manifest: str
    summary: list


def run_experiment(cfg, workers=None, progress=None):
    """Run every cell of ``cfg`` and write ``trials.csv``, ``summary.csv`` and ``manifest.json``."""
    if isinstance(cfg, dict):
        cfg = ExperimentConfig.from_dict(cfg)
    cfg.validate()
    _check_output_dir(cfg.output_dir)
    workers = default_workers() if workers is None else int(workers)
    stats = _stat_list(cfg)
    all_rows = []
    for cell in _cells(cfg):
        _prepare(cfg, cell)
        p = cell.spec.p
        cell_stats = tuple(_ground_centering(cfg, cell, s, cfg.n, p) for s in stats)

        def job(t, cell=cell, cell_stats=cell_stats):
            return _trial_rows(cfg, cell, t, cell_stats)

        if workers == 1:
            chunks = [job(t) for t in range(cfg.trials)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                chunks = list(pool.map(job, range(cfg.trials)))
        for chunk in chunks:
            all_rows.extend(chunk)
        if progress:
            progress(f"{cell.law}/{cell.setting}/{cell.ratio:g}{'/' + str(cell.extra.get('target')) if cell.extra else ''} done")

    trials_path = os.path.join(cfg.output_dir, "trials.csv")
    with open(trials_path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(TRIAL_HEADER)
        wr.writerows(all_rows)
    summary = summarize(all_rows, cfg.design)
    summary_path = os.path.join(cfg.output_dir, "summary.csv")
    with open(summary_path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(SUMMARY_HEADER)
        for row in summary:
            wr.writerow(row[:3] + [row[3]] + [_render(v) for v in row[4:]])
    manifest_path = os.path.join(cfg.output_dir, "manifest.json")
    with open(manifest_path, "w") as fh:
        json.dump(
            {
                "config": cfg.to_dict(),
                "library_version": __version__,
                "numpy_version": np.__version__,
                "files": ["trials.csv", "summary.csv"],
            },
            fh,
            indent=2,
        )
    return ExperimentResult(trials_path, summary_path, manifest_path, summary)


FULL_COUNTS = {"ground": 5000, "boot_runs": 500, "B": 250}


def reproduce_table(table_id, scale, output_dir, cells=None, master_seed=0, workers=None,
                    theta_method="quadrature", progress=None):
    """Rerun a reference table with trial counts multiplied by ``scale``.

    ``cells`` optionally restricts the grid to a list of ``(law, setting, ratio)``.
    The interval table uses ``scale * 500`` datasets, each bootstrapped.
    """
    if table_id not in (1, 2, 3, 4, 5):
        raise ConfigurationError(f"table_id must be 1..5, got {table_id}")
    if not 0 < scale <= 1:
        raise ConfigurationError("scale must lie in (0, 1]")
    boot_runs = int(round(scale * FULL_COUNTS["boot_runs"]))
    trials = boot_runs if table_id == 5 else int(round(scale * FULL_COUNTS["ground"]))
    if boot_runs < 50:
        raise ConfigurationError(f"scale {scale} leaves {boot_runs} bootstrap runs; need at least 50")
    design = f"table{table_id}"
    ratios = _TABLE_RATIOS[design]
    laws, settings = ("i", "ii", "iii"), SETTINGS
    if cells:
        cells = [(law, setting, float(r)) for law, setting, r in cells]
        laws = tuple(dict.fromkeys(c[0] for c in cells))
        settings = tuple(dict.fromkeys(c[1] for c in cells))
        ratios = tuple(dict.fromkeys(c[2] for c in cells))
    cfg = ExperimentConfig(
        design=design, ratios=ratios, laws=laws, settings=settings, trials=trials,
        boot_runs=boot_runs, B=FULL_COUNTS["B"], master_seed=master_seed,
        output_dir=str(output_dir), theta_method=theta_method,
    )
    if cells:
        # A product grid may contain extra cells; run the exact list one by one.
        result_rows = []
        base = None
        for law, setting, ratio in cells:
            sub = ExperimentConfig(**{**cfg.to_dict(), "laws": (law,), "settings": (setting,), "ratios": (ratio,),
                                      "output_dir": os.path.join(str(output_dir), f"{law}-{setting}-{ratio:g}")})
            res = run_experiment(sub, workers=workers, progress=progress)
            result_rows.extend(res.summary)
            base = res
        path = os.path.join(str(output_dir), "summary.csv")
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(SUMMARY_HEADER)
            for row in result_rows:
                wr.writerow(row[:4] + [_render(v) for v in row[4:]])
        return ExperimentResult(base.trials_csv, path, base.manifest, result_rows)
    return run_experiment(cfg, workers=workers, progress=progress)
