import csv
import json
import os

import numpy as np
import pytest

from specboot.errors import ConfigurationError
from specboot.experiments import (
    RANK_GRID,
    SUMMARY_HEADER,
    TRIAL_HEADER,
    ExperimentConfig,
    parse_statistic,
    reproduce_table,
    run_experiment,
)


def read(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def small(tmp_path, name="out", **kw):
    base = dict(design="adhoc", n=40, ratios=(0.5,), laws=("i",), settings=("S1",), trials=6,
                boot_runs=2, B=20, master_seed=3, output_dir=str(tmp_path / name),
                statistics=("lss:square", "largest_eig"))
    base.update(kw)
    return ExperimentConfig(**base)


def test_minimal_grid_one_row(tmp_path):
    cfg = small(tmp_path, trials=1, boot_runs=0, B=1, statistics=("lss:square",))
    res = run_experiment(cfg)
    rows = read(res.trials_csv)
    assert rows[0] == TRIAL_HEADER
    assert len(rows) == 2 and rows[1][5] == "ground"
    man = json.load(open(res.manifest))
    assert man["library_version"] and man["config"]["trials"] == 1


def test_headers_and_rounding(tmp_path):
    res = run_experiment(small(tmp_path))
    summ = read(res.summary_csv)
    assert summ[0] == SUMMARY_HEADER
    assert len(summ) == 3
    for row in summ[1:]:
        assert row[4].count(".") == 1 and len(row[4].split(".")[1]) == 2


def test_rerun_is_byte_identical(tmp_path):
    a = run_experiment(small(tmp_path, "a"))
    b = run_experiment(small(tmp_path, "b"), workers=3)
    for x, y in ((a.trials_csv, b.trials_csv), (a.summary_csv, b.summary_csv)):
        assert open(x).read() == open(y).read()


def test_manifest_replays(tmp_path):
    a = run_experiment(small(tmp_path, "a"))
    cfg = json.load(open(a.manifest))["config"]
    cfg["output_dir"] = str(tmp_path / "replay")
    b = run_experiment(ExperimentConfig.from_dict(cfg))
    assert open(a.trials_csv).read() == open(b.trials_csv).read()


def test_summary_matches_independent_aggregation(tmp_path):
    res = run_experiment(small(tmp_path))
    rows = read(res.trials_csv)[1:]
    for summ in read(res.summary_csv)[1:]:
        stat = summ[3]
        ground = [float(r[6]) for r in rows if r[4] == stat and r[5] == "ground"]
        sds = [float(r[6]) for r in rows if r[4] == stat and r[5] == "boot_sd"]
        assert float(summ[4]) == pytest.approx(np.mean(ground), abs=0.006)
        assert float(summ[5]) == pytest.approx(np.std(ground, ddof=1), abs=0.006)
        assert float(summ[9]) == pytest.approx(np.mean(sds), abs=0.006)


def test_dropping_cells_keeps_numbers(tmp_path):
    both = run_experiment(small(tmp_path, "both", settings=("S1", "S3")))
    one = run_experiment(small(tmp_path, "one", settings=("S3",)))
    s3 = [r for r in read(both.trials_csv)[1:] if r[1] == "S3"]
    assert s3 == read(one.trials_csv)[1:]


def test_table5_rows(tmp_path):
    cfg = small(tmp_path, design="table5", n=60, trials=2, boot_runs=2, statistics=("stable_rank_star",))
    res = run_experiment(cfg)
    kinds = {r[5] for r in read(res.trials_csv)[1:]}
    assert kinds == {"r_hat", "width_pct", "covered"}
    stats = [r[3] for r in read(res.summary_csv)[1:]]
    assert stats == ["width_pct", "coverage_pct"]


def test_rank_power_rows(tmp_path):
    cfg = small(tmp_path, design="rank_power", n=60, trials=2, boot_runs=2, rank_grid=(0.6, 0.9),
                statistics=("stable_rank_star",))
    res = run_experiment(cfg)
    rows = read(res.trials_csv)[1:]
    assert {r[5] for r in rows} == {"reject"}
    assert len(rows) == 4
    assert all(0 <= float(r[4]) <= 100 for r in read(res.summary_csv)[1:])


def test_config_validation(tmp_path):
    for bad in (dict(design="table9"), dict(trials=0), dict(laws=("iv",)), dict(settings=("S7",)),
                dict(ratios=(-1,)), dict(boot_runs=50), dict(theta_method="exact"),
                dict(statistics=("median",)), dict(ratios=(0.05,)),
                dict(design="rank_power", rank_grid=(0.1,))):
        with pytest.raises(ConfigurationError):
            run_experiment(small(tmp_path, **bad))
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_dict({"trails": 5})


def test_unwritable_output_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ConfigurationError):
        run_experiment(small(tmp_path, output_dir=str(blocker / "sub")))


def test_parse_statistic():
    s = parse_statistic("lss:x_minus_log")
    assert s.kind == "lss" and s.centering is True
    assert parse_statistic("lss_raw:square").centering is None
    assert parse_statistic("eigen_gap").kind == "eigen_gap"
    with pytest.raises(ConfigurationError):
        parse_statistic("largest_eig:x")


def test_rank_grid():
    assert RANK_GRID[0] == 0.098 and RANK_GRID[-1] == 0.105 and len(RANK_GRID) == 15


def test_reproduce_table_guards(tmp_path):
    with pytest.raises(ConfigurationError):
        reproduce_table(6, 0.1, tmp_path)
    with pytest.raises(ConfigurationError):
        reproduce_table(1, 0.05, tmp_path)
    with pytest.raises(ConfigurationError):
        reproduce_table(1, 1.5, tmp_path)


def test_config_json_round_trip(tmp_path):
    cfg = small(tmp_path)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    back = ExperimentConfig.from_json(path)
    assert back == cfg
    assert os.path.basename(back.output_dir) == "out"
