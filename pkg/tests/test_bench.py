import json

import numpy as np
import pytest

from roughbee.bench import (
    MACHINE_FIELDS,
    AlgorithmSpec,
    ConfigError,
    ReportRow,
    cardinality_display,
    config_from_dict,
    emit_report,
    load_config,
    run_experiment,
    verify_against_oracle,
)
from roughbee.cli import main
from roughbee.core import dependency
from roughbee.data import dump_encoded

from oracles import make_table, random_table


def write_table(path, table):
    path.write_text(dump_encoded(table))
    return path


def none_disc():
    return {"strategy": "none"}


@pytest.fixture
def workdir(tmp_path, t1):
    write_table(tmp_path / "t1.csv", t1)
    t9 = random_table(np.random.default_rng(9), 30, 9, consistent=True)
    write_table(tmp_path / "t9.csv", t9)
    return tmp_path


def experiment(workdir, algorithms, datasets=("t1",), **output):
    doc = {
        "datasets": [{"name": d, "path": f"{d}.csv", "discretization": none_disc()}
                     for d in datasets],
        "algorithms": algorithms,
        "output": output,
    }
    path = workdir / "exp.json"
    path.write_text(json.dumps(doc))
    return path


class TestDisplay:
    def test_range(self):
        assert cardinality_display([7, 8, 7]) == "7-8"

    def test_single_value(self):
        assert cardinality_display([4, 4, 4]) == "4"
        assert cardinality_display([5]) == "5"

    def test_error_row(self):
        assert ReportRow("d", "ebr", error="boom").cardinality_display == "ERR"


class TestConfig:
    def test_defaults(self, workdir):
        cfg = load_config(experiment(workdir, [{"algorithm_id": "quickreduct"},
                                               {"algorithm_id": "beersar"},
                                               {"algorithm_id": "antrsar"}]))
        runs = [a.runs for a in cfg.algorithms]
        assert runs == [1, 3, 3]
        assert cfg.datasets[0].path == workdir / "t1.csv"

    @pytest.mark.parametrize("doc", [
        {"datasets": [], "algorithms": [{"algorithm_id": "ebr"}]},
        {"datasets": [{"name": "x", "path": "x"}], "algorithms": [{"algorithm_id": "nope"}]},
        {"datasets": [{"name": "x", "path": "x"}],
         "algorithms": [{"algorithm_id": "beersar", "config": {"colony_size": 7}}]},
        {"datasets": [{"name": "x", "path": "x"}],
         "algorithms": [{"algorithm_id": "genrsar", "config": {"bogus": 1}}]},
        {"datasets": [{"name": "x", "path": "x", "missing_policy": "impute"}],
         "algorithms": [{"algorithm_id": "ebr"}]},
        {"datasets": [{"name": "x", "path": "x"}], "algorithms": [{"algorithm_id": "ebr"}],
         "output": {"format": "xml"}},
    ])
    def test_rejected_upfront(self, doc):
        with pytest.raises(ConfigError):
            config_from_dict(doc)

    def test_seed_override(self, workdir):
        cfg = load_config(experiment(workdir, [{"algorithm_id": "beersar", "base_seed": 3}]))
        assert cfg.with_seed(40).algorithms[0].base_seed == 40


class TestRun:
    def test_deterministic_algorithm_repeats_exactly(self, workdir):
        cfg = load_config(experiment(workdir, [{"algorithm_id": "quickreduct", "runs": 3}]))
        (row,) = run_experiment(cfg)
        assert row.cardinalities == (2, 2, 2) and row.cardinality_display == "2"

    def test_gamma_best_matches_fresh_dependency(self, workdir, t1):
        cfg = load_config(experiment(workdir, [
            {"algorithm_id": "genrsar", "runs": 2,
             "config": {"population_size": 10, "generations": 5}}]))
        (row,) = run_experiment(cfg)
        assert row.gamma_best == dependency(t1, row.best_subset)

    def test_missing_dataset_gives_error_rows(self, workdir):
        cfg = load_config(experiment(workdir, [{"algorithm_id": "ebr"},
                                               {"algorithm_id": "quickreduct"}],
                                     datasets=("gone", "t1")))
        rows = run_experiment(cfg)
        assert [r.error is not None for r in rows] == [True, True, False, False]
        assert "ERR" in emit_report(rows)

    def test_oracle_over_cap_is_an_error_row(self, workdir):
        cfg = load_config(experiment(workdir, [{"algorithm_id": "oracle",
                                                "config": {"max_attrs_cap": 1}}]))
        (row,) = run_experiment(cfg)
        assert row.error and row.num_attrs == 2


class TestReport:
    def rows(self, workdir):
        cfg = load_config(experiment(
            workdir,
            [{"algorithm_id": "quickreduct"}, {"algorithm_id": "ebr"},
             {"algorithm_id": "beersar", "runs": 2, "config": {"max_cycles": 30}}],
            datasets=("t1", "t9")))
        return run_experiment(cfg)

    def test_table_layout(self, workdir):
        lines = emit_report(self.rows(workdir), "table").splitlines()
        assert lines[0].split() == ["Dataset", "t1", "t9"]
        assert lines[1].split() == ["#Features", "2", "9"]
        assert set(lines[2]) <= {"-", " "}
        assert [ln.split()[0] for ln in lines[3:]] == ["RSAR", "EBR", "BeeRSAR"]
        assert len({len(ln) for ln in lines[:3]}) == 1

    def test_machine_has_constant_width(self, workdir):
        lines = emit_report(self.rows(workdir), "machine").splitlines()
        assert lines[0].split("\t") == list(MACHINE_FIELDS)
        assert {len(ln.split("\t")) for ln in lines} == {len(MACHINE_FIELDS)}

    def test_timing_column(self, workdir):
        lines = emit_report(self.rows(workdir), "machine", timing=True).splitlines()
        assert lines[0].endswith("elapsed_s")

    def test_machine_is_reproducible(self, workdir):
        assert emit_report(self.rows(workdir), "machine") == \
            emit_report(self.rows(workdir), "machine")

    def test_empty(self):
        with pytest.raises(ValueError):
            emit_report([])


class TestVerify:
    def test_t1_quickreduct_has_zero_gap(self, workdir):
        cfg = load_config(experiment(workdir, [{"algorithm_id": "quickreduct"}]))
        report = verify_against_oracle(cfg)
        (check,) = report.checks
        assert check.oracle_min == 2 and check.gaps == (0,) and report.ok

    def test_nine_attributes(self, workdir):
        cfg = load_config(experiment(workdir, [{"algorithm_id": "ebr"}], datasets=("t9",)))
        (check,) = verify_against_oracle(cfg).checks
        assert check.ok and min(check.gaps) >= 0

    def test_wide_dataset_skipped(self, workdir):
        wide = random_table(np.random.default_rng(0), 10, 30)
        write_table(workdir / "wide.csv", wide)
        cfg = load_config(experiment(workdir, [{"algorithm_id": "ebr"}], datasets=("wide",)))
        report = verify_against_oracle(cfg, max_attrs_cap=24)
        assert not report.checks and len(report.skipped) == 1
        assert report.render().startswith("SKIP wide")


class TestCli:
    def test_run_machine(self, workdir, capsys):
        path = experiment(workdir, [{"algorithm_id": "quickreduct"}])
        assert main(["run", str(path), "--format", "machine"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[1].split("\t")[:4] == ["t1", "quickreduct", "2", "2"]

    def test_run_to_file_and_seed(self, workdir):
        path = experiment(workdir, [{"algorithm_id": "beersar", "runs": 2,
                                     "config": {"max_cycles": 20}}], datasets=("t9",))
        a, b = workdir / "a.txt", workdir / "b.txt"
        assert main(["run", str(path), "--seed", "7", "--format", "machine",
                     "--out", str(a)]) == 0
        main(["run", str(path), "--seed", "7", "--format", "machine", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_verify(self, workdir, capsys):
        path = experiment(workdir, [{"algorithm_id": "quickreduct"}])
        assert main(["verify", str(path)]) == 0
        assert "gap=0" in capsys.readouterr().out

    def test_bad_config_exit_code(self, workdir, capsys):
        bad = workdir / "bad.json"
        bad.write_text(json.dumps({"datasets": [{"name": "x", "path": "x"}],
                                   "algorithms": [{"algorithm_id": "nope"}]}))
        assert main(["run", str(bad)]) == 2
        assert "nope" in capsys.readouterr().err

    def test_encode(self, tmp_path, capsys):
        src = tmp_path / "raw.csv"
        src.write_text("colour,size,label\nred,1.5,y\nblue,2.5,n\nred,3.5,y\n")
        assert main(["encode", str(src), "equal_width:2"]) == 0
        assert capsys.readouterr().out.splitlines() == [
            "colour,size,label", "0,0,0", "1,1,1", "0,1,0"]

    def test_encode_missing_file(self, tmp_path, capsys):
        assert main(["encode", str(tmp_path / "nope.csv")]) == 2


def test_algorithm_spec_seeds(t0):
    from roughbee.bench import run_algorithm
    outs = run_algorithm(t0, AlgorithmSpec("beersar", None, 3, 10))
    assert [o.seed for o in outs] == [10, 11, 12]


def test_make_table_helper_round_trips(tmp_path):
    t = make_table([[0, 1, 1], [1, 1, 0]], [0, 1, 0])
    cfg = config_from_dict({"datasets": [{"name": "x", "path": str(write_table(
        tmp_path / "x.csv", t)), "discretization": none_disc()}],
        "algorithms": [{"algorithm_id": "oracle"}]})
    np.testing.assert_array_equal(cfg.datasets[0].load().conditions, t.conditions)
