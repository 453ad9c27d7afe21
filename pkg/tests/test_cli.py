import json
import os
import xml.etree.ElementTree as ET

import pytest

from activesplit.cli import main


@pytest.fixture(scope="module")
def run_setup(corpus_dir, tmp_path_factory):
    base = tmp_path_factory.mktemp("cli")
    config = {
        "datasets": [str(corpus_dir / "A2a.csv"), str(corpus_dir / "Dopamine.csv"),
                     str(corpus_dir / "Dihydrofolate.csv")],
        "models": [{"ridge": {}}, {"svr": {}}],
        "splits": [{"bootstrap": {}}, {"quantile_bootstrap": {"q": 0.6}}],
        "gammas": [0.9, 0.99],
        "iterations": 4,
        "master_seed": 31,
    }
    cfg_path = base / "config.json"
    cfg_path.write_text(json.dumps(config))
    out_dir = base / "out"
    code = main(["run", "--config", str(cfg_path), "--out", str(out_dir)])
    assert code == 0
    return base, cfg_path, out_dir


class TestValidateData:
    def test_ok(self, corpus_dir, capsys):
        assert main(["validate-data", str(corpus_dir / "A2a.csv")]) == 0
        out = capsys.readouterr().out
        assert "A2a" in out
        assert "203" in out

    def test_missing_file(self, tmp_path, capsys):
        assert main(["validate-data", str(tmp_path / "nope.csv")]) == 2
        assert "nope.csv" in capsys.readouterr().err


class TestRun:
    def test_outputs_exist_with_expected_shape(self, run_setup):
        _, _, out_dir = run_setup
        records = (out_dir / "records.csv").read_text().splitlines()
        # header + datasets x plans x iterations x models x losses
        assert len(records) == 1 + 3 * 2 * 4 * 2 * 5
        aggregates = json.loads((out_dir / "aggregates.json").read_text())
        assert len(aggregates["cells"]) == 3 * 2 * 5

    def test_refuses_overwrite_without_force(self, run_setup, capsys):
        _, cfg_path, out_dir = run_setup
        code = main(["run", "--config", str(cfg_path), "--out", str(out_dir)])
        assert code == 1
        assert "--force" in capsys.readouterr().err

    def test_rerun_identical_apart_from_timestamps(self, run_setup, tmp_path):
        _, cfg_path, out_dir = run_setup
        second = tmp_path / "again"
        assert main(["run", "--config", str(cfg_path), "--out", str(second)]) == 0
        assert (second / "records.csv").read_bytes() == \
            (out_dir / "records.csv").read_bytes()
        a = json.loads((out_dir / "aggregates.json").read_text())
        b = json.loads((second / "aggregates.json").read_text())
        for doc in (a, b):
            doc["metadata"].pop("created_at")
            doc["metadata"].pop("wall_seconds")
        assert a == b

    def test_missing_dataset_exit_2(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"datasets": ["/no/such/file.csv"],
                                   "iterations": 2}))
        code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "/no/such/file.csv" in capsys.readouterr().err

    def test_bad_config_exit_1(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text("{not json")
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1

    def test_unknown_config_key_exit_1(self, tmp_path, corpus_dir):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"datasets": [str(corpus_dir / "A2a.csv")],
                                   "bogus": True}))
        assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1

    def test_runtime_error_exit_3(self, tmp_path, corpus_dir, capsys):
        # LOO folds leave single-molecule test sets: rank losses need >= 2
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({
            "datasets": [str(corpus_dir / "A2a.csv")],
            "models": [{"ridge": {}}],
            "splits": [{"kfold": {"k": 203}}],
            "iterations": 2,
        }))
        code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")])
        assert code == 3
        assert "A2a" in capsys.readouterr().err

    def test_dataset_subset_override(self, run_setup, tmp_path):
        _, cfg_path, _ = run_setup
        out = tmp_path / "subset"
        code = main(["run", "--config", str(cfg_path), "--out", str(out),
                     "--datasets", "A2a", "--iterations", "2"])
        assert code == 0
        aggregates = json.loads((out / "aggregates.json").read_text())
        assert [d["name"] for d in aggregates["metadata"]["datasets"]] == ["A2a"]

    def test_env_seed_fallback(self, tmp_path, corpus_dir, monkeypatch):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({
            "datasets": [str(corpus_dir / "A2a.csv")],
            "models": [{"ridge": {}}],
            "splits": [{"bootstrap": {}}],
            "iterations": 2,
        }))
        monkeypatch.setenv("ACTIVESPLIT_SEED", "4242")
        out = tmp_path / "o"
        assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
        aggregates = json.loads((out / "aggregates.json").read_text())
        assert aggregates["metadata"]["config"]["master_seed"] == 4242


class TestReport:
    def test_prints_tables(self, run_setup, capsys):
        _, _, out_dir = run_setup
        assert main(["report", str(out_dir)]) == 0
        out = capsys.readouterr().out
        assert "dataset A2a | split bootstrap" in out
        assert "overall model scores" in out
        assert "ridge" in out and "svr" in out

    def test_scores_columns_sum_to_dataset_count(self, run_setup):
        _, _, out_dir = run_setup
        aggregates = json.loads((out_dir / "aggregates.json").read_text())
        for entry in aggregates["overall_scores"]:
            assert sum(entry["scores"].values()) == pytest.approx(3.0, abs=1e-12)

    def test_empty_dir_exit_2(self, tmp_path, capsys):
        assert main(["report", str(tmp_path)]) == 2


class TestPlot:
    def test_svg_files_wellformed_and_complete(self, run_setup, capsys):
        _, _, out_dir = run_setup
        assert main(["plot", str(out_dir)]) == 0
        paths = capsys.readouterr().out.splitlines()
        # one per (split, loss) plus one score-vs-q per loss
        assert len(paths) == 2 * 5 + 5
        for p in paths:
            root = ET.parse(p).getroot()
            assert root.tag.endswith("svg")

    def test_dataset_chart_marker_count(self, run_setup):
        _, _, out_dir = run_setup
        path = os.path.join(str(out_dir), "plots",
                            "dataset_losses__bootstrap__mse.svg")
        root = ET.parse(path).getroot()
        circles = root.findall(".//{http://www.w3.org/2000/svg}circle")
        # 3 datasets x 2 models plus 2 legend markers
        assert len(circles) == 3 * 2 + 2

    def test_score_curve_tick_per_q(self, run_setup):
        _, _, out_dir = run_setup
        path = os.path.join(str(out_dir), "plots", "score_vs_q__mse.svg")
        root = ET.parse(path).getroot()
        texts = [t.text for t in
                 root.findall(".//{http://www.w3.org/2000/svg}text")]
        assert "0.6" in texts
        assert "1 (random)" in texts

    def test_missing_results_exit_2(self, tmp_path):
        assert main(["plot", str(tmp_path)]) == 2


class TestDumpSplit:
    def test_quantile_json(self, corpus_dir, capsys):
        code = main(["dump-split", "--dataset", str(corpus_dir / "A2a.csv"),
                     "--kind", "quantile_bootstrap", "--q", "0.4", "--seed", "9"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["train"]) == 81
        assert len(payload["test"]) == 122
        assert not set(payload["train"]) & set(payload["test"])

    def test_kfold_fold_selection(self, corpus_dir, capsys):
        code = main(["dump-split", "--dataset", str(corpus_dir / "A2a.csv"),
                     "--kind", "kfold", "--k", "5", "--fold", "2"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["train"]) + len(payload["test"]) == 203
