import json

import numpy as np
import pytest

from rdsmetric.cli import main, read_config
from rdsmetric.ensemble import PathEnsemble
from rdsmetric.estimators import DistanceMatrix


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def csv_files(d):
    return {p.name: p.read_bytes() for p in sorted(d.glob("*.csv"))}


class TestConfig:
    def test_ini_values_parsed_as_json(self, workdir):
        (workdir / "c.ini").write_text("[rotation-grid]\nT = 5\nz0 = [0.9, 0.1]\nenumeration = exact\n")
        cfg = read_config(workdir / "c.ini")
        assert cfg["rotation-grid"] == {"T": 5, "z0": [0.9, 0.1], "enumeration": "exact"}

    def test_flat_json(self, workdir):
        (workdir / "c.json").write_text('{"T": 3}')
        assert read_config(workdir / "c.json") == {"": {"T": 3}}


class TestExitCodes:
    def test_missing_config(self, workdir):
        assert main(["simulate", "--config", "nope.ini"]) == 2

    def test_unknown_key(self, workdir):
        (workdir / "c.ini").write_text("[simulate]\nbogus = 1\n")
        assert main(["simulate", "--config", "c.ini"]) == 2

    def test_missing_referenced_file(self, workdir):
        (workdir / "c.json").write_text('{"ucr-distmat": {"dataset": "absent.tsv"}}')
        assert main(["ucr-distmat", "--config", "c.json"]) == 2

    def test_bad_generator(self, workdir):
        (workdir / "c.ini").write_text('[simulate]\ngenerator = "brownian"\n')
        assert main(["simulate", "--config", "c.ini"]) == 2

    def test_data_error(self, workdir):
        (workdir / "bad.tsv").write_text("1\t0.5\t0.1\n2\t0.3\n")
        (workdir / "c.json").write_text('{"dataset": "bad.tsv", "n_paths": 1, "n_pairs": 1}')
        assert main(["ucr-distmat", "--config", "c.json"]) == 3

    def test_bad_threads(self, workdir):
        (workdir / "c.ini").write_text("[simulate]\n")
        assert main(["simulate", "--config", "c.ini", "--threads", "0"]) == 2


class TestSubcommands:
    def test_simulate_metric_distmat(self, workdir):
        (workdir / "c.ini").write_text('[simulate]\ngenerator = "rotation"\nn_paths = 3\nt_len = 6\n')
        assert main(["simulate", "--config", "c.ini", "--out", "a"]) == 0
        assert main(["simulate", "--config", "c.ini", "--out", "b", "--seed", "4"]) == 0
        a = PathEnsemble.from_csv(workdir / "a" / "ensemble.csv")
        assert a.values.shape == (3, 6, 1)
        (workdir / "m.json").write_text(json.dumps({
            "metric": {"ensembles": ["a/ensemble.csv", "b/ensemble.csv"], "m": 2},
            "distmat": {"ensembles": ["a/ensemble.csv", "b/ensemble.csv"], "labels": ["a", "b"], "m": 2},
        }))
        assert main(["metric", "--config", "m.json", "--out", "m"]) == 0
        result = json.loads((workdir / "m" / "metric.json").read_text())["result"]
        assert 0 <= result["L"] <= 1
        assert main(["distmat", "--config", "m.json", "--out", "d"]) == 0
        dm = DistanceMatrix.from_csv(workdir / "d" / "distmat.csv")
        assert dm.labels == ["a", "b"] and dm.values[0, 1] == pytest.approx(result["one_minus_L"], rel=1e-12)
        assert (workdir / "d" / "distmat.svg").exists()

    def test_ucr_distmat(self, workdir):
        r = np.random.default_rng(2)
        lines = []
        for c in (1, 2):
            for _ in range(6):
                x = np.sin(np.linspace(0, 5, 16) * c) + 0.1 * r.normal(size=16)
                lines.append("\t".join([str(c)] + [repr(float(v)) for v in x]))
        (workdir / "toy.tsv").write_text("\n".join(lines) + "\n")
        (workdir / "u.ini").write_text('[ucr-distmat]\ndataset = "toy.tsv"\nn_paths = 6\nn_pairs = 3\n')
        assert main(["ucr-distmat", "--config", "u.ini", "--out", "o"]) == 0
        summary = json.loads((workdir / "o" / "summary.json").read_text())
        assert summary["L"]["shape"] == [6, 6] and summary["A"]["shape"] == [12, 12]
        assert summary["L"]["one_nn_accuracy"] == 1.0
        manifest = json.loads((workdir / "o" / "groups_manifest.json").read_text())
        assert len(manifest) == 6
        first = (workdir / "o" / "distmat_L.csv").read_text().splitlines()[0]
        assert first.startswith("# config: ")

    def test_indep_grid9_file_set(self, workdir):
        (workdir / "g.ini").write_text("[indep-grid9]\nn_phi = 2\nn_paths = 3\n")
        assert main(["indep-grid9", "--config", "g.ini", "--out", "o", "--threads", "4"]) == 0
        names = {p.name for p in (workdir / "o").glob("panel_*.csv")}
        assert names == {f"panel_{i}_{j}.csv" for i in range(9) for j in range(9)}

    def test_indep_curve_outputs(self, workdir):
        (workdir / "c.ini").write_text("[indep-curve]\nn_phi = 3\nn_paths = 4\n")
        assert main(["indep-curve", "--config", "c.ini", "--out", "o"]) == 0
        lines = (workdir / "o" / "independence_curve.csv").read_text().splitlines()
        assert lines[0].startswith("# config: ")
        assert lines[1].split(",")[:4] == ["phi", "shift_hsic", "c_k_hat", "one_minus_L"]
        assert len(lines) == 5
        assert (workdir / "o" / "sample_X_phi0p35.csv").exists()
