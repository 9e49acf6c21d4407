import math

import numpy as np
import pytest

from rdsmetric.errors import ConfigError, DataError
from rdsmetric.ucr import groups_manifest, load_ucr, make_ensemble_groups, skip_series


def write(tmp_path, text, name="d.tsv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def toy_set(tmp_path, n_per_class=6, length=8, classes=(1, 2, 3)):
    r = np.random.default_rng(0)
    lines = []
    for c in classes:
        for _ in range(n_per_class):
            lines.append("\t".join([str(c)] + [repr(float(v)) for v in r.normal(size=length)]))
    return load_ucr(write(tmp_path, "\n".join(lines) + "\n"))


class TestLoad:
    def test_trivial_row(self, tmp_path):
        d = load_ucr(write(tmp_path, "1\t0.5\t0.7\n"))
        assert d.labels == ["1"]
        assert d.values.tolist() == [[0.5, 0.7]]

    def test_comma_delimited(self, tmp_path):
        d = load_ucr(write(tmp_path, "a,1,2\nb,3,4\n", "d.csv"))
        assert d.labels == ["a", "b"] and d.length == 2

    def test_whitespace_delimited(self, tmp_path):
        d = load_ucr(write(tmp_path, "  1.0000000e+00  2.0  3.0\n  2.0000000e+00  4.0  5.0\n"))
        assert d.labels == ["1", "2"]

    def test_class_ids_by_first_appearance(self, tmp_path):
        d = load_ucr(write(tmp_path, "b\t1\na\t2\nb\t3\n"))
        assert d.class_ids == {"b": 0, "a": 1}

    def test_ragged(self, tmp_path):
        with pytest.raises(DataError, match="row 2"):
            load_ucr(write(tmp_path, "1\t0.5\t0.7\n2\t0.1\n"))

    def test_non_numeric(self, tmp_path):
        with pytest.raises(DataError, match="row 1, column 3"):
            load_ucr(write(tmp_path, "1\t0.5\tabc\n"))

    def test_empty(self, tmp_path):
        with pytest.raises(DataError, match="empty"):
            load_ucr(write(tmp_path, "\n\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            load_ucr(tmp_path / "nope.tsv")

    def test_round_trip(self, tmp_path):
        d = toy_set(tmp_path)
        back = load_ucr(write(tmp_path, d.to_text(), "again.tsv"))
        assert back.labels == d.labels
        assert np.array_equal(back.values, d.values)


class TestSkip:
    def test_identity(self):
        v = np.arange(10)
        assert np.array_equal(skip_series(v, 1), v)

    def test_hundred_of_1024(self):
        out = skip_series(np.arange(1024), 100)
        assert out.tolist() == list(range(0, 1001, 100))

    @pytest.mark.parametrize("n,s", [(7, 3), (10, 10), (5, 9)])
    def test_length(self, n, s):
        assert len(skip_series(np.arange(n), s)) == math.ceil(n / s)

    @pytest.mark.parametrize("s", [0, -1, 1.5])
    def test_bad_step(self, s):
        with pytest.raises(ConfigError):
            skip_series(np.arange(4), s)


class TestGroups:
    def test_partition(self, tmp_path):
        d = toy_set(tmp_path)
        groups = make_ensemble_groups(d, n_paths=6, n_pairs=3, seed=1)
        assert len(groups) == 3
        for g in groups:
            flat = [r for part in g.source_rows for r in part]
            assert sorted(flat) == d.rows_of(g.class_label)
            assert all(e.n_paths == 2 for e in g.ensembles)

    def test_singletons(self, tmp_path):
        g = make_ensemble_groups(toy_set(tmp_path), 4, 4, seed=0)[0]
        assert all(e.n_paths == 1 for e in g.ensembles)

    def test_seeded(self, tmp_path):
        d = toy_set(tmp_path)
        assert groups_manifest(make_ensemble_groups(d, 4, 2, 9)) == groups_manifest(make_ensemble_groups(d, 4, 2, 9))

    def test_not_divisible(self, tmp_path):
        with pytest.raises(ConfigError):
            make_ensemble_groups(toy_set(tmp_path), 5, 2, 0)

    def test_insufficient(self, tmp_path):
        with pytest.raises(DataError):
            make_ensemble_groups(toy_set(tmp_path), 10, 2, 0)

    def test_ensemble_values_are_series(self, tmp_path):
        d = toy_set(tmp_path)
        g = make_ensemble_groups(d, 4, 2, 3)[1]
        e = g.ensembles[0]
        np.testing.assert_array_equal(e.values[:, :, 0].real, d.values[g.source_rows[0]])
