import numpy as np
import pytest

from rdsmetric import PathEnsemble
from rdsmetric.errors import DataError

from conftest import random_ensemble


class TestPathEnsemble:
    def test_shape_from_2d(self):
        e = PathEnsemble(np.zeros((3, 5)))
        assert (e.n_paths, e.t_len, e.dim) == (3, 5, 1)

    def test_read_only(self, rng):
        e = random_ensemble(rng, 2, 3)
        with pytest.raises(ValueError):
            e.values[0, 0, 0] = 1.0

    def test_x0_enforced(self):
        with pytest.raises(DataError):
            PathEnsemble(np.array([[0.9, 1.0], [0.8, 1.0]]), x0=0.9)

    def test_csv_round_trip(self, rng, tmp_path):
        e = PathEnsemble(random_ensemble(rng, 3, 4, 2).values, meta={"seed": 4})
        e.to_csv(tmp_path / "e.csv")
        back = PathEnsemble.from_csv(tmp_path / "e.csv")
        assert np.array_equal(back.values, e.values)
        assert back.meta["seed"] == 4

    def test_csv_is_stable(self, rng):
        e = random_ensemble(rng, 2, 3)
        assert PathEnsemble.from_csv_text(e.to_csv()).to_csv() == e.to_csv()

    def test_bad_row(self, rng):
        text = random_ensemble(rng, 2, 2).to_csv().replace("\n1,1,", "\n1,1,abc,", 1)
        with pytest.raises(DataError):
            PathEnsemble.from_csv_text(text)

    def test_select_times(self, rng):
        e = random_ensemble(rng, 2, 5)
        assert e.select_times([1, 3]).shape == (2, 2, 1)
