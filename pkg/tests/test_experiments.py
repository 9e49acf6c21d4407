import math
import os
import subprocess
import sys

import numpy as np
import pytest

from rdsmetric.errors import ConfigError
from rdsmetric.estimators import DistanceMatrix
from rdsmetric.experiments import as_complex, cluster_summary, parameter_grid


class TestGrid:
    def test_order_and_labels(self):
        grid = parameter_grid()
        assert len(grid) == 9
        assert grid[2] == (0.3, 1 / 3, "a0.3_t1/3")
        assert grid[8][1] == math.pi / 3


class TestClusterSummary:
    def test_perfect_blocks(self):
        d = np.array([[0, 0.1, 0.9, 0.8], [0.1, 0, 0.7, 0.9], [0.9, 0.7, 0, 0.2], [0.8, 0.9, 0.2, 0]])
        s = cluster_summary(DistanceMatrix(list("abcd"), d), ["x", "x", "y", "y"])
        assert s["one_nn_accuracy"] == 1.0
        assert s["per_class"]["x"] == {"within_mean": pytest.approx(0.1), "between_mean": pytest.approx(0.825)}

    def test_wrong_neighbour(self):
        d = np.array([[0, 0.5, 0.1], [0.5, 0, 0.9], [0.1, 0.9, 0]])
        s = cluster_summary(DistanceMatrix(list("abc"), d), ["x", "x", "y"])
        assert s["one_nn_accuracy"] == pytest.approx(1 / 3)


class TestComplexParsing:
    @pytest.mark.parametrize("raw,expected", [(0.9, 0.9 + 0j), ([0.9, 0.1], 0.9 + 0.1j), ("0.9+0.1j", 0.9 + 0.1j)])
    def test_forms(self, raw, expected):
        assert as_complex(raw) == expected

    def test_bad(self):
        with pytest.raises(ConfigError):
            as_complex([1, 2, 3])


def test_pure_python_selected_by_env():
    code = (
        "import numpy as np, rdsmetric as r;"
        "e = r.PathEnsemble(np.arange(12.0).reshape(2, 6) / 10);"
        "print(r.BACKEND, repr(r.estimate_l(e, e, r.MetricConfig(m=2)).real))"
    )
    env = {**os.environ, "RDSMETRIC_PURE_PYTHON": "1"}
    pure = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()
    env.pop("RDSMETRIC_PURE_PYTHON")
    default = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()
    assert pure[0] == "python"
    assert float(pure[1]) == pytest.approx(float(default[1]), rel=1e-13)
