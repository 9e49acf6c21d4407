import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rdsmetric.kernels import Kernel, as_states, det_batch, det_small, eval_kernel, gram

from oracles import k_gauss, leibniz_det

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


class TestKernel:
    def test_value_at_unit_distance(self):
        assert eval_kernel(Kernel(gamma=0.5), 0.0, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)

    def test_identical_states_give_one(self):
        assert eval_kernel(Kernel(), [1 + 2j, -0.5], [1 + 2j, -0.5]) == 1.0

    def test_real_input_embeds_as_complex(self):
        k = Kernel()
        assert eval_kernel(k, 0.3, 1.1) == eval_kernel(k, 0.3 + 0j, 1.1 + 0j)

    def test_imaginary_offset_counts(self):
        assert eval_kernel(Kernel(gamma=1.0), 0j, 1j) == pytest.approx(math.exp(-1.0))

    @pytest.mark.parametrize("gamma", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_gamma(self, gamma):
        with pytest.raises(ValueError):
            Kernel(gamma=gamma)

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown kernel family"):
            Kernel(family="laplace")

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            eval_kernel(Kernel(), [0, 1], [0])

    def test_non_finite_state(self):
        with pytest.raises(ValueError):
            eval_kernel(Kernel(), float("nan"), 0.0)

    @given(st.lists(st.tuples(finite, finite), min_size=1, max_size=3), st.lists(st.tuples(finite, finite), min_size=1, max_size=3))
    def test_symmetry(self, a, b):
        n = min(len(a), len(b))
        z = [complex(*p) for p in a[:n]]
        w = [complex(*p) for p in b[:n]]
        k = Kernel()
        assert eval_kernel(k, z, w) == eval_kernel(k, w, z)


class TestGram:
    def test_matches_scalar_oracle(self, rng):
        x = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
        y = rng.normal(size=(3, 2))
        g = gram(Kernel(gamma=0.7), x, y)
        ref = np.array([[k_gauss(a, b, 0.7) for b in y] for a in x])
        np.testing.assert_allclose(g, ref, rtol=1e-14, atol=0)

    def test_psd(self, rng):
        x = rng.normal(size=(30, 2)) + 1j * rng.normal(size=(30, 2))
        lam = np.linalg.eigvalsh(gram(Kernel(), x, x))
        assert lam.min() >= -1e-12 * lam.max()

    def test_scalar_list_is_column(self):
        assert as_states([1, 2, 3]).shape == (3, 1)


def _block(rng, m):
    return rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))


class TestDeterminant:
    @pytest.mark.parametrize("m", range(1, 7))
    def test_matches_leibniz(self, rng, m):
        a = _block(rng, m)
        assert abs(det_small(a) - leibniz_det(a.tolist())) <= 1e-12 * max(1.0, abs(leibniz_det(a.tolist())))

    def test_hand_expanded_2x2(self):
        assert det_small([[1.0, 2.0], [3.0, 4.0]]) == -2.0

    def test_identity(self):
        assert det_small(np.eye(8)) == pytest.approx(1.0)

    def test_zero_pivot_column(self):
        a = np.eye(5)
        a[:, 2] = 0
        assert det_small(a) == 0.0

    @pytest.mark.parametrize("shape", [(2, 3), (0, 0), (9, 9), (2,)])
    def test_bad_shapes(self, shape):
        with pytest.raises(ValueError):
            det_small(np.ones(shape))

    @pytest.mark.parametrize("m", range(1, 6))
    def test_batch_agrees(self, rng, m):
        blocks = rng.normal(size=(7, m, m)) + 1j * rng.normal(size=(7, m, m))
        got = det_batch(blocks)
        for b, d in zip(blocks, got):
            assert d == pytest.approx(det_small(b), rel=1e-12, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(arrays(np.float64, (3, 3), elements=finite), st.integers(0, 2), st.integers(0, 2))
    def test_row_swap_flips_sign(self, a, i, j):
        if i == j:
            return
        b = a.copy()
        b[[i, j]] = b[[j, i]]
        assert det_small(b) == pytest.approx(-det_small(a), abs=1e-9)
