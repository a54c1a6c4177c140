import os
import subprocess
import sys

import numpy as np
import pytest

from hopflab import _kernels_py, kernels


def test_backend_is_known():
    assert kernels.BACKEND in ("cython", "numpy")


def test_row_max_dot_matches_naive(rng):
    a = rng.standard_normal((40, 7))
    b = rng.standard_normal((60, 7))
    np.testing.assert_allclose(kernels.row_max_dot(a, b), (a @ b.T).max(axis=1), atol=1e-12)


def test_quat_mul_broadcasts(rng):
    a = rng.standard_normal(4)
    b = rng.standard_normal((10, 4))
    out = kernels.quat_mul(a, b)
    assert out.shape == (10, 4)
    np.testing.assert_allclose(out[3], kernels.quat_mul(a, b[3]), atol=1e-14)


compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled extension not built")


@compiled
def test_compiled_quat_mul_matches_fallback(rng):
    a = np.ascontiguousarray(rng.standard_normal((1000, 4)))
    b = np.ascontiguousarray(rng.standard_normal((1000, 4)))
    from hopflab import _kernels

    np.testing.assert_array_equal(_kernels.quat_mul_2d(a, b), _kernels_py.quat_mul_2d(a, b))


@compiled
def test_compiled_oct_mul_matches_fallback(rng):
    a = np.ascontiguousarray(rng.standard_normal((1000, 8)))
    b = np.ascontiguousarray(rng.standard_normal((1000, 8)))
    from hopflab import _kernels

    np.testing.assert_array_equal(_kernels.oct_mul_2d(a, b), _kernels_py.oct_mul_2d(a, b))


@compiled
def test_compiled_rot4_matches_fallback(rng):
    l, r = rng.standard_normal((2, 4))
    l /= np.linalg.norm(l)
    r /= np.linalg.norm(r)
    v = np.ascontiguousarray(rng.standard_normal((500, 4)))
    from hopflab import _kernels

    np.testing.assert_allclose(
        _kernels.rot4_apply_2d(l, r, v), _kernels_py.rot4_apply_2d(l, r, v), atol=1e-14
    )


@compiled
def test_compiled_row_max_dot_matches_fallback(rng):
    a = np.ascontiguousarray(rng.standard_normal((100, 16)))
    b = np.ascontiguousarray(rng.standard_normal((200, 16)))
    from hopflab import _kernels

    np.testing.assert_allclose(
        _kernels.row_max_dot_2d(a, b), _kernels_py.row_max_dot_2d(a, b), atol=1e-12
    )


def test_pure_python_env_forces_fallback():
    env = dict(os.environ, HOPFLAB_PURE_PYTHON="1")
    proc = subprocess.run(
        [sys.executable, "-c", "from hopflab import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "numpy"
