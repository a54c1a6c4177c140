"""Backend selection and array-shape plumbing for the batched kernels.

The compiled extension ``hopflab._kernels`` is preferred when it imports;
otherwise the NumPy implementations in ``hopflab._kernels_py`` are used.
Set the environment variable ``HOPFLAB_PURE_PYTHON=1`` to force the
fallback. ``BACKEND`` records which one is active.
"""

import os

import numpy as np

if os.environ.get("HOPFLAB_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND_NAME


def _paired(a, b, width):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[-1] != width or b.shape[-1] != width:
        raise ValueError(f"expected trailing dimension {width}")
    shape = np.broadcast_shapes(a.shape, b.shape)
    a2 = np.ascontiguousarray(np.broadcast_to(a, shape)).reshape(-1, width)
    b2 = np.ascontiguousarray(np.broadcast_to(b, shape)).reshape(-1, width)
    return shape, a2, b2


def quat_mul(a, b):
    """Hamilton product on arrays of shape (..., 4), broadcasting."""
    shape, a2, b2 = _paired(a, b, 4)
    return _impl.quat_mul_2d(a2, b2).reshape(shape)


def quat_conj(a):
    a = np.asarray(a, dtype=np.float64)
    if a.shape[-1] != 4:
        raise ValueError("expected trailing dimension 4")
    out = a.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def oct_mul(a, b):
    """Cayley-Dickson octonion product on arrays of shape (..., 8)."""
    shape, a2, b2 = _paired(a, b, 8)
    return _impl.oct_mul_2d(a2, b2).reshape(shape)


def oct_conj(a):
    a = np.asarray(a, dtype=np.float64)
    if a.shape[-1] != 8:
        raise ValueError("expected trailing dimension 8")
    out = a.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def rot4_apply_batch(l, r, v):
    """Apply the rotation v -> l v conj(r) to an array of 4-vectors."""
    l = np.ascontiguousarray(l, dtype=np.float64)
    r = np.ascontiguousarray(r, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if l.shape != (4,) or r.shape != (4,):
        raise ValueError("rotation factors must be single quaternions")
    if v.shape[-1] != 4:
        raise ValueError("expected trailing dimension 4")
    shape = v.shape
    v2 = np.ascontiguousarray(v).reshape(-1, 4)
    return _impl.rot4_apply_2d(l, r, v2).reshape(shape)


def row_max_dot(a, b):
    """Per-row maximum of a @ b.T for 2-d point sets."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("expected 2-d point sets")
    return _impl.row_max_dot_2d(a, b)
