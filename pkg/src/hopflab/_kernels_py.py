"""NumPy implementations of the batched numerical kernels.

Pure fallback for the optional compiled extension ``hopflab._kernels``;
both expose the same functions over C-contiguous float64 2-d arrays.
"""

import numpy as np

BACKEND_NAME = "numpy"


def quat_conj_2d(a):
    out = a.copy()
    out[:, 1:] = -out[:, 1:]
    return out


def quat_mul_2d(a, b):
    """Hamilton product of stacked quaternions, (n, 4) x (n, 4) -> (n, 4)."""
    if a.shape[0] != b.shape[0]:
        raise ValueError("stacked quaternion arrays must share length")
    aw, ax, ay, az = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    bw, bx, by, bz = b[:, 0], b[:, 1], b[:, 2], b[:, 3]
    out = np.empty_like(a)
    out[:, 0] = aw * bw - ax * bx - ay * by - az * bz
    out[:, 1] = aw * bx + ax * bw + ay * bz - az * by
    out[:, 2] = aw * by - ax * bz + ay * bw + az * bx
    out[:, 3] = aw * bz + ax * by - ay * bx + az * bw
    return out


def oct_mul_2d(a, b):
    """Cayley-Dickson product of stacked octonions, (n, 8) x (n, 8) -> (n, 8).

    Octonions are quaternion pairs (p, q) with product
    (p, q)(r, s) = (p r - conj(s) q, s p + q conj(r)).
    """
    if a.shape[0] != b.shape[0]:
        raise ValueError("stacked octonion arrays must share length")
    p, q = a[:, :4], a[:, 4:]
    r, s = b[:, :4], b[:, 4:]
    out = np.empty_like(a)
    out[:, :4] = quat_mul_2d(p, r) - quat_mul_2d(quat_conj_2d(s), q)
    out[:, 4:] = quat_mul_2d(s, p) + quat_mul_2d(q, quat_conj_2d(r))
    return out


def rot4_apply_2d(l, r, v):
    """Apply v -> l * v * conj(r) to stacked 4-vectors, (n, 4) -> (n, 4)."""
    n = v.shape[0]
    lv = quat_mul_2d(np.broadcast_to(l, (n, 4)).copy(), v)
    rc = np.array([r[0], -r[1], -r[2], -r[3]])
    return quat_mul_2d(lv, np.broadcast_to(rc, (n, 4)).copy())


def row_max_dot_2d(a, b):
    """Per-row maximum of the dot-product matrix a @ b.T, (m, d), (n, d) -> (m,)."""
    if a.shape[1] != b.shape[1]:
        raise ValueError("point sets must share ambient dimension")
    return (a @ b.T).max(axis=1)
