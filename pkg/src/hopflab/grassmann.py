"""Oriented 2-planes in R^4 as pairs of points on S^2 x S^2, via the
self-dual / anti-self-dual splitting of bivectors, and the induced
SO(3) x SO(3) action.

Basis conventions
-----------------
Bivectors carry coordinates over (e12, e13, e14, e23, e24, e34). The
self-dual basis is (e12 + e34, e13 - e24, e14 + e23) / sqrt(2) and the
anti-self-dual basis is (e12 - e34, e13 + e24, e14 - e23) / sqrt(2).
A unit decomposable bivector u ^ v splits into halves of equal norm
1/sqrt(2), so scaling the split coordinates by sqrt(2) lands each factor
on the unit 2-sphere. Changing these conventions permutes which factor
is "first"; with this choice, left quaternion multiplications of R^4 act
only on the first factor and right multiplications only on the second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import TOL_UNIT, IsometrySO4

# Rows index the bivector coordinates (e12, e13, e14, e23, e24, e34);
# columns span the self-dual (SD) and anti-self-dual (AD) subspaces.
_SQ2 = np.sqrt(2.0)
SD_BASIS = np.array(
    [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [0, 0, 1],
        [0, -1, 0],
        [1, 0, 0],
    ]
) / _SQ2
AD_BASIS = np.array(
    [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [0, 0, -1],
        [0, 1, 0],
        [-1, 0, 0],
    ]
) / _SQ2

_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@dataclass(frozen=True)
class OrientedPlane2:
    """An oriented 2-plane through the origin of R^4, as an ordered
    orthonormal pair of rows (u, v)."""

    basis: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        if basis.shape != (2, 4):
            raise ValueError("plane basis must be a (2, 4) array")
        gram = basis @ basis.T
        if np.max(np.abs(gram - np.eye(2))) > TOL_UNIT:
            raise ValueError("plane basis must be orthonormal")
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_vectors(cls, u, v) -> "OrientedPlane2":
        """Orthonormalize (u, v) preserving the orientation of the pair."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        u = u / np.linalg.norm(u)
        v = v - (v @ u) * u
        n = np.linalg.norm(v)
        if n < 1e-12:
            raise ValueError("vectors do not span a plane")
        return cls(np.stack([u, v / n]))

    @property
    def u(self) -> np.ndarray:
        return self.basis[0]

    @property
    def v(self) -> np.ndarray:
        return self.basis[1]

    def reversed(self) -> "OrientedPlane2":
        return OrientedPlane2(self.basis[::-1].copy())

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def bivector(self) -> np.ndarray:
        return wedge(self.u, self.v)


@dataclass(frozen=True)
class ModuliPoint:
    """A point (xi_plus, xi_minus) of S^2 x S^2 labeling an oriented plane."""

    xi_plus: np.ndarray
    xi_minus: np.ndarray

    def __post_init__(self):
        for name in ("xi_plus", "xi_minus"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (3,):
                raise ValueError("moduli factors are 3-vectors")
            if abs(np.linalg.norm(arr) - 1.0) > TOL_UNIT:
                raise ValueError("moduli factors must be unit vectors")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def distance_to(self, other: "ModuliPoint") -> float:
        dp = np.arccos(np.clip(self.xi_plus @ other.xi_plus, -1, 1))
        dm = np.arccos(np.clip(self.xi_minus @ other.xi_minus, -1, 1))
        return float(np.hypot(dp, dm))


def wedge(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Bivector coordinates of u ^ v over (e12, e13, e14, e23, e24, e34)."""
    out = np.empty(u.shape[:-1] + (6,))
    for col, (i, j) in enumerate(_PAIRS):
        out[..., col] = u[..., i] * v[..., j] - u[..., j] * v[..., i]
    return out


def split_bivector(omega: np.ndarray):
    """Unit-sphere coordinates (xi_plus, xi_minus) of a unit decomposable bivector."""
    return _SQ2 * (omega @ SD_BASIS), _SQ2 * (omega @ AD_BASIS)


def plane_to_moduli_batch(bases: np.ndarray):
    """Vectorized plane -> (xi_plus, xi_minus) on an (n, 2, 4) array."""
    omega = wedge(bases[:, 0, :], bases[:, 1, :])
    return split_bivector(omega)


def plane_to_moduli(plane: OrientedPlane2) -> ModuliPoint:
    """Split the plane's unit bivector into its self-dual and anti-self-dual
    halves, scaled onto S^2 x S^2."""
    xi_plus, xi_minus = split_bivector(plane.bivector())
    return ModuliPoint(xi_plus, xi_minus)


def _bivector_from_moduli(xi_plus: np.ndarray, xi_minus: np.ndarray) -> np.ndarray:
    return (xi_plus @ SD_BASIS.T + xi_minus @ AD_BASIS.T) / _SQ2


def _skew_matrix(omega: np.ndarray) -> np.ndarray:
    w = np.zeros(omega.shape[:-1] + (4, 4))
    for col, (i, j) in enumerate(_PAIRS):
        w[..., i, j] = omega[..., col]
        w[..., j, i] = -omega[..., col]
    return w


def moduli_to_plane_batch(xi_plus: np.ndarray, xi_minus: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vectorized (xi_plus, xi_minus) -> oriented orthonormal bases (n, 2, 4).

    The reconstructed bivector is factored through the image of its skew
    matrix: the two top left-singular directions span the plane, and the
    orientation is fixed by the sign of the pairing with the bivector.
    """
    omega = _bivector_from_moduli(xi_plus, xi_minus)
    w = _skew_matrix(omega)
    uu, _, _ = np.linalg.svd(w)
    bases = np.stack([uu[..., :, 0], uu[..., :, 1]], axis=-2)
    sign = np.einsum("...i,...ij,...j->...", bases[..., 0, :], w, bases[..., 1, :])
    bases[..., 1, :] *= np.sign(sign)[..., None]
    residual = np.max(np.abs(wedge(bases[..., 0, :], bases[..., 1, :]) - omega))
    if residual > tol:
        raise ValueError(
            f"bivector reconstruction residual {residual:.3e} exceeds {tol:.0e}; "
            "moduli factors are probably not unit vectors"
        )
    return bases


def moduli_to_plane(m: ModuliPoint, tol: float = 1e-9) -> OrientedPlane2:
    """Recover the oriented plane labeled by a point of S^2 x S^2."""
    basis = moduli_to_plane_batch(m.xi_plus[None, :], m.xi_minus[None, :], tol=tol)[0]
    return OrientedPlane2(basis)


def bivector_action(matrix: np.ndarray) -> np.ndarray:
    """The 6x6 action of a 4x4 matrix on bivector coordinates."""
    cols = matrix.T  # images of the coordinate basis vectors
    out = np.empty((6, 6))
    for col, (i, j) in enumerate(_PAIRS):
        out[:, col] = wedge(cols[i], cols[j])
    return out


def so4_to_so3xso3(g: IsometrySO4):
    """Push a rotation of R^4 to the pair of rotations of S^2 x S^2.

    Returns (r_plus, r_minus) with
    plane_to_moduli(g . P) = (r_plus xi_plus, r_minus xi_minus) for every
    oriented plane P. Left multiplications have r_minus = I and right
    multiplications have r_plus = I.
    """
    b6 = bivector_action(g.matrix())
    r_plus = SD_BASIS.T @ b6 @ SD_BASIS
    r_minus = AD_BASIS.T @ b6 @ AD_BASIS
    # SO(4) preserves the splitting, so the off-diagonal blocks vanish.
    cross = SD_BASIS.T @ b6 @ AD_BASIS
    if np.max(np.abs(cross)) > 1e-9:
        raise ValueError("bivector action does not preserve the self-dual splitting")
    return r_plus, r_minus


def principal_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Principal angles between two subspaces with orthonormal row bases,
    sorted ascending."""
    sig = np.linalg.svd(np.asarray(a, float) @ np.asarray(b, float).T, compute_uv=False)
    return np.sort(np.arccos(np.clip(sig, -1.0, 1.0)))


def smallest_principal_angle_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Smallest principal angle for stacked pairs of 2-plane bases (n, 2, 4).

    The largest singular value of the 2x2 cosine matrix M = A B^T is
    computed in closed form from trace(M M^T) and det(M).
    """
    m = a @ np.swapaxes(b, -1, -2)
    t = np.einsum("...ij,...ij->...", m, m)
    d = np.linalg.det(m)
    disc = np.sqrt(np.maximum(t * t - 4.0 * d * d, 0.0))
    smax2 = 0.5 * (t + disc)
    return np.arccos(np.clip(np.sqrt(smax2), -1.0, 1.0))


def random_planes(n: int, rng) -> np.ndarray:
    """n Haar-ish random oriented orthonormal pairs as an (n, 2, 4) array."""
    q, _ = np.linalg.qr(rng.standard_normal((n, 4, 2)))
    return np.swapaxes(q, -1, -2)
