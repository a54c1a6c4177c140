"""Hopf fibrations with fiber samplers, membership tests, base
projections, and fiber-distance statistics.

Scalar conventions
------------------
Scalars act on the right, so the fiber through x is the orbit of x under
unit complex numbers (great circles), unit quaternions (great 3-spheres),
or, on S^15, the octonionic parametrization below. Symmetries then act on
the left; see :mod:`hopflab.symmetry`.

Concretely, the complex structure J on R^(2n+2) multiplies consecutive
coordinate pairs by i with the sign alternating between pairs. On R^4 and
R^8 this is exactly right quaternion multiplication by i in the
coordinates of :mod:`hopflab.algebra`, which makes the circle fibers of
S^3 and S^7 right scalar orbits, carried onto each other by left
multiplication.

The octonionic fibration of S^15 splits R^16 = O x O. A base point on
S^8 is (2 a conj(b), |a|^2 - |b|^2); writing it as (2 c s w, c^2 - s^2)
with c = cos(t), s = sin(t), t in [0, pi/2] and w a unit octonion, the
fiber is {(c u, s (conj(w) u)) : u a unit octonion}, a great 7-sphere.
At the poles (s = 0 or c = 0) the fiber degenerates to one coordinate
O-axis and w is immaterial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import TOL_UNIT, UnitVector, as_coords, as_rng


def complex_structure(x: np.ndarray) -> np.ndarray:
    """Apply the complex structure J (blockwise right multiplication by i).

    Coordinates are paired consecutively; pair m is multiplied by
    (-1)^m i, so even pairs map (a, b) -> (-b, a) and odd pairs map
    (a, b) -> (b, -a).
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 2:
        raise ValueError("the complex structure needs an even number of coordinates")
    pairs = x.reshape(x.shape[:-1] + (-1, 2))
    out = np.empty_like(pairs)
    out[..., 0] = -pairs[..., 1]
    out[..., 1] = pairs[..., 0]
    out[..., 1::2, :] *= -1.0
    return out.reshape(x.shape)


def quat_structure(x: np.ndarray, unit: str) -> np.ndarray:
    """Right quaternion multiplication of R^(4m) by a basis unit i, j, or k.

    Coordinates are grouped into consecutive quaternion blocks and each
    block is multiplied on the right.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 4:
        raise ValueError("the quaternionic structure needs 4m coordinates")
    w, a, b, c = (x[..., 0::4], x[..., 1::4], x[..., 2::4], x[..., 3::4])
    out = np.empty_like(x)
    if unit == "i":
        out[..., 0::4], out[..., 1::4], out[..., 2::4], out[..., 3::4] = -a, w, c, -b
    elif unit == "j":
        out[..., 0::4], out[..., 1::4], out[..., 2::4], out[..., 3::4] = -b, -c, w, a
    elif unit == "k":
        out[..., 0::4], out[..., 1::4], out[..., 2::4], out[..., 3::4] = -c, b, -a, w
    else:
        raise ValueError("unit must be one of 'i', 'j', 'k'")
    return out


class FiberSampler:
    """A great subsphere of S^ambient_dim, sampled through an orthonormal basis.

    The fiber is span(basis) intersected with the unit sphere. ``sample``
    maps a point t of the round parameter sphere S^fiber_dim to the fiber
    point sum_i t_i basis_i, which is a linear isometry of spheres.
    """

    __slots__ = ("ambient_dim", "fiber_dim", "basis")

    def __init__(self, basis, tol: float = TOL_UNIT):
        basis = np.array(basis, dtype=float)
        if basis.ndim != 2 or basis.shape[0] > basis.shape[1]:
            raise ValueError("basis rows must span a subspace of the ambient space")
        gram = basis @ basis.T
        if np.max(np.abs(gram - np.eye(basis.shape[0]))) > tol:
            raise ValueError("fiber basis must be orthonormal")
        basis.flags.writeable = False
        self.basis = basis
        self.fiber_dim = basis.shape[0] - 1
        self.ambient_dim = basis.shape[1] - 1

    def sample(self, t) -> UnitVector:
        """Fiber point for a parameter t on the unit fiber_dim-sphere."""
        ta = as_coords(t, self.fiber_dim + 1)
        return UnitVector(ta @ self.basis, tol=1e-6)

    def sample_batch(self, t: np.ndarray) -> np.ndarray:
        """(n, fiber_dim+1) parameters -> (n, ambient_dim+1) fiber points."""
        t = np.asarray(t, dtype=float)
        return t @ self.basis

    def grid_points(self, n: int, seed: int = 0) -> np.ndarray:
        """n deterministic sample points covering the fiber.

        Circles use an even angle grid (so the rows trace the fiber in
        order); higher-dimensional fibers use seeded uniform parameters.
        """
        if self.fiber_dim == 1:
            theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
            t = np.column_stack([np.cos(theta), np.sin(theta)])
        else:
            rng = as_rng(seed)
            t = rng.standard_normal((n, self.fiber_dim + 1))
            t /= np.linalg.norm(t, axis=1)[:, None]
        return self.sample_batch(t)

    def projector(self) -> np.ndarray:
        return self.basis.T @ self.basis

    def min_distance_to(self, p) -> float:
        """Geodesic distance from a sphere point p to this fiber.

        The maximum of <p, q> over unit q in span(basis) is the norm of
        the orthogonal projection of p, so the distance (at most pi/2 for
        any great subsphere) has cosine ``|proj|`` and sine ``|perp|``.
        atan2 of the two stays accurate down to zero distance, where a
        plain arccos would lose half the digits.
        """
        pa = as_coords(p, self.ambient_dim + 1)
        coeff = self.basis @ pa
        perp = pa - coeff @ self.basis
        return float(np.arctan2(np.linalg.norm(perp), np.linalg.norm(coeff)))

    def min_distances_to(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized ``min_distance_to`` for an (n, ambient_dim+1) array."""
        pts = np.asarray(pts, dtype=float)
        coeff = pts @ self.basis.T
        perp = pts - coeff @ self.basis
        return np.arctan2(np.linalg.norm(perp, axis=1), np.linalg.norm(coeff, axis=1))

    def contains(self, p, tol: float = TOL_UNIT) -> bool:
        pa = as_coords(p, self.ambient_dim + 1)
        if abs(np.linalg.norm(pa) - 1.0) > tol:
            return False
        return self.min_distance_to(pa) <= tol

    def span_equal(self, other: "FiberSampler", tol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self.projector() - other.projector())) <= tol)


@dataclass(frozen=True)
class BasePoint:
    """A point of the base space of a Hopf fibration.

    ``kind`` is one of ``complex-projective``, ``quaternionic-projective``,
    or ``sphere8``. For the projective kinds the representative is only
    defined up to a unit scalar acting on the right, so equality compares
    the projector onto the scalar orbit rather than the representatives.
    """

    kind: str
    representative: np.ndarray

    def __post_init__(self):
        rep = np.array(self.representative, dtype=float)
        if abs(np.linalg.norm(rep) - 1.0) > TOL_UNIT:
            raise ValueError("base-point representatives must be unit vectors")
        rep.flags.writeable = False
        object.__setattr__(self, "representative", rep)

    def orbit_basis(self) -> np.ndarray:
        x = self.representative
        if self.kind == "complex-projective":
            return np.stack([x, complex_structure(x)])
        if self.kind == "quaternionic-projective":
            return np.stack([x, quat_structure(x, "i"), quat_structure(x, "j"), quat_structure(x, "k")])
        if self.kind == "sphere8":
            return x[None, :]
        raise ValueError(f"unknown base-point kind {self.kind!r}")

    def equiv(self, other: "BasePoint", tol: float = 1e-9) -> bool:
        if self.kind != other.kind:
            return False
        pa = self.orbit_basis()
        pb = other.orbit_basis()
        return bool(np.max(np.abs(pa.T @ pa - pb.T @ pb)) <= tol)


def _check_unit(x, what: str) -> np.ndarray:
    xa = as_coords(x)
    if abs(np.linalg.norm(xa) - 1.0) > TOL_UNIT:
        raise ValueError(f"{what} must be a unit vector")
    return xa


def complex_hopf_fiber(x) -> FiberSampler:
    """The great-circle fiber {cos(t) x + sin(t) Jx} through x in S^(2n+1)."""
    xa = _check_unit(x, "the fiber base point")
    if xa.size % 2 or xa.size < 4:
        raise ValueError("complex Hopf fibers live on odd spheres S^3, S^5, ...")
    return FiberSampler(np.stack([xa, complex_structure(xa)]))


def quaternionic_hopf_fiber(x) -> FiberSampler:
    """The great 3-sphere fiber {x q : q a unit quaternion} through x in S^(4n+3)."""
    xa = _check_unit(x, "the fiber base point")
    if xa.size % 4:
        raise ValueError("quaternionic Hopf fibers live on spheres S^3, S^7, S^11, ...")
    basis = np.stack([xa, quat_structure(xa, "i"), quat_structure(xa, "j"), quat_structure(xa, "k")])
    return FiberSampler(basis)


def complex_hopf_base(x) -> BasePoint:
    """Project x in S^(2n+1) to its complex-projective base point."""
    xa = _check_unit(x, "the point")
    if xa.size % 2 or xa.size < 4:
        raise ValueError("complex Hopf fibers live on odd spheres S^3, S^5, ...")
    return BasePoint("complex-projective", xa)


def quaternionic_hopf_base(x) -> BasePoint:
    """Project x in S^(4n+3) to its quaternionic-projective base point."""
    xa = _check_unit(x, "the point")
    if xa.size % 4:
        raise ValueError("quaternionic Hopf fibers live on spheres S^3, S^7, S^11, ...")
    return BasePoint("quaternionic-projective", xa)


def octonionic_hopf_map(a, b) -> BasePoint:
    """Map a pair of octonions with |a|^2 + |b|^2 = 1 to S^8.

    The image is (2 a conj(b), |a|^2 - |b|^2) in O x R = R^9; its norm is
    |a|^2 + |b|^2 by the composition law, so the output is a unit
    9-vector.
    """
    aa = as_coords(a, 8)
    ba = as_coords(b, 8)
    na2 = float(aa @ aa)
    nb2 = float(ba @ ba)
    if abs(na2 + nb2 - 1.0) > TOL_UNIT:
        raise ValueError("the pair must satisfy |a|^2 + |b|^2 = 1")
    prod = kernels.oct_mul(aa, kernels.oct_conj(ba))
    return BasePoint("sphere8", np.concatenate([2.0 * prod, [na2 - nb2]]))


def octonionic_hopf_map_coords(p) -> np.ndarray:
    """The S^15 -> S^8 Hopf map on raw 16-vectors (first octonion, second octonion)."""
    pa = as_coords(p, 16)
    return octonionic_hopf_map(pa[:8], pa[8:]).representative


def octonionic_hopf_fiber(p) -> FiberSampler:
    """The great 7-sphere fiber of the octonionic Hopf map over p in S^8.

    For p = (2 c s w, c^2 - s^2) the fiber is {(c u, s (conj(w) u))};
    every sampled point maps back to p. At the poles the fiber is one
    coordinate O-axis sphere and w drops out.
    """
    if isinstance(p, BasePoint):
        if p.kind != "sphere8":
            raise ValueError("octonionic fibers live over sphere8 base points")
        pa = p.representative
    else:
        pa = _check_unit(p, "the base point")
        if pa.size != 9:
            raise ValueError("octonionic base points are unit 9-vectors")
    last = float(np.clip(pa[8], -1.0, 1.0))
    t = 0.5 * np.arccos(last)
    c, s = np.cos(t), np.sin(t)
    sin2t = np.sqrt(max(0.0, 1.0 - last * last))
    if sin2t > 1e-12:
        w = pa[:8] / sin2t
    else:
        w = np.zeros(8)
        w[0] = 1.0
    wc = kernels.oct_conj(w)
    eye = np.eye(8)
    basis = np.concatenate([c * eye, s * kernels.oct_mul(wc, eye)], axis=1)
    return FiberSampler(basis)


@dataclass(frozen=True)
class FiberDistanceResult:
    """Distance statistics between two fibers.

    ``min_distance`` is the smallest distance found from a sampled point
    of F to G; ``max_over_basepoints`` is the largest of the pointwise
    distances d(p, G) over sampled p in F; ``spread`` is their gap, which
    vanishes exactly when the sampled pointwise distances are constant
    (parallel fibers).
    """

    min_distance: float
    max_over_basepoints: float
    spread: float


def fiber_distance(f: FiberSampler, g: FiberSampler, grid: int) -> FiberDistanceResult:
    """Pointwise fiber-distance statistics over a grid of sample points.

    ``grid`` points are sampled on F; the distance from each to G is the
    exact arccos of the projection norm onto span(G), so the inner
    minimization over G carries no grid error.
    """
    if f.ambient_dim != g.ambient_dim:
        raise ValueError("fibers must live in the same ambient sphere")
    if grid < 16:
        raise ValueError("grid must be at least 16")
    pts = f.grid_points(grid)
    pointwise = g.min_distances_to(pts)
    return FiberDistanceResult(
        min_distance=float(pointwise.min()),
        max_over_basepoints=float(pointwise.max()),
        spread=float(pointwise.max() - pointwise.min()),
    )
