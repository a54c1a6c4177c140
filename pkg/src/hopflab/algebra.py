"""Quaternion and octonion arithmetic, points on round spheres, and
rotations of R^4 as unit-quaternion pairs.

Conventions
-----------
Quaternions use the Hamilton convention: i^2 = j^2 = k^2 = ijk = -1, so
i*j = k. Octonions are quaternion pairs under Cayley-Dickson doubling with
product (a, b)(c, d) = (a c - conj(d) b, d a + b conj(c)); the basis is
e0..e7 with e0 = 1, (e1, e2, e3) = (i, j, k) and e4 = (0, 1).

R^4 is identified with the quaternions coordinatewise: (w, x, y, z)
corresponds to w + x i + y j + z k. A rotation of R^4 is a pair (l, r) of
unit quaternions acting by v -> l v conj(r); the pairs (l, r) and
(-l, -r) give the same rotation. Both left- and right-multiplication
matrices are exposed so callers can state which scalar action they use.

All values are immutable and all functions are pure. Random sampling
takes an explicit seed or ``numpy.random.Generator``; there is no hidden
global RNG state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

# Unit/orthogonality preconditions are checked at 1e-9; algebraic
# identities are asserted at 1e-12 in the test suite.
TOL_UNIT = 1e-9
TOL_ALGEBRA = 1e-12


def as_rng(seed):
    """Coerce an int seed, None, or Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Quaternion:
    """A quaternion w + x i + y j + z k (Hamilton convention)."""

    w: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (4,):
            raise ValueError("quaternion arrays have shape (4,)")
        return cls(float(arr[0]), float(arr[1]), float(arr[2]), float(arr[3]))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2))

    def normalized(self) -> "Quaternion":
        n = self.norm()
        if n < 1e-300:
            raise ZeroDivisionError("cannot normalize the zero quaternion")
        return Quaternion(self.w / n, self.x / n, self.y / n, self.z / n)

    def is_unit(self, tol: float = TOL_UNIT) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return self + (-other)
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def isclose(self, other: "Quaternion", tol: float = TOL_ALGEBRA) -> bool:
        return bool(np.max(np.abs(self.as_array() - other.as_array())) <= tol)

    def left_matrix(self) -> np.ndarray:
        """4x4 matrix of v -> q v (columns are q * basis)."""
        w, x, y, z = self.w, self.x, self.y, self.z
        return np.array(
            [
                [w, -x, -y, -z],
                [x, w, -z, y],
                [y, z, w, -x],
                [z, -y, x, w],
            ]
        )

    def right_matrix(self) -> np.ndarray:
        """4x4 matrix of v -> v q (columns are basis * q)."""
        w, x, y, z = self.w, self.x, self.y, self.z
        return np.array(
            [
                [w, -x, -y, -z],
                [x, w, z, -y],
                [y, -z, w, x],
                [z, y, -x, w],
            ]
        )

    def rotation_matrix(self) -> np.ndarray:
        """3x3 rotation v -> q v conj(q) on the imaginary part (q unit)."""
        w, x, y, z = self.w, self.x, self.y, self.z
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ]
        )


Quaternion.ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
Quaternion.I = Quaternion(0.0, 1.0, 0.0, 0.0)
Quaternion.J = Quaternion(0.0, 0.0, 1.0, 0.0)
Quaternion.K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product of two quaternions."""
    out = kernels.quat_mul(a.as_array(), b.as_array())
    return Quaternion.from_array(out)


@dataclass(frozen=True)
class Octonion:
    """An octonion as 8 coordinates over the basis e0..e7."""

    coeffs: tuple

    def __init__(self, coeffs):
        arr = np.asarray(coeffs, dtype=float)
        if arr.shape != (8,):
            raise ValueError("octonion arrays have shape (8,)")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in arr))

    @classmethod
    def from_array(cls, arr) -> "Octonion":
        return cls(arr)

    @classmethod
    def from_quaternions(cls, a: Quaternion, b: Quaternion) -> "Octonion":
        return cls(np.concatenate([a.as_array(), b.as_array()]))

    @classmethod
    def basis(cls, k: int) -> "Octonion":
        arr = np.zeros(8)
        arr[k] = 1.0
        return cls(arr)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def halves(self):
        arr = self.as_array()
        return Quaternion.from_array(arr[:4]), Quaternion.from_array(arr[4:])

    def conj(self) -> "Octonion":
        arr = self.as_array()
        arr[1:] = -arr[1:]
        return Octonion(arr)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return oct_mul(self, other)
        if isinstance(other, (int, float)):
            return Octonion(self.as_array() * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Octonion):
            return Octonion(self.as_array() + other.as_array())
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Octonion):
            return Octonion(self.as_array() - other.as_array())
        return NotImplemented

    def __neg__(self):
        return Octonion(-self.as_array())

    def isclose(self, other: "Octonion", tol: float = TOL_ALGEBRA) -> bool:
        return bool(np.max(np.abs(self.as_array() - other.as_array())) <= tol)


def oct_mul(a: Octonion, b: Octonion) -> Octonion:
    """Cayley-Dickson product of two octonions."""
    out = kernels.oct_mul(a.as_array(), b.as_array())
    return Octonion(out)


# Octonion multiplication is alternative but not associative; this basis
# triple witnesses the failure: (e1 e2) e4 = e7 while e1 (e2 e4) = -e7.
ASSOCIATIVITY_WITNESS = (1, 2, 4)


class UnitVector:
    """A point on the round sphere S^dim, stored as a unit (dim+1)-vector."""

    __slots__ = ("coords",)

    def __init__(self, coords, tol: float = TOL_UNIT):
        arr = np.array(coords, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("unit vectors need at least 2 coordinates")
        n = np.linalg.norm(arr)
        if abs(n - 1.0) > tol:
            raise ValueError(f"coordinates have norm {n!r}, expected 1")
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    def __setattr__(self, name, value):
        raise AttributeError("UnitVector is immutable")

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    @classmethod
    def normalized(cls, arr) -> "UnitVector":
        arr = np.asarray(arr, dtype=float)
        return cls(arr / np.linalg.norm(arr))

    @classmethod
    def random(cls, dim: int, rng=None) -> "UnitVector":
        return cls(random_unit_vectors(dim, as_rng(rng), 1)[0])

    def isclose(self, other: "UnitVector", tol: float = TOL_ALGEBRA) -> bool:
        return bool(np.max(np.abs(self.coords - other.coords)) <= tol)

    def __repr__(self):
        return f"UnitVector(dim={self.dim}, coords={self.coords!r})"


def as_coords(x, expect_len: int | None = None) -> np.ndarray:
    """Coordinates of a UnitVector, Quaternion, or plain array."""
    if isinstance(x, UnitVector):
        arr = x.coords
    elif isinstance(x, Quaternion):
        arr = x.as_array()
    elif isinstance(x, Octonion):
        arr = x.as_array()
    else:
        arr = np.asarray(x, dtype=float)
    if expect_len is not None and arr.shape != (expect_len,):
        raise ValueError(f"expected a vector of length {expect_len}, got shape {arr.shape}")
    return arr


def random_unit_vectors(dim: int, rng, n: int) -> np.ndarray:
    """n uniform points on S^dim as an (n, dim+1) array."""
    rng = as_rng(rng)
    v = rng.standard_normal((n, dim + 1))
    norms = np.linalg.norm(v, axis=1)
    while np.any(norms < 1e-12):
        bad = norms < 1e-12
        v[bad] = rng.standard_normal((int(bad.sum()), dim + 1))
        norms = np.linalg.norm(v, axis=1)
    return v / norms[:, None]


def sphere_geodesic_distance(x, y) -> float:
    """Great-circle distance arccos(<x, y>) in radians.

    The dot product is clamped to [-1, 1] before arccos; floating-point
    rounding can push it past 1 by ~1e-16.
    """
    xa = as_coords(x)
    ya = as_coords(y)
    if xa.shape != ya.shape:
        raise ValueError(f"dimension mismatch: {xa.shape} vs {ya.shape}")
    return float(np.arccos(np.clip(np.dot(xa, ya), -1.0, 1.0)))


def sphere_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise geodesic distances between two (n, d) arrays of unit rows."""
    dots = np.einsum("ij,ij->i", a, b)
    return np.arccos(np.clip(dots, -1.0, 1.0))


def haar_unit_quaternion(seed) -> Quaternion:
    """One uniform (Haar) unit quaternion, deterministic given the seed.

    Sampling normalizes a 4-dimensional standard Gaussian, which is exact
    in distribution.
    """
    return Quaternion.from_array(haar_unit_quaternions(seed, 1)[0])


def haar_unit_quaternions(seed, n: int) -> np.ndarray:
    """n uniform unit quaternions as an (n, 4) array."""
    return random_unit_vectors(3, as_rng(seed), n)


@dataclass(frozen=True)
class IsometrySO4:
    """A rotation of R^4 as the pair (left, right): v -> left v conj(right)."""

    left: Quaternion
    right: Quaternion

    def __post_init__(self):
        if not (self.left.is_unit() and self.right.is_unit()):
            raise ValueError("rotation factors must be unit quaternions (within 1e-9)")

    @classmethod
    def identity(cls) -> "IsometrySO4":
        return cls(Quaternion.ONE, Quaternion.ONE)

    @classmethod
    def left_multiplication(cls, q: Quaternion) -> "IsometrySO4":
        return cls(q.normalized(), Quaternion.ONE)

    @classmethod
    def right_multiplication(cls, q: Quaternion) -> "IsometrySO4":
        """The rotation v -> v q, i.e. the pair (1, conj(q))."""
        return cls(Quaternion.ONE, q.normalized().conj())

    def compose(self, other: "IsometrySO4") -> "IsometrySO4":
        """self after other: apply(compose, v) = apply(self, apply(other, v))."""
        return IsometrySO4(self.left * other.left, self.right * other.right)

    def inverse(self) -> "IsometrySO4":
        return IsometrySO4(self.left.conj(), self.right.conj())

    def matrix(self) -> np.ndarray:
        return self.left.left_matrix() @ self.right.conj().right_matrix()

    def apply(self, v):
        """Rotate a UnitVector(3), Quaternion, or array of 4-vectors."""
        la = self.left.as_array()
        ra = self.right.as_array()
        if isinstance(v, UnitVector):
            out = kernels.rot4_apply_batch(la, ra, v.coords)
            return UnitVector(out, tol=1e-6)
        if isinstance(v, Quaternion):
            return Quaternion.from_array(kernels.rot4_apply_batch(la, ra, v.as_array()))
        return kernels.rot4_apply_batch(la, ra, np.asarray(v, dtype=float))


def rot4_apply(g: IsometrySO4, v):
    """Apply the rotation g = (left, right) to v: left v conj(right)."""
    return g.apply(v)
