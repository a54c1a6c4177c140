"""Great-circle fibrations of open sets in S^3 encoded as distance-
decreasing maps f : V subset S^2 -> S^2, with validators, numerical
differentials, the singular-value ellipse of df, the local-homogeneity
necessary condition, and the frame-curvature formula K = -a^2 - b^2.

The graph point of x in V is the moduli pair (x, f(x)) by default (domain
on the first S^2 factor); the fiber is the oriented plane recovered from
that pair. Constant maps reproduce the Hopf fibrations plane by plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import as_rng, sphere_distances
from .grassmann import ModuliPoint, OrientedPlane2, moduli_to_plane
from .hopf import FiberSampler

NORTH = np.array([0.0, 0.0, 1.0])

# The validator demands strict decrease; sampled ratios must stay below
# 1 - RATIO_STRICTNESS to count as decreasing.
RATIO_STRICTNESS = 1e-12


class MapValidationError(ValueError):
    """Raised when a map offered as distance-decreasing fails validation."""


class StepDivergenceError(RuntimeError):
    """Raised when halving the finite-difference step moves the result too much."""


class SphericalCap:
    """The open cap of polar angle < angle about an axis; angle >= pi means
    the whole sphere (no boundary)."""

    __slots__ = ("axis", "angle")

    def __init__(self, axis=NORTH, angle=np.pi):
        axis = np.asarray(axis, dtype=float)
        self.axis = axis / np.linalg.norm(axis)
        self.angle = float(angle)

    def polar_angle(self, x) -> float:
        return float(np.arccos(np.clip(np.asarray(x, float) @ self.axis, -1.0, 1.0)))

    def contains(self, x) -> bool:
        return self.angle >= np.pi or self.polar_angle(x) < self.angle

    def boundary_margin(self, x) -> float:
        if self.angle >= np.pi:
            return np.inf
        return self.angle - self.polar_angle(x)

    def sample(self, rng, n: int) -> np.ndarray:
        """n uniform points of the cap as an (n, 3) array."""
        rng = as_rng(rng)
        zmin = np.cos(min(self.angle, np.pi))
        z = rng.uniform(zmin, 1.0, size=n)
        phi = rng.uniform(0.0, 2.0 * np.pi, size=n)
        s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        local = np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
        if np.allclose(self.axis, NORTH):
            return local
        e1, e2 = _orthonormal_complement(self.axis)
        return local @ np.stack([e1, e2, self.axis])


def _orthonormal_complement(axis):
    helper = NORTH if abs(axis @ NORTH) < 0.99 else np.array([1.0, 0.0, 0.0])
    e1 = helper - (helper @ axis) * axis
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(axis, e1)


class DistanceDecreasingMap:
    """Base class for maps f : V subset S^2 -> S^2 offered to the validator.

    Subclasses provide ``eval_batch`` on (n, 3) arrays of unit rows and a
    ``domain``. Maps are assumed C^2; the differential is taken by finite
    differences.
    """

    advertised_regularity = "C2"
    domain: SphericalCap

    def eval(self, x) -> np.ndarray:
        return self.eval_batch(np.asarray(x, float)[None, :])[0]

    def eval_batch(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class ConstantMap(DistanceDecreasingMap):
    """f == value on the whole sphere: the moduli encoding of a Hopf fibration."""

    def __init__(self, value):
        value = np.asarray(value, dtype=float)
        self.value = value / np.linalg.norm(value)
        self.domain = SphericalCap(angle=np.pi)

    def eval_batch(self, pts):
        return np.broadcast_to(self.value, (len(pts), 3)).copy()


class IdentityMap(DistanceDecreasingMap):
    """f(x) = x; preserves distances, so the validator rejects it."""

    def __init__(self):
        self.domain = SphericalCap(angle=np.pi)

    def eval_batch(self, pts):
        return np.array(pts, dtype=float)


class PolarContraction(DistanceDecreasingMap):
    """Geodesic polar contraction about the north pole.

    A point at polar angle theta moves to polar angle ratio * theta on the
    same meridian. For 0 < ratio < 1 on a cap within the open hemisphere
    the map is strictly distance-decreasing; its differential has radial
    singular value ratio and azimuthal singular value
    sin(ratio * theta) / sin(theta).
    """

    def __init__(self, ratio: float, max_angle: float = np.pi / 2):
        if not 0.0 < ratio < 1.0:
            raise ValueError("contraction ratio must lie in (0, 1)")
        self.ratio = float(ratio)
        self.domain = SphericalCap(axis=NORTH, angle=float(max_angle))

    def eval_batch(self, pts):
        pts = np.asarray(pts, dtype=float)
        z = np.clip(pts[:, 2], -1.0, 1.0)
        theta = np.arccos(z)
        out = np.empty_like(pts)
        s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        safe = s > 1e-15
        ct = np.cos(self.ratio * theta)
        st = np.sin(self.ratio * theta)
        out[:, 2] = ct
        out[safe, 0] = st[safe] * pts[safe, 0] / s[safe]
        out[safe, 1] = st[safe] * pts[safe, 1] / s[safe]
        out[~safe, 0] = 0.0
        out[~safe, 1] = 0.0
        return out


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    worst_ratio: float
    witness: tuple | None
    pairs: int
    seed: int


def validate_distance_decreasing(f: DistanceDecreasingMap, pairs: int, seed=0) -> ValidationReport:
    """Check d(f(x), f(y)) < d(x, y) on seeded random point pairs of the domain.

    The report carries the worst observed ratio and the pair attaining it.
    Samples are drawn up front from a single stream, so the result does
    not depend on how evaluation is partitioned.
    """
    if pairs < 1:
        raise ValueError("need at least one pair")
    rng = as_rng(seed)
    xs = f.domain.sample(rng, pairs)
    ys = f.domain.sample(rng, pairs)
    base = sphere_distances(xs, ys)
    keep = base > 1e-12
    xs, ys, base = xs[keep], ys[keep], base[keep]
    image = sphere_distances(f.eval_batch(xs), f.eval_batch(ys))
    ratios = image / base
    if ratios.size == 0:
        return ValidationReport(True, 0.0, None, pairs, _seed_int(seed))
    worst = int(np.argmax(ratios))
    ok = bool(ratios[worst] < 1.0 - RATIO_STRICTNESS)
    return ValidationReport(
        ok=ok,
        worst_ratio=float(ratios[worst]),
        witness=(xs[worst].copy(), ys[worst].copy()),
        pairs=pairs,
        seed=_seed_int(seed),
    )


def _seed_int(seed) -> int:
    return int(seed) if isinstance(seed, (int, np.integer)) else -1


@dataclass(frozen=True)
class TangentFrame2:
    """An orthonormal tangent frame (e1, e2) at a point of S^2."""

    base: np.ndarray
    e1: np.ndarray
    e2: np.ndarray


def tangent_frame(x) -> TangentFrame2:
    """Deterministic frame at x: e1 is the normalized tangential part of the
    north-pole axis, falling back to the first coordinate axis when x is
    within ~8 degrees of vertical; e2 = x cross e1.

    No smooth global frame exists on S^2, so determinism (not continuity)
    is the contract here.
    """
    x = np.asarray(x, dtype=float)
    axis = NORTH if abs(x @ NORTH) <= 0.99 else np.array([1.0, 0.0, 0.0])
    e1 = axis - (axis @ x) * x
    e1 /= np.linalg.norm(e1)
    return TangentFrame2(base=x, e1=e1, e2=np.cross(x, e1))


def differential(f: DistanceDecreasingMap, x, h: float = 1e-5, frames=None) -> np.ndarray:
    """Central-difference differential of f at x as a 2x2 matrix.

    Columns are indexed by the frame at x, rows by the frame at f(x);
    pass ``frames=(frame_x, frame_fx)`` to override the deterministic
    frames. x must sit inside the domain with margin > 2h.
    """
    x = np.asarray(x, dtype=float)
    if f.domain.boundary_margin(x) <= 2.0 * h:
        raise ValueError("point is too close to the domain boundary for the step size")
    if frames is None:
        fr_x = tangent_frame(x)
        fr_fx = tangent_frame(f.eval(x))
    else:
        fr_x, fr_fx = frames
    out = np.empty((2, 2))
    ch, sh = np.cos(h), np.sin(h)
    for col, e in enumerate((fr_x.e1, fr_x.e2)):
        plus = f.eval(ch * x + sh * e)
        minus = f.eval(ch * x - sh * e)
        d = (plus - minus) / (2.0 * h)
        out[0, col] = d @ fr_fx.e1
        out[1, col] = d @ fr_fx.e2
    return out


@dataclass(frozen=True)
class EllipseData:
    """Image of the unit tangent circle under a 2x2 differential.

    ``axes`` rows are the preimage directions (right singular vectors) of
    the major and minor axes, in frame coordinates; they are orthogonal
    whenever the singular values are distinct.
    """

    sigma_major: float
    sigma_minor: float
    axes: np.ndarray


def ellipse(df: np.ndarray) -> EllipseData:
    """Singular-value data of a 2x2 differential."""
    df = np.asarray(df, dtype=float)
    if df.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    _, sig, vt = np.linalg.svd(df)
    return EllipseData(sigma_major=float(sig[0]), sigma_minor=float(sig[1]), axes=vt)


@dataclass(frozen=True)
class HomogeneityReport:
    constant_axes: bool
    sigma_field: np.ndarray
    spread: np.ndarray


def homogeneity_scan(f: DistanceDecreasingMap, sample_points, h: float = 1e-5, tol: float = 1e-3) -> HomogeneityReport:
    """Singular values of df over sample points, and whether they are constant.

    A False ``constant_axes`` certifies that the fibration encoded by f is
    not locally fiberwise homogeneous (the axis magnitudes of the image
    ellipse would have to be constant); True is only the unrefuted
    necessary condition. The spread tolerance is dominated by
    finite-difference error.
    """
    pts = np.asarray(sample_points, dtype=float)
    sigma = np.empty((len(pts), 2))
    for row, x in enumerate(pts):
        e = ellipse(differential(f, x, h=h))
        sigma[row] = (e.sigma_major, e.sigma_minor)
    spread = sigma.max(axis=0) - sigma.min(axis=0)
    return HomogeneityReport(
        constant_axes=bool(np.all(spread < tol)),
        sigma_field=sigma,
        spread=spread,
    )


VERDICT_HOPF = "hopf"
VERDICT_DISTANCE_PRESERVING = "distance-preserving-excluded"
VERDICT_CURVATURE = "curvature-excluded"


def classify_round_value(r: float, atol: float = 1e-6) -> str:
    """Trichotomy for a constant circular differential of radius r.

    r = 0 means df == 0, so f is constant and the fibration is Hopf.
    r = 1 would preserve all geodesic distances, contradicting strict
    decrease. 0 < r < 1 would scale the metric by r and hence curvature
    by 1/r^2 > 1, impossible for an image inside the unit sphere.
    """
    if r < -atol or r > 1.0 + atol:
        raise ValueError(f"circle radius {r!r} outside [0, 1]")
    if r <= atol:
        return VERDICT_HOPF
    if r >= 1.0 - atol:
        return VERDICT_DISTANCE_PRESERVING
    return VERDICT_CURVATURE


def round_map_classifier(f: DistanceDecreasingMap, sample_points, h: float = 1e-5, tol: float = 1e-3) -> str:
    """Classify a map whose differential ellipses are constant circles.

    Raises if the scan does not produce a constant circular field; the
    returned verdict is one of ``hopf``, ``distance-preserving-excluded``,
    ``curvature-excluded``.
    """
    report = homogeneity_scan(f, sample_points, h=h, tol=tol)
    if not report.constant_axes:
        raise ValueError("the singular-value field is not constant over the samples")
    gap = float(np.max(report.sigma_field[:, 0] - report.sigma_field[:, 1]))
    if gap > tol:
        raise ValueError("the differential ellipses are not circles")
    return classify_round_value(float(report.sigma_field.mean()), atol=tol)


def curvature_from_structure_constants(a: float, b: float) -> float:
    """Sectional curvature -a^2 - b^2 of a surface carrying an isometry-
    invariant orthonormal frame with [X, Y] = a X + b Y."""
    return -(a * a + b * b)


# ---------------------------------------------------------------------------
# Finite-difference sectional curvature on 2-d charts.


def euclidean_metric(u):
    return np.eye(2)


def euclidean_frame(u):
    return np.eye(2)


def half_plane_metric(u):
    """Hyperbolic metric (dx^2 + dy^2) / y^2 on the upper half plane."""
    y = u[1]
    return np.diag([1.0 / (y * y), 1.0 / (y * y)])


def half_plane_frame(u):
    """Orthonormal frame X = y d/dx, Y = y d/dy; [X, Y] = -X."""
    y = u[1]
    return np.diag([y, y])


def sphere_stereographic_metric(u):
    """Round unit-sphere metric in the stereographic chart."""
    s = 1.0 + u[0] * u[0] + u[1] * u[1]
    return (4.0 / (s * s)) * np.eye(2)


def sphere_stereographic_frame(u):
    s = 1.0 + u[0] * u[0] + u[1] * u[1]
    return (s / 2.0) * np.eye(2)


def _christoffel(metric, u, h):
    """Gamma[k, i, j] at u by central differences of the metric."""
    u = np.asarray(u, dtype=float)
    g = np.asarray(metric(u), dtype=float)
    ginv = np.linalg.inv(g)
    dg = np.empty((2, 2, 2))  # dg[l] = d_l g
    for l in range(2):
        e = np.zeros(2)
        e[l] = h
        dg[l] = (np.asarray(metric(u + e)) - np.asarray(metric(u - e))) / (2.0 * h)
    gamma = np.empty((2, 2, 2))
    for k in range(2):
        for i in range(2):
            for j in range(2):
                acc = 0.0
                for l in range(2):
                    acc += ginv[k, l] * (dg[i][j, l] + dg[j][i, l] - dg[l][i, j])
                gamma[k, i, j] = 0.5 * acc
    return gamma


def _sectional_once(metric, frame, p, h):
    p = np.asarray(p, dtype=float)
    g = np.asarray(metric(p), dtype=float)
    gamma = _christoffel(metric, p, h)
    dgamma = np.empty((2, 2, 2, 2))  # dgamma[m] = d_m Gamma
    for m in range(2):
        e = np.zeros(2)
        e[m] = h
        dgamma[m] = (_christoffel(metric, p + e, h) - _christoffel(metric, p - e, h)) / (2.0 * h)
    # R(d_i, d_j) d_k = R[l, i, j, k] d_l
    riem = np.empty((2, 2, 2, 2))
    for l in range(2):
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    val = dgamma[i][l, j, k] - dgamma[j][l, i, k]
                    for m in range(2):
                        val += gamma[l, i, m] * gamma[m, j, k] - gamma[l, j, m] * gamma[m, i, k]
                    riem[l, i, j, k] = val
    fr = np.asarray(frame(p), dtype=float)
    x, y = fr[:, 0], fr[:, 1]
    # K = g(R(X, Y) Y, X) for an orthonormal frame
    ryx = np.einsum("lijk,i,j,k->l", riem, x, y, y)
    return float(np.einsum("lm,l,m->", g, ryx, x))


def numeric_frame_curvature(metric, frame, p, h: float = 1e-3, divergence_tol: float = 0.05) -> float:
    """Finite-difference sectional curvature of a 2-d chart metric at p,
    evaluated on the given orthonormal frame.

    Runs the stencil at steps h and h/2 and Richardson-extrapolates;
    raises :class:`StepDivergenceError` when the two disagree badly,
    which signals a step too large for the metric's variation. Serves as
    the independent check for :func:`curvature_from_structure_constants`.
    """
    p = np.asarray(p, dtype=float)
    fr = np.asarray(frame(p), dtype=float)
    g = np.asarray(metric(p), dtype=float)
    gram = fr.T @ g @ fr
    if np.max(np.abs(gram - np.eye(2))) > 1e-6:
        raise ValueError("the frame is not orthonormal for the metric at p")
    with np.errstate(all="ignore"):
        k_h = _sectional_once(metric, frame, p, h)
        k_h2 = _sectional_once(metric, frame, p, h / 2.0)
    if not (np.isfinite(k_h) and np.isfinite(k_h2)):
        raise StepDivergenceError("the finite-difference stencil left the metric's domain")
    if abs(k_h - k_h2) > divergence_tol * (1.0 + abs(k_h2)):
        raise StepDivergenceError(
            f"curvature estimates at steps {h} and {h / 2} differ by {abs(k_h - k_h2):.3e}"
        )
    return (4.0 * k_h2 - k_h) / 3.0


# ---------------------------------------------------------------------------
# The fibration attached to a distance-decreasing map.


class MapFibration:
    """The great-circle family {moduli point (x, f(x)) : x in V}.

    Calling it at a domain point returns the FiberSampler of the oriented
    plane recovered from the graph point. ``domain_factor`` selects which
    S^2 factor carries the domain ("plus" is the first factor and the
    default).
    """

    def __init__(self, f: DistanceDecreasingMap, domain_factor: str = "plus"):
        if domain_factor not in ("plus", "minus"):
            raise ValueError("domain_factor must be 'plus' or 'minus'")
        self.map = f
        self.domain_factor = domain_factor

    def moduli_point(self, x) -> ModuliPoint:
        x = np.asarray(x, dtype=float)
        if not self.map.domain.contains(x):
            raise ValueError("point is outside the map's domain")
        fx = self.map.eval(x)
        if self.domain_factor == "plus":
            return ModuliPoint(x, fx)
        return ModuliPoint(fx, x)

    def plane(self, x) -> OrientedPlane2:
        return moduli_to_plane(self.moduli_point(x))

    def fiber(self, x) -> FiberSampler:
        return FiberSampler(self.plane(x).basis)

    def __call__(self, x) -> FiberSampler:
        return self.fiber(x)


def fibration_from_map(
    f: DistanceDecreasingMap,
    domain_factor: str = "plus",
    pairs: int = 512,
    seed=0,
) -> MapFibration:
    """Validate f and return the great-circle fibration it encodes.

    Raises :class:`MapValidationError` when the sampled validator rejects
    the map (for example the identity, which preserves distances).
    """
    report = validate_distance_decreasing(f, pairs=pairs, seed=seed)
    if not report.ok:
        raise MapValidationError(
            f"map is not strictly distance-decreasing (worst ratio {report.worst_ratio:.6f})"
        )
    return MapFibration(f, domain_factor=domain_factor)
