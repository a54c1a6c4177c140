"""Fiberwise-homogeneity witnesses and checkers.

For the Hopf fibration of S^3 the fibers are right scalar orbits, so left
multiplication by the unit quaternion y conj(x) is an isometry carrying
the fiber through x onto the fiber through y. For the line fibration of
R^3 that fills each horizontal plane with parallel lines whose angle
turns at a constant rate in the height, the witnesses are screw motions
(vertical translation coupled with the matching horizontal rotation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import IsometrySO4, Quaternion, as_coords, as_rng, random_unit_vectors
from .hopf import FiberSampler, complex_hopf_fiber

# Sampled parameter values per line; an affine map is pinned by two
# points, the extras guard against implementation slips.
LINE_SAMPLE_PARAMS = np.array([-10.0, -1.0, 0.0, 1.0, 10.0])


def hopf_transitivity_witness(x, y) -> IsometrySO4:
    """Left multiplication by y conj(x), an isometry mapping x to y and the
    Hopf fiber through x onto the fiber through y."""
    xq = Quaternion.from_array(as_coords(x, 4)).normalized()
    yq = Quaternion.from_array(as_coords(y, 4)).normalized()
    return IsometrySO4((yq * xq.conj()).normalized(), Quaternion.ONE)


@dataclass(frozen=True)
class PreservationReport:
    ok: bool
    worst_residual: float
    trials: int
    witness: np.ndarray | None


def fiber_preservation_check(fibration, g: IsometrySO4, trials: int, seed=0) -> PreservationReport:
    """Check that g maps fibers of the fibration onto fibers.

    ``fibration`` maps a point of S^3 to the FiberSampler through it. For
    sampled x and sampled points p on fiber(x), the residual is the
    distance from g p to the fiber through g x; ok means the worst
    residual stays below 1e-9. On failure the report records a witness
    point whose image leaves its target fiber.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = as_rng(seed)
    xs = random_unit_vectors(3, rng, trials)
    worst = 0.0
    witness = None
    for x in xs:
        fib = fibration(x)
        pts = fib.grid_points(8)
        target = fibration(g.apply(x))
        res = float(np.max(target.min_distances_to(g.apply(pts))))
        if res > worst:
            worst = res
            witness = x
    ok = worst < 1e-9
    return PreservationReport(ok=ok, worst_residual=worst, trials=trials, witness=None if ok else witness)


def hopf_fibration_s3(x) -> FiberSampler:
    """The standard great-circle fibration of S^3, as a point -> fiber map."""
    return complex_hopf_fiber(x)


@dataclass(frozen=True)
class Line3:
    """The line {point + t * direction} in R^3."""

    point: np.ndarray
    direction: np.ndarray

    def points(self, params=LINE_SAMPLE_PARAMS) -> np.ndarray:
        return self.point[None, :] + np.asarray(params)[:, None] * self.direction[None, :]

    def distance_to_points(self, pts: np.ndarray) -> np.ndarray:
        rel = np.asarray(pts, dtype=float) - self.point[None, :]
        along = rel @ self.direction
        perp = rel - along[:, None] * self.direction[None, :]
        return np.linalg.norm(perp, axis=1)


class LineFibrationR3:
    """Fill each horizontal plane of R^3 with parallel lines; the direction
    angle is alpha times the height of the plane."""

    __slots__ = ("alpha",)

    def __init__(self, alpha: float):
        self.alpha = float(alpha)

    def direction(self, height: float) -> np.ndarray:
        ang = self.alpha * height
        return np.array([np.cos(ang), np.sin(ang), 0.0])

    def line_through(self, p) -> Line3:
        p = np.asarray(p, dtype=float)
        if p.shape != (3,):
            raise ValueError("points of R^3 have 3 coordinates")
        return Line3(point=p, direction=self.direction(p[2]))


def figure1_fibration(alpha: float) -> LineFibrationR3:
    """The line fibration of R^3 with turning rate alpha (radians per unit height)."""
    return LineFibrationR3(alpha)


@dataclass(frozen=True)
class ScrewMotion:
    """(v, z) -> (R_{alpha t} v + w, z + t): a vertical translation coupled
    with the horizontal rotation that keeps the line fibration invariant."""

    alpha: float
    t: float
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w", np.array(self.w, dtype=float))

    def rotation(self) -> np.ndarray:
        ang = self.alpha * self.t
        c, s = np.cos(ang), np.sin(ang)
        return np.array([[c, -s], [s, c]])

    def apply(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.empty_like(pts)
        out[:, :2] = pts[:, :2] @ self.rotation().T + self.w
        out[:, 2] = pts[:, 2] + self.t
        return out

    def compose(self, other: "ScrewMotion") -> "ScrewMotion":
        """self after other; the set of screw motions is closed under composition."""
        if self.alpha != other.alpha:
            raise ValueError("screw motions must share the fibration's turning rate")
        return ScrewMotion(
            alpha=self.alpha,
            t=self.t + other.t,
            w=other.w @ self.rotation().T + self.w,
        )


def screw_motion_between(fib: LineFibrationR3, p1, p2) -> ScrewMotion:
    """The screw motion taking the fibration line through p1 to the line through p2."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    t = p2[2] - p1[2]
    ang = fib.alpha * t
    c, s = np.cos(ang), np.sin(ang)
    rot = np.array([[c, -s], [s, c]])
    return ScrewMotion(alpha=fib.alpha, t=t, w=p2[:2] - rot @ p1[:2])


@dataclass(frozen=True)
class ScrewReport:
    ok: bool
    worst_residual: float
    pairs: int


def screw_transitivity_check(fib: LineFibrationR3, pairs: int, seed=0) -> ScrewReport:
    """For random line pairs, build the screw motion between them and verify
    it maps the first line onto the second and other sampled lines to
    fibration lines."""
    if pairs < 1:
        raise ValueError("need at least one pair")
    rng = as_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        p1 = np.concatenate([rng.uniform(-5, 5, 2), rng.uniform(-3, 3, 1)])
        p2 = np.concatenate([rng.uniform(-5, 5, 2), rng.uniform(-3, 3, 1)])
        motion = screw_motion_between(fib, p1, p2)
        l1 = fib.line_through(p1)
        l2 = fib.line_through(p2)
        res = float(np.max(l2.distance_to_points(motion.apply(l1.points()))))
        worst = max(worst, res)
        # the motion must send every line of the fibration to another one
        extra = np.concatenate([rng.uniform(-5, 5, 2), rng.uniform(-3, 3, 1)])
        line = fib.line_through(extra)
        mapped = motion.apply(line.points())
        target = fib.line_through(motion.apply(extra)[0])
        worst = max(worst, float(np.max(target.distance_to_points(mapped))))
    return ScrewReport(ok=worst < 1e-12, worst_residual=worst, pairs=pairs)
