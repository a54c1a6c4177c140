import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from hopflab import kernels
from hopflab.algebra import Octonion, haar_unit_quaternions, random_unit_vectors
from hopflab.grassmann import smallest_principal_angle_batch
from hopflab.hopf import (
    FiberSampler,
    complex_hopf_base,
    complex_hopf_fiber,
    complex_structure,
    fiber_distance,
    octonionic_hopf_fiber,
    octonionic_hopf_map,
    octonionic_hopf_map_coords,
    quat_structure,
    quaternionic_hopf_base,
    quaternionic_hopf_fiber,
)

E1 = np.array([1.0, 0.0, 0.0, 0.0])


def test_complex_fiber_through_first_axis():
    fib = complex_hopf_fiber(E1)
    assert fib.fiber_dim == 1 and fib.ambient_dim == 3
    # the circle passes through (1,0,0,0) and (0,1,0,0)
    assert fib.contains([1.0, 0, 0, 0])
    assert fib.contains([0.0, 1, 0, 0])
    theta = np.linspace(0, 2 * np.pi, 17)
    pts = fib.sample_batch(np.column_stack([np.cos(theta), np.sin(theta)]))
    np.testing.assert_allclose(pts[:, 2:], 0.0, atol=1e-15)


def test_complex_fiber_samples_unit(rng):
    for dim in (3, 5, 7):
        x = random_unit_vectors(dim, rng, 1)[0]
        pts = complex_hopf_fiber(x).grid_points(64)
        np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)


def test_complex_fiber_tangent_is_structure_image(rng):
    # central difference of the sampler at theta = 0 against J x
    h = 1e-5
    worst = 0.0
    for x in random_unit_vectors(5, rng, 1000):
        fib = complex_hopf_fiber(x)
        plus = fib.sample_batch(np.array([[np.cos(h), np.sin(h)]]))[0]
        minus = fib.sample_batch(np.array([[np.cos(h), -np.sin(h)]]))[0]
        tangent = (plus - minus) / (2 * h)
        worst = max(worst, float(np.max(np.abs(tangent - complex_structure(x)))))
    assert worst < 1e-9


def test_complex_fiber_rejects_bad_input():
    with pytest.raises(ValueError):
        complex_hopf_fiber([1.0, 1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        complex_hopf_fiber(np.array([1.0, 0, 0, 0, 0]))  # S^4 is even


def test_quaternionic_fiber_through_first_axis():
    x = np.zeros(8)
    x[0] = 1.0
    fib = quaternionic_hopf_fiber(x)
    assert fib.fiber_dim == 3
    pts = fib.grid_points(128)
    np.testing.assert_allclose(pts[:, 4:], 0.0, atol=1e-15)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)


def test_quaternionic_tangent_plane(rng):
    # finite-difference tangents at x stay in span{xi, xj, xk}
    h = 1e-5
    x = random_unit_vectors(7, rng, 1)[0]
    fib = quaternionic_hopf_fiber(x)
    span = np.stack([quat_structure(x, u) for u in "ijk"])
    for direction in range(1, 4):
        t_plus = np.zeros(4)
        t_plus[0], t_plus[direction] = np.cos(h), np.sin(h)
        t_minus = t_plus.copy()
        t_minus[direction] = -np.sin(h)
        tangent = (fib.sample_batch(t_plus[None])[0] - fib.sample_batch(t_minus[None])[0]) / (2 * h)
        residual = tangent - span.T @ (span @ tangent)
        assert np.linalg.norm(residual) < 1e-6


def test_quaternionic_reparametrization_same_point_set(rng):
    # the fiber through x q0 traces the same set as the fiber through x
    x = random_unit_vectors(7, rng, 1)[0]
    fib_x = quaternionic_hopf_fiber(x)
    q0 = haar_unit_quaternions(rng, 1)[0]
    y = fib_x.sample_batch(q0[None])[0]
    fib_y = quaternionic_hopf_fiber(y)
    pts_x = fib_x.grid_points(1000)
    pts_y = fib_y.grid_points(1000, seed=5)
    hausdorff = max(np.max(fib_y.min_distances_to(pts_x)), np.max(fib_x.min_distances_to(pts_y)))
    assert hausdorff < 1e-9
    assert fib_x.span_equal(fib_y)


def test_fiber_through_consistency_complex(rng):
    x = random_unit_vectors(3, rng, 1)[0]
    fib = complex_hopf_fiber(x)
    y = fib.grid_points(7)[3]
    assert fib.span_equal(complex_hopf_fiber(y), tol=1e-9)


def test_octonionic_map_north_pole():
    one = Octonion.basis(0)
    zero = Octonion([0.0] * 8)
    base = octonionic_hopf_map(one, zero)
    expected = np.zeros(9)
    expected[8] = 1.0
    np.testing.assert_allclose(base.representative, expected, atol=1e-15)


def test_octonionic_map_equator():
    s = 1.0 / np.sqrt(2.0)
    base = octonionic_hopf_map(s * Octonion.basis(0), s * Octonion.basis(0))
    expected = np.zeros(9)
    expected[0] = 1.0
    np.testing.assert_allclose(base.representative, expected, atol=1e-12)


def test_octonionic_map_output_unit(rng):
    pairs = random_unit_vectors(15, rng, 10**4)
    norms = np.empty(len(pairs))
    for row, p in enumerate(pairs):
        norms[row] = np.linalg.norm(octonionic_hopf_map_coords(p))
    np.testing.assert_allclose(norms, 1.0, atol=1e-12)


def test_octonionic_map_rejects_non_unit():
    with pytest.raises(ValueError):
        octonionic_hopf_map(Octonion.basis(0), Octonion.basis(1))


def test_octonionic_fiber_north_pole():
    north = np.zeros(9)
    north[8] = 1.0
    fib = octonionic_hopf_fiber(north)
    pts = fib.grid_points(64)
    np.testing.assert_allclose(pts[:, 8:], 0.0, atol=1e-15)


def test_octonionic_fiber_round_trip(rng):
    p = random_unit_vectors(8, rng, 1)[0]
    fib = octonionic_hopf_fiber(p)
    pts = fib.grid_points(1000)
    worst = max(np.linalg.norm(octonionic_hopf_map_coords(pt) - p) for pt in pts)
    assert worst < 1e-9


def test_octonionic_fiber_basis_orthonormal(rng):
    # a great 7-sphere: the 8 x 16 basis has orthonormal rows
    p = random_unit_vectors(8, rng, 1)[0]
    fib = octonionic_hopf_fiber(p)
    assert fib.basis.shape == (8, 16)
    np.testing.assert_allclose(fib.basis @ fib.basis.T, np.eye(8), atol=1e-12)


def test_fiber_distance_same_fiber():
    fib = complex_hopf_fiber(E1)
    result = fiber_distance(fib, fib, 64)
    assert result.min_distance == 0.0
    assert result.spread < 1e-12


def test_fiber_distance_orthogonal_circles():
    # fibers over antipodal base points sit at the maximal distance pi/2;
    # the dense-grid brute force agrees because every dot product vanishes
    f = complex_hopf_fiber(np.array([1.0, 0, 0, 0]))
    g = complex_hopf_fiber(np.array([0.0, 0, 1, 0]))
    result = fiber_distance(f, g, 256)
    assert abs(result.min_distance - np.pi / 2) < 1e-12
    assert result.spread < 1e-3
    brute = np.arccos(np.clip(np.max(kernels.row_max_dot(f.grid_points(1024), g.grid_points(1024))), -1, 1))
    assert abs(brute - np.pi / 2) < 1e-12


def test_fiber_distance_matches_refined_brute_force():
    # brute force over a 1024^2 pair grid, then golden-section refinement
    # of both circle parameters, reproduces the projection-formula minimum
    f = complex_hopf_fiber(haar_unit_quaternions(123, 1)[0])
    g = complex_hopf_fiber(haar_unit_quaternions(124, 1)[0])

    def pair_distance(theta, phi):
        p = np.cos(theta) * f.basis[0] + np.sin(theta) * f.basis[1]
        q = np.cos(phi) * g.basis[0] + np.sin(phi) * g.basis[1]
        return np.arccos(np.clip(p @ q, -1, 1))

    grid = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
    dots = f.grid_points(1024) @ g.grid_points(1024).T
    it, ip = np.unravel_index(np.argmax(dots), dots.shape)
    theta, phi = grid[it], grid[ip]
    step = 2 * np.pi / 1024
    for _ in range(4):
        theta = minimize_scalar(
            lambda t: pair_distance(t, phi), bounds=(theta - step, theta + step), method="bounded",
            options={"xatol": 1e-14},
        ).x
        phi = minimize_scalar(
            lambda s: pair_distance(theta, s), bounds=(phi - step, phi + step), method="bounded",
            options={"xatol": 1e-14},
        ).x
    refined = pair_distance(theta, phi)
    exact = fiber_distance(f, g, 256).min_distance
    assert abs(refined - exact) < 1e-9


def test_fiber_distance_dimension_mismatch(rng):
    f = complex_hopf_fiber(random_unit_vectors(3, rng, 1)[0])
    g = complex_hopf_fiber(random_unit_vectors(5, rng, 1)[0])
    with pytest.raises(ValueError):
        fiber_distance(f, g, 64)
    with pytest.raises(ValueError):
        fiber_distance(f, f, 8)


def test_complex_fibers_disjoint(rng):
    xs = random_unit_vectors(3, rng, 2000)
    ys = random_unit_vectors(3, rng, 2000)
    bases_x = np.stack([np.stack([x, complex_structure(x)]) for x in xs])
    bases_y = np.stack([np.stack([y, complex_structure(y)]) for y in ys])
    same = smallest_principal_angle_batch(bases_x, bases_y) <= 1e-6
    # distinct fibers (all but coincidences) never share a direction
    distinct = np.linalg.norm(
        np.einsum("nij,nkj->nik", bases_x, bases_x) - np.einsum("nij,nkj->nik", bases_y, bases_y),
        axis=(1, 2),
    ) > 1e-9
    assert not np.any(same & distinct)


def test_base_point_equality_mod_scalar(rng):
    x = random_unit_vectors(3, rng, 1)[0]
    theta = 1.234
    x_rot = np.cos(theta) * x + np.sin(theta) * complex_structure(x)
    assert complex_hopf_base(x).equiv(complex_hopf_base(x_rot))
    y = random_unit_vectors(3, rng, 1)[0]
    assert not complex_hopf_base(x).equiv(complex_hopf_base(y))


def test_quaternionic_base_point_equality(rng):
    x = random_unit_vectors(7, rng, 1)[0]
    fib = quaternionic_hopf_fiber(x)
    y = fib.grid_points(5, seed=3)[2]
    assert quaternionic_hopf_base(x).equiv(quaternionic_hopf_base(y))


def test_fiber_sampler_validates_basis():
    with pytest.raises(ValueError):
        FiberSampler(np.array([[1.0, 0, 0, 0], [1.0, 0, 0, 0]]))
