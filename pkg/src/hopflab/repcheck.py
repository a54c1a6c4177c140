"""Characters of compact groups, Haar Monte Carlo indicators classifying
representation type (real / complex / quaternionic), tensor-product type
arithmetic, and a verified table of low-dimensional irreducible
representations.

The indicator of a character chi is the Haar average of chi(g^2); it is
1, 0, or -1 according to whether the irreducible representation is of
real, complex, or quaternionic type. Sampling is seeded and the sample
set is materialized before evaluation, so estimates do not depend on how
the evaluation is partitioned across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import as_rng, haar_unit_quaternions
from . import kernels


class CharacterSanityError(RuntimeError):
    """The imaginary part of an indicator mean exceeded its noise level."""


# ---------------------------------------------------------------------------
# Haar samplers.


@dataclass(frozen=True)
class GroupSampler:
    """A compact group with a seeded Haar sampler for its defining matrices."""

    group_id: str
    dim: int
    _draw: callable

    def draw(self, rng, n: int):
        """n Haar samples as an (n, dim, dim) complex array (or a tuple of
        such arrays for product groups)."""
        return self._draw(as_rng(rng), n)


def su2_matrices(quats: np.ndarray) -> np.ndarray:
    """Embed unit quaternions w + xi + yj + zk as SU(2) matrices
    [[w + xi, y + zi], [-(y - zi), w - xi]]."""
    w, x, y, z = quats[:, 0], quats[:, 1], quats[:, 2], quats[:, 3]
    a = w + 1j * x
    b = y + 1j * z
    out = np.empty((len(quats), 2, 2), dtype=complex)
    out[:, 0, 0] = a
    out[:, 0, 1] = b
    out[:, 1, 0] = -np.conj(b)
    out[:, 1, 1] = np.conj(a)
    return out


def so3_matrices(quats: np.ndarray) -> np.ndarray:
    """Rotation matrices of unit quaternions (the 2-to-1 pushforward of the
    uniform measure on S^3 is Haar on SO(3))."""
    w, x, y, z = quats[:, 0], quats[:, 1], quats[:, 2], quats[:, 3]
    out = np.empty((len(quats), 3, 3))
    out[:, 0, 0] = 1 - 2 * (y * y + z * z)
    out[:, 0, 1] = 2 * (x * y - w * z)
    out[:, 0, 2] = 2 * (x * z + w * y)
    out[:, 1, 0] = 2 * (x * y + w * z)
    out[:, 1, 1] = 1 - 2 * (x * x + z * z)
    out[:, 1, 2] = 2 * (y * z - w * x)
    out[:, 2, 0] = 2 * (x * z - w * y)
    out[:, 2, 1] = 2 * (y * z + w * x)
    out[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return out.astype(complex)


def _draw_su2(rng, n):
    return su2_matrices(haar_unit_quaternions(rng, n))


def _draw_so3(rng, n):
    return so3_matrices(haar_unit_quaternions(rng, n))


def _draw_u1(rng, n):
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return np.exp(1j * theta)[:, None, None]


def _draw_su3(rng, n):
    """Haar SU(3) via QR of complex Ginibre matrices with phase correction,
    then a determinant-normalizing scalar."""
    z = (rng.standard_normal((n, 3, 3)) + 1j * rng.standard_normal((n, 3, 3))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.einsum("nii->ni", r)
    q = q * (d / np.abs(d))[:, None, :]
    det = np.linalg.det(q)
    q = q * np.exp(-1j * np.angle(det) / 3.0)[:, None, None]
    return q


def _quat_dot(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Quaternionic inner product sum_i conj(u_i) v_i over (n, rows, 4) arrays."""
    return kernels.quat_mul(kernels.quat_conj(u), v).sum(axis=1)


def _draw_sp2_quaternion(rng, n):
    """Haar Sp(2) as quaternionic 2x2 matrices, shaped (n, row, col, 4).

    Modified Gram-Schmidt on quaternionic Gaussian columns; normalizing by
    positive real norms makes the decomposition unique, so the orthonormal
    factor is Haar.
    """
    g = rng.standard_normal((n, 2, 2, 4))
    c0 = g[:, :, 0, :]
    c1 = g[:, :, 1, :]
    v0 = c0 / np.linalg.norm(c0.reshape(n, -1), axis=1)[:, None, None]
    inner = _quat_dot(v0, c1)  # (n, 4)
    c1 = c1 - kernels.quat_mul(v0, inner[:, None, :])
    v1 = c1 / np.linalg.norm(c1.reshape(n, -1), axis=1)[:, None, None]
    return np.stack([v0, v1], axis=2)


def quaternion_matrix_to_complex(qm: np.ndarray) -> np.ndarray:
    """Embed an (n, r, c, 4) quaternionic matrix as (n, 2r, 2c) complex blocks."""
    n, rows, cols, _ = qm.shape
    w, x, y, z = qm[..., 0], qm[..., 1], qm[..., 2], qm[..., 3]
    a = w + 1j * x
    b = y + 1j * z
    out = np.empty((n, 2 * rows, 2 * cols), dtype=complex)
    out[:, 0::2, 0::2] = a
    out[:, 0::2, 1::2] = b
    out[:, 1::2, 0::2] = -np.conj(b)
    out[:, 1::2, 1::2] = np.conj(a)
    return out


def _draw_sp2(rng, n):
    return quaternion_matrix_to_complex(_draw_sp2_quaternion(rng, n))


_SAMPLERS = {
    "SU2": ("SU2", 2, _draw_su2),
    "SO3": ("SO3", 3, _draw_so3),
    "U1": ("U1", 1, _draw_u1),
    "SU3": ("SU3", 3, _draw_su3),
    "SP2": ("Sp2", 4, _draw_sp2),
}


def group_sampler(group_id: str) -> GroupSampler:
    """Sampler for one of SU2, SO3, U1, SU3, Sp2."""
    key = group_id.upper().replace("(", "").replace(")", "")
    if key not in _SAMPLERS:
        raise ValueError(f"unsupported group {group_id!r}")
    name, dim, draw = _SAMPLERS[key]
    return GroupSampler(group_id=name, dim=dim, _draw=draw)


def product_sampler(a: GroupSampler, b: GroupSampler) -> GroupSampler:
    """Sampler for the product group; elements are pairs of matrices and the
    two factors draw from independent child streams."""

    def draw(rng, n):
        child_a, child_b = [as_rng(s) for s in rng.spawn(2)]
        return a.draw(child_a, n), b.draw(child_b, n)

    return GroupSampler(group_id=f"{a.group_id}x{b.group_id}", dim=a.dim * b.dim, _draw=draw)


# ---------------------------------------------------------------------------
# Characters.


@dataclass(frozen=True)
class Character:
    """A class function chi(g) = trace of g in a named representation."""

    group_id: str
    rep_id: str
    dim: int
    _fn: callable

    def eval_batch(self, batch) -> np.ndarray:
        return self._fn(batch)

    def eval(self, g) -> complex:
        if isinstance(g, tuple):
            return complex(self._fn(tuple(part[None] for part in g))[0])
        return complex(self._fn(np.asarray(g)[None])[0])


def _trace(batch):
    return np.einsum("nii->n", np.asarray(batch))


def character(group_id: str, rep_id: str) -> Character:
    """Characters of the named representations.

    Supported rep_ids: ``trivial`` for every group; ``defining`` (the
    trace); ``conjugate`` (conjugate of the defining, SU3); ``adjoint``
    (|trace|^2 - 1, SU2 and SU3); ``vector`` as an alias of the SO3
    defining representation.
    """
    gid = group_sampler(group_id).group_id
    rep = rep_id.lower()
    if rep == "trivial":
        return Character(gid, "trivial", 1, lambda b: np.ones(_batch_len(b), dtype=complex))
    if rep in ("defining", "vector"):
        if rep == "vector" and gid != "SO3":
            raise ValueError("'vector' names the defining representation of SO3")
        dim = {"SU2": 2, "SO3": 3, "U1": 1, "SU3": 3, "Sp2": 4}[gid]
        return Character(gid, rep, dim, _trace)
    if rep == "conjugate":
        if gid != "SU3":
            raise ValueError("the conjugate defining character is provided for SU3")
        return Character(gid, "conjugate", 3, lambda b: np.conj(_trace(b)))
    if rep == "adjoint":
        if gid not in ("SU2", "SU3"):
            raise ValueError("the adjoint character is provided for SU2 and SU3")
        dim = {"SU2": 3, "SU3": 8}[gid]
        return Character(gid, "adjoint", dim, lambda b: np.abs(_trace(b)) ** 2 - 1.0 + 0j)
    raise ValueError(f"unsupported representation {rep_id!r} for {group_id!r}")


def _batch_len(batch) -> int:
    if isinstance(batch, tuple):
        return len(batch[0])
    return len(batch)


def tensor_character(chi_v: Character, chi_w: Character) -> Character:
    """The character (g, h) -> chi_V(g) chi_W(h) of the tensor-product
    representation of the product group."""

    def fn(batch):
        ga, gb = batch
        return chi_v.eval_batch(ga) * chi_w.eval_batch(gb)

    return Character(
        group_id=f"{chi_v.group_id}x{chi_w.group_id}",
        rep_id=f"{chi_v.rep_id}(x){chi_w.rep_id}",
        dim=chi_v.dim * chi_w.dim,
        _fn=fn,
    )


def square_elements(batch):
    """g -> g^2, elementwise over a matrix batch or tuple of batches."""
    if isinstance(batch, tuple):
        return tuple(square_elements(part) for part in batch)
    arr = np.asarray(batch)
    return arr @ arr


# ---------------------------------------------------------------------------
# Indicators.


@dataclass(frozen=True)
class IndicatorEstimate:
    """Monte Carlo estimate of the Haar average of Re chi(g^2)."""

    estimate: float
    stderr: float
    n: int

    def nearest_type(self):
        nearest = min((-1.0, 0.0, 1.0), key=lambda v: abs(v - self.estimate))
        label = {-1.0: "quaternionic", 0.0: "complex", 1.0: "real"}[nearest]
        return nearest, label


def fs_indicator(chi: Character, sampler: GroupSampler, n: int, seed=0) -> IndicatorEstimate:
    """Estimate the type indicator of chi from n Haar samples.

    The estimate is the sample mean of Re chi(g^2) with its standard
    error. The mean of the imaginary parts must stay within 5 standard
    errors of zero; a violation signals a broken character or sampler and
    raises :class:`CharacterSanityError`.
    """
    if n < 1000:
        raise ValueError("indicator estimates need at least 1000 samples")
    rng = as_rng(seed)
    values = chi.eval_batch(square_elements(sampler.draw(rng, n)))
    re = values.real
    im = values.imag
    estimate = float(re.mean())
    stderr = float(re.std(ddof=1) / np.sqrt(n))
    im_stderr = float(im.std(ddof=1) / np.sqrt(n))
    if abs(im.mean()) > 5.0 * im_stderr + 1e-12:
        raise CharacterSanityError(
            f"imaginary part of the indicator mean is {im.mean():.3e} "
            f"with standard error {im_stderr:.3e}"
        )
    return IndicatorEstimate(estimate=estimate, stderr=stderr, n=n)


@dataclass(frozen=True)
class TensorTypeReport:
    """Factorization check for the indicator of a tensor product.

    ``indicator_tensor`` pairs the two sample streams; the grid fields
    evaluate the tensor indicator over the full product grid of a common
    subsample, where the double sum factorizes into the product of the two
    single-stream means as an arithmetic identity, checked to 1e-12.
    """

    indicator_v: float
    indicator_w: float
    indicator_product: float
    indicator_tensor: float
    indicator_tensor_grid: float
    indicator_product_grid: float
    consistent: bool
    n: int
    grid_n: int


def tensor_type_check(
    chi_v: Character,
    sampler_g: GroupSampler,
    chi_w: Character,
    sampler_h: GroupSampler,
    n: int,
    seed=0,
    grid_cap: int = 2048,
) -> TensorTypeReport:
    """Indicators of V, W, and V tensor W over shared sample streams."""
    if n < 1000:
        raise ValueError("indicator estimates need at least 1000 samples")
    child_g, child_h = [as_rng(s) for s in as_rng(seed).spawn(2)]
    vals_v = chi_v.eval_batch(square_elements(sampler_g.draw(child_g, n)))
    vals_w = chi_w.eval_batch(square_elements(sampler_h.draw(child_h, n)))
    mean_v = vals_v.mean()
    mean_w = vals_w.mean()
    m = min(n, grid_cap)
    sub_v = vals_v[:m]
    sub_w = vals_w[:m]
    grid_tensor = float(np.mean(sub_v[:, None] * sub_w[None, :]).real)
    grid_product = float((sub_v.mean() * sub_w.mean()).real)
    return TensorTypeReport(
        indicator_v=float(mean_v.real),
        indicator_w=float(mean_w.real),
        indicator_product=float((mean_v * mean_w).real),
        indicator_tensor=float((vals_v * vals_w).mean().real),
        indicator_tensor_grid=grid_tensor,
        indicator_product_grid=grid_product,
        consistent=bool(abs(grid_tensor - grid_product) < 1e-12),
        n=n,
        grid_n=m,
    )


# ---------------------------------------------------------------------------
# Low-dimensional irreducible representations.


@dataclass(frozen=True)
class IrrepFact:
    group_id: str
    dimension: int
    rep_type: str  # "real" | "complex" | "quaternionic"
    note: str = ""


def irrep_table(group_id: str) -> list:
    """Nontrivial complex irreducible representations of dimension below
    dim(G), with their types, for SU(n+1) with n <= 7, Sp(n) with n <= 3,
    and Spin(9). The entries are transcribed data, not re-derived."""
    key = group_id.upper().replace("(", "").replace(")", "")
    if key == "SPIN9":
        return [
            IrrepFact("Spin9", 9, "real", "vector representation"),
            IrrepFact("Spin9", 16, "real", "spin representation"),
        ]
    if key.startswith("SU"):
        order = int(key[2:])
        n = order - 1
        if n == 1:
            return [IrrepFact("SU2", 2, "quaternionic", "defining representation")]
        if not 2 <= n <= 7:
            raise ValueError("SU tables cover SU(2) through SU(8)")
        gid = f"SU{order}"
        third = "real" if n == 3 else "complex"
        third_note = {
            2: "conjugate of the defining representation",
            3: "real six-dimensional form",
        }.get(n, "second exterior power of the defining representation")
        facts = [
            IrrepFact(gid, n + 1, "complex", "defining representation"),
            IrrepFact(gid, (n + 1) * (n + 2) // 2, "complex", "symmetric square of the defining representation"),
            IrrepFact(gid, n * (n + 1) // 2, third, third_note),
        ]
        if n in (5, 6, 7):
            extra_type = "quaternionic" if n == 5 else "complex"
            facts.append(
                IrrepFact(gid, (n - 1) * n * (n + 1) // 6, extra_type, "third exterior power of the defining representation")
            )
        return facts
    if key.startswith("SP"):
        n = int(key[2:])
        if not 1 <= n <= 3:
            raise ValueError("Sp tables cover Sp(1) through Sp(3)")
        gid = f"Sp{n}"
        facts = [IrrepFact(gid, 2 * n, "quaternionic", "defining representation")]
        if 2 * n * n - n - 1 > 0:
            facts.append(IrrepFact(gid, 2 * n * n - n - 1, "real", "traceless second exterior power"))
        if n == 3:
            facts.append(IrrepFact(gid, 14, "quaternionic", "third fundamental representation"))
        return facts
    raise ValueError(f"unsupported group {group_id!r}")
