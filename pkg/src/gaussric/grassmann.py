"""Oriented planes, principal angles, subspace distances, and the Pluecker
embedding into the exterior algebra.

A plane is stored as an ordered orthonormal basis; the ordering carries the
orientation.  Multivectors of grade m in R^k are flat coordinate vectors of
length C(k, m) over the lexicographically ordered strictly-increasing
multi-indices, so ``e1^e2`` in R^3 is ``(1, 0, 0)`` against the basis
``(e1^e2, e1^e3, e2^e3)``.

All functions are pure and all values immutable after construction, so
everything here is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

ORTHONORMALITY_TOL = 1e-12
UNIT_NORM_TOL = 1e-8


def orthonormalize(vectors: np.ndarray) -> np.ndarray:
    """Gram-Schmidt on the rows of ``vectors`` in fixed order.

    The fixed order makes the result deterministic and smooth under smooth
    perturbations of the input (no sign or column flips, unlike QR), which
    matters when frames are finite-differenced along curves.

    Raises ValueError if the rows are linearly dependent.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    out = np.zeros_like(vectors)
    for i, v in enumerate(vectors):
        w = v - out[:i].T @ (out[:i] @ v)
        # second projection pass restores orthogonality lost to cancellation
        w = w - out[:i].T @ (out[:i] @ w)
        norm = np.linalg.norm(w)
        if norm <= 1e-12 * max(1.0, float(np.linalg.norm(v))):
            raise ValueError("vectors are linearly dependent; cannot orthonormalize")
        out[i] = w / norm
    return out


@dataclass(frozen=True)
class OrientedPlane:
    """An oriented m-dimensional subspace of R^k.

    ``basis`` holds m orthonormal rows; swapping two rows represents the same
    subspace with the opposite orientation.
    """

    basis: np.ndarray

    def __post_init__(self):
        basis = np.atleast_2d(np.asarray(self.basis, dtype=float)).copy()
        m, k = basis.shape
        if not 1 <= m <= k:
            raise ValueError(f"plane dimension {m} must lie in [1, {k}]")
        gram = basis @ basis.T
        if np.max(np.abs(gram - np.eye(m))) > ORTHONORMALITY_TOL:
            raise ValueError(
                "basis rows are not orthonormal within "
                f"{ORTHONORMALITY_TOL:g}; orthonormalize first"
            )
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def plane_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def spanning(cls, vectors) -> "OrientedPlane":
        """Plane spanned by (possibly non-orthonormal) rows, orientation from
        their order."""
        return cls(orthonormalize(vectors))


@dataclass(frozen=True)
class PrincipalCosines:
    """Cosines of the principal angles between two planes.

    Values are clamped to [0, 1] and sorted in non-increasing order; only the
    multiset is meaningful.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.sort(np.clip(np.asarray(self.values, dtype=float).ravel(), 0.0, 1.0))[::-1].copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def angles(self) -> np.ndarray:
        return np.arccos(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class MultiVector:
    """Element of the grade-m exterior power of R^k in lexicographic
    multi-index coordinates."""

    ambient_dim: int
    grade: int
    coords: np.ndarray

    def __post_init__(self):
        if not 1 <= self.grade <= self.ambient_dim:
            raise ValueError(f"grade {self.grade} must lie in [1, {self.ambient_dim}]")
        coords = np.asarray(self.coords, dtype=float).ravel().copy()
        expected = math.comb(self.ambient_dim, self.grade)
        if coords.size != expected:
            raise ValueError(
                f"expected {expected} coordinates for grade {self.grade} in "
                f"R^{self.ambient_dim}, got {coords.size}"
            )
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))

    def to_list(self) -> list:
        """JSON form: plain list of coordinates in lexicographic order."""
        return [float(c) for c in self.coords]

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.ambient_dim, self.grade, -self.coords)


@lru_cache(maxsize=None)
def lex_indices(ambient_dim: int, grade: int) -> tuple:
    """Strictly increasing multi-indices of the given grade, lexicographic."""
    return tuple(combinations(range(ambient_dim), grade))


@lru_cache(maxsize=None)
def _minor_columns(ambient_dim: int, grade: int) -> np.ndarray:
    return np.array(lex_indices(ambient_dim, grade), dtype=int)


def wedge_vectors(vectors) -> MultiVector:
    """Wedge product of the rows of ``vectors`` (g vectors in R^k).

    Coordinate on the multi-index (i_1 < ... < i_g) is the determinant of the
    g x g minor of the row matrix on columns i_1..i_g.
    """
    rows = np.atleast_2d(np.asarray(vectors, dtype=float))
    g, k = rows.shape
    cols = _minor_columns(k, g)           # (C, g)
    minors = np.swapaxes(rows[:, cols], 0, 1)  # (C, g, g)
    return MultiVector(k, g, np.linalg.det(minors))


def pluecker_embed(plane: OrientedPlane) -> MultiVector:
    """Unit multivector representing the oriented plane.

    Unit norm follows from the Cauchy-Binet identity because the basis rows
    are orthonormal.
    """
    return wedge_vectors(plane.basis)


def _check_compatible(p: OrientedPlane, q: OrientedPlane) -> None:
    if p.plane_dim != q.plane_dim or p.ambient_dim != q.ambient_dim:
        raise ValueError(
            "incompatible planes: "
            f"({p.plane_dim}, {p.ambient_dim}) vs ({q.plane_dim}, {q.ambient_dim})"
        )


def overlap_matrix(p: OrientedPlane, q: OrientedPlane) -> np.ndarray:
    """Matrix of pairwise inner products between the two ordered bases."""
    _check_compatible(p, q)
    return p.basis @ q.basis.T


def principal_cosines(p: OrientedPlane, q: OrientedPlane) -> PrincipalCosines:
    """Singular values of the overlap matrix, clamped to [0, 1].

    The clamp guards against round-off pushing a singular value a few ulp
    above 1, which would turn arccos into NaN.
    """
    return PrincipalCosines(np.linalg.svd(overlap_matrix(p, q), compute_uv=False))


def canonical_distance(p: OrientedPlane, q: OrientedPlane) -> float:
    """Root-sum-square of the principal angles, in [0, sqrt(m) pi/2].

    A local distance on oriented planes: it vanishes for the same subspace
    with either orientation.
    """
    return float(np.sqrt(np.sum(principal_cosines(p, q).angles ** 2)))


def spherical_distance(p: OrientedPlane, q: OrientedPlane) -> float:
    """arccos of the product of principal cosines, in [0, pi/2].

    Orientation-blind by construction (the cosines are unsigned); the
    orientation-sensitive counterpart is ``embedded_sphere_distance`` on the
    Pluecker images, and the two agree exactly where the Pluecker inner
    product is non-negative.
    """
    prod = float(np.prod(principal_cosines(p, q).values))
    return float(np.arccos(np.clip(prod, -1.0, 1.0)))


def multivector_inner(u: MultiVector, v: MultiVector) -> float:
    """Canonical inner product on the exterior power.

    Euclidean dot of the lexicographic coordinates; on wedges of vectors it
    equals the determinant of the pairwise inner products.
    """
    if (u.ambient_dim, u.grade) != (v.ambient_dim, v.grade):
        raise ValueError(
            "incompatible multivectors: "
            f"grade {u.grade} in R^{u.ambient_dim} vs grade {v.grade} in R^{v.ambient_dim}"
        )
    return float(u.coords @ v.coords)


def embedded_sphere_distance(u: MultiVector, v: MultiVector) -> float:
    """Great-circle distance between unit multivectors, in [0, pi]."""
    for w in (u, v):
        if abs(w.norm() - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"not on sphere: multivector norm {w.norm()!r}")
    return float(np.arccos(np.clip(multivector_inner(u, v), -1.0, 1.0)))


def _permutation_sign(perm) -> float:
    inversions = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inversions += 1
    return -1.0 if inversions % 2 else 1.0


@lru_cache(maxsize=None)
def _hodge_table(ambient_dim: int, grade: int):
    source = lex_indices(ambient_dim, grade)
    target_pos = {idx: i for i, idx in enumerate(lex_indices(ambient_dim, ambient_dim - grade))}
    positions = np.empty(len(source), dtype=int)
    signs = np.empty(len(source), dtype=float)
    for i, idx in enumerate(source):
        comp = tuple(sorted(set(range(ambient_dim)) - set(idx)))
        positions[i] = target_pos[comp]
        signs[i] = _permutation_sign(idx + comp)
    return positions, signs


def hodge_complement(w: MultiVector) -> MultiVector:
    """Oriented orthogonal complement of a unit decomposable multivector.

    For unit decomposable w of grade g < k this is the unit decomposable of
    grade k - g spanning the orthogonal complement, signed so that
    ``w ^ hodge_complement(w) = +e_1^...^e_k``.  Applying it twice gives back
    ``(-1)^(g(k-g)) w``.  Decomposability is the caller's responsibility:
    frames produced inside this package always wedge to decomposables.
    """
    if abs(w.norm() - 1.0) > UNIT_NORM_TOL:
        raise ValueError(f"hodge complement requires a unit multivector, norm {w.norm()!r}")
    if w.grade >= w.ambient_dim:
        raise ValueError("hodge complement requires grade < ambient dimension")
    positions, signs = _hodge_table(w.ambient_dim, w.grade)
    out = np.zeros(math.comb(w.ambient_dim, w.ambient_dim - w.grade))
    out[positions] = signs * w.coords
    return MultiVector(w.ambient_dim, w.ambient_dim - w.grade, out)


def random_plane(rng: np.random.Generator, plane_dim: int, ambient_dim: int) -> OrientedPlane:
    """Random oriented plane: Gram-Schmidt of a standard-normal matrix
    (rotation-invariant distribution)."""
    return OrientedPlane(orthonormalize(rng.standard_normal((plane_dim, ambient_dim))))


def curve_speed_pair(plane_curve, step: float = 1e-4) -> tuple:
    """Two centered estimates of the speed of an embedded plane curve at t=0.

    ``plane_curve``: smooth map t -> OrientedPlane near 0.  Returns
    ``(distance_rate, velocity_norm)`` where the first is the great-circle
    distance between the Pluecker images at t = -h and t = +h divided by 2h,
    and the second is the norm of the central-difference velocity of the
    Pluecker coordinates.  For a smooth curve both converge to the same
    metric speed, which is the finite-difference form of the statement that
    the embedded distance generates the induced metric.
    """
    u_minus = pluecker_embed(plane_curve(-step))
    u_plus = pluecker_embed(plane_curve(step))
    rate = embedded_sphere_distance(u_minus, u_plus) / (2.0 * step)
    velocity = (u_plus.coords - u_minus.coords) / (2.0 * step)
    return rate, float(np.linalg.norm(velocity))
