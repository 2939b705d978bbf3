"""Pointwise differential geometry of chart immersions into Euclidean space.

An immersion is an evaluator u -> x(u) from an m-dimensional chart into R^k,
optionally with analytic first and second derivatives.  Missing derivatives
fall back to central finite differences, switching to second-order one-sided
stencils where the chart domain would be violated.

Everything is evaluated per point with no shared mutable state; grid scans
may call these functions from multiple threads as long as the evaluator
itself is re-entrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grassmann import MultiVector, multivector_inner, orthonormalize, wedge_vectors

RANK_TOL = 1e-8

# cbrt(machine epsilon): the classical balance point between truncation and
# rounding for first-order central differences.
_FD_BASE = float(np.cbrt(np.finfo(float).eps))


def fd_steps(u: np.ndarray, override: Optional[float] = None) -> np.ndarray:
    """Per-coordinate finite-difference steps: max(1e-4, cbrt(eps)*(1+|u_a|))."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if override is not None:
        return np.full(u.shape, float(override))
    return np.maximum(1e-4, _FD_BASE * (1.0 + np.abs(u)))


@dataclass
class ParametrizedImmersion:
    """Chart immersion of an m-dimensional box domain into R^k.

    ``jacobian(u)`` returns the (m, k) matrix with row a = dx/du_a and
    ``hessian(u)`` the (m, m, k) array with entry [a, b] = d^2 x / du_a du_b.
    ``chart_domain`` is an (m, 2) box of valid parameters (None means all of
    R^m); ``finite_difference_step`` overrides the default step policy.
    """

    domain_dim: int
    ambient_dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    finite_difference_step: Optional[float] = None
    chart_domain: Optional[np.ndarray] = None

    def position(self, u) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(u, dtype=float)), dtype=float)

    def domain_box(self) -> np.ndarray:
        if self.chart_domain is None:
            box = np.empty((self.domain_dim, 2))
            box[:, 0], box[:, 1] = -np.inf, np.inf
            return box
        return np.asarray(self.chart_domain, dtype=float)

    def contains(self, u, margin: float = 0.0) -> bool:
        box = self.domain_box()
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return bool(np.all(u >= box[:, 0] + margin) and np.all(u <= box[:, 1] - margin))


def _inside(point: np.ndarray, box: Optional[np.ndarray]) -> bool:
    if box is None:
        return True
    return bool(np.all(point >= box[:, 0]) and np.all(point <= box[:, 1]))


def directional_derivative(fn, u, direction, step, box=None):
    """First derivative of ``fn`` along ``direction`` at ``u``.

    Central two-point stencil when u +- step*direction stays inside ``box``,
    otherwise a second-order one-sided three-point stencil from the interior
    side.  Returns ``(value, one_sided)``.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    d = np.atleast_1d(np.asarray(direction, dtype=float))
    h = float(step)
    plus, minus = u + h * d, u - h * d
    if _inside(plus, box) and _inside(minus, box):
        pts, wts, one_sided = (plus, minus), (0.5 / h, -0.5 / h), False
    elif _inside(u + 2 * h * d, box) and _inside(plus, box):
        pts = (u, plus, u + 2 * h * d)
        wts, one_sided = (-1.5 / h, 2.0 / h, -0.5 / h), True
    else:
        pts = (u, minus, u - 2 * h * d)
        wts, one_sided = (1.5 / h, -2.0 / h, 0.5 / h), True
    value = sum(w * np.asarray(fn(p), dtype=float) for p, w in zip(pts, wts))
    return value, one_sided


def jacobian_at(imm: ParametrizedImmersion, u) -> np.ndarray:
    """Analytic jacobian when available, otherwise finite differences."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if imm.jacobian is not None:
        return np.asarray(imm.jacobian(u), dtype=float)
    steps = fd_steps(u, imm.finite_difference_step)
    box = imm.domain_box()
    rows = []
    for a in range(imm.domain_dim):
        e = np.zeros(imm.domain_dim)
        e[a] = 1.0
        rows.append(directional_derivative(imm.evaluator, u, e, steps[a], box)[0])
    return np.stack(rows)


def hessian_at(imm: ParametrizedImmersion, u) -> np.ndarray:
    """Analytic hessian when available, otherwise nested central differences
    of the (analytic or finite-difference) jacobian.  Symmetrized in (a, b)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if imm.hessian is not None:
        hess = np.asarray(imm.hessian(u), dtype=float)
    else:
        steps = fd_steps(u, imm.finite_difference_step)
        box = imm.domain_box()
        layers = []
        for a in range(imm.domain_dim):
            e = np.zeros(imm.domain_dim)
            e[a] = 1.0
            layers.append(directional_derivative(lambda p: jacobian_at(imm, p), u, e, steps[a], box)[0])
        hess = np.stack(layers)  # [a, b, :] = d_a J_b = d_a d_b x
    return 0.5 * (hess + hess.transpose(1, 0, 2))


def _regular_jacobian(imm: ParametrizedImmersion, u) -> np.ndarray:
    jac = jacobian_at(imm, u)
    smallest = np.linalg.svd(jac, compute_uv=False)[-1]
    if smallest <= RANK_TOL:
        raise ValueError(
            f"irregular point: jacobian smallest singular value {smallest:.3e} at u={np.asarray(u).tolist()}"
        )
    return jac


def tangent_frame(imm: ParametrizedImmersion, u) -> np.ndarray:
    """Oriented orthonormal tangent frame: Gram-Schmidt of the coordinate
    tangents in fixed index order, so the orientation is the chart's."""
    return orthonormalize(_regular_jacobian(imm, u))


@dataclass
class FundamentalData:
    """Per-point package of first- and second-order data.

    ``second_form[a, b]`` is the ambient normal vector B(Z_a, Z_b) on the
    orthonormal frame; ``mean_curvature`` is its trace over the frame.
    ``coords_to_frame`` is the matrix L with Z = L @ J, used to express frame
    directions as chart velocities.
    """

    position: np.ndarray
    frame: np.ndarray
    metric: np.ndarray
    coords_to_frame: np.ndarray
    second_form: np.ndarray
    mean_curvature: np.ndarray


def fundamental_data(imm: ParametrizedImmersion, u) -> FundamentalData:
    u = np.atleast_1d(np.asarray(u, dtype=float))
    jac = _regular_jacobian(imm, u)
    frame = orthonormalize(jac)
    # J = C Z with C = J Z^T, hence Z = inv(C) J.
    transform = np.linalg.inv(jac @ frame.T)
    hess = hessian_at(imm, u)
    contracted = np.einsum("ac,bd,cde->abe", transform, transform, hess)
    tangential = np.einsum("abe,ze,zf->abf", contracted, frame, frame)
    second = contracted - tangential
    second = 0.5 * (second + second.transpose(1, 0, 2))
    return FundamentalData(
        position=imm.position(u),
        frame=frame,
        metric=jac @ jac.T,
        coords_to_frame=transform,
        second_form=second,
        mean_curvature=np.einsum("aae->e", second),
    )


@dataclass(frozen=True)
class RicciTensor:
    """Ricci curvature in orthonormal-frame components (units 1/length^2)."""

    components: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.components)


def ricci_extrinsic(fd: FundamentalData) -> RicciTensor:
    """Ricci tensor from the second fundamental form:
    Ric(Z_a, Z_b) = <B_ab, trB> - sum_c <B_ac, B_bc>."""
    b = fd.second_form
    ric = np.einsum("abe,e->ab", b, fd.mean_curvature) - np.einsum("ace,bce->ab", b, b)
    return RicciTensor(0.5 * (ric + ric.T))


def metric_at(imm: ParametrizedImmersion, u) -> np.ndarray:
    jac = jacobian_at(imm, u)
    return jac @ jac.T


def christoffel_at(imm: ParametrizedImmersion, u) -> np.ndarray:
    """Christoffel symbols Gamma^d_ab of the chart metric, via central
    differences of the metric components."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    m = imm.domain_dim
    steps = fd_steps(u, imm.finite_difference_step)
    box = imm.domain_box()
    dg = np.empty((m, m, m))
    for c in range(m):
        e = np.zeros(m)
        e[c] = 1.0
        dg[c] = directional_derivative(lambda p: metric_at(imm, p), u, e, steps[c], box)[0]
    ginv = np.linalg.inv(metric_at(imm, u))
    gamma = (
        np.einsum("de,aeb->dab", ginv, dg)
        + np.einsum("de,bea->dab", ginv, dg)
        - np.einsum("de,eab->dab", ginv, dg)
    )
    return 0.5 * gamma


def ricci_intrinsic(imm: ParametrizedImmersion, u) -> RicciTensor:
    """Ricci tensor from the chart metric alone, converted to the orthonormal
    frame.

    Independent of the second fundamental form: Christoffel symbols come from
    finite differences of the metric and the curvature from the coordinate
    formula R^d_cab = d_a Gamma^d_bc - d_b Gamma^d_ac
    + Gamma^d_ae Gamma^e_bc - Gamma^d_be Gamma^e_ac with Ric_bc = R^a_cab.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    m = imm.domain_dim
    jac = _regular_jacobian(imm, u)
    frame = orthonormalize(jac)
    transform = np.linalg.inv(jac @ frame.T)
    steps = fd_steps(u, imm.finite_difference_step)
    box = imm.domain_box()

    gamma = christoffel_at(imm, u)
    dgamma = np.empty((m, m, m, m))
    for c in range(m):
        e = np.zeros(m)
        e[c] = 1.0
        dgamma[c] = directional_derivative(lambda p: christoffel_at(imm, p), u, e, steps[c], box)[0]

    riem = (
        np.einsum("adbc->dcab", dgamma)
        - np.einsum("bdac->dcab", dgamma)
        + np.einsum("dae,ebc->dcab", gamma, gamma)
        - np.einsum("dbe,eac->dcab", gamma, gamma)
    )
    ric_chart = np.einsum("acab->bc", riem)
    ric_frame = transform @ ric_chart @ transform.T
    return RicciTensor(0.5 * (ric_frame + ric_frame.T))


def gauss_map(imm: ParametrizedImmersion, u) -> MultiVector:
    """Unit multivector of the oriented tangent plane (the Pluecker image of
    the tangent space)."""
    return wedge_vectors(tangent_frame(imm, u))


def gauss_map_differential(fd: FundamentalData, direction) -> MultiVector:
    """Differential of the tangent-plane map on a frame vector.

    ``direction`` holds the components of X in the orthonormal frame; the
    result is sum_i Z_1 ^ ... ^ B(X, Z_i) ^ ... ^ Z_m in lexicographic
    coordinates.
    """
    direction = np.atleast_1d(np.asarray(direction, dtype=float))
    m, k = fd.frame.shape
    bx = np.einsum("a,aie->ie", direction, fd.second_form)  # rows B(X, Z_i)
    total = np.zeros(math.comb(k, m))
    for i in range(m):
        rows = fd.frame.copy()
        rows[i] = bx[i]
        total = total + wedge_vectors(rows).coords
    return MultiVector(k, m, total)


def gauss_map_differential_fd(imm: ParametrizedImmersion, u, direction, fd: Optional[FundamentalData] = None) -> MultiVector:
    """Central-difference oracle for the Gauss-map differential along a frame
    direction, via the chart curve whose velocity matches that direction."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if fd is None:
        fd = fundamental_data(imm, u)
    direction = np.atleast_1d(np.asarray(direction, dtype=float))
    velocity = direction @ fd.coords_to_frame
    step = float(np.max(fd_steps(u, imm.finite_difference_step)))
    value, _ = directional_derivative(
        lambda p: gauss_map(imm, p).coords, u, velocity, step, imm.domain_box()
    )
    m, k = fd.frame.shape
    return MultiVector(k, m, value)


def gauss_pullback_metric(imm: ParametrizedImmersion, u, fd: Optional[FundamentalData] = None) -> np.ndarray:
    """Pullback metric of the Gauss map in frame components:
    entry (a, b) = <dphi(Z_a), dphi(Z_b)> with dphi from the derivation
    formula."""
    if fd is None:
        fd = fundamental_data(imm, u)
    m = fd.frame.shape[0]
    diffs = [gauss_map_differential(fd, np.eye(m)[a]) for a in range(m)]
    out = np.empty((m, m))
    for a in range(m):
        for b in range(a, m):
            out[a, b] = out[b, a] = multivector_inner(diffs[a], diffs[b])
    return out
