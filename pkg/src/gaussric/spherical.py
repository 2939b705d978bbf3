"""Submanifolds of the unit sphere: split second fundamental forms, the
normal-space (second) Gauss map, and its pullback metric.

Only the unit hypersphere S^{k-1} of R^k is supported as the intermediate
manifold; its curvature and second fundamental form enter through the
constant-curvature closed forms rather than user-supplied data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grassmann import MultiVector, hodge_complement, multivector_inner, wedge_vectors
from .immersion import (
    FundamentalData,
    ParametrizedImmersion,
    directional_derivative,
    fd_steps,
    fundamental_data,
    ricci_extrinsic,
    tangent_frame,
)

SPHERE_TOL = 1e-10
TANGENCY_TOL = 1e-8


@dataclass
class NestedImmersion:
    """Chart immersion whose image lies on the unit sphere S^{k-1} in R^k.

    ``n = k - 1 - m`` is the codimension of the image inside the sphere and
    ``r = k - n`` the complementary split used by the normal-space map.
    """

    inner: ParametrizedImmersion

    @property
    def domain_dim(self) -> int:
        return self.inner.domain_dim

    @property
    def ambient_dim(self) -> int:
        return self.inner.ambient_dim

    @property
    def normal_dim(self) -> int:
        return self.ambient_dim - 1 - self.domain_dim

    @property
    def complement_dim(self) -> int:
        return self.ambient_dim - self.normal_dim

    def checked_position(self, u) -> np.ndarray:
        x = self.inner.position(u)
        if abs(float(np.linalg.norm(x)) - 1.0) > SPHERE_TOL:
            raise ValueError(
                f"not on unit sphere: |x| = {float(np.linalg.norm(x))!r} at u={np.asarray(u).tolist()}"
            )
        return x


def _checked_data(nimm: NestedImmersion, u) -> tuple[np.ndarray, FundamentalData]:
    x = nimm.checked_position(u)
    fd = fundamental_data(nimm.inner, u)
    jac_radial = np.abs(fd.frame @ x)
    if np.max(jac_radial) > TANGENCY_TOL:
        raise ValueError(
            f"not on unit sphere: chart tangents not orthogonal to the radius at u={np.asarray(u).tolist()}"
        )
    return x, fd


@dataclass
class SecondFormPair:
    """Second fundamental form of M split at a point of the sphere.

    ``within_sphere[a, b]`` is the component of B(Z_a, Z_b) tangent to the
    sphere (normal to M inside it); the sphere's own second fundamental form
    is the closed-form rule ``sphere_form``, not stored data.
    """

    within_sphere: np.ndarray
    position: np.ndarray

    def sphere_form(self, xv: np.ndarray, yv: np.ndarray) -> np.ndarray:
        """Second fundamental form of the unit sphere in R^k on tangent
        vectors: -<X, Y> x."""
        return -float(np.dot(xv, yv)) * self.position

    def trace(self) -> np.ndarray:
        return np.einsum("aae->e", self.within_sphere)


def split_second_form(nimm: NestedImmersion, u) -> SecondFormPair:
    """Split the ambient second fundamental form into its within-sphere part
    and the radial part.

    The radial part of B(Z_a, Z_b) is <B_ab, x> x and equals -delta_ab x for
    a chart on the unit sphere; the remainder is the second fundamental form
    of M inside the sphere.
    """
    x, fd = _checked_data(nimm, u)
    radial = np.einsum("abe,e->ab", fd.second_form, x)
    within = fd.second_form - radial[:, :, None] * x
    return SecondFormPair(within_sphere=within, position=x)


def second_gauss_map(nimm: NestedImmersion, u) -> MultiVector:
    """Oriented unit multivector of the normal space of M inside the sphere's
    tangent space.

    Computed frame-free as the oriented Hodge complement of
    x ^ Z_1 ^ ... ^ Z_m, so it is globally smooth; the sign makes
    (x, Z_1..Z_m, V_1..V_n) positively oriented in R^k.  Any oriented
    orthonormal basis V_1..V_n of the normal space wedges to this value up to
    a global sign.
    """
    x = nimm.checked_position(u)
    frame = tangent_frame(nimm.inner, u)
    return hodge_complement(wedge_vectors(np.vstack([x, frame])))


def normal_space_frame(nimm: NestedImmersion, u, frame: np.ndarray | None = None) -> np.ndarray:
    """Some orthonormal basis of the normal space of M inside T(S^{k-1}).

    Gauge-dependent (unlike ``second_gauss_map``); used only inside sums over
    a full normal frame, which are gauge-invariant.
    """
    x = nimm.checked_position(u)
    if frame is None:
        frame = tangent_frame(nimm.inner, u)
    rows = np.vstack([x, frame])
    _, _, vt = np.linalg.svd(rows)
    return vt[rows.shape[0]:]


def second_gauss_pullback_metric(nimm: NestedImmersion, u) -> np.ndarray:
    """Pullback metric of the normal-space map in frame components.

    Entry (a, b) is <dpsi(Z_a), dpsi(Z_b)> with dpsi estimated by central
    differences along the chart curves matching the frame directions.  Signs
    of neighbouring evaluations are aligned with the centre value before
    differencing so that an (impossible for the Hodge construction, but cheap
    to guard) global flip cannot masquerade as a derivative.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    x, fd = _checked_data(nimm, u)
    m = nimm.domain_dim
    centre = second_gauss_map(nimm, u)

    def aligned(p: np.ndarray) -> np.ndarray:
        psi = second_gauss_map(nimm, p)
        if multivector_inner(psi, centre) < 0.0:
            psi = -psi
        return psi.coords

    step = float(np.max(fd_steps(u, nimm.inner.finite_difference_step)))
    box = nimm.inner.domain_box()
    diffs = []
    for a in range(m):
        velocity = fd.coords_to_frame[a]
        value, _ = directional_derivative(aligned, u, velocity, step, box)
        diffs.append(value)
    out = np.empty((m, m))
    for a in range(m):
        for b in range(a, m):
            out[a, b] = out[b, a] = float(diffs[a] @ diffs[b])
    return out


def second_gauss_pullback_predicted(nimm: NestedImmersion, u) -> np.ndarray:
    """Predicted pullback metric of the normal-space map from curvature data.

    Assembles, in frame components,

        <B_MN(Z_a, Z_b), tr B_MN> - Ric(Z_a, Z_b)
        + sum_i <B_S(Z_a, Z_b), B_S(V_i, V_i)>
        + sum_i <R(Z_a, Z_i) Z_b, Z_i> - sum_i <R(Z_a, V_i) Z_b, V_i>

    where B_MN is the within-sphere second fundamental form, B_S the sphere's
    own form -<X,Y>x, and R the sphere's curvature operator through the
    constant-curvature rule R(X, Y)Z = <X, Z> Y - <Y, Z> X.  That sign of R
    is the one under which this expression matches the measured pullback
    across the whole catalog (and degenerates to (m-1)<,> - Ric for minimal
    charts); the opposite sign leaves a residue proportional to the metric.
    """
    x, fd = _checked_data(nimm, u)
    pair = split_second_form(nimm, u)
    ric = ricci_extrinsic(fd).components
    z = fd.frame
    v = normal_space_frame(nimm, u, frame=z)
    m = z.shape[0]

    trace_mn = pair.trace()
    t_mean = np.einsum("abe,e->ab", pair.within_sphere, trace_mn)

    sphere_vv = sum(pair.sphere_form(v[i], v[i]) for i in range(v.shape[0]))
    t_sphere = np.empty((m, m))
    for a in range(m):
        for b in range(m):
            t_sphere[a, b] = float(np.dot(pair.sphere_form(z[a], z[b]), sphere_vv))

    def curv(xv, yv, wv):
        return np.dot(xv, wv) * yv - np.dot(yv, wv) * xv

    t_tan = np.zeros((m, m))
    t_nor = np.zeros((m, m))
    for a in range(m):
        for b in range(m):
            t_tan[a, b] = sum(float(np.dot(curv(z[a], z[i], z[b]), z[i])) for i in range(m))
            t_nor[a, b] = sum(float(np.dot(curv(z[a], v[i], z[b]), v[i])) for i in range(v.shape[0]))

    out = t_mean - ric + t_sphere + t_tan - t_nor
    return 0.5 * (out + out.T)
