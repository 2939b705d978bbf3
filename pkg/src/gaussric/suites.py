"""Verification suites: grid scans of the curvature identities, Grassmann
image checks, Ricci sign/sup scans, and the random-plane fuzzer.

Each suite returns a VerificationReport; the CLI maps report failure to exit
code 1.  Evaluation order is deterministic (row-major grids, fixed seeds), so
reports are byte-identical across runs with identical inputs.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .catalog import CatalogEntry, Grid
from .grassmann import (
    MultiVector,
    OrientedPlane,
    _minor_columns,
    canonical_distance,
    embedded_sphere_distance,
    multivector_inner,
    pluecker_embed,
    spherical_distance,
)
from .immersion import (
    fd_steps,
    fundamental_data,
    gauss_map_differential,
    gauss_map_differential_fd,
    gauss_pullback_metric,
    ricci_extrinsic,
    ricci_intrinsic,
    tangent_frame,
)
from .report import ReportRow, VerificationReport
from .spherical import (
    NestedImmersion,
    normal_space_frame,
    second_gauss_map,
    second_gauss_pullback_metric,
    second_gauss_pullback_predicted,
    split_second_form,
)

DEFAULT_IDENTITY_TOL = 1e-5
DEFAULT_ORACLE_TOL = 1e-5
DEFAULT_DIFFERENTIAL_TOL = 1e-5
DEFAULT_ORDER_TOL = 1e-12
DEFAULT_BINET_TOL = 1e-10
DEFAULT_ISOMETRY_TOL = 1e-10

_DIAMETER_BUDGET = 30


def _default_tol_min(entry: CatalogEntry) -> float:
    # analytic second derivatives hold the trace near machine precision;
    # finite differences only reach ~1e-5
    return 1e-8 if entry.immersion.hessian is not None else 1e-5


def _indexed_points(grid: Grid) -> list:
    axes = grid.axes()
    index_ranges = [range(len(axis)) for axis in axes]
    out = []
    for idx in product(*index_ranges):
        out.append((idx, np.array([axes[a][i] for a, i in enumerate(idx)])))
    return out


def _decimated(grid: Grid, budget: int = _DIAMETER_BUDGET) -> list:
    per_axis = max(2, int(round(budget ** (1.0 / len(grid.shape)))))
    selected = []
    for n in grid.shape:
        picks = np.unique(np.linspace(0, n - 1, min(n, per_axis)).round().astype(int))
        selected.append(set(picks.tolist()))
    return [
        (idx, point)
        for idx, point in _indexed_points(grid)
        if all(i in selected[a] for a, i in enumerate(idx))
    ]


def _pairwise_dc_diameter(planes: Sequence[OrientedPlane]) -> float:
    best = 0.0
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            best = max(best, canonical_distance(planes[i], planes[j]))
    return best


def _is_edge(imm, u, scale: float) -> bool:
    margin = 4.0 * float(np.max(fd_steps(u, imm.finite_difference_step))) * max(1.0, scale)
    return not imm.contains(u, margin)


def _maxabs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def verify_minimal_euclidean(
    entry: CatalogEntry,
    grid: Optional[Grid] = None,
    tol_min: Optional[float] = None,
    tol_id: Optional[float] = None,
) -> VerificationReport:
    """Grid verification that the Gauss-map pullback metric equals minus the
    Ricci tensor on a minimal chart.

    Per point: the mean-curvature norm, the identity residual
    max|pullback + Ric|, the two-oracle Ricci agreement, and the agreement of
    the derivation-formula differential with its finite-difference oracle.
    On a chart that is not minimal the identity fails by a bounded-away
    amount, which is what the round-sphere negative control checks.
    """
    imm = entry.immersion
    grid = grid or entry.default_grid
    tolerances = {
        "mean_curvature": tol_min if tol_min is not None else _default_tol_min(entry),
        "pullback_identity": tol_id if tol_id is not None else DEFAULT_IDENTITY_TOL,
        "ricci_oracles": DEFAULT_ORACLE_TOL,
        "differential_fd": DEFAULT_DIFFERENTIAL_TOL,
    }
    rows = []
    eig_min, eig_max = math.inf, -math.inf
    m = imm.domain_dim
    frame_dirs = np.eye(m)
    for _, u in _indexed_points(grid):
        fd = fundamental_data(imm, u)
        edge = _is_edge(imm, u, _maxabs(fd.coords_to_frame))
        ric_ext = ricci_extrinsic(fd).components
        ric_int = ricci_intrinsic(imm, u).components
        pull = gauss_pullback_metric(imm, u, fd)
        diff_resid = 0.0
        for a in range(m):
            derv = gauss_map_differential(fd, frame_dirs[a])
            oracle = gauss_map_differential_fd(imm, u, frame_dirs[a], fd)
            diff_resid = max(diff_resid, float(np.linalg.norm(derv.coords - oracle.coords)))
        residuals = {
            "mean_curvature": float(np.linalg.norm(fd.mean_curvature)),
            "pullback_identity": _maxabs(pull + ric_ext),
            "ricci_oracles": _maxabs(ric_int - ric_ext),
            "differential_fd": diff_resid,
        }
        passed = {key: residuals[key] <= tolerances[key] for key in residuals}
        category = "edge" if edge else "interior"
        if not edge:
            eigs = np.linalg.eigvalsh(ric_ext)
            eig_min = min(eig_min, float(eigs[0]))
            eig_max = max(eig_max, float(eigs[-1]))
        rows.append(ReportRow(tuple(float(c) for c in u), residuals, passed, category))

    planes = [OrientedPlane(tangent_frame(imm, u)) for _, u in _decimated(grid)]
    extra = {
        "ricci_eig_min": eig_min if rows else None,
        "ricci_eig_max": eig_max if rows else None,
        "gauss_image_dc_diameter": _pairwise_dc_diameter(planes),
    }
    report = VerificationReport("euclid", entry.name, grid.to_dict(), tolerances, rows)
    return report.finalize(extra)


def verify_minimal_spherical(
    entry: CatalogEntry,
    grid: Optional[Grid] = None,
    tol_min: Optional[float] = None,
    tol_id: Optional[float] = None,
) -> VerificationReport:
    """Grid verification of the normal-space map pullback identities on a
    chart inside the unit sphere.

    Per point: the within-sphere mean-curvature norm, the residual of
    pullback = (m-1) I - Ric (frame components; the minimal-chart identity),
    the cross-oracle residual against the curvature-data prediction (which
    holds minimal or not), and the Ricci oracle agreement.
    """
    if entry.nested is None:
        raise ValueError(f"entry {entry.name!r} is not a chart on the unit sphere")
    nimm = entry.nested
    imm = nimm.inner
    grid = grid or entry.default_grid
    tolerances = {
        "mean_curvature": tol_min if tol_min is not None else _default_tol_min(entry),
        "pullback_identity": tol_id if tol_id is not None else DEFAULT_IDENTITY_TOL,
        "pullback_predicted": tol_id if tol_id is not None else DEFAULT_IDENTITY_TOL,
        "ricci_oracles": DEFAULT_ORACLE_TOL,
    }
    m = nimm.domain_dim
    rows = []
    eig_min, eig_max = math.inf, -math.inf
    for _, u in _indexed_points(grid):
        fd = fundamental_data(imm, u)
        edge = _is_edge(imm, u, _maxabs(fd.coords_to_frame))
        pair = split_second_form(nimm, u)
        ric_ext = ricci_extrinsic(fd).components
        ric_int = ricci_intrinsic(imm, u).components
        pull = second_gauss_pullback_metric(nimm, u)
        predicted = second_gauss_pullback_predicted(nimm, u)
        target = (m - 1) * np.eye(m) - ric_ext
        residuals = {
            "mean_curvature": float(np.linalg.norm(pair.trace())),
            "pullback_identity": _maxabs(pull - target),
            "pullback_predicted": _maxabs(pull - predicted),
            "ricci_oracles": _maxabs(ric_int - ric_ext),
        }
        passed = {key: residuals[key] <= tolerances[key] for key in residuals}
        category = "edge" if edge else "interior"
        if not edge:
            eigs = np.linalg.eigvalsh(ric_ext)
            eig_min = min(eig_min, float(eigs[0]))
            eig_max = max(eig_max, float(eigs[-1]))
        rows.append(ReportRow(tuple(float(c) for c in u), residuals, passed, category))

    sample = _decimated(grid)
    normal_planes = [OrientedPlane(normal_space_frame(nimm, u)) for _, u in sample]
    psis = [second_gauss_map(nimm, u) for _, u in sample]
    spread = 0.0
    for psi in psis[1:]:
        spread = max(spread, float(np.linalg.norm(psi.coords - psis[0].coords)))
    extra = {
        "ricci_eig_min": eig_min if rows else None,
        "ricci_eig_max": eig_max if rows else None,
        "gauss_image_dc_diameter": _pairwise_dc_diameter(normal_planes),
        "psi_spread": spread,
    }
    report = VerificationReport("sphere", entry.name, grid.to_dict(), tolerances, rows)
    return report.finalize(extra)


def verify_grassmann_image(
    entry: CatalogEntry,
    grid: Optional[Grid] = None,
    budget: int = _DIAMETER_BUDGET,
) -> VerificationReport:
    """Pairwise Grassmann identities over the sampled Gauss image of an
    entry: the distance ordering d_s <= d_c, symmetry of both distances, the
    Pluecker determinant identities, and agreement of the embedded
    great-circle distance with d_s on non-negative overlaps.
    """
    imm = entry.immersion
    grid = grid or entry.default_grid
    tolerances = {
        "distance_order": DEFAULT_ORDER_TOL,
        "symmetry": DEFAULT_ORDER_TOL,
        "binet": DEFAULT_BINET_TOL,
        "det_product": DEFAULT_BINET_TOL,
        "isometry": DEFAULT_ISOMETRY_TOL,
    }
    sample = _decimated(grid, budget)
    planes = [OrientedPlane(tangent_frame(imm, u)) for _, u in sample]
    embedded = [pluecker_embed(p) for p in planes]
    rows = []
    diameter = 0.0
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            p, q = planes[i], planes[j]
            dc, dcr = canonical_distance(p, q), canonical_distance(q, p)
            ds, dsr = spherical_distance(p, q), spherical_distance(q, p)
            inner = multivector_inner(embedded[i], embedded[j])
            alpha = p.basis @ q.basis.T
            det = float(np.linalg.det(alpha))
            lam = np.clip(np.linalg.svd(alpha, compute_uv=False), 0.0, 1.0)
            residuals = {
                "distance_order": max(0.0, ds - dc),
                "symmetry": max(abs(dc - dcr), abs(ds - dsr)),
                "binet": abs(inner - det),
                "det_product": abs(abs(det) - float(np.prod(lam))),
                "isometry": abs(embedded_sphere_distance(embedded[i], embedded[j]) - ds)
                if det >= 0.0
                else 0.0,
            }
            passed = {key: residuals[key] <= tolerances[key] for key in residuals}
            rows.append(ReportRow((float(i), float(j)), residuals, passed))
            diameter = max(diameter, dc)
    report = VerificationReport(
        "grassmann",
        entry.name,
        {"sampled_points": len(planes), "grid": grid.to_dict()},
        tolerances,
        rows,
    )
    return report.finalize({"gauss_image_dc_diameter": diameter})


def scan_ricci(
    entry: CatalogEntry,
    radii: Sequence[float],
    shape: tuple = (41, 41),
) -> VerificationReport:
    """Evidence scan over expanding chart boxes: for each half-width V the
    extreme frame-Ricci eigenvalues over the grid v in [-V, V] and the
    sampled Gauss-image diameter.

    Passes when every sampled eigenvalue is negative and the maximum is
    non-decreasing in V (the sampled signature of curvature draining toward
    zero on complete minimal charts); the flat plane reports eigenvalue 0
    and therefore fails the strict-negativity check by design.
    """
    if entry.minimal_in != "euclidean":
        raise ValueError(f"scan requires a Euclidean-minimal entry, got {entry.name!r}")
    imm = entry.immersion
    if imm.domain_dim != 2:
        raise ValueError("scan requires a two-dimensional chart")
    u_box = entry.default_grid.box[0]
    rows = []
    previous = -math.inf
    for radius in radii:
        grid = Grid((u_box, (-float(radius), float(radius))), tuple(shape))
        eig_min, eig_max = math.inf, -math.inf
        for _, u in _indexed_points(grid):
            eigs = ricci_extrinsic(fundamental_data(imm, u)).eigenvalues
            eig_min = min(eig_min, float(eigs[0]))
            eig_max = max(eig_max, float(eigs[-1]))
        planes = [OrientedPlane(tangent_frame(imm, u)) for _, u in _decimated(grid)]
        residuals = {
            "ricci_eig_max": eig_max,
            "ricci_eig_min": eig_min,
            "gauss_image_dc_diameter": _pairwise_dc_diameter(planes),
        }
        passed = {
            "negative": eig_max < 0.0,
            "monotone": eig_max >= previous - 1e-12,
        }
        rows.append(ReportRow((float(radius),), residuals, passed))
        previous = eig_max
    report = VerificationReport(
        "scan-ric",
        entry.name,
        {"u_box": [float(u_box[0]), float(u_box[1])], "radii": [float(r) for r in radii], "shape": list(shape)},
        {},
        rows,
    )
    return report.finalize()


def _pluecker_batch(bases: np.ndarray) -> np.ndarray:
    """Lexicographic Pluecker coordinates for a stack of row bases
    (n, m, k) -> (n, C(k, m))."""
    n, m, k = bases.shape
    cols = _minor_columns(k, m)
    minors = np.transpose(bases[:, :, cols], (0, 2, 1, 3))
    return np.linalg.det(minors)


def fuzz_grassmann(
    count: int,
    dims: Sequence[tuple],
    seed: int,
    tol_order: float = DEFAULT_ORDER_TOL,
    tol_binet: float = DEFAULT_BINET_TOL,
) -> VerificationReport:
    """Random-pair property fuzzer on oriented planes.

    For each (m, k) in ``dims``, samples ``count`` independent plane pairs
    (orthonormalized standard-normal matrices), then checks, over all pairs:
    d_s <= d_c, symmetry of both distances, the Pluecker inner product equals
    det(overlap) with |det| equal to the product of principal cosines, the
    embedded distance realizes d_s on non-negative overlaps, and exact
    agreement of d_s and d_c when m = 1.  A deterministic subsample is routed
    through the public per-pair API and compared against the batched values.
    """
    rng = np.random.default_rng(seed)
    tolerances = {
        "distance_order": tol_order,
        "symmetry": tol_order,
        "binet": tol_binet,
        "det_product": tol_binet,
        "isometry": DEFAULT_ISOMETRY_TOL,
        "m1_equality": tol_order,
        "api_consistency": 1e-12,
    }
    rows = []
    for m, k in dims:
        if count == 0:
            residuals = {key: 0.0 for key in tolerances}
            passed = {key: True for key in tolerances}
            rows.append(ReportRow((float(m), float(k)), residuals, passed))
            continue
        q_p = np.linalg.qr(rng.standard_normal((count, k, m)))[0]
        q_q = np.linalg.qr(rng.standard_normal((count, k, m)))[0]
        bases_p = np.transpose(q_p, (0, 2, 1))
        bases_q = np.transpose(q_q, (0, 2, 1))
        alpha = np.einsum("nak,nbk->nab", bases_p, bases_q)
        lam = np.clip(np.linalg.svd(alpha, compute_uv=False), 0.0, 1.0)
        lam_t = np.clip(np.linalg.svd(np.transpose(alpha, (0, 2, 1)), compute_uv=False), 0.0, 1.0)
        dc = np.sqrt(np.sum(np.arccos(lam) ** 2, axis=1))
        dc_t = np.sqrt(np.sum(np.arccos(lam_t) ** 2, axis=1))
        ds = np.arccos(np.clip(np.prod(lam, axis=1), 0.0, 1.0))
        ds_t = np.arccos(np.clip(np.prod(lam_t, axis=1), 0.0, 1.0))
        pl_p = _pluecker_batch(bases_p)
        pl_q = _pluecker_batch(bases_q)
        inner = np.sum(pl_p * pl_q, axis=1)
        det = np.linalg.det(alpha)
        nonneg = det >= 0.0
        embedded = np.arccos(np.clip(inner, -1.0, 1.0))
        residuals = {
            "distance_order": float(np.max(np.maximum(0.0, ds - dc))),
            "symmetry": float(max(np.max(np.abs(dc - dc_t)), np.max(np.abs(ds - ds_t)))),
            "binet": float(np.max(np.abs(inner - det))),
            "det_product": float(np.max(np.abs(np.abs(det) - np.prod(lam, axis=1)))),
            "isometry": float(np.max(np.abs(embedded[nonneg] - ds[nonneg]))) if np.any(nonneg) else 0.0,
            "m1_equality": float(np.max(np.abs(ds - dc))) if m == 1 else 0.0,
        }
        api_resid = 0.0
        for i in range(min(count, 25)):
            plane_p = OrientedPlane(bases_p[i])
            plane_q = OrientedPlane(bases_q[i])
            api_resid = max(
                api_resid,
                abs(canonical_distance(plane_p, plane_q) - float(dc[i])),
                abs(spherical_distance(plane_p, plane_q) - float(ds[i])),
                abs(multivector_inner(pluecker_embed(plane_p), pluecker_embed(plane_q)) - float(inner[i])),
            )
        residuals["api_consistency"] = api_resid
        passed = {key: residuals[key] <= tolerances[key] for key in residuals}
        rows.append(ReportRow((float(m), float(k)), residuals, passed))
    report = VerificationReport(
        "fuzz",
        None,
        {"count": int(count), "dims": [[int(m), int(k)] for m, k in dims], "seed": int(seed)},
        tolerances,
        rows,
    )
    return report.finalize()
