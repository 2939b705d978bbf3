"""Oriented-plane distances, Pluecker coordinates, and exterior-algebra
kernels, checked against hand-derived values and random-pair properties."""

import math

import numpy as np
import pytest

from gaussric.grassmann import (
    MultiVector,
    OrientedPlane,
    canonical_distance,
    curve_speed_pair,
    embedded_sphere_distance,
    hodge_complement,
    multivector_inner,
    orthonormalize,
    overlap_matrix,
    pluecker_embed,
    principal_cosines,
    random_plane,
    spherical_distance,
    wedge_vectors,
)

E4 = np.eye(4)
E3 = np.eye(3)
INV_SQRT2 = 1.0 / math.sqrt(2.0)

P12 = OrientedPlane(E4[:2])
P34 = OrientedPlane(E4[2:])
# span(e1, (e2+e3)/sqrt2) in R^4
P_TILTED = OrientedPlane(np.array([[1, 0, 0, 0], [0, INV_SQRT2, INV_SQRT2, 0.0]]))
DIMS = [(1, 3), (2, 4), (2, 5), (3, 6)]


def test_overlap_matrix_identity_and_orthogonal():
    np.testing.assert_allclose(overlap_matrix(P12, P12), np.eye(2))
    np.testing.assert_allclose(overlap_matrix(P12, P34), np.zeros((2, 2)))


def test_overlap_matrix_tilted():
    # row i, column j = <p_i, q_j>, by direct inner products
    np.testing.assert_allclose(
        overlap_matrix(P12, P_TILTED), np.array([[1.0, 0.0], [0.0, INV_SQRT2]]), atol=1e-15
    )


def test_overlap_matrix_incompatible():
    with pytest.raises(ValueError, match="incompatible planes"):
        overlap_matrix(P12, OrientedPlane(E3[:2]))
    with pytest.raises(ValueError, match="incompatible planes"):
        overlap_matrix(P12, OrientedPlane(E4[:3]))


def test_principal_cosines_examples():
    np.testing.assert_allclose(principal_cosines(P12, P12).values, [1.0, 1.0])
    np.testing.assert_allclose(principal_cosines(P12, P34).values, [0.0, 0.0])
    np.testing.assert_allclose(
        principal_cosines(P12, P_TILTED).values, [1.0, INV_SQRT2], atol=1e-15
    )


def test_principal_cosines_clamped_and_sorted():
    values = principal_cosines(P12, P_TILTED).values
    assert np.all(values[:-1] >= values[1:])
    assert np.all((0.0 <= values) & (values <= 1.0))


def test_canonical_distance_examples():
    # same plane, opposite orientation: distance vanishes
    swapped = OrientedPlane(E4[[1, 0]])
    assert canonical_distance(P12, swapped) == 0.0
    assert canonical_distance(P12, P34) == pytest.approx(math.pi / math.sqrt(2), abs=1e-14)
    assert canonical_distance(P12, P_TILTED) == pytest.approx(math.pi / 4, abs=1e-12)


def test_spherical_distance_examples():
    assert spherical_distance(P12, P12) == 0.0
    assert spherical_distance(P12, P34) == pytest.approx(math.pi / 2, abs=1e-14)
    assert spherical_distance(P12, P_TILTED) == pytest.approx(math.pi / 4, abs=1e-12)


def test_multivector_inner_examples():
    e12 = pluecker_embed(OrientedPlane(E3[:2]))
    e21 = pluecker_embed(OrientedPlane(E3[[1, 0]]))
    assert multivector_inner(e12, e12) == pytest.approx(1.0)
    assert multivector_inner(e12, e21) == pytest.approx(-1.0)
    tilted = wedge_vectors(np.array([[1, 0, 0], [0, INV_SQRT2, INV_SQRT2]], dtype=float))
    assert multivector_inner(e12, tilted) == pytest.approx(INV_SQRT2)


def test_multivector_inner_incompatible():
    u = MultiVector(3, 2, [1, 0, 0])
    v = MultiVector(3, 1, [1, 0, 0])
    with pytest.raises(ValueError, match="incompatible multivectors"):
        multivector_inner(u, v)


def test_multivector_shape_validation():
    with pytest.raises(ValueError, match="expected 3 coordinates"):
        MultiVector(3, 2, [1.0, 0.0])


def test_pluecker_embed_examples():
    np.testing.assert_allclose(pluecker_embed(OrientedPlane(E3[:2])).coords, [1, 0, 0])
    np.testing.assert_allclose(pluecker_embed(OrientedPlane(E3[[1, 0]])).coords, [-1, 0, 0])
    tilted = OrientedPlane(np.array([[1, 0, 0], [0, INV_SQRT2, INV_SQRT2]], dtype=float))
    np.testing.assert_allclose(
        pluecker_embed(tilted).coords, [INV_SQRT2, INV_SQRT2, 0.0], atol=1e-15
    )


def test_pluecker_embed_unit_norm():
    rng = np.random.default_rng(3)
    for m, k in DIMS:
        for _ in range(20):
            assert pluecker_embed(random_plane(rng, m, k)).norm() == pytest.approx(1.0, abs=1e-10)


def test_embedded_sphere_distance_examples():
    u = pluecker_embed(P12)
    assert embedded_sphere_distance(u, u) == 0.0
    assert embedded_sphere_distance(u, -u) == pytest.approx(math.pi)
    e12 = MultiVector(3, 2, [1, 0, 0])
    e13 = MultiVector(3, 2, [0, 1, 0])
    assert embedded_sphere_distance(e12, e13) == pytest.approx(math.pi / 2)


def test_embedded_sphere_distance_rejects_non_unit():
    u = MultiVector(3, 2, [2.0, 0, 0])
    with pytest.raises(ValueError, match="not on sphere"):
        embedded_sphere_distance(u, u)


def test_opposite_orientation_degenerate_case():
    # same subspace, opposite orientation: d_c = 0 exactly while the
    # embedded images are antipodal
    swapped = OrientedPlane(E4[[1, 0]])
    assert canonical_distance(P12, swapped) == 0.0
    d = embedded_sphere_distance(pluecker_embed(P12), pluecker_embed(swapped))
    assert d == pytest.approx(math.pi, abs=1e-10)


def test_hodge_complement_examples():
    e12 = MultiVector(3, 2, [1, 0, 0])
    np.testing.assert_allclose(hodge_complement(e12).coords, [0, 0, 1])
    e13 = MultiVector(3, 2, [0, 1, 0])
    np.testing.assert_allclose(hodge_complement(e13).coords, [0, -1, 0])
    e12_r4 = MultiVector(4, 2, [1, 0, 0, 0, 0, 0])
    np.testing.assert_allclose(hodge_complement(e12_r4).coords, [0, 0, 0, 0, 0, 1])


def test_hodge_complement_orientation_sign():
    # w ^ hodge(w) must be +vol for random decomposables
    rng = np.random.default_rng(11)
    for m, k in DIMS:
        if m == k:
            continue
        plane = random_plane(rng, m, k)
        w = pluecker_embed(plane)
        comp = hodge_complement(w)
        # wedge an oriented basis of the plane with one of the complement
        # (oriented to match comp): the result must be +vol
        full = wedge_vectors(np.vstack([plane.basis, _complement_basis(plane, comp)]))
        np.testing.assert_allclose(full.coords, [1.0], atol=1e-10)


def _complement_basis(plane, comp):
    """Orthonormal basis of the orthogonal complement, oriented to match the
    decomposable multivector ``comp``."""
    k = plane.ambient_dim
    _, _, vt = np.linalg.svd(plane.basis)
    rows = vt[plane.plane_dim:]
    if multivector_inner(wedge_vectors(rows), comp) < 0:
        rows = rows.copy()
        rows[0] = -rows[0]
    return rows


def test_hodge_complement_norm_and_double_application():
    rng = np.random.default_rng(5)
    for m, k in DIMS:
        if m == k:
            continue
        w = pluecker_embed(random_plane(rng, m, k))
        comp = hodge_complement(w)
        assert comp.norm() == pytest.approx(1.0, abs=1e-10)
        twice = hodge_complement(comp)
        sign = (-1.0) ** (m * (k - m))
        np.testing.assert_allclose(twice.coords, sign * w.coords, atol=1e-12)


def test_hodge_complement_rejects_non_unit():
    with pytest.raises(ValueError, match="unit"):
        hodge_complement(MultiVector(3, 2, [2.0, 0, 0]))


def test_orthonormalize_rejects_dependent_rows():
    with pytest.raises(ValueError, match="dependent"):
        orthonormalize(np.array([[1.0, 0.0], [2.0, 0.0]]))


def test_oriented_plane_rejects_skewed_basis():
    with pytest.raises(ValueError, match="orthonormal"):
        OrientedPlane(np.array([[1.0, 0.0, 0.0], [1.0, 1.0, 0.0]]))


def test_distance_order_and_symmetry_random_pairs():
    rng = np.random.default_rng(42)
    for m, k in DIMS:
        for _ in range(60):
            p = random_plane(rng, m, k)
            q = random_plane(rng, m, k)
            dc, ds = canonical_distance(p, q), spherical_distance(p, q)
            assert ds <= dc + 1e-12
            assert abs(dc - canonical_distance(q, p)) <= 1e-12
            assert abs(ds - spherical_distance(q, p)) <= 1e-12


def test_distances_invariant_under_oriented_respan():
    # distances depend only on the subspaces: a rotation of the basis inside
    # the plane (det +1, preserving orientation) must not move them
    rng = np.random.default_rng(7)
    for m, k in DIMS:
        for _ in range(40):
            p = random_plane(rng, m, k)
            q = random_plane(rng, m, k)
            rot = orthonormalize(rng.standard_normal((m, m)))
            if np.linalg.det(rot) < 0:
                rot = rot.copy()
                rot[0] = -rot[0]
            p_respan = OrientedPlane(rot @ p.basis)
            assert abs(canonical_distance(p, q) - canonical_distance(p_respan, q)) <= 1e-10
            assert abs(spherical_distance(p, q) - spherical_distance(p_respan, q)) <= 1e-10
            # the respan is the same oriented plane; arccos conditioning near
            # cosine 1 limits how exactly zero the self-distance can be
            assert canonical_distance(p, p_respan) <= 1e-7


def test_pluecker_inner_is_overlap_determinant():
    rng = np.random.default_rng(19)
    for m, k in DIMS:
        for _ in range(40):
            p = random_plane(rng, m, k)
            q = random_plane(rng, m, k)
            inner = multivector_inner(pluecker_embed(p), pluecker_embed(q))
            det = np.linalg.det(overlap_matrix(p, q))
            assert abs(inner - det) <= 1e-10
            prod = float(np.prod(principal_cosines(p, q).values))
            assert abs(abs(det) - prod) <= 1e-10


def test_embedded_distance_realizes_spherical_distance_on_nonnegative_overlap():
    rng = np.random.default_rng(23)
    for m, k in DIMS:
        for _ in range(60):
            p = random_plane(rng, m, k)
            q = random_plane(rng, m, k)
            if np.linalg.det(overlap_matrix(p, q)) < 0:
                basis = q.basis.copy()
                basis[-1] = -basis[-1]
                q = OrientedPlane(basis)
            d_emb = embedded_sphere_distance(pluecker_embed(p), pluecker_embed(q))
            assert abs(d_emb - spherical_distance(p, q)) <= 1e-10


def test_curve_speed_matches_distance_rate():
    # along smooth plane curves the centered distance rate equals the
    # centered velocity norm of the embedded curve
    rng = np.random.default_rng(31)
    for m, k in [(1, 3), (2, 4), (3, 6)]:
        for _ in range(25):
            anchor = random_plane(rng, m, k).basis
            drift = rng.standard_normal((m, k))

            def curve(t, anchor=anchor, drift=drift):
                return OrientedPlane.spanning(anchor + t * drift)

            rate, speed = curve_speed_pair(curve)
            assert rate == pytest.approx(speed, abs=1e-5)


def test_multivector_json_roundtrip():
    w = wedge_vectors(np.array([[1.0, 0, 0], [0, INV_SQRT2, INV_SQRT2]]))
    data = w.to_list()
    assert isinstance(data, list) and all(isinstance(c, float) for c in data)
    np.testing.assert_allclose(MultiVector(3, 2, data).coords, w.coords)
