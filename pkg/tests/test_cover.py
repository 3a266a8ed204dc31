import dataclasses
import json
import random
from fractions import Fraction

import numpy as np
import pytest

from flattile import cover as cv
from flattile.cmap import build_map, build_tiling, canonical_code, cube, one_square_torus, relabel, tetrahedron
from flattile.enumeration import enumerate_all_profiles
from flattile.errors import InternalInconsistency


def tet():
    return build_tiling("triangle", tetrahedron())


def torus():
    return build_tiling("square", one_square_torus())


# ---------------------------------------------------------------------------
# independent floating-point oracle for eigenspace dimensions
# ---------------------------------------------------------------------------


def _orbits(perm):
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        orb, d = [], s
        while d not in seen:
            seen.add(d)
            orb.append(d)
            d = perm[d]
        out.append(orb)
    return out


def numeric_eigen_dim(cover, use_marked=True):
    """dim of the exp(2 pi i/k) eigenspace of deck pullback on H^1(X, Z; C).

    Built from scratch with numpy: cochains on unmarked vertices, edges and
    faces, and H^1_zeta = Z^1_zeta / delta0(C^0_zeta).
    """
    m = cover.cover.map
    n = m.num_darts
    deck = cover.deck
    vert = _orbits(m.sigma)
    vid = {d: i for i, v in enumerate(vert) for d in v}
    phi = [m.sigma[m.alpha[d]] for d in range(n)]
    faces = _orbits(phi)
    edges = [tuple(sorted(e)) for e in _orbits(m.alpha)]
    eid = {}
    for i, (a, b) in enumerate(edges):
        eid[a] = (i, 1.0)
        eid[b] = (i, -1.0)
    marked = set(cover.marked_vertices) if use_marked else set()
    live = [v for v in range(len(vert)) if v not in marked]
    lid = {v: i for i, v in enumerate(live)}
    ne, nv = len(edges), len(live)
    # coboundaries: (delta0 f)(e) = f(head) - f(tail), (delta1 c)(face) = sum of signed edges
    d0 = np.zeros((ne, nv), dtype=complex)
    for i, (a, _) in enumerate(edges):
        tail, head = vid[a], vid[m.alpha[a]]
        if head in lid:
            d0[i, lid[head]] += 1
        if tail in lid:
            d0[i, lid[tail]] -= 1
    d1 = np.zeros((len(faces), ne), dtype=complex)
    for f, face in enumerate(faces):
        for d in face:
            i, s = eid[d]
            d1[f, i] += s
    # pullback by deck: (T c)(e) = c(deck e)
    t1 = np.zeros((ne, ne), dtype=complex)
    for i, (a, _) in enumerate(edges):
        j, s = eid[deck[a]]
        t1[i, j] = s
    t0 = np.zeros((nv, nv), dtype=complex)
    for v in live:
        t0[lid[v], lid[vid[deck[vert[v][0]]]]] = 1
    zeta = np.exp(2j * np.pi / cover.k)

    def nullity(a, ncols):
        if a.size == 0:
            return ncols
        s = np.linalg.svd(a, compute_uv=False)
        return ncols - int(np.sum(s > 1e-8 * max(1.0, s[0])))

    z1 = nullity(np.vstack([d1, t1 - zeta * np.eye(ne)]), ne)
    c0 = nullity(t0 - zeta * np.eye(nv), nv) if nv else 0
    k0 = nullity(np.vstack([d0, t0 - zeta * np.eye(nv)]), nv) if nv else 0
    return z1 - (c0 - k0)


def sample_tilings(kind, m_max, limit, seed=0):
    tilings = enumerate_all_profiles(kind, m_max)
    rng = random.Random(seed)
    rng.shuffle(tilings)
    return tilings[:limit]


# ---------------------------------------------------------------------------


def test_tetrahedron_cover():
    c = cv.build_cover(tet())
    assert c.k == 2
    assert c.genus == 1
    assert c.zero_orders == (0, 0, 0, 0)
    assert c.num_marked == 4
    cv.check_cover(c)
    assert cv.verify_periods(c)
    rep = cv.eigenspace_report(c)
    assert rep.dim_relative == 2 * 1 + 4 - 1
    assert rep.dim_V_zeta == 2
    assert rep.dim_kernel_part == 0


def test_square_torus_is_its_own_cover():
    c = cv.build_cover(torus())
    assert c.k == 1
    assert c.cover.map.num_darts == 4
    cv.check_cover(c)
    assert cv.verify_periods(c)
    assert cv.eigenspace_report(c).dim_relative == 2


def test_cube_holonomy():
    c = cv.build_cover(build_tiling("square", cube()))
    # every vertex has angle 3 pi / 2, so the holonomy is all of U_4
    assert c.k == 4
    assert c.zero_orders == tuple(sorted(cv.expected_cover_orders("square", (-1,) * 8, 4)))
    cv.check_cover(c)


@pytest.mark.parametrize("kind, m_max", [("triangle", 6), ("square", 4)])
def test_audit_passes_on_every_small_tiling(kind, m_max):
    for idx, t in enumerate(enumerate_all_profiles(kind, m_max)):
        audit = cv.audit_tiling(t, seed=idx)
        assert audit.ok, (t.profile, audit.failures)


@pytest.mark.parametrize("kind, m_max, limit", [("triangle", 8, 60), ("square", 5, 60)])
def test_eigen_dimensions_agree_with_numeric_oracle(kind, m_max, limit):
    for t in sample_tilings(kind, m_max, limit):
        c = cv.build_cover(t)
        rep = cv.eigenspace_report(c)
        assert rep.dim_V_zeta == numeric_eigen_dim(c, True)
        assert rep.dim_V_zeta_absolute == numeric_eigen_dim(c, False)


def test_k_and_cover_do_not_depend_on_spanning_tree():
    for t in sample_tilings("triangle", 8, 30, seed=3):
        ref = cv.build_cover(t)
        for seed in range(4):
            hol = cv.holonomy(t, seed=seed)
            assert hol.k == ref.k
            other = cv.build_cover(t, hol)
            assert canonical_code(other.cover.map) == canonical_code(ref.cover.map)
            assert other.zero_orders == ref.zero_orders


def test_holonomy_invariant_under_relabelling():
    rng = random.Random(5)
    for t in sample_tilings("square", 5, 30, seed=1):
        perm = list(range(t.map.num_darts))
        rng.shuffle(perm)
        t2 = build_tiling(t.kind, relabel(t.map, perm))
        assert cv.holonomy(t2).k == cv.holonomy(t).k


def test_off_lattice_vector_is_detected():
    c = cv.build_cover(tet())
    vecs = list(c.dart_vectors)
    a, b = vecs[0]
    vecs[0] = (Fraction(a) + Fraction(1, 2), b)
    bad = dataclasses.replace(c, dart_vectors=tuple(vecs))
    assert not cv.verify_periods(bad)


def test_lattice_vector_that_breaks_faces_is_detected():
    c = cv.build_cover(build_tiling("square", cube()))
    vecs = list(c.dart_vectors)
    vecs[0] = (vecs[0][0] + 1, vecs[0][1])
    bad = dataclasses.replace(c, dart_vectors=tuple(vecs))
    assert not cv.verify_periods(bad)


def test_broken_deck_is_detected():
    c = cv.build_cover(tet())
    bad = dataclasses.replace(c, deck=tuple(range(c.cover.map.num_darts)))
    with pytest.raises(InternalInconsistency):
        cv.check_cover(bad)


def test_expected_orders():
    # kappa = -3 with k = 2: a = -1, gcd 1, one preimage of order 0
    assert cv.expected_cover_orders("triangle", (-3,), 2) == [0]
    # kappa = 6 with k = 6: a = 6, gcd 6, six preimages of order 1
    assert cv.expected_cover_orders("triangle", (6,), 6) == [1] * 6


def test_cyclotomic_polynomials():
    assert cv.cyclotomic_polynomial(1) == [-1, 1]
    assert cv.cyclotomic_polynomial(2) == [1, 1]
    assert cv.cyclotomic_polynomial(3) == [1, 1, 1]
    assert cv.cyclotomic_polynomial(4) == [1, 0, 1]
    assert cv.cyclotomic_polynomial(6) == [1, -1, 1]


def test_orbit_sizes_divide_generic_size():
    for kind, kappa, k, m in [("triangle", (-3, -3, -3, -3), 2, 12), ("square", (-2, -2, -2, -2), 2, 6)]:
        rep = cv.orbit_factor_check(kind, kappa, k, m)
        assert rep.tiling_count > 0
        for _, _, size in rep.orbits:
            assert rep.generic_size % size == 0
        assert 0 <= rep.exceptional_fraction <= 1


def test_tetrahedron_orbit_is_a_point():
    # rotating the tetrahedron's 2-differential by any root of unity is realised by a symmetry
    assert cv.rotation_orbit_size(tet()) == 1


def test_cover_json_round_trip(tmp_path):
    c = cv.build_cover(tet())
    path = tmp_path / "cover.json"
    cv.dump_cover(c, path)
    data = json.loads(path.read_text())
    assert {"k", "deck", "dart_vectors", "alpha", "sigma", "num_darts"} <= set(data)
    assert data["k"] == 2
    back = cv.cover_from_dict(data)
    assert back.deck == c.deck
    data["deck"] = list(reversed(data["deck"]))
    with pytest.raises(InternalInconsistency):
        cv.cover_from_dict(data)


def test_classification_sums_to_totals():
    from flattile.enumeration import census

    rec = census("triangle", (-2, -2, -2, -2, -2, -2), 8)
    for row in rec.rows:
        assert sum(row.per_k.values()) == row.total


def test_two_triangle_torus_has_trivial_holonomy():
    # two triangles glued to a torus with one vertex of valency 6
    m = build_map(6, [3, 4, 5, 0, 1, 2], [1, 2, 3, 4, 5, 0])
    tiling = build_tiling("triangle", m)
    assert tiling.profile.entries == ()
    assert cv.build_cover(tiling).k == 1
