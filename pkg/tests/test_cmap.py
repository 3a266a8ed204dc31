import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flattile import cmap
from flattile.cmap import (
    CombinatorialMap,
    build_map,
    build_tiling,
    canonical_code,
    cube,
    genus,
    map_from_faces,
    mirror,
    one_square_torus,
    relabel,
    tetrahedron,
)
from flattile.errors import Disconnected, FixedPoint, MapError, NotInvolution, NotPermutation


def random_relabel(m, rng):
    perm = list(range(m.num_darts))
    rng.shuffle(perm)
    return relabel(m, perm)


def test_one_square_torus_has_genus_one():
    m = one_square_torus()
    assert (len(m.vertices), len(m.edges), len(m.faces)) == (1, 2, 1)
    assert genus(m) == 1
    assert m.valencies() == [4]


def test_tetrahedron_counts():
    m = tetrahedron()
    assert (len(m.vertices), len(m.edges), len(m.faces)) == (4, 6, 4)
    assert genus(m) == 0
    assert sorted(m.valencies()) == [3, 3, 3, 3]
    t = build_tiling("triangle", m)
    assert t.profile.entries == (-3, -3, -3, -3)


def test_cube_counts():
    m = cube()
    assert (len(m.vertices), len(m.edges), len(m.faces)) == (8, 12, 6)
    assert genus(m) == 0
    t = build_tiling("square", m)
    assert t.profile.entries == (-1,) * 8


@pytest.mark.parametrize(
    "alpha, sigma, exc",
    [
        ([0, 1], [0, 1], FixedPoint),
        ([1, 2, 0, 3], [0, 1, 2, 3], NotInvolution),
        ([1, 0, 3, 2], [0, 1, 2, 3], Disconnected),
        ([1, 0, 3, 2], [0, 0, 2, 3], NotPermutation),
    ],
)
def test_invalid_maps_are_rejected(alpha, sigma, exc):
    with pytest.raises(exc):
        build_map(len(alpha), alpha, sigma)


def test_odd_dart_count_rejected():
    with pytest.raises(MapError):
        build_map(3, [1, 0, 2], [0, 1, 2])


def test_faces_of_wrong_degree_rejected():
    with pytest.raises(MapError):
        build_tiling("triangle", cube())


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=40, deadline=None)
def test_canonical_code_invariant_under_relabelling(seed):
    rng = random.Random(seed)
    for m in (tetrahedron(), cube(), one_square_torus()):
        assert canonical_code(random_relabel(m, rng)) == canonical_code(m)


def test_canonical_code_separates_non_isomorphic_maps():
    assert canonical_code(tetrahedron()) != canonical_code(cube())
    assert cmap.are_isomorphic(tetrahedron(), random_relabel(tetrahedron(), random.Random(1)))
    assert not cmap.are_isomorphic(tetrahedron(), cube())


def test_mirror_of_symmetric_map_is_isomorphic():
    # the tetrahedron admits an orientation reversing symmetry
    assert canonical_code(mirror(tetrahedron())) == canonical_code(tetrahedron())


def test_automorphism_counts():
    # orientation preserving symmetry groups: A4 and S4 (acting freely on darts)
    assert cmap.automorphism_count(tetrahedron()) == 12
    assert cmap.automorphism_count(cube()) == 24
    auts = cmap.automorphisms(cube())
    assert len(auts) == 24
    assert auts[0] == tuple(range(24))
    m = cube()
    for g in auts:
        for d in range(m.num_darts):
            assert m.alpha[g[d]] == g[m.alpha[d]]
            assert m.sigma[g[d]] == g[m.sigma[d]]


def test_map_from_faces_rejects_unpaired_edge():
    with pytest.raises(MapError):
        map_from_faces([(0, 1, 2)])


def test_parse_profile():
    assert cmap.parse_profile("-3,-3,-3,-3") == (-3, -3, -3, -3)
    assert cmap.parse_profile("(1, -1)") == (1, -1)
    assert cmap.parse_profile("") == ()


@pytest.mark.parametrize(
    "kind, entries, ok",
    [
        ("triangle", (-3, -3, -3, -3), True),
        ("triangle", (1, -1), True),
        ("triangle", (0, 1), False),
        ("triangle", (-6, 6), False),
        ("triangle", (1,), False),
        ("square", (-1,) * 8, True),
        ("square", (2, -2), True),
        ("square", (-2,) * 5, False),
    ],
)
def test_admissibility(kind, entries, ok):
    assert (cmap.admissibility_error(kind, entries) is None) == ok


def test_profile_genus_matches_euler_relation():
    t = build_tiling("triangle", tetrahedron())
    p = t.profile
    assert sum(p.entries) == 12 * (p.genus - 1)
    assert p.genus == t.genus


def test_tiling_json_round_trip(tmp_path):
    t = build_tiling("square", cube())
    path = tmp_path / "cube.json"
    cmap.dump_tiling(t, path)
    data = json.loads(path.read_text())
    assert data["kind"] == "square" and data["num_darts"] == 24
    back = cmap.load_tiling(path)
    assert back.map == t.map


def test_code_header_orders_by_size():
    small = canonical_code(one_square_torus())
    big = canonical_code(tetrahedron())
    assert small < big
    assert int.from_bytes(big[:4], "big") == 12


def test_map_is_frozen():
    m = one_square_torus()
    assert isinstance(m, CombinatorialMap)
    with pytest.raises(Exception):
        m.alpha = (0,)
