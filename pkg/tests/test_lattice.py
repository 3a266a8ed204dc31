import itertools
import json
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from flattile import lattice as lt
from flattile import qfield as qf
from flattile.errors import DegenerateForm, InfiniteCount, LatticeError
from flattile.qfield import EISENSTEIN, GAUSSIAN, QElem


def brute_force_count(rows_int, quad_fn, s, R):
    """Count integer combinations c of lattice rows with 0 < h <= s and sup-norm <= R.

    Enumerates ambient integer points in the box and keeps those in the lattice.
    """
    basis = np.array(rows_int, dtype=float)
    n2 = basis.shape[1]
    count = 0
    for pt in itertools.product(range(-R, R + 1), repeat=n2):
        x = np.array(pt, dtype=float)
        sol, *_ = np.linalg.lstsq(basis.T, x, rcond=None)
        if not np.allclose(basis.T @ np.round(sol), x):
            continue
        v = quad_fn(pt)
        if 0 < v <= s:
            count += 1
    return count


# ---------------------------------------------------------------------------
# field arithmetic
# ---------------------------------------------------------------------------


def test_eisenstein_arithmetic_matches_complex_numbers():
    rng = random.Random(0)
    for _ in range(200):
        x = QElem(EISENSTEIN, rng.randint(-5, 5), rng.randint(-5, 5))
        y = QElem(EISENSTEIN, Fraction(rng.randint(-5, 5), rng.randint(1, 4)), rng.randint(-5, 5))
        assert abs(complex(x * y) - complex(x) * complex(y)) < 1e-9
        assert abs(complex(x.conj()) - complex(x).conjugate()) < 1e-9
        assert abs(float(x.norm()) - abs(complex(x)) ** 2) < 1e-9
        if y:
            assert abs(complex(x / y) - complex(x) / complex(y)) < 1e-9


def test_sqrt3_numbers():
    a = lt.Sqrt3Number.make(Fraction(1, 2), 1)
    assert (a * a) == lt.Sqrt3Number.make(Fraction(3, 4), 0)
    assert a.inverse() == lt.Sqrt3Number.make(Fraction(2, 3), 1)
    assert abs(float(a) - math.sqrt(3) / 2) < 1e-15


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------


def test_diagonal_subspace_lattice():
    V = lt.make_subspace(GAUSSIAN, [[1, 1]])
    lat = lt.intersect_lattice(V)
    assert lat.int_basis == ((1, 0, 1, 0), (0, 1, 0, 1))
    assert lat.index == 1


def test_index_counts_projection_cokernel():
    # V = {(z, z/2)}: the lattice is {(2w, w)}, its first coordinate fills 2Z[i]
    V = lt.make_subspace(GAUSSIAN, [[1, Fraction(1, 2)]])
    lat = lt.intersect_lattice(V)
    assert lat.coordinates == (0,)
    assert lat.index == 4


def test_eisenstein_lattice_is_closed_under_omega():
    V = lt.make_subspace(EISENSTEIN, [[1, (1, 1)]])
    lat = lt.intersect_lattice(V)
    for vec in lat.basis:
        rotated = [x.times_generator() for x in vec]
        coords = [c for x in rotated for c in (x.a, x.b)]
        assert all(Fraction(c).denominator == 1 for c in coords)
        assert lt.il.rank_q([list(r) for r in lat.int_basis] + [coords]) == lat.rank


def test_dependent_basis_rejected():
    with pytest.raises(LatticeError):
        lt.make_subspace(GAUSSIAN, [[1, 0], [2, 0]])


# ---------------------------------------------------------------------------
# normalization exactness
# ---------------------------------------------------------------------------


def test_full_space_normalizations():
    # |det H| = 1/4 for the genus-one intersection form; covolume 1 or 3/4
    h = lt.intersection_form(GAUSSIAN, 1, 2)
    assert lt.mv_normalization(lt.full_space(GAUSSIAN, 2), h) == lt.Sqrt3Number.make(4, 0)
    he = lt.intersection_form(EISENSTEIN, 1, 2)
    assert lt.mv_normalization(lt.full_space(EISENSTEIN, 2), he) == lt.Sqrt3Number.make(Fraction(16, 3), 0)


def test_degenerate_form_raises():
    h = lt.intersection_form(GAUSSIAN, 1, 3)
    with pytest.raises(DegenerateForm):
        lt.mv_normalization(lt.full_space(GAUSSIAN, 3), h)


def random_subspace(rng, kind, ambient, dim):
    while True:
        rows = [
            [(Fraction(rng.randint(-3, 3), rng.randint(1, 3)), Fraction(rng.randint(-3, 3), rng.randint(1, 2))) for _ in range(ambient)]
            for _ in range(dim)
        ]
        V = lt.make_subspace(kind, rows)
        red, piv = qf.rref(V.basis)
        if len(piv) == dim:
            return V


@pytest.mark.parametrize("kind", [GAUSSIAN, EISENSTEIN])
def test_normalization_paths_agree_on_random_subspaces(kind):
    rng = random.Random(11)
    for _ in range(10):
        ambient = rng.randint(1, 4)
        dim = rng.randint(1, ambient)
        V = random_subspace(rng, kind, ambient, dim)
        h = lt.euclidean_form(kind, ambient)
        a = lt.mv_normalization(V, h)
        b = lt.normalization_from_projection(V, h)
        assert a == b
        assert a.is_rational or kind == EISENSTEIN


def test_normalization_matches_float_computation():
    # 1 / (|det H_e| * Lebesgue covolume of the lattice in e-coordinates), in floats
    rng = random.Random(3)
    for kind in (GAUSSIAN, EISENSTEIN):
        for _ in range(3):
            V = random_subspace(rng, kind, 3, 2)
            h = lt.euclidean_form(kind, 3)
            lat = lt.intersect_lattice(V)
            E = np.array([[complex(x) for x in v] for v in V.basis]).T
            H = E.conj().T @ E
            real_rows = []
            for v in lat.basis:
                t, *_ = np.linalg.lstsq(E, np.array([complex(x) for x in v]), rcond=None)
                real_rows.append(np.concatenate([t.real, t.imag]))
            cov = abs(np.linalg.det(np.array(real_rows)))
            expected = 1.0 / (abs(np.linalg.det(H)) * cov)
            assert abs(float(lt.mv_normalization(V, h)) - expected) < 1e-9 * expected


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("s, expected", [(1, 4), (2, 8), (5, 20), (10, 36)])
def test_gauss_circle_small_values(s, expected):
    lat = lt.intersect_lattice(lt.full_space(GAUSSIAN, 1))
    assert lt.count_cone_points(lat, lt.euclidean_form(GAUSSIAN, 1), s) == expected


@pytest.mark.parametrize("s, expected", [(1, 6), (3, 12), (4, 18)])
def test_eisenstein_shells(s, expected):
    lat = lt.intersect_lattice(lt.full_space(EISENSTEIN, 1))
    assert lt.count_cone_points(lat, lt.euclidean_form(EISENSTEIN, 1), s) == expected


def test_gauss_circle_limit():
    lat = lt.intersect_lattice(lt.full_space(GAUSSIAN, 1))
    n = lt.count_cone_points(lat, lt.euclidean_form(GAUSSIAN, 1), 10**5)
    assert abs(n / 10**5 - math.pi) / math.pi < 0.01


def test_subspace_count_matches_brute_force():
    V = lt.make_subspace(GAUSSIAN, [[1, 1]])
    lat = lt.intersect_lattice(V)
    h = lt.euclidean_form(GAUSSIAN, 2)
    for s, R in [(4, 2), (10, 3), (7, 1)]:
        got = lt.count_cone_points(lat, h, s, R)
        want = brute_force_count(lat.int_basis, lambda p: p[0] ** 2 + p[1] ** 2 + p[2] ** 2 + p[3] ** 2, s, R)
        assert got == want


def test_indefinite_count_matches_brute_force():
    lat = lt.intersect_lattice(lt.full_space(GAUSSIAN, 2))
    h = lt.diagonal_form(GAUSSIAN, [1, -1])
    for s, R in [(1, 2), (3, 2), (5, 3)]:
        got = lt.count_cone_points(lat, h, s, R)
        want = brute_force_count(lat.int_basis, lambda p: p[0] ** 2 + p[1] ** 2 - p[2] ** 2 - p[3] ** 2, s, R)
        assert got == want
    with pytest.raises(InfiniteCount):
        lt.count_cone_points(lat, h, 1)


def test_eisenstein_subspace_count_matches_brute_force():
    V = lt.make_subspace(EISENSTEIN, [[1, (0, 1)]])
    lat = lt.intersect_lattice(V)
    h = lt.euclidean_form(EISENSTEIN, 2)

    def norm(p):
        a1, b1, a2, b2 = p
        return (a1 * a1 - a1 * b1 + b1 * b1) + (a2 * a2 - a2 * b2 + b2 * b2)

    for s, R in [(2, 2), (6, 2), (8, 3)]:
        assert lt.count_cone_points(lat, h, s, R) == brute_force_count(lat.int_basis, norm, s, R)


def test_negative_definite_counts_nothing():
    lat = lt.intersect_lattice(lt.full_space(GAUSSIAN, 1))
    assert lt.count_cone_points(lat, lt.diagonal_form(GAUSSIAN, [-1]), 10) == 0


def test_invalid_scale():
    lat = lt.intersect_lattice(lt.full_space(GAUSSIAN, 1))
    with pytest.raises(LatticeError):
        lt.count_cone_points(lat, lt.euclidean_form(GAUSSIAN, 1), 0)


def test_two_dimensional_count_approaches_cone_volume():
    lat = lt.intersect_lattice(lt.full_space(GAUSSIAN, 2))
    h = lt.euclidean_form(GAUSSIAN, 2)
    vol = lt.cone_volume(lat, h)
    assert abs(vol - math.pi**2 / 2) < 1e-12
    s = 200
    n = lt.count_cone_points(lat, h, s)
    assert abs(n / s**2 - vol) / vol < 0.02


def test_workers_give_same_count():
    lat = lt.intersect_lattice(lt.full_space(GAUSSIAN, 2))
    h = lt.euclidean_form(GAUSSIAN, 2)
    assert lt.count_cone_points(lat, h, 50, workers=2) == lt.count_cone_points(lat, h, 50)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def test_subspace_json(tmp_path):
    data = {
        "lattice": "eisenstein",
        "ambient": 2,
        "basis": [[["1", "0"], ["1/2", "1/3"]]],
        "form": {"type": "diagonal", "signs": [1, -1]},
    }
    path = tmp_path / "v.json"
    path.write_text(json.dumps(data))
    V, h = lt.load_subspace(path)
    assert V.lattice_kind == EISENSTEIN and V.dim == 1
    assert V.basis[0][1] == QElem(EISENSTEIN, Fraction(1, 2), Fraction(1, 3))
    assert lt.subspace_from_dict(V.to_dict())[0] == V


def test_bad_subspace_json():
    with pytest.raises(LatticeError):
        lt.subspace_from_dict({"lattice": "gaussian", "basis": []})
    with pytest.raises(LatticeError):
        lt.subspace_from_dict({"lattice": "octonion", "ambient": 1, "basis": [[1]]})
