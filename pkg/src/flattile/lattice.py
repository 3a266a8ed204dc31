"""Lattices cut out by rational subspaces, volume normalizations and counting.

A subspace ``V`` of ``C^N`` is given by basis rows with entries in Q(i) or
Q(omega). Its lattice ``V ∩ (Z + Z u)^N`` is computed as the saturation of the
Q-span of ``v`` and ``u v`` inside ``Z^{2N}``, where every complex coordinate
becomes the integer pair ``(a, b)`` of ``a + b u``.

Volumes are carried exactly as ``q * sqrt(3)**e`` with rational ``q`` and
``e`` in {0, 1}; sqrt(3) enters through the covolume sqrt(3)/2 of the
Eisenstein lattice and through imaginary parts of Q(omega) elements.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import intlinalg as il
from . import qfield as qf
from .errors import DegenerateForm, DegenerateProjection, InfiniteCount, LatticeError
from .qfield import EISENSTEIN, GAUSSIAN, QElem

INF = math.inf


# ---------------------------------------------------------------------------
# exact numbers of the form q * sqrt(3)**e
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sqrt3Number:
    """The real number ``rational * sqrt(3)**sqrt3_exponent`` with exponent 0 or 1."""

    rational: Fraction
    sqrt3_exponent: int = 0

    @classmethod
    def make(cls, q, e: int) -> "Sqrt3Number":
        q = Fraction(q)
        q *= Fraction(3) ** (e // 2) if e >= 0 else Fraction(1, 3) ** ((-e + 1) // 2)
        return cls(q, e % 2)

    def __mul__(self, other: "Sqrt3Number") -> "Sqrt3Number":
        return Sqrt3Number.make(self.rational * other.rational, self.sqrt3_exponent + other.sqrt3_exponent)

    def inverse(self) -> "Sqrt3Number":
        if self.rational == 0:
            raise ZeroDivisionError("inverse of zero")
        # 1 / (q sqrt3) = sqrt3 / (3 q)
        if self.sqrt3_exponent:
            return Sqrt3Number(1 / (3 * self.rational), 1)
        return Sqrt3Number(1 / self.rational, 0)

    @property
    def is_rational(self) -> bool:
        return self.sqrt3_exponent == 0 or self.rational == 0

    def __float__(self):
        return float(self.rational) * math.sqrt(3) ** self.sqrt3_exponent

    def __str__(self):
        return str(self.rational) + ("*sqrt(3)" if self.sqrt3_exponent else "")


# ---------------------------------------------------------------------------
# subspaces and Hermitian forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalSubspace:
    lattice_kind: str
    ambient: int
    basis: tuple[tuple[QElem, ...], ...]

    def __post_init__(self):
        if any(len(r) != self.ambient for r in self.basis):
            raise LatticeError("basis rows must have length equal to the ambient dimension")
        if not self.basis:
            raise LatticeError("subspace needs at least one basis vector")
        if len(qf.rref(self.basis)[0]) != len(self.basis):
            raise LatticeError("basis rows are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_dict(self) -> dict:
        return {
            "lattice": self.lattice_kind,
            "ambient": self.ambient,
            "basis": [[[str(x.a), str(x.b)] for x in row] for row in self.basis],
        }


def make_subspace(kind: str, rows: Sequence[Sequence]) -> RationalSubspace:
    """Build a subspace from rows of numbers or ``(a, b)`` pairs meaning ``a + b u``."""
    kind = qf.check_field(kind)
    basis = tuple(tuple(QElem.coerce(kind, x) for x in row) for row in rows)
    n = len(basis[0]) if basis else 0
    return RationalSubspace(kind, n, basis)


def full_space(kind: str, n: int) -> RationalSubspace:
    return make_subspace(kind, [[int(i == j) for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class HermitianData:
    """Hermitian form ``h(z, w) = c * sum B[a][b] z_a conj(w_b)``.

    ``c`` is 1, or ``i/2`` when ``i_half`` is set (then B is skew-Hermitian,
    as for the intersection form).
    """

    matrix: tuple[tuple[QElem, ...], ...]
    i_half: bool = False

    def __post_init__(self):
        n = len(self.matrix)
        for a in range(n):
            for b in range(n):
                x, y = self.matrix[a][b], self.matrix[b][a].conj()
                if (x != -y) if self.i_half else (x != y):
                    raise LatticeError("form matrix is not Hermitian")

    @property
    def field(self) -> str:
        return self.matrix[0][0].field

    def raw(self, x: Sequence[QElem], y: Sequence[QElem]) -> QElem:
        """``sum B[a][b] x_a conj(y_b)`` (the value without the i/2 factor)."""
        field = self.field
        out = qf.zero(field)
        ybar = [v.conj() for v in y]
        for a, xa in enumerate(x):
            if not xa:
                continue
            row = self.matrix[a]
            for b, yb in enumerate(ybar):
                if yb and row[b]:
                    out = out + row[b] * xa * yb
        return out

    def real_value(self, x, y) -> tuple[Fraction, int]:
        """``Re h(x, y)`` as ``(q, e)`` meaning ``q * sqrt(3)**e``."""
        z = self.raw(x, y)
        if self.i_half:
            im, e = z.imag_part()
            return -im / 2, e
        return z.real_part()

    def complex_matrix(self) -> np.ndarray:
        c = 0.5j if self.i_half else 1.0
        return np.array([[c * complex(x) for x in row] for row in self.matrix])


def euclidean_form(kind: str, n: int) -> HermitianData:
    return HermitianData(
        tuple(tuple(qf.one(kind) if i == j else qf.zero(kind) for j in range(n)) for i in range(n))
    )


def diagonal_form(kind: str, signs: Sequence[int]) -> HermitianData:
    n = len(signs)
    return HermitianData(
        tuple(
            tuple(QElem(kind, signs[i]) if i == j else qf.zero(kind) for j in range(n))
            for i in range(n)
        )
    )


def intersection_form(kind: str, g: int, n: int) -> HermitianData:
    """``h(z, z) = (i/2) sum_{j<g} (z_j conj(z_{g+j}) - conj(z_j) z_{g+j})`` on C^n."""
    if 2 * g > n:
        raise LatticeError(f"ambient dimension {n} is too small for genus {g}")
    rows = [[qf.zero(kind)] * n for _ in range(n)]
    for j in range(g):
        rows[j][g + j] = qf.one(kind)
        rows[g + j][j] = -qf.one(kind)
    return HermitianData(tuple(tuple(r) for r in rows), i_half=True)


def gram(h: HermitianData, vectors) -> list[list[QElem]]:
    """Gram matrix of ``raw`` values; multiply by the i/2 factor separately."""
    return [[h.raw(x, y) for y in vectors] for x in vectors]


def abs_det_gram(h: HermitianData, vectors) -> Sqrt3Number:
    """``|det(h(v_i, v_j))|`` exactly."""
    d = len(vectors)
    q, e = qf.abs_real_or_imaginary(qf.det(gram(h, vectors)))
    if h.i_half:
        q /= 2**d
    return Sqrt3Number.make(q, e)


def signature(V: RationalSubspace, h: HermitianData) -> tuple[int, int]:
    """(p, q) of h restricted to V; counts of positive and negative eigenvalues."""
    e = np.array([[complex(x) for x in row] for row in V.basis])
    g = e @ h.complex_matrix() @ e.conj().T
    g = (g + g.conj().T) / 2
    w = np.linalg.eigvalsh(g)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(w))))
    return int(np.sum(w > tol)), int(np.sum(w < -tol))


# ---------------------------------------------------------------------------
# the lattice
# ---------------------------------------------------------------------------


def _to_int_coords(vec: Sequence[QElem]) -> list[Fraction]:
    out = []
    for x in vec:
        out.extend((x.a, x.b))
    return out


def _from_int_coords(kind: str, row: Sequence[int]) -> tuple[QElem, ...]:
    return tuple(QElem(kind, row[2 * j], row[2 * j + 1]) for j in range(len(row) // 2))


@dataclass(frozen=True)
class Lattice:
    subspace: RationalSubspace
    int_basis: tuple[tuple[int, ...], ...]  # HNF rows in Z^{2N}
    coordinates: tuple[int, ...]  # the coordinate subset I
    index: int  # r

    @property
    def kind(self) -> str:
        return self.subspace.lattice_kind

    @property
    def rank(self) -> int:
        return len(self.int_basis)

    @property
    def basis(self) -> list[tuple[QElem, ...]]:
        return [_from_int_coords(self.kind, row) for row in self.int_basis]


def _clear_denominators(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in row]


def projection_subset(V: RationalSubspace) -> tuple[int, ...]:
    """Lexicographically first coordinate subset I with phi_I|V an isomorphism."""
    for subset in itertools.combinations(range(V.ambient), V.dim):
        minor = [[row[j] for j in subset] for row in V.basis]
        if qf.det(minor):
            return subset
    raise DegenerateProjection("no coordinate projection restricts to an isomorphism")


def intersect_lattice(V: RationalSubspace) -> Lattice:
    """Hermite-normal-form Z-basis of V ∩ (Z + Z u)^N and the projection index r."""
    rows = []
    for v in V.basis:
        rows.append(_clear_denominators(_to_int_coords(v)))
        rows.append(_clear_denominators(_to_int_coords([x.times_generator() for x in v])))
    basis = il.saturate(rows)
    if len(basis) != 2 * V.dim:
        raise DegenerateProjection(f"lattice has rank {len(basis)}, expected {2 * V.dim}")
    subset = projection_subset(V)
    cols = [c for j in subset for c in (2 * j, 2 * j + 1)]
    proj = [[row[c] for c in cols] for row in basis]
    r = abs(il.det_q(proj))
    if r == 0:
        raise DegenerateProjection("projection of the lattice is not of full rank")
    return Lattice(V, tuple(tuple(r_) for r_ in basis), subset, int(r))


def unit_covolume(kind: str) -> Sqrt3Number:
    """Lebesgue covolume of Z + Z u in C (1, or sqrt(3)/2)."""
    return Sqrt3Number(Fraction(1), 0) if kind == GAUSSIAN else Sqrt3Number(Fraction(1, 2), 1)


def _power(x: Sqrt3Number, d: int) -> Sqrt3Number:
    out = Sqrt3Number(Fraction(1), 0)
    for _ in range(d):
        out = out * x
    return out


def lattice_covolume(lat: Lattice, h: HermitianData) -> Sqrt3Number:
    """Covolume of the lattice for the volume form attached to |det h| on V.

    Coordinates are taken in the given basis e of V: the form is
    ``|det h(e_i, e_j)|`` times Lebesgue measure in e-coordinates.
    """
    V = lat.subspace
    e = V.basis
    red, piv = qf.rref(e)
    ep = [[row[j] for j in piv] for row in e]
    ep_inv = qf.inverse_matrix(ep)
    coords = []
    for lam in lat.basis:
        c = qf.matmul([[lam[j] for j in piv]], ep_inv)[0]
        coords.append(_to_int_coords(c))
    leb = Sqrt3Number.make(abs(il.det_q(coords)), 0) * _power(unit_covolume(lat.kind), V.dim)
    return abs_det_gram(h, e) * leb


def mv_normalization(V: RationalSubspace | Lattice, h: HermitianData) -> Sqrt3Number:
    """Ratio of the lattice-normalized volume form to the |det h| volume form.

    The first form gives the lattice covolume 1, so the ratio is the inverse
    of the lattice covolume for the second.
    """
    lat = V if isinstance(V, Lattice) else intersect_lattice(V)
    cov = lattice_covolume(lat, h)
    if cov.rational == 0:
        raise DegenerateForm("Hermitian form is degenerate on the subspace")
    return cov.inverse()


def normalization_from_projection(V: RationalSubspace, h: HermitianData) -> Sqrt3Number:
    """Same ratio, computed through the section psi of a coordinate projection.

    psi is the rational inverse of phi_I on V; the |det h| form pulls back to
    ``|det h(psi e_i, psi e_j)|`` times Lebesgue on C^d, while the image of the
    lattice has index r in (Z + Z u)^d.
    """
    lat = intersect_lattice(V)
    subset = lat.coordinates
    minor = [[row[j] for j in subset] for row in V.basis]
    psi = qf.matmul(qf.inverse_matrix(minor), [list(r) for r in V.basis])
    det_h = abs_det_gram(h, psi)
    if det_h.rational == 0:
        raise DegenerateForm("Hermitian form is degenerate on the subspace")
    lattice_cov = Sqrt3Number(Fraction(lat.index), 0) * _power(unit_covolume(V.lattice_kind), V.dim)
    return (det_h * lattice_cov).inverse()


# ---------------------------------------------------------------------------
# counting lattice points in {0 < h <= s}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Quadratic:
    gram: tuple[tuple[int, ...], ...]  # integer matrix G'' with Re h = rho * G'' / den
    den: int
    sqrt3: int  # rho = sqrt(3)**sqrt3

    def value(self, c: Sequence[int]) -> int:
        g = self.gram
        n = len(c)
        return sum(c[i] * g[i][j] * c[j] for i in range(n) if c[i] for j in range(n) if c[j])

    def within(self, q: int, s: Fraction) -> bool:
        """0 < rho * q / den <= s."""
        if q <= 0:
            return False
        t = s * self.den
        if self.sqrt3:
            return t >= 0 and 3 * q * q <= t * t
        return q <= t


def real_gram(lat: Lattice, h: HermitianData) -> _Quadratic:
    vecs = lat.basis
    n = len(vecs)
    entries = [[h.real_value(vecs[i], vecs[j]) for j in range(n)] for i in range(n)]
    exps = {e for row in entries for q, e in row if q != 0}
    if len(exps) > 1:
        raise LatticeError("form values mix rational and sqrt(3) real parts")
    e = exps.pop() if exps else 0
    den = 1
    for row in entries:
        for q, _ in row:
            den = den * q.denominator // math.gcd(den, q.denominator)
    g = tuple(tuple(int(q * den) for q, _ in row) for row in entries)
    return _Quadratic(g, den, e)


def _ldl(g: Sequence[Sequence[int]]):
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    for j in range(n):
        D[j] = a[j][j] - sum(L[j][k] ** 2 * D[k] for k in range(j))
        if D[j] == 0:
            return None, None
        for i in range(j + 1, n):
            L[i][j] = (a[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / D[j]
    return L, D


def form_type(quad: _Quadratic) -> str:
    """'positive', 'negative', or 'indefinite' (which includes degenerate)."""
    L, D = _ldl(quad.gram)
    if D is None:
        # degenerate; semi-definite or indefinite, either way not finite at R = inf
        w = np.linalg.eigvalsh(np.array(quad.gram, dtype=float))
        if np.all(w <= 1e-12 * max(1.0, np.max(np.abs(w)))):
            return "negative"
        return "indefinite"
    if all(x > 0 for x in D):
        return "positive"
    if all(x < 0 for x in D):
        return "negative"
    return "indefinite"


def _sup_ok(lat_rows, c, R) -> bool:
    if R == INF:
        return True
    n = len(lat_rows[0])
    for col in range(n):
        x = 0
        for ci, row in zip(c, lat_rows):
            if ci and row[col]:
                x += ci * row[col]
        if abs(x) > R:
            return False
    return True


def _count_positive_slab(args) -> int:
    quad, lat_rows, s, R, outer_values = args
    L, D = _ldl(quad.gram)
    n = len(D)
    sq = bool(quad.sqrt3)
    t_lin = s * quad.den  # rho * q <= t_lin

    def ok_value(q):
        # q = G''(c) as Fraction; condition rho q <= t_lin
        if q < 0:
            return False
        return 3 * q * q <= t_lin * t_lin if sq else q <= t_lin

    bound = float(t_lin) / math.sqrt(3) if sq else float(t_lin)
    count = 0
    c = [0] * n

    def rec(i, rest):
        # rest: exact sum of D_j (y_j)^2 over j > i
        nonlocal count
        t = sum((L[j][i] * c[j] for j in range(i + 1, n) if c[j]), Fraction(0))
        room = bound - float(rest)
        if room < -1e-9 * max(1.0, bound):
            return
        w = math.sqrt(max(room, 0.0) / float(D[i])) + 1e-7 * (1 + math.sqrt(max(room, 0)))
        lo = math.ceil(-float(t) - w)
        hi = math.floor(-float(t) + w)
        if i == 0 and R == INF:
            def q_at(x):
                return rest + D[0] * (x + t) ** 2

            while ok_value(q_at(lo - 1)):
                lo -= 1
            while lo <= hi and not ok_value(q_at(lo)):
                lo += 1
            while ok_value(q_at(hi + 1)):
                hi += 1
            while hi >= lo and not ok_value(q_at(hi)):
                hi -= 1
            count += max(0, hi - lo + 1)
            return
        for x in range(lo, hi + 1):
            c[i] = x
            y = rest + D[i] * (x + t) ** 2
            if i == 0:
                if ok_value(y) and _sup_ok(lat_rows, c, R):
                    count += 1
            elif ok_value(y):
                rec(i - 1, y)
        c[i] = 0

    # the lattice has rank 2d >= 2, so the outer coordinate is never the last
    top = n - 1
    for x in outer_values:
        c[top] = x
        y = D[top] * x * x
        if ok_value(y):
            rec(top - 1, y)
    return count


def _count_box(quad: _Quadratic, lat_rows, s: Fraction, R) -> int:
    """Brute force over lattice points with sup-norm <= R, using HNF pivots."""
    n = len(lat_rows)
    pivots = [next(j for j, x in enumerate(row) if x) for row in lat_rows]
    c = [0] * n
    count = 0

    def rec(i):
        nonlocal count
        if i == n:
            if _sup_ok(lat_rows, c, R) and quad.within(quad.value(c), s):
                count += 1
            return
        p = pivots[i]
        partial = sum(c[j] * lat_rows[j][p] for j in range(i))
        piv = lat_rows[i][p]
        lo = math.ceil(Fraction(-R - partial, piv))
        hi = math.floor(Fraction(R - partial, piv))
        for x in range(lo, hi + 1):
            c[i] = x
            rec(i + 1)
        c[i] = 0

    rec(0)
    return count


def count_cone_points(
    lat: Lattice, h: HermitianData, s, R=INF, *, workers: int = 1
) -> int:
    """Number of lattice points with ``0 < h(x, x) <= s`` and sup-norm ``<= R``.

    The sup-norm is taken over the integer coordinates ``(a_j, b_j)`` of the
    point in C^N. With a positive definite form R may be infinite; the search
    is split into slabs of the last lattice coordinate.
    """
    s = Fraction(s) if not isinstance(s, float) else Fraction(s).limit_denominator(10**12)
    if s <= 0:
        raise LatticeError("s must be positive")
    if R != INF:
        R = int(math.floor(R))
        if R <= 0:
            raise LatticeError("box radius must be positive")
    quad = real_gram(lat, h)
    kind = form_type(quad)
    if kind == "negative":
        return 0
    if kind == "indefinite":
        if R == INF:
            raise InfiniteCount("form is not positive definite on the subspace; give a finite box")
        return _count_box(quad, lat.int_basis, s, R)
    L, D = _ldl(quad.gram)
    top = len(D) - 1
    t_lin = float(s * quad.den) / (math.sqrt(3) if quad.sqrt3 else 1.0)
    w = math.isqrt(int(t_lin / float(D[top])) + 1) + 1
    values = list(range(-w, w + 1))
    if workers > 1:
        slabs = [values[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            total = sum(pool.map(_count_positive_slab, [(quad, lat.int_basis, s, R, v) for v in slabs]))
    else:
        total = _count_positive_slab((quad, lat.int_basis, s, R, values))
    # the origin satisfies h = 0 <= s and was counted once
    return total - 1


def cone_volume(lat: Lattice, h: HermitianData) -> float:
    """Volume of {0 < h <= 1} for the measure giving the lattice covolume 1.

    Closed form for a positive definite form: pi^d / (d! sqrt(det G)), with G
    the real Gram matrix in lattice coordinates.
    """
    quad = real_gram(lat, h)
    if form_type(quad) != "positive":
        raise InfiniteCount("cone volume is finite only for positive definite forms")
    g = np.array(quad.gram, dtype=float) / quad.den * (math.sqrt(3) ** quad.sqrt3)
    d = len(g) // 2
    return math.pi**d / (math.factorial(d) * math.sqrt(np.linalg.det(g)))


def scaled_count_limit(lat: Lattice, h: HermitianData, s_max, num: int = 8, s_min=None):
    """Pairs ``(s, count(s) / s^d)`` for geometrically spaced s up to s_max."""
    d = lat.subspace.dim
    s_min = s_min if s_min is not None else max(1.0, float(s_max) / 100)
    out = []
    for s in np.geomspace(float(s_min), float(s_max), num):
        s = round(float(s), 6)
        out.append((s, count_cone_points(lat, h, s) / s**d))
    return out


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _parse_entry(kind: str, x) -> QElem:
    if isinstance(x, (list, tuple)):
        return QElem(kind, qf.parse_rational(x[0]), qf.parse_rational(x[1]))
    return QElem(kind, qf.parse_rational(x), 0)


def subspace_from_dict(data: dict) -> tuple[RationalSubspace, HermitianData]:
    """Parse subspace JSON; the optional "form" key selects the Hermitian form.

    "form" may be {"type": "euclidean"} (default), {"type": "diagonal",
    "signs": [...]}, {"type": "intersection", "g": g}, or {"type": "matrix",
    "matrix": [[entry, ...], ...], "i_half": bool}.
    """
    try:
        kind = qf.check_field(data["lattice"])
        n = int(data["ambient"])
        rows = [[_parse_entry(kind, x) for x in row] for row in data["basis"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise LatticeError(f"malformed subspace JSON: {exc}") from exc
    V = RationalSubspace(kind, n, tuple(tuple(r) for r in rows))
    form = data.get("form", {"type": "euclidean"})
    ftype = form.get("type", "euclidean")
    if ftype == "euclidean":
        h = euclidean_form(kind, n)
    elif ftype == "diagonal":
        h = diagonal_form(kind, form["signs"])
    elif ftype == "intersection":
        h = intersection_form(kind, int(form["g"]), n)
    elif ftype == "matrix":
        mat = tuple(tuple(_parse_entry(kind, x) for x in row) for row in form["matrix"])
        h = HermitianData(mat, bool(form.get("i_half", False)))
    else:
        raise LatticeError(f"unknown form type {ftype!r}")
    if len(h.matrix) != n:
        raise LatticeError("form size does not match the ambient dimension")
    return V, h


def load_subspace(path) -> tuple[RationalSubspace, HermitianData]:
    with open(path, encoding="utf-8") as fh:
        return subspace_from_dict(json.load(fh))
