"""Linear holonomy of a tiling and its canonical cyclic cover.

Every dart gets a direction in Z/M (M = 6 for triangles, in units of pi/3;
M = 4 for squares, in units of pi/2) by developing faces along a spanning
tree of the dual graph. Walking around a face turns by -2 (triangles) or -1
(squares) per dart. Across a non-tree edge the two sides may disagree by a
defect; the defects generate the holonomy group U_k.

On the k-fold cover, dart ``(d, l)`` has id ``l * N + d`` and direction
``dir(d) - l * M / k``, so every cover dart carries an honest lattice vector.
The deck transformation lowers the level by one and rotates every vector by
``exp(2 pi i / k)``.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import intlinalg as il
from .cmap import (
    REGULAR_VALENCY,
    SQUARE,
    TRIANGLE,
    CombinatorialMap,
    Tiling,
    automorphisms,
    build_map,
    build_tiling,
    canonical_code,
    genus,
    tiling_from_dict,
)
from .errors import Disconnected, InternalInconsistency, MapError

MODULUS = {TRIANGLE: 6, SQUARE: 4}
TURN = {TRIANGLE: 2, SQUARE: 1}

# unit vectors u^j as integer pairs (a, b) meaning a + b*u,
# u = exp(i pi/3) for triangles (u^2 = u - 1) and u = i for squares
UNIT_VECTORS = {
    TRIANGLE: ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)),
    SQUARE: ((1, 0), (0, 1), (-1, 0), (0, -1)),
}
LATTICE_UNIT = {TRIANGLE: complex(0.5, math.sqrt(3) / 2), SQUARE: 1j}


def to_complex(kind: str, vec: Sequence) -> complex:
    a, b = vec
    return float(a) + float(b) * LATTICE_UNIT[kind]


# ---------------------------------------------------------------------------
# holonomy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HolonomyData:
    kind: str
    modulus: int
    face_rotation: tuple[int, ...]
    dart_direction: tuple[int, ...]
    defects: tuple[int, ...]  # per dart; zero on tree edges
    vertex_rotation: tuple[int, ...]
    k: int

    @property
    def step(self) -> int:
        """Rotation quantum M / k of the holonomy group."""
        return self.modulus // self.k


def holonomy(tiling: Tiling, seed: int | None = None) -> HolonomyData:
    """Develop the tiling along a dual spanning tree and read off U_k.

    With ``seed`` the tree (and its root face) is chosen at random; k does not
    depend on that choice.
    """
    cmap = tiling.map
    kind = tiling.kind
    M = MODULUS[kind]
    s = TURN[kind]
    faces = cmap.faces
    n = cmap.num_darts
    face_of = [0] * n
    pos = [0] * n
    for fi, face in enumerate(faces):
        for j, d in enumerate(face):
            face_of[d] = fi
            pos[d] = j

    rng = random.Random(seed) if seed is not None else None
    rot: list[int | None] = [None] * len(faces)
    root = rng.randrange(len(faces)) if rng else 0
    rot[root] = rng.randrange(M) if rng else 0

    def direction(d):
        return (rot[face_of[d]] - s * pos[d]) % M

    frontier = deque([root])
    while frontier:
        f = frontier.popleft() if not rng else frontier.pop()
        darts = list(faces[f])
        if rng:
            rng.shuffle(darts)
        for d in darts:
            e = cmap.alpha[d]
            g = face_of[e]
            if rot[g] is None:
                # make dir(e) = dir(d) + M/2
                rot[g] = (direction(d) + M // 2 + s * pos[e]) % M
                frontier.append(g)
                if rng and rng.random() < 0.5:
                    frontier.rotate(1)
    dirs = tuple(direction(d) for d in range(n))
    defects = tuple((dirs[cmap.alpha[d]] - dirs[d] - M // 2) % M for d in range(n))
    vrot = tuple(len(v) % M for v in cmap.vertices)
    g = M
    for x in defects + vrot:
        g = math.gcd(g, x)
    return HolonomyData(kind, M, tuple(rot), dirs, defects, vrot, M // g)


# ---------------------------------------------------------------------------
# the cover
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclicCover:
    base: Tiling
    k: int
    cover: Tiling
    deck: tuple[int, ...]
    dart_vectors: tuple[tuple, ...]
    zero_orders: tuple[int, ...]
    marked_vertices: tuple[int, ...]  # indices into cover.map.vertices
    holonomy: HolonomyData = field(repr=False, compare=False)

    @property
    def kind(self) -> str:
        return self.base.kind

    @cached_property
    def genus(self) -> int:
        return genus(self.cover.map)

    @property
    def num_marked(self) -> int:
        return len(self.marked_vertices)

    def to_dict(self) -> dict:
        out = self.cover.to_dict()
        out.update(
            {
                "k": self.k,
                "deck": list(self.deck),
                "dart_vectors": [[int(a), int(b)] for a, b in self.dart_vectors],
                "zero_orders": list(self.zero_orders),
                "base": self.base.to_dict(),
            }
        )
        return out


def base_zero_orders(kind: str, kappa: Sequence[int], k: int) -> list[int]:
    """Orders k*kappa_i/M of the k-differential at the singular vertices."""
    M = MODULUS[kind]
    return [k * x // M for x in kappa]


def expected_cover_orders(kind: str, kappa: Sequence[int], k: int) -> list[int]:
    """Zero orders over each singular vertex, predicted from kappa and k alone.

    A zero of order a of the k-differential has gcd(a, k) preimages, each a
    zero of order (a + k) / gcd(a, k) - 1 of the pulled-back 1-form.
    """
    out = []
    for a in base_zero_orders(kind, kappa, k):
        g = math.gcd(a, k)
        out.extend([(a + k) // g - 1] * g)
    return sorted(out)


def build_cover(tiling: Tiling, hol: HolonomyData | None = None) -> CyclicCover:
    """Canonical degree-k cyclic cover with deck transformation and dart vectors."""
    if hol is None:
        hol = holonomy(tiling)
    kind = tiling.kind
    cmap = tiling.map
    n = cmap.num_darts
    k, M, step = hol.k, hol.modulus, hol.step
    alpha, sigma = cmap.alpha, cmap.sigma
    level_shift = []
    for d in range(n):
        if hol.defects[d] % step:
            raise InternalInconsistency(f"defect at dart {d} is not a multiple of {step}")
        level_shift.append(hol.defects[d] // step)

    N = n * k
    a_hat = [0] * N
    s_hat = [0] * N
    deck = [0] * N
    vectors = [None] * N
    units = UNIT_VECTORS[kind]
    for lvl in range(k):
        for d in range(n):
            x = lvl * n + d
            up = (lvl + level_shift[d]) % k
            a_hat[x] = up * n + alpha[d]
            s_hat[x] = up * n + sigma[d]
            deck[x] = ((lvl - 1) % k) * n + d
            vectors[x] = units[(hol.dart_direction[d] - lvl * step) % M]
    try:
        cover_map = build_map(N, a_hat, s_hat)
    except Disconnected as exc:
        raise InternalInconsistency(f"cover of degree {k} is disconnected") from exc
    cover = build_tiling(kind, cover_map)
    vectors = tuple(vectors)
    _check_vectors(cover_map, vectors)

    reg = REGULAR_VALENCY[kind]
    base_vertex = _vertex_index(cmap)
    singular = {i for i, v in enumerate(cmap.vertices) if len(v) != reg}
    if not singular:
        singular = {base_vertex[0]}
    marked = []
    orders = []
    for vi, v in enumerate(cover_map.vertices):
        if base_vertex[v[0] % n] in singular:
            e = len(v)
            if e % reg:
                raise InternalInconsistency(f"cover vertex of valency {e} is not a cone point")
            marked.append(vi)
            orders.append(e // reg - 1)
        elif len(v) != reg:
            raise InternalInconsistency("regular base vertex lifted to a cone point")
    return CyclicCover(
        tiling, k, cover, tuple(deck), vectors, tuple(sorted(orders)), tuple(marked), hol
    )


def _vertex_index(cmap: CombinatorialMap) -> list[int]:
    out = [0] * cmap.num_darts
    for i, v in enumerate(cmap.vertices):
        for d in v:
            out[d] = i
    return out


def _check_vectors(cmap: CombinatorialMap, vectors) -> None:
    for d in range(cmap.num_darts):
        a, b = vectors[d]
        c, e = vectors[cmap.alpha[d]]
        if a + c or b + e:
            raise InternalInconsistency(f"dart {d} and its reverse do not carry opposite vectors")
    for face in cmap.faces:
        sa = sum(vectors[d][0] for d in face)
        sb = sum(vectors[d][1] for d in face)
        if sa or sb:
            raise InternalInconsistency(f"face {face} does not close up: sum ({sa}, {sb})")


def permutation_order(perm: Sequence[int]) -> int:
    out = 1
    seen = [False] * len(perm)
    for s in range(len(perm)):
        if seen[s]:
            continue
        length = 0
        d = s
        while not seen[d]:
            seen[d] = True
            d = perm[d]
            length += 1
        out = out * length // math.gcd(out, length)
    return out


def quotient_map(cover: CyclicCover) -> CombinatorialMap:
    """The map ``cover / <deck>`` rebuilt from deck orbits alone."""
    cmap = cover.cover.map
    deck = cover.deck
    orbit_id = [-1] * cmap.num_darts
    reps = []
    for d in range(cmap.num_darts):
        if orbit_id[d] >= 0:
            continue
        x = d
        while orbit_id[x] < 0:
            orbit_id[x] = len(reps)
            x = deck[x]
        reps.append(d)
    n = len(reps)
    alpha = [-1] * n
    sigma = [-1] * n
    for d in range(cmap.num_darts):
        o = orbit_id[d]
        for perm, img in ((alpha, cmap.alpha), (sigma, cmap.sigma)):
            val = orbit_id[img[d]]
            if perm[o] not in (-1, val):
                raise InternalInconsistency("deck transformation does not commute with the map")
            perm[o] = val
    try:
        return build_map(n, alpha, sigma)
    except MapError as exc:
        raise InternalInconsistency(f"quotient is not a valid map: {exc}") from exc


def check_cover(cover: CyclicCover) -> None:
    """Assert the structural properties of a cover; raise InternalInconsistency."""
    cmap = cover.cover.map
    deck = cover.deck
    if permutation_order(deck) != cover.k:
        raise InternalInconsistency(f"deck transformation does not have order {cover.k}")
    for d in range(cmap.num_darts):
        if cmap.alpha[deck[d]] != deck[cmap.alpha[d]] or cmap.sigma[deck[d]] != deck[cmap.sigma[d]]:
            raise InternalInconsistency("deck transformation is not a map automorphism")
    if cover.k > 1 and any(deck[d] == d for d in range(cmap.num_darts)):
        raise InternalInconsistency("deck transformation has a fixed dart")
    M = MODULUS[cover.kind]
    units = UNIT_VECTORS[cover.kind]
    shift = M // cover.k
    for d in range(cmap.num_darts):
        j = units.index(tuple(cover.dart_vectors[d]))
        if tuple(cover.dart_vectors[deck[d]]) != units[(j + shift) % M]:
            raise InternalInconsistency("deck does not act on vectors by exp(2 pi i / k)")
    _check_vectors(cmap, cover.dart_vectors)
    if canonical_code(quotient_map(cover)) != canonical_code(cover.base.map):
        raise InternalInconsistency("quotient by the deck group is not the base tiling")


# ---------------------------------------------------------------------------
# chain complexes and periods
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Cells:
    edge_rep: tuple[int, ...]  # dart representing each edge (its smaller dart)
    edge_of: tuple[int, ...]  # dart -> edge index
    sign: tuple[int, ...]  # +1 if dart is its edge's representative, else -1
    vertex_of: tuple[int, ...]
    faces: list[list[int]]
    num_vertices: int


def _cells(cmap: CombinatorialMap) -> _Cells:
    n = cmap.num_darts
    edge_of = [0] * n
    sign = [0] * n
    reps = []
    for i, (a, b) in enumerate(cmap.edges):
        reps.append(a)
        edge_of[a] = edge_of[b] = i
        sign[a], sign[b] = 1, -1
    return _Cells(
        tuple(reps), tuple(edge_of), tuple(sign), tuple(_vertex_index(cmap)),
        cmap.faces, len(cmap.vertices),
    )


def _boundaries(cmap: CombinatorialMap, marked: set[int]):
    """Relative boundary matrices d1 (C1 -> C0 / marked) and d2 (C2 -> C1)."""
    cells = _cells(cmap)
    ne = len(cells.edge_rep)
    live = [v for v in range(cells.num_vertices) if v not in marked]
    row_of = {v: i for i, v in enumerate(live)}
    d1 = [[0] * ne for _ in live]
    for e, d in enumerate(cells.edge_rep):
        tail = cells.vertex_of[d]
        head = cells.vertex_of[cmap.alpha[d]]
        if head in row_of:
            d1[row_of[head]][e] += 1
        if tail in row_of:
            d1[row_of[tail]][e] -= 1
    d2 = [[0] * len(cells.faces) for _ in range(ne)]
    for f, face in enumerate(cells.faces):
        for d in face:
            d2[cells.edge_of[d]][f] += cells.sign[d]
    return cells, live, d1, d2


@dataclass(frozen=True)
class RelativeHomology:
    rank: int
    torsion: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]  # free basis followed by torsion generators
    edge_rep: tuple[int, ...]


def relative_homology(cover: CyclicCover) -> RelativeHomology:
    """H_1(X, Z; Z) of the cover relative to its marked vertices, via Smith form."""
    cmap = cover.cover.map
    cells, _, d1, d2 = _boundaries(cmap, set(cover.marked_vertices))
    rank, torsion, free, tors = il.relative_homology(d1, d2, len(cells.edge_rep))
    cycles = tuple(tuple(c) for c in free + tors)
    return RelativeHomology(rank, tuple(torsion), cycles, cells.edge_rep)


def _in_lattice(vec) -> bool:
    return all(Fraction(x).denominator == 1 for x in vec)


def verify_periods(cover: CyclicCover) -> bool:
    """True iff every relative period lies in the tiling lattice.

    Checks the periods of a Smith-form basis of H_1(X, Z; Z), the individual
    edge vectors, and that every face boundary has period zero.
    """
    cmap = cover.cover.map
    vec = cover.dart_vectors
    for d in range(cmap.num_darts):
        if not _in_lattice(vec[d]):
            return False
        r = vec[cmap.alpha[d]]
        if Fraction(vec[d][0]) + Fraction(r[0]) or Fraction(vec[d][1]) + Fraction(r[1]):
            return False
    for face in cmap.faces:
        if sum(Fraction(vec[d][0]) for d in face) or sum(Fraction(vec[d][1]) for d in face):
            return False
    hom = relative_homology(cover)
    for cycle in hom.cycles:
        pa = sum(c * Fraction(vec[hom.edge_rep[e]][0]) for e, c in enumerate(cycle) if c)
        pb = sum(c * Fraction(vec[hom.edge_rep[e]][1]) for e, c in enumerate(cycle) if c)
        if not _in_lattice((pa, pb)):
            return False
    return True


# ---------------------------------------------------------------------------
# eigenspaces of the deck action
# ---------------------------------------------------------------------------


def cyclotomic_polynomial(k: int) -> list[int]:
    """Coefficients of Phi_k, lowest degree first."""
    num = [-1] + [0] * (k - 1) + [1]
    for d in range(1, k):
        if k % d == 0:
            num = _polydiv_exact(num, cyclotomic_polynomial(d))
    return num


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, x in enumerate(den):
            num[i + j] -= c * x
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


def companion_matrix(k: int) -> list[list[int]]:
    """Matrix of multiplication by zeta_k on Q(zeta_k) in the power basis."""
    p = cyclotomic_polynomial(k)
    n = len(p) - 1
    c = [[0] * n for _ in range(n)]
    for j in range(n - 1):
        c[j + 1][j] = 1
    for i in range(n):
        c[i][n - 1] = -p[i]
    return c


@dataclass(frozen=True)
class EigenspaceReport:
    dim_relative: int
    dim_V_zeta: int
    dim_kernel_part: int
    dim_V_zeta_absolute: int
    cover_genus: int
    num_marked: int
    k: int


def deck_cochain_actions(cover: CyclicCover, marked: set[int]):
    """Integer matrices of deck pullback on C^0 (unmarked vertices) and C^1,
    and the coboundaries delta0, delta1 of the relative cochain complex."""
    cmap = cover.cover.map
    cells, live, d1, d2 = _boundaries(cmap, marked)
    deck = cover.deck
    ne = len(cells.edge_rep)
    t1 = [[0] * ne for _ in range(ne)]
    for e, d in enumerate(cells.edge_rep):
        img = deck[d]
        t1[e][cells.edge_of[img]] = cells.sign[img]
    col = {v: i for i, v in enumerate(live)}
    vertex_image = {}
    for v, darts in enumerate(cmap.vertices):
        vertex_image[v] = cells.vertex_of[deck[darts[0]]]
    t0 = [[0] * len(live) for _ in live]
    for v in live:
        t0[col[v]][col[vertex_image[v]]] = 1
    delta0 = il.transpose(d1) if d1 else []
    delta1 = il.transpose(d2)
    return t0, t1, delta0, delta1


def _eigen_dim(t0, t1, delta0, delta1, k: int, n0: int, n1: int) -> int:
    c = companion_matrix(k)
    phi = len(c)
    eye = il.identity(phi)

    def shifted(t, n):
        a = il.kron(t, eye)
        b = il.kron(il.identity(n), c)
        return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

    def nullity(rows, ncols):
        return ncols - (il.rank_q(rows) if rows else 0)

    a1 = shifted(t1, n1)
    stack1 = a1 + (il.kron(delta1, eye) if delta1 else [])
    n_cocycles = nullity(stack1, n1 * phi)
    if n0:
        a0 = shifted(t0, n0)
        eig0 = nullity(a0, n0 * phi)
        closed0 = nullity(a0 + il.kron(delta0, eye), n0 * phi)
    else:
        eig0 = closed0 = 0
    total = n_cocycles - (eig0 - closed0)
    if total % phi:
        raise InternalInconsistency("eigenspace dimension is not a multiple of phi(k)")
    return total // phi


def eigenspace_report(cover: CyclicCover) -> EigenspaceReport:
    """Exact dimensions of the zeta-eigenspace of deck pullback on H^1(X, Z).

    Works over Q(zeta_k) represented as Q^phi(k) through the companion matrix
    of the cyclotomic polynomial, so no floating point is involved.
    """
    cmap = cover.cover.map
    marked = set(cover.marked_vertices)
    hom = relative_homology(cover)
    dims = []
    for mk in (marked, set()):
        t0, t1, delta0, delta1 = deck_cochain_actions(cover, mk)
        dims.append(_eigen_dim(t0, t1, delta0, delta1, cover.k, len(t0), len(t1)))
    rel, absolute = dims
    return EigenspaceReport(
        dim_relative=hom.rank,
        dim_V_zeta=rel,
        dim_kernel_part=rel - absolute,
        dim_V_zeta_absolute=absolute,
        cover_genus=genus(cmap),
        num_marked=len(marked),
        k=cover.k,
    )


# ---------------------------------------------------------------------------
# census classification and rotation orbits
# ---------------------------------------------------------------------------


def classify_tilings(tilings: Sequence[Tiling]) -> list[int]:
    return [holonomy(t).k for t in tilings]


def classify_census(record, tilings: Sequence[Tiling]):
    """Fill the per-k columns of a census record; per-k counts sum to totals."""
    from .enumeration import CensusRow

    ks = classify_tilings(tilings)
    by_m = Counter((t.num_faces, k) for t, k in zip(tilings, ks))
    rows = []
    running = Counter()
    for row in record.rows:
        for (m, k), c in by_m.items():
            if m == row.m:
                running[k] += c
        per_k = dict(sorted(running.items()))
        if sum(per_k.values()) != row.total:
            raise InternalInconsistency(f"per-k counts do not add up at m={row.m}")
        rows.append(CensusRow(row.m, row.total, per_k))
    record.rows = rows
    record.classified = True
    return record


def rotation_of_automorphism(hol: HolonomyData, cmap: CombinatorialMap, g: Sequence[int]) -> int:
    """Rotation class in Z/(M/k) by which an automorphism moves directions."""
    q = hol.step
    dirs = hol.dart_direction
    r = (dirs[g[0]] - dirs[0]) % q
    for d in range(cmap.num_darts):
        if (dirs[g[d]] - dirs[d]) % q != r:
            raise InternalInconsistency("automorphism does not rotate directions uniformly")
    return r


def rotation_orbit_size(tiling: Tiling, hol: HolonomyData | None = None) -> int:
    """Size of the U_M / U_k orbit of the tiling's flat structure.

    Rotating the k-differential by an element of U_M gives the same tiling;
    the orbit shrinks exactly when an automorphism realises that rotation.
    """
    if hol is None:
        hol = holonomy(tiling)
    q = hol.step
    group = {0}
    for g in automorphisms(tiling.map):
        r = rotation_of_automorphism(hol, tiling.map, g)
        group.add(r)
    # group of realised rotations is a subgroup of Z/q
    gen = q
    for r in group:
        gen = math.gcd(gen, r)
    return gen


@dataclass
class OrbitReport:
    kind: str
    profile: tuple[int, ...]
    k: int
    m: int
    generic_size: int
    orbits: list[tuple[str, int, int]]  # (canonical code hex, faces, orbit size)
    marked_count: int = 0
    tiling_count: int = 0
    exceptional: list[str] = field(default_factory=list)

    @property
    def exceptional_fraction(self) -> float:
        return len(self.exceptional) / self.tiling_count if self.tiling_count else 0.0

    @property
    def ratio(self) -> float:
        return self.marked_count / self.tiling_count if self.tiling_count else float("nan")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "profile": list(self.profile),
            "k": self.k,
            "m": self.m,
            "generic_size": self.generic_size,
            "marked_count": self.marked_count,
            "tiling_count": self.tiling_count,
            "exceptional": self.exceptional,
            "exceptional_fraction": self.exceptional_fraction,
            "orbits": [list(o) for o in self.orbits],
        }


def orbit_factor_check(kind: str, kappa: Sequence[int], k: int, m: int, tilings=None) -> OrbitReport:
    """Exact rotation-orbit decomposition of the tilings with holonomy order k."""
    from .enumeration import check_profile, enumerate_tilings

    kind, kappa = check_profile(kind, kappa)
    if tilings is None:
        tilings = enumerate_tilings(kind, kappa, m)
    generic = MODULUS[kind] // k
    report = OrbitReport(kind, kappa, k, m, generic, [])
    for t in tilings:
        hol = holonomy(t)
        if hol.k != k:
            continue
        size = rotation_orbit_size(t, hol)
        if generic % size:
            raise InternalInconsistency(f"orbit size {size} does not divide {generic}")
        code = t.canonical_code.hex()
        report.orbits.append((code, t.num_faces, size))
        report.marked_count += size
        report.tiling_count += 1
        if size != generic:
            report.exceptional.append(code)
    return report


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def cover_from_dict(data: dict) -> CyclicCover:
    """Rebuild a cover from JSON, recomputing it from the stored base tiling and
    checking that the stored permutations and vectors agree."""
    base = tiling_from_dict(data["base"])
    cover = build_cover(base)
    if (
        list(cover.cover.map.alpha) != list(data["alpha"])
        or list(cover.cover.map.sigma) != list(data["sigma"])
        or list(cover.deck) != list(data["deck"])
        or [list(v) for v in cover.dart_vectors] != [list(v) for v in data["dart_vectors"]]
        or int(data["k"]) != cover.k
    ):
        raise InternalInconsistency("stored cover differs from the recomputed one")
    return cover


def dump_cover(cover: CyclicCover, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cover.to_dict(), fh)



# ---------------------------------------------------------------------------
# one-call audit used by the report and the sweeps
# ---------------------------------------------------------------------------


@dataclass
class CoverAudit:
    k: int
    orbit_size: int | None = None
    eigen: EigenspaceReport | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def expected_kernel_part(cover: CyclicCover) -> int:
    """Singular points whose k-differential order k_i = k kappa_i / M lies in kZ.

    For k = 1 every k_i qualifies, but the kernel of H^1(X, Z) -> H^1(X)
    has rank n - 1, one less than the count.
    """
    if cover.k == 1:
        return cover.num_marked - 1
    orders = base_zero_orders(cover.kind, cover.base.profile.entries, cover.k)
    return sum(1 for a in orders if a % cover.k == 0)


def audit_tiling(tiling: Tiling, seed: int | None = None, eigen: bool = True) -> CoverAudit:
    """Run every cover invariant on one tiling; failures are collected, not raised."""
    hol = holonomy(tiling, seed=seed)
    audit = CoverAudit(hol.k)
    try:
        cover = build_cover(tiling, hol)
        check_cover(cover)
    except InternalInconsistency as exc:
        audit.failures.append(str(exc))
        return audit
    kappa = tiling.profile.entries
    if list(cover.zero_orders) != expected_cover_orders(tiling.kind, kappa, hol.k) and kappa:
        audit.failures.append("cover zero orders differ from the prediction")
    if not verify_periods(cover):
        audit.failures.append("periods are not in the lattice")
    if eigen:
        rep = eigenspace_report(cover)
        audit.eigen = rep
        if rep.dim_relative != 2 * cover.genus + cover.num_marked - 1:
            audit.failures.append(f"relative homology rank {rep.dim_relative} != 2g + n - 1")
        if rep.dim_kernel_part != expected_kernel_part(cover):
            audit.failures.append("kernel part of the eigenspace has the wrong dimension")
        g, n = tiling.genus, len(kappa)
        base_orders = base_zero_orders(tiling.kind, kappa, hol.k)
        if hol.k != 1 and kappa and not any(a % hol.k == 0 for a in base_orders):
            if rep.dim_V_zeta != 2 * g + n - 2:
                audit.failures.append(f"dim V_zeta {rep.dim_V_zeta} != 2g + n - 2")
    try:
        size = rotation_orbit_size(tiling, hol)
        audit.orbit_size = size
        if (MODULUS[tiling.kind] // hol.k) % size:
            audit.failures.append(f"orbit size {size} does not divide M/k")
    except InternalInconsistency as exc:
        audit.failures.append(str(exc))
    return audit
