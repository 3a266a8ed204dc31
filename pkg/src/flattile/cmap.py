"""Combinatorial maps on closed oriented surfaces.

A map is a pair of permutations on darts: ``alpha`` (fixed-point-free edge
involution) and ``sigma`` (counterclockwise rotation around vertices). Faces
are the orbits of ``phi = sigma o alpha``; walking along the darts of a face
keeps the face on the right, i.e. faces are traversed clockwise.
"""

from __future__ import annotations

import json
import struct
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import kernels
from .errors import (
    Disconnected,
    FixedPoint,
    MapError,
    NotInvolution,
    NotPermutation,
    OddEuler,
)

TRIANGLE = "triangle"
SQUARE = "square"
FACE_DEGREE = {TRIANGLE: 3, SQUARE: 4}
REGULAR_VALENCY = {TRIANGLE: 6, SQUARE: 4}
# sum of indices is EULER_FACTOR * (g - 1)
EULER_FACTOR = {TRIANGLE: 12, SQUARE: 8}


def normalize_kind(kind: str) -> str:
    k = kind.lower()
    if k in ("triangle", "tri", "t"):
        return TRIANGLE
    if k in ("square", "quad", "q", "s"):
        return SQUARE
    raise MapError(f"unknown tiling kind {kind!r}")


# ---------------------------------------------------------------------------
# permutation helpers
# ---------------------------------------------------------------------------


def orbits(perm: Sequence[int]) -> list[list[int]]:
    """Cycles of ``perm`` in order of their smallest element."""
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        d = start
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = perm[d]
        out.append(cyc)
    return out


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p o q`` (apply q first)."""
    return tuple(p[q[i]] for i in range(len(q)))


def inverse(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _check_permutation(name: str, p: Sequence[int], n: int) -> tuple[int, ...]:
    p = tuple(int(x) for x in p)
    if len(p) != n or sorted(p) != list(range(n)):
        raise NotPermutation(f"{name} is not a permutation of 0..{n - 1}")
    return p


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CombinatorialMap:
    alpha: tuple[int, ...]
    sigma: tuple[int, ...]

    @property
    def num_darts(self) -> int:
        return len(self.alpha)

    @cached_property
    def phi(self) -> tuple[int, ...]:
        return compose(self.sigma, self.alpha)

    @cached_property
    def vertices(self) -> list[list[int]]:
        return orbits(self.sigma)

    @cached_property
    def edges(self) -> list[list[int]]:
        return orbits(self.alpha)

    @cached_property
    def faces(self) -> list[list[int]]:
        return orbits(self.phi)

    def valencies(self) -> list[int]:
        return [len(v) for v in self.vertices]

    def face_degrees(self) -> list[int]:
        return [len(f) for f in self.faces]

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)


def _is_connected(alpha, sigma) -> bool:
    n = len(alpha)
    seen = [False] * n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        d = stack.pop()
        for e in (alpha[d], sigma[d]):
            if not seen[e]:
                seen[e] = True
                count += 1
                stack.append(e)
    return count == n


def build_map(num_darts: int, alpha: Sequence[int], sigma: Sequence[int]) -> CombinatorialMap:
    """Validate ``(alpha, sigma)`` and return an immutable map."""
    if num_darts <= 0 or num_darts % 2:
        raise MapError(f"num_darts must be a positive even integer, got {num_darts}")
    a = _check_permutation("alpha", alpha, num_darts)
    s = _check_permutation("sigma", sigma, num_darts)
    for d in range(num_darts):
        if a[d] == d:
            raise FixedPoint(f"alpha has a fixed point at dart {d}")
        if a[a[d]] != d:
            raise NotInvolution(f"alpha is not an involution: alpha(alpha({d})) != {d}")
    if not _is_connected(a, s):
        raise Disconnected("<alpha, sigma> does not act transitively on darts")
    return CombinatorialMap(a, s)


def genus(cmap: CombinatorialMap) -> int:
    chi = cmap.euler_characteristic()
    if chi % 2:
        raise OddEuler(f"V - E + F = {chi} is odd")
    return (2 - chi) // 2


def relabel(cmap: CombinatorialMap, perm: Sequence[int]) -> CombinatorialMap:
    """Image of the map under the dart relabelling ``d -> perm[d]``."""
    n = cmap.num_darts
    inv = inverse(perm)
    alpha = tuple(perm[cmap.alpha[inv[d]]] for d in range(n))
    sigma = tuple(perm[cmap.sigma[inv[d]]] for d in range(n))
    return CombinatorialMap(alpha, sigma)


def mirror(cmap: CombinatorialMap) -> CombinatorialMap:
    """Same map on the oppositely oriented surface."""
    return CombinatorialMap(cmap.alpha, inverse(cmap.sigma))


def _encode(code: Sequence[int], n: int) -> bytes:
    if n <= 256:
        body = bytes(code)
    elif n <= 65536:
        body = struct.pack(f">{len(code)}H", *code)
    else:
        body = struct.pack(f">{len(code)}I", *code)
    return struct.pack(">I", n) + body


def canonical_code(cmap: CombinatorialMap) -> bytes:
    """Relabelling-invariant code: minimum over roots of the BFS code.

    The 4-byte dart-count header makes byte order agree with ordering by
    size first, then code.
    """
    return _encode(kernels.canonical_code(cmap.alpha, cmap.sigma), cmap.num_darts)


def unoriented_code(cmap: CombinatorialMap) -> bytes:
    """Code identifying a map with its mirror image."""
    return min(canonical_code(cmap), canonical_code(mirror(cmap)))


def are_isomorphic(m1: CombinatorialMap, m2: CombinatorialMap) -> bool:
    if m1.num_darts != m2.num_darts:
        return False
    return canonical_code(m1) == canonical_code(m2)


def automorphism_count(cmap: CombinatorialMap) -> int:
    return kernels.automorphism_count(cmap.alpha, cmap.sigma)


def _bfs_order(cmap: CombinatorialMap, root: int) -> tuple[list[int], tuple[int, ...]]:
    alpha, sigma = cmap.alpha, cmap.sigma
    label = {root: 0}
    order = [root]
    code = []
    for d in order:
        for img in (alpha[d], sigma[d]):
            if img not in label:
                label[img] = len(order)
                order.append(img)
            code.append(label[img])
    return order, tuple(code)


def automorphisms(cmap: CombinatorialMap) -> list[tuple[int, ...]]:
    """All dart permutations commuting with alpha and sigma (identity first)."""
    base_order, base_code = _bfs_order(cmap, 0)
    out = []
    for r in range(cmap.num_darts):
        order, code = _bfs_order(cmap, r)
        if code != base_code:
            continue
        g = [0] * cmap.num_darts
        for x, y in zip(base_order, order):
            g[x] = y
        out.append(tuple(g))
    return out


def map_from_faces(faces: Iterable[Sequence[int]]) -> CombinatorialMap:
    """Build a map from faces given as vertex cycles.

    Each face lists its vertices in the order its darts are traversed (face on
    the right); every directed edge must appear exactly once.
    """
    darts = {}
    phi_pairs = []
    for face in faces:
        face = list(face)
        ids = []
        for j, u in enumerate(face):
            key = (u, face[(j + 1) % len(face)])
            if key in darts:
                raise MapError(f"directed edge {key} appears twice")
            darts[key] = len(darts)
            ids.append(darts[key])
        phi_pairs.extend((ids[j], ids[(j + 1) % len(ids)]) for j in range(len(ids)))
    n = len(darts)
    alpha = [0] * n
    for (u, v), d in darts.items():
        if (v, u) not in darts:
            raise MapError(f"edge {(u, v)} has no opposite")
        alpha[d] = darts[(v, u)]
    phi = [0] * n
    for a, b in phi_pairs:
        phi[a] = b
    sigma = [phi[alpha[d]] for d in range(n)]
    return build_map(n, alpha, sigma)


# ---------------------------------------------------------------------------
# profiles and tilings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    entries: tuple[int, ...]
    tiling_kind: str

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_admissible(self) -> bool:
        return admissibility_error(self.tiling_kind, self.entries) is None

    @property
    def genus(self) -> int:
        return 1 + sum(self.entries) // EULER_FACTOR[self.tiling_kind]

    def __str__(self):
        return ",".join(str(x) for x in self.entries)


def admissibility_error(kind: str, entries: Sequence[int]) -> str | None:
    """Reason the profile is inadmissible, or ``None``."""
    kind = normalize_kind(kind)
    reg = REGULAR_VALENCY[kind]
    for x in entries:
        if x == 0:
            return "profile entries must be nonzero"
        if x <= -reg:
            return f"profile entries must be > -{reg}"
    total = sum(entries)
    factor = EULER_FACTOR[kind]
    if total % factor:
        return f"sum of entries {total} is not a multiple of {factor}"
    if total < -factor:
        return f"sum of entries {total} < {-factor} (negative genus)"
    return None


def parse_profile(text: str) -> tuple[int, ...]:
    text = text.strip().strip("()[]")
    if not text:
        return ()
    return tuple(int(t) for t in text.replace(" ", "").split(",") if t)


@dataclass(frozen=True)
class Tiling:
    map: CombinatorialMap
    kind: str

    @cached_property
    def profile(self) -> Profile:
        reg = REGULAR_VALENCY[self.kind]
        return Profile(tuple(e - reg for e in self.map.valencies() if e != reg), self.kind)

    @cached_property
    def genus(self) -> int:
        return genus(self.map)

    @cached_property
    def canonical_code(self) -> bytes:
        return canonical_code(self.map)

    @property
    def num_faces(self) -> int:
        return self.map.num_darts // FACE_DEGREE[self.kind]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "num_darts": self.map.num_darts,
            "alpha": list(self.map.alpha),
            "sigma": list(self.map.sigma),
        }


def build_tiling(kind: str, cmap: CombinatorialMap) -> Tiling:
    kind = normalize_kind(kind)
    deg = FACE_DEGREE[kind]
    bad = [len(f) for f in cmap.faces if len(f) != deg]
    if bad:
        raise MapError(f"{kind} tiling has faces of degree {sorted(set(bad))}")
    return Tiling(cmap, kind)


def profile(tiling: Tiling) -> Profile:
    return tiling.profile


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def tiling_from_dict(data: dict) -> Tiling:
    cmap = build_map(int(data["num_darts"]), data["alpha"], data["sigma"])
    return build_tiling(data["kind"], cmap)


def load_tiling(path) -> Tiling:
    with open(path, encoding="utf-8") as fh:
        return tiling_from_dict(json.load(fh))


def dump_tiling(tiling: Tiling, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tiling.to_dict(), fh)


# ---------------------------------------------------------------------------
# small named maps
# ---------------------------------------------------------------------------


def one_square_torus() -> CombinatorialMap:
    return build_map(4, [2, 3, 0, 1], [1, 2, 3, 0])


def tetrahedron() -> CombinatorialMap:
    return map_from_faces([(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])


def cube() -> CombinatorialMap:
    return map_from_faces(
        [
            (0, 1, 2, 3),
            (4, 7, 6, 5),
            (0, 4, 5, 1),
            (1, 5, 6, 2),
            (2, 6, 7, 3),
            (3, 7, 4, 0),
        ]
    )


def valency_counter(cmap: CombinatorialMap) -> Counter:
    return Counter(cmap.valencies())
