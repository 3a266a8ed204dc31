"""Isomorph-free enumeration of tilings and square-tiled surfaces.

``enumerate_tilings`` runs an orderly search: maps are grown in breadth-first
normal form from dart 0 and a branch is cut as soon as another root provably
yields a smaller partial code, or a face/vertex overshoots its allowed size.
``naive_enumerate`` is the independent oracle: glue faces in every possible
way and deduplicate by canonical code.
"""

from __future__ import annotations

import csv
import io
import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import kernels
from .cmap import (
    EULER_FACTOR,
    FACE_DEGREE,
    REGULAR_VALENCY,
    SQUARE,
    TRIANGLE,
    CombinatorialMap,
    Tiling,
    admissibility_error,
    canonical_code,
    mirror,
    normalize_kind,
)
from .errors import InadmissibleProfile, InvalidInput, ResourceBudgetExceeded

DEFAULT_BUDGET_DARTS = 480
# the naive oracle enumerates every gluing; beyond these it takes hours
NAIVE_MAX_FACES = {TRIANGLE: 8, SQUARE: 6}
BRUTE_FORCE_MAX_DARTS = 14
ORIGAMI_MAX_SQUARES = 9

ALL_K = {TRIANGLE: (1, 2, 3, 6), SQUARE: (1, 2, 4)}
CSV_K_COLUMNS = (1, 2, 3, 4, 6)


def check_profile(kind: str, kappa: Sequence[int]) -> tuple[str, tuple[int, ...]]:
    kind = normalize_kind(kind)
    kappa = tuple(sorted(int(x) for x in kappa))
    err = admissibility_error(kind, kappa)
    if err is not None:
        raise InadmissibleProfile(f"profile {kappa} for {kind} tilings: {err}")
    return kind, kappa


def profile_genus(kind: str, kappa: Sequence[int]) -> int:
    return 1 + sum(kappa) // EULER_FACTOR[normalize_kind(kind)]


def admissible_k(kind: str, kappa: Sequence[int]) -> tuple[int, ...]:
    """Holonomy orders k allowed by the profile: (M/k) divides every entry."""
    kind = normalize_kind(kind)
    modulus = REGULAR_VALENCY[kind]
    return tuple(k for k in ALL_K[kind] if all(x % (modulus // k) == 0 for x in kappa))


def _need_vector(kind: str, kappa: Sequence[int], n: int) -> list[int] | None:
    reg = REGULAR_VALENCY[kind]
    need = [0] * (n + 1)
    for x in kappa:
        e = x + reg
        if e > n:
            return None
        need[e] += 1
    return need


def _face_counts(kind: str, kappa, m_max: int):
    D = FACE_DEGREE[kind]
    reg = REGULAR_VALENCY[kind]
    min_darts = sum(x + reg for x in kappa)
    for m in range(1, m_max + 1):
        n = D * m
        if n % 2 or n < max(min_darts, 2):
            continue
        yield m


def _check_budget(kind: str, m_max: int, budget_darts: int) -> None:
    if m_max < 1:
        raise InvalidInput("m_max must be >= 1")
    n = FACE_DEGREE[kind] * m_max
    if n > budget_darts:
        raise ResourceBudgetExceeded(
            f"{m_max} faces need {n} darts, above the budget of {budget_darts}"
        )


def _search_one_size(args) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    kind, kappa, m = args
    n = FACE_DEGREE[kind] * m
    need = None if kappa is None else _need_vector(kind, kappa, n)
    if kappa is not None and need is None:
        return []
    return kernels.orderly_maps(FACE_DEGREE[kind], n, need, REGULAR_VALENCY[kind])


def _run_sizes(kind, kappa, sizes, workers):
    tasks = [(kind, kappa, m) for m in sizes]
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_search_one_size, tasks))
    else:
        chunks = [_search_one_size(t) for t in tasks]
    return chunks


def _merge_orientation(tilings: list[Tiling], orientation: str) -> list[Tiling]:
    if orientation == "preserving":
        return tilings
    if orientation != "both":
        raise InvalidInput(f"orientation must be 'preserving' or 'both', got {orientation!r}")
    keep = []
    for t in tilings:
        if t.canonical_code <= canonical_code(mirror(t.map)):
            keep.append(t)
    return keep


def _sorted(tilings):
    return sorted(tilings, key=lambda t: (t.num_faces, t.canonical_code))


def enumerate_tilings(
    kind: str,
    kappa: Sequence[int],
    m_max: int,
    *,
    orientation: str = "preserving",
    workers: int = 1,
    budget_darts: int = DEFAULT_BUDGET_DARTS,
) -> list[Tiling]:
    """One tiling per equivalence class with profile ``kappa`` and at most
    ``m_max`` faces, sorted by (face count, canonical code).

    Face counts are independent search tasks; ``workers > 1`` spreads them
    over processes and the merge is order-independent.
    """
    kind, kappa = check_profile(kind, kappa)
    _check_budget(kind, m_max, budget_darts)
    sizes = list(_face_counts(kind, kappa, m_max))
    out = []
    for chunk in _run_sizes(kind, kappa, sizes, workers):
        for alpha, sigma in chunk:
            t = Tiling(CombinatorialMap(alpha, sigma), kind)
            if t.profile.entries != kappa or t.genus != profile_genus(kind, kappa):
                raise InadmissibleProfile(
                    f"search produced profile {t.profile.entries}, expected {kappa}"
                )
            out.append(t)
    return _sorted(_merge_orientation(out, orientation))


def enumerate_all_profiles(
    kind: str, m_max: int, *, workers: int = 1, budget_darts: int = DEFAULT_BUDGET_DARTS
) -> list[Tiling]:
    """Every tiling of the given kind with at most ``m_max`` faces, any profile.

    Includes tilings whose profile is empty.
    """
    kind = normalize_kind(kind)
    _check_budget(kind, m_max, budget_darts)
    sizes = list(_face_counts(kind, (), m_max))
    out = []
    for chunk in _run_sizes(kind, None, sizes, workers):
        out.extend(Tiling(CombinatorialMap(a, s), kind) for a, s in chunk)
    return _sorted(out)


@lru_cache(maxsize=None)
def _naive_table(kind: str, m: int) -> tuple[Tiling, ...]:
    found = kernels.naive_maps(FACE_DEGREE[kind], m)
    return tuple(Tiling(CombinatorialMap(a, s), kind) for a, s in found.values())


def naive_enumerate(
    kind: str,
    kappa: Sequence[int],
    m_max: int,
    *,
    orientation: str = "preserving",
) -> list[Tiling]:
    """Oracle for ``enumerate_tilings``: all face gluings, deduplicated by code.

    Capped at 8 triangles / 6 squares.
    """
    kind, kappa = check_profile(kind, kappa)
    if m_max > NAIVE_MAX_FACES[kind]:
        raise ResourceBudgetExceeded(
            f"naive enumeration is capped at {NAIVE_MAX_FACES[kind]} faces for {kind} tilings"
        )
    out = [
        t
        for m in range(1, m_max + 1)
        for t in _naive_table(kind, m)
        if t.profile.entries == kappa
    ]
    return _sorted(_merge_orientation(out, orientation))


def naive_profiles(kind: str, m_max: int) -> dict[tuple[int, ...], int]:
    """Profiles realised by the naive oracle with at most ``m_max`` faces."""
    kind = normalize_kind(kind)
    if m_max > NAIVE_MAX_FACES[kind]:
        raise ResourceBudgetExceeded("beyond the naive oracle range")
    counts: Counter = Counter()
    for m in range(1, m_max + 1):
        for t in _naive_table(kind, m):
            counts[t.profile.entries] += 1
    return dict(counts)


def _fpf_involutions(n: int):
    if n == 0:
        yield ()
        return
    items = list(range(n))

    def rec(rest, pairs):
        if not rest:
            yield pairs
            return
        a = rest[0]
        for j in range(1, len(rest)):
            b = rest[j]
            yield from rec(rest[1:j] + rest[j + 1 :], pairs + ((a, b),))

    for pairs in rec(items, ()):
        alpha = [0] * n
        for a, b in pairs:
            alpha[a] = b
            alpha[b] = a
        yield tuple(alpha)


def exhaustive_enumerate(kind: str, kappa: Sequence[int], m_max: int) -> list[Tiling]:
    """Literal brute force over every fixed-point-free involution.

    Tiny cases only (at most 14 darts); used to validate ``naive_enumerate``.
    """
    kind, kappa = check_profile(kind, kappa)
    D = FACE_DEGREE[kind]
    if D * m_max > BRUTE_FORCE_MAX_DARTS:
        raise ResourceBudgetExceeded("exhaustive enumeration is capped at 14 darts")
    found = {}
    for m in range(1, m_max + 1):
        n = D * m
        if n % 2:
            continue
        phi = [f * D + (j + 1) % D for f in range(m) for j in range(D)]
        for alpha in _fpf_involutions(n):
            sigma = tuple(phi[alpha[d]] for d in range(n))
            if not _transitive(alpha, sigma):
                continue
            t = Tiling(CombinatorialMap(alpha, sigma), kind)
            if t.profile.entries != kappa:
                continue
            found.setdefault(t.canonical_code, t)
    return _sorted(found.values())


def _transitive(p, q) -> bool:
    n = len(p)
    seen = {0}
    stack = [0]
    while stack:
        d = stack.pop()
        for e in (p[d], q[d]):
            if e not in seen:
                seen.add(e)
                stack.append(e)
    return len(seen) == n


def admissible_profiles(kind: str, max_darts: int) -> list[tuple[int, ...]]:
    """All admissible profiles whose singular vertices fit into ``max_darts``."""
    kind = normalize_kind(kind)
    reg = REGULAR_VALENCY[kind]
    valencies = [e for e in range(1, max_darts + 1) if e != reg]
    out = []

    def rec(start, budget, chosen):
        kappa = tuple(sorted(e - reg for e in chosen))
        if admissibility_error(kind, kappa) is None:
            out.append(kappa)
        for idx in range(start, len(valencies)):
            e = valencies[idx]
            if e > budget:
                break
            rec(idx, budget - e, chosen + [e])

    rec(0, max_darts, [])
    return sorted(set(out))


# ---------------------------------------------------------------------------
# census records
# ---------------------------------------------------------------------------


@dataclass
class CensusRow:
    m: int
    total: int
    per_k: dict[int, int] = field(default_factory=dict)


@dataclass
class CensusRecord:
    kind: str
    profile: tuple[int, ...]
    rows: list[CensusRow]
    orientation: str = "preserving"
    classified: bool = False
    tilings: list[Tiling] = field(default_factory=list, repr=False, compare=False)

    def total(self, m: int) -> int:
        for row in self.rows:
            if row.m == m:
                return row.total
        raise KeyError(m)

    def counts(self) -> list[tuple[int, int]]:
        return [(r.m, r.total) for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["kind", "profile", "m", "count_total"] + [f"count_k{k}" for k in CSV_K_COLUMNS]
        )
        allowed = admissible_k(self.kind, self.profile)
        for row in self.rows:
            ks = [
                row.per_k.get(k, 0) if (self.classified and k in allowed) else ""
                for k in CSV_K_COLUMNS
            ]
            writer.writerow(
                [self.kind, ",".join(map(str, self.profile)), row.m, row.total] + ks
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CensusRecord":
        reader = csv.DictReader(io.StringIO(text))
        rows = []
        kind = profile = None
        classified = False
        for rec in reader:
            kind = normalize_kind(rec["kind"])
            profile = tuple(int(x) for x in rec["profile"].split(",") if x.strip())
            per_k = {}
            for k in CSV_K_COLUMNS:
                val = rec.get(f"count_k{k}", "")
                if val not in ("", None):
                    per_k[k] = int(val)
                    classified = True
            rows.append(CensusRow(int(rec["m"]), int(rec["count_total"]), per_k))
        if kind is None:
            raise InvalidInput("empty census CSV")
        return cls(kind, profile, rows, classified=classified)


def census_from_tilings(kind, kappa, m_max, tilings, orientation="preserving") -> CensusRecord:
    per_m = Counter(t.num_faces for t in tilings)
    rows = []
    running = 0
    for m in range(1, m_max + 1):
        running += per_m.get(m, 0)
        rows.append(CensusRow(m, running))
    return CensusRecord(kind, tuple(kappa), rows, orientation, tilings=list(tilings))


def census(
    kind: str,
    kappa: Sequence[int],
    m_max: int,
    *,
    orientation: str = "preserving",
    workers: int = 1,
    budget_darts: int = DEFAULT_BUDGET_DARTS,
    classify: bool = True,
) -> CensusRecord:
    """Cumulative class counts for every m <= m_max, split by holonomy order."""
    kind, kappa = check_profile(kind, kappa)
    tilings = enumerate_tilings(
        kind, kappa, m_max, orientation=orientation, workers=workers, budget_darts=budget_darts
    )
    record = census_from_tilings(kind, kappa, m_max, tilings, orientation)
    if classify:
        from .cover import classify_census

        record = classify_census(record, tilings)
    return record


# ---------------------------------------------------------------------------
# square-tiled surfaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StratumSignature:
    k_vector: tuple[int, ...]

    def __post_init__(self):
        kv = tuple(sorted(int(x) for x in self.k_vector))
        if any(x < 0 for x in kv):
            raise InvalidInput("zero orders must be non-negative")
        if sum(kv) % 2:
            raise InvalidInput("zero orders must have even sum 2g - 2")
        object.__setattr__(self, "k_vector", kv)

    @property
    def genus(self) -> int:
        return sum(self.k_vector) // 2 + 1

    @property
    def dimension(self) -> int:
        return 2 * self.genus + len(self.k_vector) - 1

    def commutator_type(self) -> tuple[int, ...]:
        return tuple(sorted(x + 1 for x in self.k_vector if x > 0))


def commutator(h: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    """``v^-1 h^-1 v h`` (apply h first)."""
    n = len(h)
    hi = [0] * n
    vi = [0] * n
    for i in range(n):
        hi[h[i]] = i
        vi[v[i]] = i
    return tuple(vi[hi[v[h[i]]]] for i in range(n))


def nontrivial_cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    n = len(perm)
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        length = 0
        d = s
        while not seen[d]:
            seen[d] = True
            d = perm[d]
            length += 1
        if length > 1:
            out.append(length)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _origami_types(n: int) -> Counter:
    return Counter(
        nontrivial_cycle_type(commutator(h, v)) for h, v in kernels.orderly_origamis(n)
    )


def origamis(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Canonical transitive pairs (h, v) in Sym(n), one per conjugacy class."""
    return kernels.orderly_origamis(n)


def count_square_tiled(
    stratum: StratumSignature | Sequence[int], m: int, *, max_squares: int = ORIGAMI_MAX_SQUARES
) -> int:
    """Square-tiled surfaces with at most ``m`` squares in the stratum.

    Zeros of order 0 are marked points and impose nothing on the commutator.
    """
    if not isinstance(stratum, StratumSignature):
        stratum = StratumSignature(tuple(stratum))
    if m > max_squares:
        raise ResourceBudgetExceeded(f"origami counting is capped at {max_squares} squares")
    target = stratum.commutator_type()
    return sum(_origami_types(n)[target] for n in range(1, m + 1))


def brute_force_square_tiled(stratum: StratumSignature | Sequence[int], m: int) -> int:
    """Oracle: all pairs in Sym(N)^2, orbits under conjugation by all of Sym(N)."""
    if not isinstance(stratum, StratumSignature):
        stratum = StratumSignature(tuple(stratum))
    if m > 5:
        raise ResourceBudgetExceeded("brute-force origami counting is capped at 5 squares")
    target = stratum.commutator_type()
    total = 0
    for n in range(1, m + 1):
        perms = list(itertools.permutations(range(n)))
        seen = set()
        for h in perms:
            for v in perms:
                if (h, v) in seen:
                    continue
                if not _transitive(h, v):
                    continue
                orbit = set()
                for g in perms:
                    gi = [0] * n
                    for i, x in enumerate(g):
                        gi[x] = i
                    orbit.add(
                        (
                            tuple(g[h[gi[i]]] for i in range(n)),
                            tuple(g[v[gi[i]]] for i in range(n)),
                        )
                    )
                seen |= orbit
                if nontrivial_cycle_type(commutator(h, v)) == target:
                    total += 1
    return total


def growth_exponent(kind: str, kappa: Sequence[int]) -> int:
    """2g + n - 2."""
    return 2 * profile_genus(kind, kappa) + len(kappa) - 2


def oracle_range(kind: str) -> int:
    return NAIVE_MAX_FACES[normalize_kind(kind)]


__all__ = [
    "CensusRecord",
    "CensusRow",
    "StratumSignature",
    "admissible_k",
    "admissible_profiles",
    "census",
    "count_square_tiled",
    "enumerate_all_profiles",
    "enumerate_tilings",
    "exhaustive_enumerate",
    "naive_enumerate",
]
