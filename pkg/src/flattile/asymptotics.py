"""Growth fitting, constant estimation and rational recognition for censuses.

Counts are cumulative class counts ``#T(kappa, m)`` (tilings with at most m
faces). The fitted exponent is compared with ``D = 2g + n - 2``. Constants are
reported raw (per base face count m) and cover-normalized, dividing by the
area factor ``(sqrt(3)/4 * k)^D`` for triangles or ``k^D`` for squares.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cmap import SQUARE, TRIANGLE, normalize_kind
from .errors import InsufficientData, InvalidInput

DEFAULT_Q_MAX = 10**6
MIN_NONZERO = 5
RECOGNITION_WARNING = (
    "near-rational values are suggestive only: no denominator bound is known "
    "and desk-scale constants have not converged"
)


def area_factor(kind: str, k: int) -> float:
    """Area of one base face measured in cover units: sqrt(3)/4 * k or k."""
    kind = normalize_kind(kind)
    return math.sqrt(3) / 4 * k if kind == TRIANGLE else float(k)


def recognition_bases(kind: str, D: int) -> dict[str, float]:
    return {"(sqrt3*pi)^D": (math.sqrt(3) * math.pi) ** D, "pi^D": math.pi**D}


@dataclass(frozen=True)
class RationalCandidate:
    numerator: int
    denominator: int
    residual: float

    def to_dict(self) -> dict:
        return asdict(self)


def rational_recognition(x: float, q_max: int = DEFAULT_Q_MAX) -> list[RationalCandidate]:
    """Continued-fraction convergents of x with denominator <= q_max, best first."""
    if not math.isfinite(x):
        raise InvalidInput(f"cannot recognise a non-finite value {x!r}")
    if q_max < 1:
        raise InvalidInput("q_max must be at least 1")
    rest = Fraction(x)
    h_prev, h = 1, math.floor(rest)
    k_prev, k = 0, 1
    out = [Fraction(h, k)]
    rest -= math.floor(rest)
    while rest:
        rest = 1 / rest
        a = math.floor(rest)
        rest -= a
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k > q_max:
            break
        out.append(Fraction(h, k))
    cands = [RationalCandidate(c.numerator, c.denominator, abs(x - c.numerator / c.denominator)) for c in out]
    return sorted(cands, key=lambda c: (c.residual, c.denominator))


@dataclass
class FitResult:
    D_expected: int
    slope_estimate: float
    intercept: float
    constant_raw: float
    constant_estimate: float
    normalization: float
    k: int
    tail: list[int]
    points: list[tuple[int, int]]
    candidates: dict[str, list[RationalCandidate]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["candidates"] = {b: [c.to_dict() for c in cs] for b, cs in self.candidates.items()}
        return d


def _points(census) -> list[tuple[int, int]]:
    if hasattr(census, "counts"):
        return [(int(m), int(c)) for m, c in census.counts()]
    return [(int(m), int(c)) for m, c in census]


def fit_growth(
    census,
    g: int,
    n: int,
    *,
    kind: str = SQUARE,
    k: int = 1,
    tail_fraction: float = 0.5,
    q_max: int | None = None,
) -> FitResult:
    """Least-squares slope of (log m, log count) over the tail of the census.

    ``census`` is a CensusRecord or a sequence of (m, count). The tail is the
    largest ``ceil(tail_fraction * N)`` of the N nonzero entries (at least 2).
    """
    D = 2 * g + n - 2
    pts = sorted((m, c) for m, c in _points(census) if c > 0 and m > 0)
    if len(pts) < MIN_NONZERO:
        raise InsufficientData(f"need at least {MIN_NONZERO} nonzero counts, got {len(pts)}")
    if not 0 < tail_fraction <= 1:
        raise InvalidInput("tail fraction must lie in (0, 1]")
    size = max(2, math.ceil(tail_fraction * len(pts)))
    tail = pts[-size:]
    xs = np.log([m for m, _ in tail])
    ys = np.log([c for _, c in tail])
    slope, intercept = np.polyfit(xs, ys, 1)
    raw = float(np.mean([c / m**D for m, c in tail]))
    norm = area_factor(kind, k) ** D
    res = FitResult(
        D,
        float(slope),
        float(intercept),
        raw,
        raw / norm,
        area_factor(kind, k),
        k,
        [m for m, _ in tail],
        pts,
    )
    if q_max is not None:
        res.candidates = {
            name: rational_recognition(res.constant_estimate / base, q_max)[:5]
            for name, base in recognition_bases(kind, D).items()
        }
    return res


# ---------------------------------------------------------------------------
# end-to-end report
# ---------------------------------------------------------------------------


@dataclass
class ReportOptions:
    orientation: str = "preserving"
    workers: int = 1
    budget_darts: int | None = None
    seed: int | None = 0
    q_max: int = DEFAULT_Q_MAX
    tail_fraction: float = 0.5
    check_covers: bool = True


@dataclass
class ReportBundle:
    kind: str
    profile: tuple[int, ...]
    m_max: int
    census: object
    D_expected: int
    fits: dict[str, dict]
    invariant_failures: list[str]
    orbit_sizes: dict[int, dict[int, int]]

    @property
    def ok(self) -> bool:
        return not self.invariant_failures

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 4

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "profile": list(self.profile),
            "m_max": self.m_max,
            "D_expected": self.D_expected,
            "counts": [
                {"m": r.m, "total": r.total, "per_k": {str(k): v for k, v in r.per_k.items()}}
                for r in self.census.rows
            ],
            "fits": self.fits,
            "orbit_sizes": {str(k): {str(s): c for s, c in v.items()} for k, v in self.orbit_sizes.items()},
            "invariant_failures": self.invariant_failures,
            "ok": self.ok,
            "warning": RECOGNITION_WARNING,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        return self.census.to_csv()


def end_to_end_report(
    kind: str, kappa: Sequence[int], m_max: int, options: ReportOptions | None = None
) -> ReportBundle:
    """census -> classify -> cover checks -> per-k normalization -> fit -> recognition."""
    from .cover import audit_tiling
    from .enumeration import DEFAULT_BUDGET_DARTS, census, check_profile, profile_genus

    opts = options or ReportOptions()
    kind, kappa = check_profile(kind, kappa)
    rec = census(
        kind,
        kappa,
        m_max,
        orientation=opts.orientation,
        workers=opts.workers,
        budget_darts=opts.budget_darts or DEFAULT_BUDGET_DARTS,
        classify=True,
    )
    g = profile_genus(kind, kappa)
    n = len(kappa)
    D = 2 * g + n - 2

    failures: list[str] = []
    orbit_sizes: dict[int, dict[int, int]] = {}
    if opts.check_covers:
        for idx, t in enumerate(rec.tilings):
            try:
                audit = audit_tiling(t, seed=None if opts.seed is None else opts.seed + idx)
            except Exception as exc:  # collected, reported through the exit code
                failures.append(f"tiling {idx}: {exc}")
                continue
            failures.extend(f"tiling {idx}: {msg}" for msg in audit.failures)
            if audit.orbit_size is not None:
                sizes = orbit_sizes.setdefault(audit.k, {})
                sizes[audit.orbit_size] = sizes.get(audit.orbit_size, 0) + 1

    fits: dict[str, dict] = {}
    series = {"total": (1, rec.counts())}
    ks = sorted({k for r in rec.rows for k in r.per_k})
    for k in ks:
        series[f"k={k}"] = (k, [(r.m, r.per_k.get(k, 0)) for r in rec.rows])
    for name, (k, pts) in series.items():
        try:
            fit = fit_growth(
                pts, g, n, kind=kind, k=k, tail_fraction=opts.tail_fraction, q_max=opts.q_max
            )
            fits[name] = fit.to_dict()
        except InsufficientData as exc:
            fits[name] = {"status": "InsufficientData", "message": str(exc)}
    return ReportBundle(kind, kappa, m_max, rec, D, fits, failures, orbit_sizes)
