"""Local volume forms on the positive cone of a Hermitian form of signature (p, q).

Coordinates: ``V = C^d`` with ``h(z, z) = sum_{i<p} |z_i|^2 - sum_{i>=p} |z_i|^2``.
The chart normalizes the first (positive) coordinate to 1, so a chart point
``w`` in ``C^{d-1}`` lists the remaining p-1 positive directions first and the
q negative ones after, and ``h(w) = 1 + sum eps_j |w_j|^2``.

Densities are taken against ``prod (i/2) dw_j ^ dw_j-bar`` (Lebesgue measure
in the real coordinates of w), except ``curvature_top_density`` which is the
coefficient of ``(i Theta)^{d-1}`` against ``prod i dw_j ^ dw_j-bar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.linalg import expm

from .errors import OutsidePositiveCone, PreconditionError


def _signs(p: int, q: int) -> np.ndarray:
    if p < 1 or q < 0:
        raise PreconditionError(f"need p >= 1 and q >= 0, got ({p}, {q})")
    return np.array([1.0] * (p - 1) + [-1.0] * q)


def _as_point(p: int, q: int, w) -> np.ndarray:
    w = np.asarray(w, dtype=complex).reshape(-1)
    if w.size != p + q - 1:
        raise PreconditionError(f"chart point must have {p + q - 1} coordinates, got {w.size}")
    return w


def h_value(p: int, q: int, w) -> float:
    eps = _signs(p, q)
    w = _as_point(p, q, w)
    return float(1.0 + np.sum(eps * np.abs(w) ** 2))


@dataclass(frozen=True)
class ChartPoint:
    p: int
    q: int
    w: tuple[complex, ...]
    h_value: float


def chart_point(p: int, q: int, w) -> ChartPoint:
    h = h_value(p, q, w)
    if h <= 0:
        raise OutsidePositiveCone(f"h(w) = {h} <= 0; the point is not in the positive cone")
    return ChartPoint(p, q, tuple(_as_point(p, q, w)), h)


def _checked_h(p, q, w) -> float:
    return chart_point(p, q, w).h_value


def lambda_density(p: int, q: int, w) -> float:
    return 1.0 / _checked_h(p, q, w) ** (p + q)


def mu_density(p: int, q: int, w) -> float:
    d = p + q
    return math.pi / d * lambda_density(p, q, w)


def curvature_matrix(p: int, q: int, w) -> np.ndarray:
    """Coefficients Theta_jk of Theta = -d d-bar log h = sum Theta_jk dw_j ^ dw_k-bar."""
    eps = _signs(p, q)
    w = _as_point(p, q, w)
    h = _checked_h(p, q, w)
    dh = eps * np.conj(w)  # d h / d w_j
    return -np.diag(eps) / h + np.outer(dh, np.conj(dh)) / h**2


def curvature_matrix_fd(p: int, q: int, w, step: float = 1e-4) -> np.ndarray:
    """Theta_jk from central differences of log h with one Richardson step."""
    w = _as_point(p, q, w)
    step *= min(1.0, _checked_h(p, q, w))  # log h varies on the scale of h near the boundary
    return (4 * _ddbar_fd(p, q, w, step / 2) - _ddbar_fd(p, q, w, step)) / 3


def _ddbar_fd(p, q, w, step):
    n = w.size
    eps = np.concatenate([_signs(p, q)] * 2)
    x0 = np.concatenate([w.real, w.imag])
    h0 = h_value(p, q, w)

    def f(dx):
        # log h(x0 + dx) - log h(x0), evaluated in difference form to avoid cancellation
        return math.log1p(float(np.sum(eps * dx * (2 * x0 + dx))) / h0)

    m = 2 * n
    hess = np.zeros((m, m))
    f0 = 0.0
    for a in range(m):
        for b in range(a, m):
            if a == b:
                e = np.zeros(m)
                e[a] = step
                val = (f(e) - 2 * f0 + f(-e)) / step**2
            else:
                ea = np.zeros(m)
                eb = np.zeros(m)
                ea[a] = step
                eb[b] = step
                val = (
                    f(ea + eb) - f(ea - eb) - f(-ea + eb) + f(-ea - eb)
                ) / (4 * step**2)
            hess[a, b] = hess[b, a] = val
    xx = hess[:n, :n]
    yy = hess[n:, n:]
    xy = hess[:n, n:]
    ddbar = 0.25 * ((xx + yy) + 1j * (xy - xy.T))
    return -ddbar


def curvature_top_density(p: int, q: int, w, method: str = "closed") -> float:
    """Coefficient of (i Theta)^{d-1} against prod i dw_j ^ dw_j-bar: (d-1)! det Theta."""
    d = p + q
    if d < 2:
        raise PreconditionError("curvature form needs d >= 2")
    theta = curvature_matrix(p, q, w) if method == "closed" else curvature_matrix_fd(p, q, w)
    return float(math.factorial(d - 1) * np.linalg.det(theta).real)


def expected_constant(p: int, q: int) -> float:
    d = p + q
    return (-1) ** (p - 1) * 2 * math.pi / (2**d * math.factorial(d))


def density_ratio(p: int, q: int, w, method: str = "closed") -> float:
    """d mu / (i Theta)^{d-1} at w (both against the same reference element)."""
    d = p + q
    return mu_density(p, q, w) / (2 ** (d - 1) * curvature_top_density(p, q, w, method))


def sample_chart_points(p: int, q: int, num_points: int, seed: int, radius: float = 1.2) -> np.ndarray:
    """Uniform points in the chart ball of the given radius with h(w) > 0."""
    n = p + q - 1
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < num_points:
        x = rng.normal(size=2 * n)
        x *= radius * rng.random() ** (1 / (2 * n)) / np.linalg.norm(x)
        w = x[:n] + 1j * x[n:]
        if h_value(p, q, w) > 0:
            out.append(w)
    return np.array(out).reshape(num_points, n)


@dataclass
class DensityReport:
    p: int
    q: int
    points: np.ndarray
    lambda_density: np.ndarray
    mu_density: np.ndarray
    curvature_top_density: np.ndarray
    ratio: np.ndarray
    expected_constant: float
    method: str = "closed"
    max_relative_deviation: float = field(init=False)

    def __post_init__(self):
        self.max_relative_deviation = float(
            np.max(np.abs(self.ratio - self.expected_constant)) / abs(self.expected_constant)
        )

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "method": self.method,
            "expected_constant": self.expected_constant,
            "max_relative_deviation": self.max_relative_deviation,
            "points": [[[z.real, z.imag] for z in w] for w in self.points],
            "lambda_density": self.lambda_density.tolist(),
            "mu_density": self.mu_density.tolist(),
            "curvature_top_density": self.curvature_top_density.tolist(),
            "ratio": self.ratio.tolist(),
        }


def density_report(p: int, q: int, num_points: int, seed: int, method: str = "closed") -> DensityReport:
    if p + q < 2:
        raise PreconditionError("the ratio identity needs d = p + q >= 2")
    pts = sample_chart_points(p, q, num_points, seed)
    lam = np.array([lambda_density(p, q, w) for w in pts])
    mu = np.array([mu_density(p, q, w) for w in pts])
    curv = np.array([curvature_top_density(p, q, w, method) for w in pts])
    d = p + q
    ratio = mu / (2 ** (d - 1) * curv)
    return DensityReport(p, q, pts, lam, mu, curv, ratio, expected_constant(p, q), method)


def ratio_check(p: int, q: int, num_points: int, seed: int, method: str = "closed") -> float:
    """Max relative deviation of d mu / (i Theta)^{d-1} from its constant."""
    return density_report(p, q, num_points, seed, method).max_relative_deviation


# ---------------------------------------------------------------------------
# the pushforward identity by Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    std_error: float
    exact: float

    @property
    def relative_error(self) -> float:
        return abs(self.estimate - self.exact) / abs(self.exact)


def mu_box_integral(p: int, q: int, half_width: float) -> float:
    """Integral of (pi/d) h^{-d} over the chart box |Re w_j|, |Im w_j| <= half_width."""
    d = p + q
    n = d - 1
    if n == 0:
        return math.pi
    eps = _signs(p, q)

    def f(*x):
        h = 1.0 + sum(eps[j] * (x[j] ** 2 + x[n + j] ** 2) for j in range(n))
        return math.pi / d / h**d

    val, _ = integrate.nquad(f, [(-half_width, half_width)] * (2 * n), opts={"epsabs": 1e-11})
    return float(val)


def monte_carlo_mu(p: int, q: int, half_width: float, samples: int, seed: int) -> MonteCarloResult:
    """Lebesgue volume of {z : 0 < h(z) <= 1, [z] in box} estimated by sampling z.

    z = (z_0, z_0 w) with w in the chart box; sampling is uniform in a
    coordinate box of C^d that contains this region.
    """
    d = p + q
    n = d - 1
    eps = _signs(p, q)
    corners = np.array(np.meshgrid(*[[-half_width, half_width]] * (2 * n))).reshape(2 * n, -1).T
    hmin = 1.0
    for c in corners:
        hmin = min(hmin, 1.0 + float(np.sum(eps * (c[:n] ** 2 + c[n:] ** 2))))
    if hmin <= 0:
        raise OutsidePositiveCone("chart box leaves the positive cone")
    rho = 1 / math.sqrt(hmin)  # |z_0| <= rho
    side_rest = math.sqrt(2) * half_width * rho
    rng = np.random.default_rng(seed)
    z0 = rng.uniform(-rho, rho, size=(samples, 2))
    rest = rng.uniform(-side_rest, side_rest, size=(samples, 2 * n))
    z0c = z0[:, 0] + 1j * z0[:, 1]
    restc = rest[:, :n] + 1j * rest[:, n:]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = restc / z0c[:, None]
    in_box = np.all((np.abs(w.real) <= half_width) & (np.abs(w.imag) <= half_width), axis=1)
    hz = np.abs(z0c) ** 2 + np.sum(eps * np.abs(restc) ** 2, axis=1)
    inside = in_box & (hz > 0) & (hz <= 1)
    box_volume = (2 * rho) ** 2 * (2 * side_rest) ** (2 * n)
    frac = inside.mean()
    est = box_volume * frac
    err = box_volume * math.sqrt(frac * (1 - frac) / samples)
    return MonteCarloResult(float(est), float(err), mu_box_integral(p, q, half_width))


# ---------------------------------------------------------------------------
# U(p, q) action on the chart
# ---------------------------------------------------------------------------


def random_unitary_pq(p: int, q: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """exp(J K) with K anti-Hermitian preserves h = diag(1 x p, -1 x q)."""
    d = p + q
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    k = scale * (a - a.conj().T) / 2
    j = np.diag([1.0] * p + [-1.0] * q)
    return expm(j @ k)


def act_on_chart(g: np.ndarray, w) -> np.ndarray:
    v = np.concatenate([[1.0], np.asarray(w, dtype=complex)])
    u = g @ v
    if abs(u[0]) < 1e-12:
        raise OutsidePositiveCone("image leaves the chart")
    return u[1:] / u[0]


def chart_jacobian(g: np.ndarray, w, step: float = 1e-6) -> np.ndarray:
    """Holomorphic Jacobian d(g.w)/dw by complex-step differences."""
    w = np.asarray(w, dtype=complex)
    n = w.size
    jac = np.zeros((n, n), dtype=complex)
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = step
        jac[:, k] = (act_on_chart(g, w + e) - act_on_chart(g, w - e)) / (2 * step)
    return jac
