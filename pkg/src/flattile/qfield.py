"""Exact arithmetic in Q(i) and Q(omega), omega = exp(2 pi i / 3).

An element is ``a + b*u`` with rational ``a, b`` and ``u`` the generator of
the field (``u^2 = -1`` or ``u^2 = -1 - u``). Pairs ``(a, b)`` double as
integer lattice coordinates in the basis ``(1, u)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

GAUSSIAN = "gaussian"
EISENSTEIN = "eisenstein"
FIELDS = (GAUSSIAN, EISENSTEIN)

_GEN = {GAUSSIAN: 1j, EISENSTEIN: complex(-0.5, math.sqrt(3) / 2)}


def check_field(kind: str) -> str:
    kind = kind.lower()
    if kind not in FIELDS:
        raise ValueError(f"lattice kind must be one of {FIELDS}, got {kind!r}")
    return kind


def parse_rational(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


class QElem:
    """Immutable element ``a + b*u`` of Q(i) or Q(omega)."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: str, a=0, b=0):
        self.field = field
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, field: str, x) -> "QElem":
        if isinstance(x, QElem):
            return x
        if isinstance(x, (tuple, list)):
            return cls(field, parse_rational(x[0]), parse_rational(x[1]))
        return cls(field, parse_rational(x), 0)

    def _other(self, y) -> "QElem":
        return y if isinstance(y, QElem) else QElem(self.field, y)

    def __add__(self, y):
        y = self._other(y)
        return QElem(self.field, self.a + y.a, self.b + y.b)

    __radd__ = __add__

    def __neg__(self):
        return QElem(self.field, -self.a, -self.b)

    def __sub__(self, y):
        y = self._other(y)
        return QElem(self.field, self.a - y.a, self.b - y.b)

    def __rsub__(self, y):
        return self._other(y) - self

    def __mul__(self, y):
        y = self._other(y)
        a, b, c, d = self.a, self.b, y.a, y.b
        if self.field == GAUSSIAN:
            return QElem(self.field, a * c - b * d, a * d + b * c)
        return QElem(self.field, a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conj(self) -> "QElem":
        if self.field == GAUSSIAN:
            return QElem(self.field, self.a, -self.b)
        return QElem(self.field, self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        """``|x|^2``, a non-negative rational."""
        return (self * self.conj()).a

    def inverse(self) -> "QElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return QElem(self.field, c.a / n, c.b / n)

    def __truediv__(self, y):
        return self * self._other(y).inverse()

    def times_generator(self) -> "QElem":
        return self * QElem(self.field, 0, 1)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, y):
        if not isinstance(y, QElem):
            y = QElem(self.field, y)
        return self.field == y.field and self.a == y.a and self.b == y.b

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def real_part(self) -> tuple[Fraction, int]:
        """Real part as ``(q, e)`` meaning ``q * sqrt(3)**e``."""
        if self.field == GAUSSIAN:
            return self.a, 0
        return self.a - self.b / 2, 0

    def imag_part(self) -> tuple[Fraction, int]:
        if self.field == GAUSSIAN:
            return self.b, 0
        return self.b / 2, 1

    def __complex__(self):
        return float(self.a) + float(self.b) * _GEN[self.field]

    def __repr__(self):
        return f"QElem({self.field}, {self.a}, {self.b})"


def zero(field: str) -> QElem:
    return QElem(field, 0, 0)


def one(field: str) -> QElem:
    return QElem(field, 1, 0)


def dot(x: Sequence[QElem], y: Sequence[QElem]) -> QElem:
    out = zero(x[0].field)
    for p, q in zip(x, y):
        if p and q:
            out = out + p * q
    return out


def rref(rows: Sequence[Sequence[QElem]]):
    """Reduced row echelon form over the field; returns (rows, pivots)."""
    a = [list(r) for r in rows]
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def det(rows: Sequence[Sequence[QElem]]) -> QElem:
    a = [list(r) for r in rows]
    n = len(a)
    field = a[0][0].field
    out = one(field)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return zero(field)
        if p != c:
            a[c], a[p] = a[p], a[c]
            out = -out
        piv = a[c][c]
        out = out * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return out


def inverse_matrix(rows: Sequence[Sequence[QElem]]) -> list[list[QElem]]:
    n = len(rows)
    field = rows[0][0].field
    aug = [list(r) + [one(field) if i == j else zero(field) for j in range(n)] for i, r in enumerate(rows)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


def matmul(a, b):
    field = a[0][0].field
    out = []
    for row in a:
        out.append(
            [
                sum((row[k] * b[k][j] for k in range(len(b)) if row[k] and b[k][j]), zero(field))
                for j in range(len(b[0]))
            ]
        )
    return out


def abs_real_or_imaginary(x: QElem) -> tuple[Fraction, int]:
    """``|x|`` as ``(q, e)`` meaning ``q * sqrt(3)**e`` for x real or purely imaginary."""
    re, re_e = x.real_part()
    im, im_e = x.imag_part()
    if im == 0:
        return abs(re), re_e
    if re == 0:
        return abs(im), im_e
    raise ArithmeticError(f"{x!r} is neither real nor purely imaginary")
