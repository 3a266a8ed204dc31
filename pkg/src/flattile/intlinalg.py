"""Exact integer and rational linear algebra.

Smith and Hermite normal forms are implemented here with explicit unimodular
transforms (the homology engine needs them). Ranks of the larger cochain
matrices go through FLINT when available.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

try:
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        out.append([sum(row[k] * b[k][j] for k in range(inner) if row[k]) for j in range(cols)])
    return out


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def smith_normal_form(a: Sequence[Sequence[int]]):
    """Return ``(D, U, V, V_inv, U_inv)`` with ``U a V = D`` diagonal.

    ``U`` and ``V`` are unimodular; the nonzero diagonal entries are positive
    and each divides the next.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u = identity(m)
    v = identity(n)
    vinv = identity(n)
    uinv = identity(m)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rd, rs = d[dst], d[src]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        ud, us = u[dst], u[src]
        for k in range(m):
            if us[k]:
                ud[k] += q * us[k]
        for row in uinv:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in d:
            if row[src]:
                row[dst] += q * row[src]
        for row in v:
            if row[src]:
                row[dst] += q * row[src]
        rs, rd = vinv[src], vinv[dst]
        for k in range(n):
            if rd[k]:
                rs[k] -= q * rd[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = d[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            piv = d[t][t]
            moved = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // piv))
            nz = [(abs(d[i][t]), i) for i in range(t + 1, m) if d[i][t]]
            if nz:
                swap_rows(t, min(nz)[1])
                continue
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // piv))
            nz = [(abs(d[t][j]), j) for j in range(t + 1, n) if d[t][j]]
            if nz:
                swap_cols(t, min(nz)[1])
                continue
            for i in range(t + 1, m):
                if any(x % piv for x in d[i][t + 1 :]):
                    add_row(t, i, 1)
                    moved = True
                    break
            if not moved:
                break
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
            for row in uinv:
                row[t] = -row[t]
        t += 1
    return d, u, v, vinv, uinv


def diagonal(d: Matrix) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def _kernel_from_snf(d, v, vinv, n):
    rank = len(diagonal(d))
    basis = [[v[i][j] for i in range(n)] for j in range(rank, n)]

    def coords(x):
        return [sum(vinv[j][i] * x[i] for i in range(n) if x[i]) for j in range(rank, n)]

    return basis, coords


def kernel_basis(a: Sequence[Sequence[int]], n: int):
    """Saturated integer kernel basis and coordinate function (see above)."""
    if not a:
        basis = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
        return basis, lambda x: list(x)
    d, _, v, vinv, _ = smith_normal_form(a)
    return _kernel_from_snf(d, v, vinv, n)


def relative_homology(d1: Sequence[Sequence[int]], d2: Sequence[Sequence[int]], n_edges: int):
    """First homology ``ker d1 / im d2`` of a chain complex ``C2 -> C1 -> C0``.

    ``d1`` is ``|C0| x |C1|`` (rows may be absent when C0 is trivial), ``d2`` is
    ``|C1| x |C2|``. Returns ``(rank, torsion, free_reps, torsion_reps)`` with
    representatives as integer edge vectors.
    """
    kbasis, coords = kernel_basis(d1, n_edges)
    z = len(kbasis)
    n_faces = len(d2[0]) if d2 and d2[0] else 0
    # boundaries in kernel coordinates, z x |C2|
    cols = []
    for f in range(n_faces):
        col = [d2[e][f] for e in range(n_edges)]
        cols.append(coords(col))
    x = transpose(cols) if cols else [[] for _ in range(z)]
    if z == 0:
        return 0, [], [], []
    if n_faces == 0:
        reps = kbasis
        return z, [], reps, []
    dmat, _, _, _, uinv = smith_normal_form(x)
    diag = [dmat[i][i] for i in range(min(z, n_faces))]
    r = sum(1 for t in diag if t)
    # columns of K * U^-1 realise the Smith basis of the cycle lattice
    kmat = transpose(kbasis)  # n_edges x z
    new_basis = transpose(matmul(kmat, uinv))
    torsion = [t for t in diag[:r] if t > 1]
    torsion_reps = [new_basis[i] for i in range(r) if diag[i] > 1]
    free_reps = [new_basis[i] for i in range(r, z)]
    return z - r, torsion, free_reps, torsion_reps


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style HNF of the lattice spanned by ``rows`` (zero rows dropped).

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    m, n = len(a), len(a[0])
    out_row = 0
    for col in range(n):
        # gcd-combine rows out_row.. into a single pivot
        while True:
            nz = [(abs(a[i][col]), i) for i in range(out_row, m) if a[i][col]]
            if not nz:
                break
            _, p = min(nz)
            a[out_row], a[p] = a[p], a[out_row]
            piv = a[out_row][col]
            done = True
            for i in range(out_row + 1, m):
                if a[i][col]:
                    q = a[i][col] // piv
                    a[i] = [x - q * y for x, y in zip(a[i], a[out_row])]
                    if a[i][col]:
                        done = False
            if done:
                break
        if out_row < m and a[out_row][col]:
            if a[out_row][col] < 0:
                a[out_row] = [-x for x in a[out_row]]
            piv = a[out_row][col]
            for i in range(out_row):
                q = a[i][col] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[out_row])]
            out_row += 1
            if out_row == m:
                break
    return [row for row in a[:out_row]]


def saturate(rows: Sequence[Sequence[int]]) -> Matrix:
    """Basis of ``span_Q(rows) ∩ Z^n`` in Hermite normal form."""
    d, _, _, vinv, _ = smith_normal_form(rows)
    r = len([1 for i in range(min(len(d), len(d[0]))) if d[i][i]])
    # rows = U^-1 D V^-1, so the row space is spanned by the first r rows of V^-1
    return hermite_normal_form(vinv[:r])


# ---------------------------------------------------------------------------
# rational helpers
# ---------------------------------------------------------------------------


def rref_q(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def rank_q(rows: Sequence[Sequence]) -> int:
    """Exact rank over Q of an integer or rational matrix."""
    if not rows or not rows[0]:
        return 0
    if flint is not None:
        try:
            return flint.fmpz_mat([list(r) for r in rows]).rank()
        except TypeError:
            pass
    return _bareiss_rank([[Fraction(x) for x in r] for r in rows])


def _bareiss_rank(a) -> int:
    m, n = len(a), len(a[0])
    rank = 0
    for c in range(n):
        p = next((i for i in range(rank, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        piv = a[rank][c]
        for i in range(rank + 1, m):
            if a[i][c] != 0:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def nullspace_q(rows: Sequence[Sequence], n: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    red, piv = rref_q(rows)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for row, p in zip(red, piv):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def det_q(a: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        piv = m[c][c]
        det *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def inverse_q(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref_q(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def kron(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    out = []
    for ra in a:
        for rb in b:
            out.append([x * y for x in ra for y in rb])
    return out
