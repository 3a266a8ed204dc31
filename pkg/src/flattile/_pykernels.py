"""Pure-Python search kernels.

This is the reference implementation of the hot loops; ``_ckernels`` is a
line-by-line Cython port. Both expose the same functions with the same output
order, and ``flattile.kernels`` picks one at import time.

Conventions: darts are ``0..N-1``; ``alpha`` is the edge involution, ``sigma``
the counterclockwise vertex rotation and faces are the orbits of
``phi = sigma o alpha``. A *code* is the flat tuple
``(l(alpha(d0)), l(sigma(d0)), l(alpha(d1)), ...)`` obtained by labelling
darts in breadth-first order from a root.
"""

import sys

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def bfs_code(alpha, sigma, root):
    n = len(alpha)
    label = [-1] * n
    order = [root]
    label[root] = 0
    code = []
    p = 0
    while p < len(order):
        d = order[p]
        for img in (alpha[d], sigma[d]):
            if label[img] < 0:
                label[img] = len(order)
                order.append(img)
            code.append(label[img])
        p += 1
    return tuple(code)


def _compare_from_root(alpha, sigma, root, best):
    """Return -1/0/+1 comparing the code from ``root`` with ``best``.

    Stops at the first differing entry, so losing roots cost little.
    """
    n = len(alpha)
    label = [-1] * n
    order = [root]
    label[root] = 0
    pos = 0
    p = 0
    while p < len(order):
        d = order[p]
        for img in (alpha[d], sigma[d]):
            if label[img] < 0:
                label[img] = len(order)
                order.append(img)
            c = label[img]
            b = best[pos]
            if c != b:
                return -1 if c < b else 1
            pos += 1
        p += 1
    return 0


def canonical_code(alpha, sigma):
    n = len(alpha)
    best = bfs_code(alpha, sigma, 0)
    for r in range(1, n):
        if _compare_from_root(alpha, sigma, r, best) < 0:
            best = bfs_code(alpha, sigma, r)
    return best


def automorphism_count(alpha, sigma):
    """Number of roots whose BFS code equals the canonical code."""
    best = canonical_code(alpha, sigma)
    return sum(
        1 for r in range(len(alpha)) if _compare_from_root(alpha, sigma, r, best) == 0
    )


# ---------------------------------------------------------------------------
# orderly generation of maps with uniform face degree
# ---------------------------------------------------------------------------


class _MapSearch:
    def __init__(self, face_deg, n, need, regular):
        self.D = face_deg
        self.N = n
        self.regular = regular
        if need is None:
            self.need = None
            self.maxval = n
        else:
            self.need = list(need)
            self.maxval = max(
                [regular] + [e for e, c in enumerate(need) if c > 0]
            )
        self.alpha = [-1] * n
        self.sigma = [-1] * n
        self.sinv = [-1] * n
        self.phi = [-1] * n
        self.pinv = [-1] * n
        self.nlab = 1
        self.results = []
        self.nodes = 0

    # partial-code comparison of root r against root 0 over processed darts
    def _root_beats_zero(self, r, upto):
        alpha, sigma = self.alpha, self.sigma
        label = {r: 0}
        order = [r]
        p = 0
        while p <= upto and p < len(order):
            d = order[p]
            for which in (0, 1):
                img = alpha[d] if which == 0 else sigma[d]
                if img < 0:
                    return False
                c = label.get(img)
                if c is None:
                    c = len(order)
                    label[img] = c
                    order.append(img)
                ref = alpha[p] if which == 0 else sigma[p]
                if c != ref:
                    return c < ref
            p += 1
        return False

    def _is_minimal(self, upto):
        for r in range(1, self.nlab):
            if self._root_beats_zero(r, upto):
                return False
        return True

    def _phi_ok(self, a):
        # chain through dart a after setting phi[a]
        D = self.D
        phi, pinv = self.phi, self.pinv
        length = 1
        x = phi[a]
        while x >= 0 and x != a:
            nxt = phi[x]
            if nxt < 0:
                break
            length += 1
            x = nxt
            if length > D:
                return False
        if x == a:
            return length == D
        y = a
        while pinv[y] >= 0:
            y = pinv[y]
            length += 1
            if length > D - 1:
                return False
        return length <= D - 1

    def _sigma_close(self, i):
        """Inspect the sigma chain through i; return (ok, closed_length)."""
        sigma, sinv = self.sigma, self.sinv
        length = 1
        x = sigma[i]
        while x >= 0 and x != i:
            nxt = sigma[x]
            if nxt < 0:
                break
            length += 1
            x = nxt
        if x == i:
            return True, length
        y = i
        while sinv[y] >= 0:
            y = sinv[y]
            length += 1
        return length + 1 <= self.maxval, 0

    def run(self):
        if self.N >= 2:
            self._step(0, 0)
        return self.results

    def _step(self, i, phase):
        self.nodes += 1
        N = self.N
        if i == self.nlab:
            if i == N and self._complete():
                self.results.append((tuple(self.alpha), tuple(self.sigma)))
            return
        if phase == 0:
            if self.alpha[i] >= 0:
                self._step(i, 1)
                return
            alpha = self.alpha
            for j in range(i + 1, self.nlab):
                if alpha[j] < 0:
                    alpha[i] = j
                    alpha[j] = i
                    self._step(i, 1)
                    alpha[i] = -1
                    alpha[j] = -1
            if self.nlab < N:
                j = self.nlab
                self.nlab += 1
                alpha[i] = j
                alpha[j] = i
                self._step(i, 1)
                alpha[i] = -1
                alpha[j] = -1
                self.nlab -= 1
            return
        # phase 1: choose sigma(i)
        sinv = self.sinv
        for x in range(self.nlab + (1 if self.nlab < N else 0)):
            if x < self.nlab and sinv[x] >= 0:
                continue
            fresh = x == self.nlab
            if fresh:
                self.nlab += 1
            self._assign_sigma(i, x)
            self._unassign_sigma(i, x)
            if fresh:
                self.nlab -= 1

    def _assign_sigma(self, i, x):
        self.sigma[i] = x
        self.sinv[x] = i
        a = self.alpha[i]
        self.phi[a] = x
        self.pinv[x] = a
        if not self._phi_ok(a):
            return
        ok, closed = self._sigma_close(i)
        if not ok:
            return
        need = self.need
        if closed and closed != self.regular:
            if need is not None:
                if closed >= len(need) or need[closed] <= 0:
                    return
                need[closed] -= 1
        if self._is_minimal(i):
            self._step(i + 1, 0)
        if closed and closed != self.regular and need is not None:
            need[closed] += 1

    def _unassign_sigma(self, i, x):
        a = self.alpha[i]
        self.sigma[i] = -1
        self.sinv[x] = -1
        self.phi[a] = -1
        self.pinv[x] = -1

    def _complete(self):
        if self.need is not None and any(self.need):
            return False
        return True


def orderly_maps(face_deg, n, need, regular):
    """Canonical maps on exactly ``n`` darts with all faces of degree ``face_deg``.

    ``need[e]`` is the number of vertices of valency ``e != regular`` still
    required; ``need=None`` accepts every valency. Results come in generation
    order (lexicographic in the canonical code).
    """
    search = _MapSearch(face_deg, n, need, regular)
    return search.run()


# ---------------------------------------------------------------------------
# naive oracle: glue faces one at a time, deduplicate by canonical code
# ---------------------------------------------------------------------------


def naive_maps(face_deg, m):
    """All connected gluings of ``m`` faces, deduplicated by canonical code.

    Faces are opened in discovery order and a newly opened face is attached
    through its first dart; that removes only the face-relabelling symmetry,
    so every isomorphism class is still reached. Returns ``{code: (alpha,
    sigma)}`` keeping the first labelled representative met.
    """
    D = face_deg
    n = D * m
    if n % 2:
        return {}
    phi = [f * D + (j + 1) % D for f in range(m) for j in range(D)]
    alpha = [-1] * n
    out = {}

    def leaf():
        sigma = tuple(phi[alpha[d]] for d in range(n))
        al = tuple(alpha)
        code = canonical_code(al, sigma)
        if code not in out:
            out[code] = (al, sigma)

    def rec(opened):
        u = 0
        lim = opened * D
        while u < lim and alpha[u] >= 0:
            u += 1
        if u == lim:
            if opened == m:
                leaf()
            return
        for v in range(u + 1, lim):
            if alpha[v] < 0:
                alpha[u] = v
                alpha[v] = u
                rec(opened)
                alpha[u] = alpha[v] = -1
        if opened < m:
            v = lim
            alpha[u] = v
            alpha[v] = u
            rec(opened + 1)
            alpha[u] = alpha[v] = -1

    rec(1)
    return out


# ---------------------------------------------------------------------------
# origamis: transitive permutation pairs up to simultaneous conjugation
# ---------------------------------------------------------------------------


class _OrigamiSearch:
    def __init__(self, n):
        self.N = n
        self.h = [-1] * n
        self.v = [-1] * n
        self.hinv = [-1] * n
        self.vinv = [-1] * n
        self.nlab = 1
        self.results = []

    def _root_beats_zero(self, r, upto):
        h, v = self.h, self.v
        label = {r: 0}
        order = [r]
        p = 0
        while p <= upto and p < len(order):
            d = order[p]
            for which in (0, 1):
                img = h[d] if which == 0 else v[d]
                if img < 0:
                    return False
                c = label.get(img)
                if c is None:
                    c = len(order)
                    label[img] = c
                    order.append(img)
                ref = h[p] if which == 0 else v[p]
                if c != ref:
                    return c < ref
            p += 1
        return False

    def _is_minimal(self, upto):
        for r in range(1, self.nlab):
            if self._root_beats_zero(r, upto):
                return False
        return True

    def run(self):
        self._step(0, 0)
        return self.results

    def _step(self, i, phase):
        N = self.N
        if i == self.nlab:
            if i == N:
                self.results.append((tuple(self.h), tuple(self.v)))
            return
        perm, inv = (self.h, self.hinv) if phase == 0 else (self.v, self.vinv)
        for x in range(self.nlab + (1 if self.nlab < N else 0)):
            if x < self.nlab and inv[x] >= 0:
                continue
            fresh = x == self.nlab
            if fresh:
                self.nlab += 1
            perm[i] = x
            inv[x] = i
            if phase == 0:
                self._step(i, 1)
            elif self._is_minimal(i):
                self._step(i + 1, 0)
            perm[i] = -1
            inv[x] = -1
            if fresh:
                self.nlab -= 1


def orderly_origamis(n):
    """One canonical representative per conjugacy class of transitive pairs."""
    return _OrigamiSearch(n).run()
