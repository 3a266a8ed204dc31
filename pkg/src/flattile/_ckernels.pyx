# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; a port of ``_pykernels`` with identical output."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset


cdef inline int* _ialloc(Py_ssize_t n, int fill) except NULL:
    cdef int* p = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    cdef Py_ssize_t i
    if p == NULL:
        raise MemoryError()
    for i in range(n):
        p[i] = fill
    return p


# ---------------------------------------------------------------------------
# canonical codes
# ---------------------------------------------------------------------------

cdef int _cmp_root(int n, const int* alpha, const int* sigma, int root,
                   const int* best, int* label, int* order) noexcept nogil:
    """-1/0/+1 comparing the BFS code from ``root`` against ``best``."""
    cdef int i, p = 0, cnt = 1, pos = 0, d, img, c, w
    for i in range(n):
        label[i] = -1
    label[root] = 0
    order[0] = root
    while p < cnt:
        d = order[p]
        for w in range(2):
            img = alpha[d] if w == 0 else sigma[d]
            if label[img] < 0:
                label[img] = cnt
                order[cnt] = img
                cnt += 1
            c = label[img]
            if c != best[pos]:
                return -1 if c < best[pos] else 1
            pos += 1
        p += 1
    return 0


cdef void _code_from_root(int n, const int* alpha, const int* sigma, int root,
                          int* out, int* label, int* order) noexcept nogil:
    cdef int i, p = 0, cnt = 1, pos = 0, d, img, w
    for i in range(n):
        label[i] = -1
    label[root] = 0
    order[0] = root
    while p < cnt:
        d = order[p]
        for w in range(2):
            img = alpha[d] if w == 0 else sigma[d]
            if label[img] < 0:
                label[img] = cnt
                order[cnt] = img
                cnt += 1
            out[pos] = label[img]
            pos += 1
        p += 1


cdef int _canon(int n, const int* alpha, const int* sigma, int* best,
                int* label, int* order) noexcept nogil:
    """Write the canonical code into ``best``; return the automorphism count."""
    cdef int r, c, autos = 1
    _code_from_root(n, alpha, sigma, 0, best, label, order)
    for r in range(1, n):
        c = _cmp_root(n, alpha, sigma, r, best, label, order)
        if c < 0:
            _code_from_root(n, alpha, sigma, r, best, label, order)
            autos = 1
        elif c == 0:
            autos += 1
    return autos


def bfs_code(alpha, sigma, int root):
    cdef int n = len(alpha), i
    cdef int* a = _ialloc(n, 0)
    cdef int* s = _ialloc(n, 0)
    cdef int* out = _ialloc(2 * n, 0)
    cdef int* label = _ialloc(n, -1)
    cdef int* order = _ialloc(n, 0)
    try:
        for i in range(n):
            a[i] = alpha[i]
            s[i] = sigma[i]
        _code_from_root(n, a, s, root, out, label, order)
        return tuple([out[i] for i in range(2 * n)])
    finally:
        free(a); free(s); free(out); free(label); free(order)


def canonical_code(alpha, sigma):
    cdef int n = len(alpha), i
    cdef int* a = _ialloc(n, 0)
    cdef int* s = _ialloc(n, 0)
    cdef int* out = _ialloc(2 * n, 0)
    cdef int* label = _ialloc(n, -1)
    cdef int* order = _ialloc(n, 0)
    try:
        for i in range(n):
            a[i] = alpha[i]
            s[i] = sigma[i]
        _canon(n, a, s, out, label, order)
        return tuple([out[i] for i in range(2 * n)])
    finally:
        free(a); free(s); free(out); free(label); free(order)


def automorphism_count(alpha, sigma):
    cdef int n = len(alpha), i, autos
    cdef int* a = _ialloc(n, 0)
    cdef int* s = _ialloc(n, 0)
    cdef int* out = _ialloc(2 * n, 0)
    cdef int* label = _ialloc(n, -1)
    cdef int* order = _ialloc(n, 0)
    try:
        for i in range(n):
            a[i] = alpha[i]
            s[i] = sigma[i]
        autos = _canon(n, a, s, out, label, order)
        return autos
    finally:
        free(a); free(s); free(out); free(label); free(order)


# ---------------------------------------------------------------------------
# partial-code minimality shared by map and origami searches
# ---------------------------------------------------------------------------

cdef bint _root_beats_zero(int r, int upto, const int* p1, const int* p2,
                           int* label, int* order, int* touched) noexcept nogil:
    cdef int p = 0, cnt = 1, d, img, c, ref, w, ntouch = 1
    cdef bint result = False
    label[r] = 0
    order[0] = r
    touched[0] = r
    while p <= upto and p < cnt:
        d = order[p]
        for w in range(2):
            img = p1[d] if w == 0 else p2[d]
            if img < 0:
                result = False
                p = upto + 1
                break
            c = label[img]
            if c < 0:
                c = cnt
                label[img] = c
                order[cnt] = img
                touched[ntouch] = img
                ntouch += 1
                cnt += 1
            ref = p1[p] if w == 0 else p2[p]
            if c != ref:
                result = c < ref
                p = upto + 1
                break
        p += 1
    for w in range(ntouch):
        label[touched[w]] = -1
    return result


# ---------------------------------------------------------------------------
# orderly map search
# ---------------------------------------------------------------------------

cdef class _MapSearch:
    cdef int D, N, regular, maxval, nlab, has_need
    cdef int* alpha
    cdef int* sigma
    cdef int* sinv
    cdef int* phi
    cdef int* pinv
    cdef int* need
    cdef int* label
    cdef int* order
    cdef int* touched
    cdef list results
    cdef public long nodes

    def __cinit__(self, int face_deg, int n, need, int regular):
        cdef int e
        self.D = face_deg
        self.N = n
        self.regular = regular
        self.alpha = _ialloc(n, -1)
        self.sigma = _ialloc(n, -1)
        self.sinv = _ialloc(n, -1)
        self.phi = _ialloc(n, -1)
        self.pinv = _ialloc(n, -1)
        self.need = _ialloc(n + 1, 0)
        self.label = _ialloc(n, -1)
        self.order = _ialloc(n, 0)
        self.touched = _ialloc(n, 0)
        self.results = []
        self.nodes = 0
        self.nlab = 1
        if need is None:
            self.has_need = 0
            self.maxval = n
        else:
            self.has_need = 1
            self.maxval = regular
            for e in range(min(len(need), n + 1)):
                self.need[e] = need[e]
                if need[e] > 0 and e > self.maxval:
                    self.maxval = e
            for e in range(n + 1, len(need)):
                if need[e] > 0:
                    # unreachable valency: nothing can complete
                    self.maxval = -1

    def __dealloc__(self):
        free(self.alpha); free(self.sigma); free(self.sinv)
        free(self.phi); free(self.pinv); free(self.need)
        free(self.label); free(self.order); free(self.touched)

    cdef bint _is_minimal(self, int upto):
        cdef int r
        for r in range(1, self.nlab):
            if _root_beats_zero(r, upto, self.alpha, self.sigma,
                                self.label, self.order, self.touched):
                return False
        return True

    cdef bint _phi_ok(self, int a):
        cdef int D = self.D, length = 1, x, nxt, y
        x = self.phi[a]
        while x >= 0 and x != a:
            nxt = self.phi[x]
            if nxt < 0:
                break
            length += 1
            x = nxt
            if length > D:
                return False
        if x == a:
            return length == D
        y = a
        while self.pinv[y] >= 0:
            y = self.pinv[y]
            length += 1
            if length > D - 1:
                return False
        return length <= D - 1

    cdef int _sigma_close(self, int i):
        """Closed cycle length, 0 if open and feasible, -1 if infeasible."""
        cdef int length = 1, x, nxt, y
        x = self.sigma[i]
        while x >= 0 and x != i:
            nxt = self.sigma[x]
            if nxt < 0:
                break
            length += 1
            x = nxt
        if x == i:
            return length
        y = i
        while self.sinv[y] >= 0:
            y = self.sinv[y]
            length += 1
        return 0 if length + 1 <= self.maxval else -1

    def run(self):
        if self.N >= 2 and self.maxval >= 1:
            self._step(0, 0)
        return self.results

    cdef void _step(self, int i, int phase):
        cdef int j, x, lim, e
        cdef bint fresh, done
        self.nodes += 1
        if i == self.nlab:
            if i == self.N:
                done = True
                if self.has_need:
                    for e in range(self.N + 1):
                        if self.need[e] != 0:
                            done = False
                            break
                if done:
                    self.results.append((
                        tuple([self.alpha[j] for j in range(self.N)]),
                        tuple([self.sigma[j] for j in range(self.N)]),
                    ))
            return
        if phase == 0:
            if self.alpha[i] >= 0:
                self._step(i, 1)
                return
            for j in range(i + 1, self.nlab):
                if self.alpha[j] < 0:
                    self.alpha[i] = j
                    self.alpha[j] = i
                    self._step(i, 1)
                    self.alpha[i] = -1
                    self.alpha[j] = -1
            if self.nlab < self.N:
                j = self.nlab
                self.nlab += 1
                self.alpha[i] = j
                self.alpha[j] = i
                self._step(i, 1)
                self.alpha[i] = -1
                self.alpha[j] = -1
                self.nlab -= 1
            return
        lim = self.nlab + (1 if self.nlab < self.N else 0)
        for x in range(lim):
            if x < self.nlab and self.sinv[x] >= 0:
                continue
            fresh = x == self.nlab
            if fresh:
                self.nlab += 1
            self._assign_sigma(i, x)
            j = self.alpha[i]
            self.sigma[i] = -1
            self.sinv[x] = -1
            self.phi[j] = -1
            self.pinv[x] = -1
            if fresh:
                self.nlab -= 1

    cdef void _assign_sigma(self, int i, int x):
        cdef int a = self.alpha[i], closed
        cdef bint counted = False
        self.sigma[i] = x
        self.sinv[x] = i
        self.phi[a] = x
        self.pinv[x] = a
        if not self._phi_ok(a):
            return
        closed = self._sigma_close(i)
        if closed < 0:
            return
        if closed > 0 and closed != self.regular and self.has_need:
            if closed > self.N or self.need[closed] <= 0:
                return
            self.need[closed] -= 1
            counted = True
        if self._is_minimal(i):
            self._step(i + 1, 0)
        if counted:
            self.need[closed] += 1


def orderly_maps(int face_deg, int n, need, int regular):
    return _MapSearch(face_deg, n, need, regular).run()


# ---------------------------------------------------------------------------
# naive face-gluing oracle
# ---------------------------------------------------------------------------

cdef class _NaiveGluer:
    cdef int D, m, n
    cdef int* alpha
    cdef int* phi
    cdef int* sigma
    cdef int* best
    cdef int* label
    cdef int* order
    cdef dict out

    def __cinit__(self, int face_deg, int m):
        cdef int f, j
        self.D = face_deg
        self.m = m
        self.n = face_deg * m
        self.alpha = _ialloc(self.n, -1)
        self.phi = _ialloc(self.n, 0)
        self.sigma = _ialloc(self.n, 0)
        self.best = _ialloc(2 * self.n, 0)
        self.label = _ialloc(self.n, -1)
        self.order = _ialloc(self.n, 0)
        for f in range(m):
            for j in range(face_deg):
                self.phi[f * face_deg + j] = f * face_deg + (j + 1) % face_deg
        self.out = {}

    def __dealloc__(self):
        free(self.alpha); free(self.phi); free(self.sigma)
        free(self.best); free(self.label); free(self.order)

    def run(self):
        if self.n % 2 == 0 and self.m >= 1:
            self._rec(1)
        return self.out

    cdef void _leaf(self):
        cdef int d, n = self.n
        for d in range(n):
            self.sigma[d] = self.phi[self.alpha[d]]
        _canon(n, self.alpha, self.sigma, self.best, self.label, self.order)
        code = tuple([self.best[d] for d in range(2 * n)])
        if code not in self.out:
            self.out[code] = (
                tuple([self.alpha[d] for d in range(n)]),
                tuple([self.sigma[d] for d in range(n)]),
            )

    cdef void _rec(self, int opened):
        cdef int u = 0, v, lim = opened * self.D
        while u < lim and self.alpha[u] >= 0:
            u += 1
        if u == lim:
            if opened == self.m:
                self._leaf()
            return
        for v in range(u + 1, lim):
            if self.alpha[v] < 0:
                self.alpha[u] = v
                self.alpha[v] = u
                self._rec(opened)
                self.alpha[u] = -1
                self.alpha[v] = -1
        if opened < self.m:
            v = lim
            self.alpha[u] = v
            self.alpha[v] = u
            self._rec(opened + 1)
            self.alpha[u] = -1
            self.alpha[v] = -1


def naive_maps(int face_deg, int m):
    return _NaiveGluer(face_deg, m).run()


# ---------------------------------------------------------------------------
# origamis
# ---------------------------------------------------------------------------

cdef class _OrigamiSearch:
    cdef int N, nlab
    cdef int* h
    cdef int* v
    cdef int* hinv
    cdef int* vinv
    cdef int* label
    cdef int* order
    cdef int* touched
    cdef list results

    def __cinit__(self, int n):
        self.N = n
        self.h = _ialloc(n, -1)
        self.v = _ialloc(n, -1)
        self.hinv = _ialloc(n, -1)
        self.vinv = _ialloc(n, -1)
        self.label = _ialloc(n, -1)
        self.order = _ialloc(n, 0)
        self.touched = _ialloc(n, 0)
        self.nlab = 1
        self.results = []

    def __dealloc__(self):
        free(self.h); free(self.v); free(self.hinv); free(self.vinv)
        free(self.label); free(self.order); free(self.touched)

    def run(self):
        if self.N >= 1:
            self._step(0, 0)
        return self.results

    cdef bint _is_minimal(self, int upto):
        cdef int r
        for r in range(1, self.nlab):
            if _root_beats_zero(r, upto, self.h, self.v,
                                self.label, self.order, self.touched):
                return False
        return True

    cdef void _step(self, int i, int phase):
        cdef int x, lim, j
        cdef bint fresh
        cdef int* perm
        cdef int* inv
        if i == self.nlab:
            if i == self.N:
                self.results.append((
                    tuple([self.h[j] for j in range(self.N)]),
                    tuple([self.v[j] for j in range(self.N)]),
                ))
            return
        if phase == 0:
            perm = self.h
            inv = self.hinv
        else:
            perm = self.v
            inv = self.vinv
        lim = self.nlab + (1 if self.nlab < self.N else 0)
        for x in range(lim):
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


def orderly_origamis(int n):
    return _OrigamiSearch(n).run()
