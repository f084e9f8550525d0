# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled implementations of the hot distance kernels.

Same contracts as ``sqlibench.kernels._pure``; selected at import when the
extension built successfully.
"""

from libc.stdlib cimport free, malloc


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance over Unicode scalar values (two-row DP)."""
    if a == b:
        return 0
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    if la < lb:
        a, b = b, a
        la, lb = lb, la

    cdef int *ca = <int *> malloc(la * sizeof(int))
    cdef int *cb = <int *> malloc(lb * sizeof(int))
    cdef int *prev = <int *> malloc((lb + 1) * sizeof(int))
    cdef int *cur = <int *> malloc((lb + 1) * sizeof(int))
    if ca == NULL or cb == NULL or prev == NULL or cur == NULL:
        free(ca); free(cb); free(prev); free(cur)
        raise MemoryError()

    cdef Py_ssize_t i, j
    cdef int cost, d, ins
    cdef int *tmp
    try:
        for i in range(la):
            ca[i] = ord(a[i])
        for j in range(lb):
            cb[j] = ord(b[j])
        for j in range(lb + 1):
            prev[j] = <int> j
        for i in range(1, la + 1):
            cur[0] = <int> i
            for j in range(1, lb + 1):
                cost = prev[j - 1] + (ca[i - 1] != cb[j - 1])
                d = prev[j] + 1
                ins = cur[j - 1] + 1
                if d < cost:
                    cost = d
                if ins < cost:
                    cost = ins
                cur[j] = cost
            tmp = prev
            prev = cur
            cur = tmp
        return prev[lb]
    finally:
        free(ca); free(cb); free(prev); free(cur)


cdef struct _Flat:
    int *labels
    int *lld
    Py_ssize_t n


cdef int _fill(list labels, list lld, _Flat *out) except -1:
    cdef Py_ssize_t n = len(labels)
    out.n = n
    out.labels = <int *> malloc(n * sizeof(int))
    out.lld = <int *> malloc(n * sizeof(int))
    if out.labels == NULL or out.lld == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        out.labels[i] = labels[i]
        out.lld[i] = lld[i]
    return 0


def tree_edit_distance(
    labels1: list,
    lld1: list,
    keyroots1: list,
    labels2: list,
    lld2: list,
    keyroots2: list,
) -> int:
    """Ordered-tree edit distance on post-order flattenings (unit costs)."""
    cdef _Flat t1, t2
    t1.labels = NULL; t1.lld = NULL
    t2.labels = NULL; t2.lld = NULL
    cdef Py_ssize_t n1 = len(labels1)
    cdef Py_ssize_t n2 = len(labels2)
    cdef int *td = <int *> malloc(n1 * n2 * sizeof(int))
    # forest-distance scratch sized for the largest subtree pair
    cdef int *fd = <int *> malloc((n1 + 1) * (n2 + 1) * sizeof(int))
    cdef int result
    if td == NULL or fd == NULL:
        free(td); free(fd)
        raise MemoryError()
    try:
        _fill(labels1, lld1, &t1)
        _fill(labels2, lld2, &t2)
        for i in keyroots1:
            for j in keyroots2:
                _treedist(<Py_ssize_t> i, <Py_ssize_t> j, &t1, &t2, td, fd, n2)
        result = td[(n1 - 1) * n2 + (n2 - 1)]
        return result
    finally:
        free(t1.labels); free(t1.lld)
        free(t2.labels); free(t2.lld)
        free(td); free(fd)


cdef void _treedist(Py_ssize_t i, Py_ssize_t j, _Flat *t1, _Flat *t2,
                    int *td, int *fd, Py_ssize_t n2) noexcept:
    cdef Py_ssize_t li = t1.lld[i]
    cdef Py_ssize_t lj = t2.lld[j]
    cdef Py_ssize_t m = i - li + 2
    cdef Py_ssize_t n = j - lj + 2
    cdef Py_ssize_t ioff = li - 1
    cdef Py_ssize_t joff = lj - 1
    cdef Py_ssize_t x, y, p, q
    cdef int cost, best, d, ins

    fd[0] = 0
    for x in range(1, m):
        fd[x * n] = fd[(x - 1) * n] + 1
    for y in range(1, n):
        fd[y] = fd[y - 1] + 1
    for x in range(1, m):
        for y in range(1, n):
            if t1.lld[x + ioff] == li and t2.lld[y + joff] == lj:
                cost = 0 if t1.labels[x + ioff] == t2.labels[y + joff] else 1
                best = fd[(x - 1) * n + (y - 1)] + cost
                d = fd[(x - 1) * n + y] + 1
                ins = fd[x * n + (y - 1)] + 1
                if d < best:
                    best = d
                if ins < best:
                    best = ins
                fd[x * n + y] = best
                td[(x + ioff) * n2 + (y + joff)] = best
            else:
                p = t1.lld[x + ioff] - 1 - ioff
                q = t2.lld[y + joff] - 1 - joff
                best = fd[p * n + q] + td[(x + ioff) * n2 + (y + joff)]
                d = fd[(x - 1) * n + y] + 1
                ins = fd[x * n + (y - 1)] + 1
                if d < best:
                    best = d
                if ins < best:
                    best = ins
                fd[x * n + y] = best
