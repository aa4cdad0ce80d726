# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops in ``_pykernels``.

Integer elimination copies the matrix into GMP integers and updates them in
place, avoiding a Python object per arithmetic step.
Bitset routines use ``uint64_t`` when the vertex count fits in one word and
defer to the Python version otherwise.
"""
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

from . import _pykernels

PSD = 0
NEGATIVE_DIAGONAL = 1
ZERO_DIAGONAL_OFFDIAG = 2

PIVOT_LARGEST = 0
PIVOT_FIRST = 1


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def intersection_sizes(masks):
    cdef Py_ssize_t n = len(masks)
    cdef Py_ssize_t u, v
    cdef uint64_t a
    cdef uint64_t *buf
    cdef list out, row
    for m in masks:
        if m.bit_length() > 64:
            return _pykernels.intersection_sizes(masks)
    buf = <uint64_t *> malloc(n * sizeof(uint64_t) + 1)
    try:
        for u in range(n):
            buf[u] = masks[u]
        out = []
        for u in range(n):
            a = buf[u]
            row = [0] * n
            for v in range(n):
                row[v] = __builtin_popcountll(a & buf[v])
            out.append(row)
    finally:
        free(buf)
    return out


cdef extern from "gmp.h" nogil:
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct *mpz_ptr
    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set(mpz_ptr, mpz_ptr)
    void mpz_set_si(mpz_ptr, long)
    int mpz_set_str(mpz_ptr, const char *, int)
    char *mpz_get_str(char *, int, mpz_ptr)
    void mpz_mul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_submul(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_divexact(mpz_ptr, mpz_ptr, mpz_ptr)
    void mpz_swap(mpz_ptr, mpz_ptr)
    int mpz_sgn(mpz_ptr)
    int mpz_cmp(mpz_ptr, mpz_ptr)
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void *)
    void mpz_neg(mpz_ptr, mpz_ptr)
    size_t mpz_sizeinbase(mpz_ptr, int)

from libc.string cimport strlen


cdef class _MpzBuffer:
    """Owns ``size`` initialised mpz values."""
    cdef __mpz_struct *z
    cdef Py_ssize_t size

    def __cinit__(self, Py_ssize_t size):
        cdef Py_ssize_t i
        self.z = <__mpz_struct *> malloc((size if size > 0 else 1) * sizeof(__mpz_struct))
        if self.z == NULL:
            raise MemoryError()
        for i in range(size):
            mpz_init(&self.z[i])
        self.size = size

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.z != NULL:
            for i in range(self.size):
                mpz_clear(&self.z[i])
            free(self.z)


cdef void _set_from_int(mpz_ptr z, object x) except *:
    cdef bytes b
    if -0x7fffffffffffffff <= x <= 0x7fffffffffffffff:
        mpz_set_si(z, <long> x)
        return
    mag = -x if x < 0 else x
    b = mag.to_bytes((mag.bit_length() + 7) // 8, "little")
    mpz_import(z, len(b), -1, 1, 0, 0, <const char *> b)
    if x < 0:
        mpz_neg(z, z)


cdef object _to_int(mpz_ptr z):
    cdef size_t need = mpz_sizeinbase(z, 16) + 2
    cdef char *buf = <char *> malloc(need)
    if buf == NULL:
        raise MemoryError()
    try:
        mpz_get_str(buf, 16, z)
        return int(buf[:strlen(buf)].decode("ascii"), 16)
    finally:
        free(buf)


def sym_bareiss(list a, int rule=PIVOT_LARGEST):
    """GMP version of ``_pykernels.sym_bareiss``; ``a`` is left untouched.

    Only the upper triangle (in original indices) is stored and updated.
    """
    cdef Py_ssize_t n = len(a)
    cdef _MpzBuffer buf = _MpzBuffer(n * n + 2)
    cdef __mpz_struct *A = buf.z
    cdef __mpz_struct *prev = &buf.z[n * n]
    cdef __mpz_struct *tmp = &buf.z[n * n + 1]
    cdef int *rem = <int *> malloc((n if n > 0 else 1) * sizeof(int))
    cdef Py_ssize_t nrem = n
    cdef Py_ssize_t x, y, i, j, q, best, lo, hi
    cdef mpz_ptr p
    cdef mpz_ptr aiq
    cdef mpz_ptr z
    cdef list pivots = []
    cdef list minors = []
    cdef list row
    if rem == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            row = a[i]
            rem[i] = i
            for j in range(i, n):
                _set_from_int(&A[i * n + j], row[j])
        mpz_set_si(prev, 1)
        while nrem > 0:
            best = -1
            for x in range(nrem):
                i = rem[x]
                z = &A[i * n + i]
                if mpz_sgn(z) < 0:
                    return NEGATIVE_DIAGONAL, pivots, minors, (i,), _to_int(z)
                if mpz_sgn(z) > 0:
                    if best < 0:
                        best = i
                    elif rule == PIVOT_LARGEST and mpz_cmp(z, &A[best * n + best]) > 0:
                        best = i
            if best < 0:
                for x in range(nrem):
                    for y in range(x + 1, nrem):
                        i = rem[x]
                        j = rem[y]
                        lo = i if i < j else j
                        hi = j if i < j else i
                        if mpz_sgn(&A[lo * n + hi]) != 0:
                            return ZERO_DIAGONAL_OFFDIAG, pivots, minors, (i, j), _to_int(&A[lo * n + hi])
                return PSD, pivots, minors, (), 0
            q = best
            p = &A[q * n + q]
            y = 0
            for x in range(nrem):
                if rem[x] != q:
                    rem[y] = rem[x]
                    y += 1
            nrem -= 1
            with nogil:
                for x in range(nrem):
                    i = rem[x]
                    aiq = &A[(i if i < q else q) * n + (q if i < q else i)]
                    if mpz_sgn(aiq) == 0:
                        if mpz_cmp(p, prev) == 0:
                            continue
                        for y in range(x, nrem):
                            j = rem[y]
                            z = &A[(i if i < j else j) * n + (j if i < j else i)]
                            mpz_mul(tmp, z, p)
                            mpz_divexact(z, tmp, prev)
                    else:
                        for y in range(x, nrem):
                            j = rem[y]
                            z = &A[(i if i < j else j) * n + (j if i < j else i)]
                            mpz_mul(tmp, z, p)
                            mpz_submul(tmp, aiq, &A[(q if q < j else j) * n + (j if q < j else q)])
                            mpz_divexact(z, tmp, prev)
            mpz_set(prev, p)
            pivots.append(q)
            minors.append(_to_int(p))
        return PSD, pivots, minors, (), 0
    finally:
        free(rem)


def bareiss_rank(list a):
    """GMP version of ``_pykernels.bareiss_rank``; ``a`` is left untouched."""
    cdef Py_ssize_t nrows = len(a)
    cdef Py_ssize_t ncols, rank, r, c, j, t
    cdef _MpzBuffer buf
    cdef __mpz_struct *A
    cdef __mpz_struct *prev
    cdef __mpz_struct *tmp
    cdef Py_ssize_t *perm
    cdef mpz_ptr p
    cdef mpz_ptr arc
    cdef list row
    if nrows == 0:
        return 0
    ncols = len(a[0])
    buf = _MpzBuffer(nrows * ncols + 2)
    A = buf.z
    prev = &buf.z[nrows * ncols]
    tmp = &buf.z[nrows * ncols + 1]
    perm = <Py_ssize_t *> malloc(nrows * sizeof(Py_ssize_t))
    if perm == NULL:
        raise MemoryError()
    try:
        for r in range(nrows):
            perm[r] = r
            row = a[r]
            for j in range(ncols):
                _set_from_int(&A[r * ncols + j], row[j])
        mpz_set_si(prev, 1)
        rank = 0
        with nogil:
            for c in range(ncols):
                if rank == nrows:
                    break
                r = rank
                while r < nrows and mpz_sgn(&A[perm[r] * ncols + c]) == 0:
                    r += 1
                if r == nrows:
                    continue
                t = perm[rank]
                perm[rank] = perm[r]
                perm[r] = t
                p = &A[perm[rank] * ncols + c]
                for r in range(rank + 1, nrows):
                    arc = &A[perm[r] * ncols + c]
                    if mpz_sgn(arc) == 0:
                        if mpz_cmp(p, prev) != 0:
                            for j in range(c + 1, ncols):
                                mpz_mul(tmp, &A[perm[r] * ncols + j], p)
                                mpz_divexact(&A[perm[r] * ncols + j], tmp, prev)
                    else:
                        for j in range(c + 1, ncols):
                            mpz_mul(tmp, &A[perm[r] * ncols + j], p)
                            mpz_submul(tmp, arc, &A[perm[rank] * ncols + j])
                            mpz_divexact(&A[perm[r] * ncols + j], tmp, prev)
                        mpz_set_si(arc, 0)
                mpz_set(prev, p)
                rank += 1
        return rank
    finally:
        free(perm)


cdef struct _Search:
    int n
    uint64_t *adj
    int *cur
    int ncur
    int *best
    int nbest


cdef void _expand(_Search *s, uint64_t P, int depth) noexcept nogil:
    cdef int order[64]
    cdef int colours[64]
    cdef int cnt = 0
    cdef int k = 0
    cdef int idx, v
    cdef uint64_t U = P, Q, low, newP
    while U:
        k += 1
        Q = U
        while Q:
            low = Q & (~Q + 1)
            v = __builtin_ctzll(Q)
            Q &= ~(s.adj[v] | low)
            U &= ~low
            order[cnt] = v
            colours[cnt] = k
            cnt += 1
    for idx in range(cnt - 1, -1, -1):
        if s.ncur + colours[idx] <= s.nbest:
            return
        v = order[idx]
        s.cur[s.ncur] = v
        s.ncur += 1
        newP = P & s.adj[v]
        if newP:
            _expand(s, newP, depth + 1)
        elif s.ncur > s.nbest:
            for k in range(s.ncur):
                s.best[k] = s.cur[k]
            s.nbest = s.ncur
        s.ncur -= 1
        P &= ~((<uint64_t> 1) << v)


def max_clique(adj):
    cdef int n = len(adj)
    cdef _Search s
    cdef int i
    cdef uint64_t full
    if n > 64:
        return _pykernels.max_clique(adj)
    if n == 0:
        return []
    s.n = n
    s.adj = <uint64_t *> malloc(n * sizeof(uint64_t))
    s.cur = <int *> malloc(n * sizeof(int))
    s.best = <int *> malloc(n * sizeof(int))
    s.ncur = 0
    s.nbest = 0
    try:
        for i in range(n):
            s.adj[i] = adj[i]
        full = ((<uint64_t> 1) << n) - 1 if n < 64 else ~(<uint64_t> 0)
        with nogil:
            _expand(&s, full, 0)
        return sorted([s.best[i] for i in range(s.nbest)])
    finally:
        free(s.adj)
        free(s.cur)
        free(s.best)
