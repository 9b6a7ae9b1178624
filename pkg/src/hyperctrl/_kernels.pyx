# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled prime-field kernels (see ``_kernels_py`` for the reference versions).

All arithmetic is on residues below ``p < 2**63`` using 128-bit intermediate
products, so any machine-word prime works.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    """
    typedef unsigned __int128 hc_u128;
    """
    # declared narrow for Cython; the C compiler sees the 128-bit type
    ctypedef unsigned long long u128 "hc_u128"


cdef inline u64 mulmod(u64 a, u64 b, u64 p) nogil:
    return <u64>((<u128>a * b) % p)


cdef u64 powmod(u64 a, u64 e, u64 p) nogil:
    cdef u64 r = 1
    a %= p
    while e:
        if e & 1:
            r = mulmod(r, a, p)
        a = mulmod(a, a, p)
        e >>= 1
    return r


cdef inline u64 invmod(u64 a, u64 p) nogil:
    # p is prime
    return powmod(a, p - 2, p)


cdef inline u64 to_residue(object v, u64 p):
    return <u64>(v % p)


def eval_packed(const i64[:] exps, const u64[:] residues, Py_ssize_t width,
                const u64[:] powers, Py_ssize_t stride, u64 p):
    """Evaluate a packed polynomial mod ``p``."""
    cdef Py_ssize_t nterms = residues.shape[0]
    cdef Py_ssize_t i, var, base = 0
    cdef i64 k
    cdef u64 v, total = 0
    with nogil:
        for i in range(nterms):
            v = residues[i]
            for var in range(width):
                k = exps[base + var]
                if k:
                    v = mulmod(v, powers[var * stride + k], p)
            total += v
            if total >= p:
                total -= p
            base += width
    return total


def rank_mod(rows, u64 p):
    """Rank of an integer matrix over GF(p) by Gaussian elimination."""
    cdef Py_ssize_t nr = len(rows)
    if nr == 0:
        return 0
    cdef Py_ssize_t nc = len(rows[0])
    if nc == 0:
        return 0
    cdef u64 *a = <u64 *> malloc(nr * nc * sizeof(u64))
    if a == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, c, piv, rank = 0
    cdef u64 inv, f, tmp
    try:
        for i in range(nr):
            row = rows[i]
            for j in range(nc):
                a[i * nc + j] = to_residue(row[j], p)
        with nogil:
            for c in range(nc):
                piv = -1
                for i in range(rank, nr):
                    if a[i * nc + c]:
                        piv = i
                        break
                if piv < 0:
                    continue
                if piv != rank:
                    for j in range(c, nc):
                        tmp = a[piv * nc + j]
                        a[piv * nc + j] = a[rank * nc + j]
                        a[rank * nc + j] = tmp
                inv = invmod(a[rank * nc + c], p)
                for j in range(c, nc):
                    a[rank * nc + j] = mulmod(a[rank * nc + j], inv, p)
                for i in range(rank + 1, nr):
                    f = a[i * nc + c]
                    if f:
                        for j in range(c, nc):
                            a[i * nc + j] = (a[i * nc + j] + p - mulmod(f, a[rank * nc + j], p)) % p
                rank += 1
                if rank == nr:
                    break
    finally:
        free(a)
    return rank


cdef class ModEchelon:
    """Incrementally maintained row-echelon basis of vectors over GF(p)."""

    cdef readonly Py_ssize_t dim
    cdef readonly u64 p
    cdef Py_ssize_t count
    cdef Py_ssize_t *piv
    cdef u64 *basis

    def __cinit__(self, Py_ssize_t dim, u64 p):
        self.dim = dim
        self.p = p
        self.count = 0
        self.piv = <Py_ssize_t *> malloc((dim + 1) * sizeof(Py_ssize_t))
        self.basis = <u64 *> malloc((dim * dim + 1) * sizeof(u64))
        if self.piv == NULL or self.basis == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.piv)
        free(self.basis)

    @property
    def rank(self):
        return self.count

    @property
    def pivots(self):
        return [self.piv[i] for i in range(self.count)]

    def reduce(self, vec):
        """Residual of ``vec`` against the basis, or None if it lies in the span."""
        cdef Py_ssize_t n = self.dim
        if len(vec) != n:
            raise ValueError(f"vector of length {len(vec)} in a {n}-dim basis")
        cdef u64 *v = <u64 *> malloc((n + 1) * sizeof(u64))
        if v == NULL:
            raise MemoryError()
        cdef Py_ssize_t b, j, lead = -1
        cdef u64 f, inv, p = self.p
        cdef u64 *row
        try:
            for j in range(n):
                v[j] = to_residue(vec[j], p)
            with nogil:
                for b in range(self.count):
                    f = v[self.piv[b]]
                    if f:
                        row = self.basis + b * n
                        for j in range(n):
                            if row[j]:
                                v[j] = (v[j] + p - mulmod(f, row[j], p)) % p
                for j in range(n):
                    if v[j]:
                        lead = j
                        break
                if lead >= 0:
                    inv = invmod(v[lead], p)
                    for j in range(n):
                        v[j] = mulmod(v[j], inv, p)
            if lead < 0:
                return None
            return [v[j] for j in range(n)]
        finally:
            free(v)

    def insert(self, reduced):
        """Append a vector previously returned by :meth:`reduce`."""
        cdef Py_ssize_t n = self.dim, j, lead = -1
        if self.count >= n:
            raise ValueError("basis is already full")
        cdef u64 *row = self.basis + self.count * n
        for j in range(n):
            row[j] = to_residue(reduced[j], self.p)
            if lead < 0 and row[j]:
                lead = j
        if lead < 0:
            raise ValueError("cannot insert the zero vector")
        self.piv[self.count] = lead
        self.count += 1

    def copy(self):
        cdef ModEchelon other = ModEchelon(self.dim, self.p)
        memcpy(other.piv, self.piv, self.count * sizeof(Py_ssize_t))
        memcpy(other.basis, self.basis, self.count * self.dim * sizeof(u64))
        other.count = self.count
        return other
