# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled online integer row reduction.

Mirror of ``nilcohom._rowred_py.IntRowBasis``; the normalization rules match
that module exactly so the two backends stay bit-for-bit interchangeable.
Entries are arbitrary-precision Python ints; eliminations run through an
int64 fast path guarded by range checks and fall back to object arithmetic
when entries outgrow it, so results are identical either way.
"""

from cpython.long cimport PyLong_AsLongLongAndOverflow

from math import gcd

BACKEND = "compiled"

cdef long long MUL_BOUND = 1 << 25   # |multiplier| below this ...
cdef long long VAL_BOUND = 1 << 36   # ... and |entry| below this: no overflow


cdef class IntRowBasis:
    cdef readonly Py_ssize_t ncols
    cdef list rows
    cdef list leads
    cdef list _row_at

    def __init__(self, Py_ssize_t ncols):
        if ncols < 0:
            raise ValueError("ncols must be nonnegative")
        self.ncols = ncols
        self.rows = []
        self.leads = []
        self._row_at = [-1] * ncols

    @property
    def rank(self):
        return len(self.rows)

    def pivot_cols(self):
        return sorted(self.leads)

    def basis_rows(self):
        """Retained rows (copies), in insertion order."""
        cdef list row
        return [row[:] for row in self.rows]

    def add_sparse(self, cols, vals):
        cdef list row = [0] * self.ncols
        cdef Py_ssize_t t, c
        cdef Py_ssize_t m = len(cols)
        for t in range(m):
            c = cols[t]
            row[c] = vals[t]
        return self.add_dense(row)

    def add_dense(self, list row):
        """Reduce ``row`` (consumed) against the basis; keep it if nonzero."""
        cdef Py_ssize_t n = self.ncols
        cdef Py_ssize_t j, k, p
        cdef list piv
        cdef object a, b, g, am, bm, v, x, y
        cdef long long am64, bm64, x64, y64
        cdef int of1, of2, of3, of4
        cdef bint fast
        if len(row) != n:
            raise ValueError(f"row has length {len(row)}, expected {n}")
        j = 0
        while j < n and not row[j]:
            j += 1
        while j < n:
            p = self._row_at[j]
            if p < 0:
                self._insert(row, j)
                return True
            piv = self.rows[p]
            a = piv[j]
            b = row[j]
            g = gcd(a, b if b > 0 else -b)
            am = a // g
            bm = b // g
            am64 = PyLong_AsLongLongAndOverflow(am, &of1)
            bm64 = PyLong_AsLongLongAndOverflow(bm, &of2)
            fast = (of1 == 0 and of2 == 0
                    and -MUL_BOUND < am64 < MUL_BOUND
                    and -MUL_BOUND < bm64 < MUL_BOUND)
            for k in range(j, n):
                x = row[k]
                y = piv[k]
                if fast:
                    x64 = PyLong_AsLongLongAndOverflow(x, &of3)
                    y64 = PyLong_AsLongLongAndOverflow(y, &of4)
                    if (of3 == 0 and of4 == 0
                            and -VAL_BOUND < x64 < VAL_BOUND
                            and -VAL_BOUND < y64 < VAL_BOUND):
                        row[k] = am64 * x64 - bm64 * y64
                        continue
                row[k] = am * x - bm * y
            g = 0
            for k in range(j + 1, n):
                v = row[k]
                if v:
                    g = gcd(g, v if v > 0 else -v)
                    if g == 1:
                        break
            if g > 1:
                for k in range(j + 1, n):
                    if row[k]:
                        row[k] //= g
            j += 1
            while j < n and not row[j]:
                j += 1
        return False

    cdef _insert(self, list row, Py_ssize_t j):
        cdef Py_ssize_t n = self.ncols
        cdef Py_ssize_t k
        cdef object g = 0
        cdef object v
        cdef bint neg
        for k in range(j, n):
            v = row[k]
            if v:
                g = gcd(g, v if v > 0 else -v)
                if g == 1:
                    break
        neg = row[j] < 0
        if g > 1 or neg:
            if neg:
                g = -g
            for k in range(j, n):
                if row[k]:
                    row[k] //= g
        self._row_at[j] = len(self.rows)
        self.rows.append(row)
        self.leads.append(j)
