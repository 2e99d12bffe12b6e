"""Pure-Python online integer row reduction.

Reference implementation of the streaming echelon kernel.  The compiled
module ``nilcohom._rowred`` implements the same class with the same
normalization rules; the two must stay bit-for-bit interchangeable (the
benchmark and the backend tests compare retained rows, not just ranks).

Rows are dense lists of Python ints.  An incoming row is reduced against the
retained basis by fraction-free cross-multiplication; after every elimination
the row is divided by the gcd of its entries, and a row is stored primitive
with a positive leading entry.  At most ``ncols`` rows are ever retained, so
memory is bounded by ncols**2 entries regardless of how many rows stream by.
"""

from math import gcd

BACKEND = "python"


class IntRowBasis:
    __slots__ = ("ncols", "rows", "leads", "_row_at")

    def __init__(self, ncols):
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
        return [row[:] for row in self.rows]

    def add_sparse(self, cols, vals):
        row = [0] * self.ncols
        for c, v in zip(cols, vals):
            row[c] = v
        return self.add_dense(row)

    def add_dense(self, row):
        """Reduce ``row`` (consumed) against the basis; keep it if nonzero."""
        n = self.ncols
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
            for k in range(j, n):
                row[k] = am * row[k] - bm * piv[k]
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

    def _insert(self, row, j):
        n = self.ncols
        g = 0
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
