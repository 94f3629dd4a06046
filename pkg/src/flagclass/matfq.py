"""Dense exact n x n matrices over a FiniteField.

Entries are stored row-major as a flat tuple of encoded field ints, so
matrices are immutable values: hashable, shareable, and usable as dict
keys.  Everything here is exact field arithmetic; ranks and inverses come
from plain Gaussian elimination.
"""
from __future__ import annotations

from .errors import DimensionMismatch
from .gf import FiniteField


class MatrixFq:
    __slots__ = ("field", "n", "entries")

    def __init__(self, field: FiniteField, n: int, entries):
        entries = tuple(entries)
        if len(entries) != n * n:
            raise DimensionMismatch(f"expected {n * n} entries, got {len(entries)}")
        if any(not (0 <= e < field.q) for e in entries):
            raise ValueError("entry outside 0..q-1")
        self.field = field
        self.n = n
        self.entries = entries

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, (0,) * (n * n))

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, field, rows):
        n = len(rows)
        return cls(field, n, tuple(v for row in rows for v in row))

    @classmethod
    def unit(cls, field, n, r, s, value=1):
        """Matrix with a single entry at (r, s), zero-indexed."""
        e = [0] * (n * n)
        e[r * n + s] = value
        return cls(field, n, e)

    # -- access ---------------------------------------------------------------

    def entry(self, r, s):
        return self.entries[r * self.n + s]

    def rows(self):
        n = self.n
        return [list(self.entries[r * n : (r + 1) * n]) for r in range(n)]

    def is_zero(self):
        return not any(self.entries)

    # -- algebra ----------------------------------------------------------------

    def _check_compatible(self, other):
        if not isinstance(other, MatrixFq):
            raise TypeError("expected a MatrixFq")
        if self.n != other.n or self.field != other.field:
            raise DimensionMismatch("matrices of different size or field")

    def __mul__(self, other):
        self._check_compatible(other)
        F = self.field
        n = self.n
        a = self.entries
        b = other.entries
        out = [0] * (n * n)
        for i in range(n):
            for l in range(n):
                v = a[i * n + l]
                if v:
                    row = l * n
                    for j in range(n):
                        w = b[row + j]
                        if w:
                            idx = i * n + j
                            out[idx] = F.add(out[idx], F.mul(v, w))
        return MatrixFq(F, n, out)

    def __add__(self, other):
        self._check_compatible(other)
        F = self.field
        return MatrixFq(F, self.n, tuple(F.add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._check_compatible(other)
        F = self.field
        return MatrixFq(F, self.n, tuple(F.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        F = self.field
        return MatrixFq(F, self.n, tuple(F.neg(a) for a in self.entries))

    def scale(self, c):
        F = self.field
        return MatrixFq(F, self.n, tuple(F.mul(c, a) for a in self.entries))

    def __eq__(self, other):
        return (
            isinstance(other, MatrixFq)
            and self.n == other.n
            and self.field == other.field
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field.q, self.n, self.entries))

    def __repr__(self):
        return f"MatrixFq(q={self.field.q}, rows={self.rows()})"

    # -- keys and wire format ------------------------------------------------------

    def encode(self) -> int:
        """Injective row-major base-q key; arbitrary precision."""
        q = self.field.q
        key = 0
        for e in self.entries:
            key = key * q + e
        return key

    @classmethod
    def decode(cls, field, n, key: int) -> "MatrixFq":
        q = field.q
        out = [0] * (n * n)
        for i in range(n * n - 1, -1, -1):
            out[i] = key % q
            key //= q
        return cls(field, n, out)

    def to_json(self) -> dict:
        return {"n": self.n, "rows": self.rows()}

    @classmethod
    def from_json(cls, field, obj) -> "MatrixFq":
        return cls.from_rows(field, obj["rows"])


def mat_mul(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    return a * b


def rank(a: MatrixFq) -> int:
    F = a.field
    n = a.n
    rows = a.rows()
    rk = 0
    for col in range(n):
        piv = None
        for r in range(rk, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        ipv = F.inv(rows[rk][col])
        rows[rk] = [F.mul(ipv, v) for v in rows[rk]]
        for r in range(rk + 1, n):
            f = rows[r][col]
            if f:
                rows[r] = [F.sub(v, F.mul(f, w)) for v, w in zip(rows[r], rows[rk])]
        rk += 1
    return rk


def kernel_dim(a: MatrixFq) -> int:
    return a.n - rank(a)


def try_inverse(a: MatrixFq):
    """Exact inverse, or None when the matrix is singular."""
    F = a.field
    n = a.n
    rows = [row + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a.rows())]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        ipv = F.inv(rows[col][col])
        rows[col] = [F.mul(ipv, v) for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.sub(v, F.mul(f, w)) for v, w in zip(rows[r], rows[col])]
    return MatrixFq.from_rows(F, [row[n:] for row in rows])


def encode(a: MatrixFq) -> int:
    return a.encode()


def gl_order(m: int, q: int) -> int:
    """|GL_m(q)| = prod_{i<m} (q^m - q^i); 1 for m = 0."""
    order = 1
    for i in range(m):
        order *= q**m - q**i
    return order
