"""Flag combinatorics: dimension vectors, block structure, the groups they cut out.

A dimension vector d = (d_1, ..., d_t) with d_t = n describes the flag of
coordinate subspaces K^{d_1} <= ... <= K^{d_t} = K^n.  Its stabilizer P is
the group of invertible block upper triangular matrices, U <= P the
unipotent matrices 1 + x with x strictly block upper triangular, and the
set u of those x is the coordinate space everything here enumerates:
its free coordinates are the "cross positions" (r, s) whose row block
lies strictly below the column block.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import CapExceeded, DimensionMismatch
from .gf import FiniteField
from .matfq import MatrixFq, gl_order, rank

DEFAULT_STATE_CAP = 1 << 24


@dataclass(frozen=True)
class DimensionVector:
    d: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(v) for v in self.d)
        object.__setattr__(self, "d", d)
        if not d:
            raise ValueError("dimension vector must be nonempty")
        if any(v < 0 for v in d):
            raise ValueError("dimension vector entries must be >= 0")
        if any(a > b for a, b in zip(d, d[1:])):
            raise ValueError("dimension vector must be weakly increasing")
        if d[-1] < 1:
            raise ValueError("ambient dimension must be >= 1")

    @staticmethod
    def parse(text: str) -> "DimensionVector":
        return DimensionVector(tuple(int(part) for part in text.split(",")))

    @property
    def t(self) -> int:
        return len(self.d)

    @property
    def n(self) -> int:
        return self.d[-1]

    @property
    def blocks(self) -> tuple[int, ...]:
        prev = 0
        out = []
        for v in self.d:
            out.append(v - prev)
            prev = v
        return tuple(out)

    @property
    def finite_type(self) -> bool:
        """Orbit counts are provably q-independent only for t <= 5."""
        return self.t <= 5

    def nonzero_blocks(self) -> tuple[int, ...]:
        """Sorted multiset of nonzero block sizes (association invariant)."""
        return tuple(sorted(b for b in self.blocks if b))

    def __str__(self):
        return ",".join(str(v) for v in self.d)


class FlagContext:
    """A dimension vector bound to a concrete field, with derived structure."""

    def __init__(self, dv: DimensionVector, field: FiniteField, cap: int = DEFAULT_STATE_CAP):
        self.dv = dv
        self.field = field
        self.cap = cap
        blocks = dv.blocks
        boc = []
        for i, b in enumerate(blocks):
            boc.extend([i] * b)
        self.block_of_column = tuple(boc)
        n = dv.n
        self.cross_positions = tuple(
            (r, s) for r in range(n) for s in range(n) if boc[r] < boc[s]
        )
        self.levi_positions = tuple(
            (r, s) for r in range(n) for s in range(n) if boc[r] == boc[s]
        )
        self.dim_u = len(self.cross_positions)
        self.n_states = field.q**self.dim_u
        self._cross_index = {pos: i for i, pos in enumerate(self.cross_positions)}

    @property
    def n(self) -> int:
        return self.dv.n

    @property
    def q(self) -> int:
        return self.field.q

    def first_column_of_block(self, i: int) -> int:
        return sum(self.dv.blocks[:i])

    def next_nonempty_block(self, i: int):
        blocks = self.dv.blocks
        for j in range(i + 1, len(blocks)):
            if blocks[j]:
                return j
        return None

    # -- membership -------------------------------------------------------------

    def _check_matrix(self, g: MatrixFq):
        if g.n != self.n or g.field != self.field:
            raise DimensionMismatch("matrix does not match this context")

    def in_P(self, g: MatrixFq) -> bool:
        """Invertible and block upper triangular."""
        self._check_matrix(g)
        boc = self.block_of_column
        for r in range(self.n):
            for s in range(self.n):
                if boc[r] > boc[s] and g.entry(r, s):
                    return False
        return rank(g) == self.n

    def in_U(self, g: MatrixFq) -> bool:
        """Unipotent part: g - 1 lies in the nilradical."""
        self._check_matrix(g)
        return self.in_nilradical(g - MatrixFq.identity(self.field, self.n))

    def in_nilradical(self, x: MatrixFq) -> bool:
        """Zero outside the cross positions."""
        self._check_matrix(x)
        boc = self.block_of_column
        for r in range(self.n):
            for s in range(self.n):
                if boc[r] >= boc[s] and x.entry(r, s):
                    return False
        return True

    # -- orders -------------------------------------------------------------------

    def group_orders(self) -> dict:
        q = self.q
        order_L = 1
        for b in self.dv.blocks:
            order_L *= gl_order(b, q)
        order_U = q**self.dim_u
        return {
            "dim_u": self.dim_u,
            "order_U": order_U,
            "order_L": order_L,
            "order_P": order_L * order_U,
        }

    # -- generators ------------------------------------------------------------------

    def generators_P(self, include_inverses: bool = True) -> list[MatrixFq]:
        """Generators of the flag stabilizer.

        Per nonempty block: a torus generator scaling the block's first
        column by a primitive element; for blocks of size >= 2 also the
        transvection on the first two columns and the cyclic permutation
        of the block's columns.  Per cross position joining consecutive
        nonempty blocks: the transvection 1 + E_{r,s}.  Optionally closed
        under inverses; generation is exercised by the closure tests.
        """
        F = self.field
        n = self.n
        gens: list[MatrixFq] = []
        lam = F.primitive_element()
        for i, b in enumerate(self.dv.blocks):
            if b < 1:
                continue
            c = self.first_column_of_block(i)
            torus = [[1 if r == s else 0 for s in range(n)] for r in range(n)]
            torus[c][c] = lam
            gens.append(MatrixFq.from_rows(F, torus))
        for i, b in enumerate(self.dv.blocks):
            if b < 2:
                continue
            c = self.first_column_of_block(i)
            ident = MatrixFq.identity(F, n)
            gens.append(ident + MatrixFq.unit(F, n, c, c + 1))
            cyc = [[0] * n for _ in range(n)]
            for col in range(n):
                if c <= col < c + b:
                    img = c if col == c + b - 1 else col + 1
                    cyc[img][col] = 1
                else:
                    cyc[col][col] = 1
            gens.append(MatrixFq.from_rows(F, cyc))
        ident = MatrixFq.identity(F, n)
        boc = self.block_of_column
        for r, s in self.cross_positions:
            if boc[s] == self.next_nonempty_block(boc[r]):
                gens.append(ident + MatrixFq.unit(F, n, r, s))
        if include_inverses:
            from .matfq import try_inverse

            seen = {g.entries for g in gens}
            for g in list(gens):
                gi = try_inverse(g)
                if gi.entries not in seen:
                    seen.add(gi.entries)
                    gens.append(gi)
        return gens

    def generators_U(self) -> list[MatrixFq]:
        """Transvections 1 + c*E_{r,s} spanning each adjacent cross position.

        The scalars c run over the power basis 1, p, p^2, ... so extension
        fields are fully generated, not just their prime subfield.
        """
        F = self.field
        n = self.n
        ident = MatrixFq.identity(F, n)
        boc = self.block_of_column
        scalars = [F.p**j for j in range(F.k)]
        gens = []
        for r, s in self.cross_positions:
            if boc[s] == self.next_nonempty_block(boc[r]):
                for c in scalars:
                    gens.append(ident + MatrixFq.unit(F, n, r, s, value=c))
        return gens

    # -- the coordinate space u ----------------------------------------------------------

    def cross_matrix(self, values) -> MatrixFq:
        """Matrix with the given values on cross positions, zero elsewhere."""
        n = self.n
        e = [0] * (n * n)
        for (r, s), v in zip(self.cross_positions, values):
            e[r * n + s] = v
        return MatrixFq(self.field, n, e)

    def cross_values(self, x: MatrixFq) -> tuple[int, ...]:
        return tuple(x.entry(r, s) for r, s in self.cross_positions)

    def key_of(self, x: MatrixFq) -> int:
        """Big-endian base-q key over cross positions in listed order."""
        q = self.q
        key = 0
        for r, s in self.cross_positions:
            key = key * q + x.entry(r, s)
        return key

    def matrix_of_key(self, key: int) -> MatrixFq:
        q = self.q
        vals = [0] * self.dim_u
        for i in range(self.dim_u - 1, -1, -1):
            vals[i] = key % q
            key //= q
        return self.cross_matrix(vals)

    def check_cap(self):
        if self.n_states > self.cap:
            raise CapExceeded(self.n_states, self.cap)

    def enumerate_nilradical(self):
        """Yield every element of u once, in lexicographic cross order."""
        self.check_cap()
        for values in product(range(self.q), repeat=self.dim_u):
            yield self.cross_matrix(values)

    def to_json(self) -> dict:
        return {
            "d": list(self.dv.d),
            "b": list(self.dv.blocks),
            "dim_u": self.dim_u,
            "q": self.q,
            "orders": self.group_orders(),
            "finite_type": self.dv.finite_type,
        }
