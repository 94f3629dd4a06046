"""Orbit partitions of u under conjugation, class counts, and centralizer data.

partition_orbits runs a deterministic BFS over the whole coordinate space:
orbits are seeded at the least unvisited state and recorded in that order,
so identical inputs always produce identical partitions.  count_classes
then derives the class count of U three independent ways (orbit-size
ratios, an exact rational sum over centralizer orders, and a kernel sweep
over every state) and insists they agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import engine
from .errors import (
    InternalInconsistency,
    MembershipViolation,
    NoFit,
    NotAssociated,
    VerificationFailed,
)
from .flag import DEFAULT_STATE_CAP, DimensionVector, FlagContext
from .gf import field_for_order
from .matfq import MatrixFq, gl_order, rank, try_inverse


# -- pointwise operations -------------------------------------------------------


def adjoint_act(ctx: FlagContext, g: MatrixFq, x: MatrixFq) -> MatrixFq:
    """Conjugate x by g; both memberships are enforced."""
    if not ctx.in_P(g):
        raise MembershipViolation("g is not in the flag stabilizer")
    if not ctx.in_nilradical(x):
        raise MembershipViolation("x is not in the nilradical")
    out = g * x * try_inverse(g)
    assert ctx.in_nilradical(out)
    return out


def to_unipotent(ctx: FlagContext, x: MatrixFq) -> MatrixFq:
    """The bijection x -> 1 + x from the nilradical onto U."""
    if not ctx.in_nilradical(x):
        raise MembershipViolation("x is not in the nilradical")
    return MatrixFq.identity(ctx.field, ctx.n) + x


def to_nilpotent(ctx: FlagContext, u: MatrixFq) -> MatrixFq:
    """Inverse direction of the bijection: u -> u - 1."""
    if not ctx.in_U(u):
        raise MembershipViolation("u is not in U")
    return u - MatrixFq.identity(ctx.field, ctx.n)


def ad_matrix_on_cross(ctx: FlagContext, x: MatrixFq) -> MatrixFq:
    """Matrix of y -> xy - yx on the cross-position coordinate space."""
    m = ctx.dim_u
    F = ctx.field
    cols = []
    for r, s in ctx.cross_positions:
        e = MatrixFq.unit(F, ctx.n, r, s)
        cols.append(ctx.cross_values(x * e - e * x))
    entries = [cols[j][i] for i in range(m) for j in range(m)]
    return MatrixFq(F, m, entries)


# -- partition data ---------------------------------------------------------------


@dataclass
class OrbitRecord:
    rep: MatrixFq
    orbit_size: int
    u_orbit_size: int | None = None
    u_suborbit_count: int | None = None
    c_P_order: int | None = None
    c_U_order: int | None = None
    delta_prime: int | None = None
    zero_one_rep: MatrixFq | None = None

    def to_json(self) -> dict:
        return {
            "rep": self.rep.to_json(),
            "zero_one_rep": self.zero_one_rep.to_json() if self.zero_one_rep else None,
            "orbit_size": self.orbit_size,
            "u_orbit_size": self.u_orbit_size,
            "c_P_order": self.c_P_order,
            "c_U_order": self.c_U_order,
            "delta_prime": self.delta_prime,
        }


@dataclass
class OrbitPartition:
    ctx: FlagContext
    group: str
    records: list[OrbitRecord]
    labels: np.ndarray
    totals: int

    def orbit_index_of(self, x: MatrixFq) -> int:
        return int(self.labels[ctx_key(self.ctx, x)])

    def to_json(self) -> list:
        return [rec.to_json() for rec in self.records]


def ctx_key(ctx: FlagContext, x: MatrixFq) -> int:
    return ctx.key_of(x)


def _action_matrices(ctx: FlagContext, gens) -> np.ndarray:
    """Conjugation by each generator as an exact matrix on cross coordinates."""
    m = ctx.dim_u
    F = ctx.field
    mats = []
    ident = MatrixFq.identity(F, ctx.n).entries
    for g in gens:
        if g.entries == ident:
            continue
        gi = try_inverse(g)
        cols = []
        for r, s in ctx.cross_positions:
            e = MatrixFq.unit(F, ctx.n, r, s)
            img = g * e * gi
            assert ctx.in_nilradical(img)
            cols.append(ctx.cross_values(img))
        mats.append([[cols[j][i] for j in range(m)] for i in range(m)])
    if not mats:
        mats = [[[1 if i == j else 0 for j in range(m)] for i in range(m)]]
    kit = engine.FieldKit(F)
    return np.array(mats, dtype=kit.dtype), kit


def _trivial_partition(ctx: FlagContext, group: str) -> OrbitPartition:
    rec = OrbitRecord(
        rep=MatrixFq.zero(ctx.field, ctx.n),
        orbit_size=1,
        u_orbit_size=1,
        u_suborbit_count=1,
    )
    return OrbitPartition(ctx, group, [rec], np.zeros(1, dtype=np.int32), 1)


def partition_orbits(ctx: FlagContext, group: str = "P") -> OrbitPartition:
    """Partition u into adjoint orbits of P (default) or of U."""
    if group not in ("P", "U"):
        raise ValueError("group must be 'P' or 'U'")
    ctx.check_cap()
    if ctx.dim_u == 0:
        return _trivial_partition(ctx, group)
    gens = ctx.generators_P(include_inverses=False) if group == "P" else ctx.generators_U()
    gen_mats, kit = _action_matrices(ctx, gens)
    N = ctx.n_states
    labels, seeds, sizes = engine.bfs_partition(N, ctx.dim_u, ctx.q, kit, gen_mats)
    totals = int(sizes.sum())
    if totals != N:
        raise InternalInconsistency(f"orbit sizes sum to {totals}, expected {N}")
    records = [
        OrbitRecord(rep=ctx.matrix_of_key(int(seed)), orbit_size=int(size))
        for seed, size in zip(seeds, sizes)
    ]
    part = OrbitPartition(ctx, group, records, labels, totals)
    if group == "P":
        _fill_u_orbit_sizes(ctx, part)
    else:
        for rec in records:
            rec.u_orbit_size = rec.orbit_size
            rec.u_suborbit_count = 1
    return part


def _fill_u_orbit_sizes(ctx: FlagContext, part: OrbitPartition):
    u_mats, kit = _action_matrices(ctx, ctx.generators_U())
    scratch = np.full(ctx.n_states, -1, dtype=np.int32)
    for i, rec in enumerate(part.records):
        seed = ctx.key_of(rec.rep)
        size = engine.bfs_orbit_size(seed, ctx.dim_u, ctx.q, kit, u_mats, scratch, i)
        if rec.orbit_size % size:
            raise InternalInconsistency(
                f"U-orbit size {size} does not divide orbit size {rec.orbit_size}"
            )
        rec.u_orbit_size = size
        rec.u_suborbit_count = rec.orbit_size // size


def centralizer_orders(ctx: FlagContext, part: OrbitPartition) -> OrbitPartition:
    """Fill centralizer orders per record, cross-checking |C_U| two ways."""
    if part.group != "P":
        raise ValueError("centralizer orders are defined on a P-partition")
    orders = ctx.group_orders()
    q = ctx.q
    for rec in part.records:
        if orders["order_P"] % rec.orbit_size:
            raise InternalInconsistency("orbit size does not divide |P|")
        rec.c_P_order = orders["order_P"] // rec.orbit_size
        if orders["order_U"] % rec.u_orbit_size:
            raise InternalInconsistency("U-orbit size does not divide |U|")
        from_ratio = orders["order_U"] // rec.u_orbit_size
        if ctx.dim_u:
            nullity = ctx.dim_u - rank(ad_matrix_on_cross(ctx, rec.rep))
        else:
            nullity = 0
        from_kernel = q**nullity
        if from_ratio != from_kernel:
            raise InternalInconsistency(
                f"|C_U| disagreement: orbit ratio {from_ratio}, kernel {from_kernel}"
            )
        rec.c_U_order = from_ratio
        rec.delta_prime = nullity
    return part


# -- structure tensor for the kernel sweep ------------------------------------------


def ad_structure_tensor(ctx: FlagContext, kit) -> np.ndarray:
    """tensor[c, i, j] = coefficient of basis i in [E_c, E_j], encoded."""
    m = ctx.dim_u
    pos = ctx.cross_positions
    index = {p: i for i, p in enumerate(pos)}
    one = 1
    minus_one = ctx.field.neg(1)
    T = np.zeros((m, m, m), dtype=kit.dtype)
    for c, (rc, sc) in enumerate(pos):
        for j, (rj, sj) in enumerate(pos):
            if sc == rj:
                i = index.get((rc, sj))
                if i is not None:
                    T[c, i, j] = kit.field.add(int(T[c, i, j]), one)
            if sj == rc:
                i = index.get((rj, sc))
                if i is not None:
                    T[c, i, j] = kit.field.add(int(T[c, i, j]), minus_one)
    return T


# -- class counting -------------------------------------------------------------------


@dataclass
class ClassCount:
    k_U: int
    k_PU: int
    routes: dict
    per_orbit: list
    commuting_pairs: int
    partition: OrbitPartition = field(repr=False, default=None)


def count_classes(ctx: FlagContext, threads: int = 1) -> ClassCount:
    """Class count of U by three independent routes, asserted equal."""
    part = centralizer_orders(ctx, partition_orbits(ctx, "P"))
    orders = ctx.group_orders()
    N = ctx.n_states

    route_ratio = sum(rec.u_suborbit_count for rec in part.records)

    rational = sum(Fraction(rec.c_U_order, rec.c_P_order) for rec in part.records)
    rational *= orders["order_L"]
    if rational.denominator != 1 or rational < 0:
        raise InternalInconsistency(f"rational route gave non-integer {rational}")
    route_rational = int(rational)

    if ctx.dim_u == 0:
        kernel_total = 1
    else:
        kit = engine.FieldKit(ctx.field)
        tensor = ad_structure_tensor(ctx, kit)
        counts = engine.kernel_exponent_counts(
            N, ctx.dim_u, ctx.q, kit, tensor, threads=max(1, threads)
        )
        kernel_total = sum(
            int(c) * ctx.q ** (ctx.dim_u - r) for r, c in enumerate(counts.tolist())
        )
    if kernel_total % N:
        raise InternalInconsistency("kernel sweep total not divisible by |U|")
    route_kernel = kernel_total // N

    if not (route_ratio == route_rational == route_kernel):
        raise InternalInconsistency(
            f"class count routes disagree: ratio {route_ratio}, "
            f"rational {route_rational}, kernel {route_kernel}"
        )
    return ClassCount(
        k_U=route_ratio,
        k_PU=len(part.records),
        routes={
            "orbit_ratio": route_ratio,
            "levi_rational": route_rational,
            "burnside": route_kernel,
        },
        per_orbit=[rec.u_suborbit_count for rec in part.records],
        commuting_pairs=kernel_total,
        partition=part,
    )


def commuting_pairs(ctx: FlagContext, threads: int = 1) -> int:
    """Number of commuting pairs in U x U, equal to |U| * k(U)."""
    counts = count_classes(ctx, threads=threads)
    expected = ctx.group_orders()["order_U"] * counts.k_U
    if counts.commuting_pairs != expected:
        raise InternalInconsistency(
            f"commuting pairs {counts.commuting_pairs} != |U|*k(U) {expected}"
        )
    return counts.commuting_pairs


# -- 0/1 representatives ------------------------------------------------------------------


@dataclass
class ZeroOneReport:
    assigned: int
    missing: list


def find_zero_one_reps(ctx: FlagContext, part: OrbitPartition) -> ZeroOneReport:
    """Assign each orbit its first all-0/1 member, if one exists."""
    if ctx.dim_u == 0:
        part.records[0].zero_one_rep = part.records[0].rep
        return ZeroOneReport(assigned=1, missing=[])
    found = engine.zero_one_first_keys(part.labels, ctx.dim_u, ctx.q, len(part.records))
    missing = []
    for i, rec in enumerate(part.records):
        key = int(found[i])
        if key < 0:
            missing.append(i)
        else:
            rec.zero_one_rep = ctx.matrix_of_key(key)
    return ZeroOneReport(assigned=len(part.records) - len(missing), missing=missing)


@dataclass
class TransferReport:
    ok: bool
    n_orbits_source: int
    n_orbits_target: int
    patterns: list


def transfer_reps(
    ctx_a: FlagContext,
    ctx_b: FlagContext,
    part_a: OrbitPartition,
    part_b: OrbitPartition | None = None,
) -> TransferReport:
    """Re-read the 0/1 patterns of part_a over ctx_b's field and verify they
    are pairwise non-conjugate and cover every orbit there."""
    if ctx_a.dv.d != ctx_b.dv.d:
        raise ValueError("transfer requires identical dimension vectors")
    patterns = []
    for i, rec in enumerate(part_a.records):
        if rec.zero_one_rep is None:
            raise VerificationFailed(f"orbit {i} has no 0/1 representative to transfer")
        patterns.append(ctx_a.cross_values(rec.zero_one_rep))
    if part_b is None:
        part_b = partition_orbits(ctx_b, "P")
    seen = {}
    for i, pat in enumerate(patterns):
        key = 0
        for v in pat:
            key = key * ctx_b.q + v
        label = int(part_b.labels[key])
        if label in seen:
            raise VerificationFailed(
                f"patterns {seen[label]} and {i} are conjugate over q={ctx_b.q}"
            )
        seen[label] = i
    if len(patterns) != len(part_b.records):
        raise VerificationFailed(
            f"{len(patterns)} patterns cannot cover {len(part_b.records)} orbits at q={ctx_b.q}"
        )
    return TransferReport(
        ok=True,
        n_orbits_source=len(part_a.records),
        n_orbits_target=len(part_b.records),
        patterns=patterns,
    )


# -- centralizer order shape -----------------------------------------------------------------


@dataclass
class LeviFit:
    multiplicities: tuple
    delta: int
    all_fits: list


def _partitions_up_to(n: int):
    """All weakly decreasing tuples of positive ints with sum <= n, by total."""
    out = [()]
    for total in range(1, n + 1):
        stack = [((), total, total)]
        while stack:
            prefix, remaining, limit = stack.pop()
            if remaining == 0:
                out.append(prefix)
                continue
            for part in range(min(remaining, limit), 0, -1):
                stack.append((prefix + (part,), remaining - part, part))
    return out


def _exact_q_power(value: int, q: int):
    e = 0
    while value % q == 0:
        value //= q
        e += 1
    return e if value == 1 else None


def fit_levi_form(c_P_orders: dict, n: int, delta_max: int) -> LeviFit:
    """Search multisets {n_i} and exponents with prod |GL_{n_i}(q)| * q^delta
    matching the observed |C_P| at every sampled q."""
    qs = sorted(c_P_orders)
    if len(qs) < 3:
        raise ValueError("need at least 3 sampled q values")
    fits = []
    for multiset in _partitions_up_to(n):
        delta = None
        ok = True
        for q in qs:
            denom = 1
            for ni in multiset:
                denom *= gl_order(ni, q)
            obs = c_P_orders[q]
            if obs % denom:
                ok = False
                break
            e = _exact_q_power(obs // denom, q)
            if e is None or e > delta_max:
                ok = False
                break
            if delta is None:
                delta = e
            elif delta != e:
                ok = False
                break
        if ok:
            fits.append((multiset, delta))
    if not fits:
        raise NoFit(f"no Levi-shape fit for orders {c_P_orders}")
    return LeviFit(multiplicities=fits[0][0], delta=fits[0][1], all_fits=fits)


# -- association ------------------------------------------------------------------------------


@dataclass
class AssociationReport:
    ok: bool
    rows: list


def verify_association(
    d: DimensionVector,
    d_prime: DimensionVector,
    q_list,
    cap: int = DEFAULT_STATE_CAP,
    threads: int = 1,
) -> AssociationReport:
    """Check that both vectors see the same number of P-orbits at each q."""
    if d.nonzero_blocks() != d_prime.nonzero_blocks():
        raise NotAssociated(
            f"block multisets differ: {d.nonzero_blocks()} vs {d_prime.nonzero_blocks()}"
        )
    rows = []
    ok = True
    for q in q_list:
        f = field_for_order(q)
        ca = count_classes(FlagContext(d, f, cap), threads=threads)
        cb = count_classes(FlagContext(d_prime, f, cap), threads=threads)
        equal = ca.k_PU == cb.k_PU
        ok = ok and equal
        rows.append(
            {
                "q": q,
                "k_PU": ca.k_PU,
                "k_PU_prime": cb.k_PU,
                "k_U": ca.k_U,
                "k_U_prime": cb.k_U,
                "k_PU_equal": equal,
            }
        )
    if not ok:
        raise VerificationFailed(f"associated vectors disagree on P-class counts: {rows}")
    return AssociationReport(ok=ok, rows=rows)
