import random

import pytest

from helpers import (
    commuting_pair_count,
    conjugacy_class_count,
    naive_partition,
    unipotent_group,
)

from flagclass import (
    DimensionVector,
    FlagContext,
    MatrixFq,
    MembershipViolation,
    NoFit,
    NotAssociated,
    VerificationFailed,
    ad_matrix_on_cross,
    adjoint_act,
    centralizer_orders,
    commuting_pairs,
    count_classes,
    field_for_order,
    find_zero_one_reps,
    fit_levi_form,
    partition_orbits,
    to_nilpotent,
    to_unipotent,
    transfer_reps,
    try_inverse,
    verify_association,
)


def ctx_of(d_text, q, cap=1 << 24):
    return FlagContext(DimensionVector.parse(d_text), field_for_order(q), cap)


# -- pointwise ops ----------------------------------------------------------


def test_adjoint_act_examples():
    ctx = ctx_of("1,2", 3)
    F = ctx.field
    e12 = MatrixFq.unit(F, 2, 0, 1)
    ident = MatrixFq.identity(F, 2)
    assert adjoint_act(ctx, ident, e12) == e12
    g = MatrixFq.from_rows(F, [[2, 0], [0, 1]])
    assert adjoint_act(ctx, g, MatrixFq.zero(F, 2)).is_zero()
    assert adjoint_act(ctx, g, e12) == e12.scale(2)


def test_adjoint_act_membership_errors():
    ctx = ctx_of("1,2", 3)
    F = ctx.field
    e12 = MatrixFq.unit(F, 2, 0, 1)
    lower = MatrixFq.from_rows(F, [[1, 0], [1, 1]])
    with pytest.raises(MembershipViolation):
        adjoint_act(ctx, lower, e12)
    with pytest.raises(MembershipViolation):
        adjoint_act(ctx, MatrixFq.identity(F, 2), lower)


def test_unipotent_bijection():
    ctx = ctx_of("2,3,4", 3)
    F = ctx.field
    ident = MatrixFq.identity(F, 4)
    assert to_unipotent(ctx, MatrixFq.zero(F, 4)) == ident
    rng = random.Random(3)
    gens = ctx.generators_P()
    for _ in range(20):
        g = ident
        for _ in range(4):
            g = g * rng.choice(gens)
        x = ctx.cross_matrix([rng.randrange(3) for _ in range(ctx.dim_u)])
        # equivariance: conjugating 1+x equals 1 + (conjugate of x)
        left = g * to_unipotent(ctx, x) * try_inverse(g)
        right = to_unipotent(ctx, adjoint_act(ctx, g, x))
        assert left == right
        assert to_nilpotent(ctx, to_unipotent(ctx, x)) == x


def test_ad_matrix_on_cross_abelian_case():
    ctx = ctx_of("1,2", 3)
    e12 = MatrixFq.unit(ctx.field, 2, 0, 1)
    ad = ad_matrix_on_cross(ctx, e12)
    assert ad.n == 1 and ad.is_zero()


# -- partitions vs the brute-force oracle ---------------------------------------


def test_partition_matches_naive_bfs():
    for d_text, q in [("1,2", 2), ("1,2", 3), ("1,2", 5), ("1,2,3", 2), ("1,2,3", 3), ("2,3,4", 2)]:
        ctx = ctx_of(d_text, q)
        part = partition_orbits(ctx, "P")
        expected, _ = naive_partition(ctx, ctx.generators_P())
        assert [(r.rep, r.orbit_size) for r in part.records] == expected, (d_text, q)
        assert part.totals == ctx.n_states


def test_two_orbits_for_minimal_flag():
    for q in (2, 3, 5):
        part = partition_orbits(ctx_of("1,2", q), "P")
        assert len(part.records) == 2
        assert [r.orbit_size for r in part.records] == [1, q - 1]


def test_u_partition_abelian_is_trivial():
    part = partition_orbits(ctx_of("1,2", 3), "U")
    assert len(part.records) == 3
    assert all(r.orbit_size == 1 for r in part.records)


def test_group_conjugation_agrees_with_adjoint_orbits():
    for d_text, q in [("1,2", 2), ("1,2", 3), ("1,2,3", 2), ("2,3,4", 2)]:
        ctx = ctx_of(d_text, q)
        direct = conjugacy_class_count(unipotent_group(ctx))
        assert count_classes(ctx).k_U == direct, (d_text, q)


def test_trivial_flag():
    cc = count_classes(ctx_of("4", 3))
    assert cc.k_U == 1 and cc.k_PU == 1


# -- centralizers ------------------------------------------------------------------


def test_centralizer_of_zero():
    ctx = ctx_of("2,3,4", 2)
    part = centralizer_orders(ctx, partition_orbits(ctx, "P"))
    zero = part.records[0]
    assert zero.rep.is_zero()
    orders = ctx.group_orders()
    assert zero.c_P_order == orders["order_P"]
    assert zero.c_U_order == orders["order_U"]
    assert zero.delta_prime == ctx.dim_u


def test_centralizer_closed_form_minimal_flag():
    # C_P(E_12) = {aI + bE_12, a != 0}, order (q-1)q
    for q in (2, 3, 5):
        ctx = ctx_of("1,2", q)
        part = centralizer_orders(ctx, partition_orbits(ctx, "P"))
        nonzero = part.records[1]
        assert nonzero.c_P_order == (q - 1) * q
        assert nonzero.c_U_order == q  # abelian U centralizes everything


def test_centralizer_orders_are_q_powers():
    ctx = ctx_of("2,3,4", 2)
    part = centralizer_orders(ctx, partition_orbits(ctx, "P"))
    for rec in part.records:
        c = rec.c_U_order
        while c % 2 == 0:
            c //= 2
        assert c == 1
        assert rec.orbit_size * rec.c_P_order == 192
        assert rec.u_orbit_size * rec.c_U_order == 32
        assert rec.orbit_size % rec.u_orbit_size == 0


# -- class counts -----------------------------------------------------------------------


# machine-verified by direct group-element conjugation (see helpers) and by
# three independent counting routes; closed forms 2q^3-q and q^4+q-1
COUNTS_234 = {2: 14, 3: 51, 4: 124, 5: 245, 7: 679}
COUNTS_134 = {2: 17, 3: 83, 4: 259, 5: 629, 7: 2407}


def test_class_counts_blocks_211(counts_for):
    for q, expected in COUNTS_234.items():
        _, cc = counts_for("2,3,4", q)
        assert cc.k_U == expected
        assert cc.k_PU == 6
        assert cc.routes["orbit_ratio"] == cc.routes["levi_rational"] == cc.routes["burnside"]


def test_class_counts_blocks_121(counts_for):
    for q, expected in COUNTS_134.items():
        _, cc = counts_for("1,3,4", q)
        assert cc.k_U == expected
        assert cc.k_PU == 6


def test_class_counts_full_flag_small(counts_for):
    # classical values for full upper unitriangular groups
    for q, expected in {2: 5, 3: 11, 5: 29}.items():
        _, cc = counts_for("1,2,3", q)
        assert cc.k_U == expected  # q^2 + q - 1
    for q, expected in {2: 16, 3: 57, 5: 265}.items():
        _, cc = counts_for("1,2,3,4", q)
        assert cc.k_U == expected  # 2q^3 + q^2 - 2q


def test_abelian_two_step_counts(counts_for):
    for q in (2, 3, 4):
        _, cc = counts_for("1,2", q)
        assert cc.k_U == q
        _, cc = counts_for("2,4", q)
        assert cc.k_U == q**4


def test_commuting_pairs_small():
    assert commuting_pairs(ctx_of("1,2", 3)) == 9
    ctx = ctx_of("2,3,4", 2)
    value = commuting_pairs(ctx)
    assert value == 32 * 14
    assert value == commuting_pair_count(unipotent_group(ctx))


def test_commuting_pairs_q3(counts_for):
    _, cc = counts_for("2,3,4", 3)
    assert cc.commuting_pairs == 243 * 51


def test_counts_deterministic_and_thread_independent():
    a = count_classes(ctx_of("1,2,3", 3), threads=1)
    b = count_classes(ctx_of("1,2,3", 3), threads=2)
    assert a.k_U == b.k_U and a.per_orbit == b.per_orbit
    ra = [(r.rep, r.orbit_size, r.u_orbit_size) for r in a.partition.records]
    rb = [(r.rep, r.orbit_size, r.u_orbit_size) for r in b.partition.records]
    assert ra == rb


def test_zero_block_flag(counts_for):
    # (1,1,2) carries an empty middle block and must behave like (1,2)
    for q in (2, 3):
        _, cc = counts_for("1,1,2", q)
        assert cc.k_U == q
        assert cc.k_PU == 2


# -- 0/1 representatives --------------------------------------------------------------------


def test_zero_one_reps_minimal_flag():
    ctx = ctx_of("1,2", 3)
    part = partition_orbits(ctx, "P")
    report = find_zero_one_reps(ctx, part)
    assert report.missing == []
    assert part.records[0].zero_one_rep.is_zero()
    assert part.records[1].zero_one_rep == MatrixFq.unit(ctx.field, 2, 0, 1)


def test_zero_one_patterns_field_independent(counts_for):
    ctx2, cc2 = counts_for("2,3,4", 2)
    ctx3, cc3 = counts_for("2,3,4", 3)
    pats2 = {ctx2.cross_values(r.zero_one_rep) for r in cc2.partition.records}
    pats3 = {ctx3.cross_values(r.zero_one_rep) for r in cc3.partition.records}
    assert pats2 == pats3
    assert len(pats2) == 6


def test_transfer_reps(counts_for):
    ctx2, cc2 = counts_for("1,2", 2)
    ctx5, cc5 = counts_for("1,2", 5)
    report = transfer_reps(ctx2, ctx5, cc2.partition, cc5.partition)
    assert report.ok and report.n_orbits_target == 2
    ctxa, cca = counts_for("2,3,4", 2)
    ctxb, ccb = counts_for("2,3,4", 3)
    report = transfer_reps(ctxa, ctxb, cca.partition, ccb.partition)
    assert report.ok and report.n_orbits_target == 6


def test_transfer_requires_same_vector():
    ctx_a = ctx_of("1,2", 2)
    ctx_b = ctx_of("2,4", 3)
    part = partition_orbits(ctx_a, "P")
    find_zero_one_reps(ctx_a, part)
    with pytest.raises(ValueError):
        transfer_reps(ctx_a, ctx_b, part)


def test_transfer_rejects_missing_pattern():
    ctx_a = ctx_of("1,2", 2)
    part = partition_orbits(ctx_a, "P")  # zero_one_rep never filled
    with pytest.raises(VerificationFailed):
        transfer_reps(ctx_a, ctx_of("1,2", 3), part)


# -- Levi fits ------------------------------------------------------------------------------


def test_fit_levi_form_zero_orbit(counts_for):
    orders = {}
    for q in (2, 3, 4, 5):
        _, cc = counts_for("2,3,4", q)
        orders[q] = cc.partition.records[0].c_P_order
    fit = fit_levi_form(orders, 4, 5 + 16)
    assert fit.all_fits == [((2, 1, 1), 5)]


def test_fit_levi_form_minimal_flag():
    orders = {q: (q - 1) * q for q in (2, 3, 5)}
    fit = fit_levi_form(orders, 2, 10)
    assert ((1,), 1) in fit.all_fits


def test_fit_levi_form_failures():
    with pytest.raises(ValueError):
        fit_levi_form({2: 2, 3: 6}, 2, 10)
    with pytest.raises(NoFit):
        fit_levi_form({2: 7, 3: 7, 5: 7}, 2, 10)


# -- association -------------------------------------------------------------------------------


def test_association(counts_for):
    report = verify_association(
        DimensionVector.parse("2,3,4"), DimensionVector.parse("1,3,4"), [2, 3]
    )
    by_q = {row["q"]: row for row in report.rows}
    assert by_q[2]["k_PU"] == by_q[2]["k_PU_prime"] == 6
    assert (by_q[2]["k_U"], by_q[2]["k_U_prime"]) == (14, 17)
    assert (by_q[3]["k_U"], by_q[3]["k_U_prime"]) == (51, 83)


def test_association_identity_and_rejection():
    report = verify_association(DimensionVector.parse("1,2"), DimensionVector.parse("1,2"), [2])
    assert report.ok
    with pytest.raises(NotAssociated):
        verify_association(DimensionVector.parse("1,2"), DimensionVector.parse("2,4"), [2])


def test_record_invariants_battery(counts_for):
    cells = [
        ("1,2", 2), ("1,2", 3), ("2,4", 3), ("1,2,3", 2), ("1,2,3", 3),
        ("2,3,4", 2), ("2,3,4", 3), ("1,3,4", 2), ("1,1,2", 3),
    ]
    for d_text, q in cells:
        ctx, cc = counts_for(d_text, q)
        orders = ctx.group_orders()
        records = cc.partition.records
        assert sum(r.orbit_size for r in records) == ctx.n_states
        assert len({ctx.key_of(r.rep) for r in records}) == len(records)
        for r in records:
            assert r.orbit_size * r.c_P_order == orders["order_P"]
            assert r.u_orbit_size * r.c_U_order == orders["order_U"]
            assert r.orbit_size % r.u_orbit_size == 0
            assert r.c_U_order == q**r.delta_prime


def test_holdout_stability_on_computed_counts(counts_for):
    from flagclass import stability_check

    counts = {q: counts_for("2,3,4", q)[1].k_U for q in (2, 3, 4, 5, 7)}
    rep = stability_check(counts, 7)
    assert rep.match and rep.predicted == counts[7] == 679


def test_large_field_engine_paths():
    # q = 257 exercises the wide-prime path, q = 1024 the log/antilog path
    for q in (257, 1024):
        cc = count_classes(ctx_of("1,2", q))
        assert cc.k_U == q and cc.k_PU == 2


# -- long flags (outside the q-independence scope) -----------------------------------------------


def test_long_flag_runs_per_q():
    dv = DimensionVector.parse("1,2,3,4,5,6")
    assert not dv.finite_type
    ctx = FlagContext(dv, field_for_order(2))
    cc = count_classes(ctx)
    assert cc.k_U >= cc.k_PU > 0
    assert sum(r.orbit_size for r in cc.partition.records) == 2**15


# -- wire format ----------------------------------------------------------------------------------


def test_partition_json_records(counts_for):
    _, cc = counts_for("1,2", 3)
    js = cc.partition.to_json()
    assert [sorted(rec) for rec in js] == [
        sorted(
            ["rep", "zero_one_rep", "orbit_size", "u_orbit_size", "c_P_order", "c_U_order", "delta_prime"]
        )
    ] * 2
    assert js[0]["orbit_size"] == 1
    assert js[1]["rep"] == {"n": 2, "rows": [[0, 1], [0, 0]]}
