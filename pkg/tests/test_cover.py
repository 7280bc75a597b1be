"""Cover instances, bounds, reductions, the exact solver, and verification."""

from __future__ import annotations

from collections import Counter

import pytest

from groupcover import (
    BudgetExhaustedError,
    CyclicGroupError,
    INFINITY,
    build_instance,
    counting_lower_bound,
    enumerate_optimal_covers,
    greedy_upper_bound,
    lattice,
    reduce as reduce_instance,
    solve_exact,
    verify_cover,
)

from conftest import brute_of, grp


def test_sym3_instance_is_identity_incidence():
    ins = build_instance(grp("Sym(3)"))
    assert len(ins.rows) == 4 and len(ins.cols) == 4
    assert ins.inc.sum() == 4
    assert (ins.inc.sum(axis=0) == 1).all() and (ins.inc.sum(axis=1) == 1).all()


def test_alt5_instance_shape():
    ins = build_instance(grp("Alt(5)"))
    row_orders = Counter(r.order for r in ins.rows)
    col_orders = Counter(c.order for c in ins.cols)
    assert row_orders == {2: 15, 3: 10, 5: 6}
    assert col_orders == {12: 5, 6: 10, 10: 6}
    assert ins.inc.shape == (31, 21)


def test_instance_rejects_cyclic():
    with pytest.raises(CyclicGroupError):
        build_instance(grp("Cyclic(6)"))
    with pytest.raises(CyclicGroupError):
        build_instance(grp("Cyclic(30)"))


def test_instance_is_deterministic():
    a = build_instance(grp("Alt(5)"))
    b = build_instance(grp("Alt(5)"))
    assert [c.digest for c in a.cols] == [c.digest for c in b.cols]
    assert [r.digest for r in a.rows] == [r.digest for r in b.rows]
    assert (a.inc == b.inc).all()


def test_counting_lower_bound_small():
    cert = counting_lower_bound(grp("Alt(5)"), 5)
    assert cert.kind == "counting-bound"
    assert cert.payload["order"] == 5
    assert cert.payload["elements"] == 24
    assert cert.payload["max_per_subgroup"] == 4  # a D10 holds four 5-elements
    assert cert.payload["bound"] == 6
    cert2 = counting_lower_bound(grp("Sym(3)"), 2)
    assert cert2.payload["elements"] == 3 and cert2.payload["bound"] == 3
    d = cert.as_dict()
    assert d["kind"] == "counting-bound" and d["bound"] == 6


def test_counting_lower_bound_errors():
    with pytest.raises(ValueError):
        counting_lower_bound(grp("Alt(5)"), 4)  # no elements of order 4
    with pytest.raises(CyclicGroupError):
        counting_lower_bound(grp("Cyclic(6)"), 2)


def test_counting_bound_never_exceeds_sigma():
    from groupcover import sigma_value

    for spec in ["Sym(3)", "Alt(4)", "Alt(5)", "Dihedral(7)", "AGL1(8)", "Sym(5)"]:
        G = grp(spec)
        s = sigma_value(G)
        T = G.table()
        for k in sorted(set(int(o) for o in T.orders) - {1}):
            assert counting_lower_bound(G, k).payload["bound"] <= s, (spec, k)


def test_greedy_upper_bound_is_a_cover():
    for spec in ["Alt(5)", "Sym(4)", "PSL3(2)", "Frobenius(11,5)"]:
        ins = build_instance(grp(spec))
        chosen = greedy_upper_bound(ins)
        covered = ins.inc[:, chosen].any(axis=1)
        assert covered.all(), spec


def test_unique_coverage_reduction_forces_columns():
    ins = build_instance(grp("Alt(4)"))
    reduce_instance(ins)
    # each C3 row forces its own C3 column; the C2 rows force the Klein column
    assert len(ins.forced) == 5
    kinds = Counter(c.kind for c in ins.certificates)
    assert kinds["unique-coverer"] == 5
    assert Counter(c.payload["row_order"] for c in ins.certificates) == {3: 4, 2: 1}
    forced_orders = Counter(ins.cols[j].order for j in ins.forced)
    assert forced_orders == {3: 4, 4: 1}


def test_sym3_reduction_forces_everything():
    ins = build_instance(grp("Sym(3)"))
    reduce_instance(ins)
    assert len(ins.forced) == 4
    sigma, cover, stats = solve_exact(ins)
    assert sigma == 4 and sorted(cover) == [0, 1, 2, 3]


def test_solve_exact_small_sigmas():
    for spec, want in [
        ("ElemAbelian(2,2)", 3),
        ("Sym(3)", 4),
        ("Alt(4)", 5),
        ("Dihedral(5)", 6),
        ("Sym(4)", 4),
        ("ElemAbelian(3,2)", 4),
    ]:
        ins = build_instance(grp(spec))
        sigma, cover, stats = solve_exact(ins)
        assert sigma == want, spec
        assert len(cover) == want
        assert ins.inc[:, cover].any(axis=1).all()
        assert stats["root_lower_bound"] <= want


def test_solver_matches_brute_oracle_on_small_groups():
    from groupcover import sigma_value

    for spec in ["Sym(3)", "Alt(4)", "Dihedral(6)", "Frobenius(7,3)", "ElemAbelian(5,2)"]:
        assert sigma_value(grp(spec)) == brute_of(spec).min_cover_size(), spec


def test_node_budget_exhaustion_yields_interval():
    ins = build_instance(grp("Alt(5)"))
    with pytest.raises(BudgetExhaustedError) as err:
        solve_exact(ins, node_budget=1)
    assert err.value.lower is not None and err.value.upper is not None
    assert err.value.lower <= 10 <= err.value.upper


def test_enumerate_alt5_optimal_covers():
    ins = build_instance(grp("Alt(5)"))
    sigma, cover, _ = solve_exact(ins)
    assert sigma == 10
    count, covers, exact = enumerate_optimal_covers(ins, sigma, limit=1000)
    assert exact and count == 15 and len(covers) == 15
    # every optimal cover uses all six D10s, plus either four A4s, or
    # three A4s and one S3
    for cov in covers:
        orders = Counter(ins.cols[j].order for j in cov)
        assert orders[10] == 6
        assert orders in (
            {10: 6, 12: 4},
            {10: 6, 12: 3, 6: 1},
        )
    shapes = Counter(tuple(sorted(Counter(ins.cols[j].order for j in cov).items())) for cov in covers)
    assert shapes[((6, 1), (10, 6), (12, 3))] == 10
    assert shapes[((10, 6), (12, 4))] == 5


def test_enumerate_limit_reports_lower_bound():
    ins = build_instance(grp("Alt(5)"))
    count, covers, exact = enumerate_optimal_covers(ins, 10, limit=5)
    assert not exact and count == ">=6" and len(covers) == 5


def test_verify_cover_round_trip():
    for spec in ["Alt(5)", "Sym(4)", "Frobenius(13,4)"]:
        G = grp(spec)
        ins = build_instance(G)
        sigma, cover, _ = solve_exact(ins)
        families = [ins.describe_col(j) for j in cover]
        res = verify_cover(G, families)
        assert res.ok, (spec, res.reason)


def test_verify_rejects_improper_member():
    G = grp("Alt(5)")
    gens = [g.cycle_string() for g in G.generators]
    res = verify_cover(G, [gens])
    assert not res.ok and res.reason == "subgroup-not-proper"


def test_verify_rejects_uncovered():
    G = grp("Alt(5)")
    ins = build_instance(G)
    sigma, cover, _ = solve_exact(ins)
    families = [ins.describe_col(j) for j in cover[:-1]]
    res = verify_cover(G, families)
    assert not res.ok and res.reason == "element-uncovered"
    assert isinstance(res.witness, str) and res.witness.startswith("(")
    missing = res.witness
    from groupcover import parse_cycles

    assert G.contains(parse_cycles(missing, G.degree))


def test_verify_rejects_foreign_generator():
    G = grp("Alt(5)")
    res = verify_cover(G, [["(1 2)"]])  # odd permutation, not in Alt(5)
    assert not res.ok and res.reason == "generator-outside-group"


def test_forced_columns_appear_in_every_optimal_cover():
    ins = build_instance(grp("Alt(4)"))
    reduce_instance(ins)
    forced = set(ins.forced)
    sigma, cover, _ = solve_exact(ins)
    count, covers, exact = enumerate_optimal_covers(ins, sigma, limit=100)
    assert exact
    for cov in covers:
        assert forced <= set(cov)


def test_residual_lower_bound_additivity():
    """Counting bounds over disjoint column families add up."""
    import numpy as np

    ins = build_instance(grp("Alt(7)"))
    avail = np.ones(len(ins.cols), dtype=bool)
    root = ins.residual_lower_bound(1, avail)  # identity element covered
    # order-7 elements alone force 15; order-6 elements add 11 more
    assert root >= 26


def test_infinity_ordering():
    assert INFINITY > 10**9
    assert not (INFINITY < 3)
    assert INFINITY == INFINITY
    assert INFINITY != 5
    assert min(INFINITY, 7) == 7
    assert max(INFINITY, 7) is INFINITY
