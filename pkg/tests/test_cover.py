"""Tests for the exact-cover feasibility engine.

Feasibility answers are pinned two ways: against the brute-force oracle in
``oracles.py`` (an unoptimized min-point recursion with only the counting
prune) and against classical facts about small binary spaces -- a maximal
partial line spread of PG(4,2) has nine lines, any two planes of PG(4,2)
meet, and every line meets every hyperplane.

Slow refutations (the full PG(4,2) oracle sweep, the three-solids search)
live in the acceptance module; here the oracle comparisons stick to cases
that answer in well under a second.
"""

import time

import pytest

from oracles import exact_point_demands, naive_partition_exists
from vspart.constructions import Partition, desarguesian_spread, verify_partition
from vspart.cover import (
    DEFAULT_NODE_BUDGET,
    build_problem,
    max_disjoint,
    search_type,
    solve,
    subspaces_in_ground,
)
from vspart.errors import BudgetExceededError
from vspart.gf import field, gaussian_binomial
from vspart.refdata import load_pointset
from vspart.subspace import PointIndexer, Subspace, enumerate_subspaces
from vspart.typecalc import PartitionType, parse_type


def sizes_upto(v, q=2):
    return {d: gaussian_binomial(d, 1, q) for d in range(1, v)}


def pg_codes(v, q=2):
    return PointIndexer(v, field(q)).codes


def three_solids_ground():
    """Point codes of three pairwise disjoint solids in PG(7,2)."""
    spread = desarguesian_spread(8, 4, 2)
    solids = spread.elements[:3]
    codes = []
    for s in solids:
        codes.extend(s.point_codes())
    return solids, sorted(codes)


def assert_witness_partitions(witness, codes, demand):
    seen = set()
    counts = {}
    for s in witness:
        pts = s.point_codes()
        assert not seen.intersection(pts)
        seen.update(pts)
        counts[s.k] = counts.get(s.k, 0) + 1
    assert seen == set(codes)
    assert counts == {d: c for d, c in demand.items() if c}


# ---------------------------------------------------------------------------
# Problem assembly


def test_build_problem_counting_flag():
    f = field(2)
    codes = pg_codes(4)
    assert build_problem(codes, "2^5", f=f, v=4).counting_ok
    assert build_problem(codes, "2^4 1^3", f=f, v=4).counting_ok
    short = build_problem(codes, "2^5 1^1", f=f, v=4)
    assert not short.counting_ok
    assert short.candidates == {}  # no candidate enumeration without counting


def test_build_problem_candidate_counts_three_solids():
    _, codes = three_solids_ground()
    prob = build_problem(codes, "3^1 2^11 1^5", f=field(2), v=8)
    assert prob.counting_ok
    assert prob.candidate_counts() == {3: 45, 2: 120}
    assert prob.singles == 5


def test_build_problem_candidate_counts_m20():
    m20 = load_pointset("m20")
    prob = build_problem(m20, "2^5 1^5")
    assert prob.candidate_counts() == {2: 12}


def test_build_problem_demand_forms_agree():
    f = field(2)
    codes = pg_codes(4)
    a = build_problem(codes, "2^4 1^3", f=f, v=4)
    b = build_problem(codes, {2: 4, 1: 3}, f=f, v=4)
    c = build_problem(codes, parse_type("2^4 1^3"), f=f, v=4)
    assert a.demand == b.demand == c.demand == {2: 4, 1: 3}


def test_build_problem_rejects_bad_demand():
    f = field(2)
    with pytest.raises(ValueError):
        build_problem(pg_codes(4), "4^1", f=f, v=4)  # dim must stay below v


def test_build_problem_rejects_multiset_ground():
    f = field(2)
    from vspart.multisets import PointMultiset
    twice = PointMultiset(f, 4, {1: 2, 2: 1, 3: 1})
    with pytest.raises(ValueError):
        build_problem(twice, "1^3")


def test_build_problem_fixed_validation():
    f = field(2)
    codes = pg_codes(4)
    spread = desarguesian_spread(4, 2, 2)
    l0, l1 = spread.elements[0], spread.elements[1]
    prob = build_problem(codes, "2^5", f=f, v=4, fixed=[l0, l1])
    assert prob.residual == {2: 3}
    assert len(prob.free) == 15 - 6
    with pytest.raises(ValueError):  # exceeds the demand
        build_problem(codes, "2^1 1^12", f=f, v=4, fixed=[l0, l1])
    with pytest.raises(ValueError):  # not disjoint
        overlapping = next(
            s for s in enumerate_subspaces(4, 2, f)
            if s != l0 and set(s.point_codes()) & set(l0.point_codes())
        )
        build_problem(codes, "2^5", f=f, v=4, fixed=[l0, overlapping])
    with pytest.raises(ValueError):  # leaves the ground
        build_problem(sorted(set(codes) - {l0.point_codes()[0]}), "2^4 1^2",
                      f=f, v=4, fixed=[l0])


def test_subspaces_in_ground_three_solids():
    solids, codes = three_solids_ground()
    f = field(2)
    found = subspaces_in_ground(f, 8, 4, codes)
    assert sorted(found) == sorted(solids)  # nothing but the originals
    assert len(subspaces_in_ground(f, 8, 3, codes)) == 45
    assert len(subspaces_in_ground(f, 8, 2, codes)) == 120


def test_subspaces_in_ground_budget():
    with pytest.raises(BudgetExceededError):
        subspaces_in_ground(field(2), 8, 2, pg_codes(8), budget=10)


# ---------------------------------------------------------------------------
# solve()


def test_solve_finds_line_spread():
    f = field(2)
    codes = pg_codes(4)
    out = solve(build_problem(codes, "2^5", f=f, v=4))
    assert out.found and out.status == "found"
    assert_witness_partitions(out.witness, codes, {2: 5})


def test_solve_counting_infeasible():
    out = solve(build_problem(pg_codes(4), "2^5 1^1", f=field(2), v=4))
    assert out.infeasible
    assert out.reason == "counting"
    assert out.nodes == 0


def test_solve_candidate_shortage():
    out = solve(build_problem(load_pointset("m20"), {3: 1, 2: 4, 1: 1}))
    assert out.infeasible
    assert out.reason == "candidates"  # the 20 points contain no plane at all


def test_solve_exhausts_impossible_mixed_demand():
    # A plane and a line of PG(3,2) always meet; the engine has to discover
    # that by exhausting the tree rather than by any dimension arithmetic.
    out = solve(build_problem(pg_codes(4), "3^1 2^1 1^5", f=field(2), v=4))
    assert out.infeasible
    assert out.reason == "exhausted"
    assert out.nodes > 0


def test_solve_with_fixed_elements():
    f = field(2)
    codes = pg_codes(4)
    fixed = desarguesian_spread(4, 2, 2).elements[:2]
    out = solve(build_problem(codes, "2^5", f=f, v=4, fixed=fixed))
    assert out.found
    assert set(fixed) <= set(out.witness)
    assert_witness_partitions(out.witness, codes, {2: 5})


def test_solve_deterministic():
    f = field(2)
    codes = pg_codes(5, 2)
    runs = [solve(build_problem(codes, "3^1 2^6 1^6", f=f, v=5)) for _ in range(2)]
    assert runs[0].witness == runs[1].witness
    assert runs[0].nodes == runs[1].nodes


def test_solve_node_budget_reports_timeout():
    out = solve(build_problem(pg_codes(5), {2: 10, 1: 1}, f=field(2), v=5),
                node_budget=50)
    assert out.timed_out and out.status == "timeout"
    assert out.witness is None
    assert out.nodes <= 51


def test_solve_time_budget_reports_timeout():
    out = solve(build_problem(pg_codes(5), {2: 10, 1: 1}, f=field(2), v=5),
                time_budget=0.0)
    assert out.timed_out


def test_solve_partitions_three_solids_into_lines():
    _, codes = three_solids_ground()
    out = solve(build_problem(codes, "2^15", f=field(2), v=8))
    assert out.found
    assert_witness_partitions(out.witness, codes, {2: 15})


def test_solve_m75a_planes_and_points():
    m75 = load_pointset("m75a")
    out = solve(build_problem(m75, "3^8 1^19"))
    assert out.found
    assert_witness_partitions(out.witness, m75.support_codes(), {3: 8, 1: 19})


# ---------------------------------------------------------------------------
# Agreement with the brute-force oracle (fast cases; the PG(4,2) demands
# whose naive refutation takes tens of seconds run in the acceptance suite)


def oracle_setup(v, q=2):
    f = field(q)
    universe = frozenset(pg_codes(v, q))
    point_sets = [
        (d, frozenset(s.point_codes()))
        for d in range(2, v)
        for s in enumerate_subspaces(v, d, f)
    ]
    return point_sets, universe


def test_engine_agrees_with_oracle_on_all_pg32_demands():
    point_sets, universe = oracle_setup(4)
    f = field(2)
    demands = exact_point_demands(15, sizes_upto(4))
    assert len(demands) == 10
    for dem in demands:
        want = naive_partition_exists(point_sets, universe, dem, sizes_upto(4))
        got = solve(build_problem(sorted(universe), dem, f=f, v=4))
        assert got.status in ("found", "infeasible")
        assert got.found == want, dem


# Feasibility over PG(4,2) follows a clean rule: a demand is realizable
# unless it needs two elements of dimensions summing past 5 (those always
# meet) or it is 2^10 1^1 (a partial line spread has at most nine lines).
def expected_pg42(dem):
    high = sorted((d for d, c in dem.items() for _ in range(c) if d >= 2),
                  reverse=True)
    if len(high) >= 2 and high[0] + high[1] > 5:
        return False
    return dem != {2: 10, 1: 1}


FAST_PG42 = [
    dem for dem in exact_point_demands(31, sizes_upto(5))
    if dem != {2: 10, 1: 1}
    and not (dem.get(3) == 2 and dem.get(2, 0) >= 2)
    and not (dem.get(4) == 1 and dem.get(2, 0) >= 3)
]


@pytest.mark.parametrize("dem", FAST_PG42, ids=lambda d: str(PartitionType(d)))
def test_engine_agrees_with_oracle_on_fast_pg42_demands(dem):
    point_sets, universe = oracle_setup(5)
    want = naive_partition_exists(point_sets, universe, dem, sizes_upto(5))
    got = solve(build_problem(sorted(universe), dem, f=field(2), v=5))
    assert want == expected_pg42(dem)
    assert got.found == want


def test_engine_refutes_ten_line_partial_spread():
    # The one slow PG(4,2) refutation, engine side only (~7 s): nine is the
    # true maximum, so ten lines plus a singleton must exhaust.
    out = solve(build_problem(pg_codes(5), {2: 10, 1: 1}, f=field(2), v=5))
    assert out.infeasible and out.reason == "exhausted"


# ---------------------------------------------------------------------------
# max_disjoint


def test_max_disjoint_lines_pg32():
    r = max_disjoint(pg_codes(4), 2, f=field(2), v=4)
    assert r.count == 5 and r.status == "exhausted"
    assert len(r.witness) == 5
    assert_witness_partitions(r.witness, [c for s in r.witness for c in s.point_codes()],
                              {2: 5})


def test_max_disjoint_lines_pg42_is_nine():
    r = max_disjoint(pg_codes(5), 2, f=field(2), v=5)
    assert r.count == 9 and r.status == "exhausted"


def test_max_disjoint_planes_pg42_is_one():
    r = max_disjoint(pg_codes(5), 3, f=field(2), v=5)
    assert r.count == 1 and r.status == "exhausted"  # any two planes meet


def test_max_disjoint_m20_lines():
    r = max_disjoint(load_pointset("m20"), 2)
    assert r.count == 5 and r.status == "exhausted"


def test_max_disjoint_m75a_planes():
    r = max_disjoint(load_pointset("m75a"), 3)
    assert r.count == 8 and r.status == "exhausted"


def test_max_disjoint_m75a_lines_after_eight_planes():
    m75 = load_pointset("m75a")
    eight = max_disjoint(m75, 3).witness
    assert len(eight) == 8
    r = max_disjoint(m75, 2, fixed=eight)
    assert r.count == 1 and r.status == "exhausted"


def test_max_disjoint_budget_gives_lower_bound():
    r = max_disjoint(pg_codes(5), 2, f=field(2), v=5, node_budget=3)
    assert r.status == "timeout"
    assert 0 <= r.count <= 9


def test_max_disjoint_rejects_bad_dim():
    with pytest.raises(ValueError):
        max_disjoint(pg_codes(4), 4, f=field(2), v=4)


# ---------------------------------------------------------------------------
# search_type


def test_search_type_finds_plane_spread_pg52():
    out = search_type(6, 2, "3^9")
    assert out.found
    p = Partition(field(2), 6, out.witness)
    assert p.type() == parse_type("3^9")
    assert verify_partition(p).ok


def test_search_type_prescription_policies_agree():
    auto = search_type(6, 2, "3^9", prescribe="auto")
    none = search_type(6, 2, "3^9", prescribe="none")
    assert auto.found and none.found
    for out in (auto, none):
        assert verify_partition(Partition(field(2), 6, out.witness)).ok


def test_search_type_exhausts_near_miss():
    out = search_type(6, 2, "3^8 2^2 1^1")
    assert out.infeasible and out.reason == "exhausted"


def test_search_type_counting_reject():
    out = search_type(6, 2, "3^9 1^1")
    assert out.infeasible and out.reason == "counting"
    assert out.nodes == 0


def test_search_type_dimension_reject():
    out = search_type(6, 2, "4^1 3^1 2^13 1^2")
    assert out.infeasible and out.reason == "dimension"
    assert out.nodes == 0


def test_search_type_node_budget_timeout():
    out = search_type(6, 2, "3^9", node_budget=2)
    assert out.timed_out


def test_search_type_deterministic():
    a = search_type(6, 2, "3^9")
    b = search_type(6, 2, "3^9")
    assert a.witness == b.witness and a.nodes == b.nodes


def test_search_type_accepts_parsed_type():
    assert search_type(6, 2, parse_type("3^9")).found


def test_default_node_budget_is_generous():
    assert DEFAULT_NODE_BUDGET >= 10**8
