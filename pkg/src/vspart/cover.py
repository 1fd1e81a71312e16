"""Exact-cover feasibility searches for vector space partitions.

The engine answers two kinds of questions at desk scale, deterministically
and without external solvers:

* :func:`build_problem` / :func:`solve` — can a ground point set be
  partitioned into subspaces with prescribed dimension counts?  Points of
  demand dimension 1 are implicit: after all higher-dimensional demands
  are met, the leftover points must number exactly the demanded count.
* :func:`max_disjoint` — how many pairwise disjoint subspaces of one
  dimension fit inside a ground point set, optionally avoiding fixed
  pre-packed elements?  Branch and bound with an exhausted-search proof.

:func:`search_type` builds the full-space problem for a partition type
and symmetry-reduces it by pre-placing up to three canonical elements of
the largest dimensions; for three equal dimensions the span of the triple
is not determined, so the finitely many span strata are searched in turn
and infeasibility is only reported when every stratum is exhausted.

Backtracking always branches on an uncovered point with the fewest
remaining choices; resource budgets turn into a distinct ``timeout``
status, never into an infeasibility claim.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import BudgetExceededError
from .gf import Field, field, gaussian_binomial
from .multisets import PointMultiset
from .subspace import (
    ENUMERATION_BUDGET,
    PointIndexer,
    Subspace,
    canonical_prescription,
    enumerate_subspaces,
)
from .typecalc import PartitionType, check_dimension, check_packing, parse_type

DEFAULT_NODE_BUDGET = 10**9

FOUND = "found"
INFEASIBLE = "infeasible"
TIMEOUT = "timeout"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a feasibility search.

    ``status`` is ``"found"`` (with a re-verified witness), ``"infeasible"``
    (the search space was exhausted, or the demand fails an arithmetic
    check named in ``reason``), or ``"timeout"`` (a budget ran out;
    deliberately distinct from infeasible).
    """

    status: str
    witness: tuple[Subspace, ...] | None
    nodes: int
    max_depth: int
    elapsed: float
    reason: str | None = None

    @property
    def found(self) -> bool:
        return self.status == FOUND

    @property
    def infeasible(self) -> bool:
        return self.status == INFEASIBLE

    @property
    def timed_out(self) -> bool:
        return self.status == TIMEOUT


@dataclass(frozen=True)
class MaxDisjointResult:
    """Largest number of extra pairwise disjoint subspaces found.

    ``status == "exhausted"`` makes ``count`` a proven maximum; on
    ``"timeout"`` it is only a lower bound.  ``witness`` realizes it.
    """

    count: int
    witness: tuple[Subspace, ...]
    status: str
    nodes: int
    elapsed: float


@dataclass(frozen=True)
class CoverProblem:
    """A ground point set, per-dimension demands, and candidate subspaces.

    ``fixed`` elements are pre-placed (they count toward ``demand``);
    ``free``/``residual``/``singles`` describe what remains for the search.
    ``candidates`` holds, per residual dimension >= 2, every subspace whose
    points lie inside the free ground, in enumeration order.
    """

    field: Field
    v: int
    ground: tuple[int, ...]
    demand: dict[int, int]
    fixed: tuple[Subspace, ...]
    free: tuple[int, ...]
    residual: dict[int, int]
    singles: int
    candidates: dict[int, tuple[Subspace, ...]]
    counting_ok: bool

    def candidate_counts(self) -> dict[int, int]:
        return {d: len(c) for d, c in self.candidates.items()}


def _resolve_ground(ground, f: Field | None, v: int | None):
    if isinstance(ground, PointMultiset):
        if not ground.is_set:
            raise ValueError("the ground must be a point set without repeated points")
        return ground.field, ground.v, tuple(sorted(ground.support_codes()))
    if f is None or v is None:
        raise ValueError("raw point codes need explicit f and v")
    codes = sorted({int(c) for c in ground})
    if not codes:
        raise ValueError("the ground point set is empty")
    return f, v, tuple(codes)


def _as_demand(demand) -> dict[int, int]:
    if isinstance(demand, str):
        demand = parse_type(demand)
    if isinstance(demand, PartitionType):
        return {d: c for d, c in demand.items}
    out: dict[int, int] = {}
    for d, c in dict(demand).items():
        d, c = int(d), int(c)
        if d < 1 or c < 0:
            raise ValueError(f"bad demand entry {d}: {c}")
        if c:
            out[d] = c
    return out


def subspaces_in_ground(f: Field, v: int, d: int, ground, budget: int = ENUMERATION_BUDGET):
    """All d-dimensional subspaces whose points lie inside the ground set.

    Filters the full enumeration of PG(v-1, q); RREF basis rows are
    normalized points of the subspace, so requiring them inside the ground
    first is an exact, cheap pre-filter.
    """
    codes = frozenset(ground)
    out = []
    for s in enumerate_subspaces(v, d, f, budget):
        if all(r in codes for r in s.rows) and all(c in codes for c in s.point_codes()):
            out.append(s)
    return tuple(out)


def build_problem(
    ground,
    demand,
    *,
    f: Field | None = None,
    v: int | None = None,
    fixed=(),
    candidate_budget: int = ENUMERATION_BUDGET,
) -> CoverProblem:
    """Assemble an exact-cover problem; candidates filtered per dimension.

    ``ground`` is a :class:`PointMultiset` or an iterable of point codes
    (then ``f`` and ``v`` are required).  ``demand`` is a type string,
    :class:`PartitionType`, or dimension->count mapping and refers to the
    whole ground including ``fixed`` elements, which must be pairwise
    disjoint subspaces inside the ground.
    """
    f, v, codes = _resolve_ground(ground, f, v)
    demand = _as_demand(demand)
    if any(d >= v for d in demand):
        raise ValueError(f"demand dimensions must be < {v}")
    groundset = frozenset(codes)
    fixed = tuple(fixed)
    fixed_counts: dict[int, int] = {}
    taken: set[int] = set()
    for s in fixed:
        if not isinstance(s, Subspace) or s.v != v or s.field.q != f.q:
            raise ValueError("fixed elements must be subspaces of the ambient space")
        pts = s.point_codes()
        if not groundset.issuperset(pts):
            raise ValueError(f"fixed element {s!r} leaves the ground")
        if taken.intersection(pts):
            raise ValueError("fixed elements must be pairwise disjoint")
        taken.update(pts)
        fixed_counts[s.k] = fixed_counts.get(s.k, 0) + 1
    residual = dict(demand)
    for d, c in fixed_counts.items():
        if residual.get(d, 0) < c:
            raise ValueError(f"{c} fixed elements of dimension {d} exceed the demand")
        residual[d] -= c
    residual = {d: c for d, c in residual.items() if c}
    singles = residual.pop(1, 0)
    counting_ok = (
        sum(c * gaussian_binomial(d, 1, f.q) for d, c in demand.items()) == len(codes)
    )
    free = tuple(c for c in codes if c not in taken)
    candidates: dict[int, tuple[Subspace, ...]] = {}
    if counting_ok:
        for d in sorted(residual, reverse=True):
            candidates[d] = subspaces_in_ground(f, v, d, free, candidate_budget)
    return CoverProblem(
        field=f,
        v=v,
        ground=codes,
        demand=demand,
        fixed=fixed,
        free=free,
        residual=residual,
        singles=singles,
        candidates=candidates,
        counting_ok=counting_ok,
    )


class _Budget:
    """Shared node/time budget; raises BudgetExceededError when spent."""

    __slots__ = ("nodes_left", "deadline", "nodes_used")

    def __init__(self, node_budget: int | None, time_budget: float | None):
        self.nodes_left = DEFAULT_NODE_BUDGET if node_budget is None else node_budget
        self.deadline = None if time_budget is None else time.perf_counter() + time_budget
        self.nodes_used = 0

    def tick(self) -> None:
        self.nodes_used += 1
        self.nodes_left -= 1
        if self.nodes_left < 0:
            raise BudgetExceededError("node budget exhausted")
        if self.deadline is not None and self.nodes_used % 256 == 0:
            if time.perf_counter() > self.deadline:
                raise BudgetExceededError("time budget exhausted")


class _CoverDFS:
    """Backtracking exact cover over a bit-indexed ground set.

    Points and candidates both live in integer bitmasks: ``covered`` has a
    bit per ground point, ``alive`` a bit per candidate still usable.
    Placing an element clears its precomputed conflict mask (every
    candidate meeting one of its points) from ``alive``, so there is no
    undo bookkeeping, and per-point choice counts are popcounts.  Points
    whose only remaining option is a singleton are placed together as one
    forced move.
    """

    __slots__ = (
        "full", "cand_masks", "cand_dims", "cands_at", "conflict", "dim_mask",
        "residual", "dims", "budget", "chosen", "single_bits", "max_depth",
    )

    def __init__(self, n, cand_masks, cand_dims, at_point, residual, budget):
        self.full = (1 << n) - 1
        self.cand_masks = cand_masks
        self.cand_dims = cand_dims
        self.cands_at = [sum(1 << c for c in lst) for lst in at_point]
        conflict = []
        for mask in cand_masks:
            cm = 0
            m = mask
            while m:
                low = m & -m
                m ^= low
                cm |= self.cands_at[low.bit_length() - 1]
            conflict.append(cm)
        self.conflict = conflict
        self.residual = residual  # list indexed by dimension
        self.dims = tuple(d for d, c in enumerate(residual) if c)
        self.dim_mask = {
            d: sum(1 << c for c, cd in enumerate(cand_dims) if cd == d)
            for d in self.dims
        }
        self.budget = budget
        self.chosen: list[int] = []
        self.single_bits: list[int] = []
        self.max_depth = 0

    def run(self, singles: int) -> bool:
        return self._dfs(0, (1 << len(self.cand_masks)) - 1, singles, 0)

    def _dfs(self, covered: int, alive: int, singles: int, depth: int) -> bool:
        self.budget.tick()
        if depth > self.max_depth:
            self.max_depth = depth
        if covered == self.full:
            return True
        residual = self.residual
        for d in self.dims:
            r = residual[d]
            if r and (alive & self.dim_mask[d]).bit_count() < r:
                return False
        cands_at = self.cands_at
        best_bit = -1
        best_nb = 1 << 30
        forced_mask = 0
        forced_count = 0
        m = self.full & ~covered
        while m:
            low = m & -m
            m ^= low
            bit = low.bit_length() - 1
            a = (alive & cands_at[bit]).bit_count()
            if a == 0:
                forced_count += 1
                if forced_count > singles:
                    return False
                forced_mask |= low
            else:
                nb = a + (1 if singles else 0)
                if nb < best_nb:
                    best_bit, best_nb = bit, nb
        if forced_mask:
            f = forced_mask
            while f:
                low = f & -f
                f ^= low
                self.single_bits.append(low.bit_length() - 1)
            if self._dfs(covered | forced_mask, alive, singles - forced_count,
                         depth + 1):
                return True
            del self.single_bits[-forced_count:]
            return False
        ids = alive & cands_at[best_bit]
        while ids:
            low = ids & -ids
            ids ^= low
            cid = low.bit_length() - 1
            d = self.cand_dims[cid]
            residual[d] -= 1
            new_alive = alive & ~self.conflict[cid]
            if not residual[d]:
                new_alive &= ~self.dim_mask[d]
            self.chosen.append(cid)
            if self._dfs(covered | self.cand_masks[cid], new_alive, singles,
                         depth + 1):
                return True
            self.chosen.pop()
            residual[d] += 1
        if singles:
            self.single_bits.append(best_bit)
            if self._dfs(covered | (1 << best_bit), alive & ~cands_at[best_bit],
                         singles - 1, depth + 1):
                return True
            self.single_bits.pop()
        return False


def solve(
    problem: CoverProblem,
    *,
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> SearchOutcome:
    """Decide the exact-cover problem; found witnesses are re-verified."""
    t0 = time.perf_counter()
    if not problem.counting_ok:
        return SearchOutcome(INFEASIBLE, None, 0, 0, time.perf_counter() - t0,
                             reason="counting")
    for d, need in problem.residual.items():
        if len(problem.candidates.get(d, ())) < need:
            return SearchOutcome(INFEASIBLE, None, 0, 0, time.perf_counter() - t0,
                                 reason="candidates")
    f, v = problem.field, problem.v
    free = problem.free
    index = {code: i for i, code in enumerate(free)}
    cand_masks: list[int] = []
    cand_dims: list[int] = []
    cand_subs: list[Subspace] = []
    at_point: list[list[int]] = [[] for _ in free]
    for d in sorted(problem.residual, reverse=True):
        for s in problem.candidates[d]:
            cid = len(cand_masks)
            mask = 0
            for code in s.point_codes():
                bit = index[code]
                mask |= 1 << bit
                at_point[bit].append(cid)
            cand_masks.append(mask)
            cand_dims.append(d)
            cand_subs.append(s)
    maxdim = max(problem.residual, default=1)
    residual = [0] * (maxdim + 1)
    for d, c in problem.residual.items():
        residual[d] = c
    budget = _Budget(node_budget, time_budget)
    dfs = _CoverDFS(len(free), cand_masks, cand_dims, at_point, residual, budget)
    try:
        ok = dfs.run(problem.singles)
    except BudgetExceededError:
        return SearchOutcome(TIMEOUT, None, budget.nodes_used, dfs.max_depth,
                             time.perf_counter() - t0)
    if not ok:
        return SearchOutcome(INFEASIBLE, None, budget.nodes_used, dfs.max_depth,
                             time.perf_counter() - t0, reason=EXHAUSTED)
    witness = list(problem.fixed)
    witness.extend(cand_subs[cid] for cid in dfs.chosen)
    witness.extend(Subspace(f, v, (free[bit],)) for bit in dfs.single_bits)
    witness.sort(key=lambda s: (-s.k, s.rows))
    _check_witness(problem, witness)
    return SearchOutcome(FOUND, tuple(witness), budget.nodes_used, dfs.max_depth,
                         time.perf_counter() - t0)


def _check_witness(problem: CoverProblem, witness) -> None:
    seen: set[int] = set()
    counts: dict[int, int] = {}
    for s in witness:
        pts = s.point_codes()
        if seen.intersection(pts):
            raise AssertionError("witness elements overlap")
        seen.update(pts)
        counts[s.k] = counts.get(s.k, 0) + 1
    if seen != set(problem.ground):
        raise AssertionError("witness does not cover the ground")
    if counts != problem.demand:
        raise AssertionError(f"witness type {counts} != demand {problem.demand}")


def max_disjoint(
    ground,
    dim: int,
    fixed=(),
    *,
    f: Field | None = None,
    v: int | None = None,
    node_budget: int | None = None,
    time_budget: float | None = None,
    candidate_budget: int = ENUMERATION_BUDGET,
) -> MaxDisjointResult:
    """Maximum number of pairwise disjoint dim-subspaces inside the ground.

    ``fixed`` elements are excluded territory: candidates must avoid their
    points, and the returned count does not include them.  The maximum is
    proven by branch and bound over the points in index order; the bound
    at a node is the packed count plus ``popcount(still coverable) / [dim]_q``.
    """
    t0 = time.perf_counter()
    f, v, codes = _resolve_ground(ground, f, v)
    if not 1 <= dim < v:
        raise ValueError(f"need 1 <= dim < {v}")
    taken: set[int] = set()
    for s in fixed:
        pts = s.point_codes()
        if not set(codes).issuperset(pts):
            raise ValueError(f"fixed element {s!r} leaves the ground")
        if taken.intersection(pts):
            raise ValueError("fixed elements must be pairwise disjoint")
        taken.update(pts)
    free_codes = tuple(c for c in codes if c not in taken)
    cands = subspaces_in_ground(f, v, dim, free_codes, candidate_budget)
    index = {code: i for i, code in enumerate(free_codes)}
    masks = []
    at_point: dict[int, list[int]] = {}
    for cid, s in enumerate(cands):
        mask = 0
        for code in s.point_codes():
            bit = index[code]
            mask |= 1 << bit
            at_point.setdefault(bit, []).append(cid)
        masks.append(mask)
    size = gaussian_binomial(dim, 1, f.q)
    budget = _Budget(node_budget, time_budget)
    best = {"count": 0, "witness": ()}

    def dfs(free: int, alive: list[int], used: int, stack: tuple[int, ...]) -> None:
        budget.tick()
        if used > best["count"]:
            best["count"] = used
            best["witness"] = stack
        union = 0
        for cid in alive:
            union |= masks[cid]
        if used + union.bit_count() // size <= best["count"]:
            return
        bit = (union & -union).bit_length() - 1
        here = [cid for cid in at_point.get(bit, ()) if masks[cid] & free == masks[cid]]
        for cid in here:
            nfree = free & ~masks[cid]
            nalive = [c for c in alive if masks[c] & nfree == masks[c]]
            dfs(nfree, nalive, used + 1, stack + (cid,))
        nfree = free & ~(1 << bit)
        nalive = [c for c in alive if masks[c] & nfree == masks[c]]
        dfs(nfree, nalive, used, stack)

    status = EXHAUSTED
    try:
        dfs((1 << len(free_codes)) - 1, list(range(len(cands))), 0, ())
    except BudgetExceededError:
        status = TIMEOUT
    witness = tuple(sorted((cands[cid] for cid in best["witness"]),
                           key=lambda s: s.rows))
    seen: set[int] = set()
    for s in witness:
        pts = s.point_codes()
        assert not seen.intersection(pts) and set(pts) <= set(free_codes)
        seen.update(pts)
    return MaxDisjointResult(best["count"], witness, status, budget.nodes_used,
                             time.perf_counter() - t0)


def _prescription_plan(ptype: PartitionType, v: int, policy):
    """Dimensions to pre-place and the span strata to cover.

    Returns (dims, spans): dims is a tuple of at most three element
    dimensions (possibly empty), spans the list of span values to try
    (a single value unless three equal dimensions are prescribed, whose
    mutual span is not determined by disjointness alone).
    """
    expanded = [d for d, c in ptype.items for _ in range(c) if d >= 2]
    if policy == "none":
        r = 0
    elif policy == "auto":
        top = expanded[:3]
        if len(top) == 3 and len(set(top)) == 1:
            r = 3
        else:
            r = min(2, len(top))
    else:
        r = int(policy)
        if not 0 <= r <= 3:
            raise ValueError("prescription policy is 'auto', 'none', or 0..3")
        if r > len(expanded):
            raise ValueError(f"type has only {len(expanded)} elements above dimension 1")
    dims = tuple(expanded[:r])
    if r == 3:
        if len(set(dims)) != 1:
            raise ValueError("three prescribed elements must have equal dimension")
        d = dims[0]
        spans = list(range(2 * d, min(v, 3 * d) + 1))
    else:
        spans = [sum(dims)] if dims else [None]
    return dims, spans


def search_type(
    v: int,
    q,
    ptype,
    *,
    prescribe="auto",
    node_budget: int | None = None,
    time_budget: float | None = None,
    candidate_budget: int = ENUMERATION_BUDGET,
) -> SearchOutcome:
    """Search for a partition of PG(v-1, q) of the given type.

    Up to three elements of the largest dimensions are pre-placed in
    canonical position (``prescribe`` is ``"auto"``, ``"none"``, or a
    count); with three equal dimensions every possible span of the triple
    is searched, so ``infeasible`` means every stratum was exhausted.
    Types failing the packing or dimension count checks are reported
    infeasible without search (reasons ``"counting"``/``"dimension"``).
    """
    f = _as_field(q)
    if isinstance(ptype, str):
        ptype = parse_type(ptype)
    t0 = time.perf_counter()
    if not check_packing(ptype, v, f.q):
        return SearchOutcome(INFEASIBLE, None, 0, 0, time.perf_counter() - t0,
                             reason="counting")
    if not check_dimension(ptype, v):
        return SearchOutcome(INFEASIBLE, None, 0, 0, time.perf_counter() - t0,
                             reason="dimension")
    dims, spans = _prescription_plan(ptype, v, prescribe)
    ground = PointIndexer(v, f).codes
    nodes = 0
    max_depth = 0
    timed_out = False
    deadline = None if time_budget is None else t0 + time_budget
    nodes_left = DEFAULT_NODE_BUDGET if node_budget is None else node_budget
    for span in spans:
        if dims:
            fixed = canonical_prescription(v, f, dims, span_dim=span).elements
        else:
            fixed = ()
        problem = build_problem(ground, ptype, f=f, v=v, fixed=fixed,
                                candidate_budget=candidate_budget)
        remaining_time = None if deadline is None else deadline - time.perf_counter()
        if deadline is not None and remaining_time <= 0:
            timed_out = True
            break
        outcome = solve(problem, node_budget=nodes_left, time_budget=remaining_time)
        nodes += outcome.nodes
        nodes_left -= outcome.nodes
        max_depth = max(max_depth, outcome.max_depth)
        if outcome.found:
            return SearchOutcome(FOUND, outcome.witness, nodes, max_depth,
                                 time.perf_counter() - t0)
        if outcome.timed_out:
            timed_out = True
            break
    if timed_out:
        return SearchOutcome(TIMEOUT, None, nodes, max_depth, time.perf_counter() - t0)
    return SearchOutcome(INFEASIBLE, None, nodes, max_depth, time.perf_counter() - t0,
                         reason=EXHAUSTED)


def _as_field(q) -> Field:
    return q if isinstance(q, Field) else field(q)
