"""Partition types of PG(v-1, q) and necessary feasibility conditions.

A vector space partition of PG(v-1, q) is a collection of subspaces with
dimensions between 1 and v-1 whose point sets partition the points of the
ambient space.  Its *type* records how many elements of each dimension
occur and is written ``d^m ...`` with strictly decreasing dimensions d.

This module implements the type algebra and the classical necessary
conditions a realizable type must satisfy:

* packing: the element point counts sum to the point count of the space,
  ``sum_d m_d * [d]_q = [v]_q`` where ``[d]_q = (q^d - 1)/(q - 1)``;
* dimension: any two elements are disjoint subspaces, so the two largest
  element dimensions d >= d' must satisfy d + d' <= v;
* tails: for every level k < v such that some element has dimension
  greater than k, the points covered by the elements of dimension at most
  k form a projective q^k-divisible point set.  Its cardinality must be an
  admissible length for such sets, and for small parameters the set itself
  is classified, which yields extra structural restrictions (see
  :func:`tails`).

Reduction rules (replacing one element by a partition of its own points)
and exhaustive enumeration of candidate types for small spaces complete
the toolbox.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import BudgetExceededError, FormatError
from .gf import gaussian_binomial, prime_power
from .multisets import (
    LengthVerdict,
    admissible_length_projective_binary,
    admissible_length_semigroup,
)

_TERM_RE = re.compile(r"^(\d+)\^(\d+)$")


def _points(d: int, q: int) -> int:
    """Number of points of a d-dimensional subspace, ``[d]_q``."""
    return (q**d - 1) // (q - 1)


class PartitionType:
    """A multiset of element dimensions, e.g. ``4^17`` or ``6^1 2^64``.

    Zero counts are dropped; the canonical form lists dimensions in
    strictly decreasing order.  Instances are immutable and hashable, and
    compare by their ``(dimension, count)`` tuples, so sorting a list of
    types with ``reverse=True`` orders them lexicographically by
    decreasing multiplicity vectors ``(m_{v-1}, ..., m_1)``.
    """

    __slots__ = ("_items", "_bydim")

    def __init__(self, counts):
        if isinstance(counts, dict):
            pairs = counts.items()
        else:
            pairs = list(counts)
        bydim: dict[int, int] = {}
        for d, m in pairs:
            if not isinstance(d, int) or not isinstance(m, int):
                raise ValueError("dimensions and counts must be integers")
            if d < 1:
                raise ValueError(f"element dimension must be positive, got {d}")
            if m < 0:
                raise ValueError(f"count for dimension {d} is negative: {m}")
            if d in bydim:
                raise ValueError(f"dimension {d} listed twice")
            if m > 0:
                bydim[d] = m
        self._bydim = bydim
        self._items = tuple(sorted(bydim.items(), reverse=True))

    @property
    def items(self) -> tuple[tuple[int, int], ...]:
        """``(dimension, count)`` pairs with decreasing dimension."""
        return self._items

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self._items)

    @property
    def max_dim(self) -> int:
        if not self._items:
            raise ValueError("empty type has no maximal dimension")
        return self._items[0][0]

    def count(self, d: int) -> int:
        return self._bydim.get(d, 0)

    def element_count(self) -> int:
        return sum(m for _, m in self._items)

    def point_count(self, q: int) -> int:
        return sum(m * _points(d, q) for d, m in self._items)

    def text(self) -> str:
        return " ".join(f"{d}^{m}" for d, m in self._items)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"PartitionType({self.text()!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PartitionType) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __lt__(self, other) -> bool:
        if not isinstance(other, PartitionType):
            return NotImplemented
        return self._items < other._items


def parse_type(text: str) -> PartitionType:
    """Parse ``"4^13 3^6 2^6"`` notation into a :class:`PartitionType`.

    Terms with count zero are accepted and dropped.  Raises
    :class:`FormatError` on malformed terms or repeated dimensions.
    """
    pairs = []
    seen = set()
    for token in text.split():
        match = _TERM_RE.match(token)
        if match is None:
            raise FormatError(f"malformed type term {token!r}")
        d, m = int(match.group(1)), int(match.group(2))
        if d < 1:
            raise FormatError(f"bad dimension in term {token!r}")
        if d in seen:
            raise FormatError(f"dimension {d} listed twice")
        seen.add(d)
        pairs.append((d, m))
    if not pairs:
        raise FormatError("empty type text")
    return PartitionType(pairs)


def format_type(ptype: PartitionType) -> str:
    return ptype.text()


def check_packing(ptype: PartitionType, v: int, q: int) -> bool:
    """All dimensions below v and point counts summing to ``[v]_q``."""
    if any(d >= v for d in ptype.dims):
        return False
    return ptype.point_count(q) == _points(v, q)


def check_dimension(ptype: PartitionType, v: int) -> bool:
    """Two largest element dimensions d >= d' must satisfy d + d' <= v."""
    if any(d >= v for d in ptype.dims):
        return False
    if ptype.element_count() < 2:
        return True
    d1, m1 = ptype.items[0]
    d2 = d1 if m1 >= 2 else ptype.items[1][0]
    return d1 + d2 <= v


@dataclass(frozen=True)
class TailCheck:
    """Divisibility verdict for the tail below one level.

    ``n`` points lie in elements of dimension at most ``level``; they form
    a projective ``delta``-divisible set (``delta = q^level``).  ``ok`` is
    False when the length test or a structural rule rejects the tail, in
    which case ``violation`` names the failed rule.  ``length_exact``
    records whether the length test was an exact characterization or only
    the necessary semigroup condition.
    """

    level: int
    delta: int
    n: int
    ok: bool
    violation: str = ""
    length_exact: bool = True


def _single_subspace_tail_ok(ptype: PartitionType, k: int, q: int) -> bool:
    """Tail equals the point set of one (k+1)-subspace; recurse into it.

    A projective q^k-divisible set of ``[k+1]_q`` points is the point set
    of a (k+1)-dimensional subspace (for q = 2 this is known for k <= 3,
    for q > 2 for all k).  The tail elements then form a vector space
    partition of that subspace, so the truncated type must itself satisfy
    the dimension and tail conditions of PG(k, q).
    """
    sub = PartitionType({d: ptype.count(d) for d in range(1, k + 1)})
    return check_dimension(sub, k + 1) and check_tails(sub, k + 1, q)


def _structural_violation(ptype: PartitionType, k: int, n: int, q: int) -> str:
    """Name of the violated structural tail rule, or the empty string.

    The rules encode classifications of small projective q^k-divisible
    sets: unions of few subspaces or affine subspaces, which restrict how
    many disjoint positive-dimensional elements fit inside the tail.
    """
    m1, m2, m3 = ptype.count(1), ptype.count(2), ptype.count(3)
    if q == 2 and n == 2 ** (k + 1) and k >= 2:
        # The tail is an affine (k+1)-space, which contains no line.
        if any(ptype.count(j) for j in range(2, k + 1)):
            return "affine-tail"
    if n == _points(k + 1, q) and (q > 2 or k <= 3):
        if not _single_subspace_tail_ok(ptype, k, q):
            return "single-subspace-tail"
    if q == 2 and k == 2 and n == 14:
        # Two disjoint planes: every line lies in one plane, and two
        # disjoint lines cannot share a plane.
        if m2 >= 3:
            return "two-plane-tail"
    if q == 2 and k == 2 and n == 17:
        # No 4-divisible 17-point set contains four disjoint lines.
        if m2 >= 4:
            return "line-bound-17"
    if q == 2 and k == 3 and n == 30:
        # Two disjoint solids: at most one plane per solid, and a plane
        # leaves 8 affine points; a full solid holds at most 5 lines.
        if m3 >= 3:
            return "two-solid-tail"
        if m3 == 2 and m2 >= 1:
            return "two-solid-tail"
        if m3 == 1 and m2 >= 6:
            return "two-solid-tail"
    if q == 2 and k == 3 and n == 45:
        # At most three disjoint planes fit into an 8-divisible set of 45
        # points, and the plane/11-line/5-point pattern is impossible.
        if m3 >= 4:
            return "three-solid-tail"
        if m3 == 1 and m2 == 11 and m1 == 5:
            return "three-solid-tail"
    return ""


def tails(ptype: PartitionType, v: int, q: int) -> tuple[TailCheck, ...]:
    """Tail verdicts at every level with an element of larger dimension."""
    if prime_power(q) is None:
        raise ValueError(f"q = {q} is not a prime power")
    if any(d >= v for d in ptype.dims):
        raise ValueError("element dimension exceeds ambient space")
    checks = []
    for k in range(1, v - 1):
        if not any(ptype.count(j) for j in range(k + 1, v)):
            continue
        n = sum(ptype.count(i) * _points(i, q) for i in range(1, k + 1))
        delta = q**k
        if q == 2 and k <= 3:
            verdict: LengthVerdict = admissible_length_projective_binary(delta, n)
        else:
            verdict = admissible_length_semigroup(q, k, n)
        if not verdict.admissible:
            checks.append(TailCheck(k, delta, n, False, "length", verdict.exact))
            continue
        violation = _structural_violation(ptype, k, n, q)
        checks.append(TailCheck(k, delta, n, not violation, violation, verdict.exact))
    return tuple(checks)


def check_tails(ptype: PartitionType, v: int, q: int) -> bool:
    return all(c.ok for c in tails(ptype, v, q))


def check_type(ptype: PartitionType, v: int, q: int) -> bool:
    """All necessary conditions: packing, dimension, and tails."""
    return (
        check_packing(ptype, v, q)
        and check_dimension(ptype, v)
        and check_tails(ptype, v, q)
    )


def reduction_options(d: int, q: int) -> tuple[tuple[str, dict[int, int]], ...]:
    """Ways to repartition the points of one d-dimensional element.

    Each option is ``(label, replacement)`` where replacement maps
    dimensions to counts summing to ``[d]_q`` points: the single points,
    a hyperplane of the element plus the remaining points, and for every
    divisor e of d a spread of e-dimensional subspaces.
    """
    if d < 2:
        raise ValueError("only elements of dimension >= 2 can be reduced")
    options = [("points", {1: _points(d, q)})]
    if d >= 3:
        options.append(
            ("hyperplane-plus-points", {d - 1: 1, 1: _points(d, q) - _points(d - 1, q)})
        )
    for e in range(2, d):
        if d % e == 0:
            options.append((f"{e}-spread", {e: _points(d, q) // _points(e, q)}))
    return tuple(options)


def apply_reduction(
    ptype: PartitionType, d: int, replacement: dict[int, int]
) -> PartitionType:
    """Replace one element of dimension d by the given smaller elements."""
    if ptype.count(d) < 1:
        raise ValueError(f"type {ptype} has no element of dimension {d}")
    counts = dict(ptype.items)
    counts[d] -= 1
    for e, m in replacement.items():
        if e >= d:
            raise ValueError("replacement must use strictly smaller dimensions")
        counts[e] = counts.get(e, 0) + m
    return PartitionType(counts)


def one_step_reductions(ptype: PartitionType, q: int) -> set[PartitionType]:
    """All types reachable by reducing a single element once."""
    out = set()
    for d in ptype.dims:
        if d < 2:
            continue
        for _, replacement in reduction_options(d, q):
            out.add(apply_reduction(ptype, d, replacement))
    return out


_ENUM_DIM_LIMIT = {2: 8, 3: 5, 4: 5}


def enumerate_types(
    v: int, q: int, *, tail_filter: bool = True, dimension_filter: bool = True
) -> list[PartitionType]:
    """All types satisfying the necessary conditions, in decreasing order.

    The packing condition always holds for the output; the dimension and
    tail conditions are applied unless switched off.  The result is
    ordered lexicographically by decreasing multiplicity vectors.  The
    candidate space grows quickly, so ambient dimensions are capped per
    field size (v <= 8 for q = 2, v <= 5 for q <= 4, v <= 4 beyond);
    larger requests raise :class:`BudgetExceededError`.
    """
    if v < 2:
        raise ValueError(f"ambient dimension must be at least 2, got {v}")
    if prime_power(q) is None:
        raise ValueError(f"q = {q} is not a prime power")
    limit = _ENUM_DIM_LIMIT.get(q, 4)
    if v > limit:
        raise BudgetExceededError(
            f"type enumeration for v = {v}, q = {q} exceeds the v <= {limit} budget"
        )
    pts = [0] + [_points(d, q) for d in range(1, v + 1)]
    out: list[PartitionType] = []
    counts: dict[int, int] = {}

    def rec(d: int, remaining: int, largest: int | None) -> None:
        if d == 1:
            counts[1] = remaining
            ptype = PartitionType(counts)
            if not tail_filter or check_tails(ptype, v, q):
                out.append(ptype)
            del counts[1]
            return
        cmax = remaining // pts[d]
        if dimension_filter:
            if largest is not None and d + largest > v:
                cmax = 0
            elif largest is None and 2 * d > v:
                cmax = min(cmax, 1)
        for c in range(cmax, -1, -1):
            counts[d] = c
            rec(d - 1, remaining - c * pts[d], largest if largest is not None else (d if c else None))
        del counts[d]

    rec(v - 1, pts[v], None)
    return out
