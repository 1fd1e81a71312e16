"""Explicit vector space partitions: container, classical constructions, IO.

A :class:`Partition` is a finite collection of subspaces of GF(q)^v whose
point sets are pairwise disjoint and cover every point of PG(v-1, q);
isolated points are stored as 1-dimensional elements, so a partition is
always explicit.  :func:`verify_partition` checks the defining property
from scratch and reports violations with witnesses.

Two classical constructions are provided:

* :func:`desarguesian_spread` partitions PG(v-1, q) into k-dimensional
  subspaces for any divisor k of v by viewing GF(q)^v as a vector space
  over GF(q^k);
* :func:`lifted_mrd` partitions PG(v-1, q) into one special
  (v-k)-dimensional subspace and q^(v-k) subspaces of dimension k, the
  row spaces of ``(I_k | M)`` where the k x (v-k) matrices M form a
  maximum rank distance code: truncated multiplication matrices of
  GF(q^(v-k)), any two of which differ by a full-rank matrix.

:func:`expand_element` rewrites one element of a partition as a
sub-partition of its point set, mirroring the type-level rewrite rules of
:func:`vspart.typecalc.reduction_options`.
"""

from __future__ import annotations

import json
import pathlib
from dataclasses import dataclass

from .errors import FormatError
from .gf import ExtensionField, Field, field, gaussian_binomial
from .subspace import PointIndexer, Subspace, pack_vector, rref_canonical
from .typecalc import PartitionType, reduction_options

_DIGITS = "0123456789abcdef"
_DIGIT_VALUE = {ch: i for i, ch in enumerate(_DIGITS)}


def _as_field(q) -> Field:
    return q if isinstance(q, Field) else field(q)


class Partition:
    """A collection of subspaces intended to partition the points of PG(v-1, q).

    Elements are stored canonically (RREF bases, sorted by decreasing
    dimension).  The constructor only checks that all elements live in the
    same space and are proper subspaces; the partition property itself is
    the business of :func:`verify_partition` and :meth:`validate`.
    """

    __slots__ = ("field", "v", "elements")

    def __init__(self, f: Field, v: int, elements):
        els = tuple(elements)
        if not els:
            raise ValueError("a partition needs at least one element")
        for s in els:
            if not isinstance(s, Subspace):
                raise TypeError(f"partition elements must be subspaces, got {type(s)}")
            if s.v != v or s.field.q != f.q:
                raise ValueError("all elements must live in the same ambient space")
            if s.k >= v:
                raise ValueError("partition elements must be proper subspaces")
        self.field = f
        self.v = v
        self.elements = tuple(sorted(els, key=lambda s: (-s.k, s.rows)))

    def type(self) -> PartitionType:
        counts: dict[int, int] = {}
        for s in self.elements:
            counts[s.k] = counts.get(s.k, 0) + 1
        return PartitionType(counts)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Partition)
            and self.v == other.v
            and self.field.q == other.field.q
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.v, self.elements))

    def __repr__(self) -> str:
        return f"Partition(q={self.field.q}, v={self.v}, type={self.type()})"

    def validate(self) -> None:
        """Raise ValueError unless the elements partition all points."""
        report = verify_partition(self)
        if not report.ok:
            raise ValueError(report.describe())

    def to_json_dict(self) -> dict:
        return {
            "q": self.field.q,
            "v": self.v,
            "type": str(self.type()),
            "elements": [
                ["".join(_DIGITS[c] for c in row) for row in s.matrix]
                for s in self.elements
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Partition":
        try:
            q, v, elements = data["q"], data["v"], data["elements"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"partition document lacks key {exc}") from None
        f = field(q)
        els = []
        for pos, rows in enumerate(elements):
            parsed = []
            for row in rows:
                if len(row) != v:
                    raise FormatError(
                        f"element {pos}: basis row {row!r} has length != {v}")
                try:
                    coords = tuple(_DIGIT_VALUE[ch] for ch in row)
                except KeyError:
                    raise FormatError(f"element {pos}: bad digit in row {row!r}") from None
                if any(c >= q for c in coords):
                    raise FormatError(f"element {pos}: digit >= q in row {row!r}")
                parsed.append(coords)
            if not parsed:
                raise FormatError(f"element {pos} has no basis rows")
            els.append(rref_canonical(parsed, f, v))
        return cls(f, v, els)


@dataclass(frozen=True)
class PartitionCheck:
    """Outcome of verifying a partition, with witnesses for violations."""

    ok: bool
    realized_type: PartitionType
    duplicated: tuple[int, ...]  # point codes covered by two or more elements
    uncovered: tuple[int, ...]   # point codes covered by no element

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"valid partition of type {self.realized_type}"
        parts = []
        if self.duplicated:
            parts.append(f"{len(self.duplicated)} points covered twice")
        if self.uncovered:
            parts.append(f"{len(self.uncovered)} points uncovered")
        return f"invalid partition ({'; '.join(parts)})"


def verify_partition(partition: Partition) -> PartitionCheck:
    """Check pairwise disjointness and total coverage from scratch."""
    seen: set[int] = set()
    duplicated: set[int] = set()
    for s in partition.elements:
        for code in s.point_codes():
            if code in seen:
                duplicated.add(code)
            seen.add(code)
    f, v = partition.field, partition.v
    uncovered: list[int] = []
    if len(seen) != gaussian_binomial(v, 1, f.q):
        uncovered = [c for c in PointIndexer(v, f).codes if c not in seen]
    return PartitionCheck(
        ok=not duplicated and not uncovered,
        realized_type=partition.type(),
        duplicated=tuple(sorted(duplicated)),
        uncovered=tuple(sorted(uncovered)),
    )


def save_partition(partition: Partition, path) -> None:
    pathlib.Path(path).write_text(json.dumps(partition.to_json_dict(), indent=1) + "\n")


def load_partition(path) -> Partition:
    text = pathlib.Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return Partition.from_json_dict(data)


def points_as_elements(f: Field, v: int, codes) -> list[Subspace]:
    """Wrap packed point codes as 1-dimensional subspace elements."""
    return [Subspace(f, v, (code,)) for code in codes]


def desarguesian_spread(v: int, k: int, q) -> Partition:
    """Partition PG(v-1, q) into subspaces of dimension k, for k | v.

    GF(q)^v is identified with GF(q^k)^(v/k); the 1-dimensional subspaces
    over the big field are k-dimensional over GF(q) and partition the
    point set, giving type ``k^([v]_q / [k]_q)``.
    """
    f = _as_field(q)
    if v < 1 or k < 1 or v % k != 0:
        raise ValueError(f"k = {k} must divide v = {v}")
    if k == v:
        raise ValueError("spread elements must be proper subspaces")
    ext = ExtensionField(f, k)
    n = v // k
    elements = []
    for point in _projective_points(ext, n):
        mats = [ext.mult_matrix(a) for a in point]
        rows = []
        for b in range(k):
            vec = []
            for c in range(n):
                vec.extend(mats[c][b])
            rows.append(pack_vector(vec, f.q))
        elements.append(Subspace(f, v, tuple(rows)))
    return Partition(f, v, elements)


def _projective_points(ext: ExtensionField, n: int):
    """Normalized points of PG(n-1, q^k): first nonzero coordinate is 1."""
    for lead in range(n):
        tail_len = n - lead - 1

        def rec(pos: int, acc: tuple[int, ...]):
            if pos == tail_len:
                yield (0,) * lead + (1,) + acc
                return
            for a in ext.elements():
                yield from rec(pos + 1, acc + (a,))

        yield from rec(0, ())


def lifted_mrd(v: int, k: int, q) -> Partition:
    """Partition of type ``(v-k)^1 k^(q^(v-k))`` from a lifted MRD code.

    Requires 1 <= k <= v - k.  The special element is the coordinate
    subspace on the last v-k positions; the other elements are the row
    spaces of ``(I_k | M_a), a in GF(q^(v-k))``, where ``M_a`` is the
    matrix of multiplication by a truncated to its first k rows.  For
    a != b the difference ``M_a - M_b`` is a truncated multiplication by
    the nonzero element a - b, hence has full rank k, which makes the row
    spaces pairwise disjoint.
    """
    f = _as_field(q)
    m = v - k
    if k < 1 or k > m:
        raise ValueError(f"need 1 <= k <= v - k, got k = {k}, v = {v}")
    ext = ExtensionField(f, m)
    special_rows = []
    for i in range(m):
        vec = [0] * v
        vec[k + i] = 1
        special_rows.append(pack_vector(vec, f.q))
    elements = [Subspace(f, v, tuple(special_rows))]
    for a in ext.elements():
        mat = ext.mult_matrix(a)
        rows = []
        for i in range(k):
            vec = [0] * k
            vec[i] = 1
            vec.extend(mat[i])
            rows.append(pack_vector(vec, f.q))
        elements.append(Subspace(f, v, tuple(rows)))
    return Partition(f, v, elements)


def expand_element(partition: Partition, element: Subspace, rule: str) -> Partition:
    """Replace one element by a sub-partition of its point set.

    ``rule`` is a label from :func:`vspart.typecalc.reduction_options` for
    the element's dimension: ``"points"`` (all points as 1-dimensional
    elements), ``"hyperplane-plus-points"`` (one hyperplane of the element
    plus the complementary points), or ``"<e>-spread"`` (a spread of
    e-dimensional subspaces of the element, for e a proper divisor).
    """
    try:
        pos = partition.elements.index(element)
    except ValueError:
        raise ValueError(f"{element!r} is not an element of the partition") from None
    f, v, d = partition.field, partition.v, element.k
    labels = {label for label, _ in reduction_options(d, f.q)}
    if rule not in labels:
        raise ValueError(f"rule {rule!r} not applicable to dimension {d}: {sorted(labels)}")

    if rule == "points":
        sub = points_as_elements(f, v, element.point_codes())
    elif rule == "hyperplane-plus-points":
        hyper = Subspace(f, v, element.rows[:-1])
        inner = set(hyper.point_codes())
        sub = [hyper] + points_as_elements(
            f, v, (c for c in element.point_codes() if c not in inner))
    else:
        e = int(rule.split("-", 1)[0])
        basis = element.matrix
        sub = []
        for small in desarguesian_spread(d, e, f):
            rows = [_combine(coeffs, basis, f) for coeffs in small.matrix]
            sub.append(Subspace(f, v, tuple(pack_vector(r, f.q) for r in rows)))

    covered: set[int] = set()
    for s in sub:
        pts = s.point_codes()
        if covered.intersection(pts):
            raise AssertionError("sub-partition elements overlap")
        covered.update(pts)
    if covered != set(element.point_codes()):
        raise AssertionError("sub-partition does not cover the element")
    rest = partition.elements[:pos] + partition.elements[pos + 1:]
    return Partition(f, v, rest + tuple(sub))


def _combine(coeffs, basis, f: Field) -> tuple[int, ...]:
    """Linear combination sum(coeffs[t] * basis[t]) over GF(q), coordinatewise."""
    v = len(basis[0])
    out = [0] * v
    for c, row in zip(coeffs, basis):
        if c:
            for j in range(v):
                out[j] = f.add(out[j], f.mul(c, row[j]))
    return tuple(out)
