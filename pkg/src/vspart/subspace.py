"""Subspaces of GF(q)^v in canonical reduced row echelon form.

A vector (c_0, ..., c_{v-1}) over GF(q) is packed into the integer
sum c_j * q^j, least significant digit = coordinate 0.  For q = 2 packed
vector addition is XOR, which keeps the hot paths (row reduction, point
generation) on machine integers.

A subspace is stored as the tuple of its packed RREF basis rows, pivots
strictly increasing, pivot entries 1 and pivot columns cleared.  Two
subspaces are equal iff their tuples are equal, so the representation is
canonical.

Points of PG(v-1, q) are nonzero vectors normalized so that the first
nonzero coordinate is 1; they are handled either as coordinate tuples or
as packed codes of the normalized representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .errors import BudgetExceededError, InfeasiblePrescriptionError
from .gf import Field, gaussian_binomial

__all__ = [
    "Subspace",
    "Prescription",
    "pack_vector",
    "unpack_vector",
    "normalize_point",
    "rref_canonical",
    "enumerate_subspaces",
    "subspace_points",
    "span_meet",
    "canonical_prescription",
    "PointIndexer",
    "ENUMERATION_BUDGET",
]

ENUMERATION_BUDGET = 10**7


def pack_vector(vec, q: int) -> int:
    code = 0
    w = 1
    for c in vec:
        code += c * w
        w *= q
    return code


def unpack_vector(code: int, q: int, v: int) -> tuple[int, ...]:
    out = []
    for _ in range(v):
        out.append(code % q)
        code //= q
    return tuple(out)


def normalize_point(vec, f: Field) -> tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    vec = tuple(vec)
    for c in vec:
        if c:
            if c == 1:
                return vec
            s = f.inv(c)
            return tuple(f.mul(s, x) for x in vec)
    raise ValueError("the zero vector is not a point")


def _rref_gf2(rows) -> list[int]:
    """RREF of packed GF(2) rows; returns rows sorted by pivot, zeros dropped."""
    echelon: list[int] = []
    for r in rows:
        for b in echelon:
            if r & (b & -b):
                r ^= b
        if r:
            echelon.append(r)
            echelon.sort(key=lambda x: x & -x)
    for i in range(len(echelon) - 1, -1, -1):
        low = echelon[i] & -echelon[i]
        for j in range(i):
            if echelon[j] & low:
                echelon[j] ^= echelon[i]
    return echelon


def _rref_generic(rows, v: int, f: Field) -> list[list[int]]:
    """RREF of coordinate-list rows over any supported field."""
    mat = [list(r) for r in rows]
    pivots: list[tuple[int, int]] = []
    r = 0
    for col in range(v):
        sel = None
        for i in range(r, len(mat)):
            if mat[i][col]:
                sel = i
                break
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = f.inv(mat[r][col])
        if inv != 1:
            mat[r] = [f.mul(inv, x) for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                c = mat[i][col]
                mat[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(mat[i], mat[r])]
        pivots.append((r, col))
        r += 1
        if r == len(mat):
            break
    return mat[:r]


class Subspace:
    """A k-dimensional subspace of GF(q)^v, basis rows packed and in RREF."""

    __slots__ = ("field", "v", "rows", "_points")

    def __init__(self, f: Field, v: int, rows: tuple[int, ...], *, _canonical: bool = False):
        self.field = f
        self.v = v
        if not _canonical:
            rows = _reduce_packed(rows, v, f)
            if not rows:
                raise ValueError("a subspace needs at least one nonzero basis vector")
        self.rows = tuple(rows)
        self._points = None

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        q = self.field.q
        return tuple(unpack_vector(r, q, self.v) for r in self.rows)

    def point_codes(self) -> tuple[int, ...]:
        """Packed codes of the normalized points, one per projective point."""
        if self._points is None:
            self._points = _points_packed(self.rows, self.v, self.field)
        return self._points

    def points(self) -> tuple[tuple[int, ...], ...]:
        q = self.field.q
        return tuple(unpack_vector(c, q, self.v) for c in self.point_codes())

    def contains_code(self, code: int) -> bool:
        return code in set(self.point_codes())

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.v == other.v
                and self.field.q == other.field.q and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.field.q, self.v, self.rows))

    def __lt__(self, other: "Subspace") -> bool:
        return (self.k, self.rows) < (other.k, other.rows)

    def __repr__(self) -> str:
        mat = ",".join("".join(_DIGITS[c] for c in row) for row in self.matrix)
        return f"Subspace(q={self.field.q}, v={self.v}, [{mat}])"


_DIGITS = "0123456789abcdef"


def _reduce_packed(rows, v: int, f: Field) -> tuple[int, ...]:
    if f.q == 2:
        return tuple(_rref_gf2(rows))
    q = f.q
    mat = _rref_generic([unpack_vector(r, q, v) for r in rows], v, f)
    return tuple(pack_vector(r, q) for r in mat)


def rref_canonical(rows, f: Field, v: int | None = None) -> Subspace:
    """Canonical Subspace spanned by the given coordinate-tuple rows.

    Errors if the rows span only the zero space or have inconsistent length.
    """
    rows = [tuple(r) for r in rows]
    if not rows:
        raise ValueError("empty generating set")
    if v is None:
        v = len(rows[0])
    if any(len(r) != v for r in rows):
        raise ValueError("generating rows must all have length v")
    if any(not (0 <= c < f.q) for r in rows for c in r):
        raise ValueError(f"coordinates must be field codes 0..{f.q - 1}")
    return Subspace(f, v, tuple(pack_vector(r, f.q) for r in rows))


def _points_packed(rows, v: int, f: Field) -> tuple[int, ...]:
    """Normalized points of the row space; leading combination coefficient 1."""
    k = len(rows)
    q = f.q
    out: list[int] = []
    if q == 2:
        for t in range(k):
            base = rows[t]
            tail = rows[t + 1:]
            for coeffs in product((0, 1), repeat=len(tail)):
                acc = base
                for c, r in zip(coeffs, tail):
                    if c:
                        acc ^= r
                out.append(acc)
        return tuple(out)
    unpacked = [unpack_vector(r, q, v) for r in rows]
    for t in range(k):
        tail = unpacked[t + 1:]
        for coeffs in product(f.elements(), repeat=len(tail)):
            acc = list(unpacked[t])
            for c, r in zip(coeffs, tail):
                if c:
                    for j in range(v):
                        if r[j]:
                            acc[j] = f.add(acc[j], f.mul(c, r[j]))
            out.append(pack_vector(acc, q))
    return tuple(out)


def subspace_points(s: Subspace) -> tuple[tuple[int, ...], ...]:
    """Points of a subspace as normalized coordinate tuples."""
    return s.points()


def enumerate_subspaces(v: int, k: int, f: Field, budget: int = ENUMERATION_BUDGET):
    """Yield every k-dimensional subspace of GF(q)^v exactly once.

    The order is deterministic: pivot-column sets ascending
    (itertools.combinations order), then the free entries of the RREF
    matrix in row-major lexicographic order over ascending field codes.
    Raises BudgetExceededError before yielding anything if the subspace
    count exceeds `budget`.
    """
    if not 1 <= k <= v:
        raise ValueError(f"need 1 <= k <= v, got k={k}, v={v}")
    count = gaussian_binomial(v, k, f.q)
    if count > budget:
        raise BudgetExceededError(
            f"{count} subspaces of dimension {k} in GF({f.q})^{v} exceed budget {budget}")
    q = f.q
    qpow = [q**j for j in range(v)]
    for pivots in combinations(range(v), k):
        pivot_set = set(pivots)
        free = [(i, j) for i in range(k) for j in range(pivots[i] + 1, v)
                if j not in pivot_set]
        base = [qpow[p] for p in pivots]
        if not free:
            yield Subspace(f, v, tuple(base), _canonical=True)
            continue
        for values in product(f.elements(), repeat=len(free)):
            rows = list(base)
            for (i, j), c in zip(free, values):
                if c:
                    rows[i] += c * qpow[j]
            yield Subspace(f, v, tuple(rows), _canonical=True)


def span_meet(a: Subspace, b: Subspace) -> tuple[int, int]:
    """(dim of span, dim of intersection) of two subspaces of the same space."""
    if a.v != b.v or a.field.q != b.field.q:
        raise ValueError("subspaces live in different ambient spaces")
    if a.field.q == 2:
        span = len(_rref_gf2(a.rows + b.rows))
    else:
        q = a.field.q
        rows = [unpack_vector(r, q, a.v) for r in a.rows + b.rows]
        span = len(_rref_generic(rows, a.v, a.field))
    return span, a.k + b.k - span


@dataclass(frozen=True)
class Prescription:
    """Pairwise disjoint subspaces fixed up front by a search, plus their span."""
    elements: tuple[Subspace, ...]
    span_dim: int


def canonical_prescription(v: int, f: Field, dims, span_dim: int | None = None) -> Prescription:
    """Canonical representatives for one, two, or three pairwise disjoint subspaces.

    One subspace of dimension i:    <e_1..e_i>.
    Two of dimensions i, j:         <e_1..e_i>, <e_(i+1)..e_(i+j)>; needs i+j <= v.
    Three of equal dimension i:     the two above plus the graph subspace
        spanned by e_t + e_(i+t) + (e_(2i+t) if t <= s-2i else 0), where
        s = span_dim is the prescribed span, 2i <= s <= min(v, 3i).
        Defaults to s = min(v, 3i).

    Up to the symmetries used by the searches, one subspace and pairs of
    disjoint subspaces are unique, and triples of equal dimension are
    determined by their span; unequal triples are not supported.
    """
    dims = tuple(int(d) for d in dims)
    if not 1 <= len(dims) <= 3:
        raise ValueError("a prescription fixes one, two, or three subspaces")
    if any(not 1 <= d < v for d in dims):
        raise ValueError(f"prescribed dimensions must lie in 1..{v - 1}")
    q = f.q
    qpow = [q**j for j in range(v)]

    def coord_space(start: int, dim: int) -> Subspace:
        return Subspace(f, v, tuple(qpow[start + t] for t in range(dim)), _canonical=True)

    if len(dims) == 1:
        i = dims[0]
        if span_dim is not None and span_dim != i:
            raise InfeasiblePrescriptionError(f"one subspace of dimension {i} spans {i}")
        return Prescription((coord_space(0, i),), i)

    i, j = dims[0], dims[1]
    if i + j > v:
        raise InfeasiblePrescriptionError(
            f"disjoint subspaces of dimensions {i} and {j} need ambient dimension >= {i + j}")
    if len(dims) == 2:
        if span_dim is not None and span_dim != i + j:
            raise InfeasiblePrescriptionError(f"a disjoint pair of dimensions {i}, {j} spans {i + j}")
        return Prescription((coord_space(0, i), coord_space(i, j)), i + j)

    if len(set(dims)) != 1:
        raise InfeasiblePrescriptionError("three prescribed subspaces must have equal dimension")
    s = span_dim if span_dim is not None else min(v, 3 * i)
    if not 2 * i <= s <= min(v, 3 * i):
        raise InfeasiblePrescriptionError(
            f"three disjoint subspaces of dimension {i} span between {2 * i} and {min(v, 3 * i)},"
            f" got {s}")
    d = s - 2 * i
    rows = []
    for t in range(i):
        r = qpow[t] + qpow[i + t]
        if t < d:
            r += qpow[2 * i + t]
        rows.append(r)
    third = Subspace(f, v, tuple(rows), _canonical=True)
    return Prescription((coord_space(0, i), coord_space(i, i), third), s)


class PointIndexer:
    """Dense index for the points of PG(v-1, q), plus bitmask helpers.

    Point index order: leading coordinate position ascending, then the
    free coordinates in row-major lexicographic order, matching the
    normalized-representative enumeration.
    """

    __slots__ = ("field", "v", "codes", "index")

    def __init__(self, v: int, f: Field):
        self.field = f
        self.v = v
        q = f.q
        codes: list[int] = []
        qpow = [q**j for j in range(v)]
        for t in range(v):
            lead = qpow[t]
            for rest in product(f.elements(), repeat=v - t - 1):
                codes.append(lead + sum(c * qpow[t + 1 + s] for s, c in enumerate(rest)))
        self.codes = tuple(codes)
        self.index = {c: i for i, c in enumerate(codes)}

    def __len__(self) -> int:
        return len(self.codes)

    def mask_of_codes(self, codes) -> int:
        idx = self.index
        m = 0
        for c in codes:
            m |= 1 << idx[c]
        return m

    def mask_of_subspace(self, s: Subspace) -> int:
        return self.mask_of_codes(s.point_codes())

    def codes_of_mask(self, mask: int) -> list[int]:
        out = []
        codes = self.codes
        while mask:
            low = mask & -mask
            out.append(codes[low.bit_length() - 1])
            mask ^= low
        return out
