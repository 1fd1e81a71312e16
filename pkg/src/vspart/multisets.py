"""Multisets of points and divisibility of the induced codes.

A multiset of points in PG(v-1, q) assigns a nonnegative multiplicity to
every point; its cardinality n counts multiplicities.  Reading the points
as columns of a generator matrix, every hyperplane H gets the weight
n - M(H), where M(H) is the number of points of the multiset lying on H.
The multiset is Delta-divisible when all hyperplane weights are multiples
of Delta.  Multisets with all multiplicities <= 1 correspond to projective
codes.

Hyperplanes are identified with normalized dual vectors (first nonzero
coordinate 1), so each hyperplane is visited exactly once.  Spectra are
computed over the span of the support: the ambient space only adds
hyperplanes that contain the whole support.

Two length oracles decide whether a Delta-divisible code of cardinality n
can exist at all.  For q = 2 and Delta in {2, 4, 8} the set of lengths of
projective Delta-divisible codes is known exactly; for general q and
Delta = q^r the lengths of (not necessarily projective) Delta-divisible
multisets form the numerical semigroup generated by
q^i * [r+1-i]_q, 0 <= i <= r, which gives a necessary condition only.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb

from .errors import FormatError
from .gf import Field, gaussian_binomial
from .subspace import (
    Subspace,
    _rref_generic,
    _rref_gf2,
    normalize_point,
    pack_vector,
    unpack_vector,
)

__all__ = [
    "PointMultiset",
    "Spectrum",
    "LengthVerdict",
    "multiset_from_columns",
    "parse_matrix_text",
    "format_matrix_text",
    "admissible_length_projective_binary",
    "admissible_length_semigroup",
    "semigroup_generators",
    "solve_standard_equations",
    "MAX_MULTIPLICITY",
]

MAX_MULTIPLICITY = 2**16


@dataclass(frozen=True)
class Spectrum:
    """Hyperplane incidence counts: counts[i] hyperplanes meet the multiset
    in exactly i points (with multiplicity), over the span of the support."""

    k: int
    n: int
    counts: dict[int, int]

    def __getitem__(self, i: int) -> int:
        return self.counts.get(i, 0)

    def as_sorted_items(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.counts.items()))


@dataclass(frozen=True)
class LengthVerdict:
    """Outcome of a length oracle.

    admissible=False always cites a violated necessary condition (`rule`).
    exact=True means the rule is also sufficient, so admissible=True is a
    realizability statement; otherwise admissible=True only means "not
    excluded".
    """

    admissible: bool
    rule: str
    exact: bool


class PointMultiset:
    """Multiplicity function on the points of PG(v-1, q)."""

    __slots__ = ("field", "v", "mult")

    def __init__(self, f: Field, v: int, mult: dict[int, int]):
        self.field = f
        self.v = v
        for code, m in mult.items():
            if m < 0 or m > MAX_MULTIPLICITY:
                raise ValueError(f"multiplicity {m} out of range 0..{MAX_MULTIPLICITY}")
        self.mult = {c: m for c, m in mult.items() if m > 0}

    @classmethod
    def from_points(cls, f: Field, v: int, points) -> "PointMultiset":
        """Accumulate coordinate tuples (or packed codes) with multiplicity."""
        mult: dict[int, int] = {}
        for p in points:
            if isinstance(p, int):
                p = unpack_vector(p, f.q, v)
            code = pack_vector(normalize_point(p, f), f.q)
            mult[code] = mult.get(code, 0) + 1
        return cls(f, v, mult)

    @classmethod
    def from_subspace(cls, s: Subspace) -> "PointMultiset":
        return cls(s.field, s.v, {c: 1 for c in s.point_codes()})

    @property
    def n(self) -> int:
        return sum(self.mult.values())

    @property
    def is_set(self) -> bool:
        return all(m == 1 for m in self.mult.values())

    def multiplicity(self, point) -> int:
        code = pack_vector(normalize_point(point, self.field), self.field.q)
        return self.mult.get(code, 0)

    def support_codes(self) -> tuple[int, ...]:
        return tuple(sorted(self.mult))

    def __add__(self, other: "PointMultiset") -> "PointMultiset":
        if other.v != self.v or other.field.q != self.field.q:
            raise ValueError("multisets live in different ambient spaces")
        mult = dict(self.mult)
        for c, m in other.mult.items():
            mult[c] = mult.get(c, 0) + m
        return PointMultiset(self.field, self.v, mult)

    def __eq__(self, other) -> bool:
        return (isinstance(other, PointMultiset) and self.v == other.v
                and self.field.q == other.field.q and self.mult == other.mult)

    def __hash__(self):
        return hash((self.field.q, self.v, tuple(sorted(self.mult.items()))))

    def span_dim(self) -> int:
        return len(self._span_rows())

    def _span_rows(self) -> tuple[int, ...]:
        if not self.mult:
            return ()
        if self.field.q == 2:
            return tuple(_rref_gf2(self.support_codes()))
        q = self.field.q
        rows = [unpack_vector(c, q, self.v) for c in self.support_codes()]
        return tuple(pack_vector(r, q) for r in _rref_generic(rows, self.v, self.field))

    def restrict_to_span(self) -> "PointMultiset":
        """Re-coordinatize onto an RREF basis of the support's span.

        With an RREF basis the coordinates of a member vector are simply
        its entries at the pivot columns.
        """
        rows = self._span_rows()
        k = len(rows)
        if k == 0:
            raise ValueError("empty multiset has no span")
        q = self.field.q
        pivots = []
        for r in rows:
            vec = unpack_vector(r, q, self.v)
            pivots.append(next(j for j, c in enumerate(vec) if c))
        mult: dict[int, int] = {}
        for code, m in self.mult.items():
            vec = unpack_vector(code, q, self.v)
            new = pack_vector(tuple(vec[p] for p in pivots), q)
            mult[new] = mult.get(new, 0) + m
        return PointMultiset(self.field, k, mult)

    def _incidence_counts(self, v: int, mult: dict[int, int]) -> list[int]:
        """Points on each hyperplane (one entry per normalized dual vector)."""
        f = self.field
        q = f.q
        out = []
        if q == 2:
            items = list(mult.items())
            for y in range(1, 2**v):
                on = 0
                for code, m in items:
                    if (code & y).bit_count() % 2 == 0:
                        on += m
                out.append(on)
            return out
        vecs = [(unpack_vector(c, q, v), m) for c, m in mult.items()]
        for t in range(v):
            for rest in product(f.elements(), repeat=v - t - 1):
                y = (0,) * t + (1,) + rest
                on = 0
                for vec, m in vecs:
                    s = 0
                    for a, b in zip(y, vec):
                        if a and b:
                            s = f.add(s, f.mul(a, b))
                    if s == 0:
                        on += m
                out.append(on)
        return out

    def spectrum(self) -> Spectrum:
        restricted = self.restrict_to_span()
        counts: dict[int, int] = {}
        for on in restricted._incidence_counts(restricted.v, restricted.mult):
            counts[on] = counts.get(on, 0) + 1
        return Spectrum(restricted.v, self.n, counts)

    def is_divisible(self, delta: int) -> bool:
        """True iff every hyperplane weight n - M(H) is divisible by delta."""
        if delta < 1:
            raise ValueError(f"divisor must be positive, got {delta}")
        n = self.n
        if not self.mult:
            return True
        restricted = self.restrict_to_span()
        return all((n - on) % delta == 0
                   for on in restricted._incidence_counts(restricted.v, restricted.mult))

    def complement(self, lam: int) -> "PointMultiset":
        """lam * (every point) minus this multiset; preserves divisibility."""
        f, q, v = self.field, self.field.q, self.v
        if lam < 1:
            raise ValueError("complement needs lam >= 1")
        if any(m > lam for m in self.mult.values()):
            raise ValueError(f"multiplicities exceed lam={lam}")
        mult: dict[int, int] = {}
        qpow = [q**j for j in range(v)]
        for t in range(v):
            lead = qpow[t]
            for rest in product(f.elements(), repeat=v - t - 1):
                code = lead + sum(c * qpow[t + 1 + s] for s, c in enumerate(rest))
                m = lam - self.mult.get(code, 0)
                if m:
                    mult[code] = m
        return PointMultiset(f, v, mult)


_DIGITS = "0123456789abcdef"
_DIGIT_VALUE = {c: i for i, c in enumerate(_DIGITS)}


def parse_matrix_text(text: str, f: Field) -> list[list[int]]:
    """Parse a digit matrix: one row per line, whitespace ignored.

    Characters are field codes '0'..'9', 'a'..'f'.  Rows must be equally
    long and every code must be < q.
    """
    rows: list[list[int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        row = []
        for ch in stripped:
            if ch.isspace():
                continue
            val = _DIGIT_VALUE.get(ch.lower())
            if val is None:
                raise FormatError(f"line {lineno}: invalid character {ch!r}")
            if val >= f.q:
                raise FormatError(f"line {lineno}: code {val} is not an element of GF({f.q})")
            row.append(val)
        rows.append(row)
    if not rows:
        raise FormatError("matrix text contains no rows")
    width = len(rows[0])
    for i, row in enumerate(rows, 1):
        if len(row) != width:
            raise FormatError(f"row {i} has {len(row)} entries, expected {width}")
    return rows


def format_matrix_text(rows) -> str:
    return "\n".join(" ".join(_DIGITS[c] for c in row) for row in rows) + "\n"


def multiset_from_columns(rows, f: Field) -> PointMultiset:
    """Multiset of the columns of a v x n matrix (each column one point)."""
    v = len(rows)
    if v == 0:
        raise FormatError("matrix has no rows")
    width = len(rows[0])
    cols = []
    for j in range(width):
        col = tuple(rows[i][j] for i in range(v))
        if not any(col):
            raise FormatError(f"column {j + 1} is zero and does not define a point")
        cols.append(col)
    return PointMultiset.from_points(f, v, cols)


_PROJECTIVE_BINARY_EXACT = {
    2: ((), 3),
    4: ((7, 8), 14),
    8: ((15, 16, 30, 31, 32, 45, 46, 47, 48, 49, 50, 51), 60),
}


def admissible_length_projective_binary(delta: int, n: int) -> LengthVerdict:
    """Exact length test for projective delta-divisible binary codes.

    delta must be 2, 4, or 8.  The admissible cardinalities are
        delta=2 : n >= 3
        delta=4 : n in {7, 8} or n >= 14
        delta=8 : n in {15, 16, 30, 31, 32, 45..51} or n >= 60
    together with n = 0 (the empty code).
    """
    if delta not in _PROJECTIVE_BINARY_EXACT:
        raise ValueError(f"exact projective table exists only for delta in (2, 4, 8), got {delta}")
    if n < 0:
        raise ValueError("cardinality must be nonnegative")
    sporadic, tail_start = _PROJECTIVE_BINARY_EXACT[delta]
    ok = n == 0 or n in sporadic or n >= tail_start
    return LengthVerdict(ok, "projective-binary-table", True)


def semigroup_generators(q: int, r: int) -> tuple[int, ...]:
    """Generators q^i * [r+1-i]_q of the q^r-divisible length semigroup."""
    if r < 1:
        raise ValueError("divisibility exponent r must be >= 1")
    return tuple(q**i * gaussian_binomial(r + 1 - i, 1, q) for i in range(r + 1))


_SEMIGROUP_CACHE: dict[tuple[int, int], list[bool]] = {}


def admissible_length_semigroup(q: int, r: int, n: int) -> LengthVerdict:
    """Necessary length test: n must lie in the semigroup generated by
    the cardinalities of the atomic q^r-divisible multisets."""
    if n < 0:
        raise ValueError("cardinality must be nonnegative")
    gens = semigroup_generators(q, r)
    key = (q, r)
    table = _SEMIGROUP_CACHE.get(key)
    if table is None or len(table) <= n:
        size = max(n + 1, 2 * min(gens) * max(gens) + 1)
        table = [False] * size
        table[0] = True
        for g in sorted(gens):
            for i in range(g, size):
                if table[i - g]:
                    table[i] = True
        _SEMIGROUP_CACHE[key] = table
    return LengthVerdict(table[n], "semigroup", False)


def solve_standard_equations(n: int, k: int, q: int, allowed, is_set: bool = False):
    """All nonnegative integer spectra (a_m) for m in `allowed` satisfying

        sum a_m          = [k]_q
        sum m * a_m      = n * [k-1]_q
        sum C(m,2) * a_m = C(n,2) * [k-2]_q      (only when is_set)

    These are the hyperplane incidence identities for a multiset of n
    points spanning GF(q)^k; the quadratic one holds for sets only.
    Returns a deterministically ordered list of Spectrum objects.
    """
    ms = sorted(set(int(m) for m in allowed), reverse=True)
    if not ms:
        raise ValueError("allowed multiplicity set is empty")
    if len(ms) > 12:
        raise ValueError(f"allowed multiplicity set too large ({len(ms)} > 12)")
    if any(m < 0 for m in ms):
        raise ValueError("hyperplane multiplicities must be nonnegative")
    if k < 1 or (is_set and k < 2):
        raise ValueError("need k >= 1, and k >= 2 for the quadratic identity")
    tot_a = gaussian_binomial(k, 1, q)
    tot_b = n * gaussian_binomial(k - 1, 1, q)
    tot_c = comb(n, 2) * gaussian_binomial(k - 2, 1, q) if is_set else None
    c2 = {m: comb(m, 2) for m in ms}
    t = len(ms)
    solutions: list[Spectrum] = []

    def emit(assign: dict[int, int]):
        counts = {m: a for m, a in assign.items() if a}
        solutions.append(Spectrum(k, n, counts))

    def close_pair(i: int, rem_a: int, rem_b: int, rem_c, assign):
        m1, m2 = ms[i], ms[i + 1]
        num = rem_b - m2 * rem_a
        den = m1 - m2
        if num % den:
            return
        a1 = num // den
        a2 = rem_a - a1
        if a1 < 0 or a2 < 0:
            return
        if is_set and c2[m1] * a1 + c2[m2] * a2 != rem_c:
            return
        assign[m1], assign[m2] = a1, a2
        emit(assign)
        del assign[m1], assign[m2]

    def dfs(i: int, rem_a: int, rem_b: int, rem_c, assign):
        if rem_a < 0 or rem_b < 0 or (is_set and rem_c < 0):
            return
        lo_m, hi_m = ms[-1], ms[i] if i < t else 0
        if rem_b > rem_a * hi_m or rem_b < rem_a * lo_m:
            return
        if is_set:
            # second moment sum m^2 a_m = 2*rem_c + rem_b must fit between
            # the Cauchy-Schwarz floor and the two-point-range ceiling
            s = 2 * rem_c + rem_b
            if s * rem_a < rem_b * rem_b:
                return
            if s > (lo_m + hi_m) * rem_b - lo_m * hi_m * rem_a:
                return
        if i == t:
            if rem_a == 0 and rem_b == 0 and (not is_set or rem_c == 0):
                emit(assign)
            return
        if i == t - 2:
            close_pair(i, rem_a, rem_b, rem_c, assign)
            return
        if i == t - 1:
            m = ms[i]
            ok = (rem_a * m == rem_b if m else rem_b == 0)
            if ok and (not is_set or c2[m] * rem_a == rem_c):
                assign[m] = rem_a
                emit(assign)
                del assign[m]
            return
        m = ms[i]
        nxt = ms[i + 1]
        hi = rem_a
        if m:
            hi = min(hi, rem_b // m)
        if is_set and c2[m]:
            hi = min(hi, rem_c // c2[m])
        # remaining variables have multiplicities <= nxt, so a_m must absorb
        # whatever the rest cannot reach
        lo = 0
        need = rem_b - rem_a * nxt
        if need > 0:
            lo = -((-need) // (m - nxt))
        for a in range(lo, hi + 1):
            assign[m] = a
            dfs(i + 1, rem_a - a, rem_b - a * m, rem_c - a * c2[m] if is_set else None, assign)
            del assign[m]

    dfs(0, tot_a, tot_b, tot_c, {})
    return solutions
