"""Finite field arithmetic for small prime powers.

Elements of GF(q) are integer codes 0..q-1.  For q = p^e the code is read
in base p: its digits, least significant first, are the coefficients of a
polynomial over GF(p), and multiplication is reduction modulo a fixed
irreducible polynomial.  The polynomials used (coefficients ascending,
monic) are

    q = 4  : 1 + x + x^2
    q = 8  : 1 + x + x^3
    q = 9  : 2 + 2x + x^2
    q = 16 : 1 + x + x^4

Fixing these once makes every canonical form computed by the package
reproducible across runs and machines.  Code 0 is the zero element and
code 1 the multiplicative identity, for every q.

Extension fields GF(q^m) over an already supported GF(q) are provided for
the subspace constructions; their elements are integer codes read in base
q the same way.  The modulus is the lexicographically smallest monic
irreducible polynomial of degree m over GF(q), found by scanning, so it
is again a pure function of (q, m).
"""

from __future__ import annotations

from functools import lru_cache
from math import prod

__all__ = [
    "Field",
    "ExtensionField",
    "field",
    "prime_power",
    "gaussian_binomial",
    "SUPPORTED_ORDERS",
]

MAX_ORDER = 16

_IRREDUCIBLE = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
}


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with q = p^e and p prime, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if p * p > q and p < q:
            break
        if q % p:
            continue
        e = 0
        m = q
        while m % p == 0:
            m //= p
            e += 1
        return (p, e) if m == 1 else None
    return (q, 1)


def _poly_mul_mod(a: tuple[int, ...], b: tuple[int, ...], modulus: tuple[int, ...],
                  p: int) -> tuple[int, ...]:
    """Multiply coefficient vectors over GF(p) and reduce modulo `modulus`.

    `modulus` is monic of degree e with e+1 coefficients; inputs and the
    result have e coefficients.
    """
    e = len(modulus) - 1
    acc = [0] * (2 * e - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                acc[i + j] = (acc[i + j] + ai * bj) % p
    for d in range(2 * e - 2, e - 1, -1):
        c = acc[d]
        if c:
            acc[d] = 0
            for j in range(e):
                acc[d - e + j] = (acc[d - e + j] - c * modulus[j]) % p
    return tuple(acc[:e])


class Field:
    """GF(q) with full lookup tables; q <= 16 a prime power."""

    __slots__ = ("q", "p", "degree", "_add", "_mul", "_neg", "_inv")

    def __init__(self, q: int):
        pe = prime_power(q)
        if pe is None or q > MAX_ORDER:
            raise ValueError(f"field order must be a prime power <= {MAX_ORDER}, got {q}")
        self.q = q
        self.p, self.degree = pe
        p, e = self.p, self.degree
        if e == 1:
            self._add = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
            self._mul = tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
        else:
            modulus = _IRREDUCIBLE[q]
            digits = [self._digits(c, p, e) for c in range(q)]
            code = lambda t: sum(d * p**i for i, d in enumerate(t))
            self._add = tuple(
                tuple(code(tuple((x + y) % p for x, y in zip(digits[a], digits[b])))
                      for b in range(q))
                for a in range(q)
            )
            self._mul = tuple(
                tuple(code(_poly_mul_mod(digits[a], digits[b], modulus, p))
                      for b in range(q))
                for a in range(q)
            )
        neg = [0] * q
        inv = [0] * q
        for a in range(q):
            for b in range(q):
                if self._add[a][b] == 0:
                    neg[a] = b
                if a and self._mul[a][b] == 1:
                    inv[a] = b
        self._neg = tuple(neg)
        self._inv = tuple(inv)

    @staticmethod
    def _digits(c: int, p: int, e: int) -> tuple[int, ...]:
        out = []
        for _ in range(e):
            out.append(c % p)
            c //= p
        return tuple(out)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(q)")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (field, (self.q,))


@lru_cache(maxsize=None)
def field(q: int) -> Field:
    """Shared Field instance for GF(q)."""
    return Field(q)


SUPPORTED_ORDERS = tuple(q for q in range(2, MAX_ORDER + 1) if prime_power(q))


def gaussian_binomial(v: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^v, exactly.

    q >= 2 is any integer (the identity is polynomial in q); v, k >= 0.
    """
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    if v < 0 or k < 0:
        raise ValueError("dimensions must be nonnegative")
    if k > v:
        return 0
    k = min(k, v - k)
    num = prod(q ** (v - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


class ExtensionField:
    """GF(q^m) as an m-dimensional algebra over a base Field.

    Elements are integer codes 0..q^m-1, base-q digits = coordinates in
    the basis 1, x, ..., x^(m-1).  Only the operations needed by the
    subspace constructions are provided.
    """

    __slots__ = ("base", "m", "order", "modulus")

    def __init__(self, base: Field, m: int):
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        self.base = base
        self.m = m
        self.order = base.q ** m
        self.modulus = self._find_irreducible() if m > 1 else (0, 1)

    def _find_irreducible(self) -> tuple[int, ...]:
        """Lexicographically smallest monic irreducible of degree m over the base.

        Candidates are scanned by ascending constant-first coefficient
        tuple; irreducibility is tested by checking for roots (enough for
        degree <= 3) and otherwise by trial division with all monic
        divisors of degree <= m//2.
        """
        q, m = self.base.q, self.m
        for code in range(q**m):
            coeffs = self._digits(code, q, m) + (1,)
            if coeffs[0] == 0:
                continue
            if self._is_irreducible(coeffs):
                return coeffs
        raise AssertionError("no irreducible polynomial found")

    def _digits(self, c: int, q: int, m: int) -> tuple[int, ...]:
        out = []
        for _ in range(m):
            out.append(c % q)
            c //= q
        return tuple(out)

    def _poly_divmod_rem_zero(self, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
        """True iff monic polynomial b divides a, coefficients over the base field."""
        f = self.base
        r = list(a)
        db = len(b) - 1
        while len(r) - 1 >= db and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < db:
                break
            c = r[-1]
            shift = len(r) - 1 - db
            for j in range(db + 1):
                r[shift + j] = f.sub(r[shift + j], f.mul(c, b[j]))
        return not any(r)

    def _is_irreducible(self, coeffs: tuple[int, ...]) -> bool:
        q, m = self.base.q, self.m
        f = self.base
        eval_at = lambda x: _horner(coeffs, x, f)
        if any(eval_at(x) == 0 for x in range(q)):
            return False
        if m <= 3:
            return True
        for d in range(2, m // 2 + 1):
            for code in range(q**d):
                b = self._digits(code, q, d) + (1,)
                if self._poly_divmod_rem_zero(coeffs, b):
                    return False
        return True

    def coeffs(self, a: int) -> tuple[int, ...]:
        return self._digits(a, self.base.q, self.m)

    def code(self, coeffs) -> int:
        return sum(c * self.base.q**i for i, c in enumerate(coeffs))

    def add(self, a: int, b: int) -> int:
        f = self.base
        return self.code(tuple(f.add(x, y) for x, y in zip(self.coeffs(a), self.coeffs(b))))

    def mul(self, a: int, b: int) -> int:
        f = self.base
        acc = _poly_mul_mod_field(self.coeffs(a), self.coeffs(b), self.modulus, f)
        return self.code(acc)

    def mult_matrix(self, a: int) -> tuple[tuple[int, ...], ...]:
        """Matrix of y -> y*a in the power basis; row i = coordinates of x^i * a."""
        rows = []
        cur = a
        for _ in range(self.m):
            rows.append(self.coeffs(cur))
            cur = self.mul(cur, self.base.q if self.m > 1 else 1)
        if self.m == 1:
            rows = [self.coeffs(a)]
        return tuple(rows)

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"GF({self.base.q}^{self.m})"


def _horner(coeffs: tuple[int, ...], x: int, f: Field) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, x), c)
    return acc


def _poly_mul_mod_field(a, b, modulus, f: Field):
    """Multiply coefficient vectors over a Field and reduce modulo `modulus`."""
    e = len(modulus) - 1
    if e == 1:
        return (f.mul(a[0], b[0]),)
    acc = [0] * (2 * e - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                acc[i + j] = f.add(acc[i + j], f.mul(ai, bj))
    for d in range(2 * e - 2, e - 1, -1):
        c = acc[d]
        if c:
            acc[d] = 0
            for j in range(e):
                acc[d - e + j] = f.sub(acc[d - e + j], f.mul(c, modulus[j]))
    return tuple(acc[:e])
