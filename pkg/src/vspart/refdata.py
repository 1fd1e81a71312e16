"""Bundled reference data: classification tables and point-set matrices.

The package ships reference lists of partition types of PG(7,2) (feasible
families and the finitely many types excluded by computer search) plus a
few explicit point-set matrices used as witnesses in tests.  Two variants
of each list exist: ``*_printed.txt`` transcribes the upstream reference
tables verbatim (up to repairs of broken exponent braces), while the
default files carry normalized values.  Every semantic deviation between
the two is recorded in ``normalizations.json`` together with the
mathematical reason.

Family grammar, one family per line::

    4^12 3^{5-3j} 2^{12-i+7j} 1^{4+3i} ; 0<=i<=12+7j ; 0<=j<=1

Terms are ``d^expr`` with expressions linear in the parameters i and j
(braces optional around bare integers); the optional constraints bound i
(linearly in j) and j (by a constant).  Lower bounds other than 0 are
allowed, e.g. ``2<=i<=5``.  Lines starting with ``#`` are comments.

Set the environment variable ``VSP_DATA_DIR`` to override the bundled
data directory.
"""

from __future__ import annotations

import json
import os
import pathlib
import re
from dataclasses import dataclass
from importlib import resources

from .errors import FormatError
from .gf import field
from .multisets import PointMultiset, multiset_from_columns, parse_matrix_text
from .typecalc import PartitionType


def _data_root():
    override = os.environ.get("VSP_DATA_DIR")
    if override:
        return pathlib.Path(override)
    return resources.files("vspart").joinpath("data")


def read_data_text(relpath: str) -> str:
    node = _data_root()
    for part in relpath.split("/"):
        node = node.joinpath(part) if hasattr(node, "joinpath") else node / part
    try:
        return node.read_text()
    except (FileNotFoundError, OSError) as exc:
        raise FormatError(f"reference data file {relpath!r} not found: {exc}") from exc


@dataclass(frozen=True)
class LinearExpr:
    """``c0 + ci*i + cj*j`` with integer coefficients."""

    c0: int
    ci: int = 0
    cj: int = 0

    def eval(self, i: int = 0, j: int = 0) -> int:
        return self.c0 + self.ci * i + self.cj * j

    @property
    def is_const(self) -> bool:
        return self.ci == 0 and self.cj == 0

    def text(self) -> str:
        parts = []
        if self.c0 or (not self.ci and not self.cj):
            parts.append(str(self.c0))
        for coef, var in ((self.ci, "i"), (self.cj, "j")):
            if not coef:
                continue
            sign = "-" if coef < 0 else ("+" if parts else "")
            mag = abs(coef)
            parts.append(f"{sign}{'' if mag == 1 else mag}{var}")
        return "".join(parts)


_TERM_PIECE = re.compile(r"([+-]?)(?:(\d+)\*?([ij])?|([ij]))")


def parse_linear(text: str) -> LinearExpr:
    s = text.strip().strip("{}").replace(" ", "")
    if not s:
        raise FormatError("empty expression")
    c0 = ci = cj = 0
    pos = 0
    while pos < len(s):
        m = _TERM_PIECE.match(s, pos)
        if m is None:
            raise FormatError(f"cannot parse expression {text!r} at {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = sign * (int(m.group(2)) if m.group(2) is not None else 1)
        var = m.group(3) or m.group(4)
        if var == "i":
            ci += coef
        elif var == "j":
            cj += coef
        else:
            c0 += coef
        pos = m.end()
    return LinearExpr(c0, ci, cj)


@dataclass(frozen=True)
class FamilyLine:
    """One parameterized family of partition types."""

    raw: str
    terms: tuple[tuple[int, LinearExpr], ...]
    i_lower: int = 0
    i_upper: LinearExpr | None = None
    j_upper: int | None = None

    def expand(self) -> list[PartitionType]:
        """All members; counts must be nonnegative inside the ranges."""
        out = []
        j_hi = self.j_upper if self.j_upper is not None else 0
        for j in range(j_hi + 1):
            i_hi = self.i_upper.eval(j=j) if self.i_upper is not None else 0
            for i in range(self.i_lower, i_hi + 1):
                counts = {}
                for d, expr in self.terms:
                    m = expr.eval(i=i, j=j)
                    if m < 0:
                        raise FormatError(
                            f"family {self.raw!r} yields negative count for "
                            f"dimension {d} at i={i}, j={j}"
                        )
                    counts[d] = m
                out.append(PartitionType(counts))
        return out


_CONSTRAINT = re.compile(r"^(?:(\d+)<=)?([ij])<=(.+)$")
_TERM = re.compile(r"^(\d+)\^(\{[^{}]*\}|\S+)$")


def parse_family_line(line: str) -> FamilyLine:
    chunks = [c.strip() for c in line.split(";")]
    head, constraints = chunks[0], chunks[1:]
    terms = []
    seen = set()
    for tok in head.split():
        m = _TERM.match(tok)
        if m is None:
            raise FormatError(f"malformed family term {tok!r} in {line!r}")
        d = int(m.group(1))
        if d in seen:
            raise FormatError(f"dimension {d} listed twice in {line!r}")
        seen.add(d)
        terms.append((d, parse_linear(m.group(2))))
    i_lower, i_upper, j_upper = 0, None, None
    for c in constraints:
        m = _CONSTRAINT.match(c.replace(" ", ""))
        if m is None:
            raise FormatError(f"malformed constraint {c!r} in {line!r}")
        lo = int(m.group(1)) if m.group(1) else 0
        var, upper = m.group(2), parse_linear(m.group(3))
        if var == "i":
            if upper.ci:
                raise FormatError(f"upper bound of i may not involve i: {line!r}")
            i_lower, i_upper = lo, upper
        else:
            if not upper.is_const or lo != 0:
                raise FormatError(f"bound of j must be a constant range: {line!r}")
            j_upper = upper.c0
    uses_i = any(e.ci for _, e in terms)
    uses_j = any(e.cj for _, e in terms) or (i_upper is not None and i_upper.cj != 0)
    if uses_i and i_upper is None:
        raise FormatError(f"parameter i is unbounded in {line!r}")
    if uses_j and j_upper is None:
        raise FormatError(f"parameter j is unbounded in {line!r}")
    return FamilyLine(line, tuple(terms), i_lower, i_upper, j_upper)


def load_family_lines(relpath: str) -> list[FamilyLine]:
    lines = []
    for raw in read_data_text(relpath).splitlines():
        raw = raw.strip()
        if not raw or raw.startswith("#"):
            continue
        lines.append(parse_family_line(raw))
    return lines


def expand_families(families) -> set[PartitionType]:
    out: set[PartitionType] = set()
    for fam in families:
        out.update(fam.expand())
    return out


def load_reference_types(relpath: str) -> set[PartitionType]:
    return expand_families(load_family_lines(relpath))


def load_normalizations() -> dict:
    return json.loads(read_data_text("normalizations.json"))


# --------------------------------------------------------------- point sets

_POINTSET_FILES = {
    "m75a": "pointsets/m75a.txt",
    "m75b": "pointsets/m75b.txt",
    "m75c": "pointsets/m75c.txt",
    "m20": "pointsets/m20.txt",
}


def pointset_names() -> tuple[str, ...]:
    return tuple(sorted(_POINTSET_FILES))


def load_pointset(name: str) -> PointMultiset:
    """A bundled binary point-set matrix as a :class:`PointMultiset`."""
    try:
        rel = _POINTSET_FILES[name]
    except KeyError:
        raise FormatError(
            f"unknown point set {name!r}; available: {', '.join(pointset_names())}"
        ) from None
    f = field(2)
    rows = parse_matrix_text(read_data_text(rel), f)
    return multiset_from_columns(rows, f)


def load_pointset_index() -> dict:
    """Reference facts about the bundled point sets (verified in tests)."""
    return json.loads(read_data_text("pointsets/index.json"))
