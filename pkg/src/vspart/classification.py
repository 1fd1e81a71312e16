"""Reconciliation of computed PG(7,2) type feasibility with reference data.

The classification of partition types of PG(7,2) combines three layers:

1. candidate enumeration (packing and dimension conditions),
2. the tail conditions of :func:`vspart.typecalc.check_tails`,
3. a finite table of types that pass every condition but were shown
   infeasible by exhaustive search (bundled as reference data).

``classify_pg72`` runs all three and compares the resulting feasible set
against the expansion of the bundled reference families.  With the
normalized data files the symmetric difference is empty; with the
``*_printed.txt`` transcriptions the report shows exactly the documented
deviations.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .refdata import expand_families, load_family_lines
from .typecalc import PartitionType, check_packing, check_dimension, enumerate_types, tails


@dataclass(frozen=True)
class ClassificationReport:
    """Outcome of reconciling computed and reference classifications."""

    candidates: int
    filter_passing: int
    rejection_rules: tuple[tuple[str, int], ...]
    exclusions: tuple[PartitionType, ...]
    exclusions_outside_filters: tuple[PartitionType, ...]
    invalid_reference: tuple[PartitionType, ...]
    computed: frozenset[PartitionType]
    reference: frozenset[PartitionType]
    missing: tuple[PartitionType, ...]
    extra: tuple[PartitionType, ...]

    @property
    def ok(self) -> bool:
        """True when computed and reference classifications coincide."""
        return (
            not self.missing
            and not self.extra
            and not self.invalid_reference
            and not self.exclusions_outside_filters
        )

    def summary_lines(self) -> list[str]:
        lines = [
            f"candidates (packing + dimension): {self.candidates}",
            f"passing tail conditions:          {self.filter_passing}",
            f"excluded by search table:         {len(self.exclusions)}",
            f"computed feasible:                {len(self.computed)}",
            f"reference feasible:               {len(self.reference)}",
            f"missing (reference - computed):   {len(self.missing)}",
            f"extra (computed - reference):     {len(self.extra)}",
        ]
        if self.invalid_reference:
            lines.append(
                f"reference rows violating packing/dimension: {len(self.invalid_reference)}"
            )
        if self.exclusions_outside_filters:
            lines.append(
                f"exclusion rows already rejected by filters: {len(self.exclusions_outside_filters)}"
            )
        for label, items in (("missing", self.missing), ("extra", self.extra)):
            for t in items[:10]:
                lines.append(f"  {label}: {t}")
            if len(items) > 10:
                lines.append(f"  {label}: ... {len(items) - 10} more")
        lines.append(f"reconciliation: {'exact' if self.ok else 'MISMATCH'}")
        return lines


def classify_pg72(*, normalized: bool = True, explicit: bool = False) -> ClassificationReport:
    """Classify PG(7,2) types and reconcile with the bundled reference.

    ``normalized`` selects the normalized data files (default) or the
    verbatim transcriptions; ``explicit`` compares against the expanded
    per-plane-count list instead of the parameterized families (both
    expand to the same set of types).
    """
    suffix = "" if normalized else "_printed"
    fam_name = (
        f"pg72_feasible_explicit{suffix}.txt"
        if explicit
        else f"pg72_feasible_families{suffix}.txt"
    )
    excl_name = f"pg72_infeasible_exceptions{suffix}.txt"

    candidates = enumerate_types(8, 2, tail_filter=False)
    passing = []
    rules: Counter[str] = Counter()
    for t in candidates:
        verdicts = tails(t, 8, 2)
        bad = [c.violation for c in verdicts if not c.ok]
        if bad:
            rules.update(set(bad))
        else:
            passing.append(t)
    passing_set = frozenset(passing)

    exclusions = sorted(expand_families(load_family_lines(excl_name)), reverse=True)
    exclusions_outside = tuple(t for t in exclusions if t not in passing_set)
    computed = frozenset(passing_set - set(exclusions))

    reference_raw = expand_families(load_family_lines(fam_name))
    invalid = tuple(
        sorted(
            (
                t
                for t in reference_raw
                if not (check_packing(t, 8, 2) and check_dimension(t, 8))
            ),
            reverse=True,
        )
    )
    reference = frozenset(reference_raw - set(invalid))

    return ClassificationReport(
        candidates=len(candidates),
        filter_passing=len(passing),
        rejection_rules=tuple(sorted(rules.items())),
        exclusions=tuple(exclusions),
        exclusions_outside_filters=exclusions_outside,
        invalid_reference=invalid,
        computed=computed,
        reference=reference,
        missing=tuple(sorted(reference - computed, reverse=True)),
        extra=tuple(sorted(computed - reference, reverse=True)),
    )
