"""Recall, precision and ambiguity accounting against a hand-annotated gold standard.

Recall is received appropriate readings over intended appropriate readings,
precision is received appropriate readings over all received readings. Gold
and system output are aligned cohort by cohort; a mismatch is an error, not
something to repair.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

from .core import Cohort, Document, Reading, TagKind


class AlignmentError(ValueError):
    pass


def reading_key(r: Reading, syntax: bool = False) -> tuple[str, tuple[str, ...]]:
    """Identity used for scoring: base form and tag multiset, flags ignored."""
    skip = {TagKind.HEURFLAG} if syntax else {TagKind.HEURFLAG, TagKind.SYNFUNC}
    return r.base, tuple(sorted(t.text for t in r.tags if t.kind not in skip))


def _cohorts(d: Document | Sequence[Cohort]) -> list[Cohort]:
    return list(d.cohorts()) if isinstance(d, Document) else list(d)


def align(out: Document | Sequence[Cohort], gold: Document | Sequence[Cohort]) -> list[tuple[Cohort, Cohort]]:
    o, g = _cohorts(out), _cohorts(gold)
    if len(o) != len(g):
        raise AlignmentError(f"output has {len(o)} tokens, gold has {len(g)}")
    for n, (a, b) in enumerate(zip(o, g), 1):
        if a.display_form != b.display_form:
            raise AlignmentError(f"token {n}: output {a.display_form!r} vs gold {b.display_form!r}")
    return list(zip(o, g))


@dataclass(frozen=True)
class Counts:
    appropriate: int  # received appropriate readings
    intended: int
    received: int
    tokens: int
    unambiguous: int
    errors: int  # tokens that lost an intended reading


def count(out: Document | Sequence[Cohort], gold: Document | Sequence[Cohort], syntax: bool = False) -> Counts:
    appropriate = intended = received = tokens = unambiguous = errors = 0
    for o, g in align(out, gold):
        if g.is_punct:
            continue
        want = {reading_key(r, syntax) for r in g.readings}
        got = {reading_key(r, syntax) for r in o.readings}
        hit = len(want & got)
        appropriate += hit
        intended += len(want)
        received += len(got)
        tokens += 1
        unambiguous += len(got) == 1
        errors += hit < len(want)
    return Counts(appropriate, intended, received, tokens, unambiguous, errors)


def _ratio(num: int, den: int) -> Fraction:
    return Fraction(num, den) if den else Fraction(1)


def recall(out: Document | Sequence[Cohort], gold: Document | Sequence[Cohort], syntax: bool = False) -> Fraction:
    c = count(out, gold, syntax)
    return _ratio(c.appropriate, c.intended)


def precision(out: Document | Sequence[Cohort], gold: Document | Sequence[Cohort], syntax: bool = False) -> Fraction:
    c = count(out, gold, syntax)
    return _ratio(c.appropriate, c.received)


def ambiguity_stats(out: Document | Sequence[Cohort]) -> tuple[Fraction, Fraction]:
    """(fraction of words with one reading, mean readings per word), punctuation excluded."""
    words = [c for c in _cohorts(out) if not c.is_punct]
    if not words:
        return Fraction(1), Fraction(1)
    return (
        Fraction(sum(len(c.readings) == 1 for c in words), len(words)),
        Fraction(sum(len(c.readings) for c in words), len(words)),
    )


def percent(x: Fraction | float) -> str:
    """Half-up rounding to two decimals, as a percentage."""
    d = Decimal(x.numerator) / Decimal(x.denominator) if isinstance(x, Fraction) else Decimal(str(x))
    return f"{(d * 100).quantize(Decimal('0.01'), rounding=ROUND_HALF_UP)}%"


def two_places(x: Fraction | float) -> str:
    d = Decimal(x.numerator) / Decimal(x.denominator) if isinstance(x, Fraction) else Decimal(str(x))
    return str(d.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class EvalReport:
    recall: Fraction
    precision: Fraction
    tokens: int
    unambiguous_fraction: Fraction
    readings_per_word: Fraction
    errors: int

    @classmethod
    def from_counts(cls, c: Counts) -> "EvalReport":
        return cls(
            _ratio(c.appropriate, c.intended),
            _ratio(c.appropriate, c.received),
            c.tokens,
            _ratio(c.unambiguous, c.tokens),
            _ratio(c.received, c.tokens),
            c.errors,
        )

    def row(self) -> dict[str, str]:
        return {
            "recall": percent(self.recall),
            "precision": percent(self.precision),
            "tokens": str(self.tokens),
            "unambiguous": percent(self.unambiguous_fraction),
            "readings/word": two_places(self.readings_per_word),
            "errors": str(self.errors),
        }


def evaluate(out: Document | Sequence[Cohort], gold: Document | Sequence[Cohort], syntax: bool = False) -> EvalReport:
    return EvalReport.from_counts(count(out, gold, syntax))


COLUMNS = ("system", "recall", "precision", "tokens", "unambiguous", "readings/word", "errors")


def compare_report(rows: Iterable[tuple[str, EvalReport]]) -> str:
    """Aligned text table, one line per system."""
    table = [list(COLUMNS)] + [[name, *r.row().values()] for name, r in rows]
    widths = [max(len(line[k]) for line in table) for k in range(len(COLUMNS))]
    out = []
    for line in table:
        cells = [line[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(line[1:], widths[1:])]
        out.append("  ".join(cells).rstrip() + "\n")
    return "".join(out)


def report_tsv(rows: Iterable[tuple[str, EvalReport]]) -> str:
    lines = ["\t".join(COLUMNS) + "\n"]
    for name, r in rows:
        lines.append("\t".join([name, *r.row().values()]) + "\n")
    return "".join(lines)


__all__ = [
    "AlignmentError",
    "COLUMNS",
    "Counts",
    "EvalReport",
    "align",
    "ambiguity_stats",
    "compare_report",
    "count",
    "evaluate",
    "percent",
    "precision",
    "reading_key",
    "recall",
    "report_tsv",
    "two_places",
]
