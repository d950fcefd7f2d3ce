"""Context-free introduction of readings: full-form lexicon plus guesser."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .core import (
    CAPITAL_TAG,
    HEUR_FLAG,
    Cohort,
    CohortSyntaxError,
    Origin,
    Reading,
    Sentence,
    display_to_surface,
    intern_tag,
    iter_cohorts,
)

log = logging.getLogger(__name__)

DEFAULT_SENTENCE_DELIMITERS = frozenset({".", "!", "?"})


@dataclass(frozen=True)
class Lexicon:
    entries: dict[str, tuple[Reading, ...]] = field(default_factory=dict)
    punctuation: frozenset[str] = frozenset()
    delimiters: frozenset[str] = DEFAULT_SENTENCE_DELIMITERS

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, surface: str) -> bool:
        return surface.lower() in self.entries

    def lookup(self, surface: str) -> tuple[Reading, ...] | None:
        return self.entries.get(surface.lower())

    def is_punct(self, surface: str) -> bool:
        return surface in self.punctuation or surface in self.delimiters


def parse_lexicon(text: str, source: str = "<lexicon>") -> Lexicon:
    entries: dict[str, list[Reading]] = {}
    punctuation: set[str] = set()
    for cohort in iter_cohorts(text, source):
        if cohort.is_punct:
            punctuation.add(display_to_surface(cohort.display_form, punct=True))
            continue
        key = cohort.surface.lower()
        if key in entries:
            log.warning("%s: duplicate entry %r merged", source, key)
            merged = entries[key]
            merged.extend(r for r in cohort.readings if r not in merged)
        else:
            entries[key] = list(dict.fromkeys(cohort.readings))
    return Lexicon({k: tuple(v) for k, v in entries.items()}, frozenset(punctuation))


def load_lexicon(path: str | Path) -> Lexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"), str(path))


def lookup(lex: Lexicon, surface: str) -> tuple[Reading, ...] | None:
    """All readings of the case-folded form, or None when absent."""
    return lex.lookup(surface)


# ---------------------------------------------------------------- guesser


@dataclass(frozen=True)
class AffixPattern:
    prefixes: tuple[str, ...] = ()
    suffixes: tuple[str, ...] = ()
    shapes: tuple[str, ...] = ()

    def matches(self, surface: str) -> bool:
        folded = surface.lower()
        if not all(folded.startswith(p) and len(folded) > len(p) for p in self.prefixes):
            return False
        if not all(folded.endswith(s) and len(folded) > len(s) for s in self.suffixes):
            return False
        return all(_SHAPES[s](surface) for s in self.shapes)

    def __str__(self) -> str:
        parts = [f'prefix:"{p}-"' for p in self.prefixes]
        parts += [f'suffix:"-{s}"' for s in self.suffixes]
        parts += [f"shape:{s}" for s in self.shapes]
        return " & ".join(parts)


_SHAPES = {
    "capitalized": lambda s: s[:1].isupper(),
    "digit": lambda s: any(ch.isdigit() for ch in s),
    "hyphen": lambda s: "-" in s.strip("-"),
}


@dataclass(frozen=True)
class GuesserRule:
    priority: int
    pattern: AffixPattern
    productions: tuple[tuple[str, ...], ...]
    terminal: bool = True

    def __post_init__(self):
        if not self.productions:
            raise ValueError("guesser rule needs at least one production")
        if not all(HEUR_FLAG in p for p in self.productions):
            raise ValueError("every guesser production must carry the heuristic flag")


DEFAULT_PRODUCTION = ("N", "NOM", "SG", HEUR_FLAG)


@dataclass(frozen=True)
class Guesser:
    rules: tuple[GuesserRule, ...] = ()
    default: tuple[tuple[str, ...], ...] = (DEFAULT_PRODUCTION,)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(sorted(self.rules, key=lambda r: r.priority)))

    def guess(self, surface: str) -> tuple[Reading, ...]:
        # rules see the word form only
        productions: list[tuple[str, ...]] = []
        for rule in self.rules:
            if rule.pattern.matches(surface):
                productions.extend(rule.productions)
                if rule.terminal:
                    break
        if not productions:
            productions = list(self.default)
        base = surface.lower()
        readings = [Reading(base, tuple(intern_tag(t) for t in p), Origin.GUESSER) for p in productions]
        return tuple(dict.fromkeys(readings))


def guess(g: Guesser, surface: str) -> tuple[Reading, ...]:
    if not surface:
        raise ValueError("cannot guess an empty surface form")
    return g.guess(surface)


_PATTERN_ATOM = re.compile(r'^(prefix|suffix):"([^"]+)"$|^shape:(\w+)$')


def _parse_pattern(text: str, source: str, lineno: int) -> AffixPattern:
    prefixes, suffixes, shapes = [], [], []
    for atom in text.split("&"):
        atom = atom.strip()
        m = _PATTERN_ATOM.match(atom)
        if not m:
            raise CohortSyntaxError(f"bad guesser pattern {atom!r}", lineno, 1, source)
        if m.group(3):
            if m.group(3) not in _SHAPES:
                raise CohortSyntaxError(f"unknown shape {m.group(3)!r}", lineno, 1, source)
            shapes.append(m.group(3))
        elif m.group(1) == "prefix":
            prefixes.append(m.group(2).rstrip("-"))
        else:
            suffixes.append(m.group(2).lstrip("-"))
    return AffixPattern(tuple(prefixes), tuple(suffixes), tuple(shapes))


def parse_guesser(text: str, source: str = "<guesser>") -> Guesser:
    """Parse ``PRIORITY  PATTERN  ->  READING ; READING ...  [TERMINAL]`` lines.

    The heuristic flag is appended to any production that omits it. A line
    ``DEFAULT -> READING ; ...`` replaces the residual noun production.
    """
    rules = []
    default = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise CohortSyntaxError("missing '->'", lineno, 1, source)
        lhs, rhs = (part.strip() for part in line.split("->", 1))
        terminal = False
        words = rhs.split()
        if words and words[-1] == "TERMINAL":
            terminal = True
            rhs = rhs[: rhs.rfind("TERMINAL")].strip()
        productions = []
        for prod in rhs.split(";"):
            tag_texts = prod.split()
            if not tag_texts:
                raise CohortSyntaxError("empty production", lineno, 1, source)
            if HEUR_FLAG not in tag_texts:
                tag_texts.append(HEUR_FLAG)
            productions.append(tuple(tag_texts))
        if lhs == "DEFAULT":
            default = tuple(productions)
            continue
        prio, _, pattern = lhs.partition(" ")
        try:
            priority = int(prio)
        except ValueError:
            raise CohortSyntaxError(f"bad priority {prio!r}", lineno, 1, source) from None
        rules.append(GuesserRule(priority, _parse_pattern(pattern.strip(), source, lineno), tuple(productions), terminal))
    if default is None:
        return Guesser(tuple(rules))
    return Guesser(tuple(rules), default)


def load_guesser(path: str | Path) -> Guesser:
    return parse_guesser(Path(path).read_text(encoding="utf-8"), str(path))


# ---------------------------------------------------------------- analysis

_TOKEN = re.compile(r"\w+(?:['\-]\w+)*|[^\w\s]")


def tokenize(text: str) -> list[str]:
    """Demo splitter: words (with inner apostrophes/hyphens) and single punctuation marks."""
    return _TOKEN.findall(text)


def _mark_capital(readings: Sequence[Reading]) -> tuple[Reading, ...]:
    cap = intern_tag(CAPITAL_TAG)
    out = []
    for r in readings:
        if cap in r.tagset:
            out.append(r)
        else:
            out.append(r.with_tags((cap,) + r.tags))
    return tuple(out)


def analyze_token(lex: Lexicon, g: Guesser, token: str) -> Cohort:
    if lex.is_punct(token):
        return Cohort.from_surface(token, punct=True)
    readings = lex.lookup(token)
    if readings is None:
        readings = g.guess(token)
    cohort = Cohort.from_surface(token, readings)
    if cohort.capitalized:
        cohort = cohort.replace(_mark_capital(cohort.readings))
    return cohort


def analyze(lex: Lexicon, g: Guesser, tokens: Iterable[str]) -> Sentence:
    """One cohort per token; never fails and never yields an empty word cohort."""
    return Sentence(tuple(analyze_token(lex, g, t) for t in tokens))


def analyze_text(lex: Lexicon, g: Guesser, tokens: Iterable[str]) -> list[Sentence]:
    """Analyse a token stream, cutting a new sentence after every delimiter."""
    sentences, buf = [], []
    for tok in tokens:
        buf.append(tok)
        if tok in lex.delimiters:
            sentences.append(analyze(lex, g, buf))
            buf = []
    if buf:
        sentences.append(analyze(lex, g, buf))
    return sentences
