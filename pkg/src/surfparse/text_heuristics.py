"""Text-based disambiguation: lexical predominance and noun-group collocations.

Both mechanisms learn from the already unambiguous part of the same document
and then remove readings elsewhere in it. Neither ever empties a cohort.
"""
from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core import Cohort, Document, Reading, Sentence
from .engine import EngineConfig, disambiguate
from .rules import Grammar

log = logging.getLogger(__name__)

NOUN_GROUP_POS = frozenset({"N", "A"})


# ---------------------------------------------------------------- predominance


@dataclass(frozen=True)
class LexStats:
    counts: dict[tuple[str, str], int] = field(default_factory=dict)
    by_lemma: bool = False

    def get(self, key: str, pos: str) -> int | None:
        return self.counts.get((key, pos))

    def __len__(self) -> int:
        return len(self.counts)

    def to_tsv(self) -> str:
        return "".join(f"{k}\t{p}\t{n}\n" for (k, p), n in sorted(self.counts.items()))


@dataclass(frozen=True)
class PredominanceConfig:
    threshold: float = 2.0
    eligible: frozenset[frozenset[str]] = frozenset({frozenset({"N", "V"})})
    by_lemma: bool = False

    def __post_init__(self):
        if self.threshold < 1.0:
            raise ValueError("predominance threshold must be at least 1.0")


def _key(c: Cohort, r: Reading, by_lemma: bool) -> str:
    return r.base.lower() if by_lemma else c.surface.lower()


def collect_lexical_stats(d: Document, by_lemma: bool = False) -> LexStats:
    """Count (form, POS) over cohorts that have exactly one reading."""
    counts: Counter[tuple[str, str]] = Counter()
    for c in d.cohorts():
        if len(c.readings) == 1:
            r = c.readings[0]
            counts[(_key(c, r, by_lemma), r.pos.text)] += 1
    return LexStats(dict(counts), by_lemma)


def resolve_by_predominance(c: Cohort, st: LexStats, cfg: PredominanceConfig = PredominanceConfig()) -> Cohort:
    """Keep the readings of a part of speech that dominates every competitor."""
    if len(c.readings) < 2:
        return c
    by_pos: dict[str, list[Reading]] = {}
    for r in c.readings:
        by_pos.setdefault(r.pos.text, []).append(r)
    if frozenset(by_pos) not in cfg.eligible:
        return c
    for pos, readings in by_pos.items():
        mine = st.get(_key(c, readings[0], st.by_lemma), pos)
        if mine is None:
            continue
        others = [st.get(_key(c, rs[0], st.by_lemma), q) for q, rs in by_pos.items() if q != pos]
        if any(n is None for n in others):
            continue
        if all(mine >= cfg.threshold * n for n in others):
            return c.replace(readings)
    return c


# ---------------------------------------------------------------- noun groups


@dataclass(frozen=True, order=True)
class NounGroup:
    items: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if len(self.items) < 2:
            raise ValueError("a noun group needs a head and at least one premodifier")
        if self.items[-1][1] != "N":
            raise ValueError("the head of a noun group must be a noun")

    @property
    def lemmas(self) -> tuple[str, ...]:
        return tuple(lemma for lemma, _ in self.items)

    @property
    def head(self) -> int:
        return len(self.items) - 1

    def __str__(self) -> str:
        return " ".join(f"{lemma}/{pos}" for lemma, pos in self.items)

    @classmethod
    def parse(cls, line: str) -> "NounGroup":
        items = []
        for word in line.split():
            lemma, sep, pos = word.rpartition("/")
            if not sep or not lemma or not pos:
                raise ValueError(f"expected lemma/POS, got {word!r}")
            items.append((lemma, pos))
        return cls(tuple(items))


def format_noun_groups(groups: Iterable[NounGroup]) -> str:
    return "".join(f"{g}\n" for g in sorted(groups))


def parse_noun_groups(text: str) -> set[NounGroup]:
    return {NounGroup.parse(line) for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")}


def _groups_in(s: Sentence) -> Iterable[NounGroup]:
    run: list[tuple[str, str]] = []
    for c in (*s.cohorts, None):
        r = c.readings[0] if c is not None and len(c.readings) == 1 else None
        if r is not None and r.pos.text in NOUN_GROUP_POS:
            run.append((r.base.lower(), r.pos.text))
            continue
        while run and run[-1][1] != "N":
            run.pop()
        if len(run) >= 2:
            yield NounGroup(tuple(run))
        run = []


def extract_noun_groups(d: Document) -> set[NounGroup]:
    """Maximal runs of unambiguous A/N cohorts that end in a noun head."""
    return {g for s in d.sentences for g in _groups_in(s)}


def _fits(c: Cohort, lemma: str, pos: str) -> list[Reading]:
    return [r for r in c.readings if r.base.lower() == lemma and r.pos.text == pos]


def mark_sentence(s: Sentence, groups: Sequence[NounGroup]) -> Sentence:
    cohorts = list(s.cohorts)
    changed = False
    for g in groups:
        n = len(g.items)
        for start in range(len(cohorts) - n + 1):
            window = cohorts[start : start + n]
            fits = [_fits(c, lemma, pos) for c, (lemma, pos) in zip(window, g.items)]
            if not all(fits):
                continue
            for k, keep in enumerate(fits):
                c = cohorts[start + k]
                if len(keep) < len(c.readings):
                    cohorts[start + k] = c.replace(keep)
                    changed = True
    return Sentence(tuple(cohorts)) if changed else s


def mark_noun_groups(d: Document, groups: Iterable[NounGroup]) -> Document:
    """Resolve every instance of a known group (matched by lemma) to its noun-group readings."""
    ordered = sorted(groups, key=lambda g: (-len(g.items), g))
    return Document(tuple(mark_sentence(s, ordered) for s in d.sentences))


# ---------------------------------------------------------------- pipeline


@dataclass(frozen=True)
class TextConfig:
    engine: EngineConfig = EngineConfig()
    predominance: PredominanceConfig = PredominanceConfig()
    noun_groups: bool = True
    use_predominance: bool = True
    max_rounds: int = 10


@dataclass
class TextRun:
    document: Document
    groups: set[NounGroup]
    stats: LexStats
    stage_readings: list[tuple[str, int]]
    rounds: int


def _readings(d: Document) -> int:
    return sum(len(c.readings) for c in d.cohorts())


def _disambiguate_all(d: Document, g: Grammar, cfg: EngineConfig, executor: Executor | None) -> Document:
    work: Callable = executor.map if executor is not None else map
    runs = work(_disambiguate_one, d.sentences, [g] * len(d.sentences), [cfg] * len(d.sentences), range(len(d.sentences)))
    return Document(tuple(runs))


def _disambiguate_one(s: Sentence, g: Grammar, cfg: EngineConfig, i: int) -> Sentence:
    return disambiguate(s, g, cfg, i).sentence


def run_text_pipeline(
    d: Document,
    g: Grammar,
    cfg: TextConfig = TextConfig(),
    extra_groups: Iterable[NounGroup] = (),
    executor: Executor | None = None,
) -> TextRun:
    """Disambiguate, learn from the result, re-mark, disambiguate again.

    One round is: disambiguate; extract noun groups; mark them; disambiguate;
    collect statistics; resolve by predominance; disambiguate. Rounds repeat
    until a round changes nothing, so the result is a fixpoint of the pipeline.
    """
    extra = set(extra_groups)
    stages = [("input", _readings(d))]
    groups: set[NounGroup] = set(extra)
    stats = LexStats()
    rounds = 0
    for rounds in range(1, cfg.max_rounds + 1):
        start = d
        d = _disambiguate_all(d, g, cfg.engine, executor)
        stages.append((f"r{rounds}:disambiguate", _readings(d)))
        if cfg.noun_groups:
            groups = extract_noun_groups(d) | extra
            d = mark_noun_groups(d, groups)
            stages.append((f"r{rounds}:noun-groups", _readings(d)))
            d = _disambiguate_all(d, g, cfg.engine, executor)
            stages.append((f"r{rounds}:redisambiguate", _readings(d)))
        if cfg.use_predominance:
            stats = collect_lexical_stats(d, cfg.predominance.by_lemma)
            d = Document(tuple(
                Sentence(tuple(resolve_by_predominance(c, stats, cfg.predominance) for c in s.cohorts))
                for s in d.sentences
            ))
            stages.append((f"r{rounds}:predominance", _readings(d)))
            d = _disambiguate_all(d, g, cfg.engine, executor)
            stages.append((f"r{rounds}:final", _readings(d)))
        if d == start:
            break
    else:
        log.warning("text pipeline: no fixpoint after %d rounds", cfg.max_rounds)
    return TextRun(d, groups, stats, stages, rounds)


def text_disambiguate(d: Document, g: Grammar, cfg: TextConfig = TextConfig(), **kwargs) -> Document:
    return run_text_pipeline(d, g, cfg, **kwargs).document


__all__ = [
    "LexStats",
    "NounGroup",
    "PredominanceConfig",
    "TextConfig",
    "TextRun",
    "collect_lexical_stats",
    "extract_noun_groups",
    "format_noun_groups",
    "mark_noun_groups",
    "parse_noun_groups",
    "resolve_by_predominance",
    "run_text_pipeline",
    "text_disambiguate",
]
