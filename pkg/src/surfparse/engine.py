"""Reductionistic application of a constraint set to fixpoint."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import Document, Origin, Reading, Sentence, format_reading, iter_cohorts
from .rules import Constraint, ContextCondition, Grammar, MappingRule, Op, Pattern

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineConfig:
    max_passes: int = 100
    apply_heuristic_tier: bool = False
    trace: bool = False

    def __post_init__(self):
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")


@dataclass(frozen=True)
class TraceEvent:
    rule: str
    sentence: int
    cohort: int
    removed: tuple[Reading, ...]
    pass_no: int

    def format(self) -> str:
        removed = " ".join(format_reading(r) for r in self.removed)
        return f"PASS {self.pass_no}  RULE {self.rule}  SENT {self.sentence}  COHORT {self.cohort}  REMOVED {removed}"


@dataclass
class EngineRun:
    sentence: Sentence
    events: list[TraceEvent] = field(default_factory=list)
    passes: int = 0
    converged: bool = True
    removals: int = 0

    def __iter__(self):
        # allows ``sentence, trace = disambiguate(...)``
        return iter((self.sentence, self.events))


# Working state: a list of reading lists, one per cohort; punctuation cohorts hold [].
_State = list


def _any_match(readings: Sequence[Reading], pattern: Pattern, careful: bool) -> bool:
    if careful:
        return len(readings) == 1 and pattern.matches(readings[0])
    return any(pattern.matches(r) for r in readings)


def _match(state: _State, i: int, c: ContextCondition) -> bool:
    n = len(state)
    start = i + c.offset
    if not 0 <= start < n:
        return c.negated
    if not c.scan:
        return _any_match(state[start], c.pattern, c.careful) != c.negated
    step = 1 if c.offset > 0 else -1
    j = start
    found = False
    while 0 <= j < n:
        readings = state[j]
        if not readings:  # punctuation cohorts are hard barriers
            break
        if _any_match(readings, c.pattern, c.careful):
            found = True
            break
        if j != start and c.barrier is not None and _any_match(readings, c.barrier, False):
            break
        j += step
    return found != c.negated


def match_condition(s: Sentence, i: int, c: ContextCondition) -> bool:
    """Evaluate one context condition for the cohort at index ``i``."""
    if not 0 <= i < len(s):
        raise IndexError(i)
    return _match([list(co.readings) for co in s.cohorts], i, c)


def _apply(state: _State, k: Constraint, sent_no: int, pass_no: int, events: list | None) -> int:
    removed_total = 0
    for i, readings in enumerate(state):
        if len(readings) < 2:
            continue
        hits = [k.target.matches(r) for r in readings]
        if not any(hits):
            continue
        if k.op is Op.REMOVE:
            keep = [r for r, h in zip(readings, hits) if not h]
            drop = [r for r, h in zip(readings, hits) if h]
        else:
            keep = [r for r, h in zip(readings, hits) if h]
            drop = [r for r, h in zip(readings, hits) if not h]
        if not keep or not drop:
            continue
        if not all(_match(state, i, c) for c in k.conditions):
            continue
        state[i] = keep
        removed_total += len(drop)
        if events is not None:
            events.append(TraceEvent(k.id, sent_no, i, tuple(drop), pass_no))
    return removed_total


def _to_state(s: Sentence) -> _State:
    return [list(c.readings) for c in s.cohorts]


def _from_state(s: Sentence, state: _State) -> Sentence:
    return Sentence(tuple(c if len(c.readings) == len(r) else c.replace(r) for c, r in zip(s.cohorts, state)))


def apply_constraint(s: Sentence, k: Constraint, sent_no: int = 0, pass_no: int = 1):
    """Apply one constraint left to right; returns (sentence, removals, events)."""
    state = _to_state(s)
    events: list[TraceEvent] = []
    n = _apply(state, k, sent_no, pass_no, events)
    return _from_state(s, state), n, events


def _run_tier(state, rules, sent_no, cfg, run: EngineRun, events) -> None:
    for _ in range(cfg.max_passes):
        run.passes += 1
        removed = sum(_apply(state, k, sent_no, run.passes, events) for k in rules)
        run.removals += removed
        if removed == 0:
            return
    run.converged = False


def disambiguate(s: Sentence, g: Grammar, cfg: EngineConfig = EngineConfig(), sent_no: int = 0) -> EngineRun:
    """Run the strict tier to fixpoint; optionally the heuristic tier, then strict again."""
    state = _to_state(s)
    events: list[TraceEvent] | None = [] if cfg.trace else None
    run = EngineRun(s)
    _run_tier(state, g.strict, sent_no, cfg, run, events)
    if cfg.apply_heuristic_tier and g.heuristic:
        before = run.removals
        _run_tier(state, g.heuristic, sent_no, cfg, run, events)
        if run.removals > before:
            _run_tier(state, g.strict, sent_no, cfg, run, events)
    if not run.converged:
        log.warning("sentence %d: pass limit %d reached before fixpoint", sent_no, cfg.max_passes)
    run.sentence = _from_state(s, state)
    run.events = events or []
    return run


def disambiguate_document(doc: Document, g: Grammar, cfg: EngineConfig = EngineConfig()) -> tuple[Document, list[EngineRun]]:
    runs = [disambiguate(s, g, cfg, i) for i, s in enumerate(doc.sentences)]
    return Document(tuple(r.sentence for r in runs)), runs


# ---------------------------------------------------------------- mapping


def _mapping_variants(r: Reading, tags_to_add) -> list[Reading]:
    fresh = [t for t in tags_to_add if t not in r.tagset]
    if not fresh:
        return [r]
    morph = r.morph_tags
    variants = [r] if r.synfuncs else []
    variants += [Reading(r.base, morph + (t,), Origin.MAPPED) for t in fresh]
    return variants


def map_syntax(s: Sentence, g: Grammar | Iterable[MappingRule]) -> Sentence:
    """Introduce syntactic-function alternatives: one reading variant per added tag."""
    rules = g.mappings if isinstance(g, Grammar) else tuple(g)
    if not rules:
        return s
    state = _to_state(s)
    out = []
    for i, cohort in enumerate(s.cohorts):
        readings = []
        for r in cohort.readings:
            add = []
            for m in rules:
                if m.target.matches(r) and all(_match(state, i, c) for c in m.context):
                    add.extend(t for t in m.add if t not in add)
            readings.extend(_mapping_variants(r, add))
        out.append(cohort.replace(dict.fromkeys(readings)) if readings != list(cohort.readings) else cohort)
    return Sentence(tuple(out))


# ---------------------------------------------------------------- trace replay

_TRACE_LINE = re.compile(r"^PASS (\d+)\s+RULE (\S+)\s+SENT (\d+)\s+COHORT (\d+)\s+REMOVED (.*)$")


def format_trace(events: Iterable[TraceEvent]) -> str:
    return "".join(e.format() + "\n" for e in events)


def parse_trace(text: str) -> list[TraceEvent]:
    events = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        m = _TRACE_LINE.match(line)
        if not m:
            raise ValueError(f"trace line {lineno}: cannot parse {line!r}")
        # wrap the reading list as a pseudo-cohort to reuse the reading parser
        cohorts = list(iter_cohorts('("<x>" ' + m.group(5) + ")", f"<trace:{lineno}>"))
        events.append(TraceEvent(m.group(2), int(m.group(3)), int(m.group(4)), cohorts[0].readings, int(m.group(1))))
    return events


def replay_trace(doc: Document, events: Iterable[TraceEvent]) -> Document:
    """Delete the recorded readings from ``doc``; reproduces the engine output."""
    sentences = [_to_state(s) for s in doc.sentences]
    for e in events:
        readings = sentences[e.sentence][e.cohort]
        for r in e.removed:
            readings.remove(r)
    return Document(tuple(_from_state(s, st) for s, st in zip(doc.sentences, sentences)))


__all__ = [
    "EngineConfig",
    "EngineRun",
    "TraceEvent",
    "apply_constraint",
    "disambiguate",
    "disambiguate_document",
    "format_trace",
    "map_syntax",
    "match_condition",
    "parse_trace",
    "replay_trace",
]