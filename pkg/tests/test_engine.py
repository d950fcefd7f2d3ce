from __future__ import annotations

import logging

import pytest

from surfparse.core import Cohort, Document, Reading, Sentence, serialize_cohort_stream
from surfparse.engine import (
    EngineConfig,
    apply_constraint,
    disambiguate,
    format_trace,
    map_syntax,
    match_condition,
    parse_trace,
    replay_trace,
)
from surfparse.rules import parse_condition, parse_grammar


def sent(*words: str) -> Sentence:
    """Words like ``"the:DET"`` or ``"run:N NOM|V INF"``; ``"."`` is punctuation."""
    cohorts = []
    for w in words:
        if w in ".,":
            cohorts.append(Cohort("$" + w, ()))
            continue
        form, specs = w.split(":")
        cohorts.append(Cohort(form, tuple(Reading.of(form, s) for s in specs.split("|"))))
    return Sentence(tuple(cohorts))


def pos(s: Sentence) -> list[str]:
    return ["/".join(r.pos.text for r in c.readings) for c in s.cohorts if not c.is_punct]


def test_remove_and_select():
    g = parse_grammar("REMOVE (V) IF (-1C (DET)) ;")
    out = disambiguate(sent("the:DET", "run:N NOM|V INF"), g).sentence
    assert pos(out) == ["DET", "N"]
    g = parse_grammar("SELECT (V) IF (-1C (AUXMOD)) ;")
    out = disambiguate(sent("can:V AUXMOD", "run:N NOM|V INF|A"), g).sentence
    assert pos(out) == ["V", "V"]


def test_last_reading_is_never_removed():
    g = parse_grammar("REMOVE (N) ;\nREMOVE (V) ;")
    out = disambiguate(sent("run:N NOM|V INF"), g).sentence
    assert len(out.cohorts[0].readings) == 1


def test_careful_needs_unambiguous_context():
    g = parse_grammar("REMOVE (V) IF (-1C (DET)) ;")
    s = sent("that:DET|PRON", "run:N NOM|V INF")
    assert pos(disambiguate(s, g).sentence) == ["DET/PRON", "N/V"]
    g = parse_grammar("REMOVE (V) IF (-1 (DET)) ;")
    assert pos(disambiguate(s, g).sentence) == ["DET/PRON", "N"]


def test_negated_condition_outside_sentence_holds():
    s = sent("run:N NOM|V INF")
    assert match_condition(s, 0, parse_condition("(NOT -1 (DET))"))
    assert not match_condition(s, 0, parse_condition("(-1 (DET))"))


def test_scan_barrier_is_literal():
    # the barrier stops the scan as soon as any reading of a cohort matches it
    s = sent("run:N|V", "old:A", "and:CC|ADV", "go:V VFIN")
    assert not match_condition(s, 0, parse_condition("(*1 (VFIN) BARRIER (CC))"))
    assert match_condition(s, 0, parse_condition("(*1 (VFIN) BARRIER (CS))"))
    assert match_condition(s, 0, parse_condition("(*1 (VFIN))"))


def test_scan_stops_at_punctuation():
    s = sent("run:N|V", ",", "go:V VFIN")
    assert not match_condition(s, 0, parse_condition("(*1 (VFIN))"))


def test_scan_start_cohort_is_not_a_barrier():
    s = sent("x:N", "and:CC VFIN", "go:V")
    assert match_condition(s, 0, parse_condition("(*1 (VFIN) BARRIER (CC))"))


def test_heuristic_tier_runs_only_when_enabled():
    g = parse_grammar("SECTION heuristic ;\nREMOVE (V) ;")
    s = sent("run:N NOM|V INF")
    assert pos(disambiguate(s, g).sentence) == ["N/V"]
    assert pos(disambiguate(s, g, EngineConfig(apply_heuristic_tier=True)).sentence) == ["N"]


def test_heuristic_removals_reopen_strict_tier():
    g = parse_grammar("REMOVE (V) IF (-1C (DET)) ;\nSECTION heuristic ;\nREMOVE (PRON) ;")
    s = sent("that:DET|PRON", "run:N NOM|V INF")
    out = disambiguate(s, g, EngineConfig(apply_heuristic_tier=True)).sentence
    assert pos(out) == ["DET", "N"]


def test_pass_limit_is_a_diagnostic(caplog):
    # rules run left to right, so a chain growing leftwards resolves one cohort per pass
    g = parse_grammar("REMOVE (V) IF (1C (N)) ;")
    s = sent(*[f"w{i}:N|V" for i in range(5)], "a:N")
    with caplog.at_level(logging.WARNING):
        run = disambiguate(s, g, EngineConfig(max_passes=2))
    assert not run.converged
    assert "pass limit" in caplog.text
    full = disambiguate(s, g)
    assert full.converged and pos(full.sentence) == ["N"] * 6


def test_max_passes_must_be_positive():
    with pytest.raises(ValueError):
        EngineConfig(max_passes=0)


def test_apply_constraint_reports_removals():
    g = parse_grammar("REMOVE:x (V) IF (-1C (DET)) ;")
    out, n, events = apply_constraint(sent("the:DET", "run:N|V INF|V PRES"), g.strict[0])
    assert n == 2 and [e.rule for e in events] == ["x"]


def test_trace_round_trip_and_replay(corpus, grammar):
    doc = Document(tuple(corpus[:40]))
    runs = [disambiguate(s, grammar, EngineConfig(trace=True), i) for i, s in enumerate(doc)]
    events = [e for r in runs for e in r.events]
    text = format_trace(events)
    assert parse_trace(text) == events
    replayed = replay_trace(doc, parse_trace(text))
    assert serialize_cohort_stream(replayed) == serialize_cohort_stream(r.sentence for r in runs)


def test_idempotent(corpus, grammar):
    once = [disambiguate(s, grammar).sentence for s in corpus[:50]]
    twice = [disambiguate(s, grammar).sentence for s in once]
    assert once == twice


def test_never_empties_a_word_cohort(corpus, grammar):
    cfg = EngineConfig(apply_heuristic_tier=True)
    for s in corpus:
        out = disambiguate(s, grammar, cfg).sentence
        assert all(c.readings for c in out.cohorts if not c.is_punct)


def test_table_sentence_listing(table_ambiguous, table_disambiguated, grammar):
    out = disambiguate(table_ambiguous.sentences[0], grammar).sentence
    assert serialize_cohort_stream(out) == serialize_cohort_stream(table_disambiguated)


def test_map_syntax_adds_function_variants():
    g = parse_grammar("MAP (@SUBJ @OBJ) TARGET (N NOM) ;\nMAP (@<P) TARGET (N) IF (-1 (PREP)) ;")
    s = sent("by:PREP", "boy:N NOM SG")
    out = map_syntax(s, g).cohorts[1].readings
    assert [r.synfuncs[0].text for r in out] == ["@SUBJ", "@OBJ", "@<P"]
    assert map_syntax(s, parse_grammar("")) == s


def test_map_keeps_existing_function():
    g = parse_grammar("MAP (@SUBJ) TARGET (N) ;")
    s = Sentence((Cohort("x", (Reading.of("x", "N @OBJ"),)),))
    assert [r.synfuncs[0].text for r in map_syntax(s, g).cohorts[0].readings] == ["@OBJ", "@SUBJ"]
