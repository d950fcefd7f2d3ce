from __future__ import annotations

import itertools

import numpy as np
import pytest

from surfparse import demo
from surfparse.core import Cohort, Reading, Sentence, serialize_sentence
from surfparse.fsig import (
    BoundExceeded,
    ContextBlowup,
    DecodeError,
    ImplicationRule,
    Penalty,
    RegexSyntaxError,
    brute_force_filter,
    compile_grammar,
    compile_implication,
    compile_rule,
    enumerate_parses,
    intersect_all,
    load_penalty,
    parse_fsig_grammar,
    parse_regex,
    select_parse,
    sentence_to_automaton,
)
from surfparse.fsig.oracle import Oracle
from surfparse.fsig.parse import decode, encode_parse, encode_reading, iter_paths, merge_parses, parse_penalty


def word(form: str, *specs: str) -> Cohort:
    return Cohort(form, tuple(Reading.of(form, s) for s in specs))


STOP = Cohort("$.", ())
TOY = Sentence((word("time", "N NOM SG", "V IMP VFIN"), word("flies", "N NOM PL", "V PRES SG3 VFIN"), STOP))


def test_encoding():
    assert encode_reading(Reading.of("time", "N NOM SG @SUBJ")) == ('"time"', "N", "NOM", "SG", "@SUBJ")
    single = Sentence((word("time", "N NOM SG"), STOP))
    assert encode_parse(single) == ("@@", '"time"', "N", "NOM", "SG", "@", '"<$.>"', "@@")
    with pytest.raises(ValueError):
        encode_parse(TOY)


def test_sentence_automaton_has_one_path_per_combination(table_ambiguous):
    s = table_ambiguous.sentences[0]
    a = sentence_to_automaton(s)
    assert a.count_paths() == s.combinations == 2000


def test_paths_are_shortlex_and_decode():
    a = sentence_to_automaton(TOY)
    paths = list(iter_paths(a))
    assert len(paths) == 4
    assert paths == sorted(paths, key=lambda p: (len(p), p))
    parses = [decode(p, TOY) for p in paths]
    assert len(set(parses)) == 4 and all(len(c.readings) <= 1 for p in parses for c in p)


def test_decode_rejects_foreign_paths():
    with pytest.raises(DecodeError):
        decode(("@@", '"time"', "V", "@@"), TOY)
    with pytest.raises(DecodeError):
        decode(('"time"',), TOY)


def test_enumeration_limit_is_stable(table_ambiguous):
    s = table_ambiguous.sentences[0]
    a = sentence_to_automaton(s)
    first = enumerate_parses(a, s, 10)
    assert len(first) == 10 and first == enumerate_parses(a, s, 10)


def test_reject_rule_and_intersection():
    rules = [compile_rule(parse_regex("~[.* VFIN .* VFIN .*]")), compile_rule(parse_regex(".* VFIN .*"))]
    a = intersect_all(sentence_to_automaton(TOY), rules)
    got = {tuple(c.readings[0].pos.text for c in p.cohorts[:2]) for p in enumerate_parses(a, TOY)}
    assert got == {("N", "V"), ("V", "N")}


GRAMMAR = """\
DEF W = ~[.* [@ | @@] .*] ;
REJECT "two-verbs": .* VFIN .* VFIN .* ;
RULE "imp": IMP => @@ W _ .* ;
RULE "pl-subj": PL => _ W @ W SG3 .* , .* DET W @ W _ ;
REJECT ~[.* VFIN .*] ;
"""


def test_parse_fsig_grammar():
    g = parse_fsig_grammar(GRAMMAR)
    assert [r.name for r in g.rules] == ["two-verbs", "imp", "pl-subj", "reject5"]
    assert len(g.rules[2].contexts) == 2
    assert "W" in g.defs


@pytest.mark.parametrize(
    "text, message",
    [
        ('REJECT "a": x ; REJECT "a": y ;', "duplicate"),
        ("RULE x => ;", "'_'"),
        ("FOO x ;", "unknown statement"),
        ("DEF = x ;", "expected '='"),
        ("RULE x => " + " , ".join(["a _ b"] * 13) + " ;", "contexts"),
    ],
)
def test_fsig_grammar_errors(text, message):
    with pytest.raises(RegexSyntaxError, match=message):
        parse_fsig_grammar(text)


def test_context_blowup_guard():
    ctx = tuple((parse_regex("a"), parse_regex("b")) for _ in range(13))
    with pytest.raises(ContextBlowup):
        compile_implication(ImplicationRule("big", parse_regex("x"), ctx))
    with pytest.raises(ValueError):
        ImplicationRule("none", parse_regex("x"), ())


def test_implication_matches_definition():
    g = parse_fsig_grammar("RULE \"r\": a => b _ , _ c c ;")
    d = compile_rule(g.rules[0])
    strings = [w for n in range(6) for w in itertools.product("abc", repeat=n)]
    want = Oracle(strings).holds(g.rules[0])
    got = np.array([d.accepts(w) for w in strings])
    assert np.array_equal(got, want)
    assert d.accepts("ba") and d.accepts("acc") and not d.accepts("ab") and not d.accepts("cba")


def test_toy_grammar_against_brute_force():
    g = parse_fsig_grammar(GRAMMAR)
    a = intersect_all(sentence_to_automaton(TOY), compile_grammar(g))
    assert set(enumerate_parses(a, TOY)) == brute_force_filter(TOY, g.rules)


def test_bound_is_enforced(table_ambiguous):
    with pytest.raises(BoundExceeded):
        brute_force_filter(table_ambiguous.sentences[0], [], bound=100)


def test_merge_parses():
    a = sentence_to_automaton(TOY)
    parses = enumerate_parses(a, TOY)[:2]
    merged = merge_parses(TOY, parses)
    assert all(c.readings for c in merged.cohorts if not c.is_punct)
    assert merge_parses(TOY, enumerate_parses(a, TOY)) == TOY


def test_penalty_table_format():
    p = parse_penalty("# weights\n<Heur> 3\nPRON 1  # rare\n")
    assert p.cost("<Heur>") == 3 and p.cost("N") == 0
    with pytest.raises(ValueError):
        parse_penalty("<Heur> -1\n")
    with pytest.raises(ValueError):
        parse_penalty("<Heur>\n")
    with pytest.raises(ValueError):
        Penalty({"x": -1})


def test_zero_cost_tie_goes_to_shortlex_smallest():
    a = sentence_to_automaton(TOY)
    chosen = select_parse(a, TOY, Penalty())
    assert chosen == decode(next(iter_paths(a)), TOY)
    assert select_parse(a, TOY, Penalty()) == chosen


def test_heuristic_readings_lose():
    guessed = Reading.of("flies", "N NOM PL <Heur>")
    s = Sentence((word("time", "N NOM SG"), Cohort("flies", (guessed, Reading.of("flies", "V PRES SG3 VFIN"))), STOP))
    chosen = select_parse(sentence_to_automaton(s), s)
    assert not chosen.cohorts[1].readings[0].is_heuristic


def test_empty_intersection_selects_nothing():
    a = intersect_all(sentence_to_automaton(TOY), [compile_rule(parse_regex("~[.*]"))])
    assert select_parse(a, TOY) is None and enumerate_parses(a, TOY) == []


def test_table_sentence_selection_matches_golden_file(table_ambiguous, fsig_rules):
    s = table_ambiguous.sentences[0]
    a = intersect_all(sentence_to_automaton(s), fsig_rules)
    chosen = select_parse(a, s, load_penalty(demo.data_path("penalty.txt")))
    assert serialize_sentence(chosen) == demo.data_path("table_fsig_one.cohorts").read_text(encoding="utf-8")
    assert len(enumerate_parses(a, s)) == 36
