from __future__ import annotations

import pytest

from surfparse import demo
from surfparse.core import Cohort, Document, Reading, Sentence
from surfparse.engine import disambiguate
from surfparse.lexicon import analyze_text, tokenize
from surfparse.rules import parse_grammar
from surfparse.text_heuristics import (
    LexStats,
    NounGroup,
    PredominanceConfig,
    TextConfig,
    collect_lexical_stats,
    extract_noun_groups,
    format_noun_groups,
    mark_noun_groups,
    parse_noun_groups,
    resolve_by_predominance,
    run_text_pipeline,
    text_disambiguate,
)

N = Reading.of("run", "N NOM SG")
V = Reading.of("run", "V PRES -SG3 VFIN")
RUN_NV = Cohort("run", (N, V))


def doc_of(*cohorts: Cohort) -> Document:
    return Document((Sentence(tuple(cohorts)),))


def test_collect_counts_unambiguous_cohorts_only():
    d = doc_of(*[Cohort("run", (N,))] * 6, *[Cohort("*run", (V,))] * 2, RUN_NV, Cohort("$.", ()))
    assert collect_lexical_stats(d).counts == {("run", "N"): 6, ("run", "V"): 2}
    assert len(collect_lexical_stats(doc_of(RUN_NV))) == 0


def test_stats_tsv():
    assert LexStats({("run", "N"): 6, ("run", "V"): 2}).to_tsv() == "run\tN\t6\nrun\tV\t2\n"


@pytest.mark.parametrize("n, v, kept", [(6, 2, "N"), (5, 3, None), (4, 2, "N"), (2, 4, "V"), (3, 3, None)])
def test_predominance_threshold(n, v, kept):
    st = LexStats({("run", "N"): n, ("run", "V"): v})
    out = resolve_by_predominance(RUN_NV, st)
    assert [r.pos.text for r in out.readings] == ([kept] if kept else ["N", "V"])


def test_predominance_needs_both_counts():
    assert resolve_by_predominance(RUN_NV, LexStats({("run", "N"): 9})) == RUN_NV


def test_predominance_only_for_eligible_classes():
    a = Reading.of("run", "A ABS")
    c = Cohort("run", (N, a))
    st = LexStats({("run", "N"): 9, ("run", "A"): 1})
    assert resolve_by_predominance(c, st) == c
    cfg = PredominanceConfig(eligible=frozenset({frozenset({"N", "A"})}))
    assert resolve_by_predominance(c, st, cfg).readings == (N,)


def test_predominance_by_lemma():
    st = LexStats({("run", "N"): 4, ("run", "V"): 1}, by_lemma=True)
    c = Cohort("runs", (Reading.of("run", "N NOM PL"), Reading.of("run", "V PRES SG3 VFIN")))
    assert [r.pos.text for r in resolve_by_predominance(c, st).readings] == ["N"]


def test_threshold_below_one_rejected():
    with pytest.raises(ValueError):
        PredominanceConfig(threshold=0.5)


def _np(*pairs: str) -> list[Cohort]:
    out = []
    for p in pairs:
        base, pos = p.split("/")
        spec = {"N": "N NOM SG", "A": "A ABS", "DET": "DET CENTRAL", "V": "V PRES SG3 VFIN"}[pos]
        out.append(Cohort(base, (Reading.of(base, spec),)))
    return out


def test_extract_noun_groups():
    s = _np("the/DET", "old/A", "cylinder/N", "head/N", "cracks/V", "the/DET", "old/A", "cylinder/N", "head/N")
    d = Document((Sentence(tuple(s)), Sentence(tuple(s))))
    groups = extract_noun_groups(d)
    assert groups == {NounGroup((("old", "A"), ("cylinder", "N"), ("head", "N")))}


def test_group_ends_at_last_noun():
    s = _np("cylinder/N", "head/N", "old/A", "cracks/V")
    assert extract_noun_groups(Document((Sentence(tuple(s)),))) == {NounGroup((("cylinder", "N"), ("head", "N")))}


def test_single_noun_is_not_a_group():
    assert extract_noun_groups(Document((Sentence(tuple(_np("the/DET", "head/N"))),))) == set()


def test_noun_group_validation_and_file_format():
    with pytest.raises(ValueError):
        NounGroup((("head", "N"),))
    with pytest.raises(ValueError):
        NounGroup((("head", "N"), ("old", "A")))
    groups = parse_noun_groups("# groups\ncylinder/N head/N\nold/A engine/N\n")
    assert format_noun_groups(groups) == "cylinder/N head/N\nold/A engine/N\n"
    with pytest.raises(ValueError):
        parse_noun_groups("cylinder head\n")


def test_marking_matches_inflected_forms():
    heads = Cohort("heads", (Reading.of("head", "N NOM PL"), Reading.of("head", "V PRES SG3 VFIN")))
    cyl = Cohort("cylinder", (Reading.of("cylinder", "N NOM SG"),))
    d = Document((Sentence((cyl, heads)), Sentence((Cohort("we", (Reading.of("we", "PRON"),)), heads))))
    out = mark_noun_groups(d, {NounGroup((("cylinder", "N"), ("head", "N")))})
    assert [r.pos.text for r in out.sentences[0].cohorts[1].readings] == ["N"]
    assert out.sentences[1] == d.sentences[1]


@pytest.fixture(scope="module")
def cylinder(lexicon, guesser):
    text = demo.data_path("cylinder.txt").read_text(encoding="utf-8")
    return Document(tuple(analyze_text(lexicon, guesser, tokenize(text))))


def test_cylinder_pipeline(cylinder, grammar):
    run = run_text_pipeline(cylinder, grammar)
    assert NounGroup((("cylinder", "N"), ("head", "N"))) in run.groups
    head = run.document.sentences[1].cohorts[2]
    assert [r.pos.text for r in head.readings] == ["N"]
    # readings never increase from stage to stage
    counts = [n for _, n in run.stage_readings]
    assert counts == sorted(counts, reverse=True)


def test_pipeline_is_idempotent(cylinder, grammar):
    once = text_disambiguate(cylinder, grammar)
    assert text_disambiguate(once, grammar) == once


def test_pipeline_without_collocations_equals_plain(grammar):
    g = parse_grammar("REMOVE (V) IF (-1C (DET)) ;")
    d = doc_of(Cohort("the", (Reading.of("the", "DET"),)), RUN_NV)
    plain = Document(tuple(disambiguate(s, g).sentence for s in d))
    assert text_disambiguate(d, g) == plain


def test_text_generic_groups(lexicon, guesser, grammar):
    # groups learnt elsewhere apply to a document that never shows them unambiguously
    d = Document(tuple(analyze_text(lexicon, guesser, tokenize("Cylinder heads crack often ."))))
    plain = text_disambiguate(d, grammar, TextConfig(use_predominance=False))
    assert len(plain.sentences[0].cohorts[1].readings) == 2
    extra = {NounGroup((("cylinder", "N"), ("head", "N")))}
    out = text_disambiguate(d, grammar, TextConfig(use_predominance=False), extra_groups=extra)
    assert [r.pos.text for r in out.sentences[0].cohorts[1].readings] == ["N"]
