from __future__ import annotations

import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfparse import demo
from surfparse.core import (
    Cohort,
    CohortSyntaxError,
    Document,
    Origin,
    Reading,
    Sentence,
    TagKind,
    display_to_surface,
    intern_tag,
    parse_cohort_stream,
    parse_tagset,
    serialize_cohort_stream,
    surface_to_display,
)


@pytest.mark.parametrize("name", ["table_ambiguous.cohorts", "table_disambiguated.cohorts", "cylinder_gold.cohorts"])
def test_round_trip_is_byte_exact(name):
    text = demo.data_path(name).read_text(encoding="utf-8")
    assert serialize_cohort_stream(parse_cohort_stream(text)) == text


def test_tag_kinds():
    assert intern_tag("N").kind is TagKind.POS
    assert intern_tag("@SUBJ").kind is TagKind.SYNFUNC
    assert intern_tag("<SVO>").kind is TagKind.LEXFEATURE
    assert intern_tag("<Heur>").kind is TagKind.HEURFLAG
    assert intern_tag("<**CLB>").kind is TagKind.BOUNDARY
    assert intern_tag("NOM").kind is TagKind.FEATURE


def test_tags_are_interned_and_pickle_to_the_same_object():
    t = intern_tag("AUXMOD")
    assert intern_tag("AUXMOD") is t
    assert pickle.loads(pickle.dumps(t)) is t


def test_reading_needs_exactly_one_pos():
    with pytest.raises(ValueError, match="exactly one POS"):
        Reading.of("x", "N V")
    with pytest.raises(ValueError, match="exactly one POS"):
        Reading.of("x", "NOM SG")


def test_function_tags_trail():
    r = Reading.of("table", "@SUBJ N NOM SG")
    assert [t.text for t in r.tags] == ["N", "NOM", "SG", "@SUBJ"]


def test_guessed_reading_must_be_flagged():
    with pytest.raises(ValueError, match="heuristic flag"):
        Reading.of("blorp", "N NOM SG", Origin.GUESSER)
    assert Reading.of("blorp", "N NOM SG <Heur>", Origin.GUESSER).is_heuristic


def test_origin_does_not_affect_equality():
    assert Reading.of("a", "N <Heur>", Origin.GUESSER) == Reading.of("a", "N <Heur>")


def test_word_cohort_needs_readings():
    with pytest.raises(ValueError):
        Cohort.from_surface("table")
    assert Cohort.from_surface(".", punct=True).display_form == "$."


@pytest.mark.parametrize(
    "surface, display",
    [("That", "*that"), ("table", "table"), ("NATO", "NATO"), ("iPod", "iPod")],
)
def test_display_forms(surface, display):
    assert surface_to_display(surface) == display
    assert display_to_surface(display) == surface


def test_combinations():
    doc = demo.cohorts("table_ambiguous.cohorts")
    assert doc.sentences[0].combinations == 5 * 8 * 5 * 2 * 5


def test_sentences_split_at_delimiters():
    text = '("<a>"\n  ("a" DET))\n("<$.>")\n("<b>"\n  ("b" N))\n("<$!>")\n("<c>"\n  ("c" N))\n'
    doc = parse_cohort_stream(text)
    assert [len(s) for s in doc] == [2, 2, 1]


@pytest.mark.parametrize(
    "text, line",
    [
        ('("<a>"\n  ("a" DET)\n', 3),
        ('("<a>"\n  ("a"))\n', 2),
        ('("<a>"\n  ("a" N V))\n', 2),
        ('("<a>" ("a" N) junk)\n', 1),
    ],
)
def test_syntax_errors_carry_positions(text, line):
    with pytest.raises(CohortSyntaxError) as err:
        parse_cohort_stream(text, source="t.cohorts")
    assert err.value.line == line
    assert str(err.value).startswith("t.cohorts:")


def test_tagset_declares_kinds():
    ts = parse_tagset("# demo\nN POS\nNOM FEATURE\n@SUBJ SYNFUNC\n")
    assert "NOM" in ts and "@SUBJ" in ts
    assert len(ts) == 3
    with pytest.raises(CohortSyntaxError):
        parse_tagset("N POS extra\n")


_bases = st.text(alphabet="abcxyz\"\\ ", min_size=1, max_size=6)
_readings = st.builds(
    lambda b, pos, feats, syn: Reading.of(b, " ".join([pos, *feats, *syn])),
    _bases,
    st.sampled_from(["N", "V", "A", "ADV", "PRON"]),
    st.lists(st.sampled_from(["NOM", "SG", "PL", "<SVO>", "<Heur>", "<**CLB>"]), unique=True, max_size=3),
    st.lists(st.sampled_from(["@SUBJ", "@OBJ"]), unique=True, max_size=2),
)
_words = st.builds(
    lambda form, rs: Cohort(form, tuple(dict.fromkeys(rs))),
    st.sampled_from(["table", "*that", "run-up", "o'clock"]),
    st.lists(_readings, min_size=1, max_size=4),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(_words, min_size=1, max_size=6))
def test_serialize_parse_round_trip(words):
    doc = Document((Sentence(tuple(words) + (Cohort("$.", ()),)),))
    text = serialize_cohort_stream(doc)
    assert parse_cohort_stream(text) == doc
    assert serialize_cohort_stream(parse_cohort_stream(text)) == text
