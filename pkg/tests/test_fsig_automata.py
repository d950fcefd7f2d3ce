from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfparse.fsig import RegexSyntaxError, compile_regex, parse_regex
from surfparse.fsig.automaton import complement, intersect, symbol, union, universal
from surfparse.fsig.oracle import Batch, regex_member
from surfparse.fsig.regex import AnySym, Complement, Concat, Diff, Epsilon, Intersect, Optional, Plus, Star, Sym, Union

STRINGS = [w for n in range(6) for w in itertools.product("abc", repeat=n)]


def dfa_member(d, strings):
    b = Batch.of(strings, {"a": 0, "b": 1, "c": 2, "z": 3})
    return d.accepts_many(b.codes, b.lengths, list(b.index))


@pytest.mark.parametrize(
    "src, accepted, rejected",
    [
        ("a b*", ["a", "abb"], ["", "ba"]),
        ("[a | b]+ & ~[.* a a .*]", ["ab", "aba"], ["", "aab"]),
        (".* - [.* c .*]", ["", "ab"], ["c", "acb"]),
        ("a? c", ["c", "ac"], ["a", "aac"]),
        ("~[]", ["a"], [""]),
        ("[] | z", ["", "z"], ["a"]),
    ],
)
def test_compiled_languages(src, accepted, rejected):
    d = compile_regex(parse_regex(src))
    assert all(d.accepts(w) for w in accepted)
    assert not any(d.accepts(w) for w in rejected)


def test_symbols_outside_the_alphabet_use_other():
    d = compile_regex(parse_regex(". a"))
    assert d.accepts(["zzz", "a"]) and not d.accepts(["a", "zzz"])


def test_quoted_and_angle_symbols():
    r = parse_regex('"table" <**CLB> @SUBJ')
    assert r == Concat((Sym('"table"'), Sym("<**CLB>"), Sym("@SUBJ")))


@pytest.mark.parametrize("src", ["a ~", "(a", "a )", "=> a", "a ; b", "[a b"])
def test_regex_syntax_errors(src):
    with pytest.raises(RegexSyntaxError):
        parse_regex(src)


def test_minimal_automata_are_canonical():
    assert compile_regex(parse_regex("a b | a c")) == compile_regex(parse_regex("a [b | c]"))
    assert compile_regex(parse_regex("[a*]*")) == compile_regex(parse_regex("a*"))
    assert compile_regex(parse_regex("~~[a b]")) == compile_regex(parse_regex("a b"))


def test_boolean_operations():
    a, b = symbol("a"), symbol("b")
    assert union(a, b).accepts(["b"])
    assert intersect(a, b).is_empty()
    assert complement(universal()).is_empty()


def test_path_counts():
    assert compile_regex(parse_regex("[a | b] [a | b | c]")).count_paths() == 6
    assert compile_regex(parse_regex("a*")).count_paths() is None
    assert compile_regex(parse_regex("a*")).is_finite() is False


_leaf = st.sampled_from([Sym("a"), Sym("b"), Sym("c"), AnySym(), Epsilon()])


def _extend(children):
    pair = st.tuples(children, children)
    return st.one_of(
        pair.map(lambda p: Concat(p)),
        pair.map(lambda p: Union(p)),
        pair.map(lambda p: Intersect(p)),
        pair.map(lambda p: Diff(*p)),
        children.map(Complement),
        children.map(Star),
        children.map(Plus),
        children.map(Optional),
    )


regexes = st.recursive(_leaf, _extend, max_leaves=8)


@settings(max_examples=300, deadline=None)
@given(regexes)
def test_compiler_agrees_with_span_semantics(r):
    d = compile_regex(r)
    assert np.array_equal(dfa_member(d, STRINGS), regex_member(r, STRINGS))


@settings(max_examples=100, deadline=None)
@given(regexes, regexes)
def test_de_morgan(r, s):
    left = compile_regex(Complement(Union((r, s))))
    right = compile_regex(Intersect((Complement(r), Complement(s))))
    assert left == right
