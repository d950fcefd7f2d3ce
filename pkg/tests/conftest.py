from __future__ import annotations

import pytest

from surfparse import demo
from surfparse.core import Document
from surfparse.engine import disambiguate, map_syntax
from surfparse.lexicon import analyze, tokenize


@pytest.fixture(scope="session")
def lexicon():
    return demo.lexicon()


@pytest.fixture(scope="session")
def guesser():
    return demo.guesser()


@pytest.fixture(scope="session")
def grammar():
    return demo.grammar()


@pytest.fixture(scope="session")
def table_ambiguous() -> Document:
    return demo.cohorts("table_ambiguous.cohorts")


@pytest.fixture(scope="session")
def table_disambiguated() -> Document:
    return demo.cohorts("table_disambiguated.cohorts")


@pytest.fixture(scope="session")
def corpus(lexicon, guesser):
    """The 200 demo sentences, analysed."""
    return [analyze(lexicon, guesser, tokenize(line)) for line in demo.corpus_lines()]


@pytest.fixture(scope="session")
def mapped_corpus(corpus, grammar):
    """Demo sentences after strict disambiguation and function mapping."""
    return [map_syntax(disambiguate(s, grammar).sentence, grammar) for s in corpus]


@pytest.fixture(scope="session")
def fsig_grammar():
    from surfparse.fsig import load_fsig_grammar

    return load_fsig_grammar(demo.data_path("fsig.grammar"))


@pytest.fixture(scope="session")
def fsig_rules(fsig_grammar):
    from surfparse.fsig import compile_grammar

    return compile_grammar(fsig_grammar)
