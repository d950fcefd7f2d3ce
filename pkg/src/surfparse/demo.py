"""Paths to, and loaders for, the shipped demo resources."""
from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from .core import Document, parse_cohort_stream
from .lexicon import Guesser, Lexicon, load_guesser, load_lexicon
from .rules import Grammar, load_grammar


def data_path(name: str) -> Path:
    return Path(str(files("surfparse") / "data" / name))


def lexicon() -> Lexicon:
    return load_lexicon(data_path("lexicon.cohorts"))


def guesser() -> Guesser:
    return load_guesser(data_path("guesser.txt"))


def grammar() -> Grammar:
    return load_grammar(data_path("grammar.cg"))


def corpus_lines() -> list[str]:
    return data_path("demo_corpus.txt").read_text(encoding="utf-8").splitlines()


def cohorts(name: str) -> Document:
    return parse_cohort_stream(data_path(name).read_text(encoding="utf-8"), source=name)
