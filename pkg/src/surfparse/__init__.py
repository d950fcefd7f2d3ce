"""Reductionistic surface parsing: constraint grammar and finite-state intersection grammar."""
from .core import (
    Cohort,
    CohortSyntaxError,
    Document,
    Origin,
    Reading,
    Sentence,
    Tag,
    TagKind,
    intern_tag,
    parse_cohort_stream,
    serialize_cohort_stream,
)
from .engine import EngineConfig, disambiguate, map_syntax
from .lexicon import Guesser, Lexicon, analyze, guess, load_guesser, load_lexicon, lookup
from .rules import Grammar, load_grammar, parse_grammar

__version__ = "0.1.0"

__all__ = [
    "Cohort",
    "CohortSyntaxError",
    "Document",
    "EngineConfig",
    "Grammar",
    "Guesser",
    "Lexicon",
    "Origin",
    "Reading",
    "Sentence",
    "Tag",
    "TagKind",
    "analyze",
    "disambiguate",
    "guess",
    "intern_tag",
    "load_grammar",
    "load_guesser",
    "load_lexicon",
    "lookup",
    "map_syntax",
    "parse_cohort_stream",
    "parse_grammar",
    "serialize_cohort_stream",
]
