"""Finite-state intersection grammar: rules and sentences as automata, parsing as intersection."""
from .automaton import DFA, compile_regex
from .grammar import (
    ContextBlowup,
    FsigGrammar,
    ImplicationRule,
    RejectRule,
    compile_grammar,
    compile_implication,
    compile_rule,
    load_fsig_grammar,
    parse_fsig_grammar,
)
from .parse import (
    BoundExceeded,
    DecodeError,
    Penalty,
    brute_force_filter,
    enumerate_parses,
    intersect_all,
    load_penalty,
    select_parse,
    sentence_to_automaton,
)
from .regex import RegexSyntaxError, parse_regex

__all__ = [
    "BoundExceeded",
    "ContextBlowup",
    "DFA",
    "DecodeError",
    "FsigGrammar",
    "ImplicationRule",
    "Penalty",
    "RegexSyntaxError",
    "RejectRule",
    "brute_force_filter",
    "compile_grammar",
    "compile_implication",
    "compile_regex",
    "compile_rule",
    "enumerate_parses",
    "intersect_all",
    "load_fsig_grammar",
    "load_penalty",
    "parse_fsig_grammar",
    "parse_regex",
    "select_parse",
    "sentence_to_automaton",
]
