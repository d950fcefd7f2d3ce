"""FSIG rule files and their compilation to automata.

    DEF W = ~[.* [@ | @@] .*] ;
    RULE "inf": INF => .* [AUXMOD | INFMARK>] W @ W _ .* ;
    REJECT .* VFIN .* VFIN .* ;

A RULE is an implication: every occurrence of the center must sit in one of
the listed contexts, where the left side matches the entire prefix and the
right side the entire suffix; an empty side means ``.*``. REJECT r keeps the
strings outside r.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

from .automaton import DFA, compile_regex, complement, concat_many, intersect_many, union_many
from .regex import ANY_STAR, Complement, Regex, RegexParser, RegexSyntaxError, tokenize

MAX_CONTEXTS = 12


@dataclass(frozen=True, eq=False)
class ImplicationRule:
    name: str
    center: Regex
    contexts: tuple[tuple[Regex, Regex], ...]

    def __post_init__(self):
        if not self.contexts:
            raise ValueError(f"rule {self.name!r}: at least one context is required")

    def __str__(self) -> str:
        ctx = " , ".join(f"{lc} _ {rc}" for lc, rc in self.contexts)
        return f'RULE "{self.name}": {self.center} => {ctx} ;'


@dataclass(frozen=True, eq=False)
class RejectRule:
    name: str
    body: Regex

    @property
    def regex(self) -> Regex:
        return Complement(self.body)

    def __str__(self) -> str:
        return f'REJECT "{self.name}": {self.body} ;'


FsigRule = ImplicationRule | RejectRule


@dataclass(frozen=True)
class FsigGrammar:
    defs: dict[str, Regex] = field(default_factory=dict)
    rules: tuple[FsigRule, ...] = ()

    def __len__(self) -> int:
        return len(self.rules)


class ContextBlowup(ValueError):
    pass


def compile_implication(rule: ImplicationRule) -> DFA:
    """Complement of the union, over choice functions f, of A_f . X . B_f.

    A choice function assigns each context to the side that fails; A_f is the
    intersection of the complements of the left sides it picks, B_f likewise
    for the right sides. A string is rejected exactly when some occurrence of
    the center has every context failing on at least one side.
    """
    n = len(rule.contexts)
    if n > MAX_CONTEXTS:
        raise ContextBlowup(f"rule {rule.name!r} has {n} contexts; at most {MAX_CONTEXTS} are supported")
    center = compile_regex(rule.center)
    not_left = [complement(compile_regex(lc)) for lc, _ in rule.contexts]
    not_right = [complement(compile_regex(rc)) for _, rc in rule.contexts]
    bad = []
    for choice in itertools.product((0, 1), repeat=n):
        a = intersect_many([not_left[i] for i in range(n) if choice[i] == 0])
        b = intersect_many([not_right[i] for i in range(n) if choice[i] == 1])
        if a.is_empty() or b.is_empty():
            continue
        bad.append(concat_many([a, center, b]))
    return complement(union_many(bad))


def compile_rule(rule: FsigRule | Regex) -> DFA:
    if isinstance(rule, ImplicationRule):
        return compile_implication(rule)
    if isinstance(rule, RejectRule):
        return compile_regex(rule.regex)
    return compile_regex(rule)


def compile_grammar(g: FsigGrammar) -> list[DFA]:
    return [compile_rule(r) for r in g.rules]


# ---------------------------------------------------------------- rule files


class _FileParser(RegexParser):
    def keyword(self) -> str:
        tok = self.take()
        if tok.kind != "sym":
            raise self.error(f"expected DEF, RULE or REJECT, found {tok.text!r}", tok)
        return tok.text

    def label(self, default: str) -> str:
        tok = self.tok
        if tok.kind == "sym" and tok.text.startswith('"'):
            nxt = self.toks[self.i + 1]
            if nxt.kind == "sym" and nxt.text == ":":
                self.i += 2
                return tok.text[1:-1]
        return default

    def side(self) -> Regex:
        start = self.i
        r = self.regex()
        return ANY_STAR if self.i == start else r


def parse_fsig_grammar(text: str, source: str = "<fsig>") -> FsigGrammar:
    p = _FileParser(tokenize(text, source), {}, source)
    rules: list[FsigRule] = []
    names: set[str] = set()
    while p.tok.kind != "eof":
        kw_tok = p.tok
        kw = p.keyword()
        if kw == "DEF":
            name_tok = p.take()
            if name_tok.kind != "sym" or name_tok.text.startswith('"'):
                raise p.error("expected a definition name", name_tok)
            eq = p.take()
            if eq.text != "=":
                raise p.error("expected '='", eq)
            p.defs[name_tok.text] = p.regex()
            p.expect(";")
        elif kw == "RULE":
            name = p.label(f"rule{kw_tok.line}")
            center = p.regex()
            p.expect("=>")
            contexts = []
            while True:
                left = p.side()
                p.expect("_")
                right = p.side()
                contexts.append((left, right))
                if p.at_op(","):
                    p.take()
                    continue
                break
            p.expect(";")
            if len(contexts) > MAX_CONTEXTS:
                raise RegexSyntaxError(f"rule {name!r}: more than {MAX_CONTEXTS} contexts", kw_tok.line, kw_tok.col, source)
            rules.append(ImplicationRule(name, center, tuple(contexts)))
        elif kw == "REJECT":
            name = p.label(f"reject{kw_tok.line}")
            rules.append(RejectRule(name, p.regex()))
            p.expect(";")
        else:
            raise p.error(f"unknown statement {kw!r}", kw_tok)
        if kw != "DEF":
            if rules[-1].name in names:
                raise RegexSyntaxError(f"duplicate rule name {rules[-1].name!r}", kw_tok.line, kw_tok.col, source)
            names.add(rules[-1].name)
    return FsigGrammar(p.defs, tuple(rules))


def load_fsig_grammar(path: str | Path) -> FsigGrammar:
    return parse_fsig_grammar(Path(path).read_text(encoding="utf-8"), str(path))


__all__ = [
    "ContextBlowup",
    "FsigGrammar",
    "FsigRule",
    "ImplicationRule",
    "MAX_CONTEXTS",
    "RejectRule",
    "compile_grammar",
    "compile_implication",
    "compile_rule",
    "load_fsig_grammar",
    "parse_fsig_grammar",
]
