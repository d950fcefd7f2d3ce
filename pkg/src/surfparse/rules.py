"""Constraint Grammar rule language: patterns, context conditions, constraints.

Concrete syntax::

    DELIMITERS "<$.>" "<$!>" "<$?>" ;
    SECTION strict ;
    REMOVE (VFIN) IF (-1C (DET)) ;
    SELECT:inf-after-marker (V INF) IF (-1 (INFMARK>)) ;
    REMOVE (V) IF (*-1 (DET) BARRIER (VFIN)) (1 (N)) ;
    MAP (@+FAUXV) TARGET (V AUXMOD) ;
    SECTION heuristic ;
    REMOVE (N GEN) IF (1 (V)) ;

A pattern is a ``|``-separated list of tag conjunctions; a quoted word inside
a conjunction is a base-form literal and ``*`` alone matches any reading.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .core import DEFAULT_DELIMITERS, Reading, Tag, Tagset, TagKind, intern_tag


class GrammarSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = "<grammar>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column


class Op(enum.Enum):
    REMOVE = "REMOVE"
    SELECT = "SELECT"


class Tier(enum.Enum):
    STRICT = "strict"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class Conjunction:
    tags: frozenset[Tag] = frozenset()
    base: str | None = None

    def matches(self, r: Reading) -> bool:
        if self.base is not None and r.base != self.base:
            return False
        return self.tags <= r.tagset

    def format(self) -> str:
        parts = [f'"{self.base}"'] if self.base is not None else []
        parts += sorted(t.text for t in self.tags)
        return " ".join(parts) if parts else "*"


@dataclass(frozen=True)
class Pattern:
    alternatives: tuple[Conjunction, ...]

    def __post_init__(self):
        if not self.alternatives:
            raise ValueError("pattern needs at least one alternative")

    @classmethod
    def of(cls, text: str) -> "Pattern":
        return parse_pattern(text)

    def matches(self, r: Reading) -> bool:
        return any(alt.matches(r) for alt in self.alternatives)

    def tags(self) -> set[Tag]:
        return {t for alt in self.alternatives for t in alt.tags}

    def format(self) -> str:
        return "(" + " | ".join(a.format() for a in self.alternatives) + ")"

    def implies(self, other: "Pattern") -> bool:
        """True when every reading matching self also matches other."""
        return all(
            any(o.tags <= a.tags and (o.base is None or o.base == a.base) for o in other.alternatives)
            for a in self.alternatives
        )


@dataclass(frozen=True)
class ContextCondition:
    offset: int
    pattern: Pattern
    careful: bool = False
    scan: bool = False
    barrier: Pattern | None = None
    negated: bool = False

    def __post_init__(self):
        if self.scan and self.offset == 0:
            raise ValueError("a scanning condition needs a non-zero offset")
        if self.barrier is not None and not self.scan:
            raise ValueError("BARRIER requires a scanning (*) position")

    def format(self) -> str:
        pos = ("*" if self.scan else "") + str(self.offset) + ("C" if self.careful else "")
        out = ("NOT " if self.negated else "") + pos + " " + self.pattern.format()
        if self.barrier is not None:
            out += " BARRIER " + self.barrier.format()
        return "(" + out + ")"


@dataclass(frozen=True)
class Constraint:
    id: str
    op: Op
    target: Pattern
    conditions: tuple[ContextCondition, ...] = ()
    tier: Tier = Tier.STRICT

    def format(self) -> str:
        out = f"{self.op.value}:{self.id} {self.target.format()}"
        if self.conditions:
            out += " IF " + " ".join(c.format() for c in self.conditions)
        return out + " ;"


@dataclass(frozen=True)
class MappingRule:
    id: str
    add: tuple[Tag, ...]
    target: Pattern
    context: tuple[ContextCondition, ...] = ()

    def __post_init__(self):
        if not self.add:
            raise ValueError("MAP needs at least one tag")
        bad = [t.text for t in self.add if t.kind is not TagKind.SYNFUNC]
        if bad:
            raise ValueError(f"MAP can only add @-function tags, got {bad}")

    def format(self) -> str:
        out = f"MAP:{self.id} (" + " ".join(t.text for t in self.add) + ") TARGET " + self.target.format()
        if self.context:
            out += " IF " + " ".join(c.format() for c in self.context)
        return out + " ;"


@dataclass(frozen=True)
class Grammar:
    strict: tuple[Constraint, ...] = ()
    heuristic: tuple[Constraint, ...] = ()
    mappings: tuple[MappingRule, ...] = ()
    delimiters: frozenset[str] = DEFAULT_DELIMITERS

    def __post_init__(self):
        seen = set()
        for rule in (*self.strict, *self.heuristic, *self.mappings):
            if rule.id in seen:
                raise ValueError(f"duplicate rule id {rule.id!r}")
            seen.add(rule.id)

    @property
    def constraints(self) -> tuple[Constraint, ...]:
        return self.strict + self.heuristic

    def with_strict(self, strict: Iterable[Constraint]) -> "Grammar":
        return Grammar(tuple(strict), self.heuristic, self.mappings, self.delimiters)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[();|])
  | (?P<atom>[^\s();|"]+)
    """,
    re.VERBOSE,
)

_POSITION = re.compile(r"^(\*)?([+-]?\d+)(C)?$")


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str, source: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise GrammarSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    return toks


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


@dataclass
class _GrammarParser:
    toks: list[_Tok]
    source: str
    i: int = 0
    counters: dict[str, int] = field(default_factory=dict)

    def error(self, msg: str, tok: _Tok | None = None) -> GrammarSyntaxError:
        tok = tok or (self.toks[self.i] if self.i < len(self.toks) else None)
        if tok is None:
            last = self.toks[-1] if self.toks else _Tok("", "", 1, 1)
            return GrammarSyntaxError(msg + " (at end of input)", last.line, last.col, self.source)
        return GrammarSyntaxError(msg, tok.line, tok.col, self.source)

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text!r}", tok)
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def pattern(self) -> Pattern:
        self.expect("(")
        alts = []
        conj: list[_Tok] = []
        while True:
            tok = self.next()
            if tok.text in ("|", ")"):
                alts.append(self._conjunction(conj, tok))
                conj = []
                if tok.text == ")":
                    break
            elif tok.kind in ("atom", "str"):
                conj.append(tok)
            else:
                raise self.error(f"unexpected {tok.text!r} in pattern", tok)
        return Pattern(tuple(alts))

    def _conjunction(self, toks: list[_Tok], end: _Tok) -> Conjunction:
        if not toks:
            raise self.error("empty pattern alternative", end)
        if len(toks) == 1 and toks[0].text == "*":
            return Conjunction()
        base = None
        tagset = []
        for tok in toks:
            if tok.kind == "str":
                if base is not None:
                    raise self.error("two base-form literals in one alternative", tok)
                base = _unquote(tok.text)
            else:
                tagset.append(intern_tag(tok.text))
        return Conjunction(frozenset(tagset), base)

    def condition(self) -> ContextCondition:
        open_tok = self.expect("(")
        negated = False
        if self.at("NOT"):
            self.next()
            negated = True
        pos_tok = self.next()
        m = _POSITION.match(pos_tok.text)
        if not m:
            raise self.error(f"bad position {pos_tok.text!r}", pos_tok)
        scan, offset, careful = bool(m.group(1)), int(m.group(2)), bool(m.group(3))
        pattern = self.pattern()
        barrier = None
        if self.at("BARRIER"):
            self.next()
            barrier = self.pattern()
        self.expect(")")
        try:
            return ContextCondition(offset, pattern, careful, scan, barrier, negated)
        except ValueError as exc:
            raise self.error(str(exc), open_tok) from None

    def conditions(self) -> tuple[ContextCondition, ...]:
        conds = []
        if self.at("IF"):
            self.next()
            while self.at("("):
                conds.append(self.condition())
            if not conds:
                raise self.error("IF without conditions")
        return tuple(conds)

    def rule_id(self, keyword: _Tok, prefix: str) -> str:
        if ":" in keyword.text:
            rid = keyword.text.split(":", 1)[1]
            if not rid:
                raise self.error("empty rule label", keyword)
            return rid
        return f"{prefix}{keyword.line}"


def parse_grammar(text: str, source: str = "<grammar>") -> Grammar:
    p = _GrammarParser(_lex(text, source), source)
    tier = Tier.STRICT
    strict: list[Constraint] = []
    heuristic: list[Constraint] = []
    mappings: list[MappingRule] = []
    delimiters = None
    seen: set[str] = set()

    def register(rid: str, tok: _Tok) -> None:
        if rid in seen:
            raise p.error(f"duplicate rule id {rid!r}", tok)
        seen.add(rid)

    while p.peek() is not None:
        tok = p.next()
        word = tok.text.split(":", 1)[0]
        if tok.kind != "atom":
            raise p.error(f"unexpected {tok.text!r}", tok)
        if word == "DELIMITERS":
            forms = []
            while p.peek() is not None and p.peek().kind == "str":
                form = _unquote(p.next().text)
                if not (form.startswith("<") and form.endswith(">")):
                    raise p.error(f"delimiter {form!r} must be written as \"<form>\"")
                forms.append(form[1:-1])
            p.expect(";")
            delimiters = frozenset(forms)
        elif word == "SECTION":
            name = p.next()
            try:
                tier = Tier(name.text.lower())
            except ValueError:
                raise p.error(f"unknown section {name.text!r}", name) from None
            p.expect(";")
        elif word in ("REMOVE", "SELECT"):
            rid = p.rule_id(tok, "r")
            register(rid, tok)
            target = p.pattern()
            conds = p.conditions()
            p.expect(";")
            rule = Constraint(rid, Op(word), target, conds, tier)
            (strict if tier is Tier.STRICT else heuristic).append(rule)
        elif word == "MAP":
            rid = p.rule_id(tok, "m")
            register(rid, tok)
            p.expect("(")
            add = []
            while p.peek() is not None and p.peek().kind == "atom":
                add.append(intern_tag(p.next().text))
            p.expect(")")
            kw = p.next()
            if kw.text != "TARGET":
                raise p.error("expected TARGET", kw)
            target = p.pattern()
            conds = p.conditions()
            p.expect(";")
            try:
                mappings.append(MappingRule(rid, tuple(add), target, conds))
            except ValueError as exc:
                raise p.error(str(exc), tok) from None
        else:
            raise p.error(f"unknown directive {tok.text!r}", tok)
    return Grammar(tuple(strict), tuple(heuristic), tuple(mappings), delimiters or DEFAULT_DELIMITERS)


def load_grammar(path: str | Path) -> Grammar:
    return parse_grammar(Path(path).read_text(encoding="utf-8"), str(path))


def parse_pattern(text: str) -> Pattern:
    p = _GrammarParser(_lex(text, "<pattern>"), "<pattern>")
    pat = p.pattern()
    if p.peek() is not None:
        raise p.error("trailing input after pattern")
    return pat


def parse_condition(text: str) -> ContextCondition:
    p = _GrammarParser(_lex(text, "<condition>"), "<condition>")
    cond = p.condition()
    if p.peek() is not None:
        raise p.error("trailing input after condition")
    return cond


def format_grammar(g: Grammar) -> str:
    lines = ["DELIMITERS " + " ".join(f'"<{d}>"' for d in sorted(g.delimiters)) + " ;"]
    lines.append("SECTION strict ;")
    lines.extend(c.format() for c in g.strict)
    lines.extend(m.format() for m in g.mappings)
    if g.heuristic:
        lines.append("SECTION heuristic ;")
        lines.extend(c.format() for c in g.heuristic)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


def _patterns(conds: Iterable[ContextCondition]) -> Iterator[Pattern]:
    for c in conds:
        yield c.pattern
        if c.barrier is not None:
            yield c.barrier


def validate_grammar(g: Grammar, tagset: Tagset | Iterable[str]) -> list[Diagnostic]:
    known = tagset if isinstance(tagset, Tagset) else set(tagset)
    out: list[Diagnostic] = []
    rules: list[Constraint | MappingRule] = [*g.strict, *g.heuristic, *g.mappings]
    for rule in rules:
        conds = rule.conditions if isinstance(rule, Constraint) else rule.context
        pats = [rule.target, *_patterns(conds)]
        unknown = sorted({t.text for p in pats for t in p.tags() if t.text not in known})
        if isinstance(rule, MappingRule):
            unknown += sorted(t.text for t in rule.add if t.text not in known)
        for text in unknown:
            out.append(Diagnostic(rule.id, f"tag {text!r} is not in the tagset"))
        for c in conds:
            if c.barrier is not None and not c.careful and c.barrier.implies(c.pattern):
                out.append(Diagnostic(rule.id, f"barrier {c.barrier.format()} can never stop the scan for {c.pattern.format()}"))
    for tier in (g.strict, g.heuristic):
        removes = {(c.target, c.conditions): c for c in tier if c.op is Op.REMOVE}
        for c in tier:
            if c.op is Op.SELECT and (c.target, c.conditions) in removes:
                other = removes[(c.target, c.conditions)]
                out.append(Diagnostic(c.id, f"contradicts {other.id}: SELECT and REMOVE share target and context"))
    return out
