"""Extended regular expressions over grammatical symbols.

Symbols are whole tags (``VFIN``, ``<**CLB>``, ``@SUBJ``), quoted base forms
(``"round"``) or the boundary markers ``@@`` and ``@``. Operators, loosest
first: ``|`` union, ``&`` intersection, ``-`` difference, juxtaposition,
prefix ``~`` complement, postfix ``*`` ``+`` ``?``. ``.`` is any single symbol;
``[...]`` and ``(...)`` group.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

SENTENCE_EDGE = "@@"
WORD_BOUNDARY = "@"
RESERVED = frozenset({"_", "=>"})


class RegexSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1, source: str = "<regex>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line, self.column, self.source = line, column, source


class Regex:
    """Base class of the regex syntax tree."""

    def symbols(self) -> set[str]:
        return set().union(*(c.symbols() for c in self.children()))

    def children(self) -> tuple["Regex", ...]:
        return ()


@dataclass(frozen=True)
class Sym(Regex):
    name: str

    def symbols(self) -> set[str]:
        return {self.name}

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class AnySym(Regex):
    def __str__(self) -> str:
        return "."


@dataclass(frozen=True)
class Epsilon(Regex):
    def __str__(self) -> str:
        return "[]"


@dataclass(frozen=True)
class Concat(Regex):
    parts: tuple[Regex, ...]

    def children(self):
        return self.parts

    def __str__(self) -> str:
        return "[" + " ".join(map(str, self.parts)) + "]"


@dataclass(frozen=True)
class Union(Regex):
    parts: tuple[Regex, ...]

    def children(self):
        return self.parts

    def __str__(self) -> str:
        return "[" + " | ".join(map(str, self.parts)) + "]"


@dataclass(frozen=True)
class Intersect(Regex):
    parts: tuple[Regex, ...]

    def children(self):
        return self.parts

    def __str__(self) -> str:
        return "[" + " & ".join(map(str, self.parts)) + "]"


@dataclass(frozen=True)
class Diff(Regex):
    left: Regex
    right: Regex

    def children(self):
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"[{self.left} - {self.right}]"


@dataclass(frozen=True)
class Complement(Regex):
    body: Regex

    def children(self):
        return (self.body,)

    def __str__(self) -> str:
        return f"~{self.body}"


@dataclass(frozen=True)
class Star(Regex):
    body: Regex

    def children(self):
        return (self.body,)

    def __str__(self) -> str:
        return f"{self.body}*"


@dataclass(frozen=True)
class Plus(Regex):
    body: Regex

    def children(self):
        return (self.body,)

    def __str__(self) -> str:
        return f"{self.body}+"


@dataclass(frozen=True)
class Optional(Regex):
    body: Regex

    def children(self):
        return (self.body,)

    def __str__(self) -> str:
        return f"{self.body}?"


ANY_STAR = Star(AnySym())


def contains(r: Regex) -> Regex:
    """``.* r .*``"""
    return Concat((ANY_STAR, r, ANY_STAR))


def walk(r: Regex) -> Iterator[Regex]:
    yield r
    for c in r.children():
        yield from walk(c)


# ---------------------------------------------------------------- tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*")
  | (?P<angle><[^<>\s]+>)
  | (?P<single>[\[\]()|&~,;])
  | (?P<word>[^\s\[\]()|&~,;"]+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # sym, op, any, eof
    text: str
    line: int
    col: int


def tokenize(text: str, source: str = "<regex>", line: int = 1, col: int = 1) -> list[Token]:
    out: list[Token] = []
    pos = 0
    line_start = -(col - 1)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise RegexSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind, chunk = m.lastgroup, m.group()
        c = pos - line_start + 1
        if kind == "str":
            out.append(Token("sym", chunk, line, c))
        elif kind == "angle":
            out.append(Token("sym", chunk, line, c))
        elif kind == "single":
            out.append(Token("op", chunk, line, c))
        elif kind == "word":
            out.extend(_split_word(chunk, line, c, source))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


def _split_word(chunk: str, line: int, col: int, source: str) -> list[Token]:
    if chunk in ("-", "=>", "_"):
        return [Token("op", chunk, line, col)]
    core = chunk.rstrip("*+?")
    postfix = chunk[len(core):]
    if not core:
        return [Token("op", ch, line, col + i) for i, ch in enumerate(chunk)]
    if core in RESERVED:
        raise RegexSyntaxError(f"{core!r} cannot be used here", line, col, source)
    head = Token("any", ".", line, col) if core == "." else Token("sym", core, line, col)
    return [head] + [Token("op", ch, line, col + len(core) + i) for i, ch in enumerate(postfix)]


# ---------------------------------------------------------------- parser

_STOP = {"|", "&", "-", ")", "]", ",", ";", "_", "=>"}


class RegexParser:
    """Recursive-descent parser; ``defs`` maps DEF names to parsed regexes."""

    def __init__(self, tokens: list[Token], defs: Mapping[str, Regex] | None = None, source: str = "<regex>"):
        self.toks = tokens
        self.i = 0
        self.defs = dict(defs or {})
        self.source = source

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> RegexSyntaxError:
        tok = tok or self.tok
        return RegexSyntaxError(msg, tok.line, tok.col, self.source)

    def take(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at_op(self, *texts: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in texts

    def expect(self, text: str) -> Token:
        if not self.at_op(text):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def at_end_of_term(self) -> bool:
        t = self.tok
        return t.kind == "eof" or (t.kind == "op" and t.text in _STOP)

    # regex := union ; empty input is the empty string
    def regex(self) -> Regex:
        return self.union()

    def union(self) -> Regex:
        parts = [self.intersection()]
        while self.at_op("|"):
            self.take()
            parts.append(self.intersection())
        return parts[0] if len(parts) == 1 else Union(tuple(parts))

    def intersection(self) -> Regex:
        parts = [self.difference()]
        while self.at_op("&"):
            self.take()
            parts.append(self.difference())
        return parts[0] if len(parts) == 1 else Intersect(tuple(parts))

    def difference(self) -> Regex:
        left = self.concat()
        while self.at_op("-"):
            self.take()
            left = Diff(left, self.concat())
        return left

    def concat(self) -> Regex:
        parts = []
        while not self.at_end_of_term():
            parts.append(self.unary())
        if not parts:
            return Epsilon()
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def unary(self) -> Regex:
        if self.at_op("~"):
            self.take()
            return Complement(self.unary())
        node = self.atom()
        while self.at_op("*", "+", "?"):
            op = self.take().text
            node = Star(node) if op == "*" else Plus(node) if op == "+" else Optional(node)
        return node

    def atom(self) -> Regex:
        tok = self.take()
        if tok.kind == "any":
            return AnySym()
        if tok.kind == "sym":
            if tok.text in self.defs:
                return self.defs[tok.text]
            return Sym(tok.text)
        if tok.kind == "op" and tok.text in "([":
            close = ")" if tok.text == "(" else "]"
            if self.at_op(close):
                self.take()
                return Epsilon()
            inner = self.regex()
            self.expect(close)
            return inner
        raise self.error(f"unexpected {tok.text or 'end of input'!r}", tok)


def parse_regex(text: str, defs: Mapping[str, Regex] | None = None, source: str = "<regex>") -> Regex:
    p = RegexParser(tokenize(text, source), defs, source)
    r = p.regex()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return r


__all__ = [
    "ANY_STAR",
    "AnySym",
    "Complement",
    "Concat",
    "Diff",
    "Epsilon",
    "Intersect",
    "Optional",
    "Plus",
    "Regex",
    "RegexParser",
    "RegexSyntaxError",
    "SENTENCE_EDGE",
    "Star",
    "Sym",
    "Union",
    "WORD_BOUNDARY",
    "contains",
    "parse_regex",
    "tokenize",
    "walk",
]
