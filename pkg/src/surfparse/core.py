"""Tags, readings, cohorts and the parenthesised cohort text format.

A cohort looks like::

    ("<round>"
      ("round" <SVO> <SV> V INF)
      ("round" A ABS)
      ("round" ADV ADVL (@ADVL)))

The surface line carries the display form (capitalisation is written as a
leading ``*``, punctuation as a leading ``$``); each reading is a quoted base
form followed by tags, with syntactic-function tags in a trailing group.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence


class TagKind(enum.Enum):
    POS = "POS"
    FEATURE = "FEATURE"
    LEXFEATURE = "LEXFEATURE"
    SYNFUNC = "SYNFUNC"
    BOUNDARY = "BOUNDARY"
    HEURFLAG = "HEURFLAG"


class Origin(enum.Enum):
    LEXICON = "LEXICON"
    GUESSER = "GUESSER"
    MAPPED = "MAPPED"


POS_TAGS = frozenset(
    "N ABBR A ADV CC CS DET INFMARK> INTERJ NEG-PART NUM PCP1 PCP2 PREP PRON V".split()
)

HEUR_FLAG = "<Heur>"
CAPITAL_TAG = "<*>"

_BUILTIN_KINDS = {
    HEUR_FLAG: TagKind.HEURFLAG,
    "<**CLB>": TagKind.BOUNDARY,
}


class CohortSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source


@dataclass(frozen=True, eq=False)
class Tag:
    """An interned tag. Create through :func:`intern_tag`, never directly."""

    text: str
    kind: TagKind

    def __repr__(self) -> str:
        return f"Tag({self.text!r}, {self.kind.name})"

    def __str__(self) -> str:
        return self.text

    def __reduce__(self):
        return (_restore_tag, (self.text, self.kind.value))

    def __lt__(self, other: "Tag") -> bool:
        return self.text < other.text


_registry: dict[str, Tag] = {}
_declared: dict[str, TagKind] = dict(_BUILTIN_KINDS)
_lock = threading.Lock()


def classify(text: str) -> TagKind:
    if text in _declared:
        return _declared[text]
    if text.startswith("@"):
        return TagKind.SYNFUNC
    if text.startswith("<") and text.endswith(">") and len(text) > 2:
        return TagKind.LEXFEATURE
    if text in POS_TAGS:
        return TagKind.POS
    return TagKind.FEATURE


def intern_tag(text: str) -> Tag:
    tag = _registry.get(text)
    if tag is not None:
        return tag
    if not text:
        raise ValueError("empty tag")
    with _lock:
        tag = _registry.get(text)
        if tag is None:
            tag = Tag(text, classify(text))
            _registry[text] = tag
    return tag


def _restore_tag(text: str, kind: str) -> Tag:
    kind = TagKind(kind)
    if classify(text) is not kind:
        declare_tag(text, kind)
    return intern_tag(text)


def declare_tag(text: str, kind: TagKind) -> Tag:
    """Register ``text`` with an explicit kind (tagset files end up here)."""
    existing = _registry.get(text)
    if existing is not None:
        if existing.kind is not kind:
            raise ValueError(
                f"tag {text!r} already interned as {existing.kind.name}, cannot redeclare as {kind.name}"
            )
        return existing
    with _lock:
        _declared[text] = kind
    return intern_tag(text)


def tags(spec: str) -> tuple[Tag, ...]:
    return tuple(intern_tag(t) for t in spec.split())


@dataclass(frozen=True)
class Tagset:
    """A registered tag inventory: text -> kind."""

    kinds: dict[str, TagKind]

    def __contains__(self, text: object) -> bool:
        return text in self.kinds

    def __len__(self) -> int:
        return len(self.kinds)


def parse_tagset(text: str, source: str = "<tagset>") -> Tagset:
    kinds: dict[str, TagKind] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CohortSyntaxError("expected 'TEXT KIND'", lineno, 1, source)
        try:
            kind = TagKind(parts[1].upper())
        except ValueError:
            raise CohortSyntaxError(f"unknown tag kind {parts[1]!r}", lineno, 1, source) from None
        kinds[parts[0]] = kind
    return Tagset(kinds)


def load_tagset(path: str | Path, register: bool = True) -> Tagset:
    ts = parse_tagset(Path(path).read_text(encoding="utf-8"), str(path))
    if register:
        for text, kind in ts.kinds.items():
            if kind in (TagKind.HEURFLAG, TagKind.BOUNDARY) or classify(text) is not kind:
                declare_tag(text, kind)
    return ts


@dataclass(frozen=True)
class Reading:
    base: str
    tags: tuple[Tag, ...]
    origin: Origin = field(default=Origin.LEXICON, compare=False)

    def __post_init__(self):
        if not self.tags:
            raise ValueError(f"reading {self.base!r} has no tags")
        npos = sum(1 for t in self.tags if t.kind is TagKind.POS)
        if npos != 1:
            raise ValueError(
                f"reading {self.base!r} {' '.join(t.text for t in self.tags)} must carry exactly one POS tag, has {npos}"
            )
        # function tags always trail; keeps serialisation a left inverse of parsing
        ordered = tuple(sorted(self.tags, key=lambda t: t.kind is TagKind.SYNFUNC))
        if ordered != self.tags:
            object.__setattr__(self, "tags", ordered)
        if self.origin is Origin.GUESSER and not self.is_heuristic:
            raise ValueError(f"guessed reading {self.base!r} lacks a heuristic flag")

    @classmethod
    def of(cls, base: str, spec: str, origin: Origin = Origin.LEXICON) -> "Reading":
        return cls(base, tags(spec), origin)

    @cached_property
    def tagset(self) -> frozenset[Tag]:
        return frozenset(self.tags)

    @cached_property
    def pos(self) -> Tag:
        return next(t for t in self.tags if t.kind is TagKind.POS)

    @property
    def is_heuristic(self) -> bool:
        return any(t.kind is TagKind.HEURFLAG for t in self.tags)

    @property
    def synfuncs(self) -> tuple[Tag, ...]:
        return tuple(t for t in self.tags if t.kind is TagKind.SYNFUNC)

    @property
    def morph_tags(self) -> tuple[Tag, ...]:
        return tuple(t for t in self.tags if t.kind is not TagKind.SYNFUNC)

    def has(self, text: str) -> bool:
        return intern_tag(text) in self.tagset

    def with_tags(self, new_tags: Sequence[Tag], origin: Origin | None = None) -> "Reading":
        return Reading(self.base, tuple(new_tags), self.origin if origin is None else origin)

    def format(self) -> str:
        return format_reading(self)

    def __str__(self) -> str:
        return self.format()


def surface_to_display(surface: str, punct: bool = False) -> str:
    if punct:
        return "$" + surface
    head, rest = surface[:1], surface[1:]
    if head.isupper() and rest == rest.lower() and head.lower() != head:
        return "*" + surface.lower()
    return surface


def display_to_surface(display: str, punct: bool = False) -> str:
    if punct and display.startswith("$") and len(display) > 1:
        return display[1:]
    if display.startswith("*") and len(display) > 1 and display[1].islower():
        return display[1].upper() + display[2:]
    return display


@dataclass(frozen=True)
class Cohort:
    display_form: str
    readings: tuple[Reading, ...] = ()

    @classmethod
    def from_surface(cls, surface: str, readings: Iterable[Reading] = (), punct: bool = False) -> "Cohort":
        readings = tuple(readings)
        if not punct and not readings:
            raise ValueError(f"non-punctuation cohort {surface!r} needs at least one reading")
        return cls(surface_to_display(surface, punct), readings)

    @property
    def is_punct(self) -> bool:
        return not self.readings

    @property
    def surface(self) -> str:
        return display_to_surface(self.display_form, self.is_punct)

    @property
    def capitalized(self) -> bool:
        return self.display_form.startswith("*") and not self.is_punct

    @property
    def ambiguous(self) -> bool:
        return len(self.readings) > 1

    def replace(self, readings: Iterable[Reading]) -> "Cohort":
        return Cohort(self.display_form, tuple(readings))


@dataclass(frozen=True)
class Sentence:
    cohorts: tuple[Cohort, ...]

    def __len__(self) -> int:
        return len(self.cohorts)

    def __iter__(self) -> Iterator[Cohort]:
        return iter(self.cohorts)

    def __getitem__(self, i: int) -> Cohort:
        return self.cohorts[i]

    def replace(self, i: int, cohort: Cohort) -> "Sentence":
        cohorts = list(self.cohorts)
        cohorts[i] = cohort
        return Sentence(tuple(cohorts))

    @property
    def combinations(self) -> int:
        n = 1
        for c in self.cohorts:
            n *= max(1, len(c.readings))
        return n


@dataclass(frozen=True)
class Document:
    sentences: tuple[Sentence, ...] = ()

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def cohorts(self) -> Iterator[Cohort]:
        for s in self.sentences:
            yield from s.cohorts


DEFAULT_DELIMITERS = frozenset({"$.", "$!", "$?"})


# ---------------------------------------------------------------- format


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_reading(r: Reading) -> str:
    morph = " ".join(t.text for t in r.tags if t.kind is not TagKind.SYNFUNC)
    syn = r.synfuncs
    out = f"({_quote(r.base)} {morph}"
    if syn:
        out += " (" + " ".join(t.text for t in syn) + ")"
    return out + ")"


def format_cohort(c: Cohort) -> str:
    head = f"({_quote('<' + c.display_form + '>')}"
    if not c.readings:
        return head + ")\n"
    lines = [head]
    lines.extend("  " + format_reading(r) for r in c.readings)
    return "\n".join(lines) + ")\n"


def serialize_sentence(s: Sentence) -> str:
    return "".join(format_cohort(c) for c in s.cohorts)


def serialize_cohort_stream(doc: Document | Sentence | Iterable[Sentence]) -> str:
    if isinstance(doc, Sentence):
        return serialize_sentence(doc)
    return "".join(serialize_sentence(s) for s in doc)


class _Lexer:
    """Tokenizer for the parenthesised format: '(', ')', strings and atoms."""

    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, msg: str, line: int | None = None, col: int | None = None) -> CohortSyntaxError:
        return CohortSyntaxError(msg, line or self.line, col or self.col, self.source)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def tokens(self) -> Iterator[tuple[str, str, int, int]]:
        text = self.text
        n = len(text)
        while self.pos < n:
            ch = text[self.pos]
            if ch.isspace():
                self._advance()
                continue
            if ch == "#" and (self.col == 1 or text[self.pos - 1] == "\n"):
                while self.pos < n and text[self.pos] != "\n":
                    self._advance()
                continue
            line, col = self.line, self.col
            if ch in "()":
                self._advance()
                yield ch, ch, line, col
            elif ch == '"':
                self._advance()
                buf = []
                while True:
                    if self.pos >= n:
                        raise self.error("unterminated string", line, col)
                    c = text[self.pos]
                    if c == "\\" and self.pos + 1 < n:
                        buf.append(text[self.pos + 1])
                        self._advance(2)
                        continue
                    if c == '"':
                        self._advance()
                        break
                    if c == "\n":
                        raise self.error("newline inside string", line, col)
                    buf.append(c)
                    self._advance()
                yield "str", "".join(buf), line, col
            else:
                start = self.pos
                while self.pos < n and not text[self.pos].isspace() and text[self.pos] not in '()"':
                    self._advance()
                yield "atom", text[start:self.pos], line, col


class _Parser:
    def __init__(self, text: str, source: str):
        self.lexer = _Lexer(text, source)
        self.toks = self.lexer.tokens()
        self.cur = next(self.toks, None)

    def error(self, msg: str) -> CohortSyntaxError:
        if self.cur is None:
            return self.lexer.error(msg + " (at end of input)")
        return self.lexer.error(msg, self.cur[2], self.cur[3])

    def take(self, kind: str):
        if self.cur is None or self.cur[0] != kind:
            found = "end of input" if self.cur is None else repr(self.cur[1])
            raise self.error(f"expected {kind!r}, found {found}")
        tok = self.cur
        self.cur = next(self.toks, None)
        return tok

    def peek(self) -> str | None:
        return None if self.cur is None else self.cur[0]

    def cohorts(self) -> Iterator[Cohort]:
        while self.cur is not None:
            yield self.cohort()

    def cohort(self) -> Cohort:
        self.take("(")
        if self.peek() != "str":
            raise self.error("missing surface line")
        _, form, line, col = self.take("str")
        if not (form.startswith("<") and form.endswith(">") and len(form) > 2):
            raise self.lexer.error(f"surface {form!r} must be written as \"<form>\"", line, col)
        readings = []
        while self.peek() == "(":
            readings.append(self.reading())
        self.take(")")
        return Cohort(form[1:-1], tuple(readings))

    def reading(self) -> Reading:
        _, _, line, col = self.take("(")
        if self.peek() != "str":
            raise self.error("reading must start with a quoted base form")
        base = self.take("str")[1]
        found: list[Tag] = []
        while self.peek() == "atom":
            found.append(intern_tag(self.take("atom")[1]))
        if self.peek() == "(":
            self.take("(")
            if self.peek() != "atom":
                raise self.error("empty syntactic-function group")
            while self.peek() == "atom":
                _, text, tl, tc = self.take("atom")
                tag = intern_tag(text)
                if tag.kind is not TagKind.SYNFUNC:
                    raise self.lexer.error(f"{text!r} in function group is not an @-tag", tl, tc)
                found.append(tag)
            self.take(")")
        self.take(")")
        if not found:
            raise self.lexer.error(f"empty reading for {base!r}", line, col)
        origin = Origin.GUESSER if any(t.kind is TagKind.HEURFLAG for t in found) else Origin.LEXICON
        try:
            return Reading(base, tuple(found), origin)
        except ValueError as exc:
            raise self.lexer.error(str(exc), line, col) from None


def iter_cohorts(text: str, source: str = "<input>") -> Iterator[Cohort]:
    return _Parser(text, source).cohorts()


def split_sentences(cohorts: Iterable[Cohort], delimiters: frozenset[str] = DEFAULT_DELIMITERS) -> Iterator[Sentence]:
    buf: list[Cohort] = []
    for c in cohorts:
        buf.append(c)
        if c.is_punct and c.display_form in delimiters:
            yield Sentence(tuple(buf))
            buf = []
    if buf:
        yield Sentence(tuple(buf))


def parse_cohort_stream(
    text: str, delimiters: frozenset[str] = DEFAULT_DELIMITERS, source: str = "<input>"
) -> Document:
    """Parse the cohort format into sentences split at delimiter cohorts.

    A trailing run of cohorts without a delimiter still forms a sentence.
    """
    return Document(tuple(split_sentences(iter_cohorts(text, source), delimiters)))


def read_document(path: str | Path, delimiters: frozenset[str] = DEFAULT_DELIMITERS) -> Document:
    return parse_cohort_stream(Path(path).read_text(encoding="utf-8"), delimiters, str(path))
