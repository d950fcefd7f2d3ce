"""Sentence automata, intersection parsing, enumeration and parse selection.

A sentence is encoded as ``@@ enc(r1) @ enc(r2) @ ... @@`` where enc(r) is the
quoted base form followed by the reading's tags in order, and a punctuation
cohort is the single symbol ``"<$.>"``. Every reading choice is one path.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from ..core import HEUR_FLAG, Cohort, Reading, Sentence
from .automaton import DFA, intersect
from .grammar import FsigRule
from .oracle import Oracle
from .regex import SENTENCE_EDGE, WORD_BOUNDARY, Regex

DEFAULT_BOUND = 4096


class DecodeError(ValueError):
    pass


class BoundExceeded(ValueError):
    pass


# ---------------------------------------------------------------- encoding


def base_symbol(base: str) -> str:
    return '"' + base.replace("\\", "\\\\").replace('"', '\\"') + '"'


def punct_symbol(c: Cohort) -> str:
    return base_symbol(f"<{c.display_form}>")


def encode_reading(r: Reading) -> tuple[str, ...]:
    return (base_symbol(r.base), *(t.text for t in r.tags))


def cohort_choices(c: Cohort) -> list[tuple[tuple[str, ...], Reading | None]]:
    """Distinct encodings of a cohort, first reading wins on duplicates."""
    if c.is_punct:
        return [((punct_symbol(c),), None)]
    seen: dict[tuple[str, ...], Reading] = {}
    for r in c.readings:
        seen.setdefault(encode_reading(r), r)
    return list(seen.items())


def encode_parse(s: Sentence) -> tuple[str, ...]:
    """Symbol string of a sentence whose cohorts carry one reading each."""
    out = [SENTENCE_EDGE]
    for i, c in enumerate(s.cohorts):
        if i:
            out.append(WORD_BOUNDARY)
        if not c.is_punct and len(c.readings) != 1:
            raise ValueError(f"cohort {c.display_form!r} is not disambiguated")
        out.extend(cohort_choices(c)[0][0])
    out.append(SENTENCE_EDGE)
    return tuple(out)


def sentence_alphabet(s: Sentence) -> tuple[str, ...]:
    syms = {SENTENCE_EDGE, WORD_BOUNDARY}
    for c in s.cohorts:
        for enc, _ in cohort_choices(c):
            syms.update(enc)
    return tuple(sorted(syms))


def sentence_to_automaton(s: Sentence) -> DFA:
    """One trie per cohort, chained by boundary symbols."""
    alphabet = sentence_alphabet(s)
    col = {a: i for i, a in enumerate(alphabet)}
    rows: list[dict[int, int]] = [{}, {}]  # 0 dead, 1 start
    final = len(rows)
    rows.append({})
    cur = len(rows)
    rows.append({})
    rows[1][col[SENTENCE_EDGE]] = cur
    for i, c in enumerate(s.cohorts):
        last = i == len(s.cohorts) - 1
        nxt = final if last else len(rows)
        if not last:
            rows.append({})
        sep = col[SENTENCE_EDGE if last else WORD_BOUNDARY]
        for enc, _ in cohort_choices(c):
            q = cur
            for sym in enc:
                k = col[sym]
                if k not in rows[q]:
                    rows[q][k] = len(rows)
                    rows.append({})
                q = rows[q][k]
            rows[q][sep] = nxt
        cur = nxt
    delta = np.zeros((len(rows), len(alphabet) + 1), dtype=np.int32)
    for q, row in enumerate(rows):
        for k, r in row.items():
            delta[q, k] = r
    accept = np.zeros(len(rows), dtype=bool)
    accept[final] = True
    return DFA(alphabet, delta, accept, 1).minimize()


# ---------------------------------------------------------------- intersection


def intersect_all(sent: DFA, rules: Sequence[DFA]) -> DFA:
    """Intersect the sentence with every rule, most restrictive rules first.

    Rules are ranked by the size of their own intersection with the sentence,
    so the intermediate results shrink as early as possible.
    """
    if not rules:
        return sent
    firsts = [intersect(sent, r) for r in rules]
    order = sorted(range(len(rules)), key=lambda i: (firsts[i].n_states, i))
    current = firsts[order[0]]
    for i in order[1:]:
        if current.is_empty():
            break
        current = intersect(current, firsts[i])
    return current


# ---------------------------------------------------------------- enumeration


def _named_moves(a: DFA, alive: np.ndarray) -> list[list[tuple[str, int]]]:
    order = sorted(range(len(a.alphabet)), key=lambda i: a.alphabet[i])
    moves = []
    for q in range(a.n_states):
        row = a.delta[q]
        moves.append([(a.alphabet[i], int(row[i])) for i in order if alive[row[i]]])
        if alive[row[-1]]:
            raise DecodeError("automaton accepts symbols outside the sentence alphabet")
    return moves


def iter_paths(a: DFA) -> Iterator[tuple[str, ...]]:
    """Accepted strings of a finite automaton in shortlex order."""
    alive = a.live()
    if not alive[a.start]:
        return
    moves = _named_moves(a, alive)
    n = a.n_states
    # finish[k] = states with an accepted continuation of exactly k symbols
    finish = [a.accept & alive]
    while True:
        prev = finish[-1]
        nxt = np.array([any(prev[r] for _, r in moves[q]) for q in range(n)], dtype=bool)
        if not nxt.any():
            break
        if len(finish) > n:
            raise DecodeError("automaton language is infinite")
        finish.append(nxt)
    for length in range(len(finish)):
        if not finish[length][a.start]:
            continue
        stack = [(a.start, length, ())]
        while stack:
            q, k, path = stack.pop()
            if k == 0:
                yield path
                continue
            for sym, r in reversed(moves[q]):
                if finish[k - 1][r]:
                    stack.append((r, k - 1, path + (sym,)))


def decode(path: Sequence[str], s: Sentence) -> Sentence:
    """Map one accepted symbol string back to single-reading cohorts of ``s``."""
    if len(path) < 2 or path[0] != SENTENCE_EDGE or path[-1] != SENTENCE_EDGE:
        raise DecodeError(f"path is not delimited by {SENTENCE_EDGE}: {' '.join(path)}")
    segments: list[list[str]] = [[]]
    for sym in path[1:-1]:
        if sym == WORD_BOUNDARY:
            segments.append([])
        elif sym == SENTENCE_EDGE:
            raise DecodeError("sentence edge inside a path")
        else:
            segments[-1].append(sym)
    if len(segments) != len(s.cohorts):
        raise DecodeError(f"path has {len(segments)} words, sentence has {len(s.cohorts)}")
    out = []
    for c, seg in zip(s.cohorts, segments):
        choices = dict(cohort_choices(c))
        key = tuple(seg)
        if key not in choices:
            raise DecodeError(f"no reading of {c.display_form!r} encodes as {' '.join(seg)}")
        r = choices[key]
        out.append(c if r is None else c.replace((r,)))
    return Sentence(tuple(out))


def enumerate_parses(a: DFA, s: Sentence, limit: int | None = None) -> list[Sentence]:
    return [decode(p, s) for p in itertools.islice(iter_paths(a), limit)]


def parse_sentence(s: Sentence, rules: Sequence[DFA], limit: int | None = None) -> list[Sentence]:
    return enumerate_parses(intersect_all(sentence_to_automaton(s), rules), s, limit)


def merge_parses(s: Sentence, parses: Iterable[Sentence]) -> Sentence:
    """Union of the surviving readings per cohort, in input order."""
    parses = list(parses)
    out = []
    for i, c in enumerate(s.cohorts):
        if c.is_punct:
            out.append(c)
            continue
        kept = {p.cohorts[i].readings[0] for p in parses}
        out.append(c.replace(r for r in c.readings if r in kept))
    return Sentence(tuple(out))


# ---------------------------------------------------------------- selection


@dataclass(frozen=True)
class Penalty:
    weights: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        bad = {k: v for k, v in self.weights.items() if v < 0}
        if bad:
            raise ValueError(f"penalties must be non-negative: {bad}")

    def cost(self, symbol: str) -> int:
        return self.weights.get(symbol, 0)

    @classmethod
    def default(cls, rare: Iterable[str] = (), heuristic_cost: int = 1, rare_cost: int = 1) -> "Penalty":
        weights = {t: rare_cost for t in rare}
        weights[HEUR_FLAG] = heuristic_cost
        return cls(weights)


def parse_penalty(text: str, source: str = "<penalty>") -> Penalty:
    """Lines of ``SYMBOL COST``; ``#`` starts a comment."""
    weights: dict[str, int] = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or not parts[1].isdigit():
            raise ValueError(f"{source}:{n}: expected 'SYMBOL COST', got {line!r}")
        weights[parts[0]] = int(parts[1])
    return Penalty(weights)


def load_penalty(path: str | Path) -> Penalty:
    return parse_penalty(Path(path).read_text(encoding="utf-8"), str(path))


def best_path(a: DFA, penalty: Penalty) -> tuple[str, ...] | None:
    """Cheapest accepted string; ties go to the shorter, then the smaller one."""
    alive = a.live()
    if not alive[a.start]:
        return None
    moves = _named_moves(a, alive)
    n = a.n_states
    rev: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for q in range(n):
        for sym, r in moves[q]:
            rev[r].append((q, penalty.cost(sym)))
    inf = (float("inf"), float("inf"))
    dist = [inf] * n
    heap = []
    for q in np.flatnonzero(a.accept & alive).tolist():
        dist[q] = (0, 0)
        heap.append((0, 0, q))
    heapq.heapify(heap)
    while heap:
        c, k, r = heapq.heappop(heap)
        if (c, k) != dist[r]:
            continue
        for q, w in rev[r]:
            cand = (c + w, k + 1)
            if cand < dist[q]:
                dist[q] = cand
                heapq.heappush(heap, (cand[0], cand[1], q))
    q, path = a.start, []
    while not (a.accept[q] and dist[q] == (0, 0)):
        c, k = dist[q]
        for sym, r in moves[q]:
            if dist[r] == (c - penalty.cost(sym), k - 1):
                path.append(sym)
                q = r
                break
        else:
            raise AssertionError("no move continues a cheapest path")
    return tuple(path)


def path_cost(path: Iterable[str], penalty: Penalty) -> int:
    return sum(penalty.cost(s) for s in path)


def select_parse(a: DFA, s: Sentence, penalty: Penalty = Penalty.default()) -> Sentence | None:
    path = best_path(a, penalty)
    return None if path is None else decode(path, s)


# ---------------------------------------------------------------- brute force


def brute_force_filter(
    s: Sentence, rules: Sequence[FsigRule | Regex], bound: int = DEFAULT_BOUND
) -> set[Sentence]:
    """Every reading combination that satisfies every rule, checked denotationally."""
    if s.combinations > bound:
        raise BoundExceeded(f"{s.combinations} reading combinations exceed the bound of {bound}")
    options = []
    for i, c in enumerate(s.cohorts):
        sep = (SENTENCE_EDGE,) if i == len(s.cohorts) - 1 else (WORD_BOUNDARY,)
        options.append([(enc + sep, c if r is None else c.replace((r,))) for enc, r in cohort_choices(c)])
    combos = list(itertools.product(*options))
    strings = [(SENTENCE_EDGE,) + tuple(itertools.chain.from_iterable(e for e, _ in combo)) for combo in combos]
    ok = Oracle(strings).holds_all(rules)
    return {Sentence(tuple(c for _, c in combo)) for combo, keep in zip(combos, ok) if keep}


__all__ = [
    "BoundExceeded",
    "DEFAULT_BOUND",
    "DecodeError",
    "Penalty",
    "base_symbol",
    "best_path",
    "brute_force_filter",
    "cohort_choices",
    "decode",
    "encode_parse",
    "encode_reading",
    "enumerate_parses",
    "intersect_all",
    "iter_paths",
    "load_penalty",
    "merge_parses",
    "parse_penalty",
    "parse_sentence",
    "path_cost",
    "select_parse",
    "sentence_alphabet",
    "sentence_to_automaton",
]
