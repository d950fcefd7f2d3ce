"""Complete deterministic automata over an open symbol alphabet.

Every automaton names a finite set of symbols; one extra column, OTHER,
stands for every symbol it does not name. Binary operations first extend both
operands to the union alphabet by copying the OTHER column. Minimised
automata are canonical: equal languages give equal objects.
"""
from __future__ import annotations

import sys
from collections import deque
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Sequence

import numpy as np

from .regex import (
    AnySym,
    Complement,
    Concat,
    Diff,
    Epsilon,
    Intersect,
    Optional,
    Plus,
    Regex,
    Star,
    Sym,
    Union,
)


@dataclass(frozen=True, eq=False)
class DFA:
    alphabet: tuple[str, ...]
    delta: np.ndarray  # (states, len(alphabet) + 1); last column is OTHER
    accept: np.ndarray  # bool per state
    start: int = 0

    # ------------------------------------------------------------ basics

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    def column(self, symbol: str) -> int:
        i = self._index.get(symbol)
        return len(self.alphabet) if i is None else i

    @property
    def _index(self) -> dict[str, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {s: i for i, s in enumerate(self.alphabet)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def accepts(self, symbols: Iterable[str]) -> bool:
        q = self.start
        for s in symbols:
            q = int(self.delta[q, self.column(s)])
        return bool(self.accept[q])

    def accepts_many(self, strings: np.ndarray, lengths: np.ndarray, symbols: Sequence[str]) -> np.ndarray:
        """Vectorised membership for padded index arrays over ``symbols``."""
        cols = np.array([self.column(s) for s in symbols] + [len(self.alphabet)], dtype=np.int64)
        q = np.full(strings.shape[0], self.start, dtype=np.int64)
        out = np.zeros(strings.shape[0], dtype=bool)
        for k in range(strings.shape[1] + 1):
            done = lengths == k
            out[done] = self.accept[q[done]]
            if k == strings.shape[1]:
                break
            q = self.delta[q, cols[strings[:, k]]]
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DFA):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.start == other.start
            and np.array_equal(self.delta, other.delta)
            and np.array_equal(self.accept, other.accept)
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.delta.tobytes(), self.accept.tobytes()))

    def __repr__(self) -> str:
        return f"DFA(states={self.n_states}, alphabet={len(self.alphabet)})"

    # ------------------------------------------------------------ analysis

    def live(self) -> np.ndarray:
        """States from which some accepting state is reachable."""
        n = self.n_states
        rev: list[list[int]] = [[] for _ in range(n)]
        for q, row in enumerate(self.delta.tolist()):
            for r in set(row):
                rev[r].append(q)
        alive = self.accept.copy()
        todo = deque(np.flatnonzero(alive).tolist())
        while todo:
            r = todo.popleft()
            for q in rev[r]:
                if not alive[q]:
                    alive[q] = True
                    todo.append(q)
        return alive

    def is_empty(self) -> bool:
        return not self.live()[self.start]

    def is_finite(self) -> bool:
        return self.count_paths() is not None

    def count_paths(self) -> int | None:
        """Number of accepted strings, or None when the language is infinite."""
        alive = self.live()
        if not alive[self.start]:
            return 0
        delta = self.delta.tolist()
        memo: dict[int, int] = {}
        on_stack: set[int] = set()

        def count(q: int) -> int | None:
            if q in memo:
                return memo[q]
            if q in on_stack:
                return None
            on_stack.add(q)
            total = int(self.accept[q])
            for c, r in enumerate(delta[q]):
                if not alive[r]:
                    continue
                if c == len(self.alphabet):
                    on_stack.discard(q)
                    return None  # OTHER stands for infinitely many symbols
                sub = count(r)
                if sub is None:
                    on_stack.discard(q)
                    return None
                total += sub
            on_stack.discard(q)
            memo[q] = total
            return total

        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 10 * self.n_states + 1000))
        try:
            return count(self.start)
        finally:
            sys.setrecursionlimit(limit)

    # ------------------------------------------------------------ alphabet

    def extend(self, alphabet: Sequence[str]) -> "DFA":
        """Same language over a larger named alphabet (must include ours)."""
        alphabet = tuple(alphabet)
        if alphabet == self.alphabet:
            return self
        cols = [self.column(s) for s in alphabet] + [len(self.alphabet)]
        return DFA(alphabet, self.delta[:, cols], self.accept, self.start)

    # ------------------------------------------------------------ minimisation

    def minimize(self) -> "DFA":
        """Canonical minimal automaton: trimmed, merged, BFS-numbered, no redundant symbols."""
        reach = self._reachable_order()
        delta = self.delta[reach]
        remap = np.full(self.n_states, -1, dtype=np.int64)
        remap[reach] = np.arange(len(reach))
        delta = remap[delta]
        accept = self.accept[reach]
        cls = _acyclic_classes(delta, accept)
        if cls is None:
            cls = _moore_classes(delta, accept)
        # one representative per class
        rep = np.unique(cls, return_index=True)[1]
        q_delta = cls[delta[rep]]
        q_accept = accept[rep]
        q_start = int(cls[0])
        # drop named symbols that behave exactly like OTHER
        other = q_delta[:, -1:]
        keep = [i for i in range(len(self.alphabet)) if not np.array_equal(q_delta[:, i : i + 1], other)]
        alphabet = tuple(self.alphabet[i] for i in keep)
        q_delta = q_delta[:, keep + [len(self.alphabet)]]
        return _renumber(alphabet, q_delta, q_accept, q_start)

    def _reachable_order(self) -> np.ndarray:
        delta = self.delta.tolist()
        seen = {self.start: 0}
        order = [self.start]
        i = 0
        while i < len(order):
            for r in delta[order[i]]:
                if r not in seen:
                    seen[r] = len(order)
                    order.append(r)
            i += 1
        return np.array(order, dtype=np.int64)


def _moore_classes(delta: np.ndarray, accept: np.ndarray) -> np.ndarray:
    _, cls = np.unique(accept, return_inverse=True)
    cls = cls.reshape(-1)
    n_cls = int(cls.max()) + 1
    while True:
        sig = np.column_stack([cls, cls[delta]])
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(-1)
        n_new = int(new.max()) + 1
        if n_new == n_cls:
            return cls
        cls, n_cls = new, n_new


def _acyclic_classes(delta: np.ndarray, accept: np.ndarray) -> np.ndarray | None:
    """One-pass state classes when the live part has no cycle, else None.

    Equivalent states have equal height (longest accepted continuation), so
    classes can be settled bottom-up, one height at a time.
    """
    n = delta.shape[0]
    rows = delta.tolist()
    acc = accept.tolist()
    rev: list[list[int]] = [[] for _ in range(n)]
    for q, row in enumerate(rows):
        for r in set(row):
            rev[r].append(q)
    alive = list(acc)
    todo = [q for q in range(n) if acc[q]]
    while todo:
        r = todo.pop()
        for q in rev[r]:
            if not alive[q]:
                alive[q] = True
                todo.append(q)
    succ = [{r for r in row if alive[r]} if alive[q] else set() for q, row in enumerate(rows)]
    pending = [len(x) for x in succ]
    ready = [q for q in range(n) if alive[q] and not pending[q]]
    order = []
    while ready:
        r = ready.pop()
        order.append(r)
        for q in rev[r]:
            if alive[q] and r in succ[q]:
                pending[q] -= 1
                if not pending[q]:
                    ready.append(q)
    if len(order) != sum(alive):
        return None
    cls = [0] * n  # 0 is the dead class
    seen: dict[tuple, int] = {}
    for q in order:  # successors are always settled first
        key = (acc[q], tuple(cls[r] if alive[r] else 0 for r in rows[q]))
        cls[q] = seen.setdefault(key, len(seen) + 1)
    return np.unique(np.array(cls), return_inverse=True)[1].reshape(-1)


def _renumber(alphabet, delta: np.ndarray, accept: np.ndarray, start: int) -> DFA:
    rows = delta.tolist()
    order = [start]
    index = {start: 0}
    i = 0
    while i < len(order):
        for r in rows[order[i]]:
            if r not in index:
                index[r] = len(order)
                order.append(r)
        i += 1
    mapping = np.array([index.get(q, -1) for q in range(len(rows))], dtype=np.int64)
    new_delta = mapping[delta[order]]
    return DFA(tuple(alphabet), new_delta.astype(np.int32), accept[order].copy(), 0)


# ---------------------------------------------------------------- constructors


def _make(alphabet, rows: list[list[int]], accept: list[bool], start: int = 0) -> DFA:
    width = len(alphabet) + 1
    delta = np.array(rows, dtype=np.int32).reshape(len(rows), width)
    return DFA(tuple(alphabet), delta, np.array(accept, dtype=bool), start)


def empty_language() -> DFA:
    return _make((), [[0]], [False])


def universal() -> DFA:
    return _make((), [[0]], [True])


def epsilon() -> DFA:
    return _make((), [[1], [1]], [True, False])


def any_symbol() -> DFA:
    return _make((), [[1], [2], [2]], [False, True, False])


def symbol(s: str) -> DFA:
    return _make((s,), [[1, 2], [2, 2], [2, 2]], [False, True, False])


def symbols(names: Iterable[str]) -> DFA:
    names = tuple(sorted(set(names)))
    n = len(names)
    return _make(names, [[1] * n + [2], [2] * (n + 1), [2] * (n + 1)], [False, True, False])


# ---------------------------------------------------------------- operations


def align(*automata: DFA) -> list[DFA]:
    alphabet = tuple(sorted(set().union(*(a.alphabet for a in automata))))
    return [a.extend(alphabet) for a in automata]


def _product(a: DFA, b: DFA, op: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> DFA:
    """Reachable part of the product automaton, built one BFS layer at a time."""
    a, b = align(a, b)
    nb = b.n_states
    da, db = a.delta.astype(np.int64), b.delta.astype(np.int64)
    ids = np.full(a.n_states * nb, -1, dtype=np.int64)
    frontier = np.array([a.start * nb + b.start], dtype=np.int64)
    ids[frontier] = 0
    layers, rows = [frontier], []
    count = 1
    while frontier.size:
        succ = da[frontier // nb] * nb + db[frontier % nb]
        rows.append(succ)
        new = np.unique(succ[ids[succ] < 0])
        ids[new] = np.arange(count, count + new.size)
        count += new.size
        layers.append(new)
        frontier = new
    pairs = np.concatenate(layers)
    delta = ids[np.concatenate(rows)].astype(np.int32)
    accept = op(a.accept[pairs // nb], b.accept[pairs % nb])
    return DFA(a.alphabet, delta, accept, 0).minimize()


def intersect(a: DFA, b: DFA) -> DFA:
    return _product(a, b, np.logical_and)


def union(a: DFA, b: DFA) -> DFA:
    return _product(a, b, np.logical_or)


def difference(a: DFA, b: DFA) -> DFA:
    return _product(a, b, lambda x, y: x & ~y)


def complement(a: DFA) -> DFA:
    return DFA(a.alphabet, a.delta, ~a.accept, a.start).minimize()


def concat(a: DFA, b: DFA) -> DFA:
    """Subset construction on (state of a, set of states of b)."""
    a, b = align(a, b)
    da, db = a.delta.tolist(), b.delta.tolist()
    aa, ab = a.accept.tolist(), b.accept.tolist()
    b_live = b.live().tolist()
    start_set = frozenset([b.start]) if aa[a.start] and b_live[b.start] else frozenset()
    start = (a.start, start_set)
    index = {start: 0}
    states = [start]
    rows: list[list[int]] = []
    width = len(a.alphabet) + 1
    i = 0
    while i < len(states):
        qa, qs = states[i]
        row = []
        for c in range(width):
            ra = da[qa][c]
            rs = {db[q][c] for q in qs}
            if aa[ra]:
                rs.add(b.start)
            key = (ra, frozenset(r for r in rs if b_live[r]))
            k = index.get(key)
            if k is None:
                k = index[key] = len(states)
                states.append(key)
            row.append(k)
        rows.append(row)
        i += 1
    accept = [any(ab[q] for q in qs) for _, qs in states]
    return _make(a.alphabet, rows, accept).minimize()


def star(a: DFA) -> DFA:
    da = a.delta.tolist()
    aa = a.accept.tolist()
    live = a.live().tolist()
    init = ("init",)
    index: dict = {init: 0}
    states: list = [init]
    rows: list[list[int]] = []
    accept: list[bool] = []
    width = len(a.alphabet) + 1
    i = 0
    while i < len(states):
        st = states[i]
        current = {a.start} if st == init else st
        row = []
        for c in range(width):
            nxt = {da[q][c] for q in current}
            if any(aa[q] for q in nxt):
                nxt.add(a.start)
            key = frozenset(q for q in nxt if live[q])
            k = index.get(key)
            if k is None:
                k = index[key] = len(states)
                states.append(key)
            row.append(k)
        rows.append(row)
        accept.append(st == init or any(aa[q] for q in st))
        i += 1
    return _make(a.alphabet, rows, accept).minimize()


def plus(a: DFA) -> DFA:
    return concat(a, star(a))


def optional(a: DFA) -> DFA:
    return union(a, epsilon())


def intersect_many(automata: Iterable[DFA]) -> DFA:
    return reduce(intersect, automata, universal())


def union_many(automata: Iterable[DFA]) -> DFA:
    return reduce(union, automata, empty_language())


def concat_many(automata: Iterable[DFA]) -> DFA:
    return reduce(concat, automata, epsilon())


# ---------------------------------------------------------------- regex compilation


def compile_regex(r: Regex) -> DFA:
    """Minimal automaton for the language of ``r``."""
    if isinstance(r, Sym):
        return symbol(r.name)
    if isinstance(r, AnySym):
        return any_symbol()
    if isinstance(r, Epsilon):
        return epsilon()
    if isinstance(r, Concat):
        return concat_many(compile_regex(p) for p in r.parts)
    if isinstance(r, Union):
        return union_many(compile_regex(p) for p in r.parts)
    if isinstance(r, Intersect):
        return intersect_many(compile_regex(p) for p in r.parts)
    if isinstance(r, Diff):
        return difference(compile_regex(r.left), compile_regex(r.right))
    if isinstance(r, Complement):
        return complement(compile_regex(r.body))
    if isinstance(r, Star):
        return star(compile_regex(r.body))
    if isinstance(r, Plus):
        return plus(compile_regex(r.body))
    if isinstance(r, Optional):
        return optional(compile_regex(r.body))
    raise TypeError(f"not a regex node: {r!r}")


__all__ = [
    "DFA",
    "align",
    "any_symbol",
    "compile_regex",
    "complement",
    "concat",
    "concat_many",
    "difference",
    "empty_language",
    "epsilon",
    "intersect",
    "intersect_many",
    "optional",
    "plus",
    "star",
    "symbol",
    "symbols",
    "union",
    "union_many",
    "universal",
]
