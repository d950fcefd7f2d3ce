"""Denotational evaluation of regexes and implication rules on concrete strings.

For a string w of length n, a regex denotes the boolean span matrix
M[i, j] = (w[i:j] is in the language), 0 <= i <= j <= n. Concatenation is a
boolean matrix product, star a reflexive-transitive closure, and
intersection, difference and complement act elementwise on valid spans.
Most questions only need one row or column of M (which prefixes, which
suffixes match), so position sets are pushed through the expression and full
matrices are built only below boolean operators. Nothing here touches the
automaton code, so it serves as an independent check of it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

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

BATCH = 512


@dataclass
class Batch:
    """Padded symbol-index matrix for a group of strings."""

    codes: np.ndarray  # (B, L) int, -1 beyond each string's end
    lengths: np.ndarray  # (B,)
    index: dict[str, int]

    @classmethod
    def of(cls, strings: Sequence[Sequence[str]], index: dict[str, int] | None = None) -> "Batch":
        index = dict(index or {})
        for w in strings:
            for s in w:
                index.setdefault(s, len(index))
        width = max((len(w) for w in strings), default=0)
        codes = np.full((len(strings), width), -1, dtype=np.int64)
        for b, w in enumerate(strings):
            codes[b, : len(w)] = [index[s] for s in w]
        return cls(codes, np.array([len(w) for w in strings], dtype=np.int64), index)

    @property
    def size(self) -> int:
        return self.codes.shape[1] + 1


def _running_or(x: np.ndarray) -> np.ndarray:
    """Cumulative OR along the last axis (uint8 max is much faster than bool OR)."""
    return np.maximum.accumulate(x.view(np.uint8), axis=-1).view(bool)


def _is_any_star(r: Regex) -> bool:
    return isinstance(r, Star) and isinstance(r.body, AnySym)


class _Evaluator:
    """Span semantics for one batch; positions run 0..L, invalid ones stay False."""

    def __init__(self, batch: Batch):
        self.batch = batch
        self.n = batch.size
        pos = np.arange(self.n)
        self.valid_pos = pos[None, :] <= batch.lengths[:, None]  # (B, N)
        self.valid = (pos[:, None] <= pos[None, :])[None] & self.valid_pos[:, None, :]
        self.memo: dict = {}
        self.keep: list[Regex] = []  # keeps memo ids alive

    # ------------------------------------------------------------ single symbols

    def hits(self, r: Regex) -> np.ndarray | None:
        """Per-position membership when r denotes a set of single symbols."""
        codes = self.batch.codes
        if isinstance(r, Sym):
            return codes == self.batch.index.get(r.name, -2)
        if isinstance(r, AnySym):
            return codes >= 0
        if isinstance(r, Union):
            parts = [self.hits(p) for p in r.parts]
            if all(p is not None for p in parts):
                return np.logical_or.reduce(parts)
        return None

    # ------------------------------------------------------------ position sets

    def fwd(self, r: Regex, v: np.ndarray) -> np.ndarray:
        """End positions j with w[i:j] in L(r) for some start i in v."""
        h = self.hits(r)
        if h is not None:
            out = np.zeros_like(v)
            out[:, 1:] = v[:, :-1] & h
            return out
        if _is_any_star(r):
            return _running_or(v) & self.valid_pos
        if isinstance(r, Epsilon):
            return v
        if isinstance(r, Concat):
            for p in r.parts:
                v = self.fwd(p, v)
            return v
        if isinstance(r, Union):
            return np.logical_or.reduce([self.fwd(p, v) for p in r.parts])
        if isinstance(r, Optional):
            return v | self.fwd(r.body, v)
        if isinstance(r, Star):
            return self._fwd_star(r.body, v)
        if isinstance(r, Plus):
            return self._fwd_star(r.body, self.fwd(r.body, v))
        return np.matmul(v[:, None, :].astype(np.float32), self.fmat(r))[:, 0] > 0.5

    def _fwd_star(self, body: Regex, v: np.ndarray) -> np.ndarray:
        reached, frontier = v.copy(), v
        while frontier.any():
            step = self.fwd(body, frontier)
            frontier = step & ~reached
            reached |= step
        return reached

    def bwd(self, r: Regex, u: np.ndarray) -> np.ndarray:
        """Start positions i with w[i:j] in L(r) for some end j in u."""
        h = self.hits(r)
        if h is not None:
            out = np.zeros_like(u)
            out[:, :-1] = h & u[:, 1:]
            return out
        if _is_any_star(r):
            return _running_or(u[:, ::-1])[:, ::-1] & self.valid_pos
        if isinstance(r, Epsilon):
            return u
        if isinstance(r, Concat):
            for p in reversed(r.parts):
                u = self.bwd(p, u)
            return u
        if isinstance(r, Union):
            return np.logical_or.reduce([self.bwd(p, u) for p in r.parts])
        if isinstance(r, Optional):
            return u | self.bwd(r.body, u)
        if isinstance(r, Star):
            return self._bwd_star(r.body, u)
        if isinstance(r, Plus):
            return self._bwd_star(r.body, self.bwd(r.body, u))
        return np.matmul(self.fmat(r), u[:, :, None].astype(np.float32))[:, :, 0] > 0.5

    def _bwd_star(self, body: Regex, u: np.ndarray) -> np.ndarray:
        reached, frontier = u.copy(), u
        while frontier.any():
            step = self.bwd(body, frontier)
            frontier = step & ~reached
            reached |= step
        return reached

    # ------------------------------------------------------------ full matrices

    @staticmethod
    def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.matmul(a.astype(np.float32), b.astype(np.float32)) > 0.5

    def eye(self) -> np.ndarray:
        return self.valid & np.eye(self.n, dtype=bool)[None]

    def closure(self, m: np.ndarray) -> np.ndarray:
        r = self.eye() | m
        while True:
            nxt = r | self.matmul(r, r)
            if np.array_equal(nxt, r):
                return r
            r = nxt

    def mat(self, r: Regex) -> np.ndarray:
        key = id(r)
        got = self.memo.get(key)
        if got is not None:
            return got
        out = self._mat(r) & self.valid
        self.memo[key] = out
        self.keep.append(r)
        return out

    def fmat(self, r: Regex) -> np.ndarray:
        key = ("f", id(r))
        got = self.memo.get(key)
        if got is None:
            got = self.memo[key] = self.mat(r).astype(np.float32)
        return got

    def _right(self, m: np.ndarray, r: Regex) -> np.ndarray:
        h = self.hits(r)
        if h is not None:
            out = np.zeros_like(m)
            out[:, :, 1:] = m[:, :, :-1] & h[:, None, :]
            return out
        if _is_any_star(r):
            return _running_or(m)
        return np.matmul(m.astype(np.float32), self.fmat(r)) > 0.5

    def _mat(self, r: Regex) -> np.ndarray:
        if self.hits(r) is not None:
            return self._right(self.eye(), r)
        if _is_any_star(r):
            return self.valid.copy()
        if isinstance(r, Epsilon):
            return self.eye()
        if isinstance(r, Concat):
            out = self.mat(r.parts[0])
            for p in r.parts[1:]:
                out = self._right(out, p)
            return out
        if isinstance(r, Union):
            return np.logical_or.reduce([self.mat(p) for p in r.parts])
        if isinstance(r, Intersect):
            return np.logical_and.reduce([self.mat(p) for p in r.parts])
        if isinstance(r, Diff):
            return self.mat(r.left) & ~self.mat(r.right)
        if isinstance(r, Complement):
            return self.valid & ~self.mat(r.body)
        if isinstance(r, Star):
            return self.closure(self.mat(r.body))
        if isinstance(r, Plus):
            body = self.mat(r.body)
            return self.matmul(body, self.closure(body))
        if isinstance(r, Optional):
            return self.mat(r.body) | self.eye()
        raise TypeError(f"not a regex node: {r!r}")

    # ------------------------------------------------------------ queries

    def starts(self) -> np.ndarray:
        v = np.zeros((len(self.batch.lengths), self.n), dtype=bool)
        v[:, 0] = True
        return v

    def ends(self) -> np.ndarray:
        u = np.zeros((len(self.batch.lengths), self.n), dtype=bool)
        u[np.arange(len(u)), self.batch.lengths] = True
        return u

    def member(self, r: Regex) -> np.ndarray:
        """Whole-string membership; boolean operators act on it directly."""
        if isinstance(r, Complement):
            return ~self.member(r.body)
        if isinstance(r, Intersect):
            return np.logical_and.reduce([self.member(p) for p in r.parts])
        if isinstance(r, Union):
            return np.logical_or.reduce([self.member(p) for p in r.parts])
        if isinstance(r, Diff):
            return self.member(r.left) & ~self.member(r.right)
        v = self.fwd(r, self.starts())
        return v[np.arange(len(v)), self.batch.lengths]

    def implication(self, center: Regex, contexts: Sequence[tuple[Regex, Regex]]) -> np.ndarray:
        # prefix_ok[i]: w[:i] in L(left); suffix_ok[j]: w[j:] in L(right)
        pairs = [(self.fwd(lc, self.starts()), self.bwd(rc, self.ends())) for lc, rc in contexts]
        h = self.hits(center)
        if h is not None:  # every occurrence is a span (i, i + 1)
            licensed = np.logical_or.reduce([p[:, :-1] & s[:, 1:] for p, s in pairs])
            return ~(h & ~licensed).any(axis=1)
        x = self.mat(center)
        licensed = np.zeros_like(x)
        for p, s in pairs:
            licensed |= p[:, :, None] & s[:, None, :]
        return ~(x & ~licensed).any(axis=(1, 2))


def _batches(strings: Sequence[Sequence[str]]):
    order = np.array(sorted(range(len(strings)), key=lambda k: len(strings[k])), dtype=np.int64)
    for start in range(0, len(order), BATCH):
        chunk = order[start : start + BATCH]
        yield chunk, Batch.of([strings[k] for k in chunk])


class Oracle:
    """Rule checks over a fixed set of strings; span matrices are shared across rules."""

    def __init__(self, strings: Sequence[Sequence[str]]):
        self.size = len(strings)
        self.batches = [(chunk, _Evaluator(batch)) for chunk, batch in _batches(strings)]

    def _run(self, fn) -> np.ndarray:
        out = np.zeros(self.size, dtype=bool)
        for chunk, ev in self.batches:
            out[chunk] = fn(ev)
        return out

    def regex(self, r: Regex) -> np.ndarray:
        """w in L(r), for each string."""
        return self._run(lambda ev: ev.member(r))

    def implication(self, center: Regex, contexts: Sequence[tuple[Regex, Regex]]) -> np.ndarray:
        """Every occurrence of the center has a context matching the whole prefix and suffix."""
        return self._run(lambda ev: ev.implication(center, contexts))

    def holds(self, rule) -> np.ndarray:
        """A rule object (implication, reject) or a bare regex."""
        if hasattr(rule, "contexts"):
            return self.implication(rule.center, rule.contexts)
        if hasattr(rule, "regex"):
            return self.regex(rule.regex)
        return self.regex(rule)

    def holds_all(self, rules: Sequence) -> np.ndarray:
        ok = np.ones(self.size, dtype=bool)
        for rule in rules:
            ok &= self.holds(rule)
        return ok


def regex_member(r: Regex, strings: Sequence[Sequence[str]]) -> np.ndarray:
    return Oracle(strings).regex(r)


def implication_member(
    center: Regex, contexts: Sequence[tuple[Regex, Regex]], strings: Sequence[Sequence[str]]
) -> np.ndarray:
    return Oracle(strings).implication(center, contexts)


__all__ = ["Batch", "Oracle", "implication_member", "regex_member"]
