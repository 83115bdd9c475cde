"""Brute-force reference implementations used only by the tests.

They follow the recursive definition of chains and supports directly and
share no code with the library's shift/reduce machinery.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from opal.opm import EQ, GT, HASH, LT


def _rel(m, a, b):
    if b == HASH:
        return EQ if a == HASH else GT
    return m.cells.get((a, b))


def splits(m, a0, x, a1):
    """All ways to read ``⌈a0 x a1⌉`` as a chain.

    Each split is ``(picks, gaps)``: the positions of the simple chain
    ``c1..cl`` and the gap words between them (possibly empty).
    """
    x = tuple(x)
    out = []
    n = len(x)
    if _rel(m, a0, a1) is None:
        return out
    for l in range(1, n + 1):
        for picks in itertools.combinations(range(n), l):
            cs = [x[i] for i in picks]
            if _rel(m, a0, cs[0]) is not LT or _rel(m, cs[-1], a1) is not GT:
                continue
            if any(_rel(m, cs[i], cs[i + 1]) is not EQ for i in range(l - 1)):
                continue
            bounds = [-1, *picks, n]
            ctx = [a0, *cs, a1]
            gaps = []
            ok = True
            for i in range(l + 1):
                gap = x[bounds[i] + 1:bounds[i + 1]]
                if gap and not brute_is_chain(m, ctx[i], gap, ctx[i + 1]):
                    ok = False
                    break
                gaps.append(gap)
            if ok:
                out.append((picks, gaps))
    return out


@lru_cache(maxsize=None)
def _chain(m, a0, x, a1):
    return bool(x) and bool(splits(m, a0, x, a1))


def brute_is_chain(m, a0, x, a1) -> bool:
    return _chain(m, a0, tuple(x), a1)


class Supports:
    """Memoized supports of one automaton."""

    def __init__(self, a):
        self.a = a
        self._memo: dict = {}

    def __call__(self, a0, x, a1, q0) -> frozenset:
        """``{(end_state, saw_final)}`` over supports of ``⌈a0 x a1⌉`` starting in ``q0``.

        ``saw_final`` covers every state entered after ``q0``.
        """
        key = (a0, tuple(x), a1, q0)
        if key not in self._memo:
            self._memo[key] = self._compute(*key)
        return self._memo[key]

    def _compute(self, a0, x, a1, q0):
        a = self.a
        result = set()
        for picks, gaps in splits(a.opm, a0, x, a1):
            cs = [x[i] for i in picks]
            ctx = [a0, *cs, a1]
            paths = {(q0, False)}
            if gaps[0]:
                paths = {(p, f) for q, _ in paths for p, f in self(a0, gaps[0], ctx[1], q)}
            # (state, saw_final, state below the chain's marked entry)
            paths = {(q, f, q) for q, f in paths}
            for i, c in enumerate(cs, start=1):
                paths = {(p, f or a.is_final(p), below)
                         for q, f, below in paths for p in a.push(q, c)}
                if gaps[i]:
                    paths = {(p, f or f2, below) for q, f, below in paths
                             for p, f2 in self(c, gaps[i], ctx[i + 1], q)}
            for q, f, below in paths:
                for p in a.flush(q, below):
                    result.add((p, f or a.is_final(p)))
        return frozenset(result)


def semisupport_triples(a, a0, x, a1, sup: Supports | None = None) -> frozenset:
    """``T(x)``: triples ``(q, p, f)`` over semisupports from any start state."""
    sup = sup or Supports(a)
    return frozenset((q, p, f) for q in a.states for p, f in sup(a0, x, a1, q))


def naive_accepts(a, w) -> bool:
    """Classical acceptance as ``⌈# w #⌉`` having a support from I to F."""
    w = tuple(w)
    if not w:
        return any(a.is_final(q) for q in a.initial)
    sup = Supports(a)
    return any(a.is_final(p) for q in a.initial for p, _ in sup(HASH, w, HASH, q))


def compatible_words(m, n: int):
    """Every word of length ≤ n that reduces completely under ``m``."""
    from opal.opm import compatible_finite

    for k in range(n + 1):
        for w in itertools.product(m.alphabet, repeat=k):
            if compatible_finite(m, w):
                yield w
