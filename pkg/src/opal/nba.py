"""Finite-state Büchi automata over opaque symbols.

Symbols are letters (strings) or :class:`TripleSet` summaries.  The
complement is the rank-based construction restricted to tight level
rankings, with ranks bounded by ``2·|Q \\ F|``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import networkx as nx

from .errors import InputError, ValidationError


class TripleSet(frozenset):
    """Frozen set of ``(start, end, visited_final)`` triples, compared by value."""

    def __repr__(self) -> str:
        body = ", ".join(f"({q},{p},{int(f)})" for q, p, f in self.sorted())
        return f"T{{{body}}}"

    __str__ = __repr__

    def sorted(self) -> list:
        return sorted(self, key=lambda t: (str(t[0]), str(t[1]), t[2]))


class Primed(NamedTuple):
    """Final copy ``p′`` of a state reached by a semisupport through ``F``."""

    state: object

    def __str__(self) -> str:
        return f"{self.state}'"


def _key(x):
    return str(x)


@dataclass(frozen=True)
class Nba:
    alphabet: tuple
    states: tuple
    initial: frozenset
    final: frozenset
    delta: dict = field(default_factory=dict)

    __hash__ = None

    def __post_init__(self):
        declared = set(self.states)
        letters = set(self.alphabet)
        for q in itertools.chain(self.initial, self.final):
            if q not in declared:
                raise ValidationError(f"undeclared state {q!r}")
        for (q, a), ts in self.delta.items():
            if q not in declared or not ts <= declared:
                raise ValidationError(f"transition on undeclared state from {q!r}")
            if a not in letters:
                raise ValidationError(f"transition on unknown symbol {a!r}")

    @classmethod
    def build(cls, alphabet, states, initial, final, edges):
        delta: dict = {}
        for q, a, t in edges:
            delta.setdefault((q, a), set()).add(t)
        return cls(tuple(alphabet), tuple(states), frozenset(initial), frozenset(final),
                   {k: frozenset(v) for k, v in delta.items()})

    def step(self, q, a) -> frozenset:
        return self.delta.get((q, a), frozenset())

    def is_final(self, q) -> bool:
        return q in self.final

    def trim(self) -> "Nba":
        """Drop states that are unreachable or cannot reach an accepting cycle."""
        g = nx.DiGraph()
        g.add_nodes_from(self.states)
        for (q, _), ts in self.delta.items():
            g.add_edges_from((q, t) for t in ts)
        reach = set()
        for q in self.initial:
            reach |= nx.descendants(g, q) | {q}
        good = set()
        for comp in nx.strongly_connected_components(g):
            if not comp & self.final:
                continue
            if len(comp) > 1 or any(g.has_edge(q, q) for q in comp):
                good |= comp
        useful = set(good)
        for q in good:
            useful |= nx.ancestors(g, q)
        keep = reach & useful
        delta = {}
        for (q, a), ts in self.delta.items():
            if q in keep and ts & keep:
                delta[(q, a)] = frozenset(ts & keep)
        return Nba(self.alphabet, tuple(q for q in self.states if q in keep),
                   self.initial & keep, self.final & keep, delta)

    def quotient(self) -> "Nba":
        """Merge bisimilar states (same finality, same successor blocks per symbol)."""
        block = {q: int(q in self.final) for q in self.states}
        while True:
            sig = {q: (block[q], frozenset((a, block[t]) for a in self.alphabet
                                           for t in self.step(q, a)))
                   for q in self.states}
            ids: dict = {}
            new = {q: ids.setdefault(sig[q], len(ids)) for q in self.states}
            if len(ids) == len(set(block.values())):
                break
            block = new
        rep: dict = {}
        for q in self.states:
            rep.setdefault(block[q], q)
        edges = {(rep[block[q]], a, rep[block[t]])
                 for (q, a), ts in self.delta.items() for t in ts}
        return Nba.build(self.alphabet, list(rep.values()), {rep[block[q]] for q in self.initial},
                         {rep[block[q]] for q in self.final}, sorted(edges, key=str))


# -- rank-based complement -----------------------------------------------------


class RankComplement:
    """Lazy complement of an NBA by tight odd level rankings.

    A run first tracks the plain subset ``("S", frontier)`` and at some
    point guesses a tight ranking ``("R", ranks, owing)``: ``ranks`` maps
    the frontier to ranks (even on final states) whose maximum is odd with
    every smaller odd rank in use, and ``owing`` holds the even-ranked
    states that still have to reach an odd rank.  A ranking state with
    empty ``owing`` is accepting.
    """

    def __init__(self, n, max_rank: int | None = None):
        self.n = n
        self.alphabet = tuple(getattr(n, "alphabet", ()))
        if max_rank is None:
            max_rank = 2 * sum(1 for q in n.states if not n.is_final(q))
        self.max_rank = max_rank
        frontier = tuple(sorted(n.initial, key=_key))
        start = {(q, max_rank) for q in frontier}
        self.initial = frozenset({("S", frontier)}) | frozenset(self._rankings(start, None))
        self._cache: dict = {}

    def is_final(self, state) -> bool:
        return state[0] == "R" and not state[2]

    def step(self, state, a) -> frozenset:
        key = (state, a)
        out = self._cache.get(key)
        if out is None:
            out = self._cache[key] = frozenset(self._successors(state, a))
        return out

    def _successors(self, state, a):
        if state[0] == "S":
            succ = {t for q in state[1] for t in self.n.step(q, a)}
            yield ("S", tuple(sorted(succ, key=_key)))
            yield from self._rankings({(t, self.max_rank) for t in succ}, None)
            return
        _, ranks, owing = state
        bound = set()
        for q, r in ranks:
            for t in self.n.step(q, a):
                bound.add((t, r))
        owing_next = {t for q in owing for t in self.n.step(q, a)}
        yield from self._rankings(bound, owing_next if owing else None)

    def _rankings(self, bound, owing_next):
        """Tight rankings below ``bound`` (pairs ``(state, rank)``, least rank wins)."""
        top: dict = {}
        for t, r in bound:
            top[t] = min(top.get(t, r), r)
        succ = sorted(top, key=_key)
        choices = []
        for t in succ:
            r = top[t]
            if self.n.is_final(t):
                choices.append(range(r - r % 2, -1, -2))
            else:
                choices.append(range(r, -1, -1))
        for combo in itertools.product(*choices):
            if not _tight(combo):
                continue
            g = tuple(zip(succ, combo))
            evens = {t for t, r in g if r % 2 == 0}
            o = evens if owing_next is None else owing_next & evens
            yield ("R", g, frozenset(o))

    def run(self, state, word) -> set:
        current = {state}
        for a in word:
            current = {s for q in current for s in self.step(q, a)}
        return current


def _tight(ranks) -> bool:
    if not ranks:
        return True
    top = max(ranks)
    return top % 2 == 1 and set(range(1, top, 2)) <= set(ranks)


def _explore(n, alphabet) -> Nba:
    order = {}
    todo = deque()
    for q in sorted(n.initial, key=_key):
        order[q] = None
        todo.append(q)
    edges = []
    while todo:
        q = todo.popleft()
        for a in alphabet:
            for t in sorted(n.step(q, a), key=_key):
                edges.append((q, a, t))
                if t not in order:
                    order[t] = None
                    todo.append(t)
    states = list(order)
    return Nba.build(alphabet, states, n.initial, [q for q in states if n.is_final(q)], edges)


def nba_complement(n: Nba, lazy: bool = False):
    """Complement over ``n``'s alphabet (explicit unless ``lazy``)."""
    comp = RankComplement(n.trim())
    if lazy:
        return comp
    return _explore(comp, n.alphabet)


def nba_product(n1, n2):
    """Intersection with a two-phase flag: phase 0 waits for ``F1``, phase 1 for ``F2``."""
    if set(n1.alphabet) != set(n2.alphabet):
        raise InputError("alphabet mismatch in nba_product")

    class _Product:
        alphabet = n1.alphabet
        initial = frozenset((p, q, 0) for p in n1.initial for q in n2.initial)

        @staticmethod
        def step(s, a):
            p, q, f = s
            if f == 0:
                f2 = 1 if n1.is_final(p) else 0
            else:
                f2 = 0 if n2.is_final(q) else 1
            return frozenset((p2, q2, f2) for p2 in n1.step(p, a) for q2 in n2.step(q, a))

        @staticmethod
        def is_final(s):
            return s[2] == 0 and n1.is_final(s[0])

    return _explore(_Product, n1.alphabet)


def _accepting_cycle(g: nx.DiGraph, starts, is_final) -> bool:
    reach = set()
    for s in starts:
        if s in g:
            reach |= nx.descendants(g, s) | {s}
    sub = g.subgraph(reach)
    for comp in nx.strongly_connected_components(sub):
        if not any(is_final(x) for x in comp):
            continue
        if len(comp) > 1 or any(sub.has_edge(x, x) for x in comp):
            return True
    return False


def nba_is_empty(n) -> bool:
    g = nx.DiGraph()
    explicit = n if isinstance(n, Nba) else _explore(n, n.alphabet)
    g.add_nodes_from(explicit.states)
    for (q, _), ts in explicit.delta.items():
        g.add_edges_from((q, t) for t in ts)
    return not _accepting_cycle(g, explicit.initial, explicit.is_final)


def nba_accepts_lasso(n, lasso) -> bool:
    """Does ``n`` accept ``u·v^ω``?  Works on lazy automata too."""
    prefix, period = tuple(lasso[0]), tuple(lasso[1])
    if not period:
        raise InputError("lasso period must be nonempty")
    word = prefix + period
    size = len(word)
    nxt = [i + 1 if i + 1 < size else len(prefix) for i in range(size)]
    g = nx.DiGraph()
    starts = [(q, 0) for q in n.initial]
    seen = set(starts)
    todo = deque(starts)
    while todo:
        q, i = todo.popleft()
        g.add_node((q, i))
        for t in n.step(q, word[i]):
            v = (t, nxt[i])
            g.add_edge((q, i), v)
            if v not in seen:
                seen.add(v)
                todo.append(v)
    # only positions inside the period can recur
    return _accepting_cycle(g, starts, lambda s: n.is_final(s[0]) and s[1] >= len(prefix))


def build_pseudorun_nba(a, transducer=None) -> Nba:
    """The NBA ``A_R`` reading pseudoruns of ``a`` (a completed Büchi-final automaton).

    Letter edges copy push edges; a triple-set symbol ``S`` links ``q`` to
    ``p`` for each ``(q, p, 0)`` and to the final copy ``p′`` for each
    ``(q, p, 1)``.  Only triple sets the transducer can emit are used.
    """
    from .closures import build_pseudorun_transducer, emitted_symbols

    if transducer is None:
        transducer = build_pseudorun_transducer(a)
    sets = emitted_symbols(transducer)
    alphabet = tuple(a.opm.alphabet) + tuple(sets)
    primes = sorted({Primed(p) for s in sets for (_, p, f) in s if f}, key=_key)
    states = list(a.states) + primes
    edges = []
    for q in a.states:
        for c in a.opm.alphabet:
            for p in a.push(q, c):
                edges.append((q, c, p))
        for s in sets:
            for (x, p, f) in s:
                if x == q:
                    edges.append((q, s, Primed(p) if f else p))
    for pr in primes:
        for q, c, t in [e for e in edges if e[0] == pr.state]:
            edges.append((pr, c, t))
    final = set(a.final) | set(primes)
    return Nba.build(alphabet, states, a.initial, final, edges)
