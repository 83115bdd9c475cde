"""Pushdown-system encoding of operator precedence automata and emptiness.

Controls are ``('L', q)`` (about to choose the next letter),
``('R', q, d)`` (lookahead ``d`` chosen) and ``('F', q, d)`` (inside a
flush cascade).  Stack symbols are ``(symbol, marked, saved)`` where
``saved`` is the flush key of the state below at push time.  Rules are only
generated for heads reachable from the initial configurations.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import networkx as nx

from .errors import InputError
from .omega import (BuchiEmptyStack, BuchiFinal, Lasso, OmegaOpa, acceptance_kind,
                    to_buchi_final)
from .opa import Configuration, Entry
from .opm import EQ, GT, HASH, LT

BOTTOM = (HASH, False, None)
ACCEPT = ("accept",)


class Rule(NamedTuple):
    src: tuple
    gamma: tuple
    dst: tuple
    word: tuple
    label: str | None = None


@dataclass
class Pds:
    """Reachable fragment of the encoding of one automaton."""

    rules: list
    initial_heads: list
    heads: list
    finite: bool
    push_moves: list = field(default_factory=list)
    flush_moves: list = field(default_factory=list)

    @property
    def controls(self) -> set:
        return {h[0] for h in self.heads} | {r.dst for r in self.rules}

    @property
    def stack_alphabet(self) -> set:
        out = {h[1] for h in self.heads}
        for r in self.rules:
            out.update(r.word)
        return out


def _head_rules(a, head, finite: bool) -> list:
    control, g = head
    sym, marked, saved = g
    kind, q = control[0], control[1]
    m = a.opm
    out = []
    if kind == "L":
        looks = m.alphabet + ((HASH,) if finite else ())
        for d in looks:
            if m.rel(sym, d) is not None:
                out.append(Rule(control, g, ("R", q, d), (g,)))
        return out
    d = control[2]
    if kind == "R":
        if sym == HASH and d == HASH:
            return out
        r = m.rel(sym, d)
        if r is LT or r is EQ:
            entry = (d, r is LT, a.flush_key(q))
            for p in sorted(a.push(q, d), key=str):
                out.append(Rule(control, g, ("L", p), (entry, g), d))
            return out
        if r is not GT:
            return out
    if g == BOTTOM:
        return out
    if marked:
        for p in sorted(a.flush(q, saved), key=str):
            out.append(Rule(control, g, ("R", p, d), ()))
    else:
        out.append(Rule(control, g, ("F", q, d), ()))
    return out


def opa_to_pds(a, finite: bool | None = None) -> Pds:
    """Encode ``a`` and explore the heads reachable from its initial states.

    Exploration tracks, per frame ``(entry control, top symbol)``, the
    controls reachable with that symbol on top and the controls that pop
    it, so returns from pushes are propagated to every caller.
    """
    if finite is None:
        finite = hasattr(a, "mode")
    frames_ctrl: dict = {}
    frames_exit: dict = {}
    callers: dict = defaultdict(list)
    rules_of: dict = {}
    rules: list = []
    heads: list = []
    todo: deque = deque()
    push_moves, flush_moves = [], []

    def enter(frame, control):
        ctrls = frames_ctrl.setdefault(frame, {})
        if control not in ctrls:
            ctrls[control] = None
            todo.append((frame, control))

    initial = [(("L", q), BOTTOM) for q in sorted(a.initial, key=str)]
    for h in initial:
        frames_exit.setdefault(h, {})
        enter(h, h[0])
    while todo:
        frame, control = todo.popleft()
        g = frame[1]
        head = (control, g)
        rs = rules_of.get(head)
        if rs is None:
            rs = rules_of[head] = _head_rules(a, head, finite)
            heads.append(head)
            for r in rs:
                rules.append(r)
                if r.label is not None:
                    push_moves.append((control[1], r.label, r.dst[1]))
                elif r.src[0] != "L" and not r.word and r.dst[0] == "R":
                    flush_moves.append((control[1], g[2], r.dst[1]))
        for r in rs:
            if len(r.word) == 1:
                enter(frame, r.dst)
            elif len(r.word) == 2:
                sub = (r.dst, r.word[0])
                if sub not in frames_exit:
                    frames_exit[sub] = {}
                if frame not in callers[sub]:
                    callers[sub].append(frame)
                enter(sub, r.dst)
                for x in list(frames_exit[sub]):
                    enter(frame, x)
            else:
                ex = frames_exit.setdefault(frame, {})
                if r.dst not in ex:
                    ex[r.dst] = None
                    for caller in callers[frame]:
                        enter(caller, r.dst)
    return Pds(rules, initial, heads, finite, push_moves, flush_moves)


# -- saturation ---------------------------------------------------------------


@dataclass
class PAutomaton:
    """Finite automaton over stack symbols whose states include the controls.

    ``transitions`` maps ``(state, symbol, state, bit)`` to a certificate.
    """

    transitions: dict
    finals: set

    def accepts(self, control, stack) -> bool:
        """Does the automaton accept ``⟨control, stack⟩`` (stack top first)?"""
        current = {control}
        for g in stack:
            current = {t for (s, h, t, _) in self.transitions if s in current and h == g}
        return bool(current & self.finals)

    def has(self, s, g, t) -> bool:
        return (s, g, t, True) in self.transitions or (s, g, t, False) in self.transitions


def pre_star(pds: Pds, target: PAutomaton, accepting: Callable | None = None) -> PAutomaton:
    """Saturate ``target`` into an automaton for its predecessor set.

    Transitions carry a bit recording whether the derivation passed an
    accepting head; each new transition keeps one certificate
    ``(kind, rule, sub-transitions...)`` for witness decoding.
    """
    acc = accepting or (lambda head: False)
    rel: dict = {}
    by_key: dict = defaultdict(list)
    work: deque = deque()
    rewrites = defaultdict(list)
    pushes = defaultdict(list)
    derived = defaultdict(list)
    seen_derived = set()

    def add(t, cert):
        if t in rel:
            return
        if not t[3] and (t[0], t[1], t[2], True) in rel:
            return
        rel[t] = cert
        by_key[(t[0], t[1])].append(t)
        work.append(t)

    for t, cert in target.transitions.items():
        add(t, cert or ("target",))
    for r in pds.rules:
        bit = bool(acc((r.src, r.gamma)))
        if not r.word:
            add((r.src, r.gamma, r.dst, bit), ("pop", r))
        elif len(r.word) == 1:
            rewrites[(r.dst, r.word[0])].append(r)
        else:
            pushes[(r.dst, r.word[0])].append(r)
    while work:
        t = work.popleft()
        q, g, q2, b = t
        for r in rewrites[(q, g)]:
            add((r.src, r.gamma, q2, b or bool(acc((r.src, r.gamma)))), ("rewrite", r, t))
        for src, gamma, bb, r, first in list(derived[(q, g)]):
            add((src, gamma, q2, bb or b), ("push", r, first, t))
        for r in pushes[(q, g)]:
            bb = b or bool(acc((r.src, r.gamma)))
            key = (q2, r.word[1])
            marker = (r, bb, key)
            if marker in seen_derived:
                continue
            seen_derived.add(marker)
            derived[key].append((r.src, r.gamma, bb, r, t))
            for t3 in list(by_key[key]):
                add((r.src, r.gamma, t3[2], bb or t3[3]), ("push", r, t, t3))
    return PAutomaton(rel, set(target.finals))


def expand(pa: PAutomaton, t) -> list:
    """Rule sequence realizing a saturated transition, from its certificates."""
    out = []
    stack = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, Rule):
            out.append(item)
            continue
        cert = pa.transitions[item]
        kind = cert[0]
        if kind == "pop":
            out.append(cert[1])
        elif kind == "rewrite":
            stack.append(cert[2])
            stack.append(cert[1])
        elif kind == "push":
            stack.append(cert[3])
            stack.append(cert[2])
            stack.append(cert[1])
    return out


def labels(rules) -> tuple:
    return tuple(r.label for r in rules if r.label is not None)


# -- Büchi emptiness ------------------------------------------------------------


def accepting_predicate(a) -> Callable:
    """Head predicate for ``a``'s acceptance (final controls, or final over bottom)."""
    kind = acceptance_kind(a)
    if kind == "muller":
        raise InputError("convert Muller automata with muller_to_buchi first")

    def on_state(head):
        control = head[0]
        return control[0] in "LR" and a.is_final(control[1])

    if kind == "buchi_empty_stack":
        return lambda head: head[1] == BOTTOM and on_state(head)
    return on_state


@dataclass
class HeadGraph:
    graph: nx.DiGraph
    summaries: PAutomaton
    repeating: set


def _head_graph(pds: Pds, accepting: Callable) -> HeadGraph:
    target = PAutomaton({}, set())
    summaries = pre_star(pds, target, accepting)
    exits = defaultdict(list)
    for t in summaries.transitions:
        exits[(t[0], t[1])].append(t)
    g = nx.DiGraph()
    g.add_nodes_from(pds.heads)

    def edge(u, v, bit, how):
        data = g.get_edge_data(u, v)
        if data is None or (bit and not data["bit"]):
            g.add_edge(u, v, bit=bit, how=how)

    for r in pds.rules:
        src = (r.src, r.gamma)
        bit = bool(accepting(src))
        if len(r.word) == 1:
            edge(src, (r.dst, r.word[0]), bit, (r,))
        elif len(r.word) == 2:
            edge(src, (r.dst, r.word[0]), bit, (r,))
            for t in exits[(r.dst, r.word[0])]:
                edge(src, (t[2], r.word[1]), bit or t[3], (r, t))
    repeating = set()
    for comp in nx.strongly_connected_components(g):
        sub = g.subgraph(comp)
        if any(d["bit"] for _, _, d in sub.edges(data=True)):
            repeating |= set(comp)
    return HeadGraph(g, summaries, repeating)


def repeating_heads(pds: Pds, accepting) -> set:
    """Heads ``(p, γ)`` that return to themselves over a longer stack,
    passing an accepting head on the way.

    ``accepting`` is a head predicate, or a set of controls.
    """
    if not callable(accepting):
        controls = set(accepting)
        accepting = lambda head, c=controls: head[0] in c  # noqa: E731
    return _head_graph(pds, accepting).repeating


def _edge_rules(hg: HeadGraph, u, v) -> list:
    how = hg.graph.edges[u, v]["how"]
    out = [how[0]]
    if len(how) == 2:
        out += expand(hg.summaries, how[1])
    return out


def _path(g, sources, goal, allowed=None):
    """Shortest node path from any source to goal (BFS)."""
    parent = {s: None for s in sources}
    q = deque(sources)
    while q:
        u = q.popleft()
        if u == goal:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for v in g.successors(u):
            if v not in parent and (allowed is None or v in allowed):
                parent[v] = u
                q.append(v)
    return None


def _rules_along(hg, path) -> list:
    out = []
    for u, v in zip(path, path[1:]):
        out += _edge_rules(hg, u, v)
    return out


def is_empty_omega(a) -> tuple[bool, Lasso | None]:
    """Emptiness of an ω-automaton; returns ``(empty, witness_lasso)``."""
    if acceptance_kind(a) == "muller":
        a = to_buchi_final(a)
    pds = opa_to_pds(a, finite=False)
    accepting = accepting_predicate(a)
    hg = _head_graph(pds, accepting)
    if not hg.repeating:
        return True, None
    g = hg.graph
    for comp in nx.strongly_connected_components(g):
        comp = set(comp)
        hot = [(u, v) for u, v, d in g.subgraph(comp).edges(data=True) if d["bit"]]
        if hot:
            break
    u, v = min(hot, key=lambda e: (str(e[0]), str(e[1])))
    stem = _path(g, pds.initial_heads, u)
    back = _path(g, [v], u, allowed=comp)
    cycle_rules = _edge_rules(hg, u, v) + _rules_along(hg, back)
    prefix = labels(_rules_along(hg, stem))
    period = labels(cycle_rules)
    return False, Lasso(prefix, period)


def is_empty_finite(a, with_witness: bool = False):
    """Classical-acceptance emptiness of a finite-word automaton.

    Target configurations are ``⟨('R', q_F, '#'), bottom⟩``: the ending
    ``#`` has flushed everything in a final state.
    """
    pds = opa_to_pds(a, finite=True)
    trans = {(("R", q, HASH), BOTTOM, ACCEPT, False): ("target",)
             for q in a.final}
    sat = pre_star(pds, PAutomaton(trans, {ACCEPT}))
    for h in pds.initial_heads:
        t = (h[0], h[1], ACCEPT, False)
        if t in sat.transitions:
            word = labels(expand(sat, t))
            return (False, word) if with_witness else False
    return (True, None) if with_witness else True


# -- decoding and materialization ----------------------------------------------


def decode(control, stack) -> Configuration:
    """Turn a pds configuration (stack bottom first) into OPA stack entries.

    Entry states below the top are flush keys, i.e. full states unless the
    automaton projects them.
    """
    if not stack or stack[0] != BOTTOM:
        raise InputError("pds stack must start with the bottom symbol")
    entries = []
    for i, g in enumerate(stack):
        state = stack[i + 1][2] if i + 1 < len(stack) else control[1]
        entries.append(Entry(g[0], g[1], state))
    return Configuration(tuple(entries), ())


def materialize(a, acceptance: str | None = None) -> OmegaOpa:
    """Explicit automaton over the reachable moves of ``a``.

    States are renamed ``s0, s1, ...`` in discovery order.
    """
    pds = opa_to_pds(a, finite=False)
    names: dict = {}

    def name(q):
        if q not in names:
            names[q] = f"s{len(names)}"
        return names[q]

    for q in sorted(a.initial, key=str):
        name(q)
    for q, _, p in pds.push_moves:
        name(q), name(p)
    for q, _, r in pds.flush_moves:
        name(q), name(r)
    push = [(name(q), c, [name(p)]) for q, c, p in pds.push_moves]
    by_key = defaultdict(list)
    for q in list(names):
        by_key[a.flush_key(q)].append(q)
    flush = [(name(q), name(s), [name(r)]) for q, k, r in pds.flush_moves
             for s in by_key[k]]
    final = frozenset(n for q, n in names.items() if a.is_final(q))
    kind = acceptance or acceptance_kind(a)
    acc = BuchiEmptyStack(final) if kind == "buchi_empty_stack" else BuchiFinal(final)
    out = OmegaOpa.build(a.opm, list(names.values()), [name(q) for q in a.initial], acc,
                         push, flush)
    object.__setattr__(out, "_origin", {v: k for k, v in names.items()})
    return out
