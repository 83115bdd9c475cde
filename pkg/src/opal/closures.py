"""Boolean and concatenation closures of ω-languages of operator precedence automata.

Products are built lazily as :class:`~opal.omega.LazyOmegaOpa` and turned
into explicit automata by :func:`~opal.pds.materialize` on request.
"""

from __future__ import annotations

import logging

from .errors import InputError
from .nba import Nba, RankComplement, TripleSet, build_pseudorun_nba
from .omega import (BuchiFinal, LazyOmegaOpa, OmegaOpa, acceptance_kind, complete_transitions,
                    to_buchi_final, universe)
from .opa import CLASSICAL, Opa, classical_to_variant
from .opm import EQ, GT, HASH, LT, complete_opm, opm_union
from .pds import is_empty_omega, materialize, opa_to_pds

log = logging.getLogger(__name__)

__all__ = [
    "universe", "intersect", "union", "concat", "complement", "includes",
    "PseudorunTransducer", "build_pseudorun_transducer", "emitted_symbols",
    "pseudorun_prefix", "TripleSet",
]


def _buchi(a):
    kind = acceptance_kind(a)
    if kind != "buchi_final":
        log.info("converting %s acceptance to buchi_final", kind)
    return to_buchi_final(a)


def _restrict(a, m):
    """Run ``a`` over the larger matrix ``m`` without leaving ``a.opm``.

    States ``(symbol, q, next)`` carry the entry symbol and a guess of the
    next input letter, so every comparison the parser makes is checked
    against ``a``'s own matrix.
    """
    own = a.opm

    def ok(x, y):
        return own.rel(x, y) is not None

    def push(s, c):
        _, q, d = s
        if c != d:
            return ()
        return [(c, p, e) for p in a.push(q, c) for e in own.alphabet if ok(c, e)]

    def flush(s, below):
        _, q, d = s
        sym, k = below
        if not ok(sym, d):
            return ()
        return [(sym, r, d) for r in a.flush(q, k)]

    initial = [(HASH, q, d) for q in a.initial for d in own.alphabet if ok(HASH, d)]
    return LazyOmegaOpa(m, initial, push, flush, lambda s: a.is_final(s[1]),
                        key=lambda s: (s[0], a.flush_key(s[1])))


def _common(a, b):
    if a.opm == b.opm:
        return a.opm, a, b
    m = opm_union(a.opm, b.opm)
    return m, (a if a.opm == m else _restrict(a, m)), (b if b.opm == m else _restrict(b, m))


def _finish(lazy, materialize_result):
    return materialize(lazy) if materialize_result else lazy


# -- intersection and union ----------------------------------------------------


def intersect(a, b, materialize_result: bool = True):
    """Product over the union matrix with a visitation flag in ``{1, 2}``.

    Flag 1 waits for a final state of ``a``, flag 2 for one of ``b``;
    product states ``(q1, q2, 1)`` with ``q1`` final are accepting.
    """
    m, a, b = _common(_buchi(a), _buchi(b))

    def turn(s):
        q1, q2, k = s
        if k == 1 and a.is_final(q1):
            return 2
        if k == 2 and b.is_final(q2):
            return 1
        return k

    def push(s, c):
        k = turn(s)
        return [(p1, p2, k) for p1 in a.push(s[0], c) for p2 in b.push(s[1], c)]

    def flush(s, below):
        k = turn(s)
        return [(r1, r2, k) for r1 in a.flush(s[0], below[0]) for r2 in b.flush(s[1], below[1])]

    initial = [(q1, q2, 1) for q1 in a.initial for q2 in b.initial]
    lazy = LazyOmegaOpa(m, initial, push, flush, lambda s: s[2] == 1 and a.is_final(s[0]),
                        key=lambda s: (a.flush_key(s[0]), b.flush_key(s[1])))
    return _finish(lazy, materialize_result)


def union(a, b, deterministic: bool = False, materialize_result: bool = True):
    """Disjoint union, or with ``deterministic`` the synchronous product.

    The product route needs deterministic, transition-complete inputs over
    the same matrix; its finals are ``F1×Q2 ∪ Q1×F2``.
    """
    a, b = _buchi(a), _buchi(b)
    if deterministic:
        return _product_union(a, b)
    m, a, b = _common(a, b)
    parts = {1: a, 2: b}

    def push(s, c):
        return [(s[0], p) for p in parts[s[0]].push(s[1], c)]

    def flush(s, below):
        if s[0] != below[0]:
            return ()
        return [(s[0], r) for r in parts[s[0]].flush(s[1], below[1])]

    initial = [(1, q) for q in a.initial] + [(2, q) for q in b.initial]
    lazy = LazyOmegaOpa(m, initial, push, flush, lambda s: parts[s[0]].is_final(s[1]),
                        key=lambda s: (s[0], parts[s[0]].flush_key(s[1])))
    return _finish(lazy, materialize_result)


def _is_complete(a) -> bool:
    return all(a.push(q, c) for q in a.states for c in a.opm.alphabet) and all(
        a.flush(q, p) for q in a.states for p in a.states)


def _product_union(a, b) -> OmegaOpa:
    for x in (a, b):
        if not isinstance(x, OmegaOpa) or not x.is_deterministic() or not _is_complete(x):
            raise InputError("deterministic union needs deterministic, complete automata")
    if a.opm != b.opm:
        raise InputError("deterministic union needs equal matrices")
    states = [(p, q) for p in a.states for q in b.states]
    push = [((p, q), c, [(p2, q2) for p2 in a.push(p, c) for q2 in b.push(q, c)])
            for p, q in states for c in a.opm.alphabet]
    flush = [((p, q), (p1, q1), [(r, s) for r in a.flush(p, p1) for s in b.flush(q, q1)])
             for p, q in states for p1, q1 in states]
    final = {(p, q) for p, q in states if a.is_final(p) or b.is_final(q)}
    initial = {(p, q) for p in a.initial for q in b.initial}
    return OmegaOpa.build(a.opm, states, initial, BuchiFinal(frozenset(final)), push, flush)


# -- concatenation --------------------------------------------------------------

NONE = "-"


def concat_state_bound(afin_variant: Opa, aomega) -> int:
    """``|Q′1| + (|Σ|+1)·|Q2|·(|Q2|+1)`` for the concatenation automaton."""
    m = opm_union(afin_variant.opm, aomega.opm)
    n2 = len(aomega.states)
    return len(afin_variant.states) + (len(m.alphabet) + 1) * n2 * (n2 + 1)


def concat(afin: Opa, aomega, prune: bool = True) -> OmegaOpa:
    """Automaton for ``L(afin)·L(aomega)`` over ``complete_opm(M1 ∪ M2)``.

    States are ``("1", q)`` for the variant-mode copy of ``afin`` and
    ``("2", a, p, r)`` for ``aomega`` in state ``p`` with ``a`` the top
    symbol of its own stack (``#`` when that stack is empty) and ``r``
    the state under its topmost marked entry (``-`` when empty).
    A push into a final state of the first part may jump into ``aomega``.
    """
    if afin.mode != CLASSICAL:
        raise InputError("concat expects a classical-mode finite automaton")
    a2 = _buchi(aomega)
    if not isinstance(a2, OmegaOpa):
        raise InputError("concat needs an explicit ω-automaton")
    v = classical_to_variant(afin)
    m1, m2 = afin.opm, a2.opm
    m3 = complete_opm(opm_union(m1, m2))
    hat = (HASH,) + m3.alphabet
    q2s = a2.states
    left = [("1", q) for q in v.states]
    right = [("2", s, p, r) for s in hat for p in q2s
             for r in ((NONE,) if s == HASH else q2s)]
    jump = {("2", HASH, p0, NONE) for p0 in a2.initial}

    push = []
    for _, q in left:
        for c in m3.alphabet:
            ts = v.push(q, c)
            targets = {("1", t) for t in ts}
            if ts & v.final:
                targets |= jump
            push.append((("1", q), c, targets))
    for st in right:
        _, s, p, r = st
        for c in m3.alphabet:
            rel = m2.rel(s, c)
            if rel is LT:
                push.append((st, c, {("2", c, t, p) for t in a2.push(p, c)}))
            elif rel is EQ:
                push.append((st, c, {("2", c, t, r) for t in a2.push(p, c)}))

    flush = []
    for _, q in left:
        for _, p in left:
            flush.append((("1", q), ("1", p), {("1", t) for t in v.flush(q, p)}))
    for st in right:
        _, s, p, r = st
        if s == HASH:
            for low in left:
                flush.append((st, low, {st}))
            continue
        for low in left:
            flush.append((st, low, {("2", HASH, t, NONE) for t in a2.flush(p, r)}))
        for s2 in hat:
            for r2 in ((NONE,) if s2 == HASH else q2s):
                flush.append((st, ("2", s2, r, r2), {("2", s2, t, r2) for t in a2.flush(p, r)}))

    initial = {("1", q) for q in v.initial}
    if afin.initial & afin.final:
        initial |= jump
    final = {st for st in right if a2.is_final(st[2])}
    out = OmegaOpa.build(m3, left + right, initial, BuchiFinal(frozenset(final)), push, flush)
    return _prune(out) if prune else out


def _prune(a: OmegaOpa) -> OmegaOpa:
    keep = a.reachable_states()
    push = [(q, c, ts & keep) for (q, c), ts in a.delta_push.items() if q in keep]
    flush = [(q, p, ts & keep) for (q, p), ts in a.delta_flush.items()
             if q in keep and p in keep]
    return OmegaOpa.build(a.opm, [q for q in a.states if q in keep], a.initial & keep,
                          BuchiFinal(a.final & keep), push, flush)


# -- pseudoruns -------------------------------------------------------------------

Z, BOT = "Z", "BOT"


class PseudorunTransducer:
    """Transducer translating words of ``L_M`` into pseudoruns of ``a``.

    States are ``(symbol, tag)``: tag ``Z`` means the next letter is
    pending, ``BOT`` that the next letter opens a chain, and a
    :class:`TripleSet` summarizes the semisupports of the open chain.
    """

    def __init__(self, a):
        self.a = a
        self.opm = a.opm
        self.initial = frozenset({(HASH, BOT), (HASH, Z)})
        self._fin = frozenset(q for q in a.states if a.is_final(q))

    def is_final(self, s) -> bool:
        return not isinstance(s[1], TripleSet)

    def _bit(self, p) -> bool:
        return p in self._fin

    def push_moves(self, s, c) -> set:
        sym, tag = s
        rel = self.opm.rel(sym, c)
        if rel is None or rel is GT:
            return set()
        a = self.a
        if tag == Z:
            return {((c, Z), (c,)), ((c, BOT), (c,))}
        if tag == BOT:
            if rel is not LT:
                return set()
            t = TripleSet((q, p, self._bit(p)) for q in a.states for p in a.push(q, c))
        elif rel is LT:
            t = TripleSet((q, p, self._bit(p)) for (_, q, _) in tag for p in a.push(q, c))
        else:
            t = TripleSet((r, p, x or self._bit(p)) for (r, q, x) in tag for p in a.push(q, c))
        return {((c, t), ())} if t else set()

    def flush_moves(self, s, below) -> set:
        tag = s[1]
        sym, low = below
        if not isinstance(tag, TripleSet) or low == Z:
            return set()
        a = self.a
        if low == BOT:
            out = TripleSet((r, p, x or self._bit(p))
                            for (r, q, x) in tag for p in a.flush(q, r))
            if not out:
                return set()
            return {((sym, BOT), (out,)), ((sym, Z), (out,))}
        by_end: dict = {}
        for (t0, r, z) in low:
            by_end.setdefault(r, []).append((t0, z))
        res = TripleSet((t0, p, z or x or self._bit(p))
                        for (r, q, x) in tag for (t0, z) in by_end.get(r, ())
                        for p in a.flush(q, r))
        return {((sym, res), ())} if res else set()

    def push(self, s, c) -> frozenset:
        return frozenset(t for t, _ in self.push_moves(s, c))

    def flush(self, s, below) -> frozenset:
        return frozenset(t for t, _ in self.flush_moves(s, below))

    def as_automaton(self) -> LazyOmegaOpa:
        return LazyOmegaOpa(self.opm, self.initial, self.push, self.flush, self.is_final)


def build_pseudorun_transducer(a) -> PseudorunTransducer:
    if acceptance_kind(a) != "buchi_final":
        raise InputError("pseudorun transducer needs buchi_final acceptance")
    return PseudorunTransducer(a)


def emitted_symbols(t: PseudorunTransducer) -> list:
    """Triple sets emitted by chain-closing flushes reachable in ``t``."""
    pds = opa_to_pds(t.as_automaton(), finite=False)
    found = set()
    for q, s, r in pds.flush_moves:
        for _, out in t.flush_moves(q, s):
            found.update(out)
    return sorted(found, key=repr)


def pseudorun_prefix(t: PseudorunTransducer, w) -> set:
    """Outputs of runs that read the finite prefix ``w`` and end in a final state.

    Flushes need a lookahead, so runs stop right after the last push.
    """
    w = tuple(w)
    start = [(((HASH, False, q),), 0, ()) for q in t.initial]
    seen = set(start)
    todo = list(start)
    outs = set()
    while todo:
        stack, i, out = todo.pop()
        sym, _, state = stack[-1]
        if i == len(w):
            if t.is_final(state):
                outs.add(out)
            continue
        c = w[i]
        rel = t.opm.rel(sym, c)
        nxt = []
        if rel is GT:
            j = len(stack) - 1
            while j > 0 and not stack[j][1]:
                j -= 1
            if j == 0:
                continue
            below = stack[j - 1]
            for q, o in t.flush_moves(state, below[2]):
                nxt.append((stack[: j - 1] + ((below[0], below[1], q),), i, out + o))
        elif rel is not None:
            for q, o in t.push_moves(state, c):
                nxt.append((stack + ((c, rel is LT, q),), i + 1, out + o))
        for item in nxt:
            if item not in seen:
                seen.add(item)
                todo.append(item)
    return outs


# -- complement and inclusion ------------------------------------------------------


def complement_parts(a):
    """``(transducer, A_R, rank complement)`` for a Büchi-final automaton."""
    full = complete_transitions(_buchi(a))
    t = build_pseudorun_transducer(full)
    nba: Nba = build_pseudorun_nba(full, t).trim().quotient()
    return t, nba, RankComplement(nba)


def complement(a, materialize_result: bool = True):
    """Automaton for ``L_M \\ L(a)``.

    The transducer's pseudorun feeds the complemented ``A_R``; the flag
    alternates between waiting for a final transducer state (0) and a
    final complement state (1).
    """
    if not isinstance(a, OmegaOpa):
        a = materialize(a)
    t, _, kv = complement_parts(a)

    def turn(s):
        b, k, f = s
        if f == 0 and t.is_final(b):
            return 1
        if f == 1 and kv.is_final(k):
            return 0
        return f

    def advance(k, out):
        return kv.step(k, out[0]) if out else (k,)

    def push(s, c):
        f = turn(s)
        return [(b2, k2, f) for b2, out in t.push_moves(s[0], c) for k2 in advance(s[1], out)]

    def flush(s, below):
        f = turn(s)
        return [(b2, k2, f) for b2, out in t.flush_moves(s[0], below)
                for k2 in advance(s[1], out)]

    # flushes read only the transducer part of the state below
    initial = [(b, k, 0) for b in t.initial for k in kv.initial]
    lazy = LazyOmegaOpa(a.opm, initial, push, flush,
                        lambda s: s[2] == 0 and t.is_final(s[0]), key=lambda s: s[0])
    return _finish(lazy, materialize_result)


def includes(spec, impl):
    """Decide ``L(impl) ⊆ L(spec)``; returns ``(verdict, counterexample_or_None)``."""
    opm_union(spec.opm, impl.opm)
    bad = intersect(impl, complement(spec, materialize_result=False), materialize_result=False)
    empty, witness = is_empty_omega(bad)
    return empty, witness
