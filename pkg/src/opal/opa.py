"""Finite-word operator precedence automata.

Push and flush relations are stored separately.  A flush receives the
current state and the state of the entry just below the topmost marked
entry, and rewrites that entry's state (its mark survives).
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import InputError, ValidationError
from .opm import EQ, GT, HASH, LT, Opm, is_eq_acyclic

CLASSICAL, VARIANT = "classical", "variant"


def _freeze_delta(entries) -> dict:
    out: dict = {}
    for key, targets in entries:
        targets = frozenset(targets)
        if targets:
            out[key] = out.get(key, frozenset()) | targets
    return out


class AutomatonBase:
    """Shared plumbing for explicit automata (finite and infinite words)."""

    opm: Opm
    states: tuple
    initial: frozenset
    delta_push: dict
    delta_flush: dict

    def push(self, q, a) -> frozenset:
        return self.delta_push.get((q, a), frozenset())

    def flush(self, q, p) -> frozenset:
        return self.delta_flush.get((q, p), frozenset())

    def flush_key(self, p):
        """The part of a below state that flushes read (all of it here)."""
        return p

    @property
    def alphabet(self) -> tuple:
        return self.opm.alphabet

    def is_deterministic(self) -> bool:
        return len(self.initial) <= 1 and all(
            len(t) <= 1
            for t in itertools.chain(self.delta_push.values(), self.delta_flush.values())
        )

    def reachable_states(self) -> set:
        """Graph sweep over push edges and flush edges between reached states."""
        seen = set(self.initial)
        changed = True
        while changed:
            changed = False
            new = set()
            for (q, _), ts in self.delta_push.items():
                if q in seen:
                    new |= ts
            for (q, p), ts in self.delta_flush.items():
                if q in seen and p in seen:
                    new |= ts
            if not new <= seen:
                seen |= new
                changed = True
        return seen

    def _check_refs(self):
        states = set(self.states)
        if len(states) != len(self.states):
            raise ValidationError("duplicate state names")
        for q in self.initial:
            if q not in states:
                raise ValidationError(f"initial state {q!r} is not declared")
        for (q, a), ts in self.delta_push.items():
            if q not in states:
                raise ValidationError(f"push from undeclared state {q!r}")
            if a not in self.opm:
                raise ValidationError(f"push on unknown symbol {a!r}")
            for t in ts:
                if t not in states:
                    raise ValidationError(f"push edge to undeclared state {t!r}")
        for (q, p), ts in self.delta_flush.items():
            for s in (q, p, *ts):
                if s not in states:
                    raise ValidationError(f"flush edge mentions undeclared state {s!r}")


@dataclass(frozen=True, eq=True)
class Opa(AutomatonBase):
    """Operator precedence automaton on finite words."""

    opm: Opm
    states: tuple
    initial: frozenset
    final: frozenset
    delta_push: dict = field(default_factory=dict)
    delta_flush: dict = field(default_factory=dict)
    mode: str = CLASSICAL

    __hash__ = None

    def __post_init__(self):
        if self.mode not in (CLASSICAL, VARIANT):
            raise InputError(f"unknown mode {self.mode!r}")
        for q in self.final:
            if q not in set(self.states):
                raise ValidationError(f"final state {q!r} is not declared")
        self._check_refs()

    @classmethod
    def build(cls, opm, states, initial, final, push=(), flush=(), mode=CLASSICAL):
        """Convenience constructor from ``(q, a, targets)`` / ``(q, p, targets)``."""
        return cls(
            opm,
            tuple(states),
            frozenset(initial),
            frozenset(final),
            _freeze_delta(((q, a), ts) for q, a, ts in push),
            _freeze_delta(((q, p), ts) for q, p, ts in flush),
            mode,
        )

    def is_final(self, q) -> bool:
        return q in self.final

    def with_mode(self, mode: str) -> "Opa":
        return Opa(self.opm, self.states, self.initial, self.final,
                   self.delta_push, self.delta_flush, mode)


def validate(a) -> dict:
    """Structural report: conflict-freeness, ≐-acyclicity, determinism, reachability."""
    a._check_refs()
    acyclic, cycle = is_eq_acyclic(a.opm)
    reach = a.reachable_states()
    return {
        "conflict_free": True,
        "eq_acyclic": acyclic,
        "eq_cycle": cycle,
        "deterministic": a.is_deterministic(),
        "reachable": sorted(map(str, reach)),
        "unreachable": sorted(str(q) for q in a.states if q not in reach),
    }


# -- configurations and moves -------------------------------------------------


class Entry(NamedTuple):
    symbol: str
    marked: bool
    state: object

    def render(self) -> str:
        return f"[{self.symbol}{'*' if self.marked else ''},{self.state}]"


class Configuration(NamedTuple):
    stack: tuple
    rest: tuple

    @property
    def state(self):
        return self.stack[-1].state

    def render(self, width: int = 10, open_ended: bool = False) -> str:
        stack = "".join(e.render() for e in self.stack)
        rest = list(self.rest[:width])
        if open_ended or len(self.rest) > width:
            rest.append("...")
        return f"{stack} | {' '.join(rest)}"


def initial_configurations(a, w, terminated: bool = True) -> list:
    rest = tuple(w) + ((HASH,) if terminated else ())
    return [Configuration((Entry(HASH, False, q),), rest) for q in _ordered(a.initial)]


def _ordered(states):
    return sorted(states, key=str)


def _flush_targets(a, stack, q):
    """Pop to the topmost marked entry; yield the rewritten stacks."""
    i = len(stack) - 1
    while i > 0 and not stack[i].marked:
        i -= 1
    if i == 0:
        return
    below = stack[i - 1]
    for r in _ordered(a.flush(q, below.state)):
        yield stack[: i - 1] + (below._replace(state=r),)


def step(a, c: Configuration) -> list:
    """All successors ``(kind, configuration)`` of ``c``; empty when stuck."""
    if not c.rest:
        return []
    top = c.stack[-1]
    la = c.rest[0]
    r = a.opm.rel(top.symbol, la)
    if r is None or (la == HASH and top.symbol == HASH):
        return []
    out = []
    if r is GT:
        if la == HASH and getattr(a, "mode", CLASSICAL) == VARIANT:
            return []
        for stack in _flush_targets(a, c.stack, top.state):
            out.append(("flush", Configuration(stack, c.rest)))
        return out
    kind = "mark" if r is LT else "push"
    for q in _ordered(a.push(top.state, la)):
        out.append((kind, Configuration(c.stack + (Entry(la, r is LT, q),), c.rest[1:])))
    return out


@dataclass
class Trace:
    start: Configuration
    moves: list = field(default_factory=list)
    open_ended: bool = False

    def lines(self) -> list:
        out = [f"start | {self.start.render(open_ended=self.open_ended)}"]
        for kind, conf in self.moves:
            out.append(f"{kind} | {conf.render(open_ended=self.open_ended)}")
        return out

    def __len__(self) -> int:
        return len(self.moves) + 1


def _is_accepting_end(a, c: Configuration, variant: bool) -> bool:
    if c.rest != (HASH,):
        return False
    if variant:
        return a.is_final(c.state)
    return len(c.stack) == 1 and a.is_final(c.state)


def _search(a, w, variant: bool):
    """Breadth-first search of the configuration graph; returns a Trace or None."""
    w = tuple(w)
    for s in w:
        if s not in a.opm:
            raise InputError(f"unknown symbol {s!r}")
    frontier = deque()
    parent = {}
    for c in initial_configurations(a, w):
        if c not in parent:
            parent[c] = None
            frontier.append(c)
    probe = a.with_mode(VARIANT if variant else CLASSICAL) if isinstance(a, Opa) else a
    while frontier:
        c = frontier.popleft()
        if _is_accepting_end(a, c, variant):
            moves = []
            while parent[c] is not None:
                kind, prev = parent[c]
                moves.append((kind, c))
                c = prev
            moves.reverse()
            return Trace(c, moves)
        for kind, nxt in step(probe, c):
            if nxt not in parent:
                parent[nxt] = (kind, c)
                frontier.append(nxt)
    return None


def accepts_finite(a: Opa, w, with_trace: bool = False):
    """Classical acceptance: some run ends in ``⟨[#, q_F], #⟩``.

    With ``with_trace`` the result is ``(verdict, trace_or_None)``.
    """
    trace = _search(a, w, variant=False)
    return (trace is not None, trace) if with_trace else trace is not None


def accepting_trace(a: Opa, w) -> Trace | None:
    """A shortest accepting run of ``a`` on ``w`` as a Trace, or None."""
    return _search(a, w, variant=False)


def accepts_variant(a: Opa, w) -> bool:
    """Variant acceptance: halt right after the last push in a final state."""
    return _search(a, w, variant=True) is not None


def prefix_traces(a, w, limit: int = 10_000) -> list:
    """Every run that consumes the finite prefix ``w`` of an infinite word.

    Runs stop as soon as the last letter is read, since the next flush
    would depend on unseen input.
    """
    out = []
    todo = [(c, c, []) for c in initial_configurations(a, w, terminated=False)]
    while todo and len(out) < limit:
        start, c, moves = todo.pop()
        if not c.rest:
            out.append(Trace(start, moves, True))
            continue
        for kind, nxt in step(a, c):
            todo.append((start, nxt, moves + [(kind, nxt)]))
    return out


# -- language enumeration -----------------------------------------------------


def _max_enum() -> int:
    return int(os.environ.get("OPAL_MAX_ENUM", "8"))


def _stable(a, st, la, variant, memo):
    """Stacks reachable from ``st`` by flushes that can read ``la`` next."""
    key = (st, la)
    hit = memo.get(key)
    if hit is not None:
        return hit
    top = st[-1]
    r = a.opm.rel(top.symbol, la)
    if r is GT and not (la == HASH and variant):
        out = set()
        i = len(st) - 1
        while i > 0 and not st[i].marked:
            i -= 1
        if i > 0:
            below = st[i - 1]
            for q in a.flush(top.state, below.state):
                out |= _stable(a, st[: i - 1] + (below._replace(state=q),), la, variant, memo)
        out = frozenset(out)
    elif r is None:
        out = frozenset()
    else:
        out = frozenset((st,))
    memo[key] = out
    return out


def _close(a, stacks, la, variant: bool, memo=None):
    """Flush closure of ``stacks`` under lookahead ``la``; returns stable stacks."""
    memo = {} if memo is None else memo
    out = set()
    for st in stacks:
        out |= _stable(a, st, la, variant, memo)
    return out


def _advance(a, stacks, c, variant, memo=None):
    out = set()
    for st in _close(a, stacks, c, variant, memo):
        top = st[-1]
        r = a.opm.rel(top.symbol, c)
        for q in a.push(top.state, c):
            out.add(st + (Entry(c, r is LT, q),))
    return out


def _accepts_stacks(a, stacks, variant, memo=None) -> bool:
    if variant:
        return any(a.is_final(st[-1].state) for st in stacks)
    return any(len(st) == 1 and a.is_final(st[0].state)
               for st in _close(a, stacks, HASH, False, memo))


def enumerate_language(a: Opa, n: int, variant: bool | None = None) -> set:
    """All accepted words of length ``≤ n`` (as tuples).

    Uses a depth-first walk over prefixes, pruning prefixes with no live
    configuration.  ``variant`` defaults to the automaton's mode.
    """
    cap = _max_enum()
    if n > cap:
        raise InputError(f"enumeration bound {n} exceeds cap {cap} (OPAL_MAX_ENUM)")
    if variant is None:
        variant = a.mode == VARIANT
    result = set()
    start = frozenset((Entry(HASH, False, q),) for q in a.initial)

    memo: dict = {}

    def walk(prefix, stacks):
        if _accepts_stacks(a, stacks, variant, memo):
            result.add(prefix)
        if len(prefix) == n:
            return
        for c in a.opm.alphabet:
            nxt = _advance(a, stacks, c, variant, memo)
            if nxt:
                walk(prefix + (c,), frozenset(nxt))

    walk((), start)
    return result


# -- transducers ----------------------------------------------------------------


@dataclass(frozen=True)
class Transducer:
    """An OPA whose moves also emit output words.

    ``push_out`` maps ``(q, a, q')`` and ``flush_out`` maps ``(q, p, q')`` to
    tuples of output symbols; missing keys emit the empty word.
    """

    opa: Opa
    push_out: dict = field(default_factory=dict)
    flush_out: dict = field(default_factory=dict)

    __hash__ = None

    @property
    def opm(self):
        return self.opa.opm

    @property
    def initial(self):
        return self.opa.initial

    @property
    def mode(self):
        return self.opa.mode

    def is_final(self, q):
        return self.opa.is_final(q)

    def push_moves(self, q, a):
        return {(t, self.push_out.get((q, a, t), ())) for t in self.opa.push(q, a)}

    def flush_moves(self, q, p):
        return {(t, self.flush_out.get((q, p, t), ())) for t in self.opa.flush(q, p)}


def run_outputs(t, w, variant: bool) -> set:
    """Outputs along accepting runs of a transducer-like object on ``w``.

    ``t`` needs ``opm``, ``initial``, ``is_final``, ``push_moves`` and
    ``flush_moves``.
    """
    w = tuple(w) + (HASH,)
    frontier = {(((Entry(HASH, False, q),)), 0, ()) for q in t.initial}
    seen = set(frontier)
    todo = list(frontier)
    outs = set()
    while todo:
        stack, i, out = todo.pop()
        top = stack[-1]
        la = w[i]
        if la == HASH:
            if variant:
                if t.is_final(top.state):
                    outs.add(out)
                continue
            if len(stack) == 1:
                if t.is_final(top.state):
                    outs.add(out)
                continue
        r = t.opm.rel(top.symbol, la)
        nxt = []
        if r is GT:
            j = len(stack) - 1
            while j > 0 and not stack[j].marked:
                j -= 1
            if j == 0:
                continue
            below = stack[j - 1]
            for q, o in t.flush_moves(top.state, below.state):
                nxt.append((stack[: j - 1] + (below._replace(state=q),), i, out + tuple(o)))
        elif r is not None:
            for q, o in t.push_moves(top.state, la):
                nxt.append((stack + (Entry(la, r is LT, q),), i + 1, out + tuple(o)))
        for item in nxt:
            if item not in seen:
                seen.add(item)
                todo.append(item)
    return outs


def transduce_finite(t: Transducer, w) -> set:
    """The transduction ``τ(w)``: all outputs along accepting runs."""
    return run_outputs(t, w, variant=t.mode == VARIANT)


# -- acceptance-mode bridges ---------------------------------------------------

_GUESS = ("B", "Z", "U")


def variant_state_space_size(a: Opa) -> int:
    """Size of the bridging construction before pruning: 3·(|Σ|+1)·|Q|²."""
    return 3 * (len(a.opm.alphabet) + 1) * len(a.states) ** 2


def classical_to_variant(a: Opa, prune: bool = True) -> Opa:
    """Variant automaton ``A'`` with ``L̃(A') = L(a)``.

    A state ``(x, c, q, s)`` records the guess ``x`` about the next letter
    (Z: marked and kept until the end, U: pushed by ≐ and kept, B: flushed
    before the end), the top symbol ``c``, the simulated state ``q`` and the
    guessed state ``s`` of the surviving segment's top when the ending ``#``
    flushes it.
    """
    m = a.opm
    sig = (HASH,) + m.alphabet
    states = [(x, c, q, s) for x in _GUESS for c in sig for q in a.states for s in a.states]
    push = []
    for x, c, q, s in states:
        for b in m.alphabet:
            r = m.rel(c, b)
            if r is None or r is GT:
                continue
            targets = set()
            for t in a.push(q, b):
                if x == "Z" and r is LT:
                    for s2 in a.states:
                        if s in a.flush(s2, q):
                            targets.update((y, b, t, s2) for y in _GUESS)
                elif x == "U" and r is EQ:
                    targets.update((y, b, t, s) for y in _GUESS)
                elif x == "B":
                    targets.add(("B", b, t, s))
            if targets:
                push.append(((x, c, q, s), b, targets))
    flush = []
    for (_, b, q, s) in [st for st in states if st[0] == "B"]:
        for c in sig:
            for p in a.states:
                targets = {(y, c, r, s) for r in a.flush(q, p) for y in _GUESS}
                if targets:
                    flush.append((("B", b, q, s), ("B", c, p, s), targets))
    initial = {(x, HASH, q, f) for x in ("Z", "B") for q in a.initial for f in a.final}
    final = {st for st in states if st[0] == "Z" and st[2] == st[3]}
    out = Opa.build(m, states, initial, final, push, flush, VARIANT)
    return _prune(out) if prune else out


def _prune(a: Opa) -> Opa:
    keep = a.reachable_states()
    states = tuple(q for q in a.states if q in keep)
    push = [(q, c, ts & keep) for (q, c), ts in a.delta_push.items() if q in keep]
    flush = [(q, p, ts & keep) for (q, p), ts in a.delta_flush.items()
             if q in keep and p in keep]
    return Opa.build(a.opm, states, a.initial & keep, a.final & keep, push, flush, a.mode)


ACCEPT = "q_accept"


def variant_to_classical(a: Opa, prune: bool = True) -> Opa:
    """Classical automaton accepting ``L̃(a)``.

    States ``(lookback, q, lookahead)`` guess the next input symbol; after
    the last push with lookahead ``#`` in a final state, flushes drain the
    stack into the single final state ``q_accept``.  With ``prune`` only
    the reachable part is built.
    """
    m = a.opm
    sig = (HASH,) + m.alphabet
    looks = m.alphabet + (HASH,)

    def pushes(s):
        if s == ACCEPT:
            return set()
        c, q, d = s
        if d == HASH or m.rel(c, d) not in (LT, EQ):
            return set()
        return {(d, p, e) for p in a.push(q, d) for e in looks if m.rel(d, e) is not None}

    def flushes(top, below):
        if top == ACCEPT or top[2] == HASH and a.is_final(top[1]):
            return {ACCEPT}
        a1, q1, a2 = top
        if below == ACCEPT or a2 == HASH or m.rel(a1, a2) is not GT:
            return set()
        b1, q2, _ = below
        if m.rel(b1, a2) is None:
            return set()
        return {(b1, q3, a2) for q3 in a.flush(q1, q2)}

    initial = {(HASH, q, d) for q in a.initial for d in looks
               if d == HASH or m.rel(HASH, d) is not None}
    if any(q in a.final for q in a.initial):
        initial.add(ACCEPT)
    push, flush = [], []
    if prune:
        states = sorted(initial, key=str)
        seen = set(states)
        todo = list(states)
        done: list = []
        while todo:
            s = todo.pop()
            found = pushes(s)
            if found:
                push.append((s, s[2], frozenset(found)))
            done.append(s)
            for other in done:
                for top, below in {(s, other), (other, s)}:
                    ts = flushes(top, below)
                    if ts:
                        flush.append((top, below, ts))
                        found |= ts
            for t in sorted(found - seen, key=str):
                seen.add(t)
                states.append(t)
                todo.append(t)
    else:
        states = [(c, q, d) for c in sig for q in a.states for d in looks] + [ACCEPT]
        by_q: dict = {}
        for s in states[:-1]:
            by_q.setdefault(s[1], []).append(s)
            ts = pushes(s)
            if ts:
                push.append((s, s[2], ts))
        for top in states:
            if top == ACCEPT or top[2] == HASH and a.is_final(top[1]):
                flush.extend((top, below, {ACCEPT}) for below in states)
                continue
            for q2 in {q2 for (q1, q2) in a.delta_flush if q1 == top[1]}:
                for below in by_q[q2]:
                    ts = flushes(top, below)
                    if ts:
                        flush.append((top, below, ts))
    return Opa.build(m, states, initial, {ACCEPT} & set(states), push, flush, CLASSICAL)
