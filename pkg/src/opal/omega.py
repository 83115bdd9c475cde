"""Operator precedence automata on infinite words.

Acceptance is one of :class:`BuchiFinal`, :class:`BuchiEmptyStack` or
:class:`Muller`.  Infinite inputs are always lassos ``u·v^ω``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .errors import InputError, ValidationError
from .opa import AutomatonBase, _freeze_delta, validate
from .opm import Opm

SINK = "⊥sink"


@dataclass(frozen=True)
class BuchiFinal:
    final: frozenset
    kind = "buchi_final"


@dataclass(frozen=True)
class BuchiEmptyStack:
    final: frozenset
    kind = "buchi_empty_stack"


@dataclass(frozen=True)
class Muller:
    table: frozenset
    kind = "muller"


@dataclass(frozen=True, eq=True)
class OmegaOpa(AutomatonBase):
    """Explicit ω-automaton with split push and flush relations."""

    opm: Opm
    states: tuple
    initial: frozenset
    acceptance: object
    delta_push: dict = field(default_factory=dict)
    delta_flush: dict = field(default_factory=dict)

    __hash__ = None

    def __post_init__(self):
        self._check_refs()
        declared = set(self.states)
        acc = self.acceptance
        if isinstance(acc, Muller):
            for row in acc.table:
                for q in row:
                    if q not in declared:
                        raise ValidationError(f"Muller table mentions undeclared state {q!r}")
        elif isinstance(acc, (BuchiFinal, BuchiEmptyStack)):
            for q in acc.final:
                if q not in declared:
                    raise ValidationError(f"final state {q!r} is not declared")
        else:
            raise ValidationError(f"unknown acceptance {acc!r}")

    @classmethod
    def build(cls, opm, states, initial, acceptance, push=(), flush=()):
        return cls(
            opm,
            tuple(states),
            frozenset(initial),
            acceptance,
            _freeze_delta(((q, a), ts) for q, a, ts in push),
            _freeze_delta(((q, p), ts) for q, p, ts in flush),
        )

    @property
    def final(self) -> frozenset:
        acc = self.acceptance
        if isinstance(acc, Muller):
            raise InputError("Muller automata have no final set")
        return acc.final

    def is_final(self, q) -> bool:
        return q in self.final

    def with_acceptance(self, acceptance) -> "OmegaOpa":
        return OmegaOpa(self.opm, self.states, self.initial, acceptance,
                        self.delta_push, self.delta_flush)


class LazyOmegaOpa:
    """Büchi-final automaton given by successor callbacks (results cached).

    Closures over large state spaces return these; :func:`materialize`
    turns one into an explicit :class:`OmegaOpa` over its reachable part.
    When ``key`` is given, flushes only see ``key(below)`` instead of the
    whole below state, which keeps pushdown encodings small.
    """

    acceptance_kind = "buchi_final"

    def __init__(self, opm: Opm, initial, push: Callable, flush: Callable,
                 is_final: Callable, empty_stack: bool = False, key: Callable | None = None):
        self.opm = opm
        self.initial = frozenset(initial)
        self._push, self._flush, self._final = push, flush, is_final
        self._key = key
        self._pc: dict = {}
        self._fc: dict = {}
        if empty_stack:
            self.acceptance_kind = "buchi_empty_stack"

    @property
    def alphabet(self):
        return self.opm.alphabet

    def push(self, q, a) -> frozenset:
        key = (q, a)
        out = self._pc.get(key)
        if out is None:
            out = self._pc[key] = frozenset(self._push(q, a))
        return out

    def flush(self, q, k) -> frozenset:
        """Targets of a flush from ``q`` over a below state with key ``k``."""
        key = (q, k)
        out = self._fc.get(key)
        if out is None:
            out = self._fc[key] = frozenset(self._flush(q, k))
        return out

    def flush_key(self, p):
        return p if self._key is None else self._key(p)

    def is_final(self, q) -> bool:
        return self._final(q)


def acceptance_kind(a) -> str:
    acc = getattr(a, "acceptance", None)
    if acc is not None:
        return acc.kind
    kind = getattr(a, "acceptance_kind", None)
    if kind is None:
        raise InputError("expected an automaton on infinite words")
    return kind


def validate_omega(a: OmegaOpa) -> dict:
    report = validate(a)
    acc = a.acceptance
    report["acceptance"] = acc.kind
    if isinstance(acc, Muller):
        report["table"] = [sorted(map(str, row)) for row in acc.table]
    else:
        report["final"] = sorted(map(str, acc.final))
    return report


# -- lassos -----------------------------------------------------------------


class Lasso(NamedTuple):
    prefix: tuple
    period: tuple

    def __str__(self) -> str:
        return f"{' '.join(self.prefix)} ; {' '.join(self.period)}".strip()

    def word(self, n: int) -> tuple:
        """First ``n`` letters of ``u·v^ω``."""
        out = list(self.prefix[:n])
        while len(out) < n:
            out.extend(self.period)
        return tuple(out[:n])


def make_lasso(prefix, period) -> Lasso:
    if isinstance(prefix, str):
        prefix = prefix.split()
    if isinstance(period, str):
        period = period.split()
    period = tuple(period)
    if not period:
        raise InputError("lasso period must be nonempty")
    return Lasso(tuple(prefix), period)


def parse_lasso(text: str) -> Lasso:
    """Parse ``"u ; v"`` with whitespace-separated symbols."""
    if ";" not in text:
        raise InputError("lasso syntax is 'u ; v'")
    u, v = text.split(";", 1)
    return make_lasso(u, v)


# -- conversions ------------------------------------------------------------


def complete_transitions(a: OmegaOpa) -> OmegaOpa:
    """Add a non-final sink filling every empty push or flush image."""
    sink = SINK
    while sink in a.states:
        sink += "'"
    states = a.states + (sink,)
    push = dict(a.delta_push)
    flush = dict(a.delta_flush)
    for q in states:
        for c in a.opm.alphabet:
            if not push.get((q, c)):
                push[(q, c)] = frozenset({sink})
        for p in states:
            if not flush.get((q, p)):
                flush[(q, p)] = frozenset({sink})
    return OmegaOpa(a.opm, states, a.initial, a.acceptance, push, flush)


def empty_stack_to_final(a: OmegaOpa) -> OmegaOpa:
    """Tagged construction: ``(q, 'e')`` marks a bottom-only stack."""
    if not isinstance(a.acceptance, BuchiEmptyStack):
        raise InputError("empty_stack_to_final needs buchi_empty_stack acceptance")
    tags = ("e", "n")
    states = [(q, t) for q in a.states for t in tags]
    push = [((q, t), c, {(p, "n") for p in ts})
            for (q, c), ts in a.delta_push.items() for t in tags]
    flush = [((q, t), (p, u), {(r, u) for r in ts})
             for (q, p), ts in a.delta_flush.items() for t in tags for u in tags]
    final = {(q, "e") for q in a.acceptance.final}
    return OmegaOpa.build(a.opm, states, {(q, "e") for q in a.initial},
                          BuchiFinal(frozenset(final)), push, flush)


def muller_to_buchi(a: OmegaOpa) -> OmegaOpa:
    """Guess-the-set conversion on control states.

    Phase-two states ``(q, i, R)`` stay inside table row ``T_i`` and collect
    visited states in ``R``; a state with ``R == T_i`` is final and the
    next move starts a fresh round.
    """
    if not isinstance(a.acceptance, Muller):
        raise InputError("muller_to_buchi needs muller acceptance")
    rows = sorted((frozenset(r) for r in a.acceptance.table if r), key=lambda r: sorted(map(str, r)))
    states = [("1", q) for q in a.states]

    def lift(i, r, seen):
        row = rows[i]
        if r not in row:
            return None
        base = frozenset() if seen == row else seen
        return ("2", r, i, base | {r})

    phase2 = []
    for i, row in enumerate(rows):
        members = sorted(row, key=str)
        for k in range(1, len(members) + 1):
            for combo in itertools.combinations(members, k):
                seen = frozenset(combo)
                for q in members:
                    if q in seen:
                        phase2.append(("2", q, i, seen))
    states += phase2

    def jump_targets(targets, i=None, seen=None):
        out = set()
        for r in targets:
            if i is None:
                out.add(("1", r))
                for j in range(len(rows)):
                    s = lift(j, r, frozenset())
                    if s:
                        out.add(s)
            else:
                s = lift(i, r, seen)
                if s:
                    out.add(s)
        return out

    push = []
    for st in states:
        q = st[1]
        for c in a.opm.alphabet:
            ts = a.push(q, c)
            if not ts:
                continue
            if st[0] == "1":
                push.append((st, c, jump_targets(ts)))
            else:
                push.append((st, c, jump_targets(ts, st[2], st[3])))
    flush = []
    for st in states:
        for below in states:
            ts = a.flush(st[1], below[1])
            if not ts:
                continue
            if st[0] == "1":
                flush.append((st, below, jump_targets(ts)))
            else:
                flush.append((st, below, jump_targets(ts, st[2], st[3])))
    final = {s for s in phase2 if s[3] == rows[s[2]]}
    return OmegaOpa.build(a.opm, states, {("1", q) for q in a.initial},
                          BuchiFinal(frozenset(final)), push, flush)


def to_buchi_final(a):
    """Return an equivalent automaton with Büchi final-state acceptance."""
    kind = acceptance_kind(a)
    if kind == "buchi_final":
        return a
    if kind == "buchi_empty_stack":
        return empty_stack_to_final(a)
    return muller_to_buchi(a)


# -- lasso membership ---------------------------------------------------------


def lasso_automaton(m: Opm, l: Lasso) -> OmegaOpa:
    """Position-tracking automaton accepting exactly ``{u·v^ω} ∩ L_M``."""
    word = l.prefix + l.period
    for c in word:
        if c not in m:
            raise InputError(f"unknown symbol {c!r}")
    n = len(word)
    nxt = [i + 1 if i + 1 < n else len(l.prefix) for i in range(n)]
    states = list(range(n))
    push = [(i, word[i], {nxt[i]}) for i in states]
    flush = [(p, q, {p}) for p in states for q in states]
    return OmegaOpa.build(m, states, {0}, BuchiFinal(frozenset(states)), push, flush)


def universe(m: Opm) -> OmegaOpa:
    """One all-final state with total transitions: ``L = L_M``."""
    q = "u"
    return OmegaOpa.build(m, [q], [q], BuchiFinal(frozenset([q])),
                          [(q, c, [q]) for c in m.alphabet], [(q, q, [q])])


def accepts_lasso(a, l: Lasso) -> bool:
    """Decide ``u·v^ω ∈ L(a)`` by product with the lasso automaton and emptiness."""
    from .closures import intersect
    from .pds import is_empty_omega

    for c in l.prefix + l.period:
        if c not in a.opm:
            raise InputError(f"lasso symbol {c!r} not in the alphabet")
    product = intersect(to_buchi_final(a), lasso_automaton(a.opm, l), materialize_result=False)
    empty, _ = is_empty_omega(product)
    return not empty


def prefix_runs(a, l: Lasso, n: int):
    """Step-by-step runs over the first ``n`` letters (for audits and traces)."""
    from .opa import prefix_traces

    return prefix_traces(a, l.word(n))

