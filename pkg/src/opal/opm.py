"""Operator precedence matrices, word compatibility and chains.

An :class:`Opm` stores a partial map from ``(Σ ∪ {#}) × Σ`` to a
:class:`Relation`.  The ending-``#`` column is never stored: every letter
takes precedence over the terminating ``#`` and ``# ≐ #``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import networkx as nx

from .errors import CompatibilityError, InputError, ParseError

HASH = "#"


class Relation(enum.Enum):
    LT = "lt"
    EQ = "eq"
    GT = "gt"

    @property
    def glyph(self) -> str:
        return {"lt": "⋖", "eq": "≐", "gt": "⋗"}[self.value]

    def __str__(self) -> str:
        return self.glyph


LT, EQ, GT = Relation.LT, Relation.EQ, Relation.GT


class Opm:
    """Conflict-free precedence matrix over an ordered alphabet.

    Cells are keyed ``(a, b)`` with ``a`` a letter or ``#`` and ``b`` a
    letter.  Instances are immutable and hashable.
    """

    __slots__ = ("alphabet", "_cells", "_index", "_hash")

    def __init__(self, alphabet: Iterable[str], cells: Mapping[tuple, Relation] = ()):
        alphabet = tuple(alphabet)
        if len(set(alphabet)) != len(alphabet):
            raise InputError("duplicate symbols in alphabet")
        if HASH in alphabet:
            raise InputError("'#' is reserved for the delimiter")
        index = frozenset(alphabet)
        table = {}
        for (a, b), rel in dict(cells).items():
            if a != HASH and a not in index:
                raise InputError(f"unknown symbol {a!r} in matrix row")
            if b not in index:
                raise InputError(f"unknown symbol {b!r} in matrix column")
            rel = Relation(rel)
            if a == HASH and rel is not LT:
                raise InputError(f"the # row may only hold ⋖, got {rel} for {b!r}")
            table[(a, b)] = rel
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "_cells", table)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Opm is immutable")

    @classmethod
    def from_triples(cls, alphabet, triples) -> "Opm":
        """Build from ``(a, b, rel)`` triples, rejecting a doubly filled cell."""
        cells: dict = {}
        for a, b, rel in triples:
            rel = Relation(rel)
            old = cells.get((a, b))
            if old is not None and old is not rel:
                raise CompatibilityError((a, b), old, rel)
            cells[(a, b)] = rel
        return cls(alphabet, cells)

    @property
    def cells(self) -> dict:
        return dict(self._cells)

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Opm):
            return NotImplemented
        return self.alphabet == other.alphabet and self._cells == other._cells

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.alphabet, frozenset(self._cells.items())))
            )
        return self._hash

    def __repr__(self) -> str:
        return f"Opm({list(self.alphabet)!r}, {len(self._cells)} cells)"

    def rel(self, a: str, b: str) -> Relation | None:
        """Relation lookup without symbol checks; handles the ending ``#``."""
        if b == HASH:
            return EQ if a == HASH else GT
        return self._cells.get((a, b))

    def symbols(self) -> tuple:
        return (HASH,) + self.alphabet

    def is_complete(self) -> bool:
        return all(
            (a, b) in self._cells for a in self.symbols() for b in self.alphabet
        )


def relation_of(m: Opm, a: str, b: str) -> Relation | None:
    """Return the stored relation of cell ``(a, b)``, or None when empty."""
    for s in (a, b):
        if s != HASH and s not in m:
            raise InputError(f"unknown symbol {s!r}")
    return m.rel(a, b)


def opm_union(m1: Opm, m2: Opm) -> Opm:
    """Cellwise union; raises CompatibilityError on a conflicting cell."""
    alphabet = list(m1.alphabet) + [s for s in m2.alphabet if s not in m1]
    cells = m1.cells
    for pair, rel in m2.cells.items():
        old = cells.get(pair)
        if old is not None and old is not rel:
            raise CompatibilityError(pair, old, rel)
        cells[pair] = rel
    return Opm(alphabet, cells)


def opm_includes(m1: Opm, m2: Opm) -> bool:
    """True iff every stored cell of ``m1`` appears identically in ``m2``."""
    return all(m2.rel(a, b) is rel for (a, b), rel in m1.cells.items())


def is_eq_acyclic(m: Opm) -> tuple[bool, list | None]:
    """Check the ≐ graph for cycles; returns ``(ok, witness_cycle)``."""
    g = nx.DiGraph()
    g.add_edges_from(pair for pair, rel in m.cells.items() if rel is EQ)
    try:
        edges = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        return True, None
    return False, [u for u, _ in edges]


def complete_opm(m: Opm) -> Opm:
    """Fill empty ``Σ×Σ`` cells with ⋗ and empty ``#``-row cells with ⋖."""
    cells = m.cells
    for b in m.alphabet:
        cells.setdefault((HASH, b), LT)
        for a in m.alphabet:
            cells.setdefault((a, b), GT)
    return Opm(m.alphabet, cells)


# -- shift/reduce over a single-state parser --------------------------------


class _Item(NamedTuple):
    pos: int
    sym: str
    marked: bool


def _reduce(m: Opm, word, bottom: str = HASH, end: str | None = None):
    """Run the precedence reduction of ``word`` over a ``bottom`` context.

    Returns ``(stack, flushes)`` where ``flushes`` lists
    ``(exposed_pos, lookahead_pos)`` pairs; ``end`` (if given) is processed
    as a final lookahead that is never shifted.  Raises ParseError when an
    empty cell is met or a flush finds no marked entry.
    """
    stack = [_Item(-1, bottom, False)]
    flushes = []
    n = len(word)
    seq = list(word) + ([end] if end is not None else [])
    for i, c in enumerate(seq):
        while True:
            top = stack[-1]
            r = m.rel(top.sym, c)
            if r is None:
                raise ParseError(i, f"empty cell ({top.sym}, {c})")
            if r is GT and not (i == n and top.pos == -1):
                j = len(stack) - 1
                while j > 0 and not stack[j].marked:
                    j -= 1
                if j == 0:
                    raise ParseError(i, f"no marked entry to flush before {c}")
                del stack[j:]
                flushes.append((stack[-1].pos, i))
                continue
            break
        if i < n:
            stack.append(_Item(i, c, r is LT))
    return stack, flushes


def compatible_finite(m: Opm, w) -> bool:
    """True iff ``#w#`` reduces completely under ``m``."""
    w = tuple(w)
    for s in w:
        if s not in m:
            raise InputError(f"unknown symbol {s!r}")
    try:
        stack, _ = _reduce(m, w, end=HASH)
    except ParseError:
        return False
    return len(stack) == 1


def is_chain(m: Opm, a0: str, x, a1: str) -> bool:
    """Decide whether ``⌈a0 x a1⌉`` is a (simple or composed) chain."""
    x = tuple(x)
    if not x:
        return False
    try:
        stack, _ = _reduce(m, x, bottom=a0, end=a1)
    except ParseError:
        return False
    return len(stack) == 1 and m.rel(a0, a1) is not None


@dataclass(frozen=True)
class PendingLetter:
    symbol: str


@dataclass(frozen=True)
class ChainBody:
    word: tuple
    left: str
    right: str


def factorize(m: Opm, w) -> list:
    """Split a word prefix into maximal chain bodies and pending letters.

    Letters still on the stack after the prefix is read are pending; every
    flush that exposes a surviving entry closes one chain body.
    """
    w = tuple(w)
    stack, flushes = _reduce(m, w)
    survivors = {item.pos for item in stack}
    bodies = []
    # first letter read since each entry last became the top
    opened = {-1: 0}
    for exposed, look in flushes:
        start = opened.get(exposed, exposed + 1)
        if exposed in survivors and start < look:
            bodies.append((start, look, exposed))
        opened[exposed] = look
    items = [(pos, PendingLetter(w[pos])) for pos in survivors if pos >= 0]
    for start, stop, exposed in bodies:
        left = HASH if exposed < 0 else w[exposed]
        items.append((start, ChainBody(w[start:stop], left, w[stop])))
    items.sort(key=lambda it: it[0])
    return [it for _, it in items]


def items_word(items) -> tuple:
    """Concatenate a factorization back into a word."""
    out = []
    for it in items:
        if isinstance(it, PendingLetter):
            out.append(it.symbol)
        else:
            out.extend(it.word)
    return tuple(out)
