"""Seeded random matrices, automata, words and lassos for property tests."""

from __future__ import annotations

import random

from .nba import Nba
from .omega import BuchiFinal, Lasso, OmegaOpa, accepts_lasso, universe
from .opa import Opa
from .opm import EQ, GT, HASH, LT, Opm, compatible_finite


def rng(seed: int = 0) -> random.Random:
    return random.Random(seed)


def random_opm(r: random.Random, alphabet=("a", "b", "c"), p_empty: float = 0.1) -> Opm:
    """Conflict-free matrix whose ≐ cells follow alphabet order (hence acyclic)."""
    cells = {}
    for b in alphabet:
        cells[(HASH, b)] = LT
    for i, a in enumerate(alphabet):
        for j, b in enumerate(alphabet):
            if r.random() < p_empty:
                continue
            choices = [LT, GT] + ([EQ] if i < j else [])
            cells[(a, b)] = r.choice(choices)
    return Opm(alphabet, cells)


def _edges(r, states, keys, density):
    out = []
    for k in keys:
        targets = [q for q in states if r.random() < density]
        if targets:
            out.append((*k, targets))
    return out


def random_opa(r: random.Random, m: Opm, n: int = 3, density: float = 0.4) -> Opa:
    states = [f"q{i}" for i in range(n)]
    push = _edges(r, states, [(q, c) for q in states for c in m.alphabet], density)
    flush = _edges(r, states, [(q, p) for q in states for p in states], density)
    final = [q for q in states if r.random() < 0.4] or [r.choice(states)]
    return Opa.build(m, states, [states[0]], final, push, flush)


def random_omega(r: random.Random, m: Opm, n: int = 3, density: float = 0.4) -> OmegaOpa:
    states = [f"q{i}" for i in range(n)]
    push = _edges(r, states, [(q, c) for q in states for c in m.alphabet], density)
    flush = _edges(r, states, [(q, p) for q in states for p in states], density)
    final = [q for q in states if r.random() < 0.4] or [r.choice(states)]
    return OmegaOpa.build(m, states, [states[0]], BuchiFinal(frozenset(final)), push, flush)


def random_word(r: random.Random, m: Opm, max_len: int = 8) -> tuple:
    """A random finite word compatible with ``m`` (rejection sampling)."""
    while True:
        w = tuple(r.choice(m.alphabet) for _ in range(r.randint(0, max_len)))
        if compatible_finite(m, w):
            return w


def random_prefix(r: random.Random, m: Opm, length: int) -> tuple:
    """A word of exactly ``length`` letters extensible to an infinite compatible word.

    Letters are chosen one at a time among those that keep some
    compatible lasso continuation.
    """
    u = universe(m)
    w: list = []
    while len(w) < length:
        options = list(m.alphabet)
        r.shuffle(options)
        for c in options:
            cand = tuple(w) + (c,)
            if any(accepts_lasso(u, Lasso(cand, (d,))) for d in m.alphabet) or any(
                    accepts_lasso(u, Lasso(cand, (d, e))) for d in m.alphabet for e in m.alphabet):
                w.append(c)
                break
        else:
            raise ValueError("no compatible continuation")
    return tuple(w)


def random_lasso(r: random.Random, m: Opm, max_prefix: int = 3, max_period: int = 3,
                 compatible: bool = True, tries: int = 500) -> Lasso:
    """Random ``u·v^ω``; with ``compatible`` only words of ``L_M`` are returned."""
    u = universe(m) if compatible else None
    for _ in range(tries):
        prefix = tuple(r.choice(m.alphabet) for _ in range(r.randint(0, max_prefix)))
        period = tuple(r.choice(m.alphabet) for _ in range(r.randint(1, max_period)))
        lasso = Lasso(prefix, period)
        if u is None or accepts_lasso(u, lasso):
            return lasso
    raise ValueError("no compatible lasso found")


def compatible_lassos(r: random.Random, m: Opm, count: int, **kw) -> list:
    """``count`` distinct compatible lassos (fewer if the space is small)."""
    seen = []
    for _ in range(count * 20):
        lasso = random_lasso(r, m, **kw)
        if lasso not in seen:
            seen.append(lasso)
        if len(seen) == count:
            break
    return seen


def random_nba(r: random.Random, n: int = 4, alphabet=("x", "y"), density: float = 0.35) -> Nba:
    states = list(range(n))
    edges = [(q, a, t) for q in states for a in alphabet for t in states if r.random() < density]
    final = [q for q in states if r.random() < 0.3]
    return Nba.build(alphabet, states, [0], final, edges)


def random_nba_lasso(r: random.Random, alphabet, max_prefix: int = 3, max_period: int = 3):
    prefix = tuple(r.choice(alphabet) for _ in range(r.randint(0, max_prefix)))
    period = tuple(r.choice(alphabet) for _ in range(r.randint(1, max_period)))
    return prefix, period



def seeded_omega(seed: int, n: int = 3) -> OmegaOpa:
    """The artifact-random ``n``-state ωOPBA for ``seed`` (matrix and automaton from one stream)."""
    r = rng(seed)
    return random_omega(r, random_opm(r), n)


def seeded_opa(seed: int, n: int = 3) -> Opa:
    r = rng(seed)
    return random_opa(r, random_opm(r), n)
