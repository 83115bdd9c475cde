import itertools

import pytest

from opal import load_fixture, to_buchi_final
from opal.closures import build_pseudorun_transducer, emitted_symbols, pseudorun_prefix
from opal.errors import InputError, ValidationError
from opal.nba import (Nba, Primed, RankComplement, TripleSet, build_pseudorun_nba,
                      nba_accepts_lasso, nba_complement, nba_is_empty, nba_product)
from opal.omega import complete_transitions
from opal.opm import is_chain
from opal.sampling import random_nba, random_nba_lasso, rng

from oracles import Supports, semisupport_triples

XY = ("x", "y")


def universal(alphabet=XY):
    return Nba.build(alphabet, [0], [0], [0], [(0, a, 0) for a in alphabet])


def nothing(alphabet=XY):
    return Nba.build(alphabet, [0], [0], [], [(0, a, 0) for a in alphabet])


def lasso_nba(alphabet, prefix, period):
    """The NBA accepting exactly ``prefix·period^ω``."""
    word = tuple(prefix) + tuple(period)
    n = len(word)
    edges = [(i, word[i], i + 1 if i + 1 < n else len(prefix)) for i in range(n)]
    return Nba.build(alphabet, range(n), [0], range(len(prefix), n), edges)


def brute_accepts(n, prefix, period):
    """Lasso acceptance by iterating the period relation on (state, saw_final) sets."""
    current = set(n.initial)
    for a in prefix:
        current = {t for q in current for t in n.step(q, a)}
    # states reachable at period boundaries, and which ones revisit themselves through F
    boundary = set(current)
    frontier = set(current)
    while frontier:
        nxt = {p for q in frontier for p, _ in _lap(n, q, period)} - boundary
        boundary |= nxt
        frontier = nxt
    for q in boundary:
        seen = {(q, False)}
        todo = [(q, False)]
        while todo:
            s, f = todo.pop()
            for p, g in _lap(n, s, period):
                item = (p, f or g)
                if item == (q, True):
                    return True
                if item not in seen:
                    seen.add(item)
                    todo.append(item)
    return False


def _lap(n, q, period):
    states = {(q, False)}
    for a in period:
        states = {(t, f or n.is_final(t)) for s, f in states for t in n.step(s, a)}
    return states


class TestBasics:
    def test_undeclared_state(self):
        with pytest.raises(ValidationError):
            Nba.build(XY, [0], [1], [], [])

    def test_unknown_symbol(self):
        with pytest.raises(ValidationError):
            Nba.build(XY, [0], [0], [], [(0, "z", 0)])

    def test_triple_sets_compare_by_value(self):
        assert TripleSet({("q", "p", True)}) == TripleSet([("q", "p", True)])
        assert len({TripleSet({(1, 2, False)}), TripleSet({(1, 2, False)})}) == 1


class TestLassoMembership:
    def test_universal(self):
        assert nba_accepts_lasso(universal(), (("x",), ("y", "x")))

    def test_no_finals(self):
        assert not nba_accepts_lasso(nothing(), ((), ("x",)))

    def test_empty_period(self):
        with pytest.raises(InputError):
            nba_accepts_lasso(universal(), (("x",), ()))

    def test_prefix_final_does_not_count(self):
        n = Nba.build(XY, [0, 1], [0], [0], [(0, "x", 1), (1, "y", 1)])
        assert not nba_accepts_lasso(n, (("x",), ("y",)))

    def test_random_cross_check(self):
        r = rng(21)
        for _ in range(100):
            n = random_nba(r)
            u, v = random_nba_lasso(r, XY)
            via_product = not nba_is_empty(nba_product(n, lasso_nba(XY, u, v)))
            got = nba_accepts_lasso(n, (u, v))
            assert got == via_product == brute_accepts(n, u, v), (u, v)


class TestProduct:
    def test_universal_neutral(self):
        r = rng(22)
        for _ in range(20):
            n = random_nba(r)
            p = nba_product(n, universal())
            for _ in range(5):
                lasso = random_nba_lasso(r, XY)
                assert nba_accepts_lasso(p, lasso) == nba_accepts_lasso(n, lasso)

    def test_disjoint_empty(self):
        only_x = Nba.build(XY, [0], [0], [0], [(0, "x", 0)])
        only_y = Nba.build(XY, [0], [0], [0], [(0, "y", 0)])
        assert nba_is_empty(nba_product(only_x, only_y))
        assert not nba_is_empty(only_x)

    def test_size_bound(self):
        r = rng(23)
        for _ in range(20):
            a, b = random_nba(r), random_nba(r)
            assert len(nba_product(a, b).states) <= 2 * len(a.states) * len(b.states)

    def test_conjunction(self):
        r = rng(24)
        for _ in range(30):
            a, b = random_nba(r), random_nba(r)
            p = nba_product(a, b)
            lasso = random_nba_lasso(r, XY)
            assert nba_accepts_lasso(p, lasso) == (nba_accepts_lasso(a, lasso)
                                                   and nba_accepts_lasso(b, lasso))

    def test_alphabet_mismatch(self):
        with pytest.raises(InputError):
            nba_product(universal(), universal(("x",)))


class TestComplement:
    def test_universal(self):
        assert nba_is_empty(nba_complement(universal()))

    def test_of_empty(self):
        c = nba_complement(nothing())
        assert not nba_is_empty(c)
        assert nba_accepts_lasso(c, ((), ("x", "y")))

    def test_rank_bound(self):
        n = random_nba(rng(25))
        kv = RankComplement(n)
        assert kv.max_rank == 2 * len(set(n.states) - n.final) <= 2 * len(n.states)

    def test_random_xor(self):
        r = rng(26)
        for _ in range(50):
            n = random_nba(r)
            c = nba_complement(n, lazy=True)
            for _ in range(20):
                lasso = random_nba_lasso(r, XY)
                assert nba_accepts_lasso(n, lasso) != nba_accepts_lasso(c, lasso), lasso

    def test_explicit_matches_lazy(self):
        r = rng(27)
        n = random_nba(r, n=3)
        explicit, lazy = nba_complement(n), nba_complement(n, lazy=True)
        for _ in range(20):
            lasso = random_nba_lasso(r, XY)
            assert nba_accepts_lasso(explicit, lasso) == nba_accepts_lasso(lazy, lasso)


def pseudorun_lasso(t, prefix, period, laps=2):
    """The pseudorun of ``prefix·period^ω`` as a lasso, read off three finite prefixes.

    The last letter of a finite prefix may still be pending, so it is dropped.
    """
    outs = []
    for k in (laps, laps + 1, laps + 2):
        [out] = pseudorun_prefix(t, tuple(prefix) + tuple(period) * k)
        outs.append(out[:-1] if out and isinstance(out[-1], str) else out)
    a, b, c = outs
    assert b[:len(a)] == a and c[:len(b)] == b and c[len(b):] == b[len(a):]
    return a, b[len(a):]


@pytest.fixture(scope="module")
def l1_parts(l1):
    a = complete_transitions(l1)
    t = build_pseudorun_transducer(a)
    return a, t, build_pseudorun_nba(a, t)


class TestPseudorunNba:
    def test_primes(self, l1_parts):
        a, _, n = l1_parts
        primes = [q for q in n.states if isinstance(q, Primed)]
        assert len(primes) <= len(a.states)
        assert set(primes) <= n.final

    def test_letter_edges_are_push_edges(self, l1_parts):
        a, _, n = l1_parts
        letters = {(q, c, p) for (q, c), ts in n.delta.items() if c in a.opm.alphabet
                   and not isinstance(q, Primed) for p in ts}
        assert letters == {(q, c, p) for (q, c), ts in a.delta_push.items() for p in ts}

    def test_membership(self, l1_parts):
        _, t, n = l1_parts
        assert nba_accepts_lasso(n, pseudorun_lasso(t, ("a",), ("b",)))
        assert not nba_accepts_lasso(n, pseudorun_lasso(t, (), ("a", "b")))

    @pytest.mark.parametrize("name", ["L1_bfae", "inf_a_dopbea", "L2_dbfa"])
    def test_symbols_are_chain_semisupports(self, name):
        a = complete_transitions(to_buchi_final(load_fixture(name).payload))
        m = a.opm
        sup = Supports(a)
        found = set()
        ctx = ("#",) + m.alphabet
        for k in range(1, 5):
            for x in itertools.product(m.alphabet, repeat=k):
                for a0, a1 in itertools.product(ctx, m.alphabet):
                    if is_chain(m, a0, x, a1):
                        found.add(semisupport_triples(a, a0, x, a1, sup))
        for s in emitted_symbols(build_pseudorun_transducer(a)):
            assert frozenset(s) in found, s

    def test_s_edges(self, l1_parts):
        a, _, n = l1_parts
        for (q, s), ts in n.delta.items():
            if isinstance(s, TripleSet) and not isinstance(q, Primed):
                want = {Primed(p) if f else p for (x, p, f) in s if x == q}
                assert ts == want


@pytest.mark.parametrize("name", ["L1_bfae", "interrupts", "L2_dbfa", "inf_a_dopbea"])
def test_corpus_nba_complement(name):
    from opal.closures import complement_parts
    _, n, kv = complement_parts(load_fixture(name).payload)
    r = rng(28)
    for _ in range(30):
        lasso = random_nba_lasso(r, n.alphabet)
        assert nba_accepts_lasso(n, lasso) != nba_accepts_lasso(kv, lasso)
