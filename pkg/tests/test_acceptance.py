"""The eight acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from opal import load_fixture, to_buchi_final  # noqa: E402
from opal.closures import (build_pseudorun_transducer, complement, concat,  # noqa: E402
                           concat_state_bound, includes, intersect, pseudorun_prefix, union)
from opal.omega import (BuchiEmptyStack, accepts_lasso, complete_transitions,  # noqa: E402
                        empty_stack_to_final, make_lasso, universe)
from opal.opa import (accepting_trace, classical_to_variant, enumerate_language,  # noqa: E402
                      prefix_traces, variant_state_space_size, variant_to_classical)
from opal.pds import is_empty_finite, is_empty_omega  # noqa: E402
from opal.corpus import catalog  # noqa: E402
from opal.sampling import (compatible_lassos, random_prefix, rng, seeded_omega,  # noqa: E402
                           seeded_opa)

from oracles import Supports, semisupport_triples  # noqa: E402

L = make_lasso


def _omega(name):
    return to_buchi_final(load_fixture(name).payload)


def golden_traces():
    counts = []
    for name in ("db_queries", "interrupts", "versioning_N2"):
        fx = load_fixture(name)
        word = tuple(fx.expectations["trace"]["word"].split())
        golden = fx.golden_trace
        if name == "db_queries":
            t = accepting_trace(fx.payload, word)
            ok = t is not None and t.lines() == golden
        else:
            ok = any(t.lines() == golden for t in prefix_traces(fx.payload, word))
        if not ok:
            return False, f"{name} differs"
        counts.append(f"{name} {len(golden)}")
    return True, ", ".join(counts) + " rows string-equal"


def variant_round_trip():
    sizes = []
    for label, a in (("db_queries", load_fixture("db_queries").payload),
                     ("seeded_opa(0)", seeded_opa(0)), ("seeded_opa(1)", seeded_opa(1))):
        lang = enumerate_language(a, 6)
        v = classical_to_variant(a)
        if enumerate_language(v, 6, variant=True) != lang:
            return False, f"{label}: classical vs variant differ"
        if enumerate_language(variant_to_classical(v), 6) != lang:
            return False, f"{label}: variant vs classical differ"
        sizes.append(f"{label} |L≤6|={len(lang)}")
    return True, "; ".join(sizes)


def state_budgets():
    out = []
    for label, a in (("db_queries", load_fixture("db_queries").payload),
                     ("seeded_opa(0)", seeded_opa(0)), ("seeded_opa(1)", seeded_opa(1))):
        raw = len(classical_to_variant(a, prune=False).states)
        formula = 3 * (len(a.opm.alphabet) + 1) * len(a.states) ** 2
        if not raw == formula == variant_state_space_size(a):
            return False, f"{label}: {raw} states vs formula {formula}"
        out.append(f"{label} {raw}")
    for fin, inf in (("a_plus_opa", "dyck_bfae"), ("sigma_star_opa", "b_omega_dopbea"),
                     ("a_plus_opa", "L2_dbfa")):
        afin, aomega = load_fixture(fin).payload, _omega(inf)
        n = len(concat(afin, aomega).states)
        bound = concat_state_bound(classical_to_variant(afin), aomega)
        if n > bound:
            return False, f"concat {fin}·{inf}: {n} > {bound}"
        out.append(f"{fin}·{inf} {n}≤{bound}")
    return True, "; ".join(out)


def complement_xor():
    subjects = (("L1", _omega("L1_bfae")), ("interrupts", _omega("interrupts")),
                ("seeded_omega(0)", seeded_omega(0)))
    checked = 0
    for label, a in subjects:
        c = complement(a, materialize_result=False)
        both = union(a, c, materialize_result=False)
        lassos = compatible_lassos(rng(40), a.opm, 30)
        if len(lassos) < 30:
            return False, f"{label}: only {len(lassos)} lassos sampled"
        for l in lassos:
            if accepts_lasso(a, l) == accepts_lasso(c, l):
                return False, f"{label}: XOR violated on {l}"
            if not accepts_lasso(both, l):
                return False, f"{label}: union misses {l}"
            checked += 1
    m = load_fixture("interrupts").payload.opm
    if not is_empty_omega(complement(universe(m)))[0]:
        return False, "complement(universe) nonempty"
    return True, f"{checked} lassos, 0 violations; complement(universe) empty"


def pseudorun_fidelity():
    fx = load_fixture("factorization_example")
    a = complete_transitions(to_buchi_final(fx.payload))
    t = build_pseudorun_transducer(a)
    sup = Supports(a)
    outs = pseudorun_prefix(t, fx.expectations["prefix"].split())
    want = (semisupport_triples(a, "#", ("a", "c"), "b", sup), "b",
            semisupport_triples(a, "b", ("a",), "d", sup),
            semisupport_triples(a, "b", ("d",), "b", sup), "b")
    got = [tuple(x if isinstance(x, str) else frozenset(x) for x in o) for o in outs]
    if got != [want]:
        return False, f"example output {got}"
    r = rng(50)
    for _ in range(50):
        w = random_prefix(r, a.opm, r.randint(1, 8))
        if len(pseudorun_prefix(t, w)) != 1:
            return False, f"output not unique on {' '.join(w)}"
    return True, "T(ac) b T(a) T(d) b exact; 50 prefixes with one output each"


def emptiness_inclusion():
    irq = _omega("interrupts")
    restricted = _omega("interrupts_restricted")
    empty, witness = is_empty_omega(irq)
    if empty or not accepts_lasso(irq, witness):
        return False, "interrupts witness"
    if not is_empty_omega(intersect(_omega("L1_bfae"), _omega("inf_a_dopbea")))[0]:
        return False, "L1 ∩ inf_a nonempty"
    if not includes(irq, restricted)[0]:
        return False, "restricted not included"
    ok, cex = includes(restricted, irq)
    if ok or "int_0" not in cex.prefix + cex.period:
        return False, f"converse counterexample {cex}"
    if not accepts_lasso(irq, cex) or accepts_lasso(restricted, cex):
        return False, f"counterexample {cex} does not replay"
    return True, f"witness {witness}; counterexample {cex}"


def hierarchy_memberships():
    l2 = load_fixture("L2_dbfa").payload
    l1 = load_fixture("L1_bfae").payload
    b = empty_stack_to_final(l1.with_acceptance(BuchiEmptyStack(l1.final)))
    cases = [(l2, L("a a", "a b"), True), (l2, L("a a", "a a b b"), True),
             (l2, L("a", "a b"), False), (b, L("a", "b"), True), (b, L("", "a b"), False)]
    for a, l, want in cases:
        if accepts_lasso(a, l) != want:
            return False, f"{l}: expected {want}"
    return True, f"{len(cases)} verdicts exact"


def saturation_soundness():
    opas = [load_fixture(n).payload for n in catalog() if load_fixture(n).kind == "opa"]
    opas += [seeded_opa(s) for s in range(4)]
    for i, a in enumerate(opas):
        empty, word = is_empty_finite(a, with_witness=True)
        if empty != (not enumerate_language(a, 6)):
            return False, f"finite automaton #{i} disagrees"
        if not empty and accepting_trace(a, word) is None:
            return False, f"finite witness {word} rejected"
    replayed = 0
    for n in catalog():
        if load_fixture(n).kind != "omega":
            continue
        a = load_fixture(n).payload
        empty, witness = is_empty_omega(a)
        if not empty:
            if not accepts_lasso(a, witness):
                return False, f"{n}: witness {witness} rejected"
            replayed += 1
    return True, f"{len(opas)} finite automata agree; {replayed} witness lassos replay"


CRITERIA = {
    1: ("golden traces", golden_traces),
    2: ("variant/classical equivalence", variant_round_trip),
    3: ("state budgets", state_budgets),
    4: ("complementation XOR", complement_xor),
    5: ("pseudorun fidelity", pseudorun_fidelity),
    6: ("emptiness and inclusion", emptiness_inclusion),
    7: ("hierarchy memberships", hierarchy_memberships),
    8: ("saturation soundness", saturation_soundness),
}


def evaluate(n):
    title, fn = CRITERIA[n]
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return ok, title, f"{detail} ({time.perf_counter() - start:.1f}s)"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    from conftest import ACCEPTANCE

    ok, title, detail = evaluate(n)
    ACCEPTANCE[n] = (ok, title, detail)
    print(f"{'PASS' if ok else 'FAIL'} [{n}] {title}: {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for n in sorted(CRITERIA):
        ok, title, detail = evaluate(n)
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} [{n}] {title}: {detail}", flush=True)
    sys.exit(1 if failed else 0)
