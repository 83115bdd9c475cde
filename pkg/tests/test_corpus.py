import json

import pytest

from opal import load_fixture
from opal.corpus import catalog, fixture_text
from opal.errors import InputError
from opal.jsonio import automaton_from_json, automaton_to_json, opm_from_json, opm_to_json
from opal.omega import OmegaOpa, accepts_lasso, validate_omega
from opal.opa import Opa, accepting_trace, prefix_traces, validate
from opal.opm import Opm, is_eq_acyclic

REQUIRED = [
    "db_queries", "interrupts", "versioning_N2", "L1_bfae", "L2_dbfa", "all_calls_opm",
    "bfae_bw", "a_plus_opa", "dyck_bfae", "inf_a_dopbea", "sigma_star_opa", "b_omega_dopbea",
    "factorization_example", "interrupts_restricted",
]


def test_catalog_minimum():
    assert set(REQUIRED) <= set(catalog())


def test_unknown_name():
    with pytest.raises(InputError, match="unknown fixture"):
        load_fixture("no_such_fixture")


@pytest.mark.parametrize("name", catalog())
def test_validates(name):
    fx = load_fixture(name)
    a = fx.payload
    if isinstance(a, Opm):
        assert is_eq_acyclic(a)[0]
    elif isinstance(a, OmegaOpa):
        assert validate_omega(a)["eq_acyclic"]
    else:
        assert validate(a)["eq_acyclic"]
    assert fx.name == name


@pytest.mark.parametrize("name", catalog())
def test_json_round_trip(name):
    a = load_fixture(name).payload
    if isinstance(a, Opm):
        assert opm_from_json(json.loads(json.dumps(opm_to_json(a)))) == a
        return
    back = automaton_from_json(json.loads(json.dumps(automaton_to_json(a))))
    assert back.opm == a.opm
    assert set(back.states) == set(a.states) and back.initial == a.initial
    assert back.delta_push == a.delta_push and back.delta_flush == a.delta_flush


@pytest.mark.parametrize("name,length", [("db_queries", 17), ("interrupts", 13),
                                         ("versioning_N2", 19)])
def test_golden_trace(name, length):
    fx = load_fixture(name)
    golden = fx.golden_trace
    assert len(golden) == length
    word = tuple(fx.expectations["trace"]["word"].split())
    if isinstance(fx.payload, Opa):
        assert accepting_trace(fx.payload, word).lines() == golden
    else:
        assert any(t.lines() == golden for t in prefix_traces(fx.payload, word))


def test_move_list_matches_trace():
    fx = load_fixture("interrupts")
    kinds = [line.split(" | ")[0] for line in fx.golden_trace[1:]]
    assert kinds == fx.expectations["trace"]["moves"]
    assert kinds == ["mark", "mark", "push", "flush", "mark", "mark", "mark", "flush", "flush",
                     "mark", "flush", "push"]


def test_interrupts_stops_at_printed_moves():
    assert load_fixture("interrupts").golden_trace[-1].endswith("| ...")


@pytest.mark.parametrize("name", [n for n in catalog() if load_fixture(n).lassos()])
def test_lasso_verdicts(name):
    fx = load_fixture(name)
    for lasso, verdict in fx.lassos():
        assert accepts_lasso(fx.payload, lasso) == verdict


@pytest.mark.parametrize("name", [n for n in catalog() if load_fixture(n).words()])
def test_word_verdicts(name):
    fx = load_fixture(name)
    for w, verdict in fx.words():
        assert (accepting_trace(fx.payload, w) is not None) == verdict


def test_transcription_notes():
    assert "q4" in load_fixture("versioning_N2").notes


def test_restricted_has_no_int0_pushes():
    a = load_fixture("interrupts_restricted").payload
    assert not any(c == "int_0" and ts for (_, c), ts in a.delta_push.items())


def test_files_are_json():
    for name in catalog():
        doc = json.loads(fixture_text(name))
        assert doc["kind"] in {"opa", "omega", "opm", "trace", "lasso-verdicts"}
