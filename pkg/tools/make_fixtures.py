"""Regenerate src/opal/fixtures/*.json from the hand-transcribed tables below.

Run from the repository root: ``python3 tools/make_fixtures.py``.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "opal" / "fixtures"


def opm(alphabet, rows, hash_row):
    """``rows`` maps a letter to ``{"lt": [...], "eq": [...], "gt": [...]}``."""
    cells = {}
    for a, spec in rows.items():
        for rel, bs in spec.items():
            for b in bs:
                assert b not in cells.get(a, {}), (a, b)
                cells.setdefault(a, {})[b] = rel
    return {"alphabet": alphabet, "cells": cells, "hash_row": {b: "lt" for b in hash_row}}


def automaton(m, states, initial, push, flush, final=None, mode="classical", acceptance=None):
    out = {
        "alphabet": m["alphabet"],
        "opm": m,
        "states": states,
        "initial": initial,
    }
    if acceptance is None:
        out["final"] = final
        out["mode"] = mode
    grouped = {}
    for q, syms, t in push:
        for c in syms.split():
            grouped.setdefault((q, c), []).append(t)
    out["delta_push"] = [{"from": q, "symbol": c, "to": sorted(set(ts))}
                         for (q, c), ts in grouped.items()]
    fg = {}
    for q, p, t in flush:
        fg.setdefault((q, p), []).append(t)
    out["delta_flush"] = [{"top": q, "below": p, "to": sorted(set(ts))}
                          for (q, p), ts in fg.items()]
    if acceptance is not None:
        out["acceptance"] = acceptance
    return out


def lasso(u, v, verdict):
    return {"prefix": u, "period": v, "accepted": verdict}


def write(name, kind, payload, expectations=None, notes=""):
    doc = {"name": name, "kind": kind, kind_key(kind): payload,
           "expectations": expectations or {}, "notes": notes}
    (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n",
                                      encoding="utf-8")


def kind_key(kind):
    return "opm" if kind == "opm" else "automaton"


# -- database queries --------------------------------------------------------------

TABLES = "A B C D R".split()
UNARY = ["sigma_expr", "pi_expr"]
BINARY = ["join", "cup", "cap"]
DB_SIGMA = TABLES + UNARY + BINARY
db_rows = {t: {"gt": BINARY} for t in TABLES}
for u in UNARY:
    db_rows[u] = {"lt": TABLES + UNARY, "gt": BINARY}
for b in BINARY:
    db_rows[b] = {"lt": TABLES + UNARY + ["join"], "gt": ["cup", "cap"]}
M_DB = opm(DB_SIGMA, db_rows, DB_SIGMA)
db = automaton(
    M_DB, ["q0", "q1"], ["q0"],
    [("q0", "sigma_expr pi_expr", "q0"), ("q0", " ".join(TABLES), "q1"),
     ("q1", "join cup cap", "q0")],
    [("q1", "q0", "q1"), ("q1", "q1", "q1")],
    final=["q1"],
)
DB_TRACE = [
    "start | [#,q0] | A cup B join C join pi_expr D #",
    "mark | [#,q0][A*,q1] | cup B join C join pi_expr D #",
    "flush | [#,q1] | cup B join C join pi_expr D #",
    "mark | [#,q1][cup*,q0] | B join C join pi_expr D #",
    "mark | [#,q1][cup*,q0][B*,q1] | join C join pi_expr D #",
    "flush | [#,q1][cup*,q1] | join C join pi_expr D #",
    "mark | [#,q1][cup*,q1][join*,q0] | C join pi_expr D #",
    "mark | [#,q1][cup*,q1][join*,q0][C*,q1] | join pi_expr D #",
    "flush | [#,q1][cup*,q1][join*,q1] | join pi_expr D #",
    "mark | [#,q1][cup*,q1][join*,q1][join*,q0] | pi_expr D #",
    "mark | [#,q1][cup*,q1][join*,q1][join*,q0][pi_expr*,q0] | D #",
    "mark | [#,q1][cup*,q1][join*,q1][join*,q0][pi_expr*,q0][D*,q1] | #",
    "flush | [#,q1][cup*,q1][join*,q1][join*,q0][pi_expr*,q1] | #",
    "flush | [#,q1][cup*,q1][join*,q1][join*,q1] | #",
    "flush | [#,q1][cup*,q1][join*,q1] | #",
    "flush | [#,q1][cup*,q1] | #",
    "flush | [#,q1] | #",
]
write("db_queries", "opa", db, {
    "trace": {"word": "A cup B join C join pi_expr D", "lines": DB_TRACE},
    "words": [
        {"word": "A cup B join C join pi_expr D", "accepted": True},
        {"word": "sigma_expr R", "accepted": True},
        {"word": "A join", "accepted": False},
        {"word": "", "accepted": False},
    ],
    "universe_lassos": [lasso("", "R R", False), lasso("", "A cup", True)],
}, "Tables are letters A B C D R; unary operators pi_expr and sigma_expr.")

# -- interrupts ----------------------------------------------------------------------

INT_SIGMA = ["call_a", "ret_a", "call_b", "ret_b", "int_0", "int_1", "int_2"]
INTS = ["int_0", "int_1", "int_2"]
M_INT = opm(INT_SIGMA, {
    "call_a": {"lt": ["call_a", "call_b"] + INTS, "eq": ["ret_a"]},
    "ret_a": {"gt": INT_SIGMA},
    "call_b": {"lt": ["call_a", "call_b"] + INTS, "eq": ["ret_b"]},
    "ret_b": {"gt": INT_SIGMA},
    "int_0": {"gt": ["call_a", "ret_a", "call_b", "ret_b", "int_0"], "lt": ["int_1", "int_2"]},
    "int_1": {"gt": ["call_a", "ret_a", "call_b", "ret_b", "int_0", "int_1"], "lt": ["int_2"]},
    "int_2": {"gt": INT_SIGMA},
}, ["call_a", "call_b"] + INTS)
INT_FLUSH = [("q1", "q1", "q1"), ("q1", "q0", "q0")]


def interrupts_automaton(first):
    return automaton(
        M_INT, ["q0", "q1"], ["q0"],
        [("q0", " ".join(first), "q1"), ("q1", " ".join(first + ["ret_a", "ret_b"]), "q1")],
        INT_FLUSH,
        acceptance={"kind": "buchi_final", "final": ["q0"]},
    )


FIRST = ["call_a", "call_b", "int_0", "int_1", "int_2"]
INT_TRACE = [
    "start | [#,q0] | call_a call_b ret_b call_b int_1 int_2 int_0 ret_b ...",
    "mark | [#,q0][call_a*,q1] | call_b ret_b call_b int_1 int_2 int_0 ret_b ...",
    "mark | [#,q0][call_a*,q1][call_b*,q1] | ret_b call_b int_1 int_2 int_0 ret_b ...",
    "push | [#,q0][call_a*,q1][call_b*,q1][ret_b,q1] | call_b int_1 int_2 int_0 ret_b ...",
    "flush | [#,q0][call_a*,q1] | call_b int_1 int_2 int_0 ret_b ...",
    "mark | [#,q0][call_a*,q1][call_b*,q1] | int_1 int_2 int_0 ret_b ...",
    "mark | [#,q0][call_a*,q1][call_b*,q1][int_1*,q1] | int_2 int_0 ret_b ...",
    "mark | [#,q0][call_a*,q1][call_b*,q1][int_1*,q1][int_2*,q1] | int_0 ret_b ...",
    "flush | [#,q0][call_a*,q1][call_b*,q1][int_1*,q1] | int_0 ret_b ...",
    "flush | [#,q0][call_a*,q1][call_b*,q1] | int_0 ret_b ...",
    "mark | [#,q0][call_a*,q1][call_b*,q1][int_0*,q1] | ret_b ...",
    "flush | [#,q0][call_a*,q1][call_b*,q1] | ret_b ...",
    "push | [#,q0][call_a*,q1][call_b*,q1][ret_b,q1] | ...",
]
INT_LASSOS = [
    lasso("", "call_a ret_a", True),
    lasso("", "int_0", True),
    lasso("call_a", "call_b ret_b", False),
    lasso("", "call_b int_1 ret_b", True),
]
write("interrupts", "omega", interrupts_automaton(FIRST), {
    "trace": {"word": "call_a call_b ret_b call_b int_1 int_2 int_0 ret_b", "lines": INT_TRACE,
              "moves": ["mark", "mark", "push", "flush", "mark", "mark", "mark", "flush",
                        "flush", "mark", "flush", "push"]},
    "lassos": INT_LASSOS,
    "empty": False,
}, "Only the 13 printed configurations are stored; the continuation is not invented.")

write("interrupts_restricted", "omega", interrupts_automaton(["call_a", "call_b", "int_1", "int_2"]), {
    "lassos": [lasso("", "call_a ret_a", True), lasso("", "int_0", False)],
    "empty": False,
}, "Derived fixture: the interrupts automaton without any push edge on int_0.")

write("universe_int", "omega", automaton(
    M_INT, ["u"], ["u"], [("u", " ".join(INT_SIGMA), "u")], [("u", "u", "u")],
    acceptance={"kind": "buchi_final", "final": ["u"]}), {
    "lassos": [lasso("", "call_a ret_a", True), lasso("", "ret_a", False)],
    "empty": False,
}, "Derived fixture: one all-final state with every move over the interrupts matrix.")

# -- versioning ----------------------------------------------------------------------

VER = ["sv", "rb", "wr", "ud"]
M_VER = opm(VER, {
    "sv": {"lt": ["sv", "wr"], "eq": ["rb"]},
    "rb": {"gt": VER},
    "wr": {"lt": ["sv", "wr"], "gt": ["rb"], "eq": ["ud"]},
    "ud": {"gt": VER},
}, ["sv", "wr"])
write("versioning", "omega", automaton(
    M_VER, ["q"], ["q"], [("q", "sv rb wr ud", "q")], [("q", "q", "q")],
    acceptance={"kind": "buchi_final", "final": ["q"]}), {
    "lassos": [lasso("", "sv rb", True), lasso("", "wr ud", True)],
}, "Single-state system accepting every compatible word.")

N2_STATES = ["q0", "0", "1", "2", "q1", "q2", "q3", "q4"]
N2 = automaton(
    M_VER, N2_STATES, ["q0"],
    [("q0", "sv", "0"), ("0", "wr", "1"), ("0", "rb", "q1"), ("0", "wr", "q4"), ("0", "sv", "0"),
     ("1", "wr", "q4"), ("1", "ud", "q1"), ("1", "sv", "0"), ("1", "wr", "2"),
     ("2", "wr", "q4"), ("2", "ud", "q1"), ("2", "sv", "0"),
     ("q4", "wr ud", "q4"), ("q2", "rb", "q1")],
    [("1", "0", "q2"), ("2", "1", "q3"), ("q4", "q4", "q4"), ("q4", "0", "0"), ("q4", "1", "1"),
     ("q4", "2", "2"), ("q1", "0", "0"), ("q1", "1", "1"), ("q1", "2", "2"), ("q1", "q0", "q0"),
     ("q3", "0", "q2")],
    acceptance={"kind": "buchi_final", "final": N2_STATES},
)
VER_TRACE = [
    "start | [#,q0] | sv wr ud rb sv wr wr ud sv wr ...",
    "mark | [#,q0][sv*,0] | wr ud rb sv wr wr ud sv wr rb ...",
    "mark | [#,q0][sv*,0][wr*,1] | ud rb sv wr wr ud sv wr rb wr ...",
    "push | [#,q0][sv*,0][wr*,1][ud,q1] | rb sv wr wr ud sv wr rb wr sv ...",
    "flush | [#,q0][sv*,0] | rb sv wr wr ud sv wr rb wr sv ...",
    "push | [#,q0][sv*,0][rb,q1] | sv wr wr ud sv wr rb wr sv ...",
    "flush | [#,q0] | sv wr wr ud sv wr rb wr sv ...",
    "mark | [#,q0][sv*,0] | wr wr ud sv wr rb wr sv ...",
    "mark | [#,q0][sv*,0][wr*,1] | wr ud sv wr rb wr sv ...",
    "mark | [#,q0][sv*,0][wr*,1][wr*,q4] | ud sv wr rb wr sv ...",
    "push | [#,q0][sv*,0][wr*,1][wr*,q4][ud,q4] | sv wr rb wr sv ...",
    "flush | [#,q0][sv*,0][wr*,1] | sv wr rb wr sv ...",
    "mark | [#,q0][sv*,0][wr*,1][sv*,0] | wr rb wr sv ...",
    "mark | [#,q0][sv*,0][wr*,1][sv*,0][wr*,1] | rb wr sv ...",
    "flush | [#,q0][sv*,0][wr*,1][sv*,q2] | rb wr sv ...",
    "push | [#,q0][sv*,0][wr*,1][sv*,q2][rb,q1] | wr sv ...",
    "flush | [#,q0][sv*,0][wr*,1] | wr sv ...",
    "mark | [#,q0][sv*,0][wr*,1][wr*,2] | sv ...",
    "mark | [#,q0][sv*,0][wr*,1][wr*,2][sv*,0] | ...",
]
write("versioning_N2", "omega", N2, {
    "trace": {"word": "sv wr ud rb sv wr wr ud sv wr rb wr sv", "lines": VER_TRACE},
    "lassos": [lasso("", "sv rb", True), lasso("", "sv wr ud rb", True)],
}, "Transcribed from the drawn graph. The paired edges between 0, 1, 2 and q4 are read as "
   "wr-pushes into q4 from each of 0, 1 and 2; the long arc from q3 is read as the flush "
   "(q3, 0) -> q2.")

# -- hierarchy witnesses -------------------------------------------------------------

AB = ["a", "b"]
M_ALL_GT = opm(AB, {"a": {"gt": AB}, "b": {"gt": AB}}, AB)
write("L1_bfae", "omega", automaton(
    M_ALL_GT, ["q0", "q1"], ["q0"],
    [("q0", "a b", "q0"), ("q0", "b", "q1"), ("q1", "b", "q1")],
    [("q0", "q0", "q0"), ("q1", "q0", "q1"), ("q1", "q1", "q1")],
    acceptance={"kind": "buchi_empty_stack", "final": ["q1"]}), {
    "lassos": [lasso("a", "b", True), lasso("", "a b", False), lasso("", "b", True),
               lasso("b b a", "b", True), lasso("", "a", False)],
}, "Language: words with finitely many a. The drawn graph has no flush out of q1 and "
   "leaves the letter cells unspecified; flushes (q1,q0)->q1, (q1,q1)->q1 and takes-"
   "precedence letter cells are added so that the stated language is recognized.")

write("L2_dbfa", "omega", automaton(
    opm(AB, {"a": {"lt": ["a"], "eq": ["b"]}, "b": {"gt": ["a", "b"]}}, ["a"]),
    ["q0", "q1", "q2", "q3"], ["q0"],
    [("q0", "a", "q1"), ("q1", "a", "q2"), ("q2", "a", "q3"), ("q3", "a b", "q3")],
    [("q3", "q3", "q3"), ("q3", "q2", "q2")],
    acceptance={"kind": "buchi_final", "final": ["q2"]}), {
    "lassos": [lasso("a a", "a b", True), lasso("a a", "a a b b", True),
               lasso("a", "a b", False)],
}, "The unspecified cell (b, a) is fixed to takes-precedence.")

write("all_calls_opm", "opm", opm(AB, {"a": {"lt": AB}, "b": {"lt": AB}}, AB), {},
      "Every letter yields precedence to every letter: all letters stay pending.")

write("bfae_bw", "omega", automaton(
    opm(AB, {"a": {"lt": AB}, "b": {"lt": ["a"], "gt": ["b"]}}, AB),
    ["q0"], ["q0"], [("q0", "b", "q0")], [("q0", "q0", "q0")],
    acceptance={"kind": "buchi_empty_stack", "final": ["q0"]}), {
    "lassos": [lasso("", "b", True), lasso("a", "b", False)],
}, "Recognizes b^omega with empty-stack acceptance.")

write("a_plus_opa", "opa", automaton(
    opm(["a"], {"a": {"lt": ["a"]}}, ["a"]),
    ["q0", "q1"], ["q0"], [("q0", "a", "q1"), ("q1", "a", "q1")],
    [("q1", "q0", "q1"), ("q1", "q1", "q1")], final=["q1"]), {
    "words": [{"word": "a", "accepted": True}, {"word": "a a a", "accepted": True},
              {"word": "", "accepted": False}],
}, "Finite-word automaton for a+.")

write("dyck_bfae", "omega", automaton(
    opm(AB, {"a": {"lt": ["a"], "eq": ["b"]}, "b": {"gt": AB}}, ["a"]),
    ["q0", "q1"], ["q0"], [("q0", "a", "q1"), ("q1", "a b", "q1")],
    [("q1", "q0", "q0"), ("q1", "q1", "q1")],
    acceptance={"kind": "buchi_empty_stack", "final": ["q0"]}), {
    "lassos": [lasso("", "a b", True), lasso("", "a a b b", True), lasso("a", "a b", False)],
}, "Infinite concatenations of Dyck words over a, b.")

write("inf_a_dopbea", "omega", automaton(
    M_ALL_GT, ["q0", "q1"], ["q0"],
    [("q0", "a", "q1"), ("q0", "b", "q0"), ("q1", "a", "q1"), ("q1", "b", "q0")],
    [("q0", "q0", "q0"), ("q0", "q1", "q0"), ("q1", "q0", "q1"), ("q1", "q1", "q1")],
    acceptance={"kind": "buchi_empty_stack", "final": ["q1"]}), {
    "lassos": [lasso("", "a", True), lasso("", "a b", True), lasso("a", "b", False)],
}, "Deterministic; infinitely many a.")

write("sigma_star_opa", "opa", automaton(
    opm(AB, {"a": {"lt": AB}, "b": {"lt": ["a"], "gt": ["b"]}}, AB),
    ["q0"], ["q0"], [("q0", "a b", "q0")], [("q0", "q0", "q0")], final=["q0"]), {
    "words": [{"word": "", "accepted": True}, {"word": "b b", "accepted": True}],
}, "Finite-word automaton accepting every compatible word.")

write("b_omega_dopbea", "omega", automaton(
    opm(["b"], {"b": {"gt": ["b"]}}, ["b"]),
    ["q0"], ["q0"], [("q0", "b", "q0")], [("q0", "q0", "q0")],
    acceptance={"kind": "buchi_empty_stack", "final": ["q0"]}), {
    "lassos": [lasso("", "b", True)],
}, "Deterministic; recognizes b^omega.")

# -- factorization example ---------------------------------------------------------

ABCD = ["a", "b", "c", "d"]
M_FACT = opm(ABCD, {
    "a": {"lt": ["c"], "gt": ["b", "d"]},
    "b": {"lt": ["a", "b", "d"]},
    "c": {"gt": ["b"]},
    "d": {"gt": ["b"]},
}, ABCD)
write("factorization_example", "omega", automaton(
    M_FACT, ["s", "t"], ["s"],
    [("s", "a b c d", "s"), ("s", "a c", "t"), ("t", "a b c d", "t")],
    [("s", "s", "s"), ("t", "s", "t"), ("t", "t", "t"), ("s", "t", "s")],
    acceptance={"kind": "buchi_final", "final": ["t"]}), {
    "prefix": "a c b a d b",
    "factorization": [["chain", "a c", "#", "b"], ["pending", "b"], ["chain", "a", "b", "d"],
                      ["chain", "d", "b", "b"], ["pending", "b"]],
    "lassos": [lasso("a c b", "b", True), lasso("", "b", False)],
}, "Matrix from the worked factorization; the automaton is an artifact-defined "
   "nondeterministic example over it.")

print("wrote", len(list(OUT.glob("*.json"))), "fixtures")
