"""JSON reading and writing for matrices and automata."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InputError
from .omega import BuchiEmptyStack, BuchiFinal, Muller, OmegaOpa
from .opa import CLASSICAL, Opa
from .opm import HASH, Opm, Relation


def opm_to_json(m: Opm) -> dict:
    cells: dict = {}
    hash_row: dict = {}
    for (a, b), rel in m.cells.items():
        if a == HASH:
            hash_row[b] = rel.value
        else:
            cells.setdefault(a, {})[b] = rel.value
    order = {s: i for i, s in enumerate(m.alphabet)}
    return {
        "alphabet": list(m.alphabet),
        "cells": {a: dict(sorted(row.items(), key=lambda kv: order[kv[0]]))
                  for a, row in sorted(cells.items(), key=lambda kv: order[kv[0]])},
        "hash_row": dict(sorted(hash_row.items(), key=lambda kv: order[kv[0]])),
    }


def opm_from_json(d: dict) -> Opm:
    # a cell may list several relations; from_triples reports the clash
    try:
        alphabet = d["alphabet"]
        triples = []
        rows = [(a, row) for a, row in d.get("cells", {}).items()]
        rows.append((HASH, d.get("hash_row", {})))
        for a, row in rows:
            for b, rel in row.items():
                for r in (rel if isinstance(rel, list) else [rel]):
                    triples.append((a, b, Relation(r)))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed matrix JSON: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"bad relation name: {exc}") from exc
    return Opm.from_triples(alphabet, triples)


def _namer(states):
    """Map states to unique strings (plain strings are kept)."""
    names = {}
    used = set()
    for q in states:
        base = q if isinstance(q, str) else _show(q)
        name = base
        k = 1
        while name in used:
            name = f"{base}~{k}"
            k += 1
        used.add(name)
        names[q] = name
    return names


def _show(q) -> str:
    if isinstance(q, tuple):
        return "<" + ",".join(_show(x) for x in q) + ">"
    return str(q)


def _sorted(names, xs):
    return sorted((names[x] for x in xs))


def automaton_to_json(a) -> dict:
    """Serialize an Opa or OmegaOpa; non-string state names are rendered."""
    n = _namer(a.states)
    out = {
        "alphabet": list(a.opm.alphabet),
        "opm": opm_to_json(a.opm),
        "states": [n[q] for q in a.states],
        "initial": _sorted(n, a.initial),
    }
    if isinstance(a, Opa):
        out["final"] = _sorted(n, a.final)
        out["mode"] = a.mode
    push = [{"from": n[q], "symbol": c, "to": _sorted(n, ts)}
            for (q, c), ts in a.delta_push.items() if ts]
    flush = [{"top": n[q], "below": n[p], "to": _sorted(n, ts)}
             for (q, p), ts in a.delta_flush.items() if ts]
    out["delta_push"] = sorted(push, key=lambda e: (e["from"], e["symbol"]))
    out["delta_flush"] = sorted(flush, key=lambda e: (e["top"], e["below"]))
    if isinstance(a, OmegaOpa):
        acc = a.acceptance
        if isinstance(acc, Muller):
            out["acceptance"] = {"kind": acc.kind,
                                 "table": sorted(_sorted(n, row) for row in acc.table)}
        else:
            out["acceptance"] = {"kind": acc.kind, "final": _sorted(n, acc.final)}
    return out


def automaton_from_json(d: dict):
    """Build an Opa, or an OmegaOpa when an ``acceptance`` key is present."""
    if not isinstance(d, dict):
        raise InputError("automaton JSON must be an object")
    try:
        m = opm_from_json(d["opm"] if "opm" in d else d)
        if "alphabet" in d and list(d["alphabet"]) != list(m.alphabet):
            raise InputError("top-level alphabet differs from the matrix alphabet")
        states = list(d["states"])
        initial = list(d["initial"])
        push = [(e["from"], e["symbol"], e["to"]) for e in d.get("delta_push", [])]
        flush = [(e["top"], e["below"], e["to"]) for e in d.get("delta_flush", [])]
        acc = d.get("acceptance")
        if acc is None:
            return Opa.build(m, states, initial, d.get("final", []), push, flush,
                             d.get("mode", CLASSICAL))
        kind = acc["kind"]
        if kind == "buchi_final":
            acceptance = BuchiFinal(frozenset(acc["final"]))
        elif kind == "buchi_empty_stack":
            acceptance = BuchiEmptyStack(frozenset(acc["final"]))
        elif kind == "muller":
            acceptance = Muller(frozenset(frozenset(row) for row in acc["table"]))
        else:
            raise InputError(f"unknown acceptance kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed automaton JSON: missing or bad field {exc}") from exc
    return OmegaOpa.build(m, states, initial, acceptance, push, flush)


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def write_json(path, data) -> None:
    Path(path).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n",
                          encoding="utf-8")


def load_automaton(path):
    d = read_json(path)
    if isinstance(d, dict) and "automaton" in d:
        d = d["automaton"]
    return automaton_from_json(d)


def dump_automaton(a, path) -> None:
    write_json(path, automaton_to_json(a))
