"""Named fixtures: the worked automata, matrices and traces, with golden expectations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import InputError
from .jsonio import automaton_from_json, opm_from_json
from .omega import make_lasso


@dataclass(frozen=True)
class Fixture:
    name: str
    kind: str
    payload: object
    expectations: dict = field(default_factory=dict)
    notes: str = ""

    def lassos(self) -> list:
        """``(lasso, verdict)`` pairs from the expectations."""
        return [(make_lasso(e["prefix"], e["period"]), e["accepted"])
                for e in self.expectations.get("lassos", [])]

    def words(self) -> list:
        return [(tuple(e["word"].split()), e["accepted"])
                for e in self.expectations.get("words", [])]

    @property
    def golden_trace(self) -> list | None:
        trace = self.expectations.get("trace")
        return None if trace is None else list(trace["lines"])


def _root():
    return resources.files("opal") / "fixtures"


def catalog() -> list:
    return sorted(p.name[:-5] for p in _root().iterdir() if p.name.endswith(".json"))


def fixture_text(name: str) -> str:
    path = _root() / f"{name}.json"
    if not path.is_file():
        raise InputError(f"unknown fixture {name!r}; known: {', '.join(catalog())}")
    return path.read_text(encoding="utf-8")


def load_fixture(name: str) -> Fixture:
    doc = json.loads(fixture_text(name))
    kind = doc["kind"]
    if kind == "opm":
        payload = opm_from_json(doc["opm"])
    else:
        payload = automaton_from_json(doc["automaton"])
    return Fixture(doc["name"], kind, payload, doc.get("expectations", {}), doc.get("notes", ""))
