"""Command-line front end.

Exit codes: 0 for accept/true/success, 1 for reject/false/violation,
2 for input errors.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click

from . import closures
from .corpus import catalog, fixture_text, load_fixture
from .errors import CompatibilityError, OpalError
from .jsonio import automaton_from_json, automaton_to_json, load_automaton, write_json, _namer
from .omega import Muller, OmegaOpa, accepts_lasso, parse_lasso, validate_omega
from .opa import Opa, accepting_trace, prefix_traces, validate
from .pds import is_empty_finite, is_empty_omega

GLYPHS = {
    "pi_expr": "π_expr",
    "sigma_expr": "σ_expr",
    "cup": "∪",
    "cap": "∩",
    "join": "⋈",
}
_FROM_GLYPH = {g: name for name, g in GLYPHS.items()}
_SUBSCRIPTS = "₀₁₂₃₄₅₆₇₈₉"


def to_ascii(token: str) -> str:
    """``∪`` → ``cup``, ``int₀`` → ``int_0``; other tokens pass through."""
    if token in _FROM_GLYPH:
        return _FROM_GLYPH[token]
    m = re.fullmatch(f"(.*?)([{_SUBSCRIPTS}]+)", token)
    if m and m.group(1):
        digits = "".join(str(_SUBSCRIPTS.index(ch)) for ch in m.group(2))
        return f"{m.group(1)}_{digits}"
    return token


def to_glyph(token: str) -> str:
    if token in GLYPHS:
        return GLYPHS[token]
    m = re.fullmatch(r"(int|call|ret)_(\d+)", token)
    if m:
        return m.group(1) + "".join(_SUBSCRIPTS[int(d)] for d in m.group(2))
    return token


def glyph_line(line: str) -> str:
    return " ".join(_glyph_chunk(chunk) for chunk in line.split(" "))


def _glyph_chunk(chunk: str) -> str:
    # chunks look like "[cup*,q0][A,q1]" or a bare symbol
    return re.sub(r"[A-Za-z_][A-Za-z_0-9]*", lambda m: to_glyph(m.group(0)), chunk)


def _symbols(text: str) -> tuple:
    return tuple(to_ascii(t) for t in text.split())


# -- DOT ---------------------------------------------------------------------


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(a, unicode: bool = False) -> str:
    """DOT digraph: push edges solid, flush edges bold with a ``⇒`` label.

    Edges sharing endpoints are grouped into one labelled edge.  Output is
    sorted, so repeated calls give identical text.
    """
    names = _namer(a.states)
    show = to_glyph if unicode else str
    lines = ["digraph opa {", "  rankdir=LR;", "  node [shape=circle];"]
    acc = getattr(a, "acceptance", None)
    if isinstance(acc, Muller):
        finals = frozenset().union(*acc.table)
    else:
        finals = frozenset(q for q in a.states if a.is_final(q))
    for q in sorted(a.states, key=lambda s: names[s]):
        shape = "doublecircle" if q in finals else "circle"
        lines.append(f"  {_q(names[q])} [shape={shape}];")
    for q in sorted(a.initial, key=lambda s: names[s]):
        lines.append(f"  {_q('__init_' + names[q])} [shape=point, label=\"\"];")
        lines.append(f"  {_q('__init_' + names[q])} -> {_q(names[q])};")
    push: dict = {}
    for (q, c), targets in a.delta_push.items():
        for t in targets:
            push.setdefault((names[q], names[t]), []).append(show(c))
    flush: dict = {}
    for (q, p), targets in a.delta_flush.items():
        for t in targets:
            flush.setdefault((names[q], names[t]), []).append(names[p])
    order = {c: i for i, c in enumerate(map(show, a.opm.alphabet))}
    for (u, v), syms in sorted(push.items()):
        label = ", ".join(sorted(syms, key=order.get))
        lines.append(f"  {_q(u)} -> {_q(v)} [label={_q(label)}];")
    for (u, v), below in sorted(flush.items()):
        label = "⇒" + ", ".join(sorted(below))
        lines.append(f"  {_q(u)} -> {_q(v)} [style=bold, label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- plumbing ----------------------------------------------------------------


def resolve(path: str) -> Path | str:
    """A path on disk, or the name of a packaged fixture.

    ``fixtures/db_queries.json`` and ``db_queries`` both reach the shipped
    fixture when no such file exists locally.
    """
    p = Path(path)
    if p.exists():
        return p
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in catalog():
        return stem
    return p


def _load(path: str):
    where = resolve(path)
    if isinstance(where, str):
        doc = json.loads(fixture_text(where))
        if "automaton" not in doc:
            raise click.UsageError(f"fixture {where!r} holds no automaton")
        return automaton_from_json(doc["automaton"])
    return load_automaton(where)


def _emit(data) -> None:
    click.echo(json.dumps(data, indent=2, ensure_ascii=False))


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


def _done(ok: bool):
    raise _Exit(0 if ok else 1)


@click.group()
@click.option("--unicode", is_flag=True, help="Render symbols with glyph aliases (∪, ⋈, π_expr, int₀).")
@click.pass_context
def cli(ctx, unicode):
    """Operator precedence automata: membership, closures, emptiness."""
    ctx.obj = {"unicode": unicode}


@cli.command("validate")
@click.argument("path")
def validate_cmd(path):
    """Check an automaton file; exit 1 if the ≐ relation has a cycle."""
    a = _load(path)
    report = validate_omega(a) if isinstance(a, OmegaOpa) else validate(a)
    _emit(report)
    _done(report["eq_acyclic"])


@cli.command("run")
@click.argument("path")
@click.option("--word", help="Finite word, whitespace-separated symbols.")
@click.option("--lasso", "lasso_text", help="Ultimately periodic word 'u ; v'.")
@click.option("--trace", is_flag=True, help="Print a run in the trace format.")
@click.pass_obj
def run_cmd(obj, path, word, lasso_text, trace):
    """Membership of a finite word or a lasso."""
    if (word is None) == (lasso_text is None):
        raise click.UsageError("give exactly one of --word or --lasso")
    a = _load(path)
    render = glyph_line if obj["unicode"] else str
    if word is not None:
        if not isinstance(a, Opa):
            raise click.UsageError("--word needs an automaton on finite words")
        t = accepting_trace(a, _symbols(word))
        click.echo("accept" if t else "reject")
        if trace and t:
            for line in t.lines():
                click.echo(render(line))
        _done(t is not None)
    if not isinstance(a, OmegaOpa):
        raise click.UsageError("--lasso needs an automaton on infinite words")
    text = " ".join(to_ascii(t) for t in lasso_text.replace(";", " ; ").split())
    lasso = parse_lasso(text)
    ok = accepts_lasso(a, lasso)
    click.echo("accept" if ok else "reject")
    if trace:
        runs = prefix_traces(a, lasso.prefix + lasso.period, limit=1)
        if runs:
            click.echo("# a run on the first lap u v")
            for line in runs[0].lines():
                click.echo(render(line))
    _done(ok)


@cli.command("compose")
@click.option("--op", type=click.Choice(["intersect", "union", "complement", "concat"]),
              required=True)
@click.argument("paths", nargs=-1, required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write JSON here.")
def compose_cmd(op, paths, output):
    """Build a closure; concat takes a finite-word then an ω automaton."""
    arity = 1 if op == "complement" else 2
    if len(paths) != arity:
        raise click.UsageError(f"{op} takes {arity} automaton file(s)")
    autos = [_load(p) for p in paths]
    if op == "complement":
        result = closures.complement(autos[0])
    elif op == "concat":
        result = closures.concat(*autos)
    else:
        result = getattr(closures, op)(*autos)
    data = automaton_to_json(result)
    if output:
        write_json(output, data)
        click.echo(f"wrote {output}: {len(data['states'])} states")
    else:
        _emit(data)
    _done(True)


@cli.command("empty")
@click.argument("path")
@click.pass_obj
def empty_cmd(obj, path):
    """Emptiness; exit 0 if empty, 1 with a witness otherwise."""
    a = _load(path)
    show = to_glyph if obj["unicode"] else str
    if isinstance(a, Opa):
        empty, witness = is_empty_finite(a, with_witness=True)
        click.echo("empty" if empty else "nonempty: " + " ".join(map(show, witness)))
    else:
        empty, witness = is_empty_omega(a)
        if empty:
            click.echo("empty")
        else:
            u = " ".join(map(show, witness.prefix))
            v = " ".join(map(show, witness.period))
            click.echo(f"nonempty: {u} ; {v}".replace("  ", " "))
    _done(empty)


@cli.command("includes")
@click.argument("spec_path", metavar="SPEC")
@click.argument("impl_path", metavar="IMPL")
@click.pass_obj
def includes_cmd(obj, spec_path, impl_path):
    """Is L(IMPL) ⊆ L(SPEC)?  Prints a counterexample lasso if not."""
    sup, sub = _load(spec_path), _load(impl_path)
    if not (isinstance(sup, OmegaOpa) and isinstance(sub, OmegaOpa)):
        raise click.UsageError("includes works on automata over infinite words")
    ok, witness = closures.includes(sup, sub)
    if ok:
        click.echo("true")
    else:
        show = to_glyph if obj["unicode"] else str
        click.echo("false: " + " ".join(map(show, witness.prefix)) + " ; "
                   + " ".join(map(show, witness.period)))
    _done(ok)


@cli.command("fixture")
@click.argument("name", required=False)
@click.option("--check", is_flag=True, help="Replay the fixture's golden expectations.")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
def fixture_cmd(name, check, output):
    """List fixtures, print one, or check it against its expectations."""
    if name is None:
        for n in catalog():
            click.echo(n)
        _done(True)
    text = fixture_text(name)
    if check:
        failures = check_fixture(name)
        for f in failures:
            click.echo(f"FAIL {f}")
        click.echo(f"{name}: {'ok' if not failures else f'{len(failures)} failure(s)'}")
        _done(not failures)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    _done(True)


def check_fixture(name: str) -> list:
    """Replay trace, word and lasso expectations; returns failure messages."""
    fx = load_fixture(name)
    a = fx.payload
    out = []
    golden = fx.golden_trace
    if golden is not None:
        word = tuple(fx.expectations["trace"]["word"].split())
        if isinstance(a, Opa):
            t = accepting_trace(a, word)
            if t is None or t.lines() != golden:
                out.append("golden trace differs")
        elif not any(t.lines()[:len(golden)] == golden for t in prefix_traces(a, word)):
            out.append("golden prefix trace not reproduced")
    for w, verdict in fx.words():
        if (accepting_trace(a, w) is not None) != verdict:
            out.append(f"word {' '.join(w)!r}: expected {verdict}")
    for lasso, verdict in fx.lassos():
        if accepts_lasso(a, lasso) != verdict:
            out.append(f"lasso {lasso}: expected {verdict}")
    return out


@cli.command("dot")
@click.argument("path")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.pass_obj
def dot_cmd(obj, path, output):
    """Graphviz rendering of an automaton."""
    text = to_dot(_load(path), unicode=obj["unicode"])
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    _done(True)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="opal", standalone_mode=False)
    except _Exit as e:
        return e.code
    except click.exceptions.Abort:
        return 2
    except click.ClickException as e:
        e.show()
        return 2
    except (OpalError, CompatibilityError) as e:
        click.echo(f"error: {e}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
