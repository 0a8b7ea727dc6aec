"""Line-oriented text formats for automata, TAGEDs and graphs.

Automaton / TAGED::

    alphabet: f/2 g/3 A/0
    states: q1 q2
    final: q2
    rule: f(q1,q1) -> q2
    rule: A() -> q1
    neq: q1 q1

Graph::

    vertices: 1 2 3
    edge: 1 2

``#`` starts a comment.  Keys may repeat and appear in any order; the
printers always emit one canonical, sorted layout.
"""

from __future__ import annotations

import re
from pathlib import Path

from .automata import STATE_NAME, Rule, TreeAutomaton
from .constraints import Taged
from .errors import ParseError
from .graphs import Digraph
from .terms import IDENTIFIER, RankedAlphabet, Symbol

_RULE = re.compile(r"^([A-Za-z0-9_]+)\s*\(([^()]*)\)\s*->\s*(\S+)$")
_AUTOMATON_KEYS = ("alphabet", "states", "final", "rule", "eq", "neq")


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {raw.strip()!r}", number)
        yield number, key.strip(), value.strip()


def _state(name: str, number: int) -> str:
    if not STATE_NAME.fullmatch(name):
        raise ParseError(f"invalid state name {name!r}", number)
    return name


def parse_taged(text: str) -> Taged:
    """Parse the automaton format, with optional ``eq:`` / ``neq:`` lines."""
    symbols: dict[str, Symbol] = {}
    states: set[str] = set()
    final: set[str] = set()
    raw_rules = []
    pairs = {"eq": set(), "neq": set()}
    for number, key, value in _lines(text):
        if key not in _AUTOMATON_KEYS:
            raise ParseError(f"unknown key {key!r}", number)
        if key == "alphabet":
            for item in value.split():
                name, slash, arity = item.partition("/")
                if not slash or not IDENTIFIER.fullmatch(name) or not arity.isdigit():
                    raise ParseError(f"bad symbol declaration {item!r}", number)
                sym = Symbol(name, int(arity))
                if symbols.get(name, sym) != sym:
                    raise ParseError(f"symbol {name!r} declared with two arities", number)
                symbols[name] = sym
        elif key == "states":
            states.update(_state(q, number) for q in value.split())
        elif key == "final":
            final.update(_state(q, number) for q in value.split())
        elif key == "rule":
            m = _RULE.match(value)
            if not m:
                raise ParseError(f"bad rule {value!r}", number)
            name, args, target = m.groups()
            args = [a.strip() for a in args.split(",")] if args.strip() else []
            raw_rules.append((number, name, [_state(a, number) for a in args], _state(target, number)))
        else:
            parts = value.split()
            if len(parts) != 2:
                raise ParseError(f"{key} expects two states", number)
            pairs[key].add(tuple(_state(q, number) for q in parts))

    rules = set()
    for number, name, args, target in raw_rules:
        sym = symbols.get(name)
        if sym is None:
            raise ParseError(f"rule uses undeclared symbol {name!r}", number)
        if sym.arity != len(args):
            raise ParseError(f"{name} has arity {sym.arity} but the rule has {len(args)} states", number)
        unknown = {target, *args} - states
        if unknown:
            raise ParseError(f"rule mentions undeclared states {sorted(unknown)}", number)
        rules.add(Rule(sym, tuple(args), target))
    if not final <= states:
        raise ParseError(f"final states {sorted(final - states)} are not declared")
    for key, ps in pairs.items():
        unknown = {q for p in ps for q in p} - states
        if unknown:
            raise ParseError(f"{key} mentions undeclared states {sorted(unknown)}")
    base = TreeAutomaton(RankedAlphabet(symbols.values()), states, rules, final)
    return Taged(base, frozenset(pairs["eq"]), frozenset(pairs["neq"]))


def parse_automaton(text: str) -> TreeAutomaton:
    T = parse_taged(text)
    if T.eq or T.neq:
        raise ParseError("constraint lines are not allowed in a plain automaton")
    return T.base


def format_automaton(A: TreeAutomaton) -> str:
    lines = [
        "alphabet: " + " ".join(str(s) for s in sorted(A.alphabet.symbols, key=lambda s: (s.name, s.arity))),
        "states: " + " ".join(sorted(A.states)),
        "final: " + " ".join(sorted(A.final)),
    ]
    lines += [f"rule: {r}" for r in A.sorted_rules()]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def format_taged(T: Taged) -> str:
    out = format_automaton(T.base)
    out += "".join(f"eq: {p} {q}\n" for p, q in sorted(T.eq))
    out += "".join(f"neq: {p} {q}\n" for p, q in sorted(T.neq))
    return out


def parse_graph(text: str) -> Digraph:
    vertices: list[str] = []
    edges = []
    for number, key, value in _lines(text):
        if key == "vertices":
            for v in value.split():
                if not IDENTIFIER.fullmatch(v):
                    raise ParseError(f"bad vertex name {v!r}", number)
                vertices.append(v)
        elif key == "edge":
            parts = value.split()
            if len(parts) != 2:
                raise ParseError("edge expects two vertices", number)
            edges.append((number, tuple(parts)))
        else:
            raise ParseError(f"unknown key {key!r}", number)
    known = set(vertices)
    for number, (u, v) in edges:
        if u not in known or v not in known:
            raise ParseError(f"edge {u} {v} mentions an undeclared vertex", number)
    return Digraph(vertices, [e for _, e in edges])


def format_graph(G: Digraph) -> str:
    lines = ["vertices: " + " ".join(G.vertices)]
    lines += [f"edge: {u} {v}" for u, v in G.sorted_edges()]
    return "\n".join(lines) + "\n"


def read_taged(path) -> Taged:
    return parse_taged(Path(path).read_text())


def read_graph(path) -> Digraph:
    return parse_graph(Path(path).read_text())
