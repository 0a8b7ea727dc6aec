"""Ranked alphabets, terms, positions and the comb encoding of vertex sequences.

Terms are immutable and hashed once at construction, so they can be put in
sets and dictionaries cheaply even when they are large.  Positions are tuples
of 1-based child indices; the root is the empty tuple.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AlienSymbolError, InvalidPositionError, ParseError, UnknownVertexError

IDENTIFIER = re.compile(r"[A-Za-z0-9_]+")

Position = tuple[int, ...]
ROOT: Position = ()

COMB_SYMBOL = "h"
VERTEX_PREFIX = "A_"


@dataclass(frozen=True, order=True)
class Symbol:
    name: str
    arity: int

    def __post_init__(self):
        if not IDENTIFIER.fullmatch(self.name):
            raise ValueError(f"invalid symbol name {self.name!r}")
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name!r}")

    def __str__(self):
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class RankedAlphabet:
    """A finite set of symbols in which a name determines the arity."""

    symbols: frozenset[Symbol]
    _by_name: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, symbols: Iterable[Symbol] = ()):
        symbols = frozenset(symbols)
        by_name: dict[str, Symbol] = {}
        for s in symbols:
            if s.name in by_name:
                raise ValueError(f"symbol {s.name!r} declared with two arities")
            by_name[s.name] = s
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_by_name", by_name)

    @classmethod
    def of(cls, *specs: str) -> RankedAlphabet:
        """Build from ``"name/arity"`` strings, e.g. ``RankedAlphabet.of("f/2", "A/0")``."""
        out = []
        for spec in specs:
            name, _, arity = spec.partition("/")
            out.append(Symbol(name, int(arity)))
        return cls(out)

    def __contains__(self, item) -> bool:
        if isinstance(item, Symbol):
            return self._by_name.get(item.name) == item
        return item in self._by_name

    def __getitem__(self, name: str) -> Symbol:
        return self._by_name[name]

    def get(self, name: str) -> Symbol | None:
        return self._by_name.get(name)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(sorted(self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __or__(self, other: RankedAlphabet) -> RankedAlphabet:
        return RankedAlphabet(self.symbols | other.symbols)

    def __str__(self):
        return " ".join(str(s) for s in self)


class Term:
    """A finite ranked tree.  Equality is structural; the hash is cached."""

    __slots__ = ("symbol", "children", "_hash", "_size", "_key")

    def __init__(self, symbol: Symbol, children: Sequence[Term] = ()):
        children = tuple(children)
        if len(children) != symbol.arity:
            raise ValueError(
                f"{symbol.name} has arity {symbol.arity} but got {len(children)} children"
            )
        object.__setattr__(self, "symbol", symbol)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "_hash", hash((symbol, children)))
        object.__setattr__(self, "_size", 1 + sum(c._size for c in children))
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("Term is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return (
            self._hash == other._hash
            and self._size == other._size
            and self.symbol == other.symbol
            and self.children == other.children
        )

    def sort_key(self) -> tuple:
        """Canonical order: root name, then arity, then children lexicographically."""
        key = self._key
        if key is None:
            key = (self.symbol.name, self.symbol.arity, tuple(c.sort_key() for c in self.children))
            object.__setattr__(self, "_key", key)
        return key

    def __lt__(self, other: Term) -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def size(self) -> int:
        """Number of nodes."""
        return self._size

    @property
    def name(self) -> str:
        return self.symbol.name

    def symbols(self) -> set[Symbol]:
        out = set()
        stack = [self]
        while stack:
            t = stack.pop()
            out.add(t.symbol)
            stack.extend(t.children)
        return out

    def __str__(self):
        return format_term(self)

    def __repr__(self):
        return f"Term({format_term(self)!r})"


def const(name: str) -> Term:
    return Term(Symbol(name, 0))


def app(name: str, *children: Term) -> Term:
    return Term(Symbol(name, len(children)), children)


def check_alphabet(t: Term, alphabet: RankedAlphabet) -> None:
    for s in t.symbols():
        if s not in alphabet:
            raise AlienSymbolError(f"symbol {s} is not in the alphabet")


# -- positions ---------------------------------------------------------------

def positions(t: Term) -> list[Position]:
    """All positions of ``t`` in preorder (which is also sorted tuple order)."""
    out: list[Position] = []

    def walk(node, pos):
        out.append(pos)
        for i, child in enumerate(node.children, 1):
            walk(child, pos + (i,))

    walk(t, ROOT)
    return out


def iter_nodes(t: Term) -> Iterator[tuple[Position, Term]]:
    """Yield ``(position, subterm)`` pairs in preorder."""
    stack = [(ROOT, t)]
    while stack:
        pos, node = stack.pop()
        yield pos, node
        for i in range(len(node.children), 0, -1):
            stack.append((pos + (i,), node.children[i - 1]))


def subterm_at(t: Term, pos: Position) -> Term:
    node = t
    for i in pos:
        if not 1 <= i <= len(node.children):
            raise InvalidPositionError(f"position {format_position(pos)} not in term {t}")
        node = node.children[i - 1]
    return node


def replace_at(t: Term, pos: Position, s: Term) -> Term:
    """Return ``t`` with the subterm at ``pos`` replaced by ``s``."""
    if not pos:
        return s
    i = pos[0]
    if not 1 <= i <= len(t.children):
        raise InvalidPositionError(f"position {format_position(pos)} not in term {t}")
    children = list(t.children)
    children[i - 1] = replace_at(children[i - 1], pos[1:], s)
    return Term(t.symbol, children)


def count_leaves(t: Term, s: Symbol) -> int:
    """Number of positions of ``t`` holding the constant ``s``."""
    if s.arity != 0:
        raise ValueError(f"{s} is not a constant")
    return sum(1 for _, node in iter_nodes(t) if node.symbol == s)


def format_position(pos: Position) -> str:
    return ".".join(map(str, pos)) if pos else "ε"


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("", "ε"):
        return ROOT
    try:
        pos = tuple(int(p) for p in text.split("."))
    except ValueError:
        raise ParseError(f"bad position {text!r}") from None
    if any(i < 1 for i in pos):
        raise ParseError(f"bad position {text!r}")
    return pos


# -- contexts ----------------------------------------------------------------

def hole_positions(context: Term, hole: Symbol) -> list[Position]:
    return [pos for pos, node in iter_nodes(context) if node.symbol == hole]


def instantiate(context: Term, fills: Mapping[str, Term]) -> Term:
    """Substitute every constant named in ``fills`` by its term, simultaneously."""

    def go(node):
        if not node.children:
            return fills.get(node.symbol.name, node)
        new = tuple(go(c) for c in node.children)
        if all(a is b for a, b in zip(new, node.children)):
            return node
        return Term(node.symbol, new)

    return go(context)


def fill_positions(context: Term, fills: Mapping[Position, Term]) -> Term:
    for pos, s in fills.items():
        context = replace_at(context, pos, s)
    return context


# -- comb (h-term) encoding --------------------------------------------------

def vertex_symbol(v: str) -> Symbol:
    return Symbol(VERTEX_PREFIX + str(v), 0)


def comb_alphabet(vertices: Iterable[str]) -> RankedAlphabet:
    return RankedAlphabet([Symbol(COMB_SYMBOL, 2), *(vertex_symbol(v) for v in vertices)])


def comb_encode(vertices: Sequence[str], alphabet: RankedAlphabet | None = None) -> Term:
    """Encode ``[w_k, ..., w_1, w_0]`` as ``h(A_wk, h(..., h(A_w1, A_w0)))``.

    A single vertex gives the bare constant ``A_w0``.
    """
    if not vertices:
        raise ValueError("cannot encode an empty vertex sequence")
    if alphabet is None:
        alphabet = comb_alphabet(vertices)
    h = alphabet.get(COMB_SYMBOL)
    if h is None or h.arity != 2:
        raise UnknownVertexError("alphabet has no binary symbol h")
    leaves = []
    for v in vertices:
        sym = vertex_symbol(v)
        if sym not in alphabet:
            raise UnknownVertexError(f"no constant {sym.name} for vertex {v!r}")
        leaves.append(Term(sym))
    t = leaves[-1]
    for leaf in reversed(leaves[:-1]):
        t = Term(h, (leaf, t))
    return t


def comb_decode(t: Term) -> list[str] | None:
    """Inverse of :func:`comb_encode`; ``None`` if ``t`` is not a comb."""
    out = []
    node = t
    while node.symbol.name == COMB_SYMBOL and node.symbol.arity == 2:
        left, node = node.children
        v = _vertex_of(left)
        if v is None:
            return None
        out.append(v)
    v = _vertex_of(node)
    if v is None:
        return None
    out.append(v)
    return out


def _vertex_of(t: Term) -> str | None:
    if t.children or not t.symbol.name.startswith(VERTEX_PREFIX):
        return None
    v = t.symbol.name[len(VERTEX_PREFIX):]
    return v or None


# -- text format -------------------------------------------------------------

def format_term(t: Term) -> str:
    parts: list[str] = []

    def go(node):
        parts.append(node.symbol.name)
        if node.children:
            parts.append("(")
            for i, c in enumerate(node.children):
                if i:
                    parts.append(",")
                go(c)
            parts.append(")")

    go(t)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_]+)|(.))")


def parse_term(text: str, alphabet: RankedAlphabet | None = None) -> Term:
    """Parse ``f(t1,...,tn)`` / bare constants.  Whitespace is ignored.

    Without an alphabet, arities are inferred from the number of arguments.
    With one, every symbol must be declared with a matching arity.
    """
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(1):
            tokens.append(m.group(1))
        elif m.group(2) and not m.group(2).isspace():
            tokens.append(m.group(2))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a symbol'} in term {text!r}, got {tok!r}")
        pos += 1
        return tok

    def term():
        name = take()
        if not IDENTIFIER.fullmatch(name):
            raise ParseError(f"unexpected {name!r} in term {text!r}")
        children = []
        if peek() == "(":
            take("(")
            if peek() == ")":
                take(")")
            else:
                children.append(term())
                while peek() == ",":
                    take(",")
                    children.append(term())
                take(")")
        sym = Symbol(name, len(children))
        if alphabet is not None and sym not in alphabet:
            raise AlienSymbolError(f"symbol {sym} is not in the alphabet")
        return Term(sym, children)

    result = term()
    if pos != len(tokens):
        raise ParseError(f"trailing input in term {text!r}")
    return result
