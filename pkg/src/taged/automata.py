"""Bottom-up tree automata without epsilon rules.

States are plain strings.  Besides acceptance and run enumeration this module
provides the bounded language enumerator that every correctness check in the
package leans on: ``enumerate_language`` fills ``(state, size)`` buckets
bottom-up by node count.
"""

from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import AlphabetMismatchError, ResourceLimitError
from .terms import Position, RankedAlphabet, Symbol, Term, check_alphabet

State = str

# Parentheses, commas and whitespace would make the rule syntax ambiguous.
STATE_NAME = re.compile(r"[^\s(),#]+")

DEFAULT_MAX_BUCKETS = 1_000_000


@dataclass(frozen=True, order=True)
class Rule:
    symbol: Symbol
    args: tuple[State, ...]
    target: State

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.symbol.arity:
            raise ValueError(f"rule for {self.symbol} has {len(self.args)} argument states")

    def sort_key(self):
        return (self.symbol.name, self.symbol.arity, self.args, self.target)

    def __str__(self):
        return f"{self.symbol.name}({','.join(self.args)}) -> {self.target}"


@dataclass(frozen=True)
class TreeAutomaton:
    alphabet: RankedAlphabet
    states: frozenset[State]
    rules: frozenset[Rule]
    final: frozenset[State]
    _by_symbol: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, alphabet: RankedAlphabet, states: Iterable[State],
                 rules: Iterable[Rule], final: Iterable[State]):
        states = frozenset(states)
        rules = frozenset(rules)
        final = frozenset(final)
        for q in states:
            if not STATE_NAME.fullmatch(q):
                raise ValueError(f"invalid state name {q!r}")
        if not final <= states:
            raise ValueError(f"final states {sorted(final - states)} are not states")
        by_symbol: dict[Symbol, list[Rule]] = defaultdict(list)
        for r in rules:
            if r.symbol not in alphabet:
                raise ValueError(f"rule {r} uses symbol outside the alphabet")
            missing = {r.target, *r.args} - states
            if missing:
                raise ValueError(f"rule {r} mentions unknown states {sorted(missing)}")
            by_symbol[r.symbol].append(r)
        for rs in by_symbol.values():
            rs.sort(key=Rule.sort_key)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "rules", rules)
        object.__setattr__(self, "final", final)
        object.__setattr__(self, "_by_symbol", dict(by_symbol))

    def rules_for(self, symbol: Symbol) -> list[Rule]:
        return self._by_symbol.get(symbol, [])

    def sorted_rules(self) -> list[Rule]:
        return sorted(self.rules, key=Rule.sort_key)

    def rename(self, mapping: Mapping[State, State] | None = None, *, prefix: str = "") -> TreeAutomaton:
        """Rename states through ``mapping`` (default identity), then prepend ``prefix``."""
        mapping = mapping or {}

        def f(q):
            return mapping.get(q, prefix + q)

        return TreeAutomaton(
            self.alphabet,
            {f(q) for q in self.states},
            {Rule(r.symbol, tuple(map(f, r.args)), f(r.target)) for r in self.rules},
            {f(q) for q in self.final},
        )


@dataclass(frozen=True)
class Run:
    """A rule-consistent labelling of every position of a term by a state."""

    term: Term
    labels: tuple[tuple[Position, State], ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(sorted(self.labels)))

    def __getitem__(self, pos: Position) -> State:
        return dict(self.labels)[pos]

    def as_dict(self) -> dict[Position, State]:
        return dict(self.labels)

    @property
    def root_state(self) -> State:
        return self.labels[0][1]


# -- acceptance --------------------------------------------------------------

def _reachable_table(A: TreeAutomaton, t: Term) -> dict[Term, frozenset[State]]:
    check_alphabet(t, A.alphabet)
    table: dict[Term, frozenset[State]] = {}

    def go(node):
        got = table.get(node)
        if got is not None:
            return got
        child_sets = [go(c) for c in node.children]
        out = set()
        for r in A.rules_for(node.symbol):
            if r.target not in out and all(q in s for q, s in zip(r.args, child_sets)):
                out.add(r.target)
        got = frozenset(out)
        table[node] = got
        return got

    go(t)
    return table


def reachable_states(A: TreeAutomaton, t: Term) -> frozenset[State]:
    """States ``q`` such that some run of ``t`` labels the root with ``q``."""
    return _reachable_table(A, t)[t]


def accepts(A: TreeAutomaton, t: Term) -> bool:
    return not reachable_states(A, t).isdisjoint(A.final)


def enumerate_runs(A: TreeAutomaton, t: Term) -> list[Run]:
    """Every run of ``t`` in ``A`` (accepting or not), in canonical order."""
    table = _reachable_table(A, t)

    def runs_into(node, pos, q) -> Iterator[list[tuple[Position, State]]]:
        child_sets = [table[c] for c in node.children]
        for r in A.rules_for(node.symbol):
            if r.target != q or not all(a in s for a, s in zip(r.args, child_sets)):
                continue
            parts = [
                list(runs_into(c, pos + (i,), a))
                for i, (c, a) in enumerate(zip(node.children, r.args), 1)
            ]
            for combo in itertools.product(*parts):
                labels = [(pos, q)]
                for part in combo:
                    labels.extend(part)
                yield labels

    runs = {Run(t, tuple(labels)) for q in table[t] for labels in runs_into(t, (), q)}
    return sorted(runs, key=lambda run: run.labels)


def accepting_runs(A: TreeAutomaton, t: Term) -> list[Run]:
    return [run for run in enumerate_runs(A, t) if run.root_state in A.final]


# -- emptiness and trimming --------------------------------------------------

def productive_states(A: TreeAutomaton) -> frozenset[State]:
    """States whose language is non-empty (least fixpoint)."""
    productive: set[State] = set()
    changed = True
    while changed:
        changed = False
        for r in A.rules:
            if r.target not in productive and all(q in productive for q in r.args):
                productive.add(r.target)
                changed = True
    return frozenset(productive)


def is_empty(A: TreeAutomaton) -> bool:
    return productive_states(A).isdisjoint(A.final)


def useful_states(A: TreeAutomaton) -> frozenset[State]:
    """Productive states from which some final state can be reached."""
    productive = productive_states(A)
    live = [r for r in A.rules if r.target in productive and all(q in productive for q in r.args)]
    useful = set(A.final & productive)
    changed = True
    while changed:
        changed = False
        for r in live:
            if r.target in useful:
                for q in r.args:
                    if q not in useful:
                        useful.add(q)
                        changed = True
    return frozenset(useful)


def trim(A: TreeAutomaton, *, keep_final: bool = False) -> TreeAutomaton:
    """Drop useless states and every rule mentioning one.  The language is unchanged.

    With ``keep_final`` the final states survive even when they are useless.
    """
    keep = useful_states(A)
    rules = {r for r in A.rules if r.target in keep and all(q in keep for q in r.args)}
    final = A.final if keep_final else A.final & keep
    return TreeAutomaton(A.alphabet, keep | final, rules, final)


def min_sizes(A: TreeAutomaton) -> dict[State, int]:
    """Node count of a smallest term reaching each productive state."""
    best: dict[State, int] = {}
    changed = True
    while changed:
        changed = False
        for r in A.rules:
            if all(q in best for q in r.args):
                size = 1 + sum(best[q] for q in r.args)
                if size < best.get(r.target, size + 1):
                    best[r.target] = size
                    changed = True
    return best


def has_finite_language(A: TreeAutomaton, roots: Iterable[State] | None = None) -> bool:
    """True iff the terms reaching ``roots`` (default: final states) form a finite set.

    The set is infinite exactly when a useful state can occur strictly below
    itself in some run.
    """
    if roots is None:
        roots = A.final
    B = TreeAutomaton(A.alphabet, A.states, A.rules, set(roots) & A.states)
    useful = useful_states(B)
    below: dict[State, set[State]] = defaultdict(set)
    for r in B.rules:
        if r.target in useful and all(q in useful for q in r.args):
            below[r.target].update(r.args)
    return not _has_cycle(useful, below)


def _has_cycle(nodes, succ) -> bool:
    colour = dict.fromkeys(nodes, 0)
    for start in nodes:
        if colour[start]:
            continue
        stack = [(start, iter(succ.get(start, ())))]
        colour[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = 2
                stack.pop()
            elif colour.get(nxt, 2) == 1:
                return True
            elif colour.get(nxt) == 0:
                colour[nxt] = 1
                stack.append((nxt, iter(succ.get(nxt, ()))))
    return False


# -- bounded enumeration -----------------------------------------------------

def size_layers(A: TreeAutomaton, max_nodes: int, *,
                max_buckets: int = DEFAULT_MAX_BUCKETS) -> Iterator[tuple[int, dict[State, set[Term]]]]:
    """Yield ``(s, {q: terms of exactly s nodes reaching q})`` for ``s = 1..max_nodes``.

    Raises :class:`ResourceLimitError` once the total number of stored
    (state, term) entries exceeds ``max_buckets``.
    """
    buckets: dict[State, dict[int, set[Term]]] = defaultdict(dict)
    productive = productive_states(A)
    rules = [r for r in A.sorted_rules()
             if r.target in productive and all(q in productive for q in r.args)]
    stored = 0
    for size in range(1, max_nodes + 1):
        fresh: dict[State, set[Term]] = defaultdict(set)
        for r in rules:
            if r.symbol.arity == 0:
                if size == 1:
                    fresh[r.target].add(Term(r.symbol))
                continue
            for sizes in _compositions(size - 1, r.args, buckets):
                pools = [buckets[q][s] for q, s in zip(r.args, sizes)]
                for children in itertools.product(*pools):
                    fresh[r.target].add(Term(r.symbol, children))
        stored += sum(len(terms) for terms in fresh.values())
        if stored > max_buckets:
            raise ResourceLimitError(
                f"language enumeration needs more than {max_buckets} bucket entries "
                f"(reached size {size} of {max_nodes})",
                cap_name="max_buckets", cap=max_buckets,
            )
        for q, terms in fresh.items():
            buckets[q][size] = terms
        yield size, dict(fresh)


def size_buckets(A: TreeAutomaton, max_nodes: int, *,
                 max_buckets: int = DEFAULT_MAX_BUCKETS) -> dict[State, dict[int, set[Term]]]:
    """``buckets[q][s]`` = terms of exactly ``s`` nodes reaching state ``q``."""
    buckets: dict[State, dict[int, set[Term]]] = defaultdict(dict)
    for size, fresh in size_layers(A, max_nodes, max_buckets=max_buckets):
        for q, terms in fresh.items():
            buckets[q][size] = terms
    return buckets


def _compositions(total, states, buckets):
    """Size tuples, one per argument state, with non-empty buckets summing to ``total``."""
    if not states:
        if total == 0:
            yield ()
        return
    q, rest = states[0], states[1:]
    for s in sorted(buckets[q]):
        if s > total - len(rest):
            break
        for tail in _compositions(total - s, rest, buckets):
            yield (s, *tail)


def enumerate_language(A: TreeAutomaton, max_nodes: int, *,
                       max_buckets: int = DEFAULT_MAX_BUCKETS) -> list[Term]:
    """Accepted terms with at most ``max_nodes`` nodes, sorted canonically."""
    return enumerate_state_language(A, A.final, max_nodes, max_buckets=max_buckets)


def enumerate_state_language(A: TreeAutomaton, roots: Iterable[State], max_nodes: int, *,
                             max_buckets: int = DEFAULT_MAX_BUCKETS) -> list[Term]:
    buckets = size_buckets(A, max_nodes, max_buckets=max_buckets)
    out: set[Term] = set()
    for q in roots:
        for terms in buckets.get(q, {}).values():
            out |= terms
    return sorted(out, key=Term.sort_key)


# -- constructions -----------------------------------------------------------

def product(A: TreeAutomaton, B: TreeAutomaton, *, sep: str = "|") -> TreeAutomaton:
    """Intersection automaton on state pairs ``l|r``.

    Only pairs reachable bottom-up are materialised; unreachable pairs carry
    no term and would not change the language.
    """
    if A.alphabet != B.alphabet:
        raise AlphabetMismatchError("product of automata over different alphabets")

    def name(p, q):
        return f"{p}{sep}{q}"

    reached: set[tuple[State, State]] = set()
    rules: set[Rule] = set()
    changed = True
    while changed:
        changed = False
        for sym in A.alphabet:
            for ra in A.rules_for(sym):
                for rb in B.rules_for(sym):
                    pairs = tuple(zip(ra.args, rb.args))
                    if not all(p in reached for p in pairs):
                        continue
                    rule = Rule(sym, tuple(name(*p) for p in pairs), name(ra.target, rb.target))
                    if rule not in rules:
                        rules.add(rule)
                        reached.add((ra.target, rb.target))
                        changed = True
    states = {name(*p) for p in reached}
    final = {name(p, q) for p, q in reached if p in A.final and q in B.final}
    return TreeAutomaton(A.alphabet, states, rules, final)


def fresh_state(A: TreeAutomaton, base: str) -> State:
    q, i = base, 1
    while q in A.states:
        q, i = f"{base}{i}", i + 1
    return q


def to_unique_final(A: TreeAutomaton, name: str = "qf") -> TreeAutomaton:
    """Equivalent automaton whose only final state ``name`` is never a rule argument.

    Every rule leading into an old final state is duplicated with the fresh
    state as its target; no epsilon rules are involved.
    """
    qf = fresh_state(A, name)
    copies = {Rule(r.symbol, r.args, qf) for r in A.rules if r.target in A.final}
    return TreeAutomaton(A.alphabet, A.states | {qf}, A.rules | copies, {qf})
