"""Tree automata with global equality and disequality constraints.

A term is accepted when some accepting run satisfies both relations:

* ``(p, q)`` in ``eq``: every ``p``-labelled and every ``q``-labelled position
  carry the same subterm;
* ``(p, q)`` in ``neq``: any two *distinct* positions labelled ``p`` and ``q``
  carry different subterms.  A reflexive pair ``(q, q)`` therefore asks the
  ``q``-labelled subterms to be pairwise distinct, and is vacuous when only
  one position is labelled ``q``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .automata import (
    DEFAULT_MAX_BUCKETS,
    Rule,
    Run,
    State,
    TreeAutomaton,
    has_finite_language,
    is_empty,
    min_sizes,
    size_buckets,
    size_layers,
    useful_states,
)
from .errors import ResourceLimitError
from .terms import (
    Position,
    RankedAlphabet,
    Symbol,
    Term,
    check_alphabet,
    fill_positions,
    hole_positions,
    subterm_at,
)

Pair = tuple[State, State]


@dataclass(frozen=True)
class Taged:
    base: TreeAutomaton
    eq: frozenset[Pair] = frozenset()
    neq: frozenset[Pair] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "eq", frozenset(tuple(p) for p in self.eq))
        object.__setattr__(self, "neq", frozenset(tuple(p) for p in self.neq))
        for p, q in self.eq | self.neq:
            if p not in self.base.states or q not in self.base.states:
                raise ValueError(f"constraint ({p}, {q}) mentions an unknown state")

    @property
    def constrained_states(self) -> frozenset[State]:
        return frozenset(q for pair in self.eq | self.neq for q in pair)


def constraint_class(T: Taged) -> tuple[int, int]:
    """``(|eq|, |neq|)``: the smallest ``(k', k)`` with ``T`` in TAGED(k', k)."""
    return len(T.eq), len(T.neq)


# -- membership --------------------------------------------------------------
#
# Bottom-up over distinct subterms.  A summary of a subtree is its root state
# together with the set of (constrained state, subterm id) labels used inside
# it; summaries violating a constraint are discarded as soon as they appear.
# Label multiplicities are irrelevant except for reflexive disequalities,
# which are checked while two label sets are merged.

class _Checker:
    def __init__(self, T: Taged):
        self.eq_with: dict[State, set[State]] = defaultdict(set)
        self.neq_with: dict[State, set[State]] = defaultdict(set)
        for p, q in T.eq:
            self.eq_with[p].add(q)
            self.eq_with[q].add(p)
        for p, q in T.neq:
            self.neq_with[p].add(q)
            self.neq_with[q].add(p)
        self.constrained = T.constrained_states

    def compatible(self, a: frozenset, b: frozenset) -> bool:
        """Can label sets coming from disjoint sets of positions coexist?"""
        if len(a) > len(b):
            a, b = b, a
        if not a:
            return True
        ids_b: dict[State, set[int]] = defaultdict(set)
        for q, i in b:
            ids_b[q].add(i)
        for q, i in a:
            for r in self.neq_with.get(q, ()):
                if i in ids_b.get(r, ()):
                    return False
            for r in self.eq_with.get(q, ()):
                other = ids_b.get(r)
                if other and other != {i}:
                    return False
        return True


def taged_witness_run(T: Taged, t: Term) -> Run | None:
    """An accepting run of ``t`` satisfying the constraints, or ``None``."""
    A = T.base
    check_alphabet(t, A.alphabet)
    checker = _Checker(T)

    ids: dict[Term, int] = {}
    for node in _postorder_distinct(t):
        ids.setdefault(node, len(ids))

    # table[node] maps summary -> (rule, child summaries) back-pointer
    table: dict[Term, dict[tuple[State, frozenset], tuple]] = {}
    for node in _postorder_distinct(t):
        if node in table:
            continue
        child_tables = [table[c] for c in node.children]
        out: dict[tuple[State, frozenset], tuple] = {}
        for r in A.rules_for(node.symbol):
            pools = []
            for child_table, q in zip(child_tables, r.args):
                pool = [s for s in child_table if s[0] == q]
                if not pool:
                    break
                pools.append(pool)
            else:
                for combo in itertools.product(*pools):
                    labels = _merge(checker, node, ids[node], r.target, combo)
                    if labels is None:
                        continue
                    key = (r.target, labels)
                    if key not in out:
                        out[key] = (r, combo)
        table[node] = out

    roots = sorted(
        (s for s in table[t] if s[0] in A.final),
        key=lambda s: (s[0], sorted(s[1])),
    )
    if not roots:
        return None
    labels: list[tuple[Position, State]] = []
    stack = [((), t, roots[0])]
    while stack:
        pos, node, summary = stack.pop()
        labels.append((pos, summary[0]))
        _, combo = table[node][summary]
        for i, (child, child_summary) in enumerate(zip(node.children, combo), 1):
            stack.append((pos + (i,), child, child_summary))
    return Run(t, tuple(labels))


def _merge(checker: _Checker, node: Term, node_id: int, target: State, combo) -> frozenset | None:
    merged: frozenset = frozenset()
    for _, labels in combo:
        if not checker.compatible(merged, labels):
            return None
        merged = merged | labels
    if target in checker.constrained:
        own = frozenset({(target, node_id)})
        if not checker.compatible(merged, own):
            return None
        merged = merged | own
    return merged


def _postorder_distinct(t: Term):
    seen = set()
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        if node in seen:
            continue
        seen.add(node)
        stack.append((node, True))
        for c in reversed(node.children):
            stack.append((c, False))


def taged_accepts(T: Taged, t: Term) -> bool:
    return taged_witness_run(T, t) is not None


def run_satisfies(T: Taged, run: Run) -> bool:
    """Direct check of every position pair of a run against both relations."""
    labelled = sorted(run.labels)
    subterms = {pos: subterm_at(run.term, pos) for pos, _ in labelled}
    for (a, p), (b, q) in itertools.combinations_with_replacement(labelled, 2):
        for x, y in ((p, q), (q, p)):
            if (x, y) in T.eq and subterms[a] != subterms[b]:
                return False
            if a != b and (x, y) in T.neq and subterms[a] == subterms[b]:
                return False
    return True


# -- bounded emptiness -------------------------------------------------------

HOLE = "HOLE"


def taged_empty_bounded(T: Taged, max_nodes: int, *,
                        max_buckets: int = DEFAULT_MAX_BUCKETS) -> Term | None:
    """Some accepted term of at most ``max_nodes`` nodes, or ``None``.

    ``None`` only says that no witness exists within the bound.  The returned
    witness has the least possible number of nodes.

    When the only constraint is a reflexive disequality ``(q, q)`` with ``q``
    never nested below itself, and the language of contexts around the
    ``q``-positions is finite, the search enumerates those contexts and plugs
    in the smallest pairwise-distinct terms of ``q``.  Otherwise accepted terms
    of the base automaton are enumerated by size and tested one by one.
    """
    if max_nodes <= 0 or is_empty(T.base):
        return None
    q = _single_reflexive_state(T)
    if q is not None:
        ctx = _context_automaton(T.base, q)
        if ctx is not None and has_finite_language(ctx):
            witness = _fill_contexts(T, ctx, q, max_nodes, max_buckets)
            if witness is not None:
                assert taged_accepts(T, witness)
            return witness
    return _brute_force(T, max_nodes, max_buckets)


def _brute_force(T: Taged, max_nodes: int, max_buckets: int) -> Term | None:
    buckets = size_buckets(T.base, max_nodes, max_buckets=max_buckets)
    for size in range(1, max_nodes + 1):
        candidates = set()
        for f in T.base.final:
            candidates |= buckets.get(f, {}).get(size, set())
        for t in sorted(candidates, key=Term.sort_key):
            if taged_accepts(T, t):
                return t
    return None


def _single_reflexive_state(T: Taged) -> State | None:
    if T.eq or len(T.neq) != 1:
        return None
    (p, q), = T.neq
    if p != q:
        return None
    # q must not occur strictly below itself in any run
    above: dict[State, set[State]] = defaultdict(set)
    for r in T.base.rules:
        for a in r.args:
            above[a].add(r.target)
    seen, todo = set(), list(above.get(q, ()))
    while todo:
        s = todo.pop()
        if s == q:
            return None
        if s not in seen:
            seen.add(s)
            todo.extend(above.get(s, ()))
    return q


def _context_automaton(A: TreeAutomaton, q: State) -> TreeAutomaton | None:
    if A.alphabet.get(HOLE) is not None:
        return None
    hole = Symbol(HOLE, 0)
    rules = {r for r in A.rules if r.target != q} | {Rule(hole, (), q)}
    return TreeAutomaton(A.alphabet | RankedAlphabet([hole]), A.states, rules, A.final)


def _fill_contexts(T: Taged, ctx: TreeAutomaton, q: State, max_nodes: int,
                   max_buckets: int) -> Term | None:
    hole = Symbol(HOLE, 0)
    fill_min = min_sizes(T.base).get(q)
    contexts = []
    for c in _finite_language(ctx, max_buckets):
        holes = hole_positions(c, hole)
        if holes and fill_min is None:
            continue
        if c.size + len(holes) * ((fill_min or 1) - 1) <= max_nodes:
            contexts.append((c, holes))
    if not contexts:
        return None

    need = max(len(holes) for _, holes in contexts)
    fills: list[Term] = []
    if need:
        # largest single fill that any candidate context could still afford
        limit = max(max_nodes - c.size + len(h) - (len(h) - 1) * fill_min
                    for c, h in contexts if h)
        fills = _smallest_terms(T.base, q, need, limit, max_buckets)
    cost = [0]
    for t in fills:
        cost.append(cost[-1] + t.size)

    best = None
    for c, holes in contexts:
        j = len(holes)
        if j > len(fills):
            continue
        total = c.size - j + cost[j]
        if total <= max_nodes and (best is None or (total, c.sort_key()) < best[0]):
            best = ((total, c.sort_key()), c, holes)
    if best is None:
        return None
    _, c, holes = best
    return fill_positions(c, dict(zip(holes, fills)))


def _smallest_terms(A: TreeAutomaton, q: State, count: int, max_nodes: int,
                    max_buckets: int) -> list[Term]:
    """Up to ``count`` terms reaching ``q``, smallest first, canonical within a size."""
    out: list[Term] = []
    for _, layer in size_layers(A, max_nodes, max_buckets=max_buckets):
        out.extend(sorted(layer.get(q, ()), key=Term.sort_key))
        if len(out) >= count:
            break
    return out[:count]


def _finite_language(A: TreeAutomaton, max_terms: int) -> list[Term]:
    """All accepted terms of an automaton known to have a finite language."""
    useful = useful_states(A)
    memo: dict[State, list[Term]] = {}

    def terms_of(state):
        if state in memo:
            return memo[state]
        out = set()
        for r in A.sorted_rules():
            if r.target != state or not all(a in useful for a in r.args):
                continue
            pools = [terms_of(a) for a in r.args]
            count = 1
            for p in pools:
                count *= len(p)
            if count > max_terms:
                raise ResourceLimitError(
                    f"context language exceeds {max_terms} terms",
                    cap_name="max_buckets", cap=max_terms,
                )
            for children in itertools.product(*pools):
                out.add(Term(r.symbol, children))
        memo[state] = sorted(out, key=Term.sort_key)
        return memo[state]

    result = set()
    for f in A.final & useful:
        result.update(terms_of(f))
    return sorted(result, key=Term.sort_key)


def pairs_from(items: Iterable[Iterable[State]]) -> frozenset[Pair]:
    return frozenset(tuple(p) for p in items)
