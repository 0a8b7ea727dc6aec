"""Hamiltonian path to TAGED(0,1) emptiness.

Given a digraph ``G`` with ``m`` full walks, ``build_d_g`` produces a TAGED
with a single reflexive disequality ``(q1, q1)`` whose accepted terms are the
one ``A_m`` skeleton with its ``m`` leaves replaced by pairwise-distinct combs
of non-Hamiltonian full walks.  There are ``m`` such combs iff no full walk
is Hamiltonian, so the TAGED is empty iff ``G`` has a Hamiltonian path.

State names: ``am.q<i>`` (single-term automaton), ``pg.q_<w>_<i>`` (full-walk
combs), ``cg.p_<w>``, ``cg.pp_<w>``, ``cg.p0``, ``cg.p1``, ``cg.pf`` (repeated
vertex combs), ``bg.<l>|<r>`` (their product) and the shared slot state ``q1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .automata import (
    DEFAULT_MAX_BUCKETS,
    Rule,
    TreeAutomaton,
    accepts,
    enumerate_language,
    product,
    reachable_states,
    to_unique_final,
    trim,
    useful_states,
)
from .constraints import Taged, taged_empty_bounded
from .errors import PreconditionError, ResourceLimitError
from .terms import RankedAlphabet, Symbol, Term, comb_alphabet, comb_encode, count_leaves, vertex_symbol
from .graphs import (
    DEFAULT_MAX_VERTICES,
    Digraph,
    count_full_walks,
    count_hamiltonian_paths,
    enumerate_full_walks,
    has_hamiltonian_path,
)

F, G_SYM, LEAF = Symbol("f", 2), Symbol("g", 3), Symbol("A", 0)
H = Symbol("h", 2)
SINGLE_TERM_ALPHABET = RankedAlphabet([F, G_SYM, LEAF])
SLOT = "q1"


@dataclass(frozen=True)
class Limits:
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_nodes: int = 100_000
    max_buckets: int = DEFAULT_MAX_BUCKETS

    def __post_init__(self):
        for name in ("max_vertices", "max_nodes", "max_buckets"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


# -- the constructions -------------------------------------------------------

def build_a_m(m: int) -> TreeAutomaton:
    """Automaton whose language is one term with exactly ``m`` leaves, all ``A``.

    Reading the binary digits of ``m`` after the leading 1, a 0 doubles the
    term so far with ``f`` and a 1 doubles it and appends one more leaf with
    ``g``.
    """
    if m < 1:
        raise PreconditionError(f"m must be at least 1, got {m}")
    bits = bin(m)[2:]
    k = len(bits)
    q = [None] + [f"am.q{i}" for i in range(1, k + 1)]
    rules = {Rule(LEAF, (), q[1])}
    for i in range(1, k):
        if bits[i] == "0":
            rules.add(Rule(F, (q[i], q[i]), q[i + 1]))
        else:
            rules.add(Rule(G_SYM, (q[i], q[i], q[1]), q[i + 1]))
    return TreeAutomaton(SINGLE_TERM_ALPHABET, q[1:], rules, {q[k]})


def _pg(w, i):
    return f"pg.q_{w}_{i}"


def build_p_g(G: Digraph) -> TreeAutomaton:
    """Combs ``[A_w(n-1) ... A_w0]`` of full walks ``w0 w1 ... w(n-1)`` of ``G``."""
    if not G.vertices:
        raise PreconditionError("the graph has no vertices")
    n = len(G.vertices)
    alphabet = comb_alphabet(G.vertices)
    states = {_pg(w, i) for w in G.vertices for i in range(n)}
    rules = {Rule(vertex_symbol(w), (), _pg(w, 0)) for w in G.vertices}
    for w, v in G.edges:
        for i in range(n - 1):
            rules.add(Rule(H, (_pg(v, 0), _pg(w, i)), _pg(v, i + 1)))
    return TreeAutomaton(alphabet, states, rules, {_pg(w, n - 1) for w in G.vertices})


def build_c_g(G: Digraph) -> TreeAutomaton:
    """Combs with at least two entries in which some vertex occurs twice.

    ``cg.p0`` reads any vertex, ``cg.p1`` any comb of two or more entries,
    ``cg.p_w`` the vertex ``w`` itself, ``cg.pp_w`` any comb containing ``w``.
    """
    if not G.vertices:
        raise PreconditionError("the graph has no vertices")
    p0, p1, pf = "cg.p0", "cg.p1", "cg.pf"
    states = {p0, p1, pf}
    rules = {Rule(H, (p0, p0), p1), Rule(H, (p0, p1), p1), Rule(H, (p0, pf), pf)}
    for w in G.vertices:
        pw, ppw = f"cg.p_{w}", f"cg.pp_{w}"
        a = vertex_symbol(w)
        states |= {pw, ppw}
        rules |= {
            Rule(a, (), p0), Rule(a, (), pw), Rule(a, (), ppw),
            Rule(H, (pw, p0), ppw),
            Rule(H, (pw, ppw), pf),
            Rule(H, (p0, ppw), ppw),
            Rule(H, (pw, p1), ppw),
        }
    return TreeAutomaton(comb_alphabet(G.vertices), states, rules, {pf})


def build_b_g(G: Digraph, c_g: TreeAutomaton | None = None) -> TreeAutomaton:
    """Combs of non-Hamiltonian full walks, with one final state used in no rule argument."""
    if c_g is None:
        c_g = build_c_g(G)
    both = product(c_g, build_p_g(G))
    return trim(to_unique_final(both, "qf"), keep_final=True).rename(prefix="bg.")


@dataclass(frozen=True)
class ReductionBundle:
    graph: Digraph
    m_g: int
    a_m: TreeAutomaton
    p_g: TreeAutomaton
    c_g: TreeAutomaton
    b_g: TreeAutomaton
    d_g: Taged
    skeleton: Term = field(repr=False)

    @property
    def witness_budget(self) -> int:
        """Node count of every term accepted by ``d_g``."""
        n = len(self.graph.vertices)
        return self.skeleton.size - self.m_g + self.m_g * (2 * n - 1)


def build_d_g(G: Digraph, *, c_g: TreeAutomaton | None = None) -> ReductionBundle:
    n = len(G.vertices)
    m = count_full_walks(G) if n else 0
    if n < 2 or m < 1:
        raise PreconditionError(
            f"reduction needs |V| >= 2 and at least one full walk (|V|={n}, m_G={m}); "
            "answer directly: " + ("HAMILTONIAN" if n == 1 else "NO-HAMILTONIAN")
        )
    a_m = build_a_m(m)
    p_g = build_p_g(G)
    c_g = c_g if c_g is not None else build_c_g(G)
    b_g = build_b_g(G, c_g)

    (b_final,) = b_g.final
    b_side = b_g.rename({b_final: SLOT})
    a_side = a_m.rename({"am.q1": SLOT})
    (top,) = a_side.final
    assert all(SLOT not in r.args for r in b_side.rules), "slot state used as a rule argument"
    assert b_side.states & a_side.states == {SLOT}

    base = TreeAutomaton(
        a_side.alphabet | b_side.alphabet,
        a_side.states | b_side.states,
        (a_side.rules | b_side.rules) - {Rule(LEAF, (), SLOT)},
        {top},
    )
    d_g = Taged(base, frozenset(), frozenset({(SLOT, SLOT)}))
    return ReductionBundle(G, m, a_m, p_g, c_g, b_g, d_g, unique_term(a_m))


def unique_term(A: TreeAutomaton) -> Term:
    """The term of an automaton with one rule per useful state (such as ``build_a_m``)."""
    useful = useful_states(A)
    by_target: dict[str, Rule] = {}
    for r in A.rules:
        if r.target in useful and all(q in useful for q in r.args):
            if r.target in by_target:
                raise PreconditionError(f"state {r.target} has several rules")
            by_target[r.target] = r
    memo: dict[str, Term] = {}

    def build(q):
        if q not in memo:
            r = by_target[q]
            memo[q] = Term(r.symbol, tuple(build(a) for a in r.args))
        return memo[q]

    (f,) = A.final & useful
    return build(f)


# -- size evidence -----------------------------------------------------------

def quadratic_state_bound(n: int, m: int) -> int:
    """|V|^2 + 3|V| + 4 + bit length of m_G.  Product states can exceed it, see ``product_state_bound``."""
    return n * n + 3 * n + 4 + m.bit_length()


def product_state_bound(n: int, m: int) -> int:
    """|C_G states| * |P_G states| + fresh final + the single-term states."""
    return (2 * n + 3) * n * n + 1 + m.bit_length()


def rule_bound(G: Digraph, m: int) -> int:
    """Rules of the product (doubled by the unique-final copies) plus the single-term rules."""
    n, e = len(G.vertices), len(G.edges)
    return 2 * (3 * n + (4 * n + 3) * e * max(n - 1, 0)) + m.bit_length()


# -- the decision pipeline ---------------------------------------------------

@dataclass(frozen=True)
class Decision:
    hamiltonian: bool
    method: str
    m_g: int
    bg_count: int | None = None
    witness: Term | None = None


METHODS = ("counting", "search")


def decide(G: Digraph, method: str = "counting", limits: Limits = Limits()) -> Decision:
    """Decide Hamiltonicity of ``G`` through emptiness of its TAGED."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    n = len(G.vertices)
    if n == 0:
        raise PreconditionError("the graph has no vertices")
    if n > limits.max_vertices:
        raise ResourceLimitError(
            f"graph has {n} vertices, cap is {limits.max_vertices}",
            cap_name="max_vertices", cap=limits.max_vertices, needed=n,
        )
    m = count_full_walks(G)
    if n == 1:
        return Decision(True, method, m, 0)
    if m == 0:
        return Decision(False, method, m, 0)
    bundle = build_d_g(G)
    if method == "counting":
        count = len(enumerate_language(bundle.b_g, 2 * n - 1, max_buckets=limits.max_buckets))
        return Decision(count < m, method, m, count)
    budget = bundle.witness_budget
    if budget > limits.max_nodes:
        raise ResourceLimitError(
            f"witness budget of {budget} nodes exceeds the cap of {limits.max_nodes}",
            cap_name="max_nodes", cap=limits.max_nodes, needed=budget,
        )
    witness = taged_empty_bounded(bundle.d_g, budget, max_buckets=limits.max_buckets)
    return Decision(witness is None, method, m, None, witness)


def reduce_and_decide(G: Digraph, method: str = "counting", limits: Limits = Limits()) -> bool:
    """True iff ``G`` has a Hamiltonian path, read off the emptiness of ``D_G``."""
    return decide(G, method, limits).hamiltonian


# -- mechanised checks -------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    counterexample: str | None = None

    def line(self) -> str:
        out = f"LEMMA {self.name} {'PASS' if self.passed else 'FAIL'}"
        if self.counterexample is not None:
            out += f" counterexample: {self.counterexample}"
        return out


@dataclass
class VerificationReport:
    results: list[CheckResult]
    m_g: int
    bg_count: int
    hamiltonian: bool

    @property
    def failures(self) -> int:
        return sum(not r.passed for r in self.results)

    @property
    def all_passed(self) -> bool:
        return self.failures == 0

    def summary_lines(self) -> list[str]:
        return [
            f"m_G={self.m_g}",
            f"bG_count={self.bg_count}",
            f"hamiltonian={str(self.hamiltonian).lower()}",
            f"verdict={'empty' if self.hamiltonian else 'nonempty'}",
            "ALL-PASS" if self.all_passed else f"FAILURES={self.failures}",
        ]

    def lines(self) -> list[str]:
        return [r.line() for r in self.results] + self.summary_lines()


CHECKS = (
    "hamiltonian-walk",
    "walk-count",
    "single-term",
    "path-comb",
    "comb-spine",
    "comb-contains",
    "repeat-detect",
    "non-hamiltonian",
    "emptiness-iff-hamiltonian",
)


def verify_constructions(G: Digraph, sink: Callable[[str], None] | None = None, *,
                         limits: Limits = Limits(),
                         c_g_builder: Callable[[Digraph], TreeAutomaton] = build_c_g,
                         comb_length: int | None = None) -> VerificationReport:
    """Check every construction on ``G`` against brute-force oracles.

    Lines are pushed to ``sink`` as soon as each check finishes.
    """
    n = len(G.vertices)
    if n == 0:
        raise PreconditionError("the graph has no vertices")
    if n > limits.max_vertices:
        raise ResourceLimitError(
            f"graph has {n} vertices, cap is {limits.max_vertices}",
            cap_name="max_vertices", cap=limits.max_vertices, needed=n,
        )
    emit = sink or (lambda line: None)
    results: list[CheckResult] = []

    def record(name, passed, counterexample=None):
        res = CheckResult(name, passed, None if passed else counterexample)
        results.append(res)
        emit(res.line())

    walks = enumerate_full_walks(G)
    m = count_full_walks(G)
    ham = has_hamiltonian_path(G, max_vertices=limits.max_vertices)
    n_ham = count_hamiltonian_paths(G, max_vertices=limits.max_vertices)
    distinct = [w for w in walks if len(set(w)) == n]

    record("hamiltonian-walk", ham == bool(distinct),
           " ".join(distinct[0]) if distinct else "no distinct full walk")
    record("walk-count", m == len(walks), f"dp={m} enumerated={len(walks)}")

    bad = None
    for size in sorted({*range(1, 9), m} - {0}):
        if 4 * size > limits.max_nodes:
            raise ResourceLimitError(
                f"checking the single-term automaton for m={size} needs {4 * size} nodes",
                cap_name="max_nodes", cap=limits.max_nodes, needed=4 * size,
            )
        lang = enumerate_language(build_a_m(size), 4 * size, max_buckets=limits.max_buckets)
        if len(lang) != 1 or count_leaves(lang[0], LEAF) != size or _leaf_count(lang[0]) != size:
            bad = f"m={size} language={[str(t) for t in lang]}"
            break
    record("single-term", bad is None, bad)

    p_g = build_p_g(G)
    got = set(enumerate_language(p_g, 2 * n - 1, max_buckets=limits.max_buckets))
    want = {comb_encode(list(reversed(w))) for w in walks}
    record("path-comb", got == want, _first_difference(got, want))

    c_g = c_g_builder(G)
    spine_bad = contains_bad = repeat_bad = None
    for comb in _all_combs(G.vertices, comb_length or _default_comb_length(n)):
        t = comb_encode(comb)
        reach = reachable_states(c_g, t)
        if spine_bad is None and ("cg.p1" in reach) != (len(comb) >= 2):
            spine_bad = str(t)
        if contains_bad is None:
            for w in G.vertices:
                if (f"cg.pp_{w}" in reach) != (w in comb):
                    contains_bad = f"{t} (vertex {w})"
                    break
        if repeat_bad is None and accepts(c_g, t) != (len(set(comb)) < len(comb)):
            repeat_bad = str(t)
    record("comb-spine", spine_bad is None, spine_bad)
    record("comb-contains", contains_bad is None, contains_bad)
    record("repeat-detect", repeat_bad is None, repeat_bad)

    b_g = build_b_g(G, c_g)
    b_lang = set(enumerate_language(b_g, 2 * n - 1, max_buckets=limits.max_buckets))
    b_want = {comb_encode(list(reversed(w))) for w in walks if len(set(w)) < n}
    (b_final,) = b_g.final
    ok = (
        b_lang == b_want
        and len(b_lang) == m - n_ham
        and all(b_final not in r.args for r in b_g.rules)
    )
    record("non-hamiltonian", ok,
           _first_difference(b_lang, b_want) or f"|L|={len(b_lang)} expected {m - n_ham}")

    by_count = decide(G, "counting", limits).hamiltonian
    by_search = decide(G, "search", limits).hamiltonian
    record("emptiness-iff-hamiltonian", by_count == by_search == ham,
           f"counting={by_count} search={by_search} oracle={ham}")

    report = VerificationReport(results, m, len(b_lang), ham)
    for line in report.summary_lines():
        emit(line)
    return report


def _leaf_count(t: Term) -> int:
    return 1 if not t.children else sum(_leaf_count(c) for c in t.children)


def _default_comb_length(n: int) -> int:
    return 5 if n <= 4 else 4 if n <= 7 else 3


def _all_combs(vertices, max_length):
    for length in range(1, max_length + 1):
        yield from itertools.product(vertices, repeat=length)


def _first_difference(got: set, want: set) -> str | None:
    extra = sorted(got - want, key=Term.sort_key)
    if extra:
        return f"unexpected {extra[0]}"
    missing = sorted(want - got, key=Term.sort_key)
    if missing:
        return f"missing {missing[0]}"
    return None
