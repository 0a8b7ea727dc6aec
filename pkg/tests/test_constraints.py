import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SEED, two_cycle_plus_isolated
from strategies import SMALL, automata
from oracles import all_terms, naive_runs, naive_taged_accepts, pairs_ok
from taged.automata import Rule, TreeAutomaton, accepts, enumerate_language, enumerate_runs
from taged.constraints import (
    Taged,
    constraint_class,
    run_satisfies,
    taged_accepts,
    taged_empty_bounded,
    taged_witness_run,
)
from taged.errors import AlienSymbolError
from taged.reduction import build_a_m, build_d_g
from taged.terms import RankedAlphabet, Symbol, comb_encode, fill_positions, parse_term


A_SYM, B_SYM, F_SYM = Symbol("A", 0), Symbol("B", 0), Symbol("f", 2)


def distinct_pair_automaton():
    base = TreeAutomaton(SMALL, ["q", "qf"], [
        Rule(A_SYM, (), "q"), Rule(B_SYM, (), "q"), Rule(F_SYM, ("q", "q"), "qf"),
    ], ["qf"])
    return Taged(base, neq={("q", "q")})


def test_constraint_class():
    base = build_a_m(3)
    assert constraint_class(Taged(base)) == (0, 0)
    assert constraint_class(Taged(base, neq={("am.q1", "am.q1")})) == (0, 1)
    assert constraint_class(Taged(base, eq={("am.q1", "am.q2"), ("am.q2", "am.q1")})) == (2, 0)


def test_unknown_constraint_state():
    with pytest.raises(ValueError):
        Taged(build_a_m(2), neq={("nope", "nope")})


def test_reflexive_disequality_examples():
    T = distinct_pair_automaton()
    assert taged_accepts(T, parse_term("f(A,B)"))
    assert not taged_accepts(T, parse_term("f(A,A)"))
    # one q-position only: nothing to compare against
    single = Taged(TreeAutomaton(SMALL, ["q"], [Rule(A_SYM, (), "q")], ["q"]), neq={("q", "q")})
    assert taged_accepts(single, parse_term("A"))


def test_equality_constraint():
    base = TreeAutomaton(SMALL, ["p", "r", "qf"], [
        Rule(A_SYM, (), "p"), Rule(B_SYM, (), "p"), Rule(A_SYM, (), "r"), Rule(B_SYM, (), "r"),
        Rule(F_SYM, ("p", "r"), "qf"),
    ], ["qf"])
    T = Taged(base, eq={("p", "r")})
    assert taged_accepts(T, parse_term("f(A,A)"))
    assert not taged_accepts(T, parse_term("f(A,B)"))
    assert accepts(base, parse_term("f(A,B)"))


def test_witness_run_is_a_valid_run():
    T = distinct_pair_automaton()
    run = taged_witness_run(T, parse_term("f(B,A)"))
    assert run.as_dict() == {(): "qf", (1,): "q", (2,): "q"}
    assert run_satisfies(T, run)
    assert taged_witness_run(T, parse_term("f(B,B)")) is None


def test_alien_symbol():
    with pytest.raises(AlienSymbolError):
        taged_accepts(distinct_pair_automaton(), parse_term("g(A,A,A)"))


@settings(max_examples=150, deadline=None)
@given(automata(), st.sampled_from(all_terms(SMALL, 5)))
def test_no_constraints_is_plain_acceptance(A, t):
    assert taged_accepts(Taged(A), t) == accepts(A, t)


@st.composite
def tageds(draw):
    A = draw(automata(max_states=3))
    states = sorted(A.states)
    pair = st.tuples(st.sampled_from(states), st.sampled_from(states))
    eq = draw(st.sets(pair, max_size=1))
    neq = draw(st.sets(pair, max_size=2 - len(eq)))
    return Taged(A, eq, neq)


@settings(max_examples=300, deadline=None)
@given(tageds(), st.sampled_from(all_terms(SMALL, 5)))
def test_matches_naive_oracle(T, t):
    runs = naive_runs(T.base, t)
    assert taged_accepts(T, t) == naive_taged_accepts(T, t, runs)


@settings(max_examples=150, deadline=None)
@given(tageds(), st.sampled_from(all_terms(SMALL, 5)), st.data())
def test_adding_constraints_never_accepts_more(T, t, data):
    states = sorted(T.base.states)
    extra = data.draw(st.tuples(st.sampled_from(states), st.sampled_from(states)))
    which = data.draw(st.sampled_from(["eq", "neq"]))
    bigger = Taged(T.base, T.eq | {extra} if which == "eq" else T.eq,
                   T.neq | {extra} if which == "neq" else T.neq)
    if taged_accepts(bigger, t):
        assert taged_accepts(T, t)


@settings(max_examples=150, deadline=None)
@given(tageds(), st.sampled_from(all_terms(SMALL, 5)))
def test_witness_agrees_with_direct_pair_check(T, t):
    run = taged_witness_run(T, t)
    if run is not None:
        assert run.root_state in T.base.final
        assert run.as_dict() in naive_runs(T.base, t)
        assert run_satisfies(T, run)
        assert pairs_ok(T, t, run.as_dict())


def test_run_satisfies_agrees_with_oracle():
    T = distinct_pair_automaton()
    for t in all_terms(SMALL, 5):
        for r in enumerate_runs(T.base, t):
            assert run_satisfies(T, r) == pairs_ok(T, t, r.as_dict())


def test_empty_bounded_examples():
    empty = Taged(TreeAutomaton(SMALL, ["q"], [], ["q"]))
    assert taged_empty_bounded(empty, 50) is None
    assert taged_empty_bounded(Taged(build_a_m(5)), 16) == parse_term("g(f(A,A),f(A,A),A)")
    assert taged_empty_bounded(Taged(build_a_m(5)), 7) is None
    assert taged_empty_bounded(distinct_pair_automaton(), 3) == parse_term("f(A,B)")


def test_empty_bounded_on_reduction_instance():
    bundle = build_d_g(two_cycle_plus_isolated())
    budget = bundle.witness_budget
    assert budget == 3 + 2 * 5 - 2
    witness = taged_empty_bounded(bundle.d_g, budget)
    assert witness is not None and witness.size == budget
    assert taged_empty_bounded(bundle.d_g, budget - 1) is None


def test_hand_built_witness_accepted_by_reduction():
    bundle = build_d_g(two_cycle_plus_isolated())
    combs = [comb_encode(list(reversed(w))) for w in (("1", "2", "1"), ("2", "1", "2"))]
    slots = [p for p, _ in _leaf_slots(bundle.skeleton)]
    t = fill_positions(bundle.skeleton, dict(zip(slots, combs)))
    assert t == parse_term("f(h(A_1,h(A_2,A_1)),h(A_2,h(A_1,A_2)))")
    runs = [r.as_dict() for r in enumerate_runs(bundle.d_g.base, t)]
    assert taged_accepts(bundle.d_g, t) == naive_taged_accepts(bundle.d_g, t, runs) is True
    same = fill_positions(bundle.skeleton, dict(zip(slots, [combs[0], combs[0]])))
    runs = [r.as_dict() for r in enumerate_runs(bundle.d_g.base, same)]
    assert taged_accepts(bundle.d_g, same) == naive_taged_accepts(bundle.d_g, same, runs) is False


def _leaf_slots(t, pos=()):
    if not t.children:
        yield pos, t
    for i, c in enumerate(t.children, 1):
        yield from _leaf_slots(c, pos + (i,))


def test_fast_path_matches_brute_force():
    # random instances with one reflexive disequality, where the fill search applies
    rng = random.Random(SEED)
    checked = 0
    for _ in range(300):
        A = _random_automaton(rng)
        q = rng.choice(sorted(A.states))
        T = Taged(A, neq={(q, q)})
        fast = taged_empty_bounded(T, 7)
        slow = next((t for t in enumerate_language(A, 7) if taged_accepts(T, t)), None)
        slow_size = min((t.size for t in enumerate_language(A, 7) if taged_accepts(T, t)), default=None)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert fast.size == slow_size
            checked += 1
    assert checked > 20


def _random_automaton(rng):
    n = rng.randint(1, 4)
    states = [f"s{i}" for i in range(n)]
    rules = set()
    for _ in range(rng.randint(1, 8)):
        sym = rng.choice(sorted(SMALL.symbols))
        rules.add(Rule(sym, tuple(rng.choice(states) for _ in range(sym.arity)), rng.choice(states)))
    final = {rng.choice(states)}
    return TreeAutomaton(SMALL, states, rules, final)


def test_hole_symbol_clash_falls_back():
    alphabet = RankedAlphabet.of("HOLE/0", "f/2")
    base = TreeAutomaton(alphabet, ["q", "qf"], [
        Rule(Symbol("HOLE", 0), (), "q"), Rule(Symbol("f", 2), ("q", "q"), "qf"),
    ], ["qf"])
    assert taged_empty_bounded(Taged(base, neq={("q", "q")}), 10) is None
