import pytest

from conftest import SEED, chain, complete, three_cycle, two_cycle_plus_isolated
from oracles import all_terms, naive_full_walks, naive_hamiltonian
from taged.automata import Rule, TreeAutomaton, accepts, enumerate_language, reachable_states
from taged.constraints import constraint_class, taged_accepts, taged_empty_bounded
from taged.errors import PreconditionError, ResourceLimitError
from taged.graphs import Digraph, all_digraphs, count_full_walks, random_population
from taged.reduction import (
    CHECKS,
    SLOT,
    Limits,
    build_a_m,
    build_b_g,
    build_c_g,
    build_d_g,
    build_p_g,
    decide,
    product_state_bound,
    reduce_and_decide,
    rule_bound,
    verify_constructions,
)
from taged.terms import Symbol, comb_encode, count_leaves, parse_term


def combs_of(walks):
    return {comb_encode(list(reversed(w))) for w in walks}


def test_single_term_examples():
    A1 = build_a_m(1)
    assert [str(r) for r in A1.sorted_rules()] == ["A() -> am.q1"]
    assert enumerate_language(A1, 4) == [parse_term("A")]
    assert enumerate_language(build_a_m(2), 8) == [parse_term("f(A,A)")]
    assert enumerate_language(build_a_m(5), 16) == [parse_term("g(f(A,A),f(A,A),A)")]
    assert len(build_a_m(2 ** 40).states) == 41
    with pytest.raises(PreconditionError):
        build_a_m(0)


def test_single_term_against_generate_and_test():
    # every term over {f, g, A} up to 9 nodes, checked one by one
    for m in range(1, 8):
        A = build_a_m(m)
        hits = [t for t in all_terms(A.alphabet, 9) if accepts(A, t)]
        expected = enumerate_language(A, 4 * m)
        assert hits == [t for t in expected if t.size <= 9]
        assert count_leaves(expected[0], Symbol("A", 0)) == m


def test_path_combs_examples():
    assert set(enumerate_language(build_p_g(three_cycle()), 5)) == combs_of(
        [("1", "2", "3"), ("2", "3", "1"), ("3", "1", "2")])
    assert enumerate_language(build_p_g(Digraph("123")), 5) == []
    # a single vertex needs no edge at all
    assert enumerate_language(build_p_g(Digraph("x")), 3) == [parse_term("A_x")]


def test_path_combs_exhaustive_four_vertices_sample():
    for G in all_digraphs(3) + random_population(60, (4, 5), SEED):
        n = len(G.vertices)
        assert set(enumerate_language(build_p_g(G), 2 * n - 1)) == combs_of(naive_full_walks(G))


def test_repeat_detector_examples():
    C = build_c_g(three_cycle())
    for v in "123":
        assert accepts(C, parse_term(f"h(A_{v},A_{v})"))
    assert not accepts(C, parse_term("h(A_1,A_2)"))
    assert not accepts(C, parse_term("A_1"))
    assert accepts(C, parse_term("h(A_1,h(A_2,A_1))"))


def test_repeat_detector_predicates():
    G = three_cycle()
    C = build_c_g(G)
    for t in all_terms(C.alphabet, 9):
        seq = _decode(t)
        if seq is None:
            assert not accepts(C, t)
            continue
        reach = reachable_states(C, t)
        assert ("cg.p1" in reach) == (len(seq) >= 2)
        for w in G.vertices:
            assert (f"cg.pp_{w}" in reach) == (w in seq)
        assert accepts(C, t) == (len(set(seq)) < len(seq))


def _decode(t):
    # independent comb reader: right spine of h nodes, vertex leaves on the left
    seq = []
    while t.symbol.name == "h":
        left, t = t.children
        if left.children:
            return None
        seq.append(left.symbol.name[2:])
    if t.children:
        return None
    return seq + [t.symbol.name[2:]]


def test_non_hamiltonian_combs_examples():
    assert enumerate_language(build_b_g(three_cycle()), 5) == []
    two = build_b_g(two_cycle_plus_isolated())
    assert set(enumerate_language(two, 8)) == combs_of([("1", "2", "1"), ("2", "1", "2")])
    (final,) = two.final
    assert all(final not in r.args for r in two.rules)
    assert all(q.startswith("bg.") for q in two.states)


def test_non_hamiltonian_count():
    for G in all_digraphs(3) + random_population(60, (4, 5), SEED):
        n = len(G.vertices)
        lang = set(enumerate_language(build_b_g(G), 2 * n - 1))
        bad = [w for w in naive_full_walks(G) if len(set(w)) < n]
        assert lang == combs_of(bad)
        assert len(lang) == len(naive_full_walks(G)) - len(naive_hamiltonian(G))


def test_d_g_structure():
    bundle = build_d_g(two_cycle_plus_isolated())
    T = bundle.d_g
    assert bundle.m_g == 2
    assert constraint_class(T) == (0, 1)
    assert T.neq == {(SLOT, SLOT)} and not T.eq
    assert Rule(Symbol("A", 0), (), SLOT) not in T.base.rules
    assert SLOT in T.base.states and len(T.base.final) == 1
    assert all(SLOT not in r.args for r in T.base.rules if r.symbol.name == "h")
    assert bundle.skeleton == parse_term("f(A,A)")
    assert bundle.witness_budget == 11


@pytest.mark.parametrize("G", [Digraph("1"), Digraph("12"), Digraph("123")])
def test_d_g_precondition(G):
    with pytest.raises(PreconditionError) as err:
        build_d_g(G)
    assert "HAMILTONIAN" in str(err.value)


def test_d_g_empty_for_hamiltonian_chain():
    bundle = build_d_g(chain(3))
    assert bundle.m_g == 1
    assert taged_empty_bounded(bundle.d_g, bundle.witness_budget) is None
    assert not taged_accepts(bundle.d_g, parse_term("h(A_3,h(A_2,A_1))"))


def test_d_g_witness_fills_every_slot_with_distinct_combs():
    G = Digraph("123", [("1", "2"), ("2", "1"), ("1", "1")])
    bundle = build_d_g(G)
    bad = [w for w in naive_full_walks(G) if len(set(w)) < 3]
    assert bundle.m_g == len(bad) == 5
    witness = taged_empty_bounded(bundle.d_g, bundle.witness_budget)
    assert witness.size == bundle.witness_budget
    slots = _comb_slots(witness)
    assert len(slots) == 5 and set(slots) == combs_of(bad)


def test_d_g_empty_when_one_walk_is_hamiltonian():
    G = Digraph("123", [("1", "2"), ("2", "3"), ("1", "1")])
    assert naive_hamiltonian(G) == [("1", "2", "3")]
    bundle = build_d_g(G)
    assert bundle.m_g == 3
    assert taged_empty_bounded(bundle.d_g, bundle.witness_budget) is None


def _comb_slots(t):
    if t.symbol.name == "h" or t.symbol.name.startswith("A_"):
        return [t]
    return [s for c in t.children for s in _comb_slots(c)]


def test_decide_examples():
    assert decide(chain(3)).hamiltonian
    assert not decide(two_cycle_plus_isolated()).hamiltonian
    assert decide(Digraph("1")).hamiltonian
    assert not decide(Digraph("12")).hamiltonian
    d = decide(two_cycle_plus_isolated(), "search")
    assert not d.hamiltonian
    assert d.witness == parse_term("f(h(A_1,h(A_2,A_1)),h(A_2,h(A_1,A_2)))")
    assert decide(two_cycle_plus_isolated()).bg_count == 2
    with pytest.raises(ValueError):
        decide(chain(3), "guess")


def test_decide_caps():
    with pytest.raises(ResourceLimitError) as err:
        decide(chain(11))
    assert err.value.cap_name == "max_vertices"
    with pytest.raises(ResourceLimitError) as err:
        decide(two_cycle_plus_isolated(), "search", Limits(max_nodes=10))
    assert err.value.needed == 11
    with pytest.raises(ValueError):
        Limits(max_nodes=0)


@pytest.mark.parametrize("n", [3, 4])
def test_complete_graphs_decided_both_ways(n):
    G = complete(n)
    assert reduce_and_decide(G, "counting")
    assert reduce_and_decide(G, "search")


def test_size_bounds_hold_structurally():
    for G in all_digraphs(3) + random_population(40, (4, 5), SEED):
        n, m = len(G.vertices), count_full_walks(G)
        if n < 2 or m < 1:
            continue
        base = build_d_g(G).d_g.base
        assert len(base.states) <= product_state_bound(n, m)
        assert len(base.rules) <= rule_bound(G, m)


def test_verify_report_lines():
    lines = []
    report = verify_constructions(two_cycle_plus_isolated(), lines.append)
    assert report.all_passed
    assert [line.split()[1] for line in lines[:len(CHECKS)]] == list(CHECKS)
    assert all(line.endswith("PASS") for line in lines[:len(CHECKS)])
    assert lines[len(CHECKS):] == [
        "m_G=2", "bG_count=2", "hamiltonian=false", "verdict=nonempty", "ALL-PASS",
    ]
    assert verify_constructions(three_cycle()).all_passed


def test_verify_catches_broken_repeat_detector():
    def broken(G):
        C = build_c_g(G)
        drop = {Rule(Symbol("h", 2), (f"cg.p_{w}", "cg.p1"), f"cg.pp_{w}") for w in G.vertices}
        return TreeAutomaton(C.alphabet, C.states, C.rules - drop, C.final)

    lines = []
    report = verify_constructions(three_cycle(), lines.append, c_g_builder=broken)
    assert not report.all_passed
    failed = {r.name: r for r in report.results if not r.passed}
    assert "repeat-detect" in failed
    comb = parse_term(failed["repeat-detect"].counterexample)
    assert _decode(comb) is not None and len(set(_decode(comb))) < len(_decode(comb))
    assert any(line.startswith("LEMMA repeat-detect FAIL counterexample: h(") for line in lines)
    assert lines[-1] == f"FAILURES={report.failures}"
