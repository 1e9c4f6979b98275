import pytest
from hypothesis import given, settings

from treereduce.automaton import Transition, TreeAutomaton, remove_useless
from treereduce.fixtures import la2
from treereduce.lookahead import (GameConfig, lookahead_dw, lookahead_dw_closed, lookahead_up,
                                  lookahead_up_closed, solve)
from treereduce.oracle import (enumerate_language, exact_dw_inclusion, naive_lookahead_dw,
                               naive_lookahead_up)
from treereduce.relations import Relation
from treereduce.simulation import downward_simulation, upward_simulation

from conftest import automata, tv


@settings(max_examples=60, deadline=None)
@given(automata())
def test_k1_equals_plain_simulations(A):
    D = downward_simulation(A)
    assert lookahead_dw(A, 1) == D
    for R in (Relation.identity(A.num_states), D):
        assert lookahead_up(A, 1, R) == upward_simulation(A, R)


@settings(max_examples=40, deadline=None)
@given(automata(max_states=4, max_rules=9))
def test_matches_explicit_game_search(A):
    ident = Relation.identity(A.num_states)
    D = downward_simulation(A)
    for k in (2, 3):
        assert lookahead_dw(A, k) == naive_lookahead_dw(A, k)
        assert lookahead_up(A, k, ident) == naive_lookahead_up(A, k, ident)
        assert lookahead_up(A, k, D) == naive_lookahead_up(A, k, D)


@settings(max_examples=40, deadline=None)
@given(automata(max_states=5))
def test_closed_relations_are_monotone_in_k(A):
    ident = Relation.identity(A.num_states)
    prev_dw, prev_up = lookahead_dw_closed(A, 1), lookahead_up_closed(A, 1, ident)
    for k in (2, 3):
        dw, up = lookahead_dw_closed(A, k), lookahead_up_closed(A, k, ident)
        assert prev_dw <= dw and prev_up <= up
        assert dw.is_preorder() and up.is_preorder()
        prev_dw, prev_up = dw, up


@settings(max_examples=30, deadline=None)
@given(automata(max_states=4, max_rules=8))
def test_downward_lookahead_implies_inclusion(A):
    A = remove_useless(A)
    assert lookahead_dw_closed(A, 3) <= exact_dw_inclusion(A)


def test_la2_needs_lookahead_two():
    A = la2()
    r, u = A.state("r"), A.state("u")
    assert (r, u) not in downward_simulation(A)
    assert (r, u) in lookahead_dw(A, 2)
    assert (r, u) in naive_lookahead_dw(A, 2)
    # r and u accept the same trees
    for q in (r, u):
        single = A.replace(initial=[q])
        assert enumerate_language(single, 3) == {"a(b)", "a(c)"}


def test_psi_only_related_to_psi():
    A = tv(5, 2.0, 3)
    for R in (lookahead_dw(A, 3), lookahead_up(A, 3, Relation.identity(A.num_states))):
        assert [q for q in range(A.num_states) if (A.final, q) in R] == [A.final]


def test_result_is_independent_of_state_numbering():
    A = tv(6, 2.5, 8)
    perm = [0, 4, 2, 6, 1, 5, 3]
    B = TreeAutomaton(A.alphabet, [A.state_names[perm.index(q)] for q in range(7)],
                      [perm[q] for q in A.initial],
                      [Transition(perm[t.source], t.symbol, tuple(perm[x] for x in t.targets))
                       for t in A.transitions])
    for k in (1, 2, 3):
        L, M = lookahead_dw(A, k), lookahead_dw(B, k)
        assert all(((perm[p], perm[q]) in M) == ((p, q) in L) for p in range(7) for q in range(7))
        ident = Relation.identity(7)
        L, M = lookahead_up(A, k, ident), lookahead_up(B, k, ident)
        assert all(((perm[p], perm[q]) in M) == ((p, q) in L) for p in range(7) for q in range(7))


def test_k_bounds():
    A = la2()
    with pytest.raises(ValueError):
        lookahead_dw(A, 0)
    with pytest.raises(ValueError):
        lookahead_dw(A, 17)
    assert lookahead_dw(A, 17, max_k=20) == lookahead_dw(A, 3)
    with pytest.raises(ValueError):
        lookahead_up(A, 2, Relation.identity(2))


def test_game_config():
    A = la2()
    assert solve(A, GameConfig(2, "down")) == lookahead_dw(A, 2)
    ident = Relation.identity(A.num_states)
    assert solve(A, GameConfig(2, "up", ident)) == lookahead_up(A, 2, ident)
    with pytest.raises(ValueError):
        GameConfig(2, "up")
    with pytest.raises(ValueError):
        GameConfig(2, "sideways")
