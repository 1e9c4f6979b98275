import pytest
from hypothesis import given, settings

from treereduce.automaton import remove_useless
from treereduce.fixtures import gfq, notation
from treereduce.oracle import combined_preorder_naive, exact_dw_inclusion, naive_simulation
from treereduce.relations import Relation, equivalence_kernel, strict_part, transitive_closure
from treereduce.simulation import combined_preorder, downward_simulation, upward_simulation

from conftest import automata, tv


def named_pairs(A, R):
    names = A.state_names
    return {(names[p], names[q]) for p, q in R.pairs() if p != q}


def test_gfq_fixture_relations():
    A = gfq()
    D = downward_simulation(A)
    assert named_pairs(A, D) == {("p", "q"), ("q", "p"), ("r", "s"), ("s", "r")}
    U = upward_simulation(A, equivalence_kernel(D))
    assert named_pairs(A, U) == {("q", "r"), ("r", "q")}


def test_gfq_fixture_combined_kernel():
    # evaluated from the definition by the triple-loop oracle
    A = gfq()
    D = downward_simulation(A)
    W = combined_preorder(A, D, upward_simulation(A, D))
    assert W == combined_preorder_naive(D, upward_simulation(A, D))
    assert named_pairs(A, equivalence_kernel(W)) == {("p", "q"), ("q", "p"), ("r", "s"), ("s", "r")}


def test_psi_clauses():
    A = notation()
    D = downward_simulation(A)
    U = upward_simulation(A, Relation.identity(A.num_states))
    psi = A.final
    for R in (D, U):
        assert [q for q in range(A.num_states) if (psi, q) in R] == [psi]
    assert all((q, psi) not in D for q in range(A.num_states) if q != psi)
    # initial states are only simulated upward by initial states
    for q in A.initial:
        assert all(r in A.initial for r in range(A.num_states) if (q, r) in U)


@settings(max_examples=80, deadline=None)
@given(automata())
def test_downward_matches_naive_and_is_preorder(A):
    D = downward_simulation(A)
    assert D == naive_simulation(A, "down")
    assert D.is_preorder()


@settings(max_examples=80, deadline=None)
@given(automata())
def test_upward_matches_naive(A):
    D = downward_simulation(A)
    ident = Relation.identity(A.num_states)
    for R in (ident, D, strict_part(D), equivalence_kernel(D)):
        assert upward_simulation(A, R) == naive_simulation(A, "up", R)
    assert upward_simulation(A, ident).is_preorder()


@settings(max_examples=40, deadline=None)
@given(automata(max_states=4, max_rules=8))
def test_downward_simulation_implies_inclusion(A):
    A = remove_useless(A)
    assert downward_simulation(A) <= exact_dw_inclusion(A)


def test_upward_dimension_check():
    with pytest.raises(ValueError):
        upward_simulation(notation(), Relation.identity(3))


def test_upward_closes_inducing_relation():
    A = tv(6, 2.0, 11)
    D = downward_simulation(A)
    chain = Relation.from_pairs(A.num_states, [(p, q) for p, q in D.pairs() if p < q])
    assert upward_simulation(A, chain) == upward_simulation(A, transitive_closure(chain))


@settings(max_examples=60, deadline=None)
@given(automata())
def test_combined_preorder_matches_definition(A):
    D = downward_simulation(A)
    U = upward_simulation(A, D)
    W = combined_preorder(A, D, U)
    assert W == combined_preorder_naive(D, U)
    assert W.is_preorder()


def test_combined_preorder_size_check():
    A = notation()
    with pytest.raises(ValueError):
        combined_preorder(A, Relation.identity(2), Relation.identity(2))
