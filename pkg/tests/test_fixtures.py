import pytest

from treereduce.automaton import Tree, membership
from treereduce.catalog import RelationSpec, Verdict, gfp_allowed, gfq_allowed
from treereduce.fixtures import fixtures, gfq, la2, notation, unsafe_prunings, word_tree
from treereduce.lookahead import lookahead_dw_closed
from treereduce.oracle import enumerate_language, exact_language_equiv
from treereduce.reduce import prune_by, quotient
from treereduce.relations import equivalence_kernel
from treereduce.simulation import downward_simulation, upward_simulation
from treereduce.timbuk import parse_timbuk, serialize_timbuk


@pytest.mark.parametrize("name", sorted(fixtures()))
def test_fixture_round_trips(name):
    A = fixtures()[name]
    assert parse_timbuk(serialize_timbuk(A)) == A


def test_word_tree():
    assert str(word_tree("ab")) == "a(b(nil))"


def test_notation_language():
    assert enumerate_language(notation(), 3) == {
        "a(e,c(d))", "a(e,c(e))", "b(e,c(d))", "b(e,c(e))"}


@pytest.mark.parametrize("case", unsafe_prunings(), ids=lambda c: c[0].name)
def test_forced_pruning_loses_witness(case):
    A, u, d, witness = case
    assert gfp_allowed(u, d) is Verdict.NO
    assert membership(A, witness)
    B = prune_by(A, u, d, force=True)
    assert not membership(B, witness)
    assert not exact_language_equiv(A, B, max_states=200)


def test_gfq_quotient_adds_witness():
    A = gfq()
    D = downward_simulation(A)
    spec = RelationSpec.parse("up-sim(eq-dw-sim)")
    assert gfq_allowed(spec) is Verdict.NO
    W = upward_simulation(A, equivalence_kernel(D))
    B = quotient(A, equivalence_kernel(W))
    c_ba = Tree.parse("c(b,a)")
    assert not membership(A, c_ba)
    assert membership(B, c_ba)
    assert exact_language_equiv(A, B).witness == c_ba


def test_la2_needs_lookahead_two():
    A = la2()
    u, r = A.state("u"), A.state("r")
    assert (r, u) not in downward_simulation(A)
    assert (r, u) not in lookahead_dw_closed(A, 1)
    assert (r, u) in lookahead_dw_closed(A, 2)
