import pytest
from hypothesis import given, settings

from treereduce.automaton import (RankedAlphabet, Transition, Tree, TreeAutomaton, isomorphic,
                                  membership, remove_useless, restrict, stats)
from treereduce.fixtures import notation
from treereduce.oracle import enumerate_language, exact_language_equiv

from conftest import automata, tv


def test_tree_text_roundtrip():
    t = Tree.parse("a(e, c(d))")
    assert str(t) == "a(e,c(d))"
    assert t.height == 3
    assert Tree.parse(str(t)) == t


def test_tree_nodes_roundtrip():
    t = Tree.parse("a(b,c(d,e))")
    nodes = t.nodes
    assert nodes[()] == "a" and nodes[(2, 1)] == "d"
    assert Tree.from_nodes(nodes) == t


@pytest.mark.parametrize("nodes", [{(1,): "a"}, {(): "a", (2,): "b"}, {(): "a", (1, 1): "b"}])
def test_tree_from_nodes_rejects_bad_domains(nodes):
    with pytest.raises(ValueError):
        Tree.from_nodes(nodes)


@pytest.mark.parametrize("text", ["a(", "a(b,)", "a)b", "", "a(b) c"])
def test_tree_parse_errors(text):
    with pytest.raises(ValueError):
        Tree.parse(text)


def test_tree_closedness():
    alphabet = {"a": 2, "b": 0}
    assert Tree.parse("a(b,b)").is_closed(alphabet)
    assert not Tree.parse("a(b)").is_closed(alphabet)
    assert not Tree.parse("c").is_closed(alphabet)


def test_notation_membership():
    A = notation()
    for text in ["a(e,c(d))", "a(e,c(e))", "b(e,c(d))", "b(e,c(e))"]:
        assert membership(A, Tree.parse(text))
    assert not membership(A, Tree.parse("a(d,c(e))"))
    assert not membership(A, Tree.parse("e"))


def test_membership_rejects_open_tree():
    with pytest.raises(ValueError):
        membership(notation(), Tree.parse("a(e)"))


def test_notation_stats():
    st = stats(notation())
    assert (st.states, st.transitions, st.leaf_rules) == (6, 6, 2)


def test_empty_automaton_stats():
    A = TreeAutomaton({"a": 0}, ["psi"], [], [])
    assert stats(A) == (0, 0, 0, 0.0)


def test_alphabet_validation():
    with pytest.raises(ValueError):
        RankedAlphabet([("a", 1), ("a", 2)])
    with pytest.raises(ValueError):
        RankedAlphabet([("a", -1)])
    assert RankedAlphabet({"a": 1}).union({"b": 0}) == {"a": 1, "b": 0}
    with pytest.raises(ValueError):
        RankedAlphabet({"a": 1}).union({"a": 2})


@pytest.mark.parametrize("rule", [
    Transition(1, "a", (1,)),      # leaf symbol must target psi
    Transition(1, "f", (1,)),      # arity
    Transition(1, "f", (0, 1)),    # psi inside a non-leaf rule
    Transition(0, "a", (0,)),      # psi has no rules
    Transition(1, "h", (0,)),      # undeclared symbol
])
def test_automaton_rejects_bad_rules(rule):
    with pytest.raises(ValueError):
        TreeAutomaton({"f": 2, "a": 0}, ["psi", "q"], [1], [rule])


def test_psi_cannot_be_initial():
    with pytest.raises(ValueError):
        TreeAutomaton({"a": 0}, ["psi", "q"], [0], [])


def test_remove_useless_drops_unproductive_and_unreachable():
    A = TreeAutomaton.from_rules(
        {"f": 2, "a": 0}, ["i"],
        [("i", "f", ("p", "dead")), ("i", "f", ("p", "p")), ("p", "a", ()),
         ("dead", "f", ("dead", "dead")), ("far", "a", ())])
    B = remove_useless(A)
    assert set(B.state_names) == {"psi", "i", "p"}
    assert len(B.transitions) == 2
    assert exact_language_equiv(A, B)


@settings(max_examples=60, deadline=None)
@given(automata())
def test_remove_useless_preserves_language_and_is_idempotent(A):
    B = remove_useless(A)
    assert enumerate_language(A, 4, cap=10**6) == enumerate_language(B, 4, cap=10**6)
    assert remove_useless(B) == B
    assert B.num_states <= A.num_states


def test_restrict_keeps_psi():
    A = notation()
    B = restrict(A, [A.state("q3")])
    assert B.state_names == ("psi", "q3")
    assert len(B.transitions) == 1


def test_isomorphic_under_renaming():
    A = tv(6, 2.0, 5)
    perm = [0, 3, 1, 6, 2, 5, 4]
    names = [None] * A.num_states
    for q, p in enumerate(perm):
        names[p] = f"x{q}"
    B = TreeAutomaton(A.alphabet, names, [perm[q] for q in A.initial],
                      [Transition(perm[t.source], t.symbol, tuple(perm[x] for x in t.targets))
                       for t in A.transitions])
    assert isomorphic(A, B)
    dropped = B.replace(transitions=B.transitions[1:])
    assert not isomorphic(A, dropped)
    assert not isomorphic(A, B.replace(initial=set(range(1, 7))))
