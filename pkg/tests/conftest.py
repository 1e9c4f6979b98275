from hypothesis import strategies as st

from treereduce.automaton import Transition, TreeAutomaton
from treereduce.bench import TvParams, generate

ALPHABET = {"f": 2, "g": 1, "a": 0, "b": 0}


@st.composite
def automata(draw, max_states=5, max_rules=12):
    """Small automata over a mixed-rank alphabet (psi is state 0)."""
    n = draw(st.integers(1, max_states))
    states = list(range(1, n + 1))
    rule = st.one_of(
        st.tuples(st.sampled_from(states), st.just("f"), st.tuples(st.sampled_from(states), st.sampled_from(states))),
        st.tuples(st.sampled_from(states), st.just("g"), st.tuples(st.sampled_from(states))),
        st.tuples(st.sampled_from(states), st.sampled_from(["a", "b"]), st.just((0,))),
    )
    rules = draw(st.lists(rule, max_size=max_rules))
    initial = draw(st.sets(st.sampled_from(states), min_size=1, max_size=2))
    names = ["psi"] + [f"q{i}" for i in states]
    return TreeAutomaton(ALPHABET, names, initial, [Transition(*r) for r in rules])


def tv(n, td, seed, s=2, ad=0.8, roots=1):
    return generate(TvParams(n, s, td, ad, seed, roots))
