"""Small hand-built automata with known behaviour.

Each fixture documents what it demonstrates.  Word automata are encoded as
unary trees: letters are rank-1 symbols and an accepting state reads the
rank-0 end marker ``nil``, so the word ``aaa`` becomes ``a(a(a(nil)))``.
"""

from __future__ import annotations

from .automaton import Tree, TreeAutomaton
from .catalog import RelationSpec

END = "nil"


def word_tree(word: str) -> Tree:
    t = Tree(END)
    for letter in reversed(word):
        t = Tree(letter, (t,))
    return t


def word_automaton(letters: str, initial, edges, accepting, name: str = "W") -> TreeAutomaton:
    """``edges`` are (source, letters, target) triples of a word automaton."""
    alphabet = {c: 1 for c in letters}
    alphabet[END] = 0
    rules = [(p, c, (q,)) for p, cs, q in edges for c in cs]
    rules += [(f, END, ()) for f in accepting]
    return TreeAutomaton.from_rules(alphabet, initial, rules, name=name)


def notation() -> TreeAutomaton:
    """Four-tree language {a,b}(e, c({d,e}))."""
    return TreeAutomaton.from_rules(
        {"a": 2, "c": 1, "d": 0, "e": 0, "b": 2}, ["q1", "q2"],
        [("q3", "e", ()), ("q5", "d", ()), ("q4", "c", ("q3",)), ("q4", "c", ("q5",)),
         ("q1", "a", ("q3", "q4")), ("q2", "b", ("q3", "q4"))],
        states=["q1", "q2", "q3", "q4", "q5"], name="A")


def gfq() -> TreeAutomaton:
    """Quotienting by upward simulation induced by dw-sim equivalence is unsafe:
    merging q and r adds c(b,a)."""
    return TreeAutomaton.from_rules(
        {"a": 0, "b": 0, "c": 2}, ["i"],
        [("i", "c", ("p", "q")), ("i", "c", ("q", "r")), ("i", "c", ("r", "s")),
         ("p", "a", ()), ("q", "a", ()), ("r", "b", ()), ("s", "b", ())], name="gfq")


def prune_a() -> TreeAutomaton:
    """P(strict up-sim(strict dw-sim), id) drops the c-leaf of q3 and the
    d-leaf of q5, losing a(c,d)."""
    return TreeAutomaton.from_rules(
        {"a": 2, "b": 1, "c": 0, "d": 0}, ["q1"],
        [("q1", "a", ("q3", "q6")), ("q1", "a", ("q4", "q5")),
         ("q3", "b", ("q4",)), ("q5", "b", ("q6",)),
         ("q3", "c", ()), ("q4", "c", ()), ("q5", "d", ()), ("q6", "d", ())], name="prune_a")


def prune_b() -> TreeAutomaton:
    """Words: P(strict backward inclusion, forward sim) removes p2-a->q1 and
    q2-a->r2, losing aaa."""
    return word_automaton(
        "abc", ["i"],
        [("i", "bc", "p1"), ("i", "a", "p2"), ("i", "ab", "p3"),
         ("p1", "a", "q1"), ("p2", "a", "q1"), ("p3", "a", "q2"),
         ("q1", "a", "r1"), ("q2", "a", "r2")],
        ["r1", "r2"], name="prune_b")


def prune_c() -> TreeAutomaton:
    """Words: P(backward sim, strict forward inclusion) removes i-a->p1 and
    p2-a->q2, losing aaa."""
    return word_automaton(
        "abc", ["i"],
        [("i", "a", "p1"), ("i", "a", "p2"), ("p1", "a", "q1"), ("p2", "a", "q2"),
         ("p2", "a", "q3"), ("q1", "ab", "f1"), ("q2", "a", "f2"), ("q3", "bc", "f3")],
        ["f1", "f2", "f3"], name="prune_c")


def prune_d() -> TreeAutomaton:
    """P(strict up-sim(strict dw-inclusion), strict dw-sim) removes the
    a-rules of q3 and q5, losing a(a(c,c),a(c,c))."""
    leaves = {"p1": "c", "p2": "cd", "p3": "d", "p4": "c", "p5": "c",
              "p6": "c", "p7": "c", "p8": "c", "p9": "cd", "p10": "d"}
    rules = [("q1", "a", ("q3", "q6")), ("q1", "a", ("q4", "q5")),
             ("q3", "b", ("q4",)), ("q5", "b", ("q6",)),
             ("q3", "a", ("p1", "p4")), ("q3", "a", ("p3", "p4")),
             ("q4", "a", ("p2", "p5")),
             ("q5", "a", ("p6", "p10")), ("q5", "a", ("p6", "p8")),
             ("q6", "a", ("p7", "p9"))]
    rules += [(p, c, ()) for p, cs in leaves.items() for c in cs]
    return TreeAutomaton.from_rules({"a": 2, "b": 1, "c": 0, "d": 0}, ["q1"], rules,
                                    name="prune_d")


def complex_fixture() -> TreeAutomaton:
    """A chain of six initial states where P(strict up-sim(strict dw-sim),
    strict dw-inclusion) blocks every run on the full binary a-tree of
    height three whose frontier nodes read d(b).

    Frontier states are built from two gadgets: T1 reads d into one state
    accepting b or c; T2 reads d into two states accepting b and c
    separately.  ``+x``/``+y`` add an x/y rule to a shared state N, and some
    states get an outgoing or incoming z rule to break symmetry.  Primed
    level-two states copy the rules of their unprimed twin.
    """
    rules = [("N", "b", ())]
    gadgets = {13: ("T1", "y"), 14: ("T2", "xy"), 15: ("T1", ""), 16: ("T2", "x"),
               17: ("T2", "xy"), 18: ("T1", ""), 19: ("T2", "x"), 20: ("T2", "xy"),
               21: ("T1", ""), 22: ("T1", "y"), 23: ("T2", "xy"), 24: ("T1", "")}
    for s, (kind, extra) in gadgets.items():
        q = f"s{s}"
        if kind == "T1":
            rules += [(q, "d", (f"{q}m",)), (f"{q}m", "b", ()), (f"{q}m", "c", ())]
        else:
            rules += [(q, "d", (f"{q}b",)), (q, "d", (f"{q}c",)),
                      (f"{q}b", "b", ()), (f"{q}c", "c", ())]
        rules += [(q, sym, ("N",)) for sym in extra]
    level2 = {7: (13, 15), 8: (14, 16), 9: (17, 19), 10: (18, 20), 11: (21, 23), 12: (22, 24)}
    for s, (l, r) in level2.items():
        for q in (f"s{s}", f"s{s}'"):
            rules.append((q, "a", (f"s{l}", f"s{r}")))
    for q in ("s7", "s7'", "s9", "s9'", "s11", "s11'"):
        rules.append((q, "z", ("N",)))
    for q in ("s8", "s8'", "s18", "s24"):
        rules.append((f"z_{q}", "z", (q,)))
    roots = {1: (7, 12), 2: (8, 7), 3: (9, 8), 4: (10, 9), 5: (11, 10), 6: (12, 11)}
    for s, (l, r) in roots.items():
        rules.append((f"s{s}", "a", (f"s{l}", f"s{r}'")))
    alphabet = {"a": 2, "b": 0, "c": 0, "d": 1, "x": 1, "y": 1, "z": 1}
    return TreeAutomaton.from_rules(alphabet, [f"s{i}" for i in range(1, 7)], rules,
                                    name="complex")


def la2() -> TreeAutomaton:
    """r reads a into one state accepting b or c; u has two a-rules, one per
    leaf.  Same language, u simulates r only with lookahead 2."""
    return TreeAutomaton.from_rules(
        {"a": 1, "b": 0, "c": 0}, ["u", "r"],
        [("u", "a", ("u1",)), ("u", "a", ("u2",)), ("u1", "b", ()), ("u2", "c", ()),
         ("r", "a", ("r1",)), ("r1", "b", ()), ("r1", "c", ())], name="la2")


def micro() -> TreeAutomaton:
    """i has a-rules to x and y; x accepts c, y accepts c and d."""
    return TreeAutomaton.from_rules(
        {"a": 1, "c": 0, "d": 0}, ["i"],
        [("i", "a", ("x",)), ("i", "a", ("y",)), ("x", "c", ()), ("y", "c", ()), ("y", "d", ())],
        name="micro")


def fixtures() -> dict[str, TreeAutomaton]:
    return {"notation": notation(), "gfq": gfq(), "prune_a": prune_a(), "prune_b": prune_b(),
            "prune_c": prune_c(), "prune_d": prune_d(), "complex": complex_fixture(),
            "la2": la2(), "micro": micro()}


# (fixture, source relation, child relation, tree lost by the forced pruning)
UNSAFE_PRUNINGS = [
    ("prune_a", "strict-up-sim(strict-dw-sim)", "id", Tree.parse("a(c,d)")),
    ("prune_b", "strict-up-la:4(id)", "dw-sim", word_tree("aaa")),
    ("prune_c", "up-sim(id)", "strict-dw-la:4", word_tree("aaa")),
    ("prune_d", "strict-up-sim(strict-dw-la:3)", "strict-dw-sim",
     Tree.parse("a(a(c,c),a(c,c))")),
    ("complex", "strict-up-sim(strict-dw-sim)", "strict-dw-la:3",
     Tree.parse("a(a(d(b),d(b)),a(d(b),d(b)))")),
]


def unsafe_prunings() -> list[tuple[TreeAutomaton, RelationSpec, RelationSpec, Tree]]:
    table = fixtures()
    return [(table[name], RelationSpec.parse(u), RelationSpec.parse(d), t)
            for name, u, d, t in UNSAFE_PRUNINGS]
