"""Slow, independent reference implementations used to validate the fast code.

Nothing here shares code with the simulation and game solvers.  Language
questions go through bottom-up subset construction; relations are refined
pair by pair on plain Python sets.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .automaton import Transition, Tree, TreeAutomaton, disjoint_union
from .relations import Relation


class OracleGuardError(ValueError):
    pass


class EnumerationCapExceeded(RuntimeError):
    pass


def _rules_by_symbol(A: TreeAutomaton) -> dict[str, list[Transition]]:
    out: dict[str, list[Transition]] = defaultdict(list)
    for t in A.transitions:
        out[t.symbol].append(t)
    return out


def macro_states(A: TreeAutomaton, max_macros: int = 200_000) -> dict[frozenset[int], Tree]:
    """Every set {q : t in D(q)} realised by a closed tree t, with a witness.

    Sets are discovered height by height, so each witness has minimal
    height.  Among trees of that height the witness is least by symbol and
    then by the text of its children's witnesses.
    """
    n = A.num_states
    symbols = sorted(A.alphabet)
    rules = _rules_by_symbol(A)
    known: list[np.ndarray] = []
    trees: list[Tree] = []
    index: dict[bytes, int] = {}

    fresh: dict[bytes, tuple[np.ndarray, Tree]] = {}
    for sym in symbols:
        if A.alphabet[sym] == 0:
            row = np.zeros(n, dtype=bool)
            row[[t.source for t in rules[sym]]] = True
            fresh.setdefault(np.packbits(row).tobytes(), (row, Tree(sym)))
    old_hi = 0
    while fresh:
        for k, (row, tree) in sorted(fresh.items(), key=lambda kv: _tree_key(kv[1][1])):
            index[k] = len(known)
            known.append(row)
            trees.append(tree)
        if len(known) > max_macros:
            raise OracleGuardError("too many macro-states")
        new_lo, new_hi = old_hi, len(known)
        mat = np.array(known)
        text_rank = np.argsort(np.argsort([str(t) for t in trees], kind="stable"), kind="stable")
        fresh = {}
        for sym in symbols:
            m = A.alphabet[sym]
            if m == 0 or not rules[sym]:
                continue
            src = np.array([t.source for t in rules[sym]])
            tgt = np.array([t.targets for t in rules[sym]])
            onehot = np.zeros((len(src), n), dtype=np.float32)
            onehot[np.arange(len(src)), src] = 1.0
            # combos whose first child from the newest level sits at position p
            for p in range(m):
                ranges = [(0, new_lo)] * p + [(new_lo, new_hi)] + [(0, new_hi)] * (m - p - 1)
                sizes = [hi - lo for lo, hi in ranges]
                total = int(np.prod(sizes))
                step = max(1, (1 << 22) // len(src))
                for lo in range(0, total, step):
                    flat = np.arange(lo, min(total, lo + step))
                    idx = [a + r[0] for a, r in zip(np.unravel_index(flat, sizes), ranges)]
                    ok = np.ones((len(flat), len(src)), dtype=bool)
                    for i in range(m):
                        ok &= mat[np.ix_(idx[i], tgt[:, i])]
                    rows = (ok.astype(np.float32) @ onehot) > 0
                    packed = np.packbits(rows, axis=1)
                    order = np.lexsort([text_rank[idx[i]] for i in reversed(range(m))])
                    _, first = np.unique(packed[order], axis=0, return_index=True)
                    for j in order[first]:
                        k = packed[j].tobytes()
                        if k in index:
                            continue
                        tree = Tree(sym, tuple(trees[idx[i][j]] for i in range(m)))
                        old = fresh.get(k)
                        if old is None or _tree_key(tree) < _tree_key(old[1]):
                            fresh[k] = (rows[j], tree)
        old_hi = new_hi
    return {frozenset(np.flatnonzero(row).tolist()): tree for row, tree in zip(known, trees)}


def _tree_key(t: Tree) -> tuple:
    return (t.symbol, tuple(str(c) for c in t.children))


def exact_dw_inclusion(A: TreeAutomaton, max_states: int = 12) -> Relation:
    """q below r iff D(q) is contained in D(r), with psi related only to psi."""
    if A.num_states - 1 > max_states:
        raise OracleGuardError(f"automaton has more than {max_states} states")
    macros = list(macro_states(A))
    n = A.num_states
    psi = A.final
    pairs = []
    for q in range(n):
        for r in range(n):
            if q == psi or r == psi:
                if r == psi and (q == psi or not any(q in m for m in macros)):
                    pairs.append((q, r))
                continue
            if all(r in m for m in macros if q in m):
                pairs.append((q, r))
    return Relation.from_pairs(n, pairs)


@dataclass(frozen=True)
class Equivalence:
    equal: bool
    witness: Tree | None = None

    def __bool__(self) -> bool:
        return self.equal


def exact_language_equiv(A: TreeAutomaton, B: TreeAutomaton, max_states: int = 24) -> Equivalence:
    """Decide L(A) = L(B) through the determinised disjoint union.

    When the languages differ the witness is a tree of minimal height in the
    symmetric difference, the least in text order among candidates.
    """
    if A.num_states + B.num_states - 2 > max_states:
        raise OracleGuardError(f"combined size exceeds {max_states} states")
    U, offset = disjoint_union(A, B)
    in_a = {q for q in U.initial if q < offset}
    in_b = U.initial - in_a
    best: Tree | None = None
    for macro, tree in macro_states(U).items():
        if bool(macro & in_a) != bool(macro & in_b):
            if best is None or (tree.height, str(tree)) < (best.height, str(best)):
                best = tree
    return Equivalence(best is None, best)


def enumerate_language(A: TreeAutomaton, max_height: int, cap: int = 10_000) -> set[str]:
    """All accepted trees of height at most ``max_height``, as canonical text."""
    rules = _rules_by_symbol(A)
    by_state: dict[int, set[str]] = defaultdict(set)
    for _ in range(max_height):
        nxt: dict[int, set[str]] = defaultdict(set)
        for sym, ts in rules.items():
            for t in ts:
                if A.alphabet[sym] == 0:
                    nxt[t.source].add(sym)
                    continue
                kids = [by_state.get(x, ()) for x in t.targets]
                for combo in itertools.product(*kids):
                    nxt[t.source].add(f"{sym}({','.join(combo)})")
                    if len(nxt[t.source]) > cap:
                        raise EnumerationCapExceeded(f"more than {cap} trees")
        by_state = nxt
    out: set[str] = set()
    for q in A.initial:
        out |= by_state.get(q, set())
        if len(out) > cap:
            raise EnumerationCapExceeded(f"more than {cap} trees")
    return out


def naive_simulation(A: TreeAutomaton, direction: str,
                     inducing: Relation | None = None) -> Relation:
    """Pairwise refinement straight from the definitions."""
    n = A.num_states
    psi = A.final
    rel = {(q, r) for q in range(n) for r in range(n) if q != psi or r == psi}
    if direction == "down":
        out: dict[int, list[Transition]] = defaultdict(list)
        for t in A.transitions:
            out[t.source].append(t)

        def ok(q, r):
            return all(any(u.symbol == t.symbol and all((x, y) in rel for x, y in zip(t.targets, u.targets))
                           for u in out[r])
                       for t in out[q])
    elif direction == "up":
        if inducing is None:
            raise ValueError("upward simulation needs an inducing relation")
        side = _closure(set(inducing.pairs()), n)
        rel = {(q, r) for q, r in rel if q not in A.initial or r in A.initial}
        occurs: dict[int, list[tuple[Transition, int]]] = defaultdict(list)
        for t in A.transitions:
            for i, x in enumerate(t.targets):
                occurs[x].append((t, i))

        def ok(q, r):
            for t, i in occurs[q]:
                if not any(u.symbol == t.symbol and (t.source, u.source) in rel
                           and all((t.targets[j], u.targets[j]) in side
                                   for j in range(len(t.targets)) if j != i)
                           for u, i2 in occurs[r] if i2 == i):
                    return False
            return True
    else:
        raise ValueError(f"unknown direction {direction!r}")
    changed = True
    while changed:
        changed = False
        for pair in sorted(rel):
            if not ok(*pair):
                rel.discard(pair)
                changed = True
    return Relation.from_pairs(n, rel)


def _closure(pairs: set[tuple[int, int]], n: int) -> set[tuple[int, int]]:
    pairs = set(pairs)
    for m in range(n):
        for p in range(n):
            if (p, m) in pairs:
                for q in range(n):
                    if (m, q) in pairs:
                        pairs.add((p, q))
    return pairs


def combined_preorder_naive(D: Relation, U: Relation) -> Relation:
    """Triple-loop evaluation of ``D (+) U^-1``."""
    n = D.size

    def comp(x, y):
        return any((x, m) in D and (y, m) in U for m in range(n))

    return Relation.from_pairs(n, [
        (x, y) for x in range(n) for y in range(n)
        if comp(x, y) and all(comp(x, z) for z in range(n) if (y, z) in D)
    ])


# -------------------------------------------------------------- game search

def _spoiler_trees(out, q, depth):
    """All Spoiler move trees from q: nested (rule, children) down to depth."""
    if depth == 0 or not out[q]:
        return [("leaf", q)]
    trees = []
    for t in out[q]:
        kid_options = [_spoiler_trees(out, x, depth - 1) for x in t.targets]
        for kids in itertools.product(*kid_options):
            trees.append(("node", q, t, kids))
    return trees


def naive_lookahead_dw(A: TreeAutomaton, k: int) -> Relation:
    """k-lookahead downward simulation by explicit game search (tiny inputs)."""
    n = A.num_states
    psi = A.final
    out: dict[int, list[Transition]] = defaultdict(list)
    for t in A.transitions:
        out[t.source].append(t)
    spoiler = {q: _spoiler_trees(out, q, k) for q in range(n)}
    rel = {(q, r) for q in range(n) for r in range(n) if q != psi or r == psi}

    def answer(tree, d, root):
        if tree[0] == "leaf":
            return (tree[1], d) in rel
        _, s, t, kids = tree
        if not root and (s, d) in rel:
            return True
        return any(u.symbol == t.symbol and all(answer(c, x, False) for c, x in zip(kids, u.targets))
                   for u in out[d])

    changed = True
    while changed:
        changed = False
        for q, r in sorted(rel):
            if not all(answer(tree, r, True) for tree in spoiler[q] if tree[0] == "node"):
                rel.discard((q, r))
                changed = True
    return Relation.from_pairs(n, rel)


def naive_lookahead_up(A: TreeAutomaton, k: int, inducing: Relation) -> Relation:
    """k-lookahead upward simulation by explicit game search (tiny inputs)."""
    n = A.num_states
    psi = A.final
    side = _closure(set(inducing.pairs()), n)
    occurs: dict[int, list[tuple[Transition, int]]] = defaultdict(list)
    for t in A.transitions:
        for i, x in enumerate(t.targets):
            occurs[x].append((t, i))

    def paths(q, depth):
        if depth == 0 or not occurs[q]:
            return [[]]
        return [[(t, i), *rest] for t, i in occurs[q] for rest in paths(t.source, depth - 1)]

    spoiler = {q: [p for p in paths(q, k) if p] for q in range(n)}
    rel = {(q, r) for q in range(n) for r in range(n)
           if (q != psi or r == psi) and (q not in A.initial or r in A.initial)}

    def answer(path, s, d, root):
        if s in A.initial and d not in A.initial:
            return False
        if not root and (s, d) in rel:
            return True
        if not path:
            return False
        (t, i), rest = path[0], path[1:]
        return any(i2 == i and u.symbol == t.symbol
                   and all((t.targets[j], u.targets[j]) in side for j in range(len(t.targets)) if j != i)
                   and answer(rest, t.source, u.source, False)
                   for u, i2 in occurs[d])

    changed = True
    while changed:
        changed = False
        for q, r in sorted(rel):
            if not all(answer(p, q, r, True) for p in spoiler[q]):
                rel.discard((q, r))
                changed = True
    return Relation.from_pairs(n, rel)
