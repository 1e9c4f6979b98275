"""Core data model: ranked alphabets, trees and top-down tree automata.

A top-down automaton has a distinguished state psi that is the target of
every leaf rule.  A leaf rule for a rank-0 symbol ``a`` from state ``q`` is
stored as ``Transition(q, "a", (psi,))``.  States are dense integers and
names live in a side table.
"""

from __future__ import annotations

import itertools
import re
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from typing import NamedTuple

import numpy as np


class RankedAlphabet(Mapping):
    """Ordered mapping from symbol name to rank."""

    def __init__(self, symbols: Iterable[tuple[str, int]] | Mapping[str, int] = ()):
        items = symbols.items() if isinstance(symbols, Mapping) else symbols
        ranks: dict[str, int] = {}
        for name, rank in items:
            if name in ranks:
                raise ValueError(f"duplicate symbol {name!r}")
            if not isinstance(rank, int) or rank < 0:
                raise ValueError(f"bad rank {rank!r} for symbol {name!r}")
            ranks[name] = rank
        self._ranks = ranks

    def __getitem__(self, name: str) -> int:
        return self._ranks[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._ranks)

    def __len__(self) -> int:
        return len(self._ranks)

    def __repr__(self) -> str:
        inner = " ".join(f"{a}:{r}" for a, r in self._ranks.items())
        return f"RankedAlphabet({inner})"

    def union(self, other: Mapping[str, int]) -> RankedAlphabet:
        merged = dict(self._ranks)
        for name, rank in other.items():
            if merged.setdefault(name, rank) != rank:
                raise ValueError(f"symbol {name!r} has conflicting ranks")
        return RankedAlphabet(merged)


class Transition(NamedTuple):
    source: int
    symbol: str
    targets: tuple[int, ...]


_TOKEN = re.compile(r"\s*([^\s(),]+|[(),])")


class Tree(NamedTuple):
    """A ranked tree as a nested term; ``str`` gives the canonical text."""

    symbol: str
    children: tuple["Tree", ...] = ()

    def __str__(self) -> str:
        if not self.children:
            return self.symbol
        return f"{self.symbol}({','.join(str(c) for c in self.children)})"

    def __repr__(self) -> str:
        return f"Tree({str(self)!r})"

    @property
    def height(self) -> int:
        return 1 + max((c.height for c in self.children), default=0)

    @property
    def nodes(self) -> dict[tuple[int, ...], str]:
        """Address map: node address (tuple of 1-based child indices) to symbol."""
        out: dict[tuple[int, ...], str] = {}
        stack: list[tuple[tuple[int, ...], Tree]] = [((), self)]
        while stack:
            addr, t = stack.pop()
            out[addr] = t.symbol
            for i, c in enumerate(t.children, 1):
                stack.append((addr + (i,), c))
        return out

    @classmethod
    def from_nodes(cls, nodes: Mapping[tuple[int, ...], str]) -> Tree:
        if () not in nodes:
            raise ValueError("tree has no root")
        for addr in nodes:
            if addr and (addr[:-1] not in nodes or addr[-1] < 1):
                raise ValueError(f"address {addr} is not prefix closed")
            if addr and addr[-1] > 1 and addr[:-1] + (addr[-1] - 1,) not in nodes:
                raise ValueError(f"address {addr} has a missing left sibling")

        def build(addr: tuple[int, ...]) -> Tree:
            kids = []
            for i in itertools.count(1):
                if addr + (i,) not in nodes:
                    break
                kids.append(build(addr + (i,)))
            return cls(nodes[addr], tuple(kids))

        return build(())

    @classmethod
    def parse(cls, text: str) -> Tree:
        tokens = _TOKEN.findall(text)
        if "".join(tokens) != "".join(text.split()):
            raise ValueError(f"cannot tokenize tree {text!r}")
        pos = 0

        def term() -> Tree:
            nonlocal pos
            if pos >= len(tokens) or tokens[pos] in "(),":
                raise ValueError(f"expected a symbol in {text!r}")
            sym = tokens[pos]
            pos += 1
            kids = []
            if pos < len(tokens) and tokens[pos] == "(":
                pos += 1
                kids.append(term())
                while pos < len(tokens) and tokens[pos] == ",":
                    pos += 1
                    kids.append(term())
                if pos >= len(tokens) or tokens[pos] != ")":
                    raise ValueError(f"unbalanced parentheses in {text!r}")
                pos += 1
            return cls(sym, tuple(kids))

        t = term()
        if pos != len(tokens):
            raise ValueError(f"trailing input in {text!r}")
        return t

    def is_closed(self, alphabet: Mapping[str, int]) -> bool:
        return alphabet.get(self.symbol) == len(self.children) and all(
            c.is_closed(alphabet) for c in self.children
        )


class Block(NamedTuple):
    """Transitions of one symbol laid out as arrays for vectorised algorithms."""

    symbol: str
    ids: np.ndarray  # positions in TreeAutomaton.transitions
    src: np.ndarray  # (T,)
    tgt: np.ndarray  # (T, m), m = max(rank, 1)
    src_onehot: np.ndarray  # (T, n) float32


class TreeAutomaton:
    """Immutable top-down tree automaton with an explicit leaf target psi."""

    __slots__ = ("alphabet", "state_names", "initial", "transitions", "final",
                 "name", "merged", "_blocks")

    def __init__(
        self,
        alphabet: Mapping[str, int],
        state_names: Sequence[str],
        initial: Iterable[int],
        transitions: Iterable[Transition],
        final: int = 0,
        name: str = "A",
        merged: Mapping[str, tuple[str, ...]] | None = None,
    ):
        self.alphabet = alphabet if isinstance(alphabet, RankedAlphabet) else RankedAlphabet(alphabet)
        self.state_names = tuple(state_names)
        if len(set(self.state_names)) != len(self.state_names):
            raise ValueError("state names must be unique")
        n = len(self.state_names)
        if not 0 <= final < n:
            raise ValueError("final state psi out of range")
        self.final = final
        self.initial = frozenset(initial)
        self.name = name
        self.merged = dict(merged or {})
        for q in self.initial:
            if not 0 <= q < n or q == final:
                raise ValueError(f"bad initial state {q}")
        trans = set()
        for t in transitions:
            t = Transition(int(t[0]), t[1], tuple(int(x) for x in t[2]))
            if t.symbol not in self.alphabet:
                raise ValueError(f"undeclared symbol {t.symbol!r}")
            if not 0 <= t.source < n or t.source == final:
                raise ValueError(f"bad source state in {t}")
            rank = self.alphabet[t.symbol]
            if rank == 0:
                if t.targets != (final,):
                    raise ValueError(f"leaf rule {t} must target psi")
            elif len(t.targets) != rank:
                raise ValueError(f"arity mismatch in {t}")
            elif any(not 0 <= x < n or x == final for x in t.targets):
                raise ValueError(f"bad target state in {t}")
            trans.add(t)
        self.transitions = tuple(sorted(trans))
        self._blocks = None

    @classmethod
    def from_rules(
        cls,
        alphabet: Mapping[str, int],
        initial: Iterable[str],
        rules: Iterable[tuple[str, str, Sequence[str]]],
        states: Sequence[str] | None = None,
        psi: str = "psi",
        name: str = "A",
    ) -> TreeAutomaton:
        """Build from named rules ``(source, symbol, targets)``; leaf rules use ``()``."""
        rules = list(rules)
        order: list[str] = list(states) if states is not None else []
        seen = set(order)
        for src, _, tgts in rules:
            for q in (src, *tgts):
                if q not in seen:
                    seen.add(q)
                    order.append(q)
        initial = list(initial)
        for q in initial:
            if q not in seen:
                seen.add(q)
                order.append(q)
        if psi in seen:
            raise ValueError(f"name {psi!r} is reserved for the leaf target")
        names = [psi, *order]
        idx = {q: i for i, q in enumerate(names)}
        trans = [
            Transition(idx[s], a, tuple(idx[x] for x in t) if t else (0,))
            for s, a, t in rules
        ]
        return cls(alphabet, names, [idx[q] for q in initial], trans, 0, name)

    @property
    def num_states(self) -> int:
        return len(self.state_names)

    def state(self, name: str) -> int:
        return self.state_names.index(name)

    def is_leaf_rule(self, t: Transition) -> bool:
        return self.alphabet[t.symbol] == 0

    def replace(self, **changes) -> TreeAutomaton:
        fields = dict(alphabet=self.alphabet, state_names=self.state_names,
                      initial=self.initial, transitions=self.transitions,
                      final=self.final, name=self.name, merged=self.merged)
        fields.update(changes)
        return TreeAutomaton(**fields)

    def blocks(self) -> list[Block]:
        """Per-symbol array views of the transitions (cached)."""
        if self._blocks is None:
            n = self.num_states
            groups: dict[str, list[int]] = defaultdict(list)
            for i, t in enumerate(self.transitions):
                groups[t.symbol].append(i)
            blocks = []
            for sym in self.alphabet:
                ids = groups.get(sym)
                if not ids:
                    continue
                ts = [self.transitions[i] for i in ids]
                src = np.array([t.source for t in ts], dtype=np.intp)
                tgt = np.array([t.targets for t in ts], dtype=np.intp)
                onehot = np.zeros((len(ts), n), dtype=np.float32)
                onehot[np.arange(len(ts)), src] = 1.0
                blocks.append(Block(sym, np.array(ids, dtype=np.intp), src, tgt, onehot))
            self._blocks = blocks
        return self._blocks

    def __eq__(self, other) -> bool:
        if not isinstance(other, TreeAutomaton):
            return NotImplemented
        return (dict(self.alphabet) == dict(other.alphabet)
                and self.state_names == other.state_names
                and self.initial == other.initial
                and self.transitions == other.transitions
                and self.final == other.final)

    def __hash__(self) -> int:
        return hash((self.state_names, self.initial, self.transitions))

    def __repr__(self) -> str:
        return (f"TreeAutomaton({self.name!r}, states={self.num_states}, "
                f"transitions={len(self.transitions)})")


def membership(A: TreeAutomaton, t: Tree) -> bool:
    """Bottom-up membership test."""
    return bool(states_accepting(A, t) & A.initial)


def states_accepting(A: TreeAutomaton, t: Tree) -> frozenset[int]:
    """The set of states q with t in the downward language of q."""
    by_key: dict[tuple[str, int], list[Transition]] = defaultdict(list)
    for tr in A.transitions:
        by_key[tr.symbol, tr.source].append(tr)
    by_symbol: dict[str, list[Transition]] = defaultdict(list)
    for tr in A.transitions:
        by_symbol[tr.symbol].append(tr)

    def run(node: Tree) -> frozenset[int]:
        rank = A.alphabet.get(node.symbol)
        if rank is None or rank != len(node.children):
            raise ValueError(f"tree {node} is not closed over the alphabet")
        if rank == 0:
            return frozenset(tr.source for tr in by_symbol[node.symbol])
        kids = [run(c) for c in node.children]
        return frozenset(
            tr.source for tr in by_symbol[node.symbol]
            if all(q in s for q, s in zip(tr.targets, kids))
        )

    return run(t)


def remove_useless(A: TreeAutomaton) -> TreeAutomaton:
    """Keep only states that are both productive and reachable (psi always stays)."""
    productive = {A.final}
    changed = True
    while changed:
        changed = False
        for t in A.transitions:
            if t.source not in productive and all(x in productive for x in t.targets):
                productive.add(t.source)
                changed = True
    live = [t for t in A.transitions
            if t.source in productive and all(x in productive for x in t.targets)]
    succ: dict[int, list[int]] = defaultdict(list)
    for t in live:
        succ[t.source].extend(t.targets)
    reachable = set()
    stack = [q for q in A.initial if q in productive]
    while stack:
        q = stack.pop()
        if q in reachable:
            continue
        reachable.add(q)
        stack.extend(succ[q])
    keep = sorted(reachable | {A.final})
    return restrict(A, keep)


def restrict(A: TreeAutomaton, keep: Sequence[int]) -> TreeAutomaton:
    """Sub-automaton on the given states, renumbered in increasing order."""
    keep = sorted(set(keep) | {A.final})
    new = {q: i for i, q in enumerate(keep)}
    trans = [Transition(new[t.source], t.symbol, tuple(new[x] for x in t.targets))
             for t in A.transitions
             if t.source in new and all(x in new for x in t.targets)]
    names = [A.state_names[q] for q in keep]
    merged = {k: v for k, v in A.merged.items() if k in names}
    return TreeAutomaton(A.alphabet, names, [new[q] for q in A.initial if q in new],
                         trans, new[A.final], A.name, merged)


class Stats(NamedTuple):
    states: int
    transitions: int
    leaf_rules: int
    avg_branching: float


def stats(A: TreeAutomaton) -> Stats:
    """Size statistics.

    ``states`` counts the declared states plus psi once some leaf rule uses
    it.  ``transitions`` counts all rules, leaf rules included.
    ``avg_branching`` is the mean number of rules per (state, symbol) pair
    that has at least one rule.
    """
    leaves = sum(1 for t in A.transitions if A.is_leaf_rule(t))
    states = A.num_states - 1 + (1 if leaves else 0)
    pairs = {(t.source, t.symbol) for t in A.transitions}
    avg = len(A.transitions) / len(pairs) if pairs else 0.0
    return Stats(states, len(A.transitions), leaves, avg)


def disjoint_union(A: TreeAutomaton, B: TreeAutomaton) -> tuple[TreeAutomaton, int]:
    """Union sharing psi; returns the automaton and the id offset of B's states."""
    offset = A.num_states
    bmap = [offset + q for q in range(B.num_states)]
    bmap[B.final] = A.final
    names = list(A.state_names) + [f"B.{s}" for s in B.state_names]
    trans = list(A.transitions) + [
        Transition(bmap[t.source], t.symbol, tuple(bmap[x] for x in t.targets))
        for t in B.transitions
    ]
    init = set(A.initial) | {bmap[q] for q in B.initial}
    return TreeAutomaton(A.alphabet.union(B.alphabet), names, init, trans, A.final), offset


def isomorphic(A: TreeAutomaton, B: TreeAutomaton) -> bool:
    """Equality up to a renaming of states (psi maps to psi)."""
    if (dict(A.alphabet) != dict(B.alphabet) or A.num_states != B.num_states
            or len(A.transitions) != len(B.transitions) or len(A.initial) != len(B.initial)):
        return False
    colours_a, colours_b = _refine_colours(A, B)
    if sorted(colours_a) != sorted(colours_b):
        return False
    target = set(B.transitions)
    out_a: dict[int, list[Transition]] = defaultdict(list)
    for t in A.transitions:
        out_a[t.source].append(t)
        for x in t.targets:
            out_a[x].append(t)
    order = sorted(range(A.num_states), key=lambda q: (colours_a.count(colours_a[q]), q))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(q: int) -> bool:
        for t in out_a[q]:
            if t.source in mapping and all(x in mapping for x in t.targets):
                img = Transition(mapping[t.source], t.symbol, tuple(mapping[x] for x in t.targets))
                if img not in target:
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        q = order[i]
        for r in range(B.num_states):
            if r in used or colours_b[r] != colours_a[q]:
                continue
            mapping[q] = r
            used.add(r)
            if consistent(q) and search(i + 1):
                return True
            del mapping[q]
            used.discard(r)
        return False

    return search(0)


def _refine_colours(A: TreeAutomaton, B: TreeAutomaton) -> tuple[list[int], list[int]]:
    def initial(M: TreeAutomaton) -> list:
        return [(q == M.final, q in M.initial) for q in range(M.num_states)]

    ca, cb = initial(A), initial(B)
    table: dict = {}
    for _ in range(max(A.num_states, 1)):
        def signature(M: TreeAutomaton, col: list) -> list:
            sig = [[col[q]] for q in range(M.num_states)]
            for t in M.transitions:
                sig[t.source].append(("out", t.symbol, tuple(col[x] for x in t.targets)))
                for i, x in enumerate(t.targets):
                    sig[x].append(("in", t.symbol, i, col[t.source]))
            return [tuple(sorted(map(repr, s))) for s in sig]

        sa, sb = signature(A, ca), signature(B, cb)
        table = {}
        for s in sorted(set(sa) | set(sb)):
            table[s] = len(table)
        na, nb = [table[s] for s in sa], [table[s] for s in sb]
        if len(set(na)) == len(set(ca)) and len(set(nb)) == len(set(cb)):
            ca, cb = na, nb
            break
        ca, cb = na, nb
    return ca, cb
