"""Reading and writing automata in the bottom-up Timbuk text format.

Timbuk rules are bottom-up, ``a(q1,q2) -> q``.  Reading reverses them into
top-down rules ``(q, a, (q1, q2))`` and the declared final states become the
initial states of the top-down automaton.
"""

from __future__ import annotations

import re

from .automaton import RankedAlphabet, Transition, TreeAutomaton


class TimbukError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(r"->|[(),:]|[^\s(),:#]+(?:-(?!>)[^\s(),:#]*)*")


def _tokens(text: str, lineno: int) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise TimbukError(f"unexpected character {text[pos]!r}", lineno, pos + 1)
        out.append((m.group(), pos + 1))
        pos = m.end()
    return out


def _is_name(tok: str) -> bool:
    return tok not in ("->", "(", ")", ",", ":")


def parse_timbuk(text: str) -> TreeAutomaton:
    alphabet: dict[str, int] | None = None
    name = None
    states: list[str] | None = None
    finals: list[str] | None = None
    in_rules = False
    rules: list[tuple[str, str, list[str], int]] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = _tokens(line, lineno)
        head, col = toks[0]
        if head == "Ops":
            if alphabet is not None:
                raise TimbukError("duplicate Ops header", lineno, col)
            alphabet = {}
            rest = toks[1:]
            if not rest:
                raise TimbukError("Ops needs at least one symbol", lineno, col)
            i = 0
            while i < len(rest):
                if (i + 2 >= len(rest) or not _is_name(rest[i][0]) or rest[i + 1][0] != ":"
                        or not rest[i + 2][0].isdigit()):
                    raise TimbukError("expected name:rank", lineno, rest[i][1])
                sym = rest[i][0]
                if sym in alphabet:
                    raise TimbukError(f"symbol {sym!r} declared twice", lineno, rest[i][1])
                alphabet[sym] = int(rest[i + 2][0])
                i += 3
            continue
        if head == "Automaton":
            if name is not None:
                raise TimbukError("duplicate Automaton header", lineno, col)
            if alphabet is None:
                raise TimbukError("Automaton before Ops", lineno, col)
            if len(toks) != 2 or not _is_name(toks[1][0]):
                raise TimbukError("expected a single automaton name", lineno, col)
            name = toks[1][0]
            continue
        if head == "States":
            if states is not None:
                raise TimbukError("duplicate States header", lineno, col)
            if name is None:
                raise TimbukError("States before Automaton", lineno, col)
            states = [q for q, _ in _name_list(toks[1:], lineno)]
            continue
        if head == "Final" and len(toks) > 1 and toks[1][0] == "States":
            if finals is not None:
                raise TimbukError("duplicate Final States header", lineno, col)
            if states is None:
                raise TimbukError("Final States before States", lineno, col)
            declared = _name_list(toks[2:], lineno)
            for f, fcol in declared:
                if f not in states:
                    raise TimbukError(f"undeclared state {f!r}", lineno, fcol)
            finals = [f for f, _ in declared]
            continue
        if head == "Transitions":
            if in_rules:
                raise TimbukError("duplicate Transitions header", lineno, col)
            if finals is None:
                raise TimbukError("Transitions before Final States", lineno, col)
            if len(toks) != 1:
                raise TimbukError("unexpected text after Transitions", lineno, toks[1][1])
            in_rules = True
            continue
        if not in_rules:
            raise TimbukError(f"unexpected {head!r}", lineno, col)
        rules.append(_parse_rule(toks, lineno, alphabet, set(states)))

    if not in_rules:
        raise TimbukError("missing Transitions section", len(text.splitlines()) + 1, 1)

    psi = "psi"
    while psi in states:
        psi = "_" + psi
    names = [psi, *states]
    idx = {q: i for i, q in enumerate(names)}
    trans = []
    for sym, kids, target, _ in rules:
        targets = tuple(idx[k] for k in kids) if kids else (0,)
        trans.append(Transition(idx[target], sym, targets))
    return TreeAutomaton(RankedAlphabet(alphabet), names, [idx[f] for f in finals],
                         trans, 0, name)


def _name_list(toks: list[tuple[str, int]], lineno: int) -> list[tuple[str, int]]:
    names: list[tuple[str, int]] = []
    i = 0
    while i < len(toks):
        tok, col = toks[i]
        if not _is_name(tok):
            raise TimbukError(f"unexpected {tok!r}", lineno, col)
        if any(tok == q for q, _ in names):
            raise TimbukError(f"state {tok!r} declared twice", lineno, col)
        names.append((tok, col))
        # tolerate the "name:arity" annotation some tools write for states
        if i + 1 < len(toks) and toks[i + 1][0] == ":":
            if i + 2 >= len(toks) or not toks[i + 2][0].isdigit():
                raise TimbukError("expected an arity after ':'", lineno, toks[i + 1][1])
            i += 3
        else:
            i += 1
    return names


def _parse_rule(toks, lineno, alphabet, states):
    pos = 0

    def expect(pred, what):
        nonlocal pos
        if pos >= len(toks):
            end = toks[-1][1] + len(toks[-1][0])
            raise TimbukError(f"expected {what}", lineno, end)
        tok, col = toks[pos]
        if not pred(tok):
            raise TimbukError(f"expected {what}, found {tok!r}", lineno, col)
        pos += 1
        return tok, col

    sym, scol = expect(_is_name, "a symbol")
    kids: list[tuple[str, int]] = []
    if pos < len(toks) and toks[pos][0] == "(":
        pos += 1
        if pos < len(toks) and toks[pos][0] == ")":
            pos += 1
        else:
            kids.append(expect(_is_name, "a state"))
            while pos < len(toks) and toks[pos][0] == ",":
                pos += 1
                kids.append(expect(_is_name, "a state"))
            expect(lambda t: t == ")", "')'")
    expect(lambda t: t == "->", "'->'")
    target, tcol = expect(_is_name, "a state")
    if pos != len(toks):
        raise TimbukError(f"unexpected {toks[pos][0]!r}", lineno, toks[pos][1])
    if sym not in alphabet:
        raise TimbukError(f"undeclared symbol {sym!r}", lineno, scol)
    if alphabet[sym] != len(kids):
        raise TimbukError(
            f"arity mismatch: {sym!r} has rank {alphabet[sym]} but {len(kids)} arguments",
            lineno, scol)
    for k, kcol in [*kids, (target, tcol)]:
        if k not in states:
            raise TimbukError(f"undeclared state {k!r}", lineno, kcol)
    return sym, [k for k, _ in kids], target, lineno


def serialize_timbuk(A: TreeAutomaton) -> str:
    """Deterministic text: states in declaration order, rules sorted."""
    names = A.state_names
    states = [names[q] for q in range(A.num_states) if q != A.final]
    lines = ["Ops " + " ".join(f"{a}:{r}" for a, r in A.alphabet.items()),
             f"Automaton {A.name}"]
    for rep in sorted(A.merged):
        members = A.merged[rep]
        if len(members) > 1:
            lines.append(f"# {rep} = {{{','.join(members)}}}")
    lines.append("States " + " ".join(states) if states else "States")
    finals = [names[q] for q in sorted(A.initial)]
    lines.append("Final States " + " ".join(finals) if finals else "Final States")
    lines.append("Transitions")
    rules = []
    for t in A.transitions:
        if A.is_leaf_rule(t):
            rules.append(f"{t.symbol} -> {names[t.source]}")
        else:
            args = ",".join(names[x] for x in t.targets)
            rules.append(f"{t.symbol}({args}) -> {names[t.source]}")
    lines.extend(sorted(rules))
    return "\n".join(lines) + "\n"
