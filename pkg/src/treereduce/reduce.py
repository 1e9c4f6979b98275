"""Pruning, quotienting and the reduction pipelines built from them."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .automaton import Transition, TreeAutomaton, remove_useless, stats
from .catalog import CatalogError, RelationSpec, Verdict, gfp_allowed, gfq_allowed
from .lookahead import lookahead_dw_closed, lookahead_up_closed
from .relations import Relation, equivalence_kernel, strict_part
from .simulation import downward_simulation, upward_simulation


def compute_relation(A: TreeAutomaton, spec: RelationSpec) -> Relation:
    """The non-strict relation named by ``spec`` (strictness is applied by callers)."""
    n = A.num_states
    fam = spec.family
    if fam == "identity":
        return Relation.identity(n)
    if fam == "dw-sim":
        return downward_simulation(A)
    if fam == "dw-la":
        return lookahead_dw_closed(A, spec.k)
    if fam == "downup":
        raise CatalogError("a downup relation cannot be verified; use the identity")
    ind = inducing_relation(A, spec.inducing)
    if fam == "up-sim":
        return upward_simulation(A, ind)
    return lookahead_up_closed(A, spec.k, ind)


def inducing_relation(A: TreeAutomaton, spec: RelationSpec) -> Relation:
    R = compute_relation(A, RelationSpec(spec.family, k=spec.k, inducing=spec.inducing))
    if spec.kernel:
        return equivalence_kernel(R)
    return strict_part(R) if spec.strict else R


@dataclass(frozen=True)
class PruneOrder:
    """Strict partial order on the rules of an automaton: ``matrix[i, j]``
    means rule i is dominated by rule j and may be dropped."""

    transitions: tuple[Transition, ...]
    matrix: np.ndarray

    def pairs(self) -> list[tuple[Transition, Transition]]:
        return [(self.transitions[i], self.transitions[j]) for i, j in zip(*np.nonzero(self.matrix))]


def build_prune_order(A: TreeAutomaton, u: RelationSpec, d: RelationSpec,
                      force: bool = False, u_rel: Relation | None = None,
                      d_rel: Relation | None = None) -> PruneOrder:
    """P(u, d): same symbol, sources related by u, children by the lifting of d.

    A strict d uses the strict lifting (all positions related, one strictly);
    otherwise positions are related pointwise.  Relations are computed from
    the specs unless supplied.
    """
    verdict = gfp_allowed(u, d)
    if verdict is Verdict.INVALID:
        raise CatalogError(f"P({u}, {d}) is not a strict order")
    if verdict is Verdict.NO and not force:
        raise CatalogError(f"pruning with P({u}, {d}) may change the language")
    U = u_rel if u_rel is not None else compute_relation(A, u)
    D = d_rel if d_rel is not None else compute_relation(A, d)
    ub = strict_part(U).bits if u.strict else U.bits
    db = D.bits
    T = len(A.transitions)
    matrix = np.zeros((T, T), dtype=bool)
    for blk in A.blocks():
        m = blk.tgt.shape[1]
        rel = ub[np.ix_(blk.src, blk.src)].copy()
        strictly = np.zeros_like(rel)
        for i in range(m):
            col = blk.tgt[:, i]
            rel &= db[np.ix_(col, col)]
            if d.strict:
                strictly |= ~db[np.ix_(col, col)].T
        if d.strict:
            rel &= strictly
        matrix[np.ix_(blk.ids, blk.ids)] = rel
    _check_strict_order(matrix, A)
    matrix.flags.writeable = False
    return PruneOrder(A.transitions, matrix)


def _check_strict_order(matrix: np.ndarray, A: TreeAutomaton) -> None:
    if np.any(np.diag(matrix)):
        raise CatalogError("pruning relation is not irreflexive")
    for blk in A.blocks():
        sub = matrix[np.ix_(blk.ids, blk.ids)].astype(np.float32)
        if np.any(((sub @ sub) > 0) & (sub == 0)):
            raise CatalogError("pruning relation is not transitive")


def prune(A: TreeAutomaton, order: PruneOrder) -> TreeAutomaton:
    """Drop every rule dominated by some other rule (one simultaneous pass)."""
    if order.transitions != A.transitions:
        raise ValueError("prune order belongs to a different automaton")
    dominated = order.matrix.any(axis=1)
    kept = [t for t, gone in zip(A.transitions, dominated) if not gone]
    return A.replace(transitions=kept)


def quotient(A: TreeAutomaton, equiv: Relation) -> TreeAutomaton:
    """Merge each class into its least member; psi must be alone in its class."""
    if equiv.size != A.num_states or not equiv.is_equivalence():
        raise ValueError("quotient needs an equivalence over the automaton's states")
    classes = equiv.classes()
    rep = [0] * A.num_states
    for cls in classes:
        if A.final in cls and len(cls) > 1:
            raise ValueError("psi cannot be merged with another state")
        for q in cls:
            rep[q] = cls[0]
    new_id = {cls[0]: i for i, cls in enumerate(classes)}
    img = [new_id[rep[q]] for q in range(A.num_states)]
    names = [A.state_names[cls[0]] for cls in classes]
    merged = {}
    for cls in classes:
        members: list[str] = []
        for q in cls:
            members.extend(A.merged.get(A.state_names[q], (A.state_names[q],)))
        if len(members) > 1:
            merged[A.state_names[cls[0]]] = tuple(sorted(members))
    trans = [Transition(img[t.source], t.symbol, tuple(img[x] for x in t.targets))
             for t in A.transitions]
    return TreeAutomaton(A.alphabet, names, [img[q] for q in A.initial], trans,
                         img[A.final], A.name, merged)


@dataclass
class PassRecord:
    name: str
    states_before: int
    states_after: int
    transitions_before: int
    transitions_after: int
    millis: float

    def to_dict(self) -> dict:
        return {"pass": self.name, "states_before": self.states_before,
                "states_after": self.states_after,
                "transitions_before": self.transitions_before,
                "transitions_after": self.transitions_after,
                "millis": round(self.millis, 3)}


@dataclass
class ReductionReport:
    passes: list[PassRecord] = field(default_factory=list)
    iterations: int = 0
    unsound: bool = False

    def to_json(self) -> str:
        return json.dumps({"passes": [p.to_dict() for p in self.passes],
                           "iterations": self.iterations,
                           "unsound": self.unsound}, indent=2)


def _run(report: ReductionReport | None, name: str, step, A: TreeAutomaton) -> TreeAutomaton:
    t0 = time.perf_counter()
    B = step(A)
    if report is not None:
        sa, sb = stats(A), stats(B)
        report.passes.append(PassRecord(name, sa.states, sb.states, sa.transitions,
                                        sb.transitions, (time.perf_counter() - t0) * 1000.0))
    return B


def quotient_by(A: TreeAutomaton, spec: RelationSpec, rel: Relation | None = None) -> TreeAutomaton:
    if gfq_allowed(spec) is not Verdict.YES:
        raise CatalogError(f"quotienting by {spec} may change the language")
    R = rel if rel is not None else compute_relation(A, spec)
    return quotient(A, equivalence_kernel(R))


def prune_by(A: TreeAutomaton, u: RelationSpec, d: RelationSpec, force: bool = False) -> TreeAutomaton:
    return prune(A, build_prune_order(A, u, d, force=force))


def _dw(x: int, strict: bool = False) -> RelationSpec:
    return RelationSpec("dw-la", strict=strict, k=x)


def _up(y: int, strict: bool = False, inducing: RelationSpec | None = None) -> RelationSpec:
    return RelationSpec("up-la", strict=strict, k=y, inducing=inducing or RelationSpec("identity"))


def op_xy(A: TreeAutomaton, x: int, y: int, report: ReductionReport | None = None) -> TreeAutomaton:
    """One round of the combined pipeline with lookaheads x (down) and y (up)."""
    ident = RelationSpec("identity")
    dws = RelationSpec("dw-sim")
    steps = [
        ("RU", remove_useless),
        (f"Q({_dw(x)})", lambda B: quotient_by(B, _dw(x))),
        (f"P(id,{_dw(x, True)})", lambda B: prune_by(B, ident, _dw(x, True))),
        ("RU", remove_useless),
        (f"Q({_up(y)})", lambda B: quotient_by(B, _up(y))),
        (f"P({_up(y, True)},id)", lambda B: prune_by(B, _up(y, True), ident)),
        (f"P(strict-up-sim(id),{_dw(x)})",
         lambda B: prune_by(B, RelationSpec("up-sim", strict=True), _dw(x))),
        ("RU", remove_useless),
        (f"Q({_up(y)})", lambda B: quotient_by(B, _up(y))),
        (f"P({_up(y, inducing=dws)},strict-dw-sim)",
         lambda B: prune_by(B, _up(y, inducing=dws), RelationSpec("dw-sim", strict=True))),
        ("RU", remove_useless),
    ]
    for name, step in steps:
        A = _run(report, name, step, A)
    return A


def _size(A: TreeAutomaton) -> tuple[int, int]:
    return A.num_states, len(A.transitions)


def heavy(A: TreeAutomaton, x: int = 1, y: int = 1,
          report: ReductionReport | None = None) -> TreeAutomaton:
    """Repeat until the number of states and rules stops changing.

    Heavy(1,1) repeats Op(1,1); larger lookaheads repeat Heavy(1,1) followed
    by Op(x,y).
    """
    while True:
        before = _size(A)
        if (x, y) == (1, 1):
            A = op_xy(A, 1, 1, report)
        else:
            A = heavy(A, 1, 1, report)
            A = op_xy(A, x, y, report)
        if report is not None:
            report.iterations += 1
        if _size(A) == before:
            return A


def baseline(A: TreeAutomaton, method: str, report: ReductionReport | None = None) -> TreeAutomaton:
    """``ru``: remove useless states; ``ruq``: then quotient by dw-sim;
    ``ruqp``: then prune with P(id, strict dw-sim)."""
    if method not in ("ru", "ruq", "ruqp"):
        raise ValueError(f"unknown baseline {method!r}")
    A = _run(report, "RU", remove_useless, A)
    if method in ("ruq", "ruqp"):
        A = _run(report, "Q(dw-sim)", lambda B: quotient_by(B, RelationSpec("dw-sim")), A)
    if method == "ruqp":
        A = _run(report, "P(id,strict-dw-sim)",
                 lambda B: prune_by(B, RelationSpec("identity"), RelationSpec("dw-sim", strict=True)), A)
        A = _run(report, "RU", remove_useless, A)
    return A
