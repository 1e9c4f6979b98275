import json

import numpy as np
import pytest
from hypothesis import given, settings

from treereduce.automaton import Transition, Tree, membership, stats
from treereduce.catalog import CatalogError, RelationSpec, Verdict, gfq_allowed
from treereduce.fixtures import gfq, micro, notation
from treereduce.oracle import exact_language_equiv
from treereduce.reduce import (ReductionReport, baseline, build_prune_order, compute_relation,
                               heavy, op_xy, prune, quotient, quotient_by)
from treereduce.relations import Relation, equivalence_kernel
from treereduce.simulation import downward_simulation, upward_simulation

from conftest import automata, tv

ID = RelationSpec("identity")


def test_micro_prune_order():
    A = micro()
    order = build_prune_order(A, ID, RelationSpec("dw-la", strict=True, k=2))
    names = A.state_names
    pairs = {(names[t.targets[0]], names[u.targets[0]]) for t, u in order.pairs()}
    assert pairs == {("x", "y")}
    B = prune(A, order)
    assert Transition(A.state("i"), "a", (A.state("x"),)) not in B.transitions
    assert exact_language_equiv(A, B)


def test_prune_order_is_strict_partial_order():
    A = tv(8, 3.0, 2)
    order = build_prune_order(A, RelationSpec("up-sim", strict=True), RelationSpec("dw-sim"))
    m = order.matrix
    assert not np.any(np.diag(m))
    assert not np.any(((m.astype(int) @ m.astype(int)) > 0) & ~m)


def test_rejected_pruning_needs_force():
    A = gfq()
    u = RelationSpec.parse("strict-up-sim(strict-dw-sim)")
    with pytest.raises(CatalogError):
        build_prune_order(A, u, ID)
    build_prune_order(A, u, ID, force=True)


def test_reflexive_pruning_is_refused_even_with_force():
    with pytest.raises(CatalogError):
        build_prune_order(gfq(), ID, RelationSpec("dw-sim"), force=True)


def test_prune_order_must_match_automaton():
    A = micro()
    order = build_prune_order(A, ID, RelationSpec("dw-sim", strict=True))
    with pytest.raises(ValueError):
        prune(notation(), order)


def test_quotient_merges_into_least_member():
    A = gfq()
    K = equivalence_kernel(downward_simulation(A))
    B = quotient(A, K)
    assert B.state_names == ("psi", "i", "p", "r")
    assert B.merged == {"p": ("p", "q"), "r": ("r", "s")}
    assert exact_language_equiv(A, B)


def test_quotient_by_unsafe_equivalence_changes_language():
    A = gfq()
    U = upward_simulation(A, equivalence_kernel(downward_simulation(A)))
    B = quotient(A, equivalence_kernel(U))
    result = exact_language_equiv(A, B)
    assert not result and str(result.witness) == "c(b,a)"
    spec = RelationSpec("up-sim", inducing=RelationSpec("dw-sim", kernel=True))
    assert gfq_allowed(spec) is Verdict.NO
    with pytest.raises(CatalogError):
        quotient_by(A, spec)


def test_quotient_preconditions():
    A = gfq()
    with pytest.raises(ValueError):
        quotient(A, Relation.full(A.num_states))  # merges psi
    with pytest.raises(ValueError):
        quotient(A, Relation.from_pairs(A.num_states, [(0, 1)]))


@settings(max_examples=40, deadline=None)
@given(automata(max_states=5, max_rules=10))
def test_pipelines_preserve_language(A):
    for B in (baseline(A, "ruq"), baseline(A, "ruqp"), heavy(A), heavy(A, 2, 3)):
        assert exact_language_equiv(A, B)


def test_heavy_reaches_fixpoint():
    A = tv(8, 2.0, 4)
    B = heavy(A)
    report = ReductionReport()
    C = heavy(B, report=report)
    assert C == B
    assert report.iterations == 1
    assert len(report.passes) == 11


def test_heavy_larger_lookahead_not_bigger():
    for seed in range(5):
        A = tv(10, 3.5, seed)
        assert stats(heavy(A, 2, 4)).states <= stats(heavy(A)).states


def test_op_xy_report_records_every_pass():
    report = ReductionReport()
    op_xy(tv(6, 2.0, 1), 2, 3, report)
    data = json.loads(report.to_json())
    assert len(data["passes"]) == 11
    first = data["passes"][0]
    assert set(first) == {"pass", "states_before", "states_after", "transitions_before",
                          "transitions_after", "millis"}
    for prev, cur in zip(data["passes"], data["passes"][1:]):
        assert cur["states_before"] == prev["states_after"]


def test_baseline_ordering_and_unknown_method():
    A = tv(10, 4.0, 9)
    sizes = [stats(baseline(A, m)).states for m in ("ru", "ruq", "ruqp")]
    assert sizes == sorted(sizes, reverse=True)
    with pytest.raises(ValueError):
        baseline(A, "heavy")


def test_compute_relation_refuses_downup():
    with pytest.raises(CatalogError):
        compute_relation(gfq(), RelationSpec("up-sim", inducing=RelationSpec("downup")))


def test_notation_example_is_already_minimal():
    A = notation()
    B = heavy(A, 2, 4)
    assert exact_language_equiv(A, B)
    assert membership(B, Tree.parse("b(e,c(d))"))
