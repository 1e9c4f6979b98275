"""Maximal downward and upward simulations by greatest-fixpoint refinement.

Both start from the largest relation allowed by the state clauses and
repeatedly delete pairs whose transition obligations cannot be met.  Each
round is a handful of matrix products over the per-symbol transition
blocks, so a round costs O(T^2 * rank + T^2 * n) for T rules per symbol.
"""

from __future__ import annotations

import numpy as np

from .automaton import TreeAutomaton
from .relations import Relation, transitive_closure


def downward_simulation(A: TreeAutomaton) -> Relation:
    n = A.num_states
    psi = A.final
    R = np.ones((n, n), dtype=bool)
    R[psi, :] = False
    R[psi, psi] = True
    blocks = A.blocks()
    while True:
        bad = np.zeros((n, n), dtype=bool)
        for blk in blocks:
            # match[t, u]: the children of u cover the children of t
            match = np.ones((len(blk.src), len(blk.src)), dtype=bool)
            for i in range(blk.tgt.shape[1]):
                col = blk.tgt[:, i]
                match &= R[np.ix_(col, col)]
            answered = (match.astype(np.float32) @ blk.src_onehot) > 0
            bad |= (blk.src_onehot.T @ (~answered).astype(np.float32)) > 0
        nxt = R & ~bad
        if np.array_equal(nxt, R):
            return Relation(R)
        R = nxt


def upward_simulation(A: TreeAutomaton, inducing: Relation) -> Relation:
    """Maximal upward simulation induced by ``inducing`` (closed transitively first)."""
    n = A.num_states
    if inducing.size != n:
        raise ValueError(f"inducing relation has size {inducing.size}, expected {n}")
    side_rel = transitive_closure(inducing).bits
    psi = A.final
    U = np.ones((n, n), dtype=bool)
    U[psi, :] = False
    U[psi, psi] = True
    not_initial = np.ones(n, dtype=bool)
    not_initial[list(A.initial)] = False
    for q in A.initial:
        U[q, not_initial] = False

    # one entry per (block, position): side condition and target one-hot
    moves = []
    for blk in A.blocks():
        T, m = blk.tgt.shape
        for i in range(m):
            side = np.ones((T, T), dtype=bool)
            for j in range(m):
                if j != i:
                    col = blk.tgt[:, j]
                    side &= side_rel[np.ix_(col, col)]
            onehot = np.zeros((T, n), dtype=np.float32)
            onehot[np.arange(T), blk.tgt[:, i]] = 1.0
            moves.append((blk.src, side, onehot))

    while True:
        bad = np.zeros((n, n), dtype=bool)
        for src, side, onehot in moves:
            ok = side & U[np.ix_(src, src)]
            answered = (ok.astype(np.float32) @ onehot) > 0
            bad |= (onehot.T @ (~answered).astype(np.float32)) > 0
        nxt = U & ~bad
        if np.array_equal(nxt, U):
            return Relation(U)
        U = nxt


def combined_preorder(A: TreeAutomaton, D: Relation, U: Relation) -> Relation:
    """The preorder ``D (+) U^-1``.

    ``x W y`` holds iff some m has ``x D m`` and ``y U m``, and the same
    composite relates x to every z with ``y D z``.
    """
    n = A.num_states
    if D.size != n or U.size != n:
        raise ValueError("relation sizes do not match the automaton")
    d = D.bits.astype(np.float32)
    comp = (d @ U.bits.T.astype(np.float32)) > 0
    missed = ((~comp).astype(np.float32) @ d.T) > 0
    return Relation(comp & ~missed)
