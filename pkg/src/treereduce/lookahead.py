"""Lookahead simulations: Spoiler reveals k levels before Duplicator answers.

Rather than testing pairs one by one, a round computes whole rows at once.
For a Spoiler move tree (downward) or path (upward) we track the *profile*:
the set of Duplicator states that can answer it.  A pair (q, r) survives a
round iff r lies in the profile of every Spoiler move from q.  Profiles are
monotone in the profiles of sub-moves, so for each (state, remaining depth)
only the minimal profiles matter; those antichains are the per-round memo.
Rounds repeat until the relation stops shrinking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import TreeAutomaton
from .relations import Relation, transitive_closure

MAX_LOOKAHEAD = 16
_CHUNK_CELLS = 1 << 23


@dataclass(frozen=True)
class GameConfig:
    k: int
    direction: str  # "down" or "up"
    inducing: Relation | None = None
    max_k: int = MAX_LOOKAHEAD

    def __post_init__(self):
        if self.direction not in ("down", "up"):
            raise ValueError(f"unknown direction {self.direction!r}")
        if not 1 <= self.k <= self.max_k:
            raise ValueError(f"lookahead k={self.k} outside 1..{self.max_k}")
        if self.direction == "up" and self.inducing is None:
            raise ValueError("upward lookahead needs an inducing relation")


def solve(A: TreeAutomaton, config: GameConfig) -> Relation:
    if config.direction == "down":
        return lookahead_dw(A, config.k, max_k=config.max_k)
    return lookahead_up(A, config.k, config.inducing, max_k=config.max_k)


def _check_k(k: int, max_k: int) -> None:
    if not 1 <= k <= max_k:
        raise ValueError(f"lookahead k={k} outside 1..{max_k}")


def _minimal(rows: np.ndarray) -> np.ndarray:
    """Drop duplicate and non-minimal rows (as sets)."""
    if len(rows) <= 1:
        return rows
    rows = np.unique(rows, axis=0)
    if len(rows) == 1:
        return rows
    f = rows.astype(np.float32)
    # covers[i, j]: rows[i] is a subset of rows[j]
    covers = (f @ (~rows).T.astype(np.float32)) == 0
    np.fill_diagonal(covers, False)
    return rows[~covers.any(axis=0)]


def _group(rows: np.ndarray, owner: np.ndarray, n: int) -> list[list[np.ndarray]]:
    out: list[list[np.ndarray]] = [[] for _ in range(n)]
    if len(rows):
        order = np.argsort(owner, kind="stable")
        owner = owner[order]
        rows = rows[order]
        cuts = np.flatnonzero(np.diff(owner)) + 1
        for part, idx in zip(np.split(rows, cuts), np.split(owner, cuts)):
            out[int(idx[0])].append(part)
    return out


class _Profiles:
    """Profiles of all states concatenated, with offsets and counts."""

    def __init__(self, per_state: list[np.ndarray]):
        self.count = np.array([len(p) for p in per_state], dtype=np.intp)
        self.offset = np.concatenate(([0], np.cumsum(self.count)[:-1])).astype(np.intp)
        self.rows = np.concatenate(per_state, axis=0)


def _chunks(total: int, width: int):
    step = max(1, _CHUNK_CELLS // max(width, 1))
    for lo in range(0, total, step):
        yield lo, min(total, lo + step)


# ---------------------------------------------------------------- downward

def _dw_expand(blk, prof: _Profiles, n: int):
    """Profiles (without the stop option) of every Spoiler combination rooted
    at a rule of ``blk``; yields (owner_state, profile_rows) in chunks."""
    T, m = blk.tgt.shape
    counts = prof.count[blk.tgt]  # (T, m)
    combos = counts.prod(axis=1)
    total = int(combos.sum())
    if total == 0:
        return
    rule = np.repeat(np.arange(T), combos)
    local = np.arange(total) - np.repeat(np.cumsum(combos) - combos, combos)
    stride = np.ones((T, m), dtype=np.intp)
    for i in range(m - 2, -1, -1):
        stride[:, i] = stride[:, i + 1] * counts[:, i + 1]
    idx = [prof.offset[blk.tgt[rule, i]] + (local // stride[rule, i]) % counts[rule, i]
           for i in range(m)]
    for lo, hi in _chunks(total, T):
        ok = np.ones((hi - lo, T), dtype=bool)
        for i in range(m):
            ok &= prof.rows[np.ix_(idx[i][lo:hi], blk.tgt[:, i])]
        rows = (ok.astype(np.float32) @ blk.src_onehot) > 0
        yield blk.src[rule[lo:hi]], rows


def _dw_round(A: TreeAutomaton, L: np.ndarray, k: int) -> np.ndarray:
    n = A.num_states
    blocks = A.blocks()
    has_moves = np.zeros(n, dtype=bool)
    for blk in blocks:
        has_moves[blk.src] = True
    level = [L[s][None, :] for s in range(n)]
    for _ in range(1, k):
        prof = _Profiles(level)
        collected: list[list[np.ndarray]] = [[] for _ in range(n)]
        for blk in blocks:
            for owner, rows in _dw_expand(blk, prof, n):
                rows |= L[owner]
                for s, parts in enumerate(_group(rows, owner, n)):
                    collected[s].extend(parts)
        level = [
            _minimal(np.concatenate(collected[s])) if has_moves[s] else L[s][None, :]
            for s in range(n)
        ]
    prof = _Profiles(level)
    bad = np.zeros((n, n), dtype=np.float32)
    for blk in blocks:
        for owner, rows in _dw_expand(blk, prof, n):
            onehot = np.zeros((len(owner), n), dtype=np.float32)
            onehot[np.arange(len(owner)), owner] = 1.0
            bad += onehot.T @ (~rows).astype(np.float32)
    return L & ~(bad > 0)


def lookahead_dw(A: TreeAutomaton, k: int, max_k: int = MAX_LOOKAHEAD) -> Relation:
    """Maximal k-lookahead downward simulation (not closed transitively)."""
    _check_k(k, max_k)
    n = A.num_states
    L = np.ones((n, n), dtype=bool)
    L[A.final, :] = False
    L[A.final, A.final] = True
    while True:
        nxt = _dw_round(A, L, k)
        if np.array_equal(nxt, L):
            return Relation(L)
        L = nxt


def lookahead_dw_closed(A: TreeAutomaton, k: int, max_k: int = MAX_LOOKAHEAD) -> Relation:
    return transitive_closure(lookahead_dw(A, k, max_k))


# ------------------------------------------------------------------ upward

class _UpMoves:
    """For each (block, position): side conditions and target one-hots."""

    def __init__(self, A: TreeAutomaton, side_rel: np.ndarray):
        n = A.num_states
        self.entries = []
        self.has_moves = np.zeros(n, dtype=bool)
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
                self.entries.append((blk.src, blk.tgt[:, i], side, onehot))
                self.has_moves[blk.tgt[:, i]] = True

    def expand(self, prof: _Profiles):
        """Profiles of every Spoiler path starting with one upward move;
        yields (bottom_state, rows) in chunks."""
        for src, child, side, onehot in self.entries:
            T = len(src)
            counts = prof.count[src]
            total = int(counts.sum())
            if total == 0:
                continue
            rule = np.repeat(np.arange(T), counts)
            local = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
            widx = prof.offset[src[rule]] + local
            for lo, hi in _chunks(total, T):
                r = rule[lo:hi]
                ok = side[r] & prof.rows[np.ix_(widx[lo:hi], src)]
                rows = (ok.astype(np.float32) @ onehot) > 0
                yield child[r], rows


def _up_round(A: TreeAutomaton, L: np.ndarray, k: int, moves: _UpMoves,
              ipres: np.ndarray) -> np.ndarray:
    n = A.num_states
    stop = L & ipres
    level = [stop[s][None, :] for s in range(n)]
    for _ in range(1, k):
        prof = _Profiles(level)
        collected: list[list[np.ndarray]] = [[] for _ in range(n)]
        for owner, rows in moves.expand(prof):
            rows = ipres[owner] & (L[owner] | rows)
            for s, parts in enumerate(_group(rows, owner, n)):
                collected[s].extend(parts)
        level = [
            _minimal(np.concatenate(collected[s])) if moves.has_moves[s] else stop[s][None, :]
            for s in range(n)
        ]
    prof = _Profiles(level)
    bad = np.zeros((n, n), dtype=np.float32)
    for owner, rows in moves.expand(prof):
        rows &= ipres[owner]
        onehot = np.zeros((len(owner), n), dtype=np.float32)
        onehot[np.arange(len(owner)), owner] = 1.0
        bad += onehot.T @ (~rows).astype(np.float32)
    return L & ~(bad > 0)


def lookahead_up(A: TreeAutomaton, k: int, inducing: Relation,
                 max_k: int = MAX_LOOKAHEAD) -> Relation:
    """Maximal k-lookahead upward simulation induced by ``inducing`` (closed first)."""
    _check_k(k, max_k)
    n = A.num_states
    if inducing.size != n:
        raise ValueError(f"inducing relation has size {inducing.size}, expected {n}")
    moves = _UpMoves(A, transitive_closure(inducing).bits)
    in_init = np.zeros(n, dtype=bool)
    in_init[list(A.initial)] = True
    # ipres[s]: Duplicator states allowed opposite s by initial-state preservation
    ipres = np.ones((n, n), dtype=bool)
    ipres[in_init] = in_init
    L = ipres.copy()
    L[A.final, :] = False
    L[A.final, A.final] = True
    while True:
        nxt = _up_round(A, L, k, moves, ipres)
        if np.array_equal(nxt, L):
            return Relation(L)
        L = nxt


def lookahead_up_closed(A: TreeAutomaton, k: int, inducing: Relation,
                        max_k: int = MAX_LOOKAHEAD) -> Relation:
    return transitive_closure(lookahead_up(A, k, inducing, max_k))
