"""Binary relations over automaton states as dense boolean matrices."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np


class Relation:
    """Immutable relation on ``{0..n-1}``; ``(p, q) in R`` means p is below q."""

    __slots__ = ("_bits",)

    def __init__(self, bits):
        arr = np.array(bits, dtype=bool, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("relation matrix must be square")
        arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def identity(cls, n: int) -> Relation:
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def empty(cls, n: int) -> Relation:
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def full(cls, n: int) -> Relation:
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Relation:
        arr = np.zeros((n, n), dtype=bool)
        for p, q in pairs:
            arr[p, q] = True
        return cls(arr)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def size(self) -> int:
        return self._bits.shape[0]

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return bool(self._bits[pair[0], pair[1]])

    def __eq__(self, other) -> bool:
        return isinstance(other, Relation) and np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def __le__(self, other: Relation) -> bool:
        return not np.any(self._bits & ~other._bits)

    def __and__(self, other: Relation) -> Relation:
        return Relation(self._bits & other._bits)

    def __or__(self, other: Relation) -> Relation:
        return Relation(self._bits | other._bits)

    def __sub__(self, other: Relation) -> Relation:
        return Relation(self._bits & ~other._bits)

    def __len__(self) -> int:
        return int(self._bits.sum())

    def __repr__(self) -> str:
        return f"Relation(n={self.size}, pairs={len(self)})"

    def inverse(self) -> Relation:
        return Relation(self._bits.T)

    def compose(self, other: Relation) -> Relation:
        """``x (R;S) y`` iff some m has ``x R m`` and ``m S y``."""
        return Relation(_boolmul(self._bits, other._bits))

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(p), int(q)) for p, q in zip(*np.nonzero(self._bits))]

    def is_reflexive(self) -> bool:
        return bool(np.all(np.diag(self._bits)))

    def is_transitive(self) -> bool:
        return not np.any(_boolmul(self._bits, self._bits) & ~self._bits)

    def is_preorder(self) -> bool:
        return self.is_reflexive() and self.is_transitive()

    def is_equivalence(self) -> bool:
        return self.is_preorder() and np.array_equal(self._bits, self._bits.T)

    def classes(self) -> list[tuple[int, ...]]:
        """Classes of an equivalence, each sorted, ordered by least member."""
        if not self.is_equivalence():
            raise ValueError("relation is not an equivalence")
        seen: set[int] = set()
        out = []
        for p in range(self.size):
            if p not in seen:
                cls = tuple(int(q) for q in np.nonzero(self._bits[p])[0])
                seen.update(cls)
                out.append(cls)
        return out

    def dump(self, names: Sequence[str] | None = None) -> str:
        """Sorted ``p <= q`` lines, one per pair."""
        label = (lambda q: names[q]) if names is not None else str
        lines = sorted(f"{label(p)} <= {label(q)}" for p, q in self.pairs())
        return "\n".join(lines) + ("\n" if lines else "")


def _boolmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0


def transitive_closure(R: Relation) -> Relation:
    """Least transitive relation containing R, by repeated squaring."""
    bits = R.bits.copy()
    while True:
        nxt = bits | _boolmul(bits, bits)
        if np.array_equal(nxt, bits):
            return Relation(bits)
        bits = nxt


def reflexive_closure(R: Relation) -> Relation:
    return Relation(R.bits | np.eye(R.size, dtype=bool))


def strict_part(R: Relation) -> Relation:
    """``R minus R^-1``; R must be transitive so the result is a strict order."""
    if not R.is_transitive():
        raise ValueError("strict part needs a transitive relation")
    return Relation(R.bits & ~R.bits.T)


def equivalence_kernel(R: Relation) -> Relation:
    if not R.is_preorder():
        raise ValueError("equivalence kernel needs a preorder")
    return Relation(R.bits & R.bits.T)


def lift_nonstrict(R: Relation, u: Sequence[int], v: Sequence[int]) -> bool:
    """Pointwise lifting to equal-length tuples."""
    if len(u) != len(v):
        raise ValueError("tuples must have equal length")
    return all(R.bits[a, b] for a, b in zip(u, v))


def lift_strict(R: Relation, u: Sequence[int], v: Sequence[int]) -> bool:
    """All positions related by the preorder R and at least one strictly."""
    if len(u) != len(v):
        raise ValueError("tuples must have equal length")
    bits = R.bits
    return (all(bits[a, b] for a, b in zip(u, v))
            and any(bits[a, b] and not bits[b, a] for a, b in zip(u, v)))
