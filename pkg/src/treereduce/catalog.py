"""Which relation combinations are safe for pruning and for quotienting.

The tables are static.  Rows of the pruning table are the source relation
(with the relation inducing it, for upward ones), columns are the relation
compared on the children.  Lookahead relations are looked up under the
trace-inclusion row or column they under-approximate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

FAMILIES = ("identity", "dw-sim", "dw-la", "up-sim", "up-la", "downup")
DOWNWARD = ("identity", "dw-sim", "dw-la")


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    INVALID = "invalid"


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class RelationSpec:
    family: str
    strict: bool = False
    k: int = 1
    inducing: "RelationSpec | None" = None
    kernel: bool = False  # only meaningful as an inducing relation

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise CatalogError(f"unknown relation family {self.family!r}")
        upward = self.family in ("up-sim", "up-la")
        if upward and self.inducing is None:
            object.__setattr__(self, "inducing", RelationSpec("identity"))
        if not upward and self.inducing is not None:
            raise CatalogError(f"{self.family} takes no inducing relation")
        if self.inducing is not None and self.inducing.family not in (*DOWNWARD, "downup"):
            raise CatalogError("an upward relation must be induced by a downward one")
        if self.family == "identity" and self.strict:
            raise CatalogError("the identity has an empty strict part")
        if self.kernel and self.strict:
            raise CatalogError("a kernel is not strict")
        if self.k < 1:
            raise CatalogError("lookahead must be at least 1")

    def __str__(self) -> str:
        name = "id" if self.family == "identity" else self.family
        if self.family in ("dw-la", "up-la"):
            name += f":{self.k}"
        if self.strict:
            name = "strict-" + name
        if self.kernel:
            name = "eq-" + name
        if self.inducing is not None:
            name += f"({self.inducing})"
        return name

    @classmethod
    def parse(cls, text: str) -> RelationSpec:
        m = re.fullmatch(r"\s*(strict-|eq-)?([a-z-]+?)(?::(\d+))?\s*(?:\((.*)\))?\s*", text)
        if not m:
            raise CatalogError(f"cannot parse relation {text!r}")
        prefix, fam, k, inner = m.groups()
        fam = "identity" if fam == "id" else fam
        if fam not in FAMILIES:
            raise CatalogError(f"unknown relation family {fam!r}")
        if k is not None and fam not in ("dw-la", "up-la"):
            raise CatalogError(f"{fam} takes no lookahead")
        return cls(fam, strict=prefix == "strict-", k=int(k) if k else 1,
                   inducing=cls.parse(inner) if inner else None, kernel=prefix == "eq-")


# downward keys: id, dws (strict sim), dw, dwi< (strict incl), dwi
_DOWN_KEYS = ("id", "dws", "dw", "dwis", "dwi")


def _down_key(spec: RelationSpec) -> str:
    if spec.family == "identity":
        return "id"
    base = "dw" if spec.family == "dw-sim" else "dwi"
    return base + ("s" if spec.strict else "")


def _row(text: str) -> tuple[str, ...]:
    marks = {"y": Verdict.YES, "n": Verdict.NO, "-": Verdict.INVALID}
    return tuple(marks[c] for c in text.split())


# pruning table: (upward kind, inducing key) -> verdicts over _DOWN_KEYS
_GFP: dict[tuple[str, str], tuple[Verdict, ...]] = {
    ("id", "id"): _row("- y - y -"),
    ("ups", "id"): _row("y y y y y"),
    ("ups", "dws"): _row("n y n n n"),
    ("ups", "dw"): _row("n y n n n"),
    ("ups", "downup"): _row("y y y y y"),
    ("ups", "dwis"): _row("n n n n n"),
    ("ups", "dwi"): _row("n n n n n"),
    ("up", "id"): _row("- y - n -"),
    ("up", "dws"): _row("- y - n -"),
    ("up", "dw"): _row("- y - n -"),
    ("up", "dwis"): _row("- n - n -"),
    ("up", "dwi"): _row("- n - n -"),
    ("upis", "id"): _row("y y n n n"),
    ("upis", "dws"): _row("n y n n n"),
    ("upis", "dw"): _row("n y n n n"),
    ("upis", "dwis"): _row("n n n n n"),
    ("upis", "dwi"): _row("n n n n n"),
    ("upi", "id"): _row("- y - n -"),
    ("upi", "dws"): _row("- y - n -"),
    ("upi", "dw"): _row("- y - n -"),
    ("upi", "dwis"): _row("- n - n -"),
    ("upi", "dwi"): _row("- n - n -"),
}

# quotient table for upward preorders, by inducing key
_GFQ_UP = dict(zip(_DOWN_KEYS, _row("y - n - n")))


def _up_kind(spec: RelationSpec) -> str:
    base = "up" if spec.family == "up-sim" else "upi"
    return base + ("s" if spec.strict else "")


def _inducing_verdict(lookup, spec: RelationSpec) -> Verdict:
    """Resolve an inducing relation, handling kernels conservatively.

    Upward relations grow with their inducing relation, and the kernel of R
    lies between the identity and R.  A kernel is accepted when R itself is
    accepted and rejected otherwise (certainly so when the identity row
    already fails).
    """
    ind = spec.inducing
    if ind.family == "downup":
        return lookup("downup")
    if not ind.kernel:
        return lookup(_down_key(ind))
    upper = lookup(_down_key(ind))
    if upper is Verdict.INVALID:
        return Verdict.INVALID
    return Verdict.YES if upper is Verdict.YES else Verdict.NO


def gfp_allowed(u: RelationSpec, d: RelationSpec) -> Verdict:
    """Is pruning with P(u, d) language preserving for every automaton?"""
    if d.family not in DOWNWARD or d.kernel:
        raise CatalogError(f"{d} cannot compare children")
    col = _DOWN_KEYS.index(_down_key(d))
    if u.family == "identity":
        return _GFP["id", "id"][col]
    if u.family not in ("up-sim", "up-la") or u.kernel:
        raise CatalogError(f"{u} cannot compare rule sources")

    def lookup(key: str) -> Verdict:
        row = _GFP.get((_up_kind(u), key))
        if row is None:
            raise CatalogError(f"no catalog row for {u}")
        return row[col]

    return _inducing_verdict(lookup, u)


def gfq_allowed(r: RelationSpec) -> Verdict:
    """Is quotienting by the kernel of r language preserving?"""
    if r.strict or r.kernel:
        return Verdict.INVALID
    if r.family in DOWNWARD:
        return Verdict.YES
    if r.family == "downup":
        raise CatalogError("downup is only usable as an inducing relation")
    return _inducing_verdict(lambda key: _GFQ_UP.get(key, Verdict.NO), r)
