"""Reduction of nondeterministic tree automata by simulation-based pruning and quotienting."""

from .automaton import RankedAlphabet, Stats, Transition, Tree, TreeAutomaton, membership, remove_useless, stats
from .reduce import ReductionReport, baseline, heavy, op_xy
from .relations import Relation
from .timbuk import TimbukError, parse_timbuk, serialize_timbuk

__all__ = [
    "RankedAlphabet", "ReductionReport", "Relation", "Stats", "TimbukError", "Transition", "Tree", "TreeAutomaton",
    "baseline", "heavy", "membership", "op_xy", "parse_timbuk", "remove_useless", "serialize_timbuk", "stats",
]
