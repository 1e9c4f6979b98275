"""Random automata in the Tabakov-Vardi style and the reduction benchmark."""

from __future__ import annotations

import csv
import io
import math
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .automaton import Transition, TreeAutomaton, stats

LEAF_SYMBOL = "z"
CSV_COLUMNS = ("td", "method", "mean_states", "mean_transitions", "mean_ms", "samples")


@dataclass(frozen=True)
class TvParams:
    n: int
    s: int
    td: float
    ad: float
    seed: int = 0
    roots: int = 1

    def __post_init__(self):
        if self.n < 1 or self.s < 0:
            raise ValueError("need n >= 1 and s >= 0")
        if self.td < 0 or self.ad < 0 or self.ad > 1:
            raise ValueError("need td >= 0 and 0 <= ad <= 1")
        if not 1 <= self.roots <= self.n:
            raise ValueError("roots must lie in 1..n")
        if round_half_up(self.n * self.td) > self.n ** 3:
            raise ValueError("transition density too high for n")


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def binary_symbols(s: int) -> list[str]:
    return [f"a{i}" for i in range(s)]


def generate(p: TvParams) -> TreeAutomaton:
    """States q0..q{n-1}; per rank-2 symbol round(n*td) distinct rules, one
    rank-0 symbol with round(n*ad) leaf rules, ``roots`` initial states."""
    rng = np.random.Generator(np.random.PCG64(p.seed))
    n = p.n
    per_symbol = round_half_up(n * p.td)
    trans = []
    for sym in binary_symbols(p.s):
        for code in rng.choice(n ** 3, size=per_symbol, replace=False):
            src, rest = divmod(int(code), n * n)
            left, right = divmod(rest, n)
            trans.append(Transition(src + 1, sym, (left + 1, right + 1)))
    for q in rng.choice(n, size=round_half_up(n * p.ad), replace=False):
        trans.append(Transition(int(q) + 1, LEAF_SYMBOL, (0,)))
    roots = [int(q) + 1 for q in rng.choice(n, size=p.roots, replace=False)]
    alphabet = {sym: 2 for sym in binary_symbols(p.s)}
    alphabet[LEAF_SYMBOL] = 0
    names = ["psi"] + [f"q{i}" for i in range(n)]
    return TreeAutomaton(alphabet, names, roots, trans, 0, "tv")


def instance_seed(seed: int, grid_index: int, sample_index: int) -> int:
    """Independent per-instance seed derived from the run seed."""
    ss = np.random.SeedSequence([seed, grid_index, sample_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def parse_grid(text: str) -> list[float]:
    """``td=1.0:6.0:0.5`` (inclusive range) or ``td=1,2,3``."""
    key, _, spec = text.partition("=")
    if key.strip() != "td" or not spec:
        raise ValueError(f"grid must look like td=START:STOP:STEP, got {text!r}")
    if ":" in spec:
        start, stop, step = (float(x) for x in spec.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    return [float(x) for x in spec.split(",")]


def method_runner(method: str) -> Callable[[TreeAutomaton], TreeAutomaton]:
    from . import reduce

    if method in ("ru", "ruq", "ruqp"):
        return lambda A: reduce.baseline(A, method)
    parts = method.split(":")
    if parts[0] == "heavy" and len(parts) in (1, 3):
        x, y = (int(parts[1]), int(parts[2])) if len(parts) == 3 else (1, 1)
        return lambda A: reduce.heavy(A, x, y)
    raise ValueError(f"unknown method {method!r}")


def _run_point(args):
    td, gi, methods, n, s, ad, samples, seed, roots = args
    runners = [method_runner(m) for m in methods]
    acc = {m: [0, 0, 0.0] for m in methods}
    for si in range(samples):
        A = generate(TvParams(n, s, td, ad, instance_seed(seed, gi, si), roots))
        for m, run in zip(methods, runners):
            t0 = time.perf_counter()
            R = run(A)
            elapsed = (time.perf_counter() - t0) * 1000.0
            st = stats(R)
            acc[m][0] += st.states
            acc[m][1] += st.transitions
            acc[m][2] += elapsed
    return [(td, m, acc[m][0] / samples, acc[m][1] / samples, acc[m][2] / samples, samples)
            for m in methods]


def experiment(grid: Sequence[float], methods: Sequence[str], n: int = 50, s: int = 2,
               ad: float = 0.8, samples: int = 50, seed: int = 0, roots: int = 1,
               workers: int = 1) -> list[tuple]:
    """Mean size after each method at each transition density."""
    for m in methods:
        method_runner(m)
    jobs = [(td, gi, tuple(methods), n, s, ad, samples, seed, roots)
            for gi, td in enumerate(grid)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_point, jobs))
    else:
        results = [_run_point(j) for j in jobs]
    return [row for point in results for row in point]


def to_csv(rows: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for td, m, st, tr, ms, k in rows:
        w.writerow([f"{td:g}", m, f"{st:.4f}", f"{tr:.4f}", f"{ms:.3f}", k])
    return buf.getvalue()
