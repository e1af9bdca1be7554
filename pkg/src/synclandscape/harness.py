"""Monte-Carlo phase-transition sweeps over Erdős–Rényi graphs.

A cell ``(n, p)`` runs ``trials`` independent instances, each with a fresh
G(n, p) graph and a fresh uniform initialization, and counts how many end
Global. Seeds are derived from coordinates, not from execution order, so a
grid gives the same table whatever the worker count and whichever cells are
run alongside it.
"""

from __future__ import annotations

import enum
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .descent import DescentConfig, descend, random_init
from .errors import InvalidParameterError, InvalidSizeError, NumericalDivergenceError, ParseError
from .graphs import gen_er
from .seeding import derive_seed, float_key

__all__ = [
    "PRule",
    "GridSpec",
    "PhaseCell",
    "cell_seed",
    "run_cell",
    "run_grid",
    "frange",
    "reference_curves",
    "write_phase_table",
    "read_phase_table",
    "write_reference_curves",
    "success_matrix",
    "TABLE_HEADER",
]

log = logging.getLogger(__name__)

TABLE_HEADER = "n,p,trials,successes,fraction,seed"
_GRAPH_KEY, _INIT_KEY = 0, 1


class PRule(enum.Enum):
    ABSOLUTE = "absolute"
    LOG_SCALED = "log_scaled"


@dataclass(frozen=True)
class GridSpec:
    """``values`` are edge probabilities (ABSOLUTE) or multipliers ``c`` of ``log(n)/n``."""

    n_values: tuple[int, ...]
    p_rule: PRule
    values: tuple[float, ...]
    trials: int = 50
    base_seed: int = 0
    config: DescentConfig = DescentConfig()
    fixed_graph: bool = False

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.n_values or not self.values:
            raise InvalidParameterError("grid needs at least one n and one p value")
        if any(n < 2 for n in self.n_values):
            raise InvalidSizeError("all n must be >= 2")
        if self.trials < 1:
            raise InvalidParameterError("trials must be >= 1")
        if any(v < 0 or not math.isfinite(v) for v in self.values):
            raise InvalidParameterError("p values / multipliers must be finite and nonnegative")
        if self.p_rule is PRule.ABSOLUTE and any(v > 1 for v in self.values):
            raise InvalidParameterError("absolute p values must lie in [0, 1]")

    def probability(self, n: int, value: float) -> tuple[float, bool]:
        """Edge probability for grid coordinate ``(n, value)`` and whether it was clamped to 1."""
        p = value if self.p_rule is PRule.ABSOLUTE else value * math.log(n) / n
        return (1.0, True) if p > 1.0 else (p, False)

    def shape(self) -> tuple[int, int]:
        return len(self.n_values), len(self.values)


@dataclass(frozen=True)
class PhaseCell:
    n: int
    p: float
    trials: int
    successes: int
    seed: int
    clamped: bool = field(default=False, compare=False)

    @property
    def fraction(self) -> float:
        return self.successes / self.trials

    def row(self) -> str:
        return f"{self.n},{self.p!r},{self.trials},{self.successes},{self.fraction!r},{self.seed}"


def cell_seed(base_seed: int, n: int, value: float) -> int:
    """Seed of the cell at grid coordinate ``(n, value)``.

    Keyed on the coordinate values rather than their positions in the grid.
    """
    return derive_seed(base_seed, n, float_key(value))


def _trial(n: int, p: float, seed: int, cfg: DescentConfig, trial: int, fixed_graph: bool) -> bool:
    sub = derive_seed(seed, trial)
    graph_seed = derive_seed(seed, _GRAPH_KEY) if fixed_graph else derive_seed(sub, _GRAPH_KEY)
    init_seed = derive_seed(sub, _INIT_KEY)
    try:
        outcome, _ = descend(gen_er(n, p, graph_seed), random_init(n, init_seed), cfg)
    except NumericalDivergenceError as exc:
        raise exc.with_context(n=n, p=p, trial=trial, sub_seed=sub) from None
    return outcome.is_global


def _trial_star(args) -> bool:
    return _trial(*args)


def run_cell(
    n: int,
    p: float,
    trials: int,
    seed: int,
    cfg: DescentConfig = DescentConfig(),
    fixed_graph: bool = False,
    workers: int = 1,
) -> PhaseCell:
    if n < 2:
        raise InvalidSizeError("n must be >= 2")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    tasks = [(n, p, seed, cfg, t, fixed_graph) for t in range(trials)]
    successes = _run_tasks(tasks, workers)
    return PhaseCell(n, p, trials, sum(successes), seed)


def _run_tasks(tasks: list, workers: int) -> list[bool]:
    if workers <= 1:
        return [_trial_star(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_trial_star, tasks, chunksize=chunk))


def run_grid(spec: GridSpec, workers: int = 1) -> list[PhaseCell]:
    """All cells in ``n``-major, then value order. Trials of all cells share one pool."""
    coords = []
    tasks = []
    for n in spec.n_values:
        for v in spec.values:
            p, clamped = spec.probability(n, v)
            if clamped:
                log.warning("p=%s*log(n)/n exceeds 1 at n=%d; clamped to 1", v, n)
            seed = cell_seed(spec.base_seed, n, v)
            coords.append((n, p, seed, clamped))
            tasks += [(n, p, seed, spec.config, t, spec.fixed_graph) for t in range(spec.trials)]
    flags = _run_tasks(tasks, workers)
    cells = []
    for idx, (n, p, seed, clamped) in enumerate(coords):
        block = flags[idx * spec.trials:(idx + 1) * spec.trials]
        cells.append(PhaseCell(n, p, spec.trials, sum(block), seed, clamped))
    return cells


def frange(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive grid ``lo, lo+step, ..., hi`` computed as ``lo + i*step`` (no drift)."""
    if step <= 0:
        raise InvalidParameterError("grid step must be positive")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(max(count, 0))]


def reference_curves(n_values) -> list[tuple[int, float, float]]:
    """Rows ``(n, log(n)/n, 2 log(n)/n)``: the connectivity threshold and its double."""
    return [(int(n), math.log(n) / n, 2.0 * math.log(n) / n) for n in n_values]


def write_phase_table(cells, path: str | os.PathLike) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(TABLE_HEADER + "\n")
            for c in cells:
                fh.write(c.row() + "\n")
    except OSError as exc:
        raise OSError(f"cannot write phase table to {path}: {exc}") from exc


def write_reference_curves(n_values, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("n,log_n_over_n,two_log_n_over_n\n")
        for n, a, b in reference_curves(n_values):
            fh.write(f"{n},{a!r},{b!r}\n")


def read_phase_table(path: str | os.PathLike) -> list[PhaseCell]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != TABLE_HEADER:
        raise ParseError(f"expected header {TABLE_HEADER!r}", 1)
    cells = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise ParseError(f"expected 6 fields, got {len(parts)}", lineno)
        try:
            n, p, trials, succ = int(parts[0]), float(parts[1]), int(parts[2]), int(parts[3])
            frac, seed = float(parts[4]), int(parts[5])
        except ValueError:
            raise ParseError(f"malformed row {line!r}", lineno) from None
        cell = PhaseCell(n, p, trials, succ, seed)
        if not 0 <= succ <= trials or cell.fraction != frac:
            raise ParseError("successes/fraction inconsistent with trials", lineno)
        cells.append(cell)
    return cells


def success_matrix(cells, spec: GridSpec) -> np.ndarray:
    """Fractions reshaped to ``(len(n_values), len(values))``."""
    return np.array([c.fraction for c in cells]).reshape(spec.shape())
