"""Gradient flow on the synchronization energy, discretized by explicit Euler.

Each step is ``theta <- theta - step * grad E(theta)``. This is the
homogeneous Kuramoto model ``d theta_i/dt = sum_j a_ij sin(theta_j - theta_i)``
integrated with a fixed time step.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .energy import TWO_PI, as_phases, energy, order_parameter
from .errors import InvalidParameterError, InvalidSizeError, NumericalDivergenceError
from .graphs import WeightedGraph
from .seeding import derive_seed, rng_from_seed

__all__ = [
    "DescentConfig",
    "DescentOutcome",
    "DescentTrace",
    "StopReason",
    "Classification",
    "random_init",
    "descend",
    "multi_restart",
    "kuramoto_velocity",
    "classify_by_order",
    "classify_by_energy",
    "trial_seed",
]


class StopReason(enum.Enum):
    GRADIENT_TOL = "GradientTol"
    MAX_ITERS = "MaxIters"


class Classification(enum.Enum):
    GLOBAL = "Global"
    NON_GLOBAL = "NonGlobal"


@dataclass(frozen=True)
class DescentConfig:
    """Defaults: step 0.005, 1000 iterations, stop at gradient norm 1e-8."""

    step: float = 0.005
    max_iters: int = 1000
    grad_tol: float = 1e-8
    align_tol: float = 1e-3
    trace_every: int = 0

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise InvalidParameterError(f"step must be positive, got {self.step}")
        if self.max_iters < 1:
            raise InvalidParameterError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.grad_tol > 0:
            raise InvalidParameterError(f"grad_tol must be positive, got {self.grad_tol}")
        if not 0 < self.align_tol < 1:
            raise InvalidParameterError(f"align_tol must lie in (0, 1), got {self.align_tol}")
        if self.trace_every < 0:
            raise InvalidParameterError("trace_every must be nonnegative")


@dataclass
class DescentTrace:
    """Rows of ``(iteration, energy, grad_norm, order_magnitude)``."""

    rows: list[tuple[int, float, float, float]] = field(default_factory=list)

    HEADER = "iter,energy,grad_norm,order_mag"

    def append(self, iteration: int, e: float, grad_norm: float, order_mag: float) -> None:
        self.rows.append((iteration, e, grad_norm, order_mag))

    def energies(self) -> np.ndarray:
        return np.array([r[1] for r in self.rows])

    def to_csv(self) -> str:
        lines = [self.HEADER]
        lines += [f"{it},{e!r},{gn!r},{om!r}" for it, e, gn, om in self.rows]
        return "\n".join(lines) + "\n"

    def __len__(self):
        return len(self.rows)


@dataclass
class DescentOutcome:
    final_theta: np.ndarray
    final_energy: float
    final_grad_norm: float
    iterations: int
    stopped_by: StopReason
    classification: Classification

    @property
    def is_global(self) -> bool:
        return self.classification is Classification.GLOBAL


def random_init(n: int, seed: int) -> np.ndarray:
    """I.i.d. uniform phases on ``[0, 2*pi)``."""
    if n < 1:
        raise InvalidSizeError(f"n must be positive, got {n}")
    t = rng_from_seed(seed).random(n) * TWO_PI
    # u * 2pi can round up to exactly 2pi for u just below 1
    t[t >= TWO_PI] = 0.0
    return t


def kuramoto_velocity(g: WeightedGraph, theta) -> np.ndarray:
    """Right-hand side ``sum_j a_ij sin(theta_j - theta_i)`` from pairwise differences.

    Independent of :func:`synclandscape.energy.gradient`, which uses the
    ``Q``-factored form; the two must agree up to sign.
    """
    t = as_phases(theta, g)
    return np.sum(g.weights * np.sin(t[None, :] - t[:, None]), axis=1)


def classify_by_order(theta, align_tol: float) -> Classification:
    """Global iff ``|r| >= (1 - align_tol) * n``."""
    t = as_phases(theta)
    r = order_parameter(t)
    if r.magnitude >= (1.0 - align_tol) * t.shape[0]:
        return Classification.GLOBAL
    return Classification.NON_GLOBAL


def classify_by_energy(g: WeightedGraph, theta, eps: float) -> Classification:
    """Secondary rule: Global iff ``E <= eps * sum_{i<j} a_ij``."""
    total = float(np.triu(g.weights, 1).sum())
    if energy(g, theta) <= eps * total:
        return Classification.GLOBAL
    return Classification.NON_GLOBAL


def descend(
    g: WeightedGraph, init, cfg: DescentConfig = DescentConfig()
) -> tuple[DescentOutcome, DescentTrace]:
    theta = as_phases(init, g).copy()
    w = g.weights
    trace = DescentTrace()
    step = cfg.step
    every = cfg.trace_every

    it = 0
    while True:
        with np.errstate(invalid="ignore"):
            x, y = np.cos(theta), np.sin(theta)
        aq = w @ np.column_stack((x, y))
        grad = y * aq[:, 0] - x * aq[:, 1]
        gnorm = float(np.linalg.norm(grad))
        if not math.isfinite(gnorm):
            raise NumericalDivergenceError("non-finite gradient", iteration=it)
        if every and it % every == 0:
            e = energy(g, theta)
            if not math.isfinite(e):
                raise NumericalDivergenceError("non-finite energy", iteration=it)
            trace.append(it, e, gnorm, order_parameter(theta).magnitude)
        if gnorm <= cfg.grad_tol:
            stop = StopReason.GRADIENT_TOL
            break
        if it >= cfg.max_iters:
            stop = StopReason.MAX_ITERS
            break
        theta -= step * grad
        it += 1

    final_e = energy(g, theta)
    if not math.isfinite(final_e):
        raise NumericalDivergenceError("non-finite energy", iteration=it)
    if every and trace.rows[-1][0] != it:
        trace.append(it, final_e, gnorm, order_parameter(theta).magnitude)
    outcome = DescentOutcome(
        final_theta=theta,
        final_energy=final_e,
        final_grad_norm=gnorm,
        iterations=it,
        stopped_by=stop,
        classification=classify_by_order(theta, cfg.align_tol),
    )
    return outcome, trace


def trial_seed(base_seed: int, trial_index: int) -> int:
    return derive_seed(base_seed, trial_index)


def _restart_trial(g: WeightedGraph, base_seed: int, cfg: DescentConfig, trial: int) -> bool:
    seed = trial_seed(base_seed, trial)
    try:
        outcome, _ = descend(g, random_init(g.n, seed), cfg)
    except NumericalDivergenceError as exc:
        raise exc.with_context(trial=trial, seed=seed) from None
    return outcome.is_global


def multi_restart(
    g: WeightedGraph,
    trials: int,
    base_seed: int,
    cfg: DescentConfig = DescentConfig(),
    workers: int = 1,
) -> int:
    """Number of Global outcomes over ``trials`` independent random starts.

    Trial ``t`` starts from ``random_init(n, trial_seed(base_seed, t))``, so
    the count does not depend on ``workers``.
    """
    if trials < 1:
        raise InvalidParameterError(f"trials must be >= 1, got {trials}")
    run = partial(_restart_trial, g, base_seed, cfg)
    if workers <= 1:
        return sum(run(t) for t in range(trials))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(run, range(trials), chunksize=max(1, trials // (4 * workers))))
