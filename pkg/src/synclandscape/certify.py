"""Executable versions of the landscape conditions.

Each check returns a :class:`Certificate`: a named pass/fail flag plus the
numbers that decided it. :func:`rip_probe` is a sampling probe that can
only falsify the isometry bounds, never prove them for all phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .energy import as_phases, embedding, gradient, order_parameter
from .errors import InvalidParameterError, InvalidSizeError
from .graphs import WeightedGraph, is_connected
from .seeding import derive_seed
from .descent import random_init

__all__ = [
    "Certificate",
    "ErRegime",
    "THEOREM1_THRESHOLD",
    "check_proposition",
    "check_theorem1",
    "er_regime",
    "bernstein_radius",
    "centered_adjacency",
    "deviation_bound",
    "rip_ratios",
    "rip_probe",
    "first_order_residual",
]

THEOREM1_THRESHOLD = (3.0 - math.sqrt(2.0)) / 2.0
QUADRANT_SIN = 1.0 / math.sqrt(2.0)


@dataclass
class Certificate:
    name: str
    holds: bool
    witness: dict[str, float] = field(default_factory=dict)
    notes: str = ""

    def lines(self) -> list[str]:
        out = [f"{self.name}: {'PASS' if self.holds else 'FAIL'}"]
        out += [f"{k}={v!r}" for k, v in self.witness.items()]
        if self.notes:
            out.append(f"notes={self.notes}")
        return out


def check_proposition(g: WeightedGraph, theta) -> Certificate:
    """Two-quadrant condition: connected graph and ``max_i |sin(theta_i - theta_r)| < 1/sqrt(2)``.

    ``theta_r`` is the angle of ``r = sum_j exp(i theta_j)``.
    """
    t = as_phases(theta, g)
    connected = is_connected(g)
    r = order_parameter(t)
    witness = {"order_magnitude": r.magnitude, "threshold": QUADRANT_SIN}
    if r.degenerate:
        return Certificate("proposition", False, witness, "order parameter degenerate")
    max_sin = float(np.max(np.abs(np.sin(t - r.angle))))
    witness.update(theta_r=r.angle, max_abs_sin=max_sin)
    notes = "" if connected else "graph disconnected"
    return Certificate("proposition", connected and max_sin < QUADRANT_SIN, witness, notes)


def check_theorem1(g: WeightedGraph) -> Certificate:
    """Minimum-degree condition ``min_i deg_i / (n - 1) >= (3 - sqrt 2)/2``."""
    if g.n < 2:
        raise InvalidSizeError("degree ratio needs n >= 2")
    mu = float(g.degrees().min()) / (g.n - 1)
    return Certificate(
        "theorem1", mu >= THEOREM1_THRESHOLD, {"mu": mu, "threshold": THEOREM1_THRESHOLD}
    )


@dataclass(frozen=True)
class ErRegime:
    """Edge probability and success-probability bound of the random-graph theorem.

    ``p`` may exceed 1 for moderate ``n``; then ``vacuous`` is set and
    ``p_clamped`` is 1.
    """

    n: int
    gamma: float
    p: float
    prob_bound: float

    @staticmethod
    def edge_probability(n: int, gamma: float) -> float:
        return 32.0 * gamma * math.log(n) / n ** (1.0 / 3.0)

    @property
    def vacuous(self) -> bool:
        return self.p > 1.0

    @property
    def p_clamped(self) -> float:
        return min(self.p, 1.0)


def er_regime(n: int, gamma: float) -> ErRegime:
    if n < 2:
        raise InvalidSizeError(f"n must be >= 2, got {n}")
    if not gamma >= 1.0:
        raise InvalidParameterError(f"gamma must be >= 1, got {gamma}")
    log_n = math.log(n)
    exponent = n * (math.log(100.0 * n ** (1.0 / 3.0)) - 2.0 * gamma * log_n)
    tail = 4.0 * math.exp(exponent) if exponent < 700.0 else math.inf
    prob = 1.0 - tail - 10.0 * n ** (1.0 - gamma)
    return ErRegime(n, float(gamma), ErRegime.edge_probability(n, gamma), prob)


def bernstein_radius(n: int, p: float, gamma: float) -> float:
    """``sqrt(2 gamma n p (1-p) log n) + 2 gamma log n / 3``."""
    log_n = math.log(n)
    return math.sqrt(2.0 * gamma * n * p * (1.0 - p) * log_n) + 2.0 * gamma * log_n / 3.0


def centered_adjacency(g: WeightedGraph, p: float) -> np.ndarray:
    """``A - p J`` under the convention ``a_ii = p``, i.e. with a zero diagonal."""
    delta = g.weights - p
    np.fill_diagonal(delta, 0.0)
    return delta


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"p must lie in (0, 1), got {p}")


def deviation_bound(g: WeightedGraph, p: float, gamma: float) -> Certificate:
    """Compare ``||A - EA||`` and ``||(A - EA) 1||_inf`` with the Bernstein radius."""
    _check_p(p)
    if not g.is_binary():
        raise InvalidParameterError("deviation_bound expects a 0/1 adjacency matrix")
    if g.n < 2:
        raise InvalidSizeError("need n >= 2")
    delta = centered_adjacency(g, p)
    spectral = float(np.max(np.abs(np.linalg.eigvalsh(delta))))
    row_sums = float(np.max(np.abs(delta.sum(axis=1))))
    row_norm = float(np.max(np.linalg.norm(delta, axis=1)))
    bound = bernstein_radius(g.n, p, gamma)
    return Certificate(
        "deviation_bound",
        spectral <= bound and row_sums <= bound,
        {
            "spectral_norm": spectral,
            "row_sum_inf": row_sums,
            "max_row_norm": row_norm,
            "bound": bound,
            "gamma": float(gamma),
            "p": float(p),
        },
    )


def rip_ratios(g: WeightedGraph, p: float, theta) -> tuple[float, float]:
    """``|<D, X o X>| / (p ||X||_F^2)`` and ``|<D, X>| / (p ||X||_F^2)``.

    ``D`` is the centered adjacency and ``X = QQ^T``. The Hadamard square uses
    ``cos^2 d = (1 + cos 2d)/2``, so both inner products are quadratic forms
    and never materialize an ``n x n`` Gram matrix.
    """
    t = as_phases(theta, g)
    delta = centered_adjacency(g, p)
    emb = embedding(t)
    q = emb.matrix
    q2 = embedding(2.0 * t).matrix
    lin = float(np.sum(q * (delta @ q)))
    had = 0.5 * float(delta.sum()) + 0.5 * float(np.sum(q2 * (delta @ q2)))
    scale = p * emb.gram_frobenius_sq()
    return abs(had) / scale, abs(lin) / scale


def rip_probe(g: WeightedGraph, p: float, delta: float, samples: int, seed: int) -> Certificate:
    """Search for violations of the two isometry bounds over random phases.

    Sample ``s`` uses ``random_init(n, derive_seed(seed, s))``. A pass means
    no sampled phase vector violated either bound, nothing stronger.
    """
    _check_p(p)
    if not 0.0 < delta <= 1.0:
        raise InvalidParameterError(f"delta must lie in (0, 1], got {delta}")
    if samples < 1:
        raise InvalidParameterError("samples must be >= 1")
    worst_had = worst_lin = 0.0
    violations = 0
    for s in range(samples):
        had, lin = rip_ratios(g, p, random_init(g.n, derive_seed(seed, s)))
        worst_had = max(worst_had, had)
        worst_lin = max(worst_lin, lin)
        violations += had > delta or lin > delta
    return Certificate(
        "rip_probe",
        violations == 0,
        {
            "max_ratio_hadamard": worst_had,
            "max_ratio_linear": worst_lin,
            "violations": float(violations),
            "samples": float(samples),
            "delta": float(delta),
        },
        "empirical probe over sampled phases, not a uniform certificate",
    )


def first_order_residual(g: WeightedGraph, theta) -> float:
    """``||grad E(theta)||_inf``."""
    return float(np.max(np.abs(gradient(g, theta))))
