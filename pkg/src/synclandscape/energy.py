"""Synchronization energy, its derivatives, the circle embedding and the order parameter.

For a weight matrix ``A`` and phases ``theta``::

    E(theta)       = 1/2 sum_ij a_ij (1 - cos(theta_i - theta_j))
    grad_i         = sum_j a_ij sin(theta_i - theta_j)
    H_ij (i != j)  = -a_ij cos(theta_i - theta_j)
    H_ii           = sum_j a_ij cos(theta_i - theta_j)

Phases are any real numbers; nothing here reduces them modulo 2*pi.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ShapeError
from .graphs import WeightedGraph

__all__ = [
    "CircleEmbedding",
    "OrderParameter",
    "as_phases",
    "energy",
    "gradient",
    "hessian",
    "embedding",
    "order_parameter",
    "wrap_phases",
    "format_phases",
    "parse_phases",
    "save_phases",
    "load_phases",
]

TWO_PI = 2.0 * math.pi
DEGENERATE_ORDER_REL = 1e-9


def as_phases(theta, g: WeightedGraph | None = None) -> np.ndarray:
    """Coerce ``theta`` to a 1-D float64 array, checking its length against ``g``."""
    t = np.asarray(theta, dtype=np.float64)
    if t.ndim != 1:
        raise ShapeError(f"phase vector must be 1-D, got shape {t.shape}")
    if g is not None and t.shape[0] != g.n:
        raise ShapeError(f"phase vector has length {t.shape[0]}, graph has n={g.n}")
    return t


def wrap_phases(theta) -> np.ndarray:
    """Reduce phases into ``[0, 2*pi)`` for reporting."""
    t = np.mod(as_phases(theta), TWO_PI)
    t[t >= TWO_PI] = 0.0
    return t


def energy(g: WeightedGraph, theta) -> float:
    t = as_phases(theta, g)
    iu, ju = np.triu_indices(g.n, 1)
    w = g.weights[iu, ju]
    mask = w != 0.0
    d = t[iu[mask]] - t[ju[mask]]
    # 1 - cos(d) = 2 sin^2(d/2) avoids cancellation near alignment
    return float(np.sum(w[mask] * 2.0 * np.sin(0.5 * d) ** 2))


def gradient(g: WeightedGraph, theta) -> np.ndarray:
    t = as_phases(theta, g)
    x, y = np.cos(t), np.sin(t)
    aq = g.weights @ np.column_stack((x, y))
    return y * aq[:, 0] - x * aq[:, 1]


def hessian(g: WeightedGraph, theta) -> np.ndarray:
    t = as_phases(theta, g)
    x, y = np.cos(t), np.sin(t)
    coupling = g.weights * (np.outer(x, x) + np.outer(y, y))
    h = -coupling
    h[np.diag_indices_from(h)] = coupling.sum(axis=1)
    return h


@dataclass(frozen=True)
class CircleEmbedding:
    """Rows ``(cos theta_i, sin theta_i)`` of the ``n x 2`` matrix ``Q``."""

    x: np.ndarray
    y: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.column_stack((self.x, self.y))

    def gram(self) -> np.ndarray:
        """``Q Q^T``, whose entries are ``cos(theta_i - theta_j)``."""
        q = self.matrix
        return q @ q.T

    def gram_frobenius_sq(self) -> float:
        # ||Q Q^T||_F == ||Q^T Q||_F, the 2x2 side is cheap
        q = self.matrix
        return float(np.sum((q.T @ q) ** 2))

    def column_sums(self) -> np.ndarray:
        """``Q^T 1``."""
        return np.array([self.x.sum(), self.y.sum()])


def embedding(theta) -> CircleEmbedding:
    t = as_phases(theta)
    return CircleEmbedding(np.cos(t), np.sin(t))


@dataclass(frozen=True)
class OrderParameter:
    """``r = sum_j exp(i theta_j)``.

    ``angle`` is None when the magnitude is below ``1e-9 * n``: there is no
    meaningful direction to report.
    """

    magnitude: float
    angle: float | None
    degenerate: bool

    def normalized(self, n: int) -> float:
        return self.magnitude / n


def order_parameter(theta) -> OrderParameter:
    t = as_phases(theta)
    n = t.shape[0]
    re, im = float(np.cos(t).sum()), float(np.sin(t).sum())
    mag = math.hypot(re, im)
    if mag < DEGENERATE_ORDER_REL * n:
        return OrderParameter(mag, None, True)
    return OrderParameter(mag, math.atan2(im, re), False)


# PhaseState text format: one angle in radians per line, '#' comments allowed.

def format_phases(theta) -> str:
    return "".join(f"{v!r}\n" for v in as_phases(theta).tolist())


def parse_phases(text: str) -> np.ndarray:
    vals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = float(line)
        except ValueError:
            raise ParseError(f"expected one angle per line, got {raw.strip()!r}", lineno) from None
        if not math.isfinite(v):
            raise ParseError("angle must be finite", lineno)
        vals.append(v)
    if not vals:
        raise ParseError("no angles found")
    return np.array(vals)


def save_phases(theta, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_phases(theta))


def load_phases(path: str | os.PathLike) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return parse_phases(fh.read())
