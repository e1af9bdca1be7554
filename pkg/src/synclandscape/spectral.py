"""Critical points: Hessian spectra, twisted states and circulant closed forms.

The Hessian always annihilates the constant vector (global rotation), so its
spectrum contains a structural zero. ``lambda2`` throughout this module means
the smallest eigenvalue of the Hessian restricted to the complement of the
constant vector. At a PSD Hessian this is the second entry of the sorted
spectrum; at a saddle it is the most negative eigenvalue.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .energy import TWO_PI, as_phases, gradient, hessian
from .errors import InvalidParameterError, InvalidSizeError, NumericalError
from .graphs import WeightedGraph, gen_path

__all__ = [
    "Verdict",
    "CriticalPointReport",
    "hessian_spectrum",
    "restricted_min_eigenvalue",
    "classify_critical",
    "twisted_state",
    "doubled_twisted_state",
    "wsg_hessian_eigs",
    "wsg_lambda2",
    "wsg_lambda2_curve",
    "wsg_critical_k",
    "bipartite_twisted_eigs",
    "path_critical_points",
]

PATH_ENUM_LIMIT = 16


class Verdict(enum.Enum):
    NOT_CRITICAL = "NotCritical"
    LOCAL_MIN_CANDIDATE = "LocalMinCandidate"
    SADDLE = "Saddle"


@dataclass
class CriticalPointReport:
    grad_inf_norm: float
    hessian_eigs: np.ndarray
    lambda2: float
    verdict: Verdict
    # |lambda2| within eig_tol: second-order test cannot separate min from saddle
    inconclusive: bool = False

    def lines(self) -> list[str]:
        return [
            f"grad_inf_norm: {self.grad_inf_norm!r}",
            f"lambda2: {self.lambda2!r}",
            f"min_eig: {float(self.hessian_eigs[0])!r}",
            f"max_eig: {float(self.hessian_eigs[-1])!r}",
            f"verdict: {self.verdict.value}",
            f"inconclusive: {str(self.inconclusive).lower()}",
        ]


def _eigvalsh(m: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver did not converge: {exc}") from exc


def hessian_spectrum(g: WeightedGraph, theta) -> np.ndarray:
    """Ascending eigenvalues of the Hessian at ``theta``."""
    return _eigvalsh(hessian(g, theta))


def restricted_min_eigenvalue(h: np.ndarray) -> float:
    """Smallest eigenvalue of symmetric ``h`` on the complement of the constant vector.

    Requires ``h @ 1 == 0``. Adding ``shift * J/n`` moves the constant
    direction's eigenvalue from 0 to ``shift`` and leaves the rest alone;
    with ``shift`` above the spectral radius it can no longer be the minimum.
    """
    n = h.shape[0]
    if n == 1:
        return 0.0
    shift = 1.0 + 2.0 * float(np.abs(h).sum(axis=1).max())
    return float(_eigvalsh(h + shift / n)[0])


def classify_critical(
    g: WeightedGraph, theta, grad_tol: float = 1e-7, eig_tol: float = 1e-8
) -> CriticalPointReport:
    t = as_phases(theta, g)
    ginf = float(np.max(np.abs(gradient(g, t)))) if g.n else 0.0
    h = hessian(g, t)
    eigs = _eigvalsh(h)
    lam2 = restricted_min_eigenvalue(h)
    if ginf > grad_tol:
        verdict = Verdict.NOT_CRITICAL
    elif lam2 < -eig_tol:
        verdict = Verdict.SADDLE
    else:
        verdict = Verdict.LOCAL_MIN_CANDIDATE
    return CriticalPointReport(
        grad_inf_norm=ginf,
        hessian_eigs=eigs,
        lambda2=lam2,
        verdict=verdict,
        inconclusive=verdict is not Verdict.NOT_CRITICAL and abs(lam2) <= eig_tol,
    )


def twisted_state(n: int) -> np.ndarray:
    """``theta_l = 2*pi*l/n`` for ``l = 0..n-1``."""
    if n < 2:
        raise InvalidSizeError(f"twisted state needs n >= 2, got {n}")
    return TWO_PI * np.arange(n) / n


def doubled_twisted_state(n: int) -> np.ndarray:
    """The twisted state repeated on both halves of the bipartite ring."""
    t = twisted_state(n)
    return np.concatenate((t, t))


def _check_k(n: int, k: int) -> None:
    if n < 3 or not 1 <= k <= (n - 1) // 2:
        raise InvalidParameterError(f"need 1 <= k <= floor((n-1)/2); got n={n}, k={k}")


def _ring_terms(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """``cos(2 pi j/n)`` for ``j=1..k`` and ``cos(2 pi (l-1) j/n)`` as an ``(n, k)`` array."""
    j = np.arange(1, k + 1)
    c = np.cos(TWO_PI * j / n)
    # reduce (l-1)*j mod n first so the cosine argument stays in [0, 2pi)
    phase = (np.arange(n)[:, None] * j[None, :]) % n
    return c, np.cos(TWO_PI * phase / n)


def wsg_hessian_eigs(n: int, k: int) -> np.ndarray:
    """Closed-form Hessian eigenvalues of the ring at the twisted state, indexed ``l = 1..n``.

    ``lambda_l = 2 sum_j cos(2 pi j/n) - 2 sum_j cos(2 pi j/n) cos(2 pi (l-1) j/n)``,
    evaluated as ``2 sum_j cos(2 pi j/n) (1 - cos(...))`` so ``lambda_1`` is exactly 0.
    """
    _check_k(n, k)
    c, mod = _ring_terms(n, k)
    return 2.0 * np.sum(c[None, :] * (1.0 - mod), axis=1)


def wsg_lambda2(n: int, k: int) -> float:
    """``min_{l >= 2} lambda_l``: the ordering in ``l`` is not monotone for every ``k``."""
    return float(wsg_hessian_eigs(n, k)[1:].min())


def wsg_lambda2_curve(n: int, k_min: int, k_max: int) -> list[tuple[int, float, float]]:
    """Rows ``(k, mu = 2k/(n-1), min_{l>=2} lambda_l)`` for ``k_min <= k <= k_max``."""
    if n < 3 or not 1 <= k_min <= k_max <= (n - 1) // 2:
        raise InvalidParameterError(
            f"need 1 <= k_min <= k_max <= {(n - 1) // 2}; got {k_min}..{k_max} for n={n}"
        )
    c, mod = _ring_terms(n, k_max)
    # column k-1 of the cumulative sum is the closed form truncated at k
    partial = np.cumsum(2.0 * c[None, :] * (1.0 - mod), axis=1)
    rows = []
    for k in range(k_min, k_max + 1):
        rows.append((k, 2.0 * k / (n - 1), float(partial[1:, k - 1].min())))
    return rows


def wsg_critical_k(n: int) -> int:
    """Largest ``k`` whose twisted state has ``min_{l>=2} lambda_l > 0``; 0 if none."""
    k_top = (n - 1) // 2
    if n < 3 or k_top < 1:
        return 0
    best = 0
    for k, _, lam in wsg_lambda2_curve(n, 1, k_top):
        if lam > 0:
            best = k
    return best


def bipartite_twisted_eigs(n: int, k: int) -> np.ndarray:
    """Hessian eigenvalues of the bipartite ring at the doubled twisted state.

    Returns ``2n`` values: first ``d - m_l`` then ``d + m_l`` for ``l = 1..n``,
    where ``d = 2 sum_j cos(2 pi j/n)`` is the common diagonal and ``m_l`` the
    eigenvalues of the coupling block ``A_k o QQ^T``. The first half equals
    :func:`wsg_hessian_eigs`.
    """
    _check_k(n, k)
    c, mod = _ring_terms(n, k)
    minus = 2.0 * np.sum(c[None, :] * (1.0 - mod), axis=1)
    plus = 2.0 * np.sum(c[None, :] * (1.0 + mod), axis=1)
    return np.concatenate((minus, plus))


def path_critical_points(n: int) -> list[tuple[tuple[int, ...], Verdict]]:
    """Classify all ``2**n`` states with every phase in ``{0, pi}`` on the ``n``-path.

    Pattern bit ``i`` set means ``theta_i = pi``. Output is ordered by the
    pattern read as a binary number with vertex 0 as the most significant bit.
    Each state is checked to be critical to 1e-12 before classification.
    """
    if not 2 <= n <= PATH_ENUM_LIMIT:
        raise InvalidSizeError(f"path enumeration supports 2 <= n <= {PATH_ENUM_LIMIT}, got {n}")
    g = gen_path(n)
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        theta = math.pi * np.array(bits, dtype=np.float64)
        report = classify_critical(g, theta)
        if report.grad_inf_norm > 1e-12:
            raise NumericalError(f"sign state {bits} is not critical: {report.grad_inf_norm}")
        out.append((bits, report.verdict))
    return out
