"""
Importance weights, effective sample size and step-length search on the
geometric bridge ``pi_t = pi^rho_t``.

All computations run on log scores shifted by their maximum. Particles with
``log_pi = -inf`` get weight exactly 0. ``log_base`` carries log weights
already attached to the particles (for example an importance correction of
the initial draw); it is ``None`` for an unweighted system.
"""

from typing import Optional

import numpy as np
from scipy.special import logsumexp

BISECT_TOL = 1e-4


class DegenerateSystemError(ArithmeticError):
    """Every particle has zero mass."""


def _log_weights(
    alpha: float, log_pi: np.ndarray, log_base: Optional[np.ndarray] = None
) -> np.ndarray:
    log_pi = np.asarray(log_pi, dtype=float)
    finite = ~np.isneginf(log_pi)
    lw = np.full(log_pi.shape, -np.inf)
    lw[finite] = alpha * log_pi[finite]
    if log_base is not None:
        lw = lw + log_base
    if not np.any(np.isfinite(lw)):
        raise DegenerateSystemError("All particles have zero mass")
    return lw


def effective_sample_size(
    alpha: float, log_pi: np.ndarray, log_base: Optional[np.ndarray] = None
) -> float:
    """``(sum u)^2 / (n sum u^2)`` with ``u_k = pi(x_k)^alpha``, in ``[1/n, 1]``."""
    lw = _log_weights(alpha, log_pi, log_base)
    u = np.exp(lw - np.max(lw))
    return float(u.sum() ** 2 / (lw.shape[0] * np.sum(u * u)))


def importance_weights(
    alpha: float, log_pi: np.ndarray, log_base: Optional[np.ndarray] = None
) -> np.ndarray:
    """Normalized weights proportional to ``pi(x_k)^alpha``."""
    lw = _log_weights(alpha, log_pi, log_base)
    w = np.exp(lw - logsumexp(lw))
    return w / w.sum()


def log_mean_increment(
    alpha: float, log_pi: np.ndarray, log_base: Optional[np.ndarray] = None
) -> float:
    """
    ``log sum_k w_k pi(x_k)^alpha`` for the normalized prior weights ``w``
    (``1/n`` each without ``log_base``): the log ratio of consecutive
    normalizing constants.
    """
    lw = _log_weights(alpha, log_pi, log_base)
    if log_base is None:
        return float(logsumexp(lw) - np.log(lw.shape[0]))
    return float(logsumexp(lw) - logsumexp(log_base))


def find_step_length(
    rho: float,
    log_pi: np.ndarray,
    eta_star: float,
    tol: float = BISECT_TOL,
    log_base: Optional[np.ndarray] = None,
) -> float:
    """
    Step ``alpha`` with ``ESS(alpha) ~ eta_star``, at most ``1 - rho``.

    Returns exactly ``1 - rho`` when the final step already keeps the ESS
    at or above ``eta_star``; otherwise bisects on ``[0, 1.05 - rho]``
    starting from ``alpha = 0.05`` until the bracket is narrower than
    ``tol`` or its lower end passes ``1 - rho``. The lower end is returned
    once it is positive, so the ESS never drops below ``eta_star``.
    """
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    cap = 1.0 - rho
    if effective_sample_size(cap, log_pi, log_base) >= eta_star:
        return cap
    lower, upper, alpha = 0.0, 1.05 - rho, 0.05
    while True:
        if effective_sample_size(alpha, log_pi, log_base) < eta_star:
            upper, alpha = alpha, (alpha + lower) / 2.0
        else:
            lower, alpha = alpha, (alpha + upper) / 2.0
        if abs(upper - lower) < tol or lower > cap:
            break
    return min(lower if lower > 0.0 else alpha, cap)
