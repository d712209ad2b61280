"""
Metropolised Gibbs kernels on B^d.

Each step draws a block size ``k``, a uniform subset ``I`` of ``k``
components and proposes ``y`` by redrawing every ``y_i``, ``i in I``, from
``Ber(p_i(x))``. The three kernels differ in ``p_i``:

* ``gibbs``: the full conditional of the target (single-site only),
* ``mmg``: ``1 - x_i``, so the block is always flipped,
* ``amg``: a clamped linear predictor fitted to the chain's history.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit

from smcselect.model.base import KernelKind
from smcselect.posterior import PosteriorModel

AMG_DELTA = 0.01
AMG_RIDGE = 0.01


class InfeasibleSliceError(ArithmeticError):
    """Both values of a component give zero target mass."""


@dataclass
class ChainState:
    """Current state with its cached log score and running counters."""

    x: np.ndarray
    log_pi: float
    t: int = 0
    moves: int = 0
    evals: int = 0
    proposed: int = 0
    accepted: int = 0
    perm: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.x = np.asarray(self.x, dtype=np.uint8).copy()
        if self.perm is None:
            self.perm = np.arange(self.x.shape[0])

    @property
    def acceptance_rate(self) -> float:
        """Accepted over proposals that differ from the current state."""
        return self.accepted / self.proposed if self.proposed else float("nan")


@dataclass
class AdaptiveStats:
    """
    Mean ``psi`` and precision ``W`` of the visited states.

    ``W`` is the inverse of the sample covariance plus ``ridge I``.
    """

    psi: np.ndarray
    W: np.ndarray
    delta: float = AMG_DELTA
    samples: int = 0
    centered: bool = False

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 0.5:
            raise ValueError(f"delta must lie in (0, 1/2), got {self.delta}")
        self.W = 0.5 * (self.W + self.W.T)

    @classmethod
    def from_moments(
        cls,
        mean: np.ndarray,
        cov: np.ndarray,
        samples: int,
        delta: float = AMG_DELTA,
        ridge: float = AMG_RIDGE,
        centered: bool = False,
    ) -> "AdaptiveStats":
        d = mean.shape[0]
        S = cov + ridge * np.eye(d)
        try:
            W = cho_solve(cho_factor(S, lower=True), np.eye(d))
        except LinAlgError:
            W = np.linalg.pinv(S)
        return cls(psi=np.asarray(mean, dtype=float), W=W, delta=delta, samples=samples,
                   centered=centered)


# ---------------------------------------------------------------------------
# Proposal probabilities
# ---------------------------------------------------------------------------


def _flip(x: np.ndarray, i: int) -> np.ndarray:
    y = x.copy()
    y[i] ^= 1
    return y


def _gibbs(
    target: PosteriorModel, x: np.ndarray, log_pi_x: float, i: int
) -> Tuple[float, float]:
    """``P(gamma_i = 1 | x_-i)`` and the log score of the flipped state."""
    log_pi_f = target.score(_flip(x, i))
    if x[i]:
        l1, l0 = log_pi_x, log_pi_f
    else:
        l1, l0 = log_pi_f, log_pi_x
    if np.isneginf(l1) and np.isneginf(l0):
        raise InfeasibleSliceError(f"Both values of component {i} have zero mass")
    if np.isneginf(l1):
        return 0.0, log_pi_f
    if np.isneginf(l0):
        return 1.0, log_pi_f
    return float(expit(l1 - l0)), log_pi_f


def conditional_prob_gibbs(target: PosteriorModel, x: np.ndarray, i: int) -> float:
    """
    Full conditional ``pi(gamma_i = 1 | x_-i)`` from two target evaluations.

    Raises:
        InfeasibleSliceError: both states have zero mass.
    """
    x = np.asarray(x, dtype=np.uint8)
    return _gibbs(target, x, target.score(x), i)[0]


def conditional_prob_mmg(x: np.ndarray, i: int) -> float:
    return 1.0 - float(x[i])


def conditional_prob_amg(stats: AdaptiveStats, x: np.ndarray, i: int) -> float:
    """
    ``clamp(psi_i - W_i,-i x_-i / w_ii, delta, 1 - delta)``.

    With ``stats.centered`` the predictor uses ``x_-i - psi_-i``. A zero
    ``w_ii`` gives 1/2.
    """
    w_ii = stats.W[i, i]
    if w_ii == 0:
        return 0.5
    z = np.asarray(x, dtype=float)
    if stats.centered:
        z = z - stats.psi
    cross = stats.W[i] @ z - w_ii * z[i]
    p = stats.psi[i] - cross / w_ii
    return float(np.clip(p, stats.delta, 1.0 - stats.delta))


def sample_block_size(kstar: float, d: int, rng: np.random.Generator) -> int:
    """
    Draw ``k`` from the geometric law with mean ``kstar`` truncated to ``{1..d}``,
    by inversion.
    """
    if kstar < 1.0:
        raise ValueError(f"kstar must be at least 1, got {kstar}")
    if kstar == 1.0 or d == 1:
        return 1
    r = 1.0 - 1.0 / kstar
    u = rng.random()
    k = 1 + int(np.floor(np.log1p(-u * (1.0 - r**d)) / np.log(r)))
    return min(max(k, 1), d)


def _subset(perm: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """First ``k`` positions of a partial Fisher-Yates shuffle of ``perm``."""
    d = perm.shape[0]
    for j in range(k):
        r = int(rng.integers(j, d))
        perm[j], perm[r] = perm[r], perm[j]
    return perm[:k].copy()


def _bernoulli_log(p: float, bit: int) -> float:
    q = p if bit else 1.0 - p
    return float(np.log(q)) if q > 0 else -np.inf


# ---------------------------------------------------------------------------
# Transition
# ---------------------------------------------------------------------------


def mg_step(
    target: PosteriorModel,
    state: ChainState,
    kernel: KernelKind,
    rng: np.random.Generator,
    kstar: float = 1.0,
    stats: Optional[AdaptiveStats] = None,
) -> bool:
    """
    Advance ``state`` by one metropolised Gibbs transition in place.

    Returns whether the state changed. The Gibbs kernel always updates a
    single component and is charged one evaluation per visit; the other
    kernels evaluate the target only when the proposal differs from ``x``.
    """
    x = state.x
    d = x.shape[0]
    state.t += 1

    if kernel == KernelKind.GIBBS:
        i = int(_subset(state.perm, 1, rng)[0])
        p, log_pi_f = _gibbs(target, x, state.log_pi, i)
        state.evals += 1
        if (rng.random() < p) == bool(x[i]):
            return False
        state.proposed += 1
        state.accepted += 1
        state.moves += 1
        state.x = _flip(x, i)
        state.log_pi = log_pi_f
        return True

    if kernel == KernelKind.AMG and stats is None:
        raise ValueError("The adaptive kernel needs AdaptiveStats")

    k = sample_block_size(kstar, d, rng)
    block = _subset(state.perm, k, rng)
    y = x.copy()
    log_fwd = 0.0
    if kernel == KernelKind.MMG:
        y[block] ^= 1
    else:
        for i in block:
            p = conditional_prob_amg(stats, x, i)
            y[i] = rng.random() < p
            log_fwd += _bernoulli_log(p, y[i])
    if np.array_equal(y, x):
        return False

    log_bwd = 0.0
    if kernel == KernelKind.AMG:
        for i in block:
            log_bwd += _bernoulli_log(conditional_prob_amg(stats, y, i), x[i])

    log_pi_y = target.score(y)
    state.evals += 1
    state.proposed += 1
    if np.isneginf(log_pi_y):
        return False
    log_ratio = log_pi_y - state.log_pi + log_bwd - log_fwd
    if np.isneginf(state.log_pi) or np.log(rng.random()) < min(0.0, log_ratio):
        state.x = y
        state.log_pi = log_pi_y
        state.accepted += 1
        state.moves += 1
        return True
    return False
