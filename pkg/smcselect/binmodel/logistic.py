"""
Sparse logistic conditionals model.

Component ``i`` (in model order) is Bernoulli with log-odds
``b_ii + sum_{j in L_i} b_ij x_j``; components of the independent set use a
stored marginal instead. Sampling and evaluation walk the components in
model order through one code path, so the log density returned with a
draw is reproduced bit for bit by ``log_density``.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit, logit

from .sample import WeightedSample, weighted_moments

logger = logging.getLogger(__name__)

EPS_INDEPENDENT = 0.02
DELTA_ASSOCIATION = 0.075
PENALTY = 0.1
B_MAX = 25.0
MAX_ITER = 50
NEWTON_TOL = 1e-3
GRADIENT_TOL = 1e-2

_EMPTY = np.empty(0, dtype=np.intp)


class Structure(NamedTuple):
    """Independent-set mask and per-row predictor indices."""

    independent: np.ndarray
    predictors: Tuple[np.ndarray, ...]


def select_structure(
    xbar: np.ndarray,
    R: np.ndarray,
    eps: float = EPS_INDEPENDENT,
    delta: float = DELTA_ASSOCIATION,
) -> Structure:
    """
    Components with ``xbar_i`` outside ``(eps, 1 - eps)`` become independent.
    Every other component regresses on the earlier non-independent
    components whose correlation with it exceeds ``delta`` in absolute value;
    ``delta = 0`` keeps all of them.
    """
    xbar = np.asarray(xbar, dtype=float)
    independent = (xbar <= eps) | (xbar >= 1.0 - eps)
    predictors: List[np.ndarray] = []
    for i in range(xbar.shape[0]):
        if independent[i]:
            predictors.append(_EMPTY)
            continue
        candidates = ~independent[:i]
        if delta > 0:
            candidates &= np.abs(R[i, :i]) > delta
        predictors.append(np.flatnonzero(candidates).astype(np.intp))
    return Structure(independent, tuple(predictors))


@dataclass(frozen=True, eq=False)
class LogisticConditionalsModel:
    """
    Chain of logistic regressions on B^d.

    ``B`` is lower triangular in model order; ``order[i]`` is the problem
    component modelled at position ``i``. ``marginals`` holds the clamped
    weighted means used by independent rows. ``demoted`` lists positions
    moved to the independent set during fitting; they may still appear
    among the predictors of later rows.
    """

    B: np.ndarray
    predictors: Tuple[np.ndarray, ...]
    independent: np.ndarray
    marginals: np.ndarray
    order: np.ndarray
    p_min: float = 0.0
    demoted: Tuple[int, ...] = ()
    iterations: Optional[np.ndarray] = None
    gradient_norms: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        B = np.array(self.B, dtype=float)
        d = B.shape[0]
        if B.shape != (d, d):
            raise ValueError(f"B must be square, got {B.shape}")
        independent = np.array(self.independent, dtype=bool).ravel()
        order = np.array(self.order, dtype=np.intp).ravel()
        if independent.shape[0] != d or order.shape[0] != d:
            raise ValueError("independent and order must have length d")
        if not np.array_equal(np.sort(order), np.arange(d)):
            raise ValueError("order must be a permutation of 0..d-1")
        predictors = tuple(np.array(L, dtype=np.intp).ravel() for L in self.predictors)
        if len(predictors) != d:
            raise ValueError(f"Need {d} predictor sets, got {len(predictors)}")
        allowed = np.eye(d, dtype=bool)
        for i, L in enumerate(predictors):
            if L.size and (np.any(L >= i) or np.any(L < 0)):
                raise ValueError(f"Predictors of row {i} must precede it: {L}")
            if independent[i] and L.size:
                raise ValueError(f"Independent row {i} has predictors")
            allowed[i, L] = True
        if np.any(B[~allowed] != 0.0):
            raise ValueError("B has nonzero entries outside the predictor sets")
        if not 0.0 <= self.p_min <= 0.5:
            raise ValueError(f"p_min must lie in [0, 1/2], got {self.p_min}")
        marginals = np.clip(
            np.array(self.marginals, dtype=float).ravel(), self.p_min, 1.0 - self.p_min
        )
        for arr in (B, independent, order, marginals, *predictors):
            arr.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "independent", independent)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "predictors", predictors)
        object.__setattr__(self, "marginals", marginals)
        object.__setattr__(self, "demoted", tuple(int(i) for i in self.demoted))
        with np.errstate(divide="ignore"):
            object.__setattr__(self, "_log_p", np.log(marginals))
            object.__setattr__(self, "_log_1mp", np.log1p(-marginals))

    @classmethod
    def from_matrix(
        cls, B: np.ndarray, order: Optional[Sequence[int]] = None
    ) -> "LogisticConditionalsModel":
        """Model whose predictor sets are the nonzero strictly-lower entries of ``B``."""
        B = np.tril(np.asarray(B, dtype=float))
        d = B.shape[0]
        predictors = tuple(np.flatnonzero(B[i, :i]) for i in range(d))
        return cls(
            B=B,
            predictors=predictors,
            independent=np.zeros(d, dtype=bool),
            marginals=expit(np.diag(B)),
            order=np.arange(d) if order is None else np.asarray(order),
        )

    @property
    def d(self) -> int:
        return int(self.B.shape[0])

    def _walk(self, Y: np.ndarray, U: Optional[np.ndarray] = None) -> np.ndarray:
        """Log density of the rows of ``Y``; with ``U`` the rows are drawn first."""
        n = Y.shape[0]
        logq = np.zeros(n)
        for i in range(self.d):
            if self.independent[i]:
                if U is not None:
                    Y[:, i] = U[:, i] < self.marginals[i]
                logq += np.where(Y[:, i] == 1, self._log_p[i], self._log_1mp[i])
                continue
            eta = np.full(n, self.B[i, i])
            for j in self.predictors[i]:
                eta += self.B[i, j] * Y[:, j]
            if U is not None:
                Y[:, i] = U[:, i] < expit(eta)
            logq -= np.where(Y[:, i] == 1, np.logaddexp(0.0, -eta), np.logaddexp(0.0, eta))
        return logq

    def sample(self, rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
        """``size`` draws in problem order with their log densities."""
        U = rng.random((size, self.d))
        Y = np.zeros((size, self.d), dtype=np.uint8)
        logq = self._walk(Y, U)
        X = np.empty_like(Y)
        X[:, self.order] = Y
        return X, logq

    def log_density_many(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.uint8))
        return self._walk(np.ascontiguousarray(X[:, self.order]))

    def log_density(self, gamma: np.ndarray) -> float:
        return float(self.log_density_many(np.asarray(gamma)[None, :])[0])


class _RowFit(NamedTuple):
    coef: np.ndarray
    iterations: int
    converged: bool
    grad_norm: float


def _fit_row(
    X: np.ndarray,
    counts: np.ndarray,
    i: int,
    L: np.ndarray,
    p_i: float,
    start: Optional[np.ndarray],
    penalty: float,
    max_iter: int,
    tol: float,
) -> _RowFit:
    """Penalized Newton-Raphson for one row; coefficients are ``(b_L, b_ii)``."""
    n = X.shape[0]
    Z = np.column_stack([X[:, L], np.ones(n)])
    y = X[:, i]
    if start is None:
        b = np.zeros(Z.shape[1])
        b[-1] = logit(p_i)
    else:
        b = start.astype(float).copy()
    ridge = penalty * np.eye(Z.shape[1])
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        eta = Z @ b
        p = expit(eta)
        cq = counts * p * (1.0 - p)
        H = (Z * cq[:, None]).T @ Z + ridge
        rhs = Z.T @ (cq * eta + counts * (y - p))
        try:
            b_new = cho_solve(cho_factor(H, lower=True, check_finite=False), rhs, check_finite=False)
        except LinAlgError:
            return _RowFit(b, iterations, False, np.inf)
        if not np.all(np.isfinite(b_new)):
            return _RowFit(b, iterations, False, np.inf)
        step = np.max(np.abs(b_new - b))
        b = b_new
        if step < tol:
            converged = True
            break
    p = expit(Z @ b)
    grad = (Z.T @ (counts * (y - p)) - penalty * b) / n
    return _RowFit(b, iterations, converged, float(np.linalg.norm(grad)))


def fit_logistic_conditionals(
    sample: WeightedSample,
    init: Optional[LogisticConditionalsModel] = None,
    eps: float = EPS_INDEPENDENT,
    delta: float = DELTA_ASSOCIATION,
    penalty: float = PENALTY,
    b_max: float = B_MAX,
    max_iter: int = MAX_ITER,
    tol: float = NEWTON_TOL,
    grad_tol: float = GRADIENT_TOL,
    p_min: Optional[float] = None,
    order: Optional[Sequence[int]] = None,
    jobs: int = 1,
) -> LogisticConditionalsModel:
    """
    Fit the sparse model to a weighted sample.

    Each non-independent row maximizes the weighted log-likelihood (weights
    scaled to sum to n) minus ``penalty/2 |b|^2`` by Newton-Raphson, until
    every coefficient moves less than ``tol``. Rows that do not converge
    within ``max_iter``, exceed ``b_max`` in magnitude or keep a mean
    gradient norm above ``grad_tol`` become independent with their clamped
    weighted mean. Rows whose structure matches ``init`` start from its
    coefficients, the others from ``(0, ..., logit(xbar_i))``.
    A demoted row keeps its place as a predictor of later rows.
    """
    n, d = sample.n, sample.d
    if n < 2:
        raise ValueError("Fitting needs at least 2 particles")
    if p_min is None:
        p_min = 1.0 / (2.0 * n)
    if order is None:
        order = init.order if init is not None else np.arange(d)
    order = np.asarray(order, dtype=np.intp)

    local = sample.permuted(order)
    xbar, R = weighted_moments(local)
    structure = select_structure(xbar, R, eps=eps, delta=delta)
    marginals = np.clip(xbar, p_min, 1.0 - p_min)
    independent = structure.independent.copy()
    predictors = list(structure.predictors)

    X = local.X.astype(float)
    counts = n * local.w
    warm = init is not None and init.d == d and np.array_equal(init.order, order)

    def task(i: int) -> _RowFit:
        start = None
        if warm and not init.independent[i] and np.array_equal(init.predictors[i], predictors[i]):
            start = np.append(init.B[i, predictors[i]], init.B[i, i])
        return _fit_row(X, counts, i, predictors[i], marginals[i], start, penalty, max_iter, tol)

    rows = np.flatnonzero(~independent)
    if jobs > 1 and rows.size > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            fits = list(pool.map(task, rows))
    else:
        fits = [task(i) for i in rows]

    B = np.zeros((d, d))
    iterations = np.zeros(d, dtype=int)
    gradient_norms = np.zeros(d)
    demoted = []
    not_converged = 0
    for i, fit in zip(rows, fits):
        iterations[i] = fit.iterations
        gradient_norms[i] = fit.grad_norm
        too_large = not np.all(np.abs(fit.coef) <= b_max)
        if fit.converged and not too_large and fit.grad_norm <= grad_tol:
            B[i, predictors[i]] = fit.coef[:-1]
            B[i, i] = fit.coef[-1]
            continue
        not_converged += not fit.converged
        logger.debug(
            "Row %d (component %d) made independent: converged=%s max|b|=%.3g grad=%.3g",
            i, order[i], fit.converged, np.max(np.abs(fit.coef)), fit.grad_norm,
        )
        independent[i] = True
        predictors[i] = _EMPTY
        demoted.append(int(i))

    if not_converged:
        logger.warning(
            "%d of %d logistic rows did not converge in %d iterations and were made independent",
            not_converged, rows.size, max_iter,
        )

    return LogisticConditionalsModel(
        B=B,
        predictors=tuple(predictors),
        independent=independent,
        marginals=marginals,
        order=order,
        p_min=p_min,
        demoted=tuple(demoted),
        iterations=iterations,
        gradient_norms=gradient_norms,
    )
