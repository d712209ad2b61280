"""
Unnormalized log posterior of the Bayesian variable-selection model.

For a model indicator ``gamma`` the hierarchical Bayes score is

    -sum_i log c_ii - |gamma| log v - (w+m)/2 log(w lam / m + s2)

with ``C C' = Z_g'Z_g + v^-2 I`` and ``s2 = (y'y - |C^-1 Z_g'y|^2) / m``.
The BIC alternative is ``-|gamma|/2 log m - m/2 log s2_ml``. Constants
common to all models are never computed.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky, solve_triangular

from smcselect.data.design import DesignMatrix
from smcselect.model.base import Criterion

logger = logging.getLogger(__name__)

# Relative ridge for the saturated least-squares fit.
SATURATED_RIDGE = 1e-10
# Residual variance below this fraction of y'y/m means y lies in span(Z).
_SPAN_RTOL = 1e-12
# Cholesky pivot relative to the column norm below which Z_g'Z_g is singular.
_SINGULAR_RTOL = 1e-7


class PosteriorError(ArithmeticError):
    """Singular saturated fit or failed factorization."""


class Hyperparameters(NamedTuple):
    w: float
    lam: float
    v2: float


def default_hyperparameters(design: DesignMatrix, regularize: bool = True) -> Hyperparameters:
    """
    ``w = 4``, ``lam`` the residual variance of the saturated least-squares
    fit and ``v2 = 10 / lam``.

    The saturated normal equations are solved by Cholesky of
    ``Z'Z + 1e-10 tr(Z'Z)/d I`` unless ``regularize`` is off.

    Raises:
        PosteriorError: singular Gram matrix (without regularization) or a
            response in the column span of Z (``lam = 0``).
    """
    Z, y = design.Z, design.y
    m, d = Z.shape
    yy = float(y @ y)
    if d == 0:
        rss = yy
    else:
        gram = Z.T @ Z
        if regularize:
            gram[np.diag_indices(d)] += SATURATED_RIDGE * np.trace(gram) / d
        try:
            factor = cho_factor(gram, lower=True, check_finite=False)
        except LinAlgError as e:
            raise PosteriorError(f"Saturated Gram matrix is singular: {e}") from e
        beta = cho_solve(factor, Z.T @ y, check_finite=False)
        resid = y - Z @ beta
        rss = float(resid @ resid)
    lam = rss / m
    if not np.isfinite(lam) or lam <= _SPAN_RTOL * max(yy / m, np.finfo(float).tiny):
        raise PosteriorError(
            "Saturated fit has zero residual variance (response lies in the column span)"
        )
    logger.debug("Default hyperparameters: w=4, lambda=%.6g, v2=%.6g", lam, 10.0 / lam)
    return Hyperparameters(4.0, lam, 10.0 / lam)


@dataclass(frozen=True, eq=False)
class PosteriorModel:
    """
    Sufficient statistics and hyperparameters of a selection problem.

    Instances are immutable; all arrays are read-only so scores can be
    computed from many threads at once.
    """

    gram: np.ndarray
    b_full: np.ndarray
    yy: float
    m: int
    hyper: Hyperparameters
    criterion: Criterion = Criterion.HB
    constraints: Tuple[Tuple[int, int, int], ...] = ()
    always_included: Tuple[int, ...] = ()
    names: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        gram = np.array(self.gram, dtype=float)
        b_full = np.array(self.b_full, dtype=float).ravel()
        d = b_full.shape[0]
        if gram.shape != (d, d):
            raise ValueError(f"Gram matrix has shape {gram.shape}, expected ({d}, {d})")
        if not np.allclose(gram, gram.T, rtol=1e-10, atol=0.0):
            raise ValueError("Gram matrix is not symmetric")
        if self.m < 1:
            raise ValueError("m must be positive")
        hyper = Hyperparameters(*(float(h) for h in self.hyper))
        if min(hyper) <= 0:
            raise ValueError(f"Hyperparameters must be strictly positive, got {hyper}")
        triples = tuple(tuple(int(v) for v in t) for t in self.constraints)
        for t in triples:
            if len(t) != 3 or len(set(t)) != 3 or not all(0 <= v < d for v in t):
                raise ValueError(f"Invalid constraint triple {t} for d={d}")
        always = tuple(sorted({int(i) for i in self.always_included}))
        if any(not 0 <= i < d for i in always):
            raise ValueError(f"always_included {always} out of range for d={d}")
        if self.names and len(self.names) != d:
            raise ValueError(f"{len(self.names)} names for d={d}")
        gram.setflags(write=False)
        b_full.setflags(write=False)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "b_full", b_full)
        object.__setattr__(self, "yy", float(self.yy))
        object.__setattr__(self, "hyper", hyper)
        object.__setattr__(self, "criterion", Criterion(self.criterion))
        object.__setattr__(self, "constraints", triples)
        object.__setattr__(self, "always_included", always)
        object.__setattr__(self, "names", tuple(self.names))
        arr = np.array(triples, dtype=np.intp).reshape(-1, 3)
        object.__setattr__(self, "_ci", arr[:, 0])
        object.__setattr__(self, "_cj", arr[:, 1])
        object.__setattr__(self, "_ck", arr[:, 2])
        object.__setattr__(self, "_always", np.array(always, dtype=np.intp))

    @classmethod
    def from_design(
        cls,
        design: DesignMatrix,
        criterion: Criterion = Criterion.HB,
        constrained: bool = False,
        always_include_constant: bool = False,
        hyper: Optional[Hyperparameters] = None,
    ) -> "PosteriorModel":
        """Precompute ``Z'Z``, ``Z'y`` and ``y'y`` of a design."""
        Z, y = design.Z, design.y
        gram = Z.T @ Z
        gram = 0.5 * (gram + gram.T)
        if hyper is None:
            hyper = default_hyperparameters(design)
        always: Sequence[int] = ()
        if always_include_constant and design.constant_index is not None:
            always = (design.constant_index,)
        return cls(
            gram=gram,
            b_full=Z.T @ y,
            yy=float(y @ y),
            m=design.m,
            hyper=hyper,
            criterion=criterion,
            constraints=tuple(design.constraint_triples()) if constrained else (),
            always_included=tuple(always),
            names=tuple(design.names),
        )

    @property
    def d(self) -> int:
        return int(self.b_full.shape[0])

    @property
    def restricted(self) -> bool:
        """Whether part of B^d has zero mass."""
        return bool(self.constraints) or bool(self.always_included)

    def feasible(self, gamma: np.ndarray) -> bool:
        """Main-effect restrictions and forced inclusions hold for ``gamma``."""
        return bool(self.feasible_rows(np.asarray(gamma, dtype=np.uint8)[None, :])[0])

    def feasible_rows(self, X: np.ndarray) -> np.ndarray:
        """Row-wise feasibility of a binary matrix."""
        X = np.asarray(X, dtype=np.uint8)
        ok = np.ones(X.shape[0], dtype=bool)
        if self._ck.size:
            ok &= np.all(X[:, self._ck] <= (X[:, self._ci] & X[:, self._cj]), axis=1)
        if self._always.size:
            ok &= np.all(X[:, self._always] == 1, axis=1)
        return ok

    def log_posterior(self, gamma: np.ndarray) -> float:
        return log_posterior(self, gamma)

    def log_bic(self, gamma: np.ndarray) -> float:
        return log_bic(self, gamma)

    def score(self, gamma: np.ndarray) -> float:
        """Log target of the configured criterion."""
        if self.criterion == Criterion.BIC:
            return log_bic(self, gamma)
        return log_posterior(self, gamma)

    __call__ = score


def _factor(A: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, retried once with a small ridge."""
    try:
        return cholesky(A, lower=True, check_finite=False)
    except LinAlgError:
        ridge = SATURATED_RIDGE * max(float(np.trace(A)) / A.shape[0], 1.0)
        logger.debug("Cholesky failed for |gamma|=%d, retrying with ridge %.3g", A.shape[0], ridge)
        try:
            return cholesky(A + ridge * np.eye(A.shape[0]), lower=True, check_finite=False)
        except LinAlgError as e:
            raise PosteriorError(f"Cholesky factorization failed: {e}") from e


def log_posterior(model: PosteriorModel, gamma: np.ndarray) -> float:
    """Hierarchical Bayes log score; ``-inf`` outside the feasible set."""
    gamma = np.asarray(gamma, dtype=np.uint8)
    if model.restricted and not model.feasible(gamma):
        return -np.inf
    w, lam, v2 = model.hyper
    m = model.m
    offset = w * lam / m
    idx = np.flatnonzero(gamma)
    k = idx.size
    if k == 0:
        return float(-0.5 * (w + m) * np.log(offset + model.yy / m))
    A = model.gram[np.ix_(idx, idx)]
    A[np.diag_indices(k)] += 1.0 / v2
    L = _factor(A)
    z = solve_triangular(L, model.b_full[idx], lower=True, check_finite=False)
    sigma2 = (model.yy - np.sum(z * z)) / m
    value = (
        -np.sum(np.log(np.diag(L)))
        - 0.5 * k * np.log(v2)
        - 0.5 * (w + m) * np.log(offset + sigma2)
    )
    return float(value)


def log_bic(model: PosteriorModel, gamma: np.ndarray) -> float:
    """BIC log score; singular submodels and zero residual variance give ``-inf``."""
    gamma = np.asarray(gamma, dtype=np.uint8)
    if model.restricted and not model.feasible(gamma):
        return -np.inf
    m = model.m
    idx = np.flatnonzero(gamma)
    k = idx.size
    if k == 0:
        return float(-0.5 * m * np.log(model.yy / m))
    A = model.gram[np.ix_(idx, idx)]
    try:
        L = cholesky(A, lower=True, check_finite=False)
    except LinAlgError:
        return -np.inf
    pivots = np.diag(L)
    if np.any(pivots <= _SINGULAR_RTOL * np.sqrt(np.diag(A))):
        return -np.inf
    z = solve_triangular(L, model.b_full[idx], lower=True, check_finite=False)
    sigma2 = (model.yy - np.sum(z * z)) / m
    if not sigma2 > 0:
        return -np.inf
    return float(-0.5 * k * np.log(m) - 0.5 * m * np.log(sigma2))
