"""
Synthetic regression problems with strongly dependent posteriors.

The response is a sum of latent factors and every covariate is a noisy
proxy of one factor, so proxies of the same factor are interchangeable and
the posterior over models has several competing modes.

With the default noise levels every factor needs exactly one of its
proxies: leaving a factor out costs tens of nats, a second proxy of the
same factor about one. ``noise=mu/2`` and ``response_noise=0`` give the
noisier construction in which the proxies carry almost no signal.
"""

from typing import Optional

import numpy as np

from smcselect.utils import SeedLike, as_generator

from .dataset import RawDataset
from .design import Column, ColumnKind, DesignMatrix

PROXY_NOISE = 0.15
RESPONSE_NOISE = 1.0


def correlated_dataset(
    seed: SeedLike,
    n_latent: int = 5,
    proxies: int = 2,
    m: int = 100,
    mu: float = 10.0,
    noise: Optional[float] = PROXY_NOISE,
    response_noise: float = RESPONSE_NOISE,
) -> RawDataset:
    """
    Draw latent factors ``v_l ~ N(+-mu, I_m)`` (signs alternating, first
    negative), ``y = sum_l v_l + N(0, response_noise^2 I_m)`` and
    ``proxies`` covariates per factor ``z ~ N(v_l, noise^2 I_m)``;
    ``noise=None`` means ``mu/2``. Covariates are named ``z1 .. zd`` in
    factor order.
    """
    if n_latent < 1 or proxies < 1:
        raise ValueError("n_latent and proxies must be positive")
    if m < 2:
        raise ValueError(f"Need at least 2 observations, got {m}")
    if noise is None:
        noise = mu / 2.0
    if noise <= 0 or response_noise < 0:
        raise ValueError(f"Invalid noise levels {noise}, {response_noise}")
    rng = as_generator(seed)
    means = np.where(np.arange(n_latent) % 2 == 0, -mu, mu)
    V = rng.normal(loc=means, scale=1.0, size=(m, n_latent))
    Z = np.repeat(V, proxies, axis=1) + rng.normal(scale=noise, size=(m, n_latent * proxies))
    y = V.sum(axis=1) + rng.normal(scale=response_noise, size=m)
    names = tuple(f"z{k + 1}" for k in range(n_latent * proxies))
    return RawDataset("y", y, names, Z)


def toy_dataset(
    seed: SeedLike,
    m: int = 100,
    mu: float = 10.0,
    noise: Optional[float] = PROXY_NOISE,
    response_noise: float = RESPONSE_NOISE,
) -> RawDataset:
    """Two factors with two proxies each: z1, z2 follow v1 and z3, z4 follow v2."""
    return correlated_dataset(
        seed, n_latent=2, proxies=2, m=m, mu=mu, noise=noise, response_noise=response_noise
    )


def _as_design(raw: RawDataset, add_constant: bool) -> DesignMatrix:
    design = DesignMatrix.from_raw(raw)
    if not add_constant:
        return design
    Z = np.column_stack([np.ones(raw.m), design.Z])
    columns = [Column("const", ColumnKind.CONSTANT)] + design.columns
    return DesignMatrix(design.y, Z, columns)


def generate_toy(
    seed: SeedLike,
    m: int = 100,
    mu: float = 10.0,
    add_constant: bool = False,
    noise: Optional[float] = PROXY_NOISE,
    response_noise: float = RESPONSE_NOISE,
) -> DesignMatrix:
    """The four-covariate toy problem, deterministic given ``seed``."""
    raw = toy_dataset(seed, m=m, mu=mu, noise=noise, response_noise=response_noise)
    return _as_design(raw, add_constant)


def generate_correlated(
    seed: SeedLike,
    n_latent: int = 5,
    proxies: int = 2,
    m: int = 100,
    mu: float = 10.0,
    add_constant: bool = False,
    noise: Optional[float] = PROXY_NOISE,
    response_noise: float = RESPONSE_NOISE,
) -> DesignMatrix:
    """Design of ``n_latent * proxies`` proxy covariates."""
    raw = correlated_dataset(
        seed, n_latent=n_latent, proxies=proxies, m=m, mu=mu,
        noise=noise, response_noise=response_noise,
    )
    return _as_design(raw, add_constant)
