"""Monte Carlo draws of initial pair positions.

Three generators for the transverse coordinates (y1, y2):

* exact_rejection draws from the true joint density of the pair state, so
  ensembles transported by the guidance law stay distributed like |Psi|^2.
* independent_gaussian puts particle 1 in the upper packet and particle 2 in
  the lower one, ignoring exchange symmetry. For well-separated slits it is
  statistically indistinguishable from the exact density.
* all_symmetric draws particle 1 from the upper packet and forces
  y2 = -y1, so every pair starts mirror-symmetric about the axis.

Longitudinal coordinates start at x = 0 and t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RejectionStallError
from .params import PairConfiguration, PhysicalParams, SpinStatistics

_METHODS = ("exact_rejection", "independent_gaussian", "all_symmetric")
_BATCH = 4096  # fixed so the RNG stream consumed is reproducible
_STALL_MIN_PROPOSALS = 8192
_STALL_RATE = 1e-3


@dataclass(frozen=True)
class SamplerConfig:
    method: str = "exact_rejection"
    n_pairs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if self.n_pairs < 1:
            raise ValueError("n_pairs must be >= 1")


def _envelope_draw(n: int, beta: float, s: float, rng: np.random.Generator) -> np.ndarray:
    """Equal mixture of the two packet-product Gaussians, width s (packet units)."""
    swap = rng.random(n) < 0.5
    mu1 = np.where(swap, -beta, beta)
    centers = np.stack([mu1, -mu1], axis=1)
    return centers + s * rng.normal(size=(n, 2))


def sample_joint_y(
    n: int,
    t: float,
    stats: SpinStatistics,
    p: PhysicalParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw n transverse pairs (m) from the exact joint density at time t.

    Rejection from the interference-free packet mixture. The acceptance
    ratio reduces to (1 + q + sign * 2 sqrt(q) cos(phi)) / (c (1 + q)) with
    q = min(F, G)/max(F, G), which is computed in log space and never
    overflows. The envelope constant is c = 2 except for the fermion state
    at t = 0, where the interference term is nonpositive and c = 1 works.

    Raises RejectionStallError if the running acceptance rate falls below
    1e-3 (the envelope no longer covers the density efficiently).
    """
    if p.ky != 0.0:
        raise ValueError("sampling requires ky = 0")
    T = t / p.tau
    s2 = 1.0 + T * T
    s = math.sqrt(s2)
    beta = p.beta
    sign = stats.sign
    c_env = 1.0 if (sign < 0 and T == 0.0) else 2.0

    out = np.empty((n, 2))
    filled = 0
    proposed = 0
    accepted = 0
    while filled < n:
        eta = _envelope_draw(_BATCH, beta, s, rng)
        diff = eta[:, 0] - eta[:, 1]
        log_q = -abs(2.0 * beta / s2) * np.abs(diff)
        q = np.exp(log_q)
        cos_phi = np.cos(T * beta * diff / s2)
        ratio = (1.0 + q + sign * 2.0 * np.exp(0.5 * log_q) * cos_phi) / (
            c_env * (1.0 + q)
        )
        keep = rng.random(_BATCH) < ratio
        kept = eta[keep]
        take = min(n - filled, kept.shape[0])
        out[filled : filled + take] = kept[:take]
        filled += take
        proposed += _BATCH
        accepted += int(keep.sum())
        if proposed >= _STALL_MIN_PROPOSALS and accepted < _STALL_RATE * proposed:
            raise RejectionStallError(
                f"acceptance rate {accepted / proposed:.2e} below {_STALL_RATE:.0e}"
            )
    return out * p.sigma0


def sample_initial(
    cfg: SamplerConfig,
    stats: SpinStatistics,
    p: PhysicalParams,
    rng: np.random.Generator | None = None,
) -> list[PairConfiguration]:
    """Draw cfg.n_pairs initial configurations at x = 0, t = 0.

    A fresh PCG64 generator is seeded from cfg.seed unless rng is supplied.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    n = cfg.n_pairs
    if cfg.method == "exact_rejection":
        ys = sample_joint_y(n, 0.0, stats, p, rng)
    elif cfg.method == "independent_gaussian":
        centers = np.array([p.Y, -p.Y])
        ys = centers + p.sigma0 * rng.normal(size=(n, 2))
    else:
        upper = p.Y + p.sigma0 * rng.normal(size=n)
        ys = np.stack([upper, -upper], axis=1)
    return [PairConfiguration(0.0, float(y1), 0.0, float(y2), 0.0) for y1, y2 in ys]
