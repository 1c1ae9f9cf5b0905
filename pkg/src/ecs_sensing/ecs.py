"""Two-mode entangled coherent states N(|a>|ka> + |-a>|-ka>).

Normalization, coherent-state overlaps, photon-number moments and the
inversion from a target total mean photon number back to |alpha|.
"""
from __future__ import annotations

import cmath
import math
import numbers
from dataclasses import dataclass

# exp() arguments below this are flushed to zero
EXP_FLOOR = -700.0


def safe_exp(arg: float) -> float:
    if arg < EXP_FLOOR:
        return 0.0
    return math.exp(arg)


def _check_k(k) -> float:
    if isinstance(k, (complex, numbers.Complex)) and not isinstance(k, numbers.Real):
        raise TypeError(f"asymmetry ratio k must be real, got {k!r}")
    k = float(k)
    if not math.isfinite(k):
        raise ValueError(f"asymmetry ratio k must be finite, got {k!r}")
    if k == 0.0:
        raise ValueError("asymmetry ratio k must be nonzero")
    return k


@dataclass(frozen=True)
class EcsParams:
    """Coherent amplitude ``alpha`` and real, nonzero asymmetry ratio ``k``."""

    alpha: complex
    k: float

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "k", _check_k(self.k))

    @property
    def alpha_sq(self) -> float:
        """|alpha|^2."""
        return abs(self.alpha) ** 2

    @property
    def weight(self) -> float:
        """(1 + k^2) |alpha|^2, the total coherent intensity of one branch."""
        return (1.0 + self.k * self.k) * self.alpha_sq


@dataclass(frozen=True)
class PhotonStatistics:
    n1: float
    n2: float
    n_total: float
    n1_sq: float
    n2_sq: float
    n_total_sq: float
    var_total: float


def coherent_overlap(beta: complex, gamma: complex) -> complex:
    """<beta|gamma> for two coherent states."""
    # -|b - g|^2/2 + i Im(b* g): same value, but the real part cannot go positive
    arg = complex(-abs(beta - gamma) ** 2 / 2.0, (beta.conjugate() * gamma).imag)
    if arg.real < EXP_FLOOR:
        return 0j
    return cmath.exp(arg)


def normalization(params: EcsParams) -> float:
    return (2.0 + 2.0 * safe_exp(-2.0 * params.weight)) ** -0.5


def _tanh_weight(x: float) -> float:
    # tanh(x) written as (1 - e^{-2x}) / (1 + e^{-2x}); expm1 keeps small x exact
    e = safe_exp(-2.0 * x)
    return -math.expm1(-2.0 * x) / (1.0 + e)


def photon_statistics(params: EcsParams) -> PhotonStatistics:
    a2 = params.alpha_sq
    k2 = params.k * params.k
    t = _tanh_weight(params.weight)
    n1 = a2 * t
    n2 = k2 * a2 * t
    n = n1 + n2
    n_sq = n + ((1.0 + k2) * a2) ** 2
    return PhotonStatistics(
        n1=n1,
        n2=n2,
        n_total=n,
        n1_sq=n1 + a2 * a2,
        n2_sq=n2 + (k2 * a2) ** 2,
        n_total_sq=n_sq,
        var_total=n_sq - n * n,
    )


def _mean_photon_of_weight(x: float) -> float:
    return x * math.tanh(x)


def amplitude_for_mean_photon(n_bar: float, k: float) -> float:
    """Return |alpha| whose ECS carries ``n_bar`` photons on average.

    Solves x tanh(x) = n_bar for x = (1 + k^2)|alpha|^2 by bisection. The
    map is strictly increasing and x - 1 < x tanh(x) <= x^2, so the root
    lies in [max(n_bar, sqrt(n_bar)) - 1, n_bar + 1].
    """
    k = _check_k(k)
    n_bar = float(n_bar)
    if not math.isfinite(n_bar) or n_bar < 0.0:
        raise ValueError(f"mean photon number must be finite and >= 0, got {n_bar!r}")
    if n_bar == 0.0:
        return 0.0

    lo = max(max(n_bar, math.sqrt(n_bar)) - 1.0, 0.0)
    hi = n_bar + 1.0
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _mean_photon_of_weight(mid) < n_bar:
            lo = mid
        else:
            hi = mid
    # pick the bracket end with the smaller residual
    x = min((lo, hi), key=lambda v: abs(_mean_photon_of_weight(v) - n_bar))
    return math.sqrt(x / (1.0 + k * k))
