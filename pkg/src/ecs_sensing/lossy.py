"""Photon loss on both interferometer arms and the resulting mixed-state QFI.

Each arm passes a fictitious beam splitter of transmission T whose second
port starts in vacuum. Tracing out the two environment modes leaves a rank-2
mixture of the branch states |sqrt(T) a, sqrt(T) k a e^{i phi}> and its
negative, with branch overlap s = exp(-2T(1+k^2)|a|^2) and environment
coherence c = exp(-2R(1+k^2)|a|^2). Its eigenvalues are N^2(1 +- s)(1 +- c)
and its eigenvectors the symmetric / antisymmetric branch combinations.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .ecs import EcsParams, amplitude_for_mean_photon, normalization, photon_statistics, safe_exp
from .lossless import QfiReport, make_report


@dataclass(frozen=True)
class LossChannel:
    """Equal loss on both arms. Build with ``from_loss`` or ``from_angle``."""

    transmission: float
    loss: float

    def __post_init__(self):
        T, R = float(self.transmission), float(self.loss)
        if not (0.0 <= T <= 1.0 and 0.0 <= R <= 1.0):
            raise ValueError(f"transmission and loss must lie in [0, 1], got T={T}, R={R}")
        if abs(T + R - 1.0) > 1e-15:
            raise ValueError(f"T + R must equal 1, got T={T}, R={R}")
        object.__setattr__(self, "transmission", T)
        object.__setattr__(self, "loss", R)

    @classmethod
    def from_loss(cls, loss: float) -> "LossChannel":
        loss = float(loss)
        return cls(transmission=1.0 - loss, loss=loss)

    @classmethod
    def from_transmission(cls, transmission: float) -> "LossChannel":
        transmission = float(transmission)
        return cls(transmission=transmission, loss=1.0 - transmission)

    @classmethod
    def from_angle(cls, gamma: float) -> "LossChannel":
        return cls.from_transmission(math.cos(gamma / 2.0) ** 2)

    @property
    def gamma(self) -> float:
        """Mixing angle with T = cos^2(gamma / 2), in [0, pi]."""
        return 2.0 * math.acos(math.sqrt(self.transmission))


LOSSLESS = LossChannel(1.0, 0.0)


def split(a: complex, b: complex, transmission: float) -> tuple[complex, complex]:
    """Exact beam-splitter action on a coherent product |a>|b>.

    Uses a_1^dag -> sqrt(T) a_1^dag + i sqrt(R) a_2^dag (and symmetrically),
    so |a>|b> maps to |sqrt(T) a + i sqrt(R) b>|i sqrt(R) a + sqrt(T) b>.
    """
    t = math.sqrt(transmission)
    r = math.sqrt(1.0 - transmission)
    return t * a + 1j * r * b, 1j * r * a + t * b


@dataclass(frozen=True)
class ReducedState:
    """Sensor-mode state after loss, described by its first branch.

    The second branch has negated amplitudes. ``one_minus_s`` and
    ``one_minus_c`` are carried separately to keep small-amplitude accuracy.
    """

    params: EcsParams
    channel: LossChannel
    phi: float
    mode1: complex
    mode2: complex
    env1: complex
    env2: complex
    s: float
    c: float
    one_minus_s: float
    one_minus_c: float
    norm: float


@dataclass(frozen=True)
class SpectralDecomposition:
    lambda_plus: float
    lambda_minus: float
    eta_plus: float
    eta_minus: float
    m_plus: float
    m_minus: float
    Lambda: float

    @property
    def rank(self) -> int:
        return 1 if self.lambda_minus == 0.0 else 2


def apply_loss(params: EcsParams, channel: LossChannel, phi: float = 0.0) -> ReducedState:
    T, R = channel.transmission, channel.loss
    a = params.alpha
    b = params.k * a * cmath.exp(1j * phi)
    mode1, env1 = split(a, 0j, T)
    mode2, env2 = split(b, 0j, T)
    x = params.weight
    return ReducedState(
        params=params,
        channel=channel,
        phi=float(phi),
        mode1=mode1,
        mode2=mode2,
        env1=env1,
        env2=env2,
        s=safe_exp(-2.0 * T * x),
        c=safe_exp(-2.0 * R * x),
        one_minus_s=-math.expm1(-2.0 * T * x),
        one_minus_c=-math.expm1(-2.0 * R * x),
        norm=normalization(params),
    )


def spectral_decomposition(state: ReducedState) -> SpectralDecomposition:
    n2 = state.norm ** 2
    lam_p = n2 * (1.0 + state.s) * (1.0 + state.c)
    lam_m = n2 * state.one_minus_s * state.one_minus_c
    # |lambda_+-> = M_+-(eta_+- |phi_1> + |phi_2>), eta = +-1 for equal branch weights
    m_p = (2.0 * (1.0 + state.s)) ** -0.5
    m_m = (2.0 * state.one_minus_s) ** -0.5 if state.one_minus_s > 0.0 else 0.0
    if m_m == 0.0:
        lam_m = 0.0
    return SpectralDecomposition(
        lambda_plus=lam_p,
        lambda_minus=lam_m,
        eta_plus=1.0,
        eta_minus=-1.0,
        m_plus=m_p,
        m_minus=m_m,
        Lambda=lam_p - lam_m,
    )


def qfi_lossy(params: EcsParams, channel: LossChannel, phi: float = 0.0) -> QfiReport:
    """Mixed-state QFI of the lossy sensor state.

    With phi-independent eigenvalues the QFI splits into eigenvector terms
    F1 = 4 lam <l'|l'>, F2 = 4 lam |<l'|l>|^2 and cross terms
    F3 = 8 lam_+ lam_- / (lam_+ + lam_-) |<l'_+-|l_-+>|^2; all three are
    returned in ``components``.
    """
    state = apply_loss(params, channel, phi)
    spec = spectral_decomposition(state)
    n_bar = photon_statistics(params).n_total
    if channel.transmission == 0.0 or params.alpha_sq == 0.0:
        return make_report(0.0, n_bar, degenerate=True)

    b = abs(state.mode2) ** 2  # T k^2 |alpha|^2
    s = state.s
    comps = {}
    total = 0.0
    branches = (("+", spec.lambda_plus, spec.eta_plus, spec.m_plus),
                ("-", spec.lambda_minus, spec.eta_minus, spec.m_minus))
    for sign, lam, eta, m in branches:
        if lam == 0.0:
            comps[f"F1{sign}"] = comps[f"F2{sign}"] = 0.0
            continue
        f1 = 4.0 * lam * m**2 * b * ((1 + eta**2) * (1 + b) - 2 * eta * (1 - b) * s)
        f2 = 4.0 * lam * m**4 * b**2 * ((1 + eta**2) - 2 * eta * s) ** 2
        comps[f"F1{sign}"], comps[f"F2{sign}"] = f1, f2
        total += f1 - f2

    degenerate = spec.rank == 1
    if degenerate:
        comps["F3+"] = comps["F3-"] = 0.0
    else:
        lp, lm = spec.lambda_plus, spec.lambda_minus
        pref = 8.0 * lp * lm / (lp + lm) * spec.m_plus**2 * spec.m_minus**2 * b**2
        for sign, e1, e2 in (("+", spec.eta_plus, spec.eta_minus), ("-", spec.eta_minus, spec.eta_plus)):
            f3 = pref * abs((1 + e1 * e2) - s * (e1 + e2)) ** 2
            comps[f"F3{sign}"] = f3
            total -= f3
    return make_report(total, n_bar, degenerate=degenerate, components=comps)


def qfi_lossy_at_mean_photon(n_bar: float, k: float, loss: float) -> QfiReport:
    """Lossy QFI at input mean photon number ``n_bar`` (before loss)."""
    channel = LossChannel.from_loss(loss)
    alpha = amplitude_for_mean_photon(n_bar, k)
    report = qfi_lossy(EcsParams(alpha, k), channel)
    return make_report(report.qfi, float(n_bar), degenerate=report.degenerate,
                       components=report.components)
