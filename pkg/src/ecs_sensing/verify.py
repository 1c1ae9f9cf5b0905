"""Seeded closed-form vs oracle consistency suite behind ``ecs-sensing verify``."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .ecs import EcsParams, photon_statistics
from .intensity import phase_error, sz_statistics
from .lossless import qfi_pure
from .lossy import LOSSLESS, LossChannel, apply_loss, qfi_lossy, spectral_decomposition

FD_STEP = 1e-5
# second moments weight the Fock tail by n^2, so moment checks truncate further out
MOMENT_TAIL_TOL = 1e-16
SLOPE_FLOOR = 1e-3

# base tolerance per check; the effective threshold is min(base, --tol)
CHECKS = {
    "dual_formula_qfi": 1e-12,
    "photon_moments_oracle": 1e-10,
    "pure_qfi_oracle": 1e-8,
    "lossy_qfi_oracle": 1e-7,
    "trace": 1e-10,
    "hermiticity": 1e-12,
    "positivity": 1e-12,
    "purity": 1e-10,
    "eigenvalues_closed_vs_numeric": 1e-10,
    "lossless_reduction": 1e-8,
    "phi_independence": 1e-10,
    "k_parity": 1e-12,
    "alpha_phase_invariance": 1e-12,
    "sz_moments_oracle": 1e-7,
    "slope_finite_difference": 1e-6,
    "crb_ordering": 1e-9,
}


@dataclass
class Sample:
    alpha: complex
    k: float
    loss: float
    phi: float

    def describe(self) -> str:
        return (f"(alpha={self.alpha.real:.6f}{self.alpha.imag:+.6f}j, k={self.k:.6f}, "
                f"R={self.loss:.6f}, phi={self.phi:.6f})")


@dataclass
class CheckResult:
    name: str
    threshold: float
    max_deviation: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def draw_samples(count: int, seed: int) -> list[Sample]:
    """Deterministic draws with (1 + k^2)|alpha|^2 <= 6 so the tail-rule cutoff stays below 64."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        k = float(rng.uniform(1.0, 5.0)) * float(rng.choice([-1.0, 1.0]))
        a2_max = min(2.0, 6.0 / (1.0 + k * k))
        a2 = float(rng.uniform(0.05, a2_max))
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        out.append(Sample(
            alpha=math.sqrt(a2) * cmath.exp(1j * theta),
            k=k,
            loss=float(rng.uniform(0.0, 0.6)),
            phi=float(rng.uniform(0.05, math.pi - 0.05)),
        ))
    return out


def _rel(a: float, b: float, floor: float = 1e-300) -> float:
    return abs(a - b) / max(abs(b), floor)


def _number_moments_numeric(params: EcsParams, cutoff: int | None):
    psi = oracle.ecs_vector(params, 0.0, cutoff, tail_tol=MOMENT_TAIL_TOL)
    prob = np.abs(psi.amplitudes) ** 2
    n = np.arange(psi.cutoff, dtype=float)
    n1, n2 = n[:, None], n[None, :]
    tot = n1 + n2
    return {
        "n1": float(np.sum(prob * n1)),
        "n2": float(np.sum(prob * n2)),
        "n_total": float(np.sum(prob * tot)),
        "n1_sq": float(np.sum(prob * n1 ** 2)),
        "n2_sq": float(np.sum(prob * n2 ** 2)),
        "n_total_sq": float(np.sum(prob * tot ** 2)),
    }


def evaluate_sample(s: Sample, cutoff: int | None = None) -> dict[str, float]:
    """Deviation of every check for one parameter draw."""
    params = EcsParams(s.alpha, s.k)
    channel = LossChannel.from_loss(s.loss)
    dev = {}

    pure = qfi_pure(params)
    c = pure.components
    dev["dual_formula_qfi"] = _rel(c["total_number_form"], c["variance_form"])

    stats = photon_statistics(params)
    numeric = _number_moments_numeric(params, cutoff)
    dev["photon_moments_oracle"] = max(_rel(getattr(stats, key), val) for key, val in numeric.items())

    rho_pure = oracle.build_density_matrix(params, LOSSLESS, s.phi, cutoff)
    dev["pure_qfi_oracle"] = _rel(oracle.qfi_numeric(lambda _: rho_pure, s.phi), pure.qfi)

    rho = oracle.build_density_matrix(params, channel, s.phi, cutoff)
    lossy = qfi_lossy(params, channel, s.phi)
    dev["lossy_qfi_oracle"] = _rel(oracle.qfi_numeric(lambda _: rho, s.phi), lossy.qfi)

    lam = np.linalg.eigvalsh(rho.entries)
    spec = spectral_decomposition(apply_loss(params, channel, s.phi))
    dev["trace"] = abs(rho.trace - 1.0)
    dev["hermiticity"] = rho.hermiticity_error()
    dev["positivity"] = max(0.0, -float(lam[0]))
    dev["purity"] = abs(spec.lambda_plus ** 2 + spec.lambda_minus ** 2 - rho.purity())
    top = lam[::-1][:2]
    dev["eigenvalues_closed_vs_numeric"] = max(abs(top[0] - spec.lambda_plus),
                                               abs(top[1] - spec.lambda_minus))

    dev["lossless_reduction"] = _rel(qfi_lossy(params, LOSSLESS).qfi, pure.qfi)
    dev["phi_independence"] = _rel(qfi_lossy(params, channel, 0.3).qfi,
                                   qfi_lossy(params, channel, 1.1).qfi)
    flipped = EcsParams(s.alpha, -s.k)
    dev["k_parity"] = max(_rel(qfi_pure(flipped).qfi, pure.qfi),
                          _rel(qfi_lossy(flipped, channel).qfi, lossy.qfi))
    rotated = EcsParams(abs(s.alpha), s.k)
    dev["alpha_phase_invariance"] = max(_rel(qfi_pure(rotated).qfi, pure.qfi),
                                        _rel(qfi_lossy(rotated, channel).qfi, lossy.qfi))

    sz = sz_statistics(params, channel, s.phi)
    mean_ref, second_ref = oracle.observable_moments_numeric(rho)
    dev["sz_moments_oracle"] = max(_rel(sz.mean, mean_ref, 1e-9), _rel(sz.second_moment, second_ref, 1e-9))

    if abs(sz.slope) > SLOPE_FLOOR:
        up = sz_statistics(params, channel, s.phi + FD_STEP).mean
        down = sz_statistics(params, channel, s.phi - FD_STEP).mean
        dev["slope_finite_difference"] = _rel(sz.slope, (up - down) / (2 * FD_STEP))
    else:
        dev["slope_finite_difference"] = 0.0

    pe = phase_error(params, channel, s.phi)
    dev["crb_ordering"] = 0.0 if pe.degenerate else max(0.0, pe.crb - pe.delta_phi)
    return dev


def run_verification(tol: float, samples: int, seed: int, cutoff: int | None = None):
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    results = {name: CheckResult(name, min(base, tol)) for name, base in CHECKS.items()}
    for s in draw_samples(samples, seed):
        for name, value in evaluate_sample(s, cutoff).items():
            res = results[name]
            res.max_deviation = max(res.max_deviation, value)
            if not value <= res.threshold:
                res.failures.append(s.describe())
    return list(results.values())


def format_report(results: list[CheckResult], samples: int, seed: int) -> str:
    lines = [f"verify: samples={samples} seed={seed}"]
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name:<{width}} max_dev={r.max_deviation:.3e} threshold={r.threshold:.1e}")
        for tup in r.failures:
            lines.append(f"     failing {tup}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
