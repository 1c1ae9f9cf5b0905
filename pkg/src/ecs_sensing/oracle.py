"""Truncated Fock-space reference computations.

Nothing here uses the closed forms under test. Beam splitters act exactly on
coherent amplitudes; truncation only enters when states are materialized in
the (n1, n2) number basis, where moments, eigenvalues and the QFI are taken
numerically.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .ecs import EcsParams, coherent_overlap
from .lossy import LossChannel, split

TAIL_TOL = 1e-12
MIN_CUTOFF = 8
MAX_CUTOFF = 64
EIG_EPS = 1e-12


class TruncationWarning(UserWarning):
    """Probability weight beyond the Fock cutoff exceeds the tail tolerance."""


def poisson_tail_cutoff(mean: float, tol: float = TAIL_TOL) -> int:
    """Smallest d with P(n >= d) < tol for Poisson(mean), clamped to [8, 64]."""
    if mean <= 0.0:
        return MIN_CUTOFF
    nmax = int(mean + 40.0 * math.sqrt(mean) + 60.0)
    n = np.arange(nmax + 1)
    logp = n * math.log(mean) - mean - np.array([math.lgamma(i + 1.0) for i in n])
    pmf = np.exp(logp)
    tail = np.cumsum(pmf[::-1])[::-1]  # tail[d] = P(n >= d)
    below = np.nonzero(tail < tol)[0]
    d = int(below[0]) if below.size else nmax
    return min(max(d, MIN_CUTOFF), MAX_CUTOFF)


def auto_cutoff(*amps: complex, tol: float = TAIL_TOL) -> int:
    return poisson_tail_cutoff(max((abs(a) ** 2 for a in amps), default=0.0), tol)


def coherent_fock(amp: complex, cutoff: int, tol: float = TAIL_TOL) -> np.ndarray:
    """Fock amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n < cutoff."""
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    amp = complex(amp)
    out = np.empty(cutoff, dtype=complex)
    out[0] = math.exp(-abs(amp) ** 2 / 2.0)
    for n in range(1, cutoff):
        out[n] = out[n - 1] * amp / math.sqrt(n)
    tail = 1.0 - float(np.vdot(out, out).real)
    if tail > tol:
        warnings.warn(
            f"coherent amplitude {amp} loses {tail:.3g} of its norm at cutoff {cutoff}",
            TruncationWarning,
            stacklevel=2,
        )
    return out


@dataclass
class FockVector:
    cutoff: int
    amplitudes: np.ndarray  # shape (cutoff, cutoff), indexed [n1, n2]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)


def coherent_product(x: complex, y: complex, cutoff: int) -> FockVector:
    return FockVector(cutoff, np.outer(coherent_fock(x, cutoff), coherent_fock(y, cutoff)))


def ecs_vector(params: EcsParams, phi: float = 0.0, cutoff: int | None = None,
               tail_tol: float = TAIL_TOL) -> FockVector:
    """Explicit normalized Fock vector of the phase-shifted pure ECS."""
    x = params.alpha
    y = params.k * params.alpha * cmath.exp(1j * phi)
    d = cutoff or auto_cutoff(x, y, tol=tail_tol)
    psi = coherent_product(x, y, d).amplitudes + coherent_product(-x, -y, d).amplitudes
    return FockVector(d, psi / np.linalg.norm(psi))


@dataclass
class DensityMatrix:
    """Sensor-mode density matrix, materialized and as a coherent branch sum.

    rho = sum_ab weights[a, b] |x_a, y_a><x_b, y_b| with ``branches[a] = (x_a, y_a)``.
    ``n_modes`` is 1 for single-mode states (then y is ignored).
    """

    cutoff: int
    entries: np.ndarray
    branches: tuple
    weights: np.ndarray
    phi: float = 0.0
    n_modes: int = 2

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def eigh(self):
        return np.linalg.eigh(self.entries)

    def purity(self) -> float:
        return float(np.vdot(self.entries, self.entries).real)

    def phase_generator(self) -> np.ndarray:
        """Diagonal of the number operator of the phase-carrying (last) mode."""
        n = np.arange(self.cutoff, dtype=float)
        return n if self.n_modes == 1 else np.tile(n, self.cutoff)


def _materialize(vectors: list[np.ndarray], weights: np.ndarray) -> np.ndarray:
    V = np.stack(vectors, axis=1)
    return V @ weights @ V.conj().T


def branch_amplitudes(params: EcsParams, channel: LossChannel, phi: float):
    """Four-mode amplitudes (sensor1, sensor2, env1, env2) for both branches."""
    out = []
    for sign in (1.0, -1.0):
        a = sign * params.alpha
        b = sign * params.k * params.alpha * cmath.exp(1j * phi)
        s1, e1 = split(a, 0j, channel.transmission)
        s2, e2 = split(b, 0j, channel.transmission)
        out.append((s1, s2, e1, e2))
    return out


def build_density_matrix(
    params: EcsParams,
    channel: LossChannel,
    phi: float = 0.0,
    cutoff: int | None = None,
) -> DensityMatrix:
    amps = branch_amplitudes(params, channel, phi)

    def overlap(a, b, modes):
        return np.prod([coherent_overlap(a[m], b[m]) for m in modes])

    # weights[a, b] = <env_b|env_a> / <Psi|Psi>, the environment traced out analytically
    env = np.array([[overlap(amps[b], amps[a], (2, 3)) for b in range(2)] for a in range(2)])
    sysg = np.array([[overlap(amps[b], amps[a], (0, 1)) for b in range(2)] for a in range(2)])
    norm_sq = float(np.sum(env * sysg).real)
    weights = env / norm_sq

    d = cutoff or auto_cutoff(*(v for a in amps for v in a[:2]))
    branches = tuple((a[0], a[1]) for a in amps)
    vecs = [coherent_product(x, y, d).flat() for x, y in branches]
    return DensityMatrix(d, _materialize(vecs, weights), branches, weights, float(phi), 2)


def coherent_density_matrix(beta: complex, cutoff: int | None = None) -> DensityMatrix:
    """Single-mode coherent projector |beta><beta|."""
    d = cutoff or auto_cutoff(beta)
    v = coherent_fock(beta, d)
    w = np.ones((1, 1), dtype=complex)
    return DensityMatrix(d, _materialize([v], w), ((beta, 0j),), w, 0.0, 1)


def qfi_numeric(rho_builder: Callable[[float], DensityMatrix], phi: float = 0.0) -> float:
    """QFI from the spectral SLD sum for a phase imprinted by the last mode's number operator.

    d rho/d phi = i [n, rho] is formed exactly from the materialized matrix.
    """
    rho = rho_builder(phi)
    n = rho.phase_generator()
    drho = 1j * (n[:, None] - n[None, :]) * rho.entries
    lam, vecs = rho.eigh()
    A = vecs.conj().T @ drho @ vecs
    denom = lam[:, None] + lam[None, :]
    mask = denom > EIG_EPS
    return float(2.0 * np.sum(np.abs(A[mask]) ** 2 / denom[mask]))


def numeric_eigenvalues(rho: DensityMatrix, count: int = 2) -> np.ndarray:
    """Largest ``count`` eigenvalues, descending."""
    lam = np.linalg.eigvalsh(rho.entries)
    return lam[::-1][:count]


def observable_moments_numeric(rho: DensityMatrix, cutoff: int | None = None) -> tuple[float, float]:
    """(<S_z>, <S_z^2>) after a 50:50 splitter applied to each coherent branch."""
    out = [split(x, y, 0.5) for x, y in rho.branches]
    d = cutoff or max(rho.cutoff, auto_cutoff(*(a for pair in out for a in pair)))
    vecs = [coherent_product(u, v, d).flat() for u, v in out]
    n = np.arange(d, dtype=float)
    sz = 0.5 * (n[:, None] - n[None, :]).reshape(-1)
    mean = 0.0 + 0j
    second = 0.0 + 0j
    for a, va in enumerate(vecs):
        for b, vb in enumerate(vecs):
            w = rho.weights[a, b]
            if w == 0:
                continue
            mean += w * np.vdot(vb, sz * va)
            second += w * np.vdot(vb, sz * sz * va)
    return float(mean.real), float(second.real)
