"""Intensity-difference readout S_z = (a^dag a - b^dag b)/2 after the second 50:50 splitter.

The second splitter maps each coherent branch |x, y> to another coherent
product |u, v>, so all moments reduce to coherent-state matrix elements.
With p = u_b^* u_a and q = v_b^* v_a the normal-ordered forms give

    <psi_b| S_z   |psi_a> = <psi_b|psi_a> (p - q) / 2
    <psi_b| S_z^2 |psi_a> = <psi_b|psi_a> ((p - q)^2 + p + q) / 4

and the mixed-state expectation is the lambda-weighted sum over the two
eigenvectors M(eta |psi_1> + |psi_2>).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .ecs import EcsParams, coherent_overlap
from .lossy import LossChannel, apply_loss, qfi_lossy, spectral_decomposition, split

DEGENERATE_SLOPE = 1e-14


@dataclass(frozen=True)
class SzStatistics:
    mean: float
    second_moment: float
    variance: float
    slope: float
    phi: float


@dataclass(frozen=True)
class PhaseSensitivity:
    """Error-propagation phase uncertainty and the matching Cramer-Rao bound.

    ``delta_phi`` is ``math.inf`` and ``degenerate`` is set when the signal
    slope vanishes.
    """

    delta_phi: float
    phi: float
    crb: float
    degenerate: bool = False


def _branch_elements(state):
    """Matrix elements of S_z, S_z^2 and dS_z/dphi between output branches.

    Returns three 2x2 nested lists indexed [a][b] = <psi_a| O |psi_b>.
    """
    x, y = state.mode1, state.mode2
    # d/dphi acts on mode 2 only: y -> i y
    branches = [(x, y, 1j * y), (-x, -y, -1j * y)]
    out = []
    for bx, by, dy in branches:
        u, v = split(bx, by, 0.5)
        du, dv = split(0j, dy, 0.5)
        out.append((u, v, du, dv))

    sz = [[0j, 0j], [0j, 0j]]
    sz2 = [[0j, 0j], [0j, 0j]]
    dsz = [[0j, 0j], [0j, 0j]]
    for a in range(2):
        ua, va, dua, dva = out[a]
        for b in range(2):
            ub, vb, dub, dvb = out[b]
            ov = coherent_overlap(ua, ub) * coherent_overlap(va, vb)
            p = ua.conjugate() * ub
            q = va.conjugate() * vb
            dp = dua.conjugate() * ub + ua.conjugate() * dub
            dq = dva.conjugate() * vb + va.conjugate() * dvb
            sz[a][b] = ov * (p - q) / 2
            sz2[a][b] = ov * ((p - q) ** 2 + p + q) / 4
            # the branch overlap is phi-independent
            dsz[a][b] = ov * (dp - dq) / 2
    return sz, sz2, dsz


def _eigen_weighted(op, spec) -> float:
    total = 0.0
    for lam, eta, m in ((spec.lambda_plus, spec.eta_plus, spec.m_plus),
                        (spec.lambda_minus, spec.eta_minus, spec.m_minus)):
        if lam == 0.0:
            continue
        val = eta * eta * op[0][0] + op[1][1] + eta * (op[0][1] + op[1][0])
        total += lam * m * m * val.real
    return total


def sz_statistics(params: EcsParams, channel: LossChannel, phi: float) -> SzStatistics:
    state = apply_loss(params, channel, phi)
    spec = spectral_decomposition(state)
    if spec.lambda_minus == 0.0 and state.one_minus_s == 0.0:
        # both branches coincide with the vacuum
        return SzStatistics(0.0, 0.0, 0.0, 0.0, float(phi))
    sz, sz2, dsz = _branch_elements(state)
    mean = _eigen_weighted(sz, spec)
    second = _eigen_weighted(sz2, spec)
    slope = _eigen_weighted(dsz, spec)
    return SzStatistics(mean, second, second - mean * mean, slope, float(phi))


def phase_error(params: EcsParams, channel: LossChannel, phi: float) -> PhaseSensitivity:
    stats = sz_statistics(params, channel, phi)
    crb = qfi_lossy(params, channel).delta_phi_min
    if abs(stats.slope) < DEGENERATE_SLOPE:
        return PhaseSensitivity(math.inf, stats.phi, crb, degenerate=True)
    delta = math.sqrt(max(stats.variance, 0.0)) / abs(stats.slope)
    return PhaseSensitivity(delta, stats.phi, crb)


def optimal_phase_error(
    params: EcsParams,
    channel: LossChannel,
    grid: Iterable[float],
    rtol: float = 1e-12,
) -> tuple[float, float]:
    """Grid point with the smallest delta_phi, skipping degenerate points.

    Values within ``rtol`` of the minimum count as ties; the smallest phi wins.
    """
    grid = [float(p) for p in grid]
    if not grid:
        raise ValueError("phase grid is empty")
    results = [phase_error(params, channel, p) for p in grid]
    valid = [r for r in results if not r.degenerate]
    if not valid:
        raise ValueError("every grid point has a vanishing slope")
    best = min(r.delta_phi for r in valid)
    ties = [r for r in valid if r.delta_phi <= best * (1.0 + rtol)]
    star = min(ties, key=lambda r: r.phi)
    return star.phi, star.delta_phi
