"""Pure-state quantum Fisher information of the phase-encoded ECS."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .ecs import EcsParams, amplitude_for_mean_photon, photon_statistics

DUAL_FORM_RTOL = 1e-12


@dataclass(frozen=True)
class QfiReport:
    """QFI together with the reference curves it is compared against.

    ``sql_qfi`` is n_bar and ``heisenberg_qfi`` is n_bar**2.
    ``components`` holds intermediate terms for debugging against the oracle.
    """

    qfi: float
    delta_phi_min: float
    n_bar: float
    sql_qfi: float
    heisenberg_qfi: float
    degenerate: bool = False
    components: dict = field(default_factory=dict, compare=False)


def make_report(qfi: float, n_bar: float, *, degenerate=False, components=None) -> QfiReport:
    qfi = max(qfi, 0.0)
    return QfiReport(
        qfi=qfi,
        delta_phi_min=qfi ** -0.5 if qfi > 0 else math.inf,
        n_bar=n_bar,
        sql_qfi=n_bar,
        heisenberg_qfi=n_bar * n_bar,
        degenerate=degenerate,
        components=components or {},
    )


def qfi_pure(params: EcsParams) -> QfiReport:
    stats = photon_statistics(params)
    k = params.k
    variance_form = 4.0 * (stats.n2_sq - stats.n2 * stats.n2)
    total_form = (2.0 * k / (1.0 + k * k)) ** 2 * (stats.n_total + k * k * stats.var_total)
    if abs(variance_form - total_form) > DUAL_FORM_RTOL * max(abs(variance_form), 1e-300):
        warnings.warn(
            f"QFI forms disagree: {variance_form!r} vs {total_form!r} for {params}",
            RuntimeWarning,
            stacklevel=2,
        )
    return make_report(
        variance_form,
        stats.n_total,
        components={"variance_form": variance_form, "total_number_form": total_form},
    )


def qfi_at_mean_photon(n_bar: float, k: float) -> QfiReport:
    alpha = amplitude_for_mean_photon(n_bar, k)
    report = qfi_pure(EcsParams(alpha, k))
    return make_report(report.qfi, float(n_bar), components=report.components)


def asymptotic_bound(params: EcsParams) -> float:
    """k / (2 sqrt(<n> + k^2 Var(n))), reported alongside ``delta_phi_min``.

    Returns ``math.inf`` when the radicand vanishes (vacuum input). Exactly,
    delta_phi_min = (1 + 1/k^2) times this value, so it is approached from
    above as k grows rather than being an upper bound.
    """
    stats = photon_statistics(params)
    k = params.k
    radicand = stats.n_total + k * k * stats.var_total
    if radicand <= 0.0:
        return math.inf
    return abs(k) / (2.0 * math.sqrt(radicand))
