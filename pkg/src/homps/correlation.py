"""Second-order correlation analysis of the heralded output.

The heralded arm feeds a symmetric beam splitter with single-photon
detectors F and G on its outputs.  With negligible dark counts, the click
probabilities follow from the source statistics,

    Q_f = P_s eta_f / 2 + (eta_f - eta_f^2 / 4) P_m
    Q_fg = eta_f eta_g P_m / 2

(a coincidence needs the two photons of a multi-photon pulse to split and
both to be detected), and g2(0) = Q_fg / (Q_f Q_g).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from . import heralding, interference
from .errors import ParameterError, UndefinedG2Error
from .heralding import HeraldedStatistics


@dataclass(frozen=True)
class HbtConfig:
    """Detection efficiencies of the two correlation-analyzer detectors."""

    eta_f: float
    eta_g: float

    def __post_init__(self) -> None:
        for name, value in (("eta_f", self.eta_f), ("eta_g", self.eta_g)):
            if not 0.0 <= value <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class G2Result:
    """Click probabilities and the two closed forms of g2(0).

    ``g2_direct`` is Q_fg / (Q_f Q_g) and is authoritative.
    ``g2_stats_form`` rewrites the same ratio directly in the photon
    statistics but with a slightly different multi-photon coefficient in
    the denominator; the two differ by an O(eta P_m^2) term, which the test
    suite quantifies rather than hides.
    """

    q_f: float
    q_g: float
    q_fg: float
    g2_direct: float
    g2_stats_form: float


def detection_probabilities(
    stats: HeraldedStatistics, hbt: HbtConfig
) -> Tuple[float, float, float]:
    """Per-pulse click probabilities (q_f, q_g, q_fg) of the analyzer."""
    q_f = stats.p_single * hbt.eta_f / 2.0 + (hbt.eta_f - hbt.eta_f ** 2 / 4.0) * stats.p_multi
    q_g = stats.p_single * hbt.eta_g / 2.0 + (hbt.eta_g - hbt.eta_g ** 2 / 4.0) * stats.p_multi
    q_fg = hbt.eta_f * hbt.eta_g * stats.p_multi / 2.0
    return q_f, q_g, q_fg


def g2_zero(stats: HeraldedStatistics, hbt: HbtConfig) -> G2Result:
    """Zero-delay second-order correlation of the heralded output."""
    q_f, q_g, q_fg = detection_probabilities(stats, hbt)
    if q_f <= 0.0 or q_g <= 0.0:
        raise UndefinedG2Error("zero click probability; g2 undefined")
    g2_direct = q_fg / (q_f * q_g)
    p_s, p_m = stats.p_single, stats.p_multi
    denominator = (
        p_s ** 2 / 2.0
        + (2.0 - hbt.eta_f / 4.0 - hbt.eta_g / 4.0 + hbt.eta_f * hbt.eta_g / 8.0) * p_m ** 2
        + (2.0 - hbt.eta_f / 4.0 - hbt.eta_g / 4.0) * p_s * p_m
    )
    g2_stats_form = p_m / denominator
    return G2Result(q_f, q_g, q_fg, g2_direct, g2_stats_form)


def g2_curve(
    tau_grid: Sequence[float],
    mu: float,
    eta_c: float,
    sigma: float,
    delta: float,
    hbt: HbtConfig,
) -> List[Tuple[float, float]]:
    """g2(tau) sampled on a delay grid.

    Each delay maps to its interference parameter, heralded statistics and
    zero-delay correlation; the result dips periodically at tau = +-pi/delta
    and recovers toward 1 beyond the coherence envelope.  Entries are
    independent of each other, so evaluation order does not matter.
    """
    if len(tau_grid) == 0:
        raise ParameterError("tau_grid must not be empty")
    curve = []
    for tau in tau_grid:
        beta = interference.beta(interference.BeatParams(tau=tau, sigma=sigma, delta=delta))
        stats = heralding.heralded_statistics(heralding.HeraldConfig(mu, eta_c, beta))
        curve.append((float(tau), g2_zero(stats, hbt).g2_direct))
    return curve
