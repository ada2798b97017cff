"""BB84 secret-key-rate model for photon sources with truncated statistics.

A source is summarised by the probabilities (p0, p1, p2) of sending vacuum,
one photon, or more than one photon (the multi-photon mass is treated as a
single two-photon bucket).  The channel yield of an i-photon pulse is

    Y_i = p_dark + 1 - (1 - eta)^i,     eta = eta_bob * 10^(-alpha L / 10)

with gain Q_i = p_i Y_i and error e_i = (e0 Y_0 + e_opt eta_i) / Y_i.  The
secret-key probability per pulse is

    R = q * ( Q1 [1 - H2(e1)] - Q_mu H2(E_mu) f_ec )

clamped at zero.  Two single-photon estimates are implemented: the
pessimistic bound Q1 = Q_mu - p2 with e1 = E_mu Q_mu / Q1 (every
multi-photon pulse assumed compromised), and the asymptotic decoy-state
estimate using the true single-photon yield, Q1 = p1 Y_1 with
e1 = (e0 Y_0 + e_opt eta) / Y_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Tuple, Union

from . import heralding
from .errors import NoDetectionsError, ParameterError

ANALYSES = ("gllp", "decoy")

MU_SEARCH_BOUNDS = (1e-4, 0.65)  # upper bound keeps the source-model truncation accurate
_GRID_POINTS = 200
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_REFINE_REL_WIDTH = 1e-4

DISTANCE_CAP_KM = 500.0
DISTANCE_RESOLUTION_KM = 0.1


@dataclass(frozen=True)
class ChannelParams:
    """Fibre link and receiver parameters (defaults follow a 1550 nm system)."""

    alpha_db_per_km: float = 0.21
    eta_bob: float = 0.045
    p_dark: float = 0.85e-6
    e_opt: float = 0.033
    f_ec: float = 1.16
    q: float = 0.5      # basis-matching factor
    e0: float = 0.5     # error fraction of a dark count

    def __post_init__(self) -> None:
        if not self.alpha_db_per_km > 0:
            raise ParameterError(f"alpha_db_per_km must be positive, got {self.alpha_db_per_km}")
        if not 0.0 < self.eta_bob <= 1.0:
            raise ParameterError(f"eta_bob must lie in (0, 1], got {self.eta_bob}")
        if not 0.0 <= self.p_dark < 1.0:
            raise ParameterError(f"p_dark must lie in [0, 1), got {self.p_dark}")
        if not 0.0 <= self.e_opt < 0.5:
            raise ParameterError(f"e_opt must lie in [0, 0.5), got {self.e_opt}")
        if not self.f_ec >= 1.0:
            raise ParameterError(f"f_ec must be at least 1, got {self.f_ec}")
        if not 0.0 < self.q <= 1.0:
            raise ParameterError(f"q must lie in (0, 1], got {self.q}")
        if not 0.0 <= self.e0 <= 1.0:
            raise ParameterError(f"e0 must lie in [0, 1], got {self.e0}")


@dataclass(frozen=True)
class SourcePhotonDistribution:
    """Vacuum / single / multi photon emission probabilities of a source."""

    p0: float
    p1: float
    p2: float

    def __post_init__(self) -> None:
        for name, value in (("p0", self.p0), ("p1", self.p1), ("p2", self.p2)):
            if not 0.0 <= value <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {value}")
        total = self.p0 + self.p1 + self.p2
        if abs(total - 1.0) > 1e-9:
            raise ParameterError(f"probabilities must sum to 1 within 1e-9, got {total!r}")


@dataclass(frozen=True)
class KeyRateResult:
    """Per-distance link quantities and the clamped secret-key probability."""

    distance_km: float
    mu_used: float  # nan for sources without a mu parameter
    q_mu: float
    e_mu: float
    q1: float
    e1: float
    rate: float
    note: str = ""


@dataclass(frozen=True)
class LinkYields:
    """Per-photon-number yields, gains and errors with their aggregates."""

    yields: Tuple[float, float, float]
    gains: Tuple[float, float, float]
    errors: Tuple[float, float, float]
    q_mu: float
    e_mu: float


@dataclass(frozen=True)
class MaxDistanceResult:
    distance_km: float
    note: str = ""  # empty, "no positive rate", or "cap reached"


SourceFamily = Callable[[float], SourcePhotonDistribution]
SourceLike = Union[SourcePhotonDistribution, SourceFamily]


def binary_entropy(x: float) -> float:
    """Shannon binary entropy H2(x), with H2(0) = H2(1) = 0 by continuity."""
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"binary entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def transmittance(channel: ChannelParams, distance_km: float) -> float:
    """Overall transmittance: receiver efficiency times the fibre loss."""
    if distance_km < 0:
        raise ParameterError(f"distance must be non-negative, got {distance_km}")
    return channel.eta_bob * 10.0 ** (-channel.alpha_db_per_km * distance_km / 10.0)


def yield_gain_error(
    dist: SourcePhotonDistribution, channel: ChannelParams, distance_km: float
) -> LinkYields:
    """Per-i yields Y_i, gains Q_i and errors e_i, plus Q_mu and E_mu.

    Y_0 = p_dark exactly since a vacuum pulse only clicks on a dark count.
    Raises :class:`NoDetectionsError` when the total gain vanishes.
    """
    eta = transmittance(channel, distance_km)
    probabilities = (dist.p0, dist.p1, dist.p2)
    yields, gains, errors = [], [], []
    error_mass = 0.0
    for i, p_i in enumerate(probabilities):
        eta_i = 1.0 - (1.0 - eta) ** i
        y_i = channel.p_dark + eta_i
        q_i = p_i * y_i
        numerator = channel.e0 * channel.p_dark + channel.e_opt * eta_i
        e_i = numerator / y_i if y_i > 0.0 else 0.0
        error_mass += p_i * numerator
        yields.append(y_i)
        gains.append(q_i)
        errors.append(e_i)
    q_mu = sum(gains)
    if q_mu <= 0.0:
        raise NoDetectionsError("total gain is zero; no detections at this distance")
    e_mu = error_mass / q_mu
    return LinkYields(tuple(yields), tuple(gains), tuple(errors), q_mu, e_mu)


def _secret_rate(channel: ChannelParams, q1: float, e1: float, q_mu: float, e_mu: float) -> float:
    raw = channel.q * (q1 * (1.0 - binary_entropy(e1)) - q_mu * binary_entropy(e_mu) * channel.f_ec)
    return max(0.0, raw)


def key_rate_gllp(
    dist: SourcePhotonDistribution,
    channel: ChannelParams,
    distance_km: float,
    mu_used: float = math.nan,
) -> KeyRateResult:
    """Key rate under the pessimistic multi-photon bound Q1 = Q_mu - p2."""
    link = yield_gain_error(dist, channel, distance_km)
    q1 = link.q_mu - dist.p2
    if q1 <= 0.0:
        return KeyRateResult(distance_km, mu_used, link.q_mu, link.e_mu, 0.0, math.nan, 0.0)
    e1 = link.e_mu * link.q_mu / q1
    if e1 >= 0.5:
        return KeyRateResult(distance_km, mu_used, link.q_mu, link.e_mu, q1, e1, 0.0)
    rate = _secret_rate(channel, q1, e1, link.q_mu, link.e_mu)
    return KeyRateResult(distance_km, mu_used, link.q_mu, link.e_mu, q1, e1, rate)


def key_rate_decoy(
    dist: SourcePhotonDistribution,
    channel: ChannelParams,
    distance_km: float,
    mu_used: float = math.nan,
) -> KeyRateResult:
    """Key rate with the asymptotic decoy-state single-photon estimate."""
    link = yield_gain_error(dist, channel, distance_km)
    y1 = link.yields[1]
    q1 = dist.p1 * y1
    if q1 <= 0.0:
        return KeyRateResult(distance_km, mu_used, link.q_mu, link.e_mu, 0.0, math.nan, 0.0)
    e1 = link.errors[1]
    rate = _secret_rate(channel, q1, e1, link.q_mu, link.e_mu)
    return KeyRateResult(distance_km, mu_used, link.q_mu, link.e_mu, q1, e1, rate)


def _rate_function(analysis: str):
    if analysis not in ANALYSES:
        raise ParameterError(f"analysis must be one of {ANALYSES}, got {analysis!r}")
    return key_rate_gllp if analysis == "gllp" else key_rate_decoy


# ---------------------------------------------------------------------------
# Source models
# ---------------------------------------------------------------------------


def faint_laser_distribution(mu: float) -> SourcePhotonDistribution:
    """Poisson statistics of an attenuated laser; all i >= 2 mass in p2."""
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    p0 = math.exp(-mu)
    p1 = mu * math.exp(-mu)
    # cancellation can leave the remainder a few ulp below zero at tiny mu
    return SourcePhotonDistribution(p0, p1, max(1.0 - p0 - p1, 0.0))


def heralded_source_distribution(mu: float, eta_c: float, beta: float) -> SourcePhotonDistribution:
    """Emission triple of the interferometric heralded source."""
    stats = heralding.heralded_statistics(heralding.HeraldConfig(mu, eta_c, beta))
    return SourcePhotonDistribution(stats.p_vacuum, stats.p_single, stats.p_multi)


def spdc_distribution(p1: float, g2_zero: float) -> SourcePhotonDistribution:
    """Down-conversion heralded source from its single-photon probability
    and zero-delay autocorrelation, p2 = g2 p1^2 / 2."""
    if not 0.0 < p1 <= 1.0:
        raise ParameterError(f"p1 must lie in (0, 1], got {p1}")
    if not g2_zero >= 0.0:
        raise ParameterError(f"g2_zero must be non-negative, got {g2_zero}")
    p2 = g2_zero * p1 ** 2 / 2.0
    if p1 + p2 > 1.0:
        raise ParameterError(f"p1 + p2 = {p1 + p2!r} exceeds 1")
    return SourcePhotonDistribution(1.0 - p1 - p2, p1, p2)


def ideal_single_photon_distribution() -> SourcePhotonDistribution:
    return SourcePhotonDistribution(0.0, 1.0, 0.0)


# ---------------------------------------------------------------------------
# Per-distance optimisation and range search
# ---------------------------------------------------------------------------


def optimize_mu(
    family: SourceFamily,
    channel: ChannelParams,
    distance_km: float,
    analysis: str,
    mu_bounds: Tuple[float, float] = MU_SEARCH_BOUNDS,
) -> Tuple[float, KeyRateResult]:
    """Maximise the key rate over mu for a mu-parameterised source family.

    Coarse scan on a log-spaced grid followed by golden-section refinement
    around the best grid point, down to relative bracket width 1e-4.
    Deterministic for identical inputs.
    """
    rate_fn = _rate_function(analysis)
    lo, hi = mu_bounds
    if not 0.0 < lo < hi:
        raise ParameterError(f"mu_bounds must satisfy 0 < lo < hi, got {mu_bounds}")

    def rate_at(mu: float) -> float:
        return rate_fn(family(mu), channel, distance_km).rate

    ratio = hi / lo
    grid = [lo * ratio ** (i / (_GRID_POINTS - 1)) for i in range(_GRID_POINTS)]
    values = [rate_at(mu) for mu in grid]
    best = max(range(_GRID_POINTS), key=values.__getitem__)
    if values[best] <= 0.0:
        result = rate_fn(family(lo), channel, distance_km, mu_used=lo)
        return lo, replace(result, note="no positive rate")
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, _GRID_POINTS - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    f_c, f_d = rate_at(c), rate_at(d)
    while (b - a) > _REFINE_REL_WIDTH * 0.5 * (a + b):
        if f_c > f_d:
            b, d, f_d = d, c, f_c
            c = b - _GOLDEN * (b - a)
            f_c = rate_at(c)
        else:
            a, c, f_c = c, d, f_d
            d = a + _GOLDEN * (b - a)
            f_d = rate_at(d)
    mu_star = 0.5 * (a + b)
    return mu_star, rate_fn(family(mu_star), channel, distance_km, mu_used=mu_star)


def _optimized_rate(
    source: SourceLike,
    channel: ChannelParams,
    distance_km: float,
    analysis: str,
    mu_bounds: Tuple[float, float],
) -> float:
    if callable(source):
        return optimize_mu(source, channel, distance_km, analysis, mu_bounds)[1].rate
    return _rate_function(analysis)(source, channel, distance_km).rate


def max_distance(
    source: SourceLike,
    channel: ChannelParams,
    analysis: str,
    mu_bounds: Tuple[float, float] = MU_SEARCH_BOUNDS,
    cap_km: float = DISTANCE_CAP_KM,
    resolution_km: float = DISTANCE_RESOLUTION_KM,
) -> MaxDistanceResult:
    """Largest distance with positive (optimised) key rate.

    Exponential bracketing from 1 km followed by bisection to the requested
    resolution.  A search cap guards degenerate dark-count-free channels,
    which are loss-limited only.
    """

    def rate_at(distance: float) -> float:
        return _optimized_rate(source, channel, distance, analysis, mu_bounds)

    if rate_at(0.0) <= 0.0:
        return MaxDistanceResult(0.0, "no positive rate")
    low, high = 0.0, 1.0
    while high < cap_km and rate_at(high) > 0.0:
        low, high = high, min(high * 2.0, cap_km)
    if high >= cap_km and rate_at(cap_km) > 0.0:
        return MaxDistanceResult(cap_km, "cap reached")
    while high - low > resolution_km:
        mid = 0.5 * (low + high)
        if rate_at(mid) > 0.0:
            low = mid
        else:
            high = mid
    return MaxDistanceResult(low)
