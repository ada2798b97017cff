"""Herald-conditioned photon-number statistics of the interferometric source.

The joint photon-number distribution at the beam-splitter outputs is the
Poisson-weighted combination of the conditional tables from
:mod:`homps.interference`, with both sources emitting ``mu`` photons per
temporal mode on average.  Conditioning on a herald detection in one arm
(detector efficiency ``eta_c``, i-photon detection efficiency
``eta_i = 1 - (1 - eta_c)^i``) yields the normalised probabilities of the
announced pulse containing vacuum, one photon, or two photons ("multi"
means exactly two under the three-photon truncation).

Three equivalent routes to the same triple are provided: the explicit sum
(:func:`heralded_statistics`), the closed-form rational functions in ``mu``
for general ``beta`` (:func:`heralded_statistics_rational`), and the
simplified anti-bunching forms at ``beta = -1``
(:func:`heralded_statistics_antibunching`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoHeraldEventsError, ParameterError
from .interference import conditional_output_distribution, fock_pairs

# The truncation to m + n <= 3 discards less than 1% of the input Poisson
# mass (grid reading of the cumulative bound) for mu below this value.
MU_TRUNCATION_LIMIT = 0.67


@dataclass(frozen=True)
class HeraldConfig:
    """Operating point of the heralded source."""

    mu: float      # mean photon number per temporal mode per source
    eta_c: float   # herald detector overall efficiency
    beta: float    # interference parameter at the operating delay

    def __post_init__(self) -> None:
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ParameterError(f"mu must be a positive finite number, got {self.mu}")
        if not 0.0 <= self.eta_c <= 1.0:
            raise ParameterError(f"eta_c must lie in [0, 1], got {self.eta_c}")
        if not -1.0 <= self.beta <= 1.0:
            raise ParameterError(f"beta must lie in [-1, 1], got {self.beta}")

    @property
    def truncation_warning(self) -> bool:
        """True when mu exceeds the documented accuracy bound of the truncation."""
        return self.mu > MU_TRUNCATION_LIMIT


@dataclass(frozen=True)
class HeraldedStatistics:
    """Normalised emission statistics conditioned on a herald detection.

    ``p_multi`` is the probability of exactly two photons: with outputs
    truncated at three photons total and at least one photon heralding,
    the announced arm carries at most two.
    """

    p_vacuum: float
    p_single: float
    p_multi: float
    herald_rate: float  # un-normalised herald probability per pulse pair


def _eta_i(eta_c: float, i: int) -> float:
    """Probability that at least one of i photons fires the herald detector."""
    return 1.0 - (1.0 - eta_c) ** i


def input_weight(m: int, n: int, mu: float) -> float:
    """Poisson weight mu^(m+n) e^(-2 mu) / (m! n!) of the input pair (m, n)."""
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    return mu ** (m + n) * math.exp(-2.0 * mu) / (math.factorial(m) * math.factorial(n))


def output_joint(r: int, s: int, config: HeraldConfig) -> float:
    """Joint probability of finding (r, s) photons at the outputs.

    Sums the conditional tables over all retained inputs, weighted by their
    Poisson probabilities.  Only r + s <= 3 is representable.
    """
    if not (isinstance(r, int) and isinstance(s, int)) or r < 0 or s < 0:
        raise ParameterError(f"output counts must be non-negative integers, got ({r!r}, {s!r})")
    if r + s > 3:
        raise ParameterError(f"output |{r},{s}> is outside the truncation r + s <= 3")
    total = 0.0
    for m, n in fock_pairs():
        table = conditional_output_distribution(m, n, config.beta)
        p = table.get((r, s))
        if p is not None:
            total += p * input_weight(m, n, config.mu)
    return total


def herald_total(config: HeraldConfig) -> float:
    """Probability that at least one photon fires the herald detector."""
    total = 0.0
    for r in (1, 2, 3):
        eta_r = _eta_i(config.eta_c, r)
        for s in range(0, 4 - r):
            total += eta_r * output_joint(r, s, config)
    return total


def heralded_statistics(config: HeraldConfig) -> HeraldedStatistics:
    """Herald-conditioned (p_vacuum, p_single, p_multi) triple.

    Raises :class:`NoHeraldEventsError` when the herald probability is zero
    (for instance eta_c = 0).
    """
    p_t = herald_total(config)
    if p_t <= 0.0:
        raise NoHeraldEventsError("herald probability is zero; statistics undefined")
    eta = [_eta_i(config.eta_c, i) for i in range(4)]
    p_vacuum = (
        eta[1] * output_joint(1, 0, config)
        + eta[2] * output_joint(2, 0, config)
        + eta[3] * output_joint(3, 0, config)
    ) / p_t
    p_single = (
        eta[1] * output_joint(1, 1, config) + eta[2] * output_joint(2, 1, config)
    ) / p_t
    p_multi = eta[1] * output_joint(1, 2, config) / p_t
    return HeraldedStatistics(p_vacuum, p_single, p_multi, p_t)


def heralded_statistics_rational(mu: float, eta_c: float, beta: float) -> HeraldedStatistics:
    """Closed-form rational functions equivalent to :func:`heralded_statistics`.

    Numerators and the shared denominator are quadratic polynomials in mu;
    the common factor eta_c * mu * e^(-2 mu) / 24 cancels in the ratios and
    reappears only in the herald rate.
    """
    config = HeraldConfig(mu, eta_c, beta)  # validation only
    b, e = config.beta, config.eta_c
    den = (
        24.0
        + mu * (48.0 - 12.0 * e - 6.0 * e * b)
        + mu ** 2 * (48.0 - 24.0 * e + 4.0 * e ** 2 + (3.0 * e ** 2 - 6.0 * e) * b)
    )
    num_vacuum = (
        24.0
        + mu * (24.0 - 12.0 * e + (12.0 - 6.0 * e) * b)
        + mu ** 2 * (12.0 - 12.0 * e + 4.0 * e ** 2 + (9.0 - 9.0 * e + 3.0 * e ** 2) * b)
    )
    num_single = mu * (24.0 - 12.0 * b) + mu ** 2 * (24.0 - 12.0 * e + (3.0 * e - 6.0) * b)
    num_multi = mu ** 2 * (12.0 - 3.0 * b)
    herald_rate = math.exp(-2.0 * mu) * e * mu * den / 24.0
    if herald_rate <= 0.0:
        raise NoHeraldEventsError("herald probability is zero; statistics undefined")
    return HeraldedStatistics(num_vacuum / den, num_single / den, num_multi / den, herald_rate)


def heralded_statistics_antibunching(mu: float, eta_c: float) -> HeraldedStatistics:
    """Closed forms at the anti-bunching operating point beta = -1."""
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    if not 0.0 <= eta_c <= 1.0:
        raise ParameterError(f"eta_c must lie in [0, 1], got {eta_c}")
    e = eta_c
    den = 8.0 + mu * (16.0 - 2.0 * e) + mu ** 2 * (16.0 - 6.0 * e + e ** 2 / 3.0)
    num_vacuum = 8.0 + mu * (4.0 - 2.0 * e) + mu ** 2 * (1.0 - e + e ** 2 / 3.0)
    num_single = 12.0 * mu + mu ** 2 * (10.0 - 5.0 * e)
    num_multi = 5.0 * mu ** 2
    herald_rate = math.exp(-2.0 * mu) * e * mu * den / 8.0
    if herald_rate <= 0.0:
        raise NoHeraldEventsError("herald probability is zero; statistics undefined")
    return HeraldedStatistics(num_vacuum / den, num_single / den, num_multi / den, herald_rate)


def truncation_error(mu: float, mode: str = "grid") -> float:
    """Input probability mass discarded by the photon-number truncation.

    ``pair_sum`` drops everything with m + n > 3, the constraint the model
    actually imposes.  ``grid`` drops only m > 3 or n > 3, the cumulative
    double sum whose value stays below 1% for mu < 0.67.  The two readings
    differ; both are exposed rather than guessing which bound is meant.
    """
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    if mode == "pair_sum":
        kept = sum(input_weight(m, n, mu) for m, n in fock_pairs())
    elif mode == "grid":
        kept = sum(input_weight(m, n, mu) for m in range(4) for n in range(4))
    else:
        raise ParameterError(f"mode must be 'pair_sum' or 'grid', got {mode!r}")
    return 1.0 - kept
