"""Conditional beam-splitter output statistics for few-photon Fock inputs.

A symmetric beam splitter fed by two frequency-displaced coherent sources
produces conditional output distributions that depend on a single
interference parameter

    beta = exp(-tau^2 / (2 sigma^2)) * cos(tau * delta)

where ``tau`` is the relative delay between the temporal modes, ``sigma``
the Gaussian wave-packet half-width at 1/e and ``delta`` the angular
frequency offset between the sources.  ``beta = 1`` is full photon
bunching (zero delay), ``beta = -1`` the anti-bunching condition reached
at ``tau = pi/delta``, and ``beta = 0`` the fully distinguishable limit.

Inputs are truncated to at most three photons in total; the conditional
tables implemented here are exact within that truncation.  The ``|2,2>``
input is rejected: it would break photon-number conservation against the
three-photon output truncation used everywhere downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

from .errors import ParameterError

MAX_TOTAL_PHOTONS = 3

OutcomeDistribution = Dict[Tuple[int, int], float]


@dataclass(frozen=True)
class BeatParams:
    """Beat-note parameters of the two interfering sources.

    ``omega`` (mean angular frequency) is carried for documentation only;
    it multiplies both interfering amplitudes by the same phase and
    cancels out of every probability.
    """

    tau: float          # relative temporal-mode delay [s]
    sigma: float        # Gaussian wave-packet half-width at 1/e [s]
    delta: float        # angular frequency offset [rad/s]
    omega: float = 0.0  # mean angular frequency [rad/s], unused downstream

    def __post_init__(self) -> None:
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ParameterError(f"sigma must be a positive finite number, got {self.sigma}")
        for name, value in (("tau", self.tau), ("delta", self.delta), ("omega", self.omega)):
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite, got {value}")
        # Every output depends on delta through cos(tau*delta) only, so the
        # sign of delta is normalised away on construction.
        object.__setattr__(self, "delta", abs(float(self.delta)))


def beta(params: BeatParams) -> float:
    """Interference parameter exp(-tau^2/(2 sigma^2)) cos(tau delta).

    Analytically bounded in [-1, 1]; no clamping is applied.
    """
    envelope = math.exp(-params.tau ** 2 / (2.0 * params.sigma ** 2))
    value = envelope * math.cos(params.tau * params.delta)
    assert -1.0 <= value <= 1.0
    return value


def fock_pairs() -> Iterator[Tuple[int, int]]:
    """All input pairs (m, n) retained by the truncation, m + n <= 3."""
    for total in range(MAX_TOTAL_PHOTONS + 1):
        for m in range(total + 1):
            yield m, total - m


def _validate_fock_pair(m: int, n: int) -> None:
    if not (isinstance(m, int) and isinstance(n, int)):
        raise ParameterError(f"photon counts must be integers, got ({m!r}, {n!r})")
    if m < 0 or n < 0:
        raise ParameterError(f"photon counts must be non-negative, got ({m}, {n})")
    if m + n > MAX_TOTAL_PHOTONS:
        raise ParameterError(
            f"input |{m},{n}> is outside the model truncation m + n <= {MAX_TOTAL_PHOTONS}"
        )


def conditional_output_distribution(m: int, n: int, beta_value: float) -> OutcomeDistribution:
    """Distribution over output pairs (r, s) given input Fock pair (m, n).

    Photons entering a single port route independently, giving binomial
    splitting.  The mixed inputs interfere: |1,1> bunches with probability
    (1 + beta)/2, and |2,1> / |1,2> behave as an interfering pair plus one
    independent photon.  Every table conserves photon number (r + s = m + n)
    and sums to one for any beta in [-1, 1].
    """
    _validate_fock_pair(m, n)
    if not -1.0 <= beta_value <= 1.0:
        raise ParameterError(f"beta must lie in [-1, 1], got {beta_value}")
    total = m + n
    if total == 0:
        return {(0, 0): 1.0}
    if m == 0 or n == 0:
        return {(r, total - r): math.comb(total, r) / 2.0 ** total for r in range(total + 1)}
    if (m, n) == (1, 1):
        bunched = 0.25 * (1.0 + beta_value)
        return {(1, 1): 0.5 * (1.0 - beta_value), (2, 0): bunched, (0, 2): bunched}
    # (2, 1) and (1, 2) share one table, symmetric in the outputs.
    edge = 0.125 * (1.0 + beta_value)
    middle = 0.125 * (3.0 - beta_value)
    return {(3, 0): edge, (0, 3): edge, (2, 1): middle, (1, 2): middle}


def coincidence_pattern(params: BeatParams) -> float:
    """Normalized coincidence level (2 - beta)/2 at the given delay.

    Equals 1/2 at tau = 0 (full two-photon interference dip), 1 in the
    distinguishable limit and up to 3/2 on the anti-bunching peaks at
    tau = +-pi/delta.
    """
    return 0.5 * (2.0 - beta(params))
