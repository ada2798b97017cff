"""Independent verification layer for the closed-form model.

Everything here re-derives quantities that the rest of the package computes
analytically, through a different route:

* :func:`numeric_p11` integrates the two-photon joint detection density of
  Gaussian wave packets numerically instead of using the closed-form
  interference parameter;
* :func:`enumerate_output_distribution` re-types the conditional tables as
  literal data and loops over them explicitly, sharing no code with
  :func:`homps.heralding.output_joint`;
* :func:`independent_routing_distribution` is a third route valid at
  beta = 0 where every photon routes independently;
* :func:`monte_carlo_heralded` and :func:`monte_carlo_g2` realise the
  heralding and correlation measurements stochastically, with seeded,
  reproducible streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from .errors import NoHeraldEventsError, ParameterError, UndefinedG2Error

# ---------------------------------------------------------------------------
# Quadrature of the two-photon joint density
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Discretisation of the detection-time and wave-packet-delay integrals."""

    tau0_range: float = 8.0       # integration half-width, in units of sigma
    delta_tau_range: float = 8.0  # averaging half-width, in units of sigma
    points_per_sigma: int = 64

    def __post_init__(self) -> None:
        if not (self.tau0_range > 0 and self.delta_tau_range > 0 and self.points_per_sigma > 0):
            raise ParameterError("all QuadratureSpec fields must be positive")


def _axis(half_width_sigmas: float, sigma: float, points_per_sigma: int) -> np.ndarray:
    n = int(round(2.0 * half_width_sigmas * points_per_sigma)) + 1
    return np.linspace(-half_width_sigmas * sigma, half_width_sigmas * sigma, n)


def _joint_density_integral(tau: float, sigma: float, delta: float, spec: QuadratureSpec) -> float:
    """Integral over detection time, averaged over the wave-packet delay.

    The integrand is |xi_a(t0 + tau) xi_b(t0) - xi_a(t0) xi_b(t0 + tau)|^2 / 4
    with normalised Gaussian wave packets of width sigma, centred at
    -+ delay/2 and carrying frequencies -+ delta/2.  The mean optical
    frequency multiplies both products by the same phase and is dropped.
    """
    t0 = _axis(spec.tau0_range, sigma, spec.points_per_sigma)
    dt = _axis(spec.delta_tau_range, sigma, spec.points_per_sigma)
    t0_grid, dt_grid = np.meshgrid(t0, dt, indexing="ij")
    norm = (math.pi * sigma ** 2) ** -0.25

    def packet_a(t: np.ndarray) -> np.ndarray:
        return norm * np.exp(-((t - dt_grid / 2.0) ** 2) / (2.0 * sigma ** 2)) * np.exp(
            -1j * (-delta / 2.0) * t
        )

    def packet_b(t: np.ndarray) -> np.ndarray:
        return norm * np.exp(-((t + dt_grid / 2.0) ** 2) / (2.0 * sigma ** 2)) * np.exp(
            -1j * (+delta / 2.0) * t
        )

    amplitude = packet_a(t0_grid + tau) * packet_b(t0_grid) - packet_a(t0_grid) * packet_b(
        t0_grid + tau
    )
    integrand = 0.25 * np.abs(amplitude) ** 2
    over_t0 = np.trapezoid(integrand, t0, axis=0)
    return float(np.trapezoid(over_t0, dt) / (dt[-1] - dt[0]))


@lru_cache(maxsize=64)
def _distinguishable_level(sigma: float, delta: float, spec: QuadratureSpec) -> float:
    """Same integral at a reference delay far outside the coherence envelope.

    The reference sits at half the averaging window so the delayed wave
    packet is still fully contained in the delta-tau grid; the analytic
    value there is 1/2 of the total two-photon probability.
    """
    tau_ref = 0.5 * spec.delta_tau_range * sigma
    return _joint_density_integral(tau_ref, sigma, delta, spec)


def numeric_p11(
    tau: float, sigma: float, delta: float, spec: QuadratureSpec = QuadratureSpec()
) -> float:
    """Coincidence probability P11(tau) from direct quadrature.

    Normalised so that the distinguishable limit equals 1/2, which makes the
    value directly comparable with (1 - beta(tau))/2 from the closed form.
    Valid for |tau| a few sigma inside the averaging window.
    """
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    if spec.points_per_sigma < 8:
        raise ParameterError(
            f"points_per_sigma must be at least 8 to resolve the wave packets, "
            f"got {spec.points_per_sigma}"
        )
    reference = _distinguishable_level(float(sigma), abs(float(delta)), spec)
    return 0.5 * _joint_density_integral(float(tau), float(sigma), abs(float(delta)), spec) / reference


# ---------------------------------------------------------------------------
# Exact enumeration over the truncated inputs
# ---------------------------------------------------------------------------

# Conditional tables re-typed as literal data: (m, n) -> {(r, s): probability}.
# Entries depending on the interference parameter are (constant, slope) pairs
# evaluated as constant + slope * beta.  Deliberately no import from
# homps.interference.
_CONDITIONAL_TABLES: Dict[Tuple[int, int], Dict[Tuple[int, int], Tuple[float, float]]] = {
    (0, 0): {(0, 0): (1.0, 0.0)},
    (1, 0): {(1, 0): (0.5, 0.0), (0, 1): (0.5, 0.0)},
    (0, 1): {(1, 0): (0.5, 0.0), (0, 1): (0.5, 0.0)},
    (2, 0): {(2, 0): (0.25, 0.0), (0, 2): (0.25, 0.0), (1, 1): (0.5, 0.0)},
    (0, 2): {(2, 0): (0.25, 0.0), (0, 2): (0.25, 0.0), (1, 1): (0.5, 0.0)},
    (1, 1): {(1, 1): (0.5, -0.5), (2, 0): (0.25, 0.25), (0, 2): (0.25, 0.25)},
    (3, 0): {(3, 0): (0.125, 0.0), (0, 3): (0.125, 0.0), (2, 1): (0.375, 0.0), (1, 2): (0.375, 0.0)},
    (0, 3): {(3, 0): (0.125, 0.0), (0, 3): (0.125, 0.0), (2, 1): (0.375, 0.0), (1, 2): (0.375, 0.0)},
    (2, 1): {(3, 0): (0.125, 0.125), (0, 3): (0.125, 0.125), (2, 1): (0.375, -0.125), (1, 2): (0.375, -0.125)},
    (1, 2): {(3, 0): (0.125, 0.125), (0, 3): (0.125, 0.125), (2, 1): (0.375, -0.125), (1, 2): (0.375, -0.125)},
}


def _validate_mu_beta(mu: float, beta: float) -> None:
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    if not -1.0 <= beta <= 1.0:
        raise ParameterError(f"beta must lie in [-1, 1], got {beta}")


def enumerate_output_distribution(mu: float, beta: float) -> Dict[Tuple[int, int], float]:
    """Joint output distribution by brute-force enumeration of all inputs."""
    _validate_mu_beta(mu, beta)
    result = {(r, s): 0.0 for r in range(4) for s in range(4) if r + s <= 3}
    for (m, n), table in _CONDITIONAL_TABLES.items():
        weight = mu ** (m + n) * math.exp(-2.0 * mu) / (math.factorial(m) * math.factorial(n))
        for key, (constant, slope) in table.items():
            result[key] += weight * (constant + slope * beta)
    return result


def independent_routing_distribution(mu: float) -> Dict[Tuple[int, int], float]:
    """Output distribution when every photon routes independently (beta = 0).

    With no interference, r out of the m + n input photons reach the first
    output with binomial probability, regardless of how the photons were
    split between the input ports.
    """
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    result = {(r, s): 0.0 for r in range(4) for s in range(4) if r + s <= 3}
    for total in range(4):
        for m in range(total + 1):
            n = total - m
            weight = mu ** total * math.exp(-2.0 * mu) / (math.factorial(m) * math.factorial(n))
            for r in range(total + 1):
                result[(r, total - r)] += weight * math.comb(total, r) / 2.0 ** total
    return result


# ---------------------------------------------------------------------------
# Seeded Monte Carlo realisation
# ---------------------------------------------------------------------------

_CHUNK = 1_000_000


@dataclass(frozen=True)
class McConfig:
    """Trial count and reproducibility seed of a Monte Carlo run."""

    trials: int
    seed: int

    def __post_init__(self) -> None:
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ParameterError(f"trials must be a positive integer, got {self.trials}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise ParameterError(f"seed must be a non-negative integer, got {self.seed}")

    def split(self, n_workers: int) -> List["McConfig"]:
        """Independent sub-stream configs for parallel execution.

        Sub-seeds are derived with numpy's SeedSequence spawning, so the
        streams are statistically independent and the derivation is
        reproducible from (seed, worker index) alone.  Trials are split as
        evenly as possible.
        """
        if not n_workers >= 1:
            raise ParameterError(f"n_workers must be at least 1, got {n_workers}")
        children = np.random.SeedSequence(self.seed).spawn(n_workers)
        base, extra = divmod(self.trials, n_workers)
        configs = []
        for i, child in enumerate(children):
            trials = base + (1 if i < extra else 0)
            configs.append(McConfig(max(trials, 1), int(child.generate_state(1, np.uint64)[0])))
        return configs


@dataclass(frozen=True)
class McHeraldedResult:
    """Empirical heralded statistics with binomial standard errors."""

    trials: int
    n_heralded: int
    p_vacuum: float
    p_single: float
    p_multi: float
    se_vacuum: float
    se_single: float
    se_multi: float
    herald_rate: float     # estimates herald_total / retained input mass
    se_herald_rate: float


@dataclass(frozen=True)
class McG2Result:
    """Empirical zero-delay correlation with a delta-method standard error."""

    trials: int
    n_heralded: int
    n_f: int
    n_g: int
    n_fg: int
    g2: float
    g2_se: float


def _joint_categories(mu: float, beta: float):
    """Flattened categorical over (input pair, output pair) combinations.

    Sampling renormalises over the retained inputs (m + n <= 3), matching
    the analytic model the results are compared against.
    """
    probs, r_values, s_values = [], [], []
    for (m, n), table in _CONDITIONAL_TABLES.items():
        weight = mu ** (m + n) * math.exp(-2.0 * mu) / (math.factorial(m) * math.factorial(n))
        for (r, s), (constant, slope) in table.items():
            probs.append(weight * (constant + slope * beta))
            r_values.append(r)
            s_values.append(s)
    probs = np.asarray(probs)
    cumulative = np.cumsum(probs / probs.sum())
    cumulative[-1] = 1.0
    return cumulative, np.asarray(r_values), np.asarray(s_values)


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def monte_carlo_heralded(mu: float, beta: float, eta_c: float, mc: McConfig) -> McHeraldedResult:
    """Stochastic realisation of the heralding measurement.

    Per trial: draw an input pair and its conditional outcome, fire the
    herald with probability 1 - (1 - eta_c)^r, and tally the announced
    photon number s in {0, 1, 2} over heralded trials.  Bit-identical
    results for identical (mu, beta, eta_c, mc).
    """
    _validate_mu_beta(mu, beta)
    if not 0.0 <= eta_c <= 1.0:
        raise ParameterError(f"eta_c must lie in [0, 1], got {eta_c}")
    cumulative, r_values, s_values = _joint_categories(mu, beta)
    herald_p = 1.0 - (1.0 - eta_c) ** r_values
    rng = np.random.default_rng(mc.seed)
    s_counts = np.zeros(3, dtype=np.int64)
    remaining = mc.trials
    while remaining > 0:
        size = min(_CHUNK, remaining)
        remaining -= size
        category = np.searchsorted(cumulative, rng.random(size), side="right")
        heralded = rng.random(size) < herald_p[category]
        s_counts += np.bincount(s_values[category][heralded], minlength=3)
    n_heralded = int(s_counts.sum())
    if n_heralded == 0:
        raise NoHeraldEventsError("no herald events across all trials")
    p_vac, p_one, p_two = (s_counts / n_heralded).tolist()
    herald_rate = n_heralded / mc.trials
    return McHeraldedResult(
        trials=mc.trials,
        n_heralded=n_heralded,
        p_vacuum=p_vac,
        p_single=p_one,
        p_multi=p_two,
        se_vacuum=_binomial_se(p_vac, n_heralded),
        se_single=_binomial_se(p_one, n_heralded),
        se_multi=_binomial_se(p_two, n_heralded),
        herald_rate=herald_rate,
        se_herald_rate=_binomial_se(herald_rate, mc.trials),
    )


def monte_carlo_g2(
    mu: float, beta: float, eta_c: float, eta_f: float, eta_g: float, mc: McConfig
) -> McG2Result:
    """Stochastic realisation of the full correlation measurement.

    Extends :func:`monte_carlo_heralded`: the s heralded photons split
    independently between the two analyzer arms, each is detected with its
    arm's efficiency, and g2 is estimated as the coincidence-to-accidental
    ratio over heralded trials.  The standard error comes from the delta
    method on the three correlated click frequencies.
    """
    _validate_mu_beta(mu, beta)
    for name, value in (("eta_c", eta_c), ("eta_f", eta_f), ("eta_g", eta_g)):
        if not 0.0 <= value <= 1.0:
            raise ParameterError(f"{name} must lie in [0, 1], got {value}")
    cumulative, r_values, s_values = _joint_categories(mu, beta)
    herald_p = 1.0 - (1.0 - eta_c) ** r_values
    rng = np.random.default_rng(mc.seed)
    n_heralded = 0
    n_f = n_g = n_fg = 0
    remaining = mc.trials
    while remaining > 0:
        size = min(_CHUNK, remaining)
        remaining -= size
        category = np.searchsorted(cumulative, rng.random(size), side="right")
        heralded = rng.random(size) < herald_p[category]
        s = s_values[category][heralded]
        n_heralded += s.size
        u = rng.random((s.size, 4))
        to_f_1 = u[:, 0] < 0.5
        detected_1 = u[:, 1] < np.where(to_f_1, eta_f, eta_g)
        has_first = s >= 1
        click_f = has_first & to_f_1 & detected_1
        click_g = has_first & ~to_f_1 & detected_1
        to_f_2 = u[:, 2] < 0.5
        detected_2 = u[:, 3] < np.where(to_f_2, eta_f, eta_g)
        has_second = s == 2
        click_f |= has_second & to_f_2 & detected_2
        click_g |= has_second & ~to_f_2 & detected_2
        n_f += int(click_f.sum())
        n_g += int(click_g.sum())
        n_fg += int((click_f & click_g).sum())
    if n_heralded == 0:
        raise NoHeraldEventsError("no herald events across all trials")
    if n_f == 0 or n_g == 0:
        raise UndefinedG2Error("no clicks on one analyzer arm; g2 undefined")
    p_f, p_g, p_fg = n_f / n_heralded, n_g / n_heralded, n_fg / n_heralded
    g2 = p_fg / (p_f * p_g)
    if n_fg == 0:
        return McG2Result(mc.trials, n_heralded, n_f, n_g, n_fg, 0.0, 0.0)
    # Delta method on log g2: Var splits into variances of the three click
    # frequencies plus their covariances (x_fg x_f = x_fg etc.).
    rel_var = (
        (1.0 - p_fg) / p_fg
        + (1.0 - p_f) / p_f
        + (1.0 - p_g) / p_g
        - 2.0 * (1.0 - p_f) / p_f
        - 2.0 * (1.0 - p_g) / p_g
        + 2.0 * (p_fg - p_f * p_g) / (p_f * p_g)
    ) / n_heralded
    g2_se = g2 * math.sqrt(max(rel_var, 0.0))
    return McG2Result(mc.trials, n_heralded, n_f, n_g, n_fg, g2, g2_se)
