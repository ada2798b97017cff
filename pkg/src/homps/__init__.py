"""Simulator of a photon source heralded on two-photon interference of
frequency-displaced weak coherent states.

The package computes the conditional beam-splitter statistics and the
interference parameter (:mod:`homps.interference`), the herald-conditioned
photon-number distribution (:mod:`homps.heralding`), the second-order
correlation of the output (:mod:`homps.correlation`), and the BB84
secret-key performance of the source against reference sources
(:mod:`homps.qkd`).  :mod:`homps.oracle` re-derives the closed forms
independently by quadrature, enumeration, and seeded Monte Carlo.
"""

from .correlation import G2Result, HbtConfig, detection_probabilities, g2_curve, g2_zero
from .errors import (
    HompsError,
    NoDetectionsError,
    NoHeraldEventsError,
    ParameterError,
    UndefinedG2Error,
)
from .heralding import (
    MU_TRUNCATION_LIMIT,
    HeraldConfig,
    HeraldedStatistics,
    herald_total,
    heralded_statistics,
    heralded_statistics_antibunching,
    heralded_statistics_rational,
    input_weight,
    output_joint,
    truncation_error,
)
from .interference import (
    BeatParams,
    beta,
    coincidence_pattern,
    conditional_output_distribution,
    fock_pairs,
)
from .oracle import (
    McConfig,
    McG2Result,
    McHeraldedResult,
    QuadratureSpec,
    enumerate_output_distribution,
    independent_routing_distribution,
    monte_carlo_g2,
    monte_carlo_heralded,
    numeric_p11,
)
from .qkd import (
    ChannelParams,
    KeyRateResult,
    MaxDistanceResult,
    SourcePhotonDistribution,
    binary_entropy,
    faint_laser_distribution,
    heralded_source_distribution,
    ideal_single_photon_distribution,
    key_rate_decoy,
    key_rate_gllp,
    max_distance,
    optimize_mu,
    spdc_distribution,
    transmittance,
    yield_gain_error,
)

__version__ = "0.1.0"

__all__ = [
    "BeatParams",
    "ChannelParams",
    "G2Result",
    "HbtConfig",
    "HeraldConfig",
    "HeraldedStatistics",
    "HompsError",
    "KeyRateResult",
    "MaxDistanceResult",
    "McConfig",
    "McG2Result",
    "McHeraldedResult",
    "MU_TRUNCATION_LIMIT",
    "NoDetectionsError",
    "NoHeraldEventsError",
    "ParameterError",
    "QuadratureSpec",
    "SourcePhotonDistribution",
    "UndefinedG2Error",
    "beta",
    "binary_entropy",
    "coincidence_pattern",
    "conditional_output_distribution",
    "detection_probabilities",
    "enumerate_output_distribution",
    "faint_laser_distribution",
    "fock_pairs",
    "g2_curve",
    "g2_zero",
    "herald_total",
    "heralded_source_distribution",
    "heralded_statistics",
    "heralded_statistics_antibunching",
    "heralded_statistics_rational",
    "ideal_single_photon_distribution",
    "independent_routing_distribution",
    "input_weight",
    "key_rate_decoy",
    "key_rate_gllp",
    "max_distance",
    "monte_carlo_g2",
    "monte_carlo_heralded",
    "numeric_p11",
    "optimize_mu",
    "output_joint",
    "spdc_distribution",
    "transmittance",
    "truncation_error",
    "yield_gain_error",
]
