"""Batch command-line front end.

Subcommands generate model curves (beat pattern, g2 vs delay, key rate vs
distance), tabulate heralded statistics, and run the independent oracle
checks.  Output is machine-readable CSV or JSON; curve commands also render
a matplotlib figure next to the delimited output unless disabled.

Exit codes: 0 success, 2 configuration error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import correlation, heralding, interference, oracle, output, plotting, qkd
from .errors import HompsError, ParameterError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFICATION = 3

SOURCES = ("faint", "hps", "spdc", "ideal")

DEFAULTS: Dict[str, object] = {
    # beat note and wave packet; sigma falls back to coherence_time * sigma_factor
    "delta": 2.0 * math.pi * 40e6,
    "coherence_time": 2.2e-9,
    "sigma_factor": 0.5,  # conversion from quoted coherence time to the Gaussian width
    "sigma": None,
    "omega": 0.0,
    # operating point and detectors
    "mu": 0.1,
    "eta_c": 0.15,
    "eta_f": 0.15,
    "eta_g": 0.15,
    "beta": -1.0,
    # delay grids
    "tau_min": None,  # default +-4 sigma
    "tau_max": None,
    "points": 1001,
    # monte carlo; the g2 check needs enough trials for a usable number of
    # coincidences (their probability is O(eta^2 mu^2))
    "seed": 20260810,
    "trials": 10_000_000,
    "tol_scale": 1.0,
    # qkd
    "sources": "faint,hps,spdc,ideal",
    "analyses": "gllp,decoy",
    "dist_min": 0.0,
    "dist_max": 200.0,
    "dist_step": 5.0,
    "mu_min": qkd.MU_SEARCH_BOUNDS[0],
    "mu_max": qkd.MU_SEARCH_BOUNDS[1],
    "spdc_p1": 0.42,
    "spdc_g2": 0.018,
    "cap_km": qkd.DISTANCE_CAP_KM,
    "resolution_km": qkd.DISTANCE_RESOLUTION_KM,
    "channel": {},
}

_CHANNEL_KEYS = ("alpha_db_per_km", "eta_bob", "p_dark", "e_opt", "f_ec", "q", "e0")


def _load_config_file(path: str) -> Dict[str, object]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"config file {path} must hold a JSON object")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    channel = data.get("channel", {})
    if not isinstance(channel, dict):
        raise ParameterError("config key 'channel' must be an object")
    bad = set(channel) - set(_CHANNEL_KEYS)
    if bad:
        raise ParameterError(f"unknown channel keys: {sorted(bad)}")
    return data


def _resolve(args: argparse.Namespace) -> Dict[str, object]:
    """Merge defaults, config file, and command-line overrides (in that order)."""
    cfg = dict(DEFAULTS)
    cfg["channel"] = dict(DEFAULTS["channel"])
    if getattr(args, "config", None):
        file_cfg = _load_config_file(args.config)
        channel = file_cfg.pop("channel", {})
        cfg.update(file_cfg)
        cfg["channel"].update(channel)
    for key in cfg:
        flag = getattr(args, key, None)
        if flag is not None and key != "channel":
            cfg[key] = flag
    for key in _CHANNEL_KEYS:
        flag = getattr(args, f"channel_{key}", None)
        if flag is not None:
            cfg["channel"][key] = flag
    return cfg


def _sigma(cfg: Dict[str, object]) -> float:
    if cfg["sigma"] is not None:
        return float(cfg["sigma"])
    return float(cfg["coherence_time"]) * float(cfg["sigma_factor"])


def _channel(cfg: Dict[str, object]) -> qkd.ChannelParams:
    return qkd.ChannelParams(**cfg["channel"])


def _tau_grid(cfg: Dict[str, object], sigma: float) -> np.ndarray:
    tau_min = -4.0 * sigma if cfg["tau_min"] is None else float(cfg["tau_min"])
    tau_max = 4.0 * sigma if cfg["tau_max"] is None else float(cfg["tau_max"])
    points = int(cfg["points"])
    if points < 2:
        raise ParameterError(f"points must be at least 2, got {points}")
    if not tau_max > tau_min:
        raise ParameterError("tau_max must exceed tau_min")
    return np.linspace(tau_min, tau_max, points)


def _figure_path(args: argparse.Namespace) -> Optional[str]:
    if getattr(args, "no_fig", False):
        return None
    fig = getattr(args, "fig", None)
    if fig:
        return fig
    out = getattr(args, "out", None)
    if out:
        return str(Path(out).with_suffix(".png"))
    return None


def _parse_list(value: str, allowed: tuple, label: str) -> List[str]:
    items = [item.strip() for item in str(value).split(",") if item.strip()]
    if not items:
        raise ParameterError(f"no {label} selected")
    for item in items:
        if item not in allowed:
            raise ParameterError(f"unknown {label} {item!r}; choose from {allowed}")
    return items


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_beat_pattern(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    sigma = _sigma(cfg)
    delta = float(cfg["delta"])
    omega = float(cfg["omega"])
    interference.BeatParams(0.0, sigma, delta, omega)  # fail fast on bad parameters
    taus = _tau_grid(cfg, sigma)
    rows = []
    for tau in taus:
        params = interference.BeatParams(float(tau), sigma, delta, omega)
        rows.append((float(tau), interference.beta(params), interference.coincidence_pattern(params)))
    output.write_table(args.out, ("tau_s", "beta", "c_coinc"), rows, args.format)
    fig = _figure_path(args)
    if fig:
        plotting.save_beat_pattern([r[0] * 1e9 for r in rows], [r[2] for r in rows], fig)
    return EXIT_OK


def cmd_herald_stats(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    mus = [float(v) for v in str(cfg["mu"]).split(",")]
    eta_c = float(cfg["eta_c"])
    beta = float(cfg["beta"])
    configs = [heralding.HeraldConfig(mu, eta_c, beta) for mu in mus]  # fail fast
    include_comparison = eta_c == 1.0
    columns = [
        "mu", "p_vacuum", "p_single", "p_multi", "herald_rate",
        "truncation_error_grid", "truncation_error_pair", "truncation_warning",
    ]
    if include_comparison:
        columns += [
            "faint_p_vacuum", "faint_p_single", "faint_p_multi",
            "ratio_vacuum", "ratio_single", "ratio_multi",
        ]
    rows = []
    triples = []
    for config in configs:
        stats = heralding.heralded_statistics(config)
        # the accuracy claim holds strictly below the bound, so the boundary row is flagged too
        warn = config.mu >= heralding.MU_TRUNCATION_LIMIT
        row = [
            config.mu, stats.p_vacuum, stats.p_single, stats.p_multi, stats.herald_rate,
            heralding.truncation_error(config.mu, "grid"),
            heralding.truncation_error(config.mu, "pair_sum"),
            warn,
        ]
        if include_comparison:
            faint = qkd.faint_laser_distribution(config.mu)
            row += [
                faint.p0, faint.p1, faint.p2,
                stats.p_vacuum / faint.p0, stats.p_single / faint.p1, stats.p_multi / faint.p2,
            ]
        rows.append(row)
        triples.append((stats.p_vacuum, stats.p_single, stats.p_multi))
    output.write_table(args.out, columns, rows, args.format)
    fig = _figure_path(args)
    if fig:
        plotting.save_herald_stats(mus, triples, fig)
    return EXIT_OK


def cmd_g2(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    config = heralding.HeraldConfig(float(cfg["mu"]), float(cfg["eta_c"]), float(cfg["beta"]))
    hbt = correlation.HbtConfig(float(cfg["eta_f"]), float(cfg["eta_g"]))
    if args.curve and not args.curve_out:
        raise ParameterError("--curve requires --curve-out PATH")
    stats = heralding.heralded_statistics(config)
    result = correlation.g2_zero(stats, hbt)
    relative = abs(result.g2_direct - result.g2_stats_form) / result.g2_direct
    columns = (
        "mu", "eta_c", "beta", "eta_f", "eta_g",
        "p_vacuum", "p_single", "p_multi",
        "q_f", "q_g", "q_fg", "g2_direct", "g2_stats_form", "relative_difference",
    )
    row = (
        config.mu, config.eta_c, config.beta, hbt.eta_f, hbt.eta_g,
        stats.p_vacuum, stats.p_single, stats.p_multi,
        result.q_f, result.q_g, result.q_fg,
        result.g2_direct, result.g2_stats_form, relative,
    )
    output.write_table(args.out, columns, [row], args.format)
    if args.curve:
        sigma = _sigma(cfg)
        taus = _tau_grid(cfg, sigma)
        curve = correlation.g2_curve(taus, config.mu, config.eta_c, sigma, float(cfg["delta"]), hbt)
        curve_rows = [
            (tau, interference.beta(interference.BeatParams(tau, sigma, float(cfg["delta"]))), value)
            for tau, value in curve
        ]
        output.write_table(args.curve_out, ("tau_s", "beta", "g2"), curve_rows, args.format)
        fig = _figure_path(args)
        if fig:
            plotting.save_g2_curve([r[0] * 1e9 for r in curve_rows], [r[2] for r in curve_rows], fig)
    return EXIT_OK


def _source_models(cfg: Dict[str, object]):
    """Source name -> distribution or mu-parameterised family."""
    eta_c = float(cfg["eta_c"])
    beta = float(cfg["beta"])
    return {
        "faint": qkd.faint_laser_distribution,
        "hps": lambda mu: qkd.heralded_source_distribution(mu, eta_c, beta),
        "spdc": qkd.spdc_distribution(float(cfg["spdc_p1"]), float(cfg["spdc_g2"])),
        "ideal": qkd.ideal_single_photon_distribution(),
    }


def cmd_qkd_curve(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    channel = _channel(cfg)
    sources = _parse_list(cfg["sources"], SOURCES, "source")
    analyses = _parse_list(cfg["analyses"], qkd.ANALYSES, "analysis")
    mu_bounds = (float(cfg["mu_min"]), float(cfg["mu_max"]))
    models = _source_models(cfg)
    step = float(cfg["dist_step"])
    if not step > 0:
        raise ParameterError(f"dist_step must be positive, got {step}")
    distances = np.arange(float(cfg["dist_min"]), float(cfg["dist_max"]) + step / 2, step)
    columns = ("source", "analysis", "distance_km", "mu_used", "q_mu", "e_mu", "q1", "e1", "rate")
    rows = []
    for name in sources:
        model = models[name]
        for analysis in analyses:
            for distance in distances:
                if callable(model):
                    _, result = qkd.optimize_mu(model, channel, float(distance), analysis, mu_bounds)
                else:
                    rate_fn = qkd.key_rate_gllp if analysis == "gllp" else qkd.key_rate_decoy
                    result = rate_fn(model, channel, float(distance))
                mu_used = None if math.isnan(result.mu_used) else result.mu_used
                e1 = None if math.isnan(result.e1) else result.e1
                rows.append(
                    (name, analysis, result.distance_km, mu_used,
                     result.q_mu, result.e_mu, result.q1, e1, result.rate)
                )
    output.write_table(args.out, columns, rows, args.format)
    fig = _figure_path(args)
    if fig:
        plotting.save_qkd_curves(
            [dict(zip(columns, row)) for row in rows], fig
        )
    return EXIT_OK


def cmd_qkd_maxdist(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    channel = _channel(cfg)
    sources = _parse_list(cfg["sources"], SOURCES, "source")
    analyses = _parse_list(cfg["analyses"], qkd.ANALYSES, "analysis")
    mu_bounds = (float(cfg["mu_min"]), float(cfg["mu_max"]))
    models = _source_models(cfg)
    rows = []
    for name in sources:
        for analysis in analyses:
            result = qkd.max_distance(
                models[name], channel, analysis, mu_bounds,
                cap_km=float(cfg["cap_km"]), resolution_km=float(cfg["resolution_km"]),
            )
            rows.append((name, analysis, result.distance_km, result.note))
    output.write_table(args.out, ("source", "analysis", "max_distance_km", "note"), rows, args.format)
    return EXIT_OK


def _check(name: str, expected: float, observed: float, tolerance: float) -> dict:
    return {
        "name": name,
        "expected": expected,
        "observed": observed,
        "tolerance": tolerance,
        "pass": abs(observed - expected) <= tolerance,
    }


def cmd_oracle_verify(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    seed = int(cfg["seed"])
    trials = int(cfg["trials"])
    scale = float(cfg["tol_scale"])
    mu = float(cfg["mu"])
    beta = float(cfg["beta"])
    eta_c = float(cfg["eta_c"])
    hbt = correlation.HbtConfig(float(cfg["eta_f"]), float(cfg["eta_g"]))
    checks = []

    # quadrature against the closed-form interference parameter
    sigma_q = 1.0e-9
    delta_q = 20.0 / sigma_q
    for fraction in (0.5, 1.0, 1.5):
        tau = fraction * math.pi / delta_q
        expected = 0.5 * (1.0 - interference.beta(interference.BeatParams(tau, sigma_q, delta_q)))
        observed = oracle.numeric_p11(tau, sigma_q, delta_q)
        checks.append(
            _check(f"quadrature_p11[tau={fraction:g}pi_over_delta]", expected, observed,
                   1e-3 * abs(expected) * scale)
        )

    # brute-force enumeration against the analytic joint distribution
    for mu_e, beta_e in ((mu, beta), (0.3, 0.42), (0.65, 1.0)):
        config = heralding.HeraldConfig(mu_e, eta_c, beta_e)
        enumerated = oracle.enumerate_output_distribution(mu_e, beta_e)
        diff = max(
            abs(value - heralding.output_joint(r, s, config))
            for (r, s), value in enumerated.items()
        )
        checks.append(_check(f"enumeration_vs_closed_form[mu={mu_e:g},beta={beta_e:g}]",
                             0.0, diff, 1e-12 * scale))

    # independent-routing mini oracle at beta = 0
    routing_diff = max(
        abs(value - oracle.enumerate_output_distribution(mu, 0.0)[key])
        for key, value in oracle.independent_routing_distribution(mu).items()
    )
    checks.append(_check("independent_routing[beta=0]", 0.0, routing_diff, 1e-12 * scale))

    # seeded Monte Carlo against the analytic statistics and g2
    mc = oracle.McConfig(trials, seed)
    empirical = oracle.monte_carlo_heralded(mu, beta, eta_c, mc)
    analytic = heralding.heralded_statistics(heralding.HeraldConfig(mu, eta_c, beta))
    for label, got, want, se in (
        ("p_vacuum", empirical.p_vacuum, analytic.p_vacuum, empirical.se_vacuum),
        ("p_single", empirical.p_single, analytic.p_single, empirical.se_single),
        ("p_multi", empirical.p_multi, analytic.p_multi, empirical.se_multi),
    ):
        checks.append(_check(f"monte_carlo_heralded[{label}]", want, got, 4.0 * se * scale))
    g2_empirical = oracle.monte_carlo_g2(mu, beta, eta_c, hbt.eta_f, hbt.eta_g, mc)
    g2_analytic = correlation.g2_zero(analytic, hbt).g2_direct
    checks.append(
        _check("monte_carlo_g2", g2_analytic, g2_empirical.g2, 3.0 * g2_empirical.g2_se * scale)
    )

    all_pass = all(check["pass"] for check in checks)
    report = {
        "schema": output.SCHEMA_VERSION,
        "seed": seed,
        "trials": trials,
        "tol_scale": scale,
        "all_pass": all_pass,
        "checks": checks,
    }
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all_pass else EXIT_VERIFICATION


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, figure: bool = False) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its keys")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=output.FORMATS, default="csv")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed")
    if figure:
        parser.add_argument("--fig", help="figure path (default: alongside --out)")
        parser.add_argument("--no-fig", action="store_true", help="disable figure rendering")


def _add_beat_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sigma", type=float, help="wave-packet half-width at 1/e [s]")
    parser.add_argument("--delta", type=float, help="angular frequency offset [rad/s]")
    parser.add_argument("--coherence-time", dest="coherence_time", type=float,
                        help="quoted coherence time [s]; sigma = coherence_time * sigma_factor")
    parser.add_argument("--sigma-factor", dest="sigma_factor", type=float)
    parser.add_argument("--tau-min", dest="tau_min", type=float)
    parser.add_argument("--tau-max", dest="tau_max", type=float)
    parser.add_argument("--points", type=int)


def _add_channel_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha-db-per-km", dest="channel_alpha_db_per_km", type=float)
    parser.add_argument("--eta-bob", dest="channel_eta_bob", type=float)
    parser.add_argument("--p-dark", dest="channel_p_dark", type=float)
    parser.add_argument("--e-opt", dest="channel_e_opt", type=float)
    parser.add_argument("--f-ec", dest="channel_f_ec", type=float)
    parser.add_argument("--q-basis", dest="channel_q", type=float)
    parser.add_argument("--e0", dest="channel_e0", type=float)


def _add_qkd_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sources", help="comma list from faint,hps,spdc,ideal")
    parser.add_argument("--analyses", help="comma list from gllp,decoy")
    parser.add_argument("--eta-c", dest="eta_c", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--mu-min", dest="mu_min", type=float)
    parser.add_argument("--mu-max", dest="mu_max", type=float)
    parser.add_argument("--spdc-p1", dest="spdc_p1", type=float)
    parser.add_argument("--spdc-g2", dest="spdc_g2", type=float)
    _add_channel_options(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="homps",
        description="Heralded photon source simulator: interference statistics, "
                    "correlation functions, and BB84 key rates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("beat-pattern", help="normalized coincidence level vs delay")
    _add_common(p, figure=True)
    _add_beat_options(p)
    p.set_defaults(func=cmd_beat_pattern)

    p = sub.add_parser("herald-stats", help="heralded emission statistics vs mu")
    _add_common(p, figure=True)
    p.add_argument("--mu", help="comma list of mean photon numbers")
    p.add_argument("--eta-c", dest="eta_c", type=float)
    p.add_argument("--beta", type=float)
    p.set_defaults(func=cmd_herald_stats)

    p = sub.add_parser("g2", help="zero-delay correlation report, optional g2(tau) curve")
    _add_common(p, figure=True)
    p.add_argument("--mu", type=float)
    p.add_argument("--eta-c", dest="eta_c", type=float)
    p.add_argument("--eta-f", dest="eta_f", type=float)
    p.add_argument("--eta-g", dest="eta_g", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--curve", action="store_true", help="also emit a g2(tau) curve")
    p.add_argument("--curve-out", dest="curve_out", help="path of the curve table")
    _add_beat_options(p)
    p.set_defaults(func=cmd_g2)

    p = sub.add_parser("qkd-curve", help="key rate vs distance for the configured sources")
    _add_common(p, figure=True)
    _add_qkd_options(p)
    p.add_argument("--dist-min", dest="dist_min", type=float)
    p.add_argument("--dist-max", dest="dist_max", type=float)
    p.add_argument("--dist-step", dest="dist_step", type=float)
    p.set_defaults(func=cmd_qkd_curve)

    p = sub.add_parser("qkd-maxdist", help="maximum distance with positive key rate")
    _add_common(p)
    _add_qkd_options(p)
    p.add_argument("--cap-km", dest="cap_km", type=float)
    p.add_argument("--resolution-km", dest="resolution_km", type=float)
    p.set_defaults(func=cmd_qkd_maxdist)

    p = sub.add_parser("oracle-verify", help="run the independent oracle checks")
    _add_common(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--tol-scale", dest="tol_scale", type=float,
                   help="multiply every check tolerance (harness sanity knob)")
    p.add_argument("--mu", type=float)
    p.add_argument("--eta-c", dest="eta_c", type=float)
    p.add_argument("--eta-f", dest="eta_f", type=float)
    p.add_argument("--eta-g", dest="eta_g", type=float)
    p.add_argument("--beta", type=float)
    p.set_defaults(func=cmd_oracle_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"homps: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HompsError as exc:
        print(f"homps: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"homps: i/o error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
