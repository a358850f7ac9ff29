"""Scan orchestration and reproducible table/record emission.

Each figure runner resolves its parameters (config plus documented defaults),
hashes the resolved set, evaluates the scan grid in order (optionally across a
thread pool; results are assembled in grid order regardless of completion
order), and returns a Table ready for CSV or JSON rendering.  Rows at exact
dark points carry the literal sentinel "NA" instead of numbers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .amplification import chi_tilde_aav, chi_tilde_exact, weak_value
from .config import RunConfig, config_hash
from .errors import (
    ConfigError,
    DarkPointSingularity,
    ZeroAmplitude,
    ZeroSignal,
)
from .homodyne import (
    QUADRATURE_STD,
    quadrature_mean,
    quadrature_stats_exact,
)
from .optics import intensity_difference, propagate_mzi
from .saturation import error_ratio
from .shots import sample_shots

# Exposes the amplification ramp without touching the dark-point singularity.
DEFAULT_THETA2_GRID_START = 0.05
DEFAULT_THETA2_GRID_STOP = math.pi / 4 - 1e-4
DEFAULT_THETA2_GRID_POINTS = 200

DEFAULT_CHI_VALUES = [1e-4, 1e-2]
DEFAULT_N_VALUES = [100.0, 500.0, 1000.0, 2000.0]
DEFAULT_M_GRID = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000]

# Caption-style working point used when fig3 parameters are not configured.
FIG3_DEFAULT_THETA2 = math.pi / 4 - 0.003
FIG3_DEFAULT_CHI = 1e-2
FIG4_DEFAULT_CHI = 1e-4


@dataclass
class Table:
    """Ordered scan output with provenance metadata."""

    columns: list[str]
    rows: list[list[object]]
    meta: dict[str, object]
    sentinel_rows: int = 0

    @property
    def sentinel_only(self) -> bool:
        return bool(self.rows) and self.sentinel_rows == len(self.rows)


def _map_ordered(fn: Callable, items: Sequence, workers: int) -> list:
    """Apply ``fn`` over ``items`` preserving order, optionally in parallel."""
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def default_theta2_grid() -> list[float]:
    grid = np.linspace(
        DEFAULT_THETA2_GRID_START,
        DEFAULT_THETA2_GRID_STOP,
        DEFAULT_THETA2_GRID_POINTS,
    )
    return [float(x) for x in grid]


def _theta2_grid(config: RunConfig) -> list[float]:
    if config.scan is None:
        return default_theta2_grid()
    if config.scan.variable != "theta2":
        raise ConfigError(
            f"this figure scans theta2, got scan variable {config.scan.variable!r}"
        )
    return list(config.scan.grid)


def run_fig2(config: RunConfig, workers: int = 1) -> Table:
    """Amplified-phase ramp versus the postselection angle.

    One row per (chi, theta2) pair with both the small-coupling and the exact
    amplified phase, the weak value, and the postselected intensity.
    """
    grid = _theta2_grid(config)
    chi_values = config.chi_values or list(DEFAULT_CHI_VALUES)
    resolved = {
        "figure": "fig2",
        "theta1": config.theta1,
        "gamma": config.gamma,
        "n_photons": config.n_photons,
        "input_phase": config.input_phase,
        "chi_values": chi_values,
        "theta2_grid": grid,
        "precision": config.output.precision,
    }

    def evaluate(point: tuple[float, float]) -> tuple[list[object], bool]:
        chi, theta2 = point
        try:
            wv = weak_value(theta2, config.gamma)
            wv_amp = chi_tilde_aav(
                chi, theta2, config.gamma, math.sqrt(config.n_photons)
            )
            exact = chi_tilde_exact(
                config.mzi_params(theta2=theta2, chi=chi)
            )
        except (DarkPointSingularity, ZeroAmplitude):
            return [chi, theta2, None, None, None, None], True
        return [
            chi,
            theta2,
            wv_amp.chi_tilde,
            exact.chi_tilde,
            wv.a_w.real,
            exact.alpha_f_mag**2,
        ], False

    points = [(chi, theta2) for chi in chi_values for theta2 in grid]
    results = _map_ordered(evaluate, points, workers)
    rows = [row for row, _ in results]
    sentinels = sum(1 for _, dark in results if dark)
    return Table(
        columns=[
            "chi",
            "theta2",
            "chi_tilde_aav",
            "chi_tilde_exact",
            "weak_value",
            "port_intensity",
        ],
        rows=rows,
        meta={"config_sha256": config_hash(resolved), "seed": None},
        sentinel_rows=sentinels,
    )


def run_fig3(config: RunConfig, workers: int = 1) -> Table:
    """Sensitivity and uncertainty band versus the number of averaged shots.

    The Monte-Carlo column re-estimates the quadrature fluctuation from
    ``runs`` independent seeded batches per grid point; per-point child seeds
    are derived from (seed, point index), so the output does not depend on
    evaluation order.
    """
    if config.scan is not None and config.scan.variable != "m":
        raise ConfigError(
            f"fig3 scans m, got scan variable {config.scan.variable!r}"
        )
    if config.scan is None:
        m_grid = list(DEFAULT_M_GRID)
    else:
        m_grid = [int(round(x)) for x in config.scan.grid]
        if any(m < 1 for m in m_grid):
            raise ConfigError("fig3 m grid entries must be >= 1")
    if config.shots is None or config.shots.seed is None:
        raise ConfigError("fig3 needs a seed (shots.seed or --seed) for the "
                          "Monte-Carlo column")
    seed = config.shots.seed
    runs = config.shots.runs

    theta2 = config.theta2 if config.theta2 is not None else FIG3_DEFAULT_THETA2
    chi = config.chi if config.chi is not None else FIG3_DEFAULT_CHI
    lo = config.lo_config()
    params = config.mzi_params(theta2=theta2, chi=chi)
    stats = quadrature_stats_exact(params)
    amp = chi_tilde_exact(params)
    alpha_f = propagate_mzi(params).alpha_f
    slope = amp.alpha_f_mag * abs(math.cos(amp.chi_tilde))
    single_shot_band = QUADRATURE_STD / slope

    resolved = {
        "figure": "fig3",
        "theta1": config.theta1,
        "theta2": theta2,
        "gamma": config.gamma,
        "chi": chi,
        "n_photons": config.n_photons,
        "input_phase": config.input_phase,
        "lo": {"beta_mag": lo.beta_mag, "xi": lo.xi, "delta": lo.delta},
        "m_grid": m_grid,
        "seed": seed,
        "runs": runs,
        "precision": config.output.precision,
    }

    def evaluate(point: tuple[int, int]) -> tuple[list[object], bool]:
        index, m = point
        child_seeds = np.random.SeedSequence([seed, index]).generate_state(runs)
        means = np.array(
            [
                sample_shots(alpha_f, lo.effective_phase, m, int(s)).sample_mean
                for s in child_seeds
            ]
        )
        std_mc = float(means.std(ddof=1))
        sensitivity_mc = (
            amp.chi_tilde * slope / std_mc if std_mc > 0 else None
        )
        band = single_shot_band / math.sqrt(m)
        return [
            m,
            stats.sensitivity * math.sqrt(m),
            sensitivity_mc,
            amp.chi_tilde,
            amp.chi_tilde - band,
            amp.chi_tilde + band,
        ], False

    results = _map_ordered(evaluate, list(enumerate(m_grid)), workers)
    return Table(
        columns=[
            "m",
            "sensitivity",
            "sensitivity_mc",
            "chi_tilde",
            "chi_tilde_lower",
            "chi_tilde_upper",
        ],
        rows=[row for row, _ in results],
        meta={"config_sha256": config_hash(resolved), "seed": seed},
        sentinel_rows=0,
    )


def run_fig4(config: RunConfig, workers: int = 1) -> Table:
    """Saturation error ratio versus postselection angle, per input intensity."""
    if config.detector is None:
        raise ConfigError("fig4 needs a detector block (k_max, n_sat)")
    grid = _theta2_grid(config)
    n_values = config.n_values or list(DEFAULT_N_VALUES)
    chi = config.chi if config.chi is not None else FIG4_DEFAULT_CHI
    lo = config.lo_config()
    det = config.detector

    resolved = {
        "figure": "fig4",
        "theta1": config.theta1,
        "gamma": config.gamma,
        "chi": chi,
        "input_phase": config.input_phase,
        "lo": {"beta_mag": lo.beta_mag, "xi": lo.xi, "delta": lo.delta},
        "detector": {"k_max": det.k_max, "n_sat": det.n_sat},
        "n_values": n_values,
        "theta2_grid": grid,
        "precision": config.output.precision,
    }

    def evaluate(point: tuple[float, float]) -> tuple[list[object], bool]:
        n_photons, theta2 = point
        params = config.mzi_params(theta2=theta2, chi=chi, n_photons=n_photons)
        try:
            # Exact dark postselection makes the linear inversion degenerate
            # even when the port amplitude itself is nonzero.
            weak_value(theta2, config.gamma)
            report = error_ratio(params, lo, det)
        except (ZeroAmplitude, ZeroSignal, DarkPointSingularity):
            return [theta2, n_photons, None, None, None], True
        return [theta2, n_photons, report.n1, report.n2, report.eta_e], False

    points = [(n, theta2) for n in n_values for theta2 in grid]
    results = _map_ordered(evaluate, points, workers)
    return Table(
        columns=["theta2", "n_photons", "n1", "n2", "eta_e"],
        rows=[row for row, _ in results],
        meta={"config_sha256": config_hash(resolved), "seed": None},
        sentinel_rows=sum(1 for _, dark in results if dark),
    )


def run_single(config: RunConfig) -> dict:
    """One JSON record with every derived quantity at a single working point.

    Quantities that are undefined at the configured point (weak value at an
    exact dark point, phase of a vanishing amplitude) are emitted as null.
    """
    if config.scan is not None:
        raise ConfigError("single takes no scan block")
    params = config.mzi_params()
    lo = config.lo_config()
    fields = propagate_mzi(params)

    resolved = {
        "figure": "single",
        "theta1": params.theta1,
        "theta2": params.theta2,
        "gamma": params.gamma,
        "chi": params.chi,
        "n_photons": config.n_photons,
        "input_phase": config.input_phase,
        "lo": {"beta_mag": lo.beta_mag, "xi": lo.xi, "delta": lo.delta},
        "detector": None
        if config.detector is None
        else {"k_max": config.detector.k_max, "n_sat": config.detector.n_sat},
        "precision": config.output.precision,
    }

    record: dict[str, object] = {
        "config_sha256": config_hash(resolved),
        "alpha_f": {"re": fields.alpha_f.real, "im": fields.alpha_f.imag},
        "alpha_fbar": {"re": fields.alpha_fbar.real, "im": fields.alpha_fbar.imag},
        "port_intensity": fields.intensity_f,
        "complement_intensity": fields.intensity_fbar,
        "intensity_difference": intensity_difference(params),
        "quadrature_mean": quadrature_mean(fields.alpha_f, lo.effective_phase),
    }

    try:
        wv = weak_value(params.theta2, params.gamma)
        wv_amp = chi_tilde_aav(
            params.chi, params.theta2, params.gamma, abs(params.alpha)
        )
        record["chi_tilde_aav"] = wv_amp.chi_tilde
        record["weak_value"] = wv.a_w.real
    except DarkPointSingularity:
        record["chi_tilde_aav"] = None
        record["weak_value"] = None

    try:
        exact = chi_tilde_exact(params)
        stats = quadrature_stats_exact(params)
        record["chi_tilde_exact"] = exact.chi_tilde
        record["snr"] = stats.snr
        record["sensitivity"] = stats.sensitivity
    except ZeroAmplitude:
        record["chi_tilde_exact"] = None
        record["snr"] = None
        record["sensitivity"] = None

    if config.detector is not None:
        try:
            report = error_ratio(params, lo, config.detector)
            record["saturation"] = {
                "n1": report.n1,
                "n2": report.n2,
                "x_linear": report.x_linear,
                "x_saturated": report.x_saturated,
                "chi_tilde_biased": report.chi_tilde_biased,
                "eta_e": report.eta_e,
            }
        except (ZeroAmplitude, ZeroSignal):
            record["saturation"] = None
    return record


def _format_value(value: object, precision: int) -> str:
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), f".{precision}e")


def render_csv(table: Table, precision: int) -> str:
    """Fixed-precision CSV with a provenance comment line above the header."""
    seed = table.meta.get("seed")
    lines = [
        f"# config_sha256={table.meta['config_sha256']} "
        f"seed={'none' if seed is None else seed}",
        ",".join(table.columns),
    ]
    for row in table.rows:
        lines.append(",".join(_format_value(v, precision) for v in row))
    return "\n".join(lines) + "\n"


def render_table_json(table: Table, precision: int) -> str:
    payload = {
        "config_sha256": table.meta["config_sha256"],
        "seed": table.meta.get("seed"),
        "columns": table.columns,
        "rows": [
            [None if v is None else v for v in row] for row in table.rows
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_record_json(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def _values_match(expected: object, actual: object) -> bool:
    if isinstance(expected, dict) and isinstance(actual, dict):
        if set(expected) != set(actual):
            return False
        return all(_values_match(expected[k], actual[k]) for k in expected)
    if expected is None or actual is None:
        return expected is None and actual is None
    if isinstance(expected, bool) or isinstance(actual, bool):
        return expected == actual
    if isinstance(expected, (int, float)) and isinstance(actual, (int, float)):
        return math.isclose(expected, actual, rel_tol=1e-12, abs_tol=1e-15)
    return expected == actual


def self_check(record: dict, expected: dict) -> list[str]:
    """Compare a freshly computed record against stored expected values.

    Returns a list of mismatch descriptions; empty means the check passed.
    """
    mismatches = []
    for key in sorted(set(expected) | set(record)):
        if key not in record:
            mismatches.append(f"missing key {key!r}")
        elif key not in expected:
            mismatches.append(f"unexpected key {key!r}")
        elif not _values_match(expected[key], record[key]):
            mismatches.append(
                f"{key}: expected {expected[key]!r}, got {record[key]!r}"
            )
    return mismatches
