"""Ideal homodyne quadrature statistics of the postselected coherent state.

Convention: the quadrature operator mean in a coherent state |a> is
Re(a * exp(-i*xi)) and its standard deviation is exactly 1/2 regardless of the
amplitude or the local-oscillator phase.  With the sensitivity-optimal choice
xi = pi/2 + arg(alpha) the mean becomes |alpha_f| * sin(chi_tilde).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .amplification import chi_tilde_aav, chi_tilde_exact, invert_chi, with_chi
from .errors import DomainError, ZeroSignal
from .optics import MziParams

# Quadrature standard deviation of any coherent state in this convention.
QUADRATURE_STD = 0.5


@dataclass
class LoConfig:
    """Local-oscillator settings: amplitude, nominal phase, and phase error."""

    beta_mag: float
    xi: float
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.beta_mag <= 0:
            raise ValueError(f"LO amplitude must be positive, got {self.beta_mag}")

    @property
    def effective_phase(self) -> float:
        return self.xi + self.delta


@dataclass
class QuadratureStats:
    """Mean, fluctuation, SNR, and phase-estimation sensitivity of one readout."""

    mean: float
    std_dev: float
    snr: float
    sensitivity: float


def quadrature_mean(alpha_f: complex, xi: float) -> float:
    """Mean homodyne outcome Re(alpha_f * exp(-i*xi))."""
    return (alpha_f * cmath.exp(-1j * xi)).real


def quadrature_stats_aav(params: MziParams) -> QuadratureStats:
    """Quadrature statistics in the small-coupling limit (gamma = 0 scheme only).

    mean = sqrt(N/2) * (cos(theta2) - sin(theta2)) * sin(chi_tilde) and the
    sensitivity follows from error propagation with the 1/2 shot fluctuation:
    sqrt(2N) * |(cos(theta2) - sin(theta2)) * cos(chi_tilde)| * chi_tilde.
    """
    if params.gamma != 0.0:
        raise ValueError("small-coupling statistics are defined for the "
                         "splitter-modulation scheme (gamma = 0)")
    amp = chi_tilde_aav(params.chi, params.theta2, 0.0, abs(params.alpha))
    n = params.n_photons
    projection = math.cos(params.theta2) - math.sin(params.theta2)
    mean = math.sqrt(n / 2.0) * projection * math.sin(amp.chi_tilde)
    sensitivity = (
        math.sqrt(2.0 * n)
        * abs(projection * math.cos(amp.chi_tilde))
        * amp.chi_tilde
    )
    return QuadratureStats(
        mean=mean,
        std_dev=QUADRATURE_STD,
        snr=mean / QUADRATURE_STD,
        sensitivity=sensitivity,
    )


def quadrature_stats_exact(params: MziParams) -> QuadratureStats:
    """Quadrature statistics at any coupling strength.

    mean = |alpha_f| * sin(chi_tilde) with the exact amplified phase, and
    sensitivity = sqrt(2N * [1 - sin(2*theta2) * cos(chi - gamma)])
    * |cos(chi_tilde)| * chi_tilde.
    """
    amp = chi_tilde_exact(params)
    depth = 1.0 - math.sin(2.0 * params.theta2) * math.cos(params.chi - params.gamma)
    mean = amp.alpha_f_mag * math.sin(amp.chi_tilde)
    sensitivity = (
        math.sqrt(2.0 * params.n_photons * max(depth, 0.0))
        * abs(math.cos(amp.chi_tilde))
        * amp.chi_tilde
    )
    return QuadratureStats(
        mean=mean,
        std_dev=QUADRATURE_STD,
        snr=mean / QUADRATURE_STD,
        sensitivity=sensitivity,
    )


def modulation_error_compare(
    chi: float, params: MziParams, delta: float
) -> tuple[float, float]:
    """Relative phase bias from an LO phase error, with and without postselection.

    A conventional readout infers arcsin of the normalized quadrature and picks
    up the full offset ``delta``; the postselected readout inverts the
    amplified phase, dividing the offset by the amplification.  Returns
    (conventional_bias, postselected_bias), both as |inferred - chi| / |chi|.
    """
    if chi == 0.0:
        raise ZeroSignal("relative bias is undefined at chi = 0")
    work = with_chi(params, chi)
    amp = chi_tilde_exact(work)
    half_pi = math.pi / 2
    if not -half_pi < chi + delta < half_pi:
        raise DomainError(f"chi + delta = {chi + delta} outside (-pi/2, pi/2)")
    if not -half_pi < amp.chi_tilde + delta < half_pi:
        raise DomainError(
            f"chi_tilde + delta = {amp.chi_tilde + delta} outside (-pi/2, pi/2)"
        )
    conventional = math.asin(math.sin(chi + delta))
    inferred = invert_chi(amp.chi_tilde + delta, params.theta2, params.gamma)
    return abs(conventional - chi) / abs(chi), abs(inferred - chi) / abs(chi)


def rescaled_intensity(i1: float, i2: float, i_lo: float) -> tuple[float, bool]:
    """Signal intensity recovered from the two detector intensities and the LO.

    Returns (i1 + i2 - i_lo, clamped); a slightly negative result from
    measurement noise is clamped to zero with the flag set, so downstream
    square roots stay real.
    """
    for name, value in (("i1", i1), ("i2", i2), ("i_lo", i_lo)):
        if value < 0:
            raise ValueError(f"intensity {name} must be >= 0, got {value}")
    i_f = i1 + i2 - i_lo
    if i_f < 0.0:
        return 0.0, True
    return i_f, False
