"""Exact complex-amplitude propagation of a coherent state through the interferometer.

A coherent state stays coherent under beam splitters and phase shifters, so
the full propagation reduces to 2x2 complex linear algebra on the pair of arm
amplitudes.  All functions here are pure and safe to call from any thread.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# Below this distance from pi/4 the first splitter is treated as balanced and
# the closed-form port amplitudes are used instead of step-by-step composition.
BALANCED_BS1_TOL = 1e-12


def wrap_angle(phi: float) -> float:
    """Wrap an angle to the interval (-pi, pi]."""
    wrapped = math.remainder(phi, math.tau)
    if wrapped <= -math.pi:
        return math.pi
    return wrapped


def coherent_amplitude(n_photons: float, phase: float = 0.0) -> complex:
    """Complex amplitude of a coherent state with the given mean photon number."""
    if n_photons < 0:
        raise ValueError(f"mean photon number must be >= 0, got {n_photons}")
    return cmath.rect(math.sqrt(n_photons), phase)


@dataclass
class MziParams:
    """All knobs of a single pass through the interferometer.

    Angles are radians: ``theta1``/``theta2`` are the splitter mixing angles,
    ``chi`` is the signal phase picked up in arm 1 and ``gamma`` the modulation
    phase in arm 2.  ``alpha`` is the input coherent amplitude; its squared
    magnitude is the mean photon number.
    """

    theta2: float
    chi: float
    alpha: complex
    theta1: float = math.pi / 4
    gamma: float = 0.0

    def __post_init__(self) -> None:
        for name, value in (("theta1", self.theta1), ("theta2", self.theta2)):
            if not 0.0 <= value <= math.pi / 2:
                raise ValueError(f"{name} must lie in [0, pi/2], got {value}")

    @property
    def n_photons(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def input_phase(self) -> float:
        return cmath.phase(self.alpha)


@dataclass
class PortFields:
    """Output amplitudes of the two exit ports (port 3 is the postselected one)."""

    alpha_f: complex
    alpha_fbar: complex

    @property
    def intensity_f(self) -> float:
        return abs(self.alpha_f) ** 2

    @property
    def intensity_fbar(self) -> float:
        return abs(self.alpha_fbar) ** 2


def bs_matrix(theta: float) -> np.ndarray:
    """2x2 scattering matrix of a beam splitter with mixing angle ``theta``."""
    c = math.cos(theta)
    s = math.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def bs_transform(a_in: complex, b_in: complex, theta: float) -> tuple[complex, complex]:
    """Mix two incident amplitudes on a beam splitter.

    Returns (c, d) with c = a*cos(theta) - i*b*sin(theta) and
    d = -i*a*sin(theta) + b*cos(theta); total intensity is conserved.
    """
    c = math.cos(theta)
    s = math.sin(theta)
    return a_in * c - 1j * b_in * s, -1j * a_in * s + b_in * c


def phase_shift(a: complex, phi: float) -> complex:
    """Advance the amplitude phase by ``phi`` radians."""
    return a * cmath.exp(1j * phi)


def propagate_mzi(params: MziParams) -> PortFields:
    """Propagate the input state through both splitters and the arm phases.

    The balanced-BS1 case uses the closed-form port amplitudes; any other
    first-splitter angle falls back to composing the individual elements,
    which is also the independent cross-check path used by the tests.
    """
    if abs(params.theta1 - math.pi / 4) < BALANCED_BS1_TOL:
        scale = params.alpha / math.sqrt(2.0)
        arm1 = cmath.exp(1j * params.chi)
        arm2 = cmath.exp(1j * params.gamma)
        c2 = math.cos(params.theta2)
        s2 = math.sin(params.theta2)
        return PortFields(
            alpha_f=scale * (arm1 * c2 - arm2 * s2),
            alpha_fbar=-1j * scale * (arm1 * s2 + arm2 * c2),
        )
    a, b = bs_transform(params.alpha, 0.0, params.theta1)
    a = phase_shift(a, params.chi)
    b = phase_shift(b, params.gamma)
    alpha_f, alpha_fbar = bs_transform(a, b, params.theta2)
    return PortFields(alpha_f=alpha_f, alpha_fbar=alpha_fbar)


def intensity_difference(params: MziParams) -> float:
    """Conventional readout: intensity in port 3 minus intensity in port 4.

    For balanced splitters this equals -N*cos(chi - gamma), the familiar
    interference fringe.
    """
    fields = propagate_mzi(params)
    return fields.intensity_f - fields.intensity_fbar
