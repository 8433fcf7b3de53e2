"""Four-source interference and the coupling-derived distance.

An emitter (1) is linked through two intermediate sources (2 and 4, the
slits) to a detector (3).  Each link at line frequency w0 carries the
response coefficient

    d_im = k_im / (k_im^2 - (w0^2 m - k)^2)

and the two chained paths interfere:

    psi propto exp[(i/2 pi hbar)(g1 d12 j2 + g2 d23 j3)]
             + exp[(i/2 pi hbar)(g1 d14 j4 + g4 d43 j3)]

When the emitter sits symmetrically (g1 d12 j2 == g1 d14 j4) the common
phase drops and only the slit-to-detector legs remain.  Matching each leg
phase against the free-particle phase p x / (2 hbar) of an exchange
particle with momentum p = m_ex * x12 / t defines a separation

    x_ik = g_i d_ik j_k / (pi p)

which exists only between coupled sources (k_im = 0 gives x = 0) and, with
the impulse taken proportional to p, depends on the pair's dynamical
parameters alone.  Only the two chained pairings are composed here; the
exact four-source solution would couple every pair at once.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EquidistanceViolated, ResonantCoupling, ZeroMomentum
from .lattice import Amplitude

__all__ = [
    "TwinSlitScenario",
    "SchrodingerSide",
    "DistanceResult",
    "ScanRow",
    "coupling_coefficient",
    "four_source_amplitude",
    "equidistant_amplitude",
    "intensity",
    "schrodinger_propagator",
    "point_source_wave",
    "schrodinger_two_path",
    "infer_distance",
    "phase_schedule",
    "pattern_scan",
]

TWO_PI = 2.0 * math.pi


@dataclass
class TwinSlitScenario:
    """Four-source arrangement: shared oscillator parameters (mass,
    spring), the line frequency, per-source strengths and impulses, and
    the four link couplings."""

    mass: float
    spring: float
    omega0: float
    gamma1: float
    gamma2: float
    gamma4: float
    j2: float
    j3: float
    j4: float
    k12: float
    k14: float
    k23: float
    k43: float
    hbar: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass: must be positive")
        if self.spring < 0:
            raise ValueError("spring: must be nonnegative")
        if not self.hbar > 0:
            raise ValueError("hbar: must be positive")
        for name in ("omega0", "gamma1", "gamma2", "gamma4", "j2", "j3",
                     "j4", "k12", "k14", "k23", "k43"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name}: must be finite")


@dataclass
class SchrodingerSide:
    """Free-particle counterpart: exchange mass (not the oscillator mass),
    interaction time, and the emitter/slit/detector separations."""

    exchange_mass: float
    interaction_time: float
    x12: float
    x23: float
    x43: float
    alpha: complex = 1.0 + 0.0j

    def __post_init__(self):
        if not self.exchange_mass > 0:
            raise ValueError("exchange_mass: must be positive")
        if not self.interaction_time > 0:
            raise ValueError("interaction_time: must be positive")

    @property
    def momentum(self):
        return self.exchange_mass * self.x12 / self.interaction_time


@dataclass
class DistanceResult:
    """Inferred separation and the proportionality constant used, so the
    mapping x = scale * gamma * d is invertible."""

    x_im: float
    scale: float


def coupling_coefficient(k_im, net, omega0, resonance_rtol=1e-9):
    """d_im = k_im / (k_im^2 - (w0^2 m - k)^2); zero coupling gives zero.

    `net` is anything carrying mass and spring.  Raises ResonantCoupling
    when the denominator vanishes within tolerance.
    """
    c = omega0 * omega0 * net.mass - net.spring
    denom = k_im * k_im - c * c
    scale = max(k_im * k_im, c * c)
    if scale == 0.0 or abs(denom) <= resonance_rtol * scale:
        raise ResonantCoupling(
            f"k_im^2 = (w0^2 m - k)^2 within tolerance (k_im={k_im})")
    return k_im / denom


def _link_phases(sc):
    d12 = coupling_coefficient(sc.k12, sc, sc.omega0)
    d14 = coupling_coefficient(sc.k14, sc, sc.omega0)
    d23 = coupling_coefficient(sc.k23, sc, sc.omega0)
    d43 = coupling_coefficient(sc.k43, sc, sc.omega0)
    h = TWO_PI * sc.hbar
    return (sc.gamma1 * d12 * sc.j2 / h, sc.gamma1 * d14 * sc.j4 / h,
            sc.gamma2 * d23 * sc.j3 / h, sc.gamma4 * d43 * sc.j3 / h)


def four_source_amplitude(sc):
    """Two-path sum over both chained links, unnormalized (|psi| <= 2)."""
    p12, p14, p23, p43 = _link_phases(sc)
    return Amplitude.from_complex(np.exp(1j * (p12 + p23)) + np.exp(1j * (p14 + p43)))


def equidistant_amplitude(sc, tol=1e-9):
    """Two-path sum with the common emitter phase dropped.

    Requires the emitter legs to carry equal phase (g1 d12 j2 == g1 d14 j4
    within tol, relative); equals four_source_amplitude times
    exp(-i * common phase).
    """
    p12, p14, p23, p43 = _link_phases(sc)
    ref = max(abs(p12), abs(p14), 1e-300)
    if abs(p12 - p14) > tol * ref:
        raise EquidistanceViolated(
            f"emitter leg phases differ: {p12!r} vs {p14!r}")
    return Amplitude.from_complex(np.exp(1j * p23) + np.exp(1j * p43))


def intensity(psi):
    """Born-rule intensity |psi|^2 of an Amplitude or complex value."""
    if isinstance(psi, Amplitude):
        return psi.intensity
    return float(abs(complex(psi)) ** 2)


def schrodinger_propagator(x2, x1, t, side, hbar=1.0):
    """Free-particle kernel sqrt(m/(2 pi hbar i t)) exp(i m (x2-x1)^2 / (2 hbar t)),
    principal square root."""
    if not t > 0:
        raise ValueError("t: must be positive")
    m = side.exchange_mass
    pref = np.sqrt(m / (TWO_PI * hbar * 1j * t))
    return complex(pref * np.exp(1j * m * (x2 - x1) ** 2 / (2.0 * hbar * t)))


def point_source_wave(side, hbar=1.0):
    """Wave reaching x12 from a delta source alpha*delta(x - x1): the
    propagator times alpha, whose phase is p*x12/(2*hbar) with
    p = m*x12/t."""
    return side.alpha * schrodinger_propagator(side.x12, 0.0,
                                               side.interaction_time, side, hbar)


def schrodinger_two_path(side, hbar=1.0):
    """Free-particle two-path sum exp(i p x23/2hbar) + exp(i p x43/2hbar).

    Valid when the separations are large against hbar/p; a violation
    warns but still evaluates.
    """
    p = side.momentum
    if p == 0.0:
        warnings.warn("zero momentum transfer: phases collapse to zero",
                      stacklevel=2)
    elif min(abs(side.x23), abs(side.x43)) < 10.0 * hbar / abs(p):
        warnings.warn("separations are not large against hbar/p; "
                      "the reduced two-path form is marginal", stacklevel=2)
    ph23 = p * side.x23 / (2.0 * hbar)
    ph43 = p * side.x43 / (2.0 * hbar)
    return Amplitude.from_complex(np.exp(1j * ph23) + np.exp(1j * ph43))


def infer_distance(gamma_i, k_im, j_k, net, omega0, side, hbar=1.0,
                   proportional=False, impulse_per_momentum=1.0):
    """Separation solving the phase match p x/(2 hbar) = g d j/(2 pi hbar).

    Exact mode: x = gamma * d * j_k / (pi p), scale = j_k / (pi p).  With
    proportional=True the impulse is taken as impulse_per_momentum * p and
    the momentum cancels: scale = impulse_per_momentum / pi.  Either way
    x = scale * gamma * d, and k_im = 0 gives x = 0 exactly.
    """
    d = coupling_coefficient(k_im, net, omega0)
    p = side.momentum
    if p == 0.0:
        raise ZeroMomentum("momentum transfer is zero; no phase to match")
    if proportional:
        scale = impulse_per_momentum / math.pi
    else:
        scale = j_k / (math.pi * p)
    return DistanceResult(scale * gamma_i * d, scale)


def _invert_coupling(d, c):
    # solve d = kappa / (kappa^2 - c^2) for the |kappa| < |c| branch
    if d == 0.0:
        return 0.0
    if c == 0.0:
        return 1.0 / d
    return -2.0 * d * c * c / (1.0 + math.sqrt(1.0 + 4.0 * d * d * c * c))


def phase_schedule(sc, points, phase_start=0.0, phase_stop=TWO_PI, k43=None):
    """Couplings (k23, k43) whose leg-phase difference sweeps the given
    range in `points` uniform steps; k43 stays fixed (default the
    scenario's) and k23 is solved from the response coefficient."""
    if points < 1:
        raise ValueError("points: must be >= 1")
    if sc.j3 == 0.0 or sc.gamma2 == 0.0:
        raise ValueError("j3 and gamma2 must be nonzero to invert the phase map")
    if k43 is None:
        k43 = sc.k43
    d43 = coupling_coefficient(k43, sc, sc.omega0)
    c = sc.omega0 ** 2 * sc.mass - sc.spring
    targets = np.linspace(phase_start, phase_stop, points)
    pairs = []
    for dphi in targets:
        d23 = (TWO_PI * sc.hbar * dphi / sc.j3 + sc.gamma4 * d43) / sc.gamma2
        pairs.append((_invert_coupling(d23, c), k43))
    return pairs


@dataclass
class ScanRow:
    k23: float
    k43: float
    d23: float
    d43: float
    x23: float
    x43: float
    phase23_discrete: float
    phase43_discrete: float
    phase23_schrodinger: float
    phase43_schrodinger: float
    intensity_discrete: float
    intensity_schrodinger: float
    resonant: bool = False


def pattern_scan(sc, coupling_schedule, side):
    """One row per (k23, k43) pair: response coefficients, leg phases on
    both sides, inferred separations, and both intensities.

    The discrete and free-particle intensity columns agree identically
    because the separations are defined by the phase match.  Resonant
    pairs are kept as flagged rows with nan values; the emitter-leg
    equidistance precondition is checked once up front.
    """
    d12 = coupling_coefficient(sc.k12, sc, sc.omega0)
    d14 = coupling_coefficient(sc.k14, sc, sc.omega0)
    p12 = sc.gamma1 * d12 * sc.j2 / (TWO_PI * sc.hbar)
    p14 = sc.gamma1 * d14 * sc.j4 / (TWO_PI * sc.hbar)
    ref = max(abs(p12), abs(p14), 1e-300)
    if abs(p12 - p14) > 1e-9 * ref:
        raise EquidistanceViolated(
            f"emitter leg phases differ: {p12!r} vs {p14!r}")
    p = side.momentum
    if p == 0.0:
        raise ZeroMomentum("momentum transfer is zero; no phase to match")
    h = TWO_PI * sc.hbar
    rows = []
    nan = math.nan
    for k23, k43 in coupling_schedule:
        try:
            d23 = coupling_coefficient(k23, sc, sc.omega0)
            d43 = coupling_coefficient(k43, sc, sc.omega0)
        except ResonantCoupling:
            rows.append(ScanRow(k23, k43, nan, nan, nan, nan, nan, nan,
                                nan, nan, nan, nan, resonant=True))
            continue
        ph23 = sc.gamma2 * d23 * sc.j3 / h
        ph43 = sc.gamma4 * d43 * sc.j3 / h
        x23 = infer_distance(sc.gamma2, k23, sc.j3, sc, sc.omega0, side,
                             hbar=sc.hbar).x_im
        x43 = infer_distance(sc.gamma4, k43, sc.j3, sc, sc.omega0, side,
                             hbar=sc.hbar).x_im
        ph23s = p * x23 / (2.0 * sc.hbar)
        ph43s = p * x43 / (2.0 * sc.hbar)
        int_d = intensity(np.exp(1j * ph23) + np.exp(1j * ph43))
        int_s = intensity(np.exp(1j * ph23s) + np.exp(1j * ph43s))
        rows.append(ScanRow(k23, k43, d23, d43, x23, x43, ph23, ph43,
                            ph23s, ph43s, int_d, int_s))
    return rows
