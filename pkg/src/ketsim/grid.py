"""1D discretized wavefunctions: Gaussian packets, window projections, spectra.

Units fix hbar = 1. A wavefunction lives on n equally spaced samples
x_j = x_min + j*dx, dx = (x_max - x_min)/n, and is normalized in the
integral sense sum |psi_j|^2 dx = 1. Momentum spectra use the unitary DFT
convention, so Parseval holds exactly on the grid and the momentum grid is
p_k = 2*pi*k/(n*dx) folded to the symmetric interval.

Width convention: a packet of width parameter w has amplitude
exp(-(x-c)^2 / 2w^2), hence position std w/sqrt(2) and momentum std
1/(w*sqrt(2)); the uncertainty product is exactly 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ImpossibleOutcomeError, ParameterError

NORM_TOL = 1e-9
CONTAINMENT_RATIO = 1e-6


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    """Complex amplitudes over a uniform 1D grid."""

    n: int
    x_min: float
    x_max: float
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if not _is_power_of_two(self.n):
            raise ParameterError(f"sample count must be a power of two, got {self.n}")
        if not self.x_max > self.x_min:
            raise ParameterError("x_max must exceed x_min")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.n,):
            raise ParameterError(f"amplitudes must have shape ({self.n},)")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @cached_property
    def xs(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.dx)

    def normalized(self) -> "GridWavefunction":
        n2 = self.norm_sq()
        if n2 < 1e-300:
            raise ImpossibleOutcomeError("cannot normalize a zero wavefunction")
        return GridWavefunction(self.n, self.x_min, self.x_max, self.amplitudes / math.sqrt(n2))

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def contained(wf: GridWavefunction) -> bool:
    """Boundary samples negligible relative to the peak."""
    mags = np.abs(wf.amplitudes)
    peak = float(mags.max())
    if peak == 0.0:
        return False
    return bool(mags[0] < CONTAINMENT_RATIO * peak and mags[-1] < CONTAINMENT_RATIO * peak)


def gaussian_packet(
    n: int, x_min: float, x_max: float, center: float, width: float
) -> GridWavefunction:
    """Normalized packet exp(-(x-center)^2 / 2*width^2) on the grid."""
    if width <= 0:
        raise ParameterError("width must be positive")
    probe = GridWavefunction(n, x_min, x_max, np.zeros(n, dtype=complex))
    if probe.dx > width / 4:
        raise ParameterError(
            f"grid spacing {probe.dx:g} does not resolve width {width:g} (need dx <= width/4)"
        )
    xs = probe.xs
    amps = np.exp(-((xs - center) ** 2) / (2.0 * width * width)).astype(complex)
    wf = GridWavefunction(n, x_min, x_max, amps).normalized()
    if not contained(wf):
        raise ParameterError("packet is not contained: boundary amplitude too large")
    return wf


@dataclass(frozen=True)
class DickeParams:
    """Wide packet at x1 (width L) plus a small faraway packet at x2 (width ell).

    eps sets the amplitude fraction on the small packet; the packets must be
    well separated (|x1-x2| >= 5(L+ell)) and the small one much narrower
    (ell <= L/10) so the cross term stays below tolerance.
    """

    L: float
    ell: float
    x1: float
    x2: float
    eps: float

    def __post_init__(self) -> None:
        if self.L <= 0 or self.ell <= 0:
            raise ParameterError("widths must be positive")
        if self.ell > self.L / 10 + 1e-12:
            raise ParameterError("ell must satisfy ell <= L/10")
        if not (0.0 < self.eps < 1.0):
            raise ParameterError("eps must lie strictly between 0 and 1")
        if abs(self.x1 - self.x2) < 5.0 * (self.L + self.ell):
            raise ParameterError("centers must be at least 5*(L+ell) apart")

    # Continuum normalizers of the individual packets: each makes
    # N*exp(-(x-c)^2/2w^2) unit-norm before the eps weighting.
    @property
    def n1(self) -> float:
        return (math.pi * self.L * self.L) ** -0.25

    @property
    def n2(self) -> float:
        return (math.pi * self.ell * self.ell) ** -0.25

    @property
    def nf(self) -> float:
        return self.n2


def dicke_domain(params: DickeParams) -> tuple[float, float]:
    """Default domain: 8 wide-packet widths beyond both centers."""
    lo = min(params.x1, params.x2) - 8.0 * params.L
    hi = max(params.x1, params.x2) + 8.0 * params.L
    return lo, hi


def dicke_grid_size(params: DickeParams, domain: tuple[float, float]) -> int:
    """Smallest power of two >= 4096 with dx <= ell/8."""
    span = domain[1] - domain[0]
    n = 4096
    while span / n > params.ell / 8.0:
        n *= 2
    return n


def gaussian_superposition(
    params: DickeParams,
    n: int | None = None,
    domain: tuple[float, float] | None = None,
) -> GridWavefunction:
    """sqrt(1-eps^2)*N1*exp(-(x-x1)^2/2L^2) + eps*N2*exp(-(x-x2)^2/2ell^2).

    The literal two-packet sum, renormalized on the grid; the cross term is
    kept (the separation invariant makes it negligible, not absent).
    """
    if domain is None:
        domain = dicke_domain(params)
    lo, hi = domain
    for c, w in ((params.x1, params.L), (params.x2, params.ell)):
        if not (lo <= c - 5.0 * w and c + 5.0 * w <= hi):
            raise ParameterError("domain too small: needs 5 widths beyond each packet")
    if n is None:
        n = dicke_grid_size(params, domain)
    probe = GridWavefunction(n, lo, hi, np.zeros(n, dtype=complex))
    if probe.dx > params.ell / 8.0:
        raise ParameterError(
            f"grid spacing {probe.dx:g} does not resolve ell={params.ell:g} (need dx <= ell/8)"
        )
    xs = probe.xs
    big = params.n1 * np.exp(-((xs - params.x1) ** 2) / (2.0 * params.L**2))
    small = params.n2 * np.exp(-((xs - params.x2) ** 2) / (2.0 * params.ell**2))
    amps = (math.sqrt(1.0 - params.eps**2) * big + params.eps * small).astype(complex)
    wf = GridWavefunction(n, lo, hi, amps).normalized()
    if not contained(wf):
        raise ParameterError("superposition is not contained on the requested domain")
    return wf


def window_project(
    wf: GridWavefunction, interval: tuple[float, float], keep_inside: bool
) -> tuple[float, GridWavefunction]:
    """Project onto a position window (or its complement) and renormalize.

    keep_inside=False is the null-result reading: detectors saw nothing in
    the window, so the amplitude there is removed. The returned probability
    is the Born weight of the kept region.
    """
    a, b = interval
    if not (wf.x_min <= a < b <= wf.x_max):
        raise ParameterError("interval must lie within the domain")
    inside = (wf.xs >= a) & (wf.xs <= b)
    mask = inside if keep_inside else ~inside
    kept = np.where(mask, wf.amplitudes, 0.0j)
    prob = float(np.sum(np.abs(kept) ** 2) * wf.dx)
    if prob <= 1e-12:
        raise ImpossibleOutcomeError(
            f"window projection has probability {prob:g}; no support on the kept region"
        )
    post = GridWavefunction(wf.n, wf.x_min, wf.x_max, kept / math.sqrt(prob))
    return prob, post


def momentum_amplitudes(wf: GridWavefunction) -> tuple[np.ndarray, np.ndarray]:
    """(momentum grid ascending, complex momentum amplitudes).

    Unitary convention: phi(p) = (1/sqrt(2*pi)) * integral psi(x) e^{-ipx} dx,
    discretized so sum |phi_k|^2 dp = sum |psi_j|^2 dx exactly.
    """
    dx = wf.dx
    f = np.fft.fft(wf.amplitudes)
    p = 2.0 * math.pi * np.fft.fftfreq(wf.n, d=dx)
    phi = f * dx / math.sqrt(2.0 * math.pi) * np.exp(-1j * p * wf.x_min)
    order = np.fft.fftshift(np.arange(wf.n))
    return p[order], phi[order]


def from_momentum_amplitudes(
    p: np.ndarray, phi: np.ndarray, n: int, x_min: float, x_max: float
) -> GridWavefunction:
    """Inverse of momentum_amplitudes on the same grid geometry."""
    dx = (x_max - x_min) / n
    unshift = np.fft.ifftshift(np.arange(n))
    p0 = p[unshift]
    f = phi[unshift] * math.sqrt(2.0 * math.pi) / dx * np.exp(1j * p0 * x_min)
    return GridWavefunction(n, x_min, x_max, np.fft.ifft(f))


def momentum_spectrum(wf: GridWavefunction) -> tuple[np.ndarray, np.ndarray]:
    """(momentum grid ascending, Born probabilities |phi_k|^2 dp)."""
    if not contained(wf):
        raise ParameterError("spectrum needs a contained wavefunction (boundary leakage)")
    p, phi = momentum_amplitudes(wf)
    dp = 2.0 * math.pi / (wf.n * wf.dx)
    return p, np.abs(phi) ** 2 * dp


def moments(arg) -> tuple[float, float]:
    """(mean, std) of position for a wavefunction, or of a (grid, probs) pair."""
    if isinstance(arg, GridWavefunction):
        grid = arg.xs
        weights = arg.density() * arg.dx
    else:
        grid, weights = arg
        grid = np.asarray(grid, dtype=float)
        weights = np.asarray(weights, dtype=float)
    total = float(np.sum(weights))
    if not math.isclose(total, 1.0, abs_tol=1e-6):
        raise ParameterError(f"moments need a normalized input (total weight {total:g})")
    mean = float(np.sum(grid * weights)) / total
    var = float(np.sum((grid - mean) ** 2 * weights)) / total
    return mean, math.sqrt(max(var, 0.0))


def translate(wf: GridWavefunction, d: float) -> GridWavefunction:
    """Exact rigid shift psi(x) -> psi(x - d) via a momentum phase ramp.

    Unitary on the periodic grid; the caller keeps shifts small enough that
    nothing wraps around the boundary.
    """
    f = np.fft.fft(wf.amplitudes)
    p = 2.0 * math.pi * np.fft.fftfreq(wf.n, d=wf.dx)
    return GridWavefunction(wf.n, wf.x_min, wf.x_max, np.fft.ifft(f * np.exp(-1j * p * d)))
