"""Schmidt decomposition, cooperativity and time-bandwidth products."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGroupVelocity, NegativeIntensity, NotConverged, WindowTooSmall
from .grid import Grid2D
from .jsa import (DEFAULT_GRID, DEFAULT_WINDOW_SIGMAS, MIN_WINDOW_SIGMAS, ComplexGaussian2D,
                  auto_window, jti_moments, sample_jsa, sample_jsi)
from .model import EPS_DEGENERACY, DerivedParams
from .wigner import GaussianForm4D, condition, marginalize, moments

LAMBDA_CUTOFF = 1e-8
NEGATIVE_FLOOR = -1e-12
K_REFINEMENT_RTOL = 5e-3
MIN_SCHMIDT_GRID = 64


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    lambdas: np.ndarray  # descending, sum of squares 1
    grid_meta: dict = field(default_factory=dict)

    @property
    def K(self) -> float:
        return cooperativity(self)

    @property
    def weights(self) -> np.ndarray:
        """Mode probabilities lambda_n^2."""
        return self.lambdas**2


def schmidt_decompose(amplitude: Grid2D) -> SchmidtSpectrum:
    """Schmidt coefficients of a sampled two-photon amplitude.

    The singular values of ``F_jk sqrt(h1 h2)`` approximate the continuous
    Schmidt coefficients; they are rescaled so that sum(lambda^2) = 1 and
    values below ``LAMBDA_CUTOFF`` are dropped.
    """
    n1, n2 = amplitude.values.shape
    if min(n1, n2) < MIN_SCHMIDT_GRID:
        raise ValueError(f"need at least {MIN_SCHMIDT_GRID} samples per axis, got {n1}x{n2}")
    F = np.asarray(amplitude.values)
    intensity = np.abs(F) ** 2
    border = max(intensity[0, :].max(), intensity[-1, :].max(),
                 intensity[:, 0].max(), intensity[:, -1].max())
    if border > math.exp(-0.5 * MIN_WINDOW_SIGMAS**2) * intensity.max():
        raise WindowTooSmall(
            f"amplitude window is truncated: border intensity is {border / intensity.max():.3g} of peak"
        )
    s = np.linalg.svd(F * math.sqrt(amplitude.cell_area), compute_uv=False)
    lam = s / math.sqrt(np.sum(s**2))
    lam = lam[lam >= LAMBDA_CUTOFF]
    meta = {
        "n": [n1, n2],
        "window": [[amplitude.axis1.min, amplitude.axis1.max], [amplitude.axis2.min, amplitude.axis2.max]],
    }
    return SchmidtSpectrum(lam / math.sqrt(np.sum(lam**2)), meta)


def cooperativity(spectrum: SchmidtSpectrum) -> float:
    """Effective number of Schmidt modes, K = 1 / sum(lambda^4)."""
    lam = np.asarray(spectrum.lambdas, dtype=float)
    return float(1.0 / np.sum(lam**4))


def cooperativity_from_jsi(jsi: Grid2D) -> float:
    """K of the phase-free amplitude sqrt(JSI), as obtained from intensity data alone."""
    values = np.asarray(jsi.values, dtype=float)
    if values.min() < NEGATIVE_FLOOR:
        raise NegativeIntensity(f"intensity sample {values.min():.3e} below {NEGATIVE_FLOOR:g}")
    amp = Grid2D(jsi.axis1, jsi.axis2, np.sqrt(np.clip(values, 0.0, None)))
    return cooperativity(schmidt_decompose(amp))


def resolved_grid_size(jsa: ComplexGaussian2D, window, n: int = DEFAULT_GRID,
                       window_sigmas: float = DEFAULT_WINDOW_SIGMAS) -> int:
    """Smallest ``n * 2**k`` whose conjugate time window holds the JTI.

    A frequency step h represents arrival times up to pi/h; spectral phase
    (chirp in particular) stretches the JTI and would otherwise alias.
    """
    mean, cov = jti_moments(jsa)
    reach = np.abs(mean) + window_sigmas * np.sqrt(np.diag(cov))
    while True:
        steps = 2.0 * np.asarray(window) / n
        if np.all(np.pi / steps >= reach):
            return n
        n *= 2


def jsa_schmidt(jsa: ComplexGaussian2D, n: int = DEFAULT_GRID, window_sigmas: float = DEFAULT_WINDOW_SIGMAS,
                *, resolve_phase: bool = True, check_convergence: bool = False) -> SchmidtSpectrum:
    """Sample the JSA on an automatic window and Schmidt-decompose it.

    With ``resolve_phase`` the grid is refined until the spectral phase is
    resolved (see :func:`resolved_grid_size`). ``check_convergence``
    repeats the decomposition at twice the resolution and raises
    :class:`NotConverged` if K moves by more than 0.5 %.
    """
    window = auto_window(jsa, window_sigmas)
    if resolve_phase:
        n = resolved_grid_size(jsa, window, n, window_sigmas)
    spectrum = schmidt_decompose(sample_jsa(jsa, window, n))
    if check_convergence:
        refined = schmidt_decompose(sample_jsa(jsa, window, 2 * n))
        change = abs(refined.K - spectrum.K) / refined.K
        if change > K_REFINEMENT_RTOL:
            raise NotConverged(f"K changed by {change:.2%} when refining the grid {n} -> {2 * n}")
    return spectrum


def jsi_cooperativity(jsa: ComplexGaussian2D, n: int = DEFAULT_GRID,
                      window_sigmas: float = DEFAULT_WINDOW_SIGMAS) -> float:
    return cooperativity_from_jsi(sample_jsi(jsa, auto_window(jsa, window_sigmas), n))


def ictbp_closed_form(params: DerivedParams, chirp: float = 0.0) -> float:
    """Inverse conditioned time-bandwidth product of either photon."""
    n_ps, n_pi, n_si = params.n_ps, params.n_pi, params.n_si
    if abs(n_si) < EPS_DEGENERACY:
        raise DegenerateGroupVelocity(f"|n_si| = {abs(n_si):.3e} < {EPS_DEGENERACY:g}")
    sigma, gamma, Lc, a = params.sigma, params.gamma, params.L_over_c, chirp
    radicand = ((n_pi**2 + n_ps**2) / n_si**2
                + gamma * Lc**2 * sigma**2 * n_pi**2 * n_ps**2 / (2.0 * n_si**2)
                + 2.0 * (1.0 + 4.0 * a**2 * sigma**4) / (gamma * Lc**2 * sigma**2 * n_si**2))
    return math.sqrt(radicand)


def tbp_from_moments(spwf: GaussianForm4D) -> float:
    """Time-bandwidth product of a single-photon (nu, tau) Wigner function.

    Uses 2 sqrt(det Sigma), which equals 2 sigma_nu sigma_tau when the
    covariance is diagonal and gives exactly 1 for any pure Gaussian pulse,
    chirped or not.
    """
    if spwf.dim != 2:
        raise ValueError("tbp_from_moments needs a 2-D (nu, tau) form")
    _, cov = moments(spwf)
    return 2.0 * math.sqrt(np.linalg.det(cov))


def axis_tbp(spwf: GaussianForm4D) -> float:
    """2 sigma_nu sigma_tau from the diagonal covariance; >= tbp_from_moments."""
    _, cov = moments(spwf)
    return 2.0 * math.sqrt(cov[0, 0] * cov[1, 1])


def e2_half_widths(spwf: GaussianForm4D) -> tuple[float, float]:
    """Half-widths of the 1/e^2 contour along the nu and tau axes."""
    _, cov = moments(spwf)
    return 2.0 * math.sqrt(cov[0, 0]), 2.0 * math.sqrt(cov[1, 1])


_PHOTON = {"signal": ("s", "i"), "idler": ("i", "s")}


def unconditioned_spwf(form: GaussianForm4D, photon: str = "signal") -> GaussianForm4D:
    """Single-photon Wigner function with the partner traced out."""
    _, other = _PHOTON[photon]
    return marginalize(form, [f"nu_{other}", f"tau_{other}"])


def conditioned_spwf(form: GaussianForm4D, photon: str = "signal",
                     nu: float = 0.0, tau: float = 0.0) -> GaussianForm4D:
    """Single-photon Wigner function given the partner's frequency offset and arrival time."""
    _, other = _PHOTON[photon]
    return condition(form, {f"nu_{other}": nu, f"tau_{other}": tau})
