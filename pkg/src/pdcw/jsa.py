"""Gaussian joint spectral amplitude and its sampled intensities.

The JSA over frequency offsets v = (nu_s, nu_i) is held as an exact quadratic
form,

    f(v) = exp(-v^T A v - i v^T C v + i d^T v),

with A, C real symmetric and A positive definite. The time domain is reached
with the project-wide convention

    f~(tau) = (2 pi)^-2 \\int f(v) exp(-i v . tau) d^2 v,

so the joint temporal intensity is |f~|^2 and, by Parseval,
(2 pi)^2 \\int |f~|^2 d^2 tau = \\int |f|^2 d^2 v.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WindowTooSmall
from .grid import Axis, Grid2D
from .model import DerivedParams

DEFAULT_GRID = 256
DEFAULT_WINDOW_SIGMAS = 4.0
MIN_WINDOW_SIGMAS = 2.0
# JTI border samples above this fraction of the peak indicate time-domain wrap-around
ALIASING_FLOOR = 1e-6

_FREQ_LABELS = ("nu_s", "nu_i")
_TIME_LABELS = ("tau_s", "tau_i")


@dataclass(frozen=True, eq=False)
class ComplexGaussian2D:
    """JSA as ``exp(-v.A.v - i v.C.v + i d.v)``; units (rad/fs)^-2, fs^2, fs."""

    A: np.ndarray
    C: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        C = np.array(self.C, dtype=float)
        d = np.array(self.d, dtype=float)
        if A.shape != (2, 2) or C.shape != (2, 2) or d.shape != (2,):
            raise ValueError("A and C must be 2x2, d a 2-vector")
        A = 0.5 * (A + A.T)
        C = 0.5 * (C + C.T)
        try:
            np.linalg.cholesky(A)
        except np.linalg.LinAlgError:
            raise ValueError("A must be positive definite") from None
        for name, arr in (("A", A), ("C", C), ("d", d)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def Q(self) -> np.ndarray:
        """Complex exponent matrix A + iC."""
        return self.A + 1j * self.C

    def __call__(self, nu_s, nu_i):
        return eval_jsa(self, nu_s, nu_i)


def build_jsa(params: DerivedParams, chirp: float = 0.0) -> ComplexGaussian2D:
    """Gaussian pump envelope times Gaussian phasematching, in frequency offsets.

    ``chirp`` is the pump chirp in fs^2.
    """
    u = np.array([1.0, 1.0])
    w = np.array([params.n_ps, params.n_pi])
    A = np.outer(u, u) / (2.0 * params.sigma**2) + params.phasematching_coefficient * np.outer(w, w)
    C = chirp * np.outer(u, u)
    d = 0.5 * params.L_over_c * w
    return ComplexGaussian2D(A, C, d)


def eval_jsa(jsa: ComplexGaussian2D, nu_s, nu_i):
    """Complex amplitude at (nu_s, nu_i); broadcasts over array inputs."""
    nu_s = np.asarray(nu_s, dtype=float)
    nu_i = np.asarray(nu_i, dtype=float)
    A, C, d = jsa.A, jsa.C, jsa.d
    real = A[0, 0] * nu_s**2 + 2.0 * A[0, 1] * nu_s * nu_i + A[1, 1] * nu_i**2
    quad = C[0, 0] * nu_s**2 + 2.0 * C[0, 1] * nu_s * nu_i + C[1, 1] * nu_i**2
    phase = d[0] * nu_s + d[1] * nu_i - quad
    return np.exp(-real) * np.exp(1j * phase)


def jsi_covariance(jsa: ComplexGaussian2D) -> np.ndarray:
    """Covariance of |f|^2 = exp(-2 v.A.v) viewed as a density."""
    return np.linalg.inv(4.0 * jsa.A)


def jsi_correlation(jsa: ComplexGaussian2D) -> float:
    """Exact Pearson correlation of the JSI."""
    A = jsa.A
    return float(-A[0, 1] / np.sqrt(A[0, 0] * A[1, 1]))


def jti_moments(jsa: ComplexGaussian2D) -> tuple[np.ndarray, np.ndarray]:
    """Mean and covariance of the joint temporal intensity.

    The Fourier transform of a complex Gaussian is Gaussian in tau - d with
    exponent -(tau - d).Q^-1.(tau - d)/4, hence the intensity covariance
    ``inv(Re(Q^-1))``.
    """
    cov = np.linalg.inv(np.linalg.inv(jsa.Q).real)
    return np.array(jsa.d), 0.5 * (cov + cov.T)


def auto_window(jsa: ComplexGaussian2D, window_sigmas: float = DEFAULT_WINDOW_SIGMAS) -> tuple[float, float]:
    """Per-axis half-widths covering ``window_sigmas`` marginal JSI standard deviations."""
    std = np.sqrt(np.diag(jsi_covariance(jsa)))
    return float(window_sigmas * std[0]), float(window_sigmas * std[1])


def _check_window(jsa: ComplexGaussian2D, window) -> tuple[float, float]:
    hw = (float(window[0]), float(window[1]))
    std = np.sqrt(np.diag(jsi_covariance(jsa)))
    for k in range(2):
        if not hw[k] >= MIN_WINDOW_SIGMAS * std[k] * (1 - 1e-12):
            raise WindowTooSmall(
                f"half-width {hw[k]:.4g} rad/fs on {_FREQ_LABELS[k]} covers "
                f"{hw[k] / std[k]:.3g} marginal standard deviations (< {MIN_WINDOW_SIGMAS:g})"
            )
    return hw


def frequency_axes(window, n: int) -> tuple[Axis, Axis]:
    return (Axis.centered(window[0], n, _FREQ_LABELS[0], "rad/fs"),
            Axis.centered(window[1], n, _FREQ_LABELS[1], "rad/fs"))


def sample_jsa(jsa: ComplexGaussian2D, window=None, n: int = DEFAULT_GRID) -> Grid2D:
    """Complex JSA samples on an ``n x n`` grid with the origin on sample ``n // 2``."""
    if window is None:
        window = auto_window(jsa)
    window = _check_window(jsa, window)
    ax1, ax2 = frequency_axes(window, n)
    v1, v2 = np.meshgrid(ax1.values(), ax2.values(), indexing="ij")
    return Grid2D(ax1, ax2, eval_jsa(jsa, v1, v2))


def sample_jsi(jsa: ComplexGaussian2D, window=None, n: int = DEFAULT_GRID) -> Grid2D:
    """Joint spectral intensity |f|^2 on a grid; the chirp drops out exactly."""
    if n < 16:
        raise ValueError(f"n must be at least 16, got {n}")
    amp = sample_jsa(jsa, window, n)
    return Grid2D(amp.axis1, amp.axis2, np.abs(amp.values) ** 2)


def fourier_transform_grid(amplitude: Grid2D) -> Grid2D:
    """Complex f~(tau) from a centred frequency-grid via FFT.

    Requires the layout of :meth:`Axis.centered` (origin on sample ``n // 2``)
    so that no residual linear phase appears.
    """
    n1, n2 = amplitude.values.shape
    h1, h2 = amplitude.axis1.step, amplitude.axis2.step
    spec = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(amplitude.values)))
    spec *= h1 * h2 / (2.0 * np.pi) ** 2
    t1 = Axis.centered(np.pi / h1, n1, _TIME_LABELS[0], "fs")
    t2 = Axis.centered(np.pi / h2, n2, _TIME_LABELS[1], "fs")
    return Grid2D(t1, t2, spec)


def sample_jti_fft(jsa: ComplexGaussian2D, window=None, n: int = DEFAULT_GRID) -> Grid2D:
    """Joint temporal intensity |f~|^2 from a 2-D FFT of the sampled JSA.

    Raises
    ------
    WindowTooSmall
        If the frequency window truncates the JSA or the JTI wraps around
        the time window (border samples above ``ALIASING_FLOOR`` of the peak).
    """
    if n < 64 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 64, got {n}")
    field = fourier_transform_grid(sample_jsa(jsa, window, n))
    jti = np.abs(field.values) ** 2
    border = max(jti[0, :].max(), jti[-1, :].max(), jti[:, 0].max(), jti[:, -1].max())
    if border > ALIASING_FLOOR * jti.max():
        raise WindowTooSmall(
            f"JTI reaches {border / jti.max():.2e} of its peak at the time-window border; "
            "increase n or narrow the frequency window"
        )
    return Grid2D(field.axis1, field.axis2, jti)
