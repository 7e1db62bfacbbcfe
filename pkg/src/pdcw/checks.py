"""Cross-checks between independent computational routes.

Each check returns a :class:`CheckResult` with the measured error next to the
tolerance it is held to. :func:`run_checks` drives the whole set for a config.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .entanglement import (conditioned_spwf, ictbp_closed_form, jsa_schmidt, tbp_from_moments)
from .jsa import ComplexGaussian2D, auto_window, build_jsa, sample_jsi, sample_jti_fft
from .model import DerivedParams, ProcessConfig, derive_params
from .wigner import (GaussianForm4D, analytic_wigner, marginalize, moments, numeric_wigner_oracle,
                     wigner_of_gaussian_jsa)

PATH_RTOL = 1e-9
ORACLE_RTOL = 1e-6
ORACLE_IMAG_RTOL = 1e-9
FREQ_MARGINAL_RTOL = 1e-9
TIME_MARGINAL_TOL = 1e-4
NORMALIZATION_TOL = 1e-4
TRIANGLE_CLOSED_TOL = 1e-9
TRIANGLE_SVD_RTOL = 0.02

# wide frequency window for the FFT route: truncating f at 4 JSI standard
# deviations leaves ~1e-2 amplitude at the border, far above TIME_MARGINAL_TOL
JTI_CHECK_WINDOW_SIGMAS = 8.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _result(name, measured, tolerance, detail="") -> CheckResult:
    return CheckResult(name, bool(measured <= tolerance), float(measured), float(tolerance), detail)


def coefficient_mismatch(a: GaussianForm4D, b: GaussianForm4D) -> float:
    """Largest scale-free difference between the (M, b) of two forms.

    M entries are compared relative to sqrt(M_ii M_jj) and b entries relative
    to sqrt(M_ii), which makes the measure independent of units.
    """
    s = 1.0 / np.sqrt(np.abs(np.diag(a.M)))
    dM = np.abs(a.M - b.M) * np.outer(s, s)
    db = np.abs(a.b - b.b) * s
    return float(max(dM.max(), db.max()))


def check_wigner_paths(params: DerivedParams, chirp: float, fault_injection: bool = False) -> CheckResult:
    eq = analytic_wigner(params, chirp, fault_injection=fault_injection)
    derived = wigner_of_gaussian_jsa(build_jsa(params, chirp))
    return _result("wigner_paths", coefficient_mismatch(eq, derived), PATH_RTOL,
                   "closed-form coefficients vs Wigner transform of the Gaussian JSA")


def phase_space_points(form: GaussianForm4D, count: int, seed: int = 0) -> np.ndarray:
    """Random points drawn from the Gaussian itself (where W is not negligible)."""
    mean, cov = moments(form)
    return np.random.default_rng(seed).multivariate_normal(mean, cov, size=count)


def check_oracle(params: DerivedParams, chirp: float, count: int = 20, seed: int = 0,
                 fault_injection: bool = False) -> list[CheckResult]:
    jsa = build_jsa(params, chirp)
    eq = analytic_wigner(params, chirp, fault_injection=fault_injection, normalize_form=False)
    derived = wigner_of_gaussian_jsa(jsa, normalize_form=False)
    worst_eq = worst_derived = worst_imag = 0.0
    for z in phase_space_points(derived, count, seed):
        ref = numeric_wigner_oracle(jsa, *z)
        worst_eq = max(worst_eq, abs(eq(z) - ref.value) / abs(ref.value))
        worst_derived = max(worst_derived, abs(derived(z) - ref.value) / abs(ref.value))
        worst_imag = max(worst_imag, abs(ref.imag) / abs(ref.value))
    return [
        _result("oracle_closed_form", worst_eq, ORACLE_RTOL, f"{count} points, quadrature vs closed form"),
        _result("oracle_transform", worst_derived, ORACLE_RTOL, f"{count} points, quadrature vs JSA transform"),
        _result("oracle_imaginary", worst_imag, ORACLE_IMAG_RTOL, "imaginary residue / |W|"),
    ]


def frequency_marginal_error(jsa: ComplexGaussian2D, form: GaussianForm4D, n: int = 256,
                             window_sigmas: float = 4.0) -> float:
    """Spread of JSI / (time-marginal of W) over a grid, relative to its mean."""
    jsi = sample_jsi(jsa, auto_window(jsa, window_sigmas), n)
    marginal = marginalize(form, ["tau_s", "tau_i"])
    v1, v2 = jsi.mesh()
    ratio = jsi.values / marginal(np.stack([v1, v2], axis=-1))
    return float((ratio.max() - ratio.min()) / ratio.mean())


def time_marginal_error(jsa: ComplexGaussian2D, form: GaussianForm4D, n: int = 256,
                        window_sigmas: float = JTI_CHECK_WINDOW_SIGMAS) -> float:
    """Max deviation between the FFT JTI and the frequency-marginal of W.

    Both are normalized to unit mass; the deviation is relative to the peak.
    """
    jti = sample_jti_fft(jsa, auto_window(jsa, window_sigmas), n)
    fft_density = jti.values / (jti.values.sum() * jti.cell_area)
    marginal = marginalize(form, ["nu_s", "nu_i"])
    t1, t2 = jti.mesh()
    analytic = marginal(np.stack([t1, t2], axis=-1))
    return float(np.abs(fft_density - analytic).max() / analytic.max())


def grid_integral(form: GaussianForm4D, half_range: float = 6.0, nodes: int = 24) -> float:
    """Trapezoid integral over a +-half_range standard-deviation box in whitened coordinates."""
    mean, cov = moments(form)
    R = np.linalg.cholesky(cov)
    y = np.linspace(-half_range, half_range, nodes)
    wt = np.full(nodes, y[1] - y[0])
    wt[[0, -1]] *= 0.5
    Y = np.array(list(itertools.product(y, repeat=form.dim)))
    W = np.array(list(itertools.product(wt, repeat=form.dim))).prod(axis=1)
    return float(np.abs(np.linalg.det(R)) * np.sum(W * form(mean + Y @ R.T)))


def check_marginals(jsa: ComplexGaussian2D, form: GaussianForm4D, n: int) -> list[CheckResult]:
    return [
        _result("frequency_marginal", frequency_marginal_error(jsa, form, n), FREQ_MARGINAL_RTOL,
                "JSI vs time-integrated W (ratio spread)"),
        _result("time_marginal", time_marginal_error(jsa, form, n), TIME_MARGINAL_TOL,
                f"FFT JTI vs frequency-integrated W on {n}^2, window {JTI_CHECK_WINDOW_SIGMAS:g} sigma"),
        _result("normalization", abs(grid_integral(form) - 1.0), NORMALIZATION_TOL,
                "grid integral of W over a 6-sigma box"),
    ]


def check_triangle(params: DerivedParams, chirp: float, n: int, window_sigmas: float) -> list[CheckResult]:
    jsa = build_jsa(params, chirp)
    form = wigner_of_gaussian_jsa(jsa)
    ictbp = ictbp_closed_form(params, chirp)
    inv_tbp = 1.0 / tbp_from_moments(conditioned_spwf(form))
    k_jsa = jsa_schmidt(jsa, n, window_sigmas).K
    return [
        _result("ictbp_vs_conditioned_tbp", abs(ictbp - inv_tbp), TRIANGLE_CLOSED_TOL,
                f"ICTBP={ictbp:.9g}, 1/TBP_cond={inv_tbp:.9g}"),
        _result("ictbp_vs_k_jsa", abs(ictbp - k_jsa) / k_jsa, TRIANGLE_SVD_RTOL,
                f"ICTBP={ictbp:.9g}, K_JSA={k_jsa:.9g}"),
    ]


def run_checks(config: ProcessConfig, n: int = 256, window_sigmas: float = 4.0,
               fault_injection: bool = False) -> list[CheckResult]:
    params = derive_params(config)
    chirp = config.chirp
    jsa = build_jsa(params, chirp)
    form = wigner_of_gaussian_jsa(jsa)
    results = [check_wigner_paths(params, chirp, fault_injection)]
    results += check_oracle(params, chirp, fault_injection=fault_injection)
    results += check_marginals(jsa, form, n)
    results += check_triangle(params, chirp, n, window_sigmas)
    return results
