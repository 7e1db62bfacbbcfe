"""Chronocyclic Wigner functions of Gaussian photon pairs.

A real Gaussian over z = (nu_s, nu_i, tau_s, tau_i), or any ordered subset,
is stored as ``W(z) = exp(logN - z.M.z + b.z)``. The Wigner transform used
throughout is

    W(nu, tau) = (2 pi)^-2 \\int d^2x exp(i x.tau) f(nu - x/2) f*(nu + x/2),

whose time marginal is (2 pi)^2 |f~(tau)|^2 with ``f~`` as in :mod:`pdcw.jsa`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegenerateGroupVelocity, QuadratureNotConverged, SingularBlock
from .grid import Axis, Grid2D
from .jsa import ComplexGaussian2D, eval_jsa
from .model import EPS_DEGENERACY, DerivedParams

COORDS = ("nu_s", "nu_i", "tau_s", "tau_i")
UNITS = {"nu_s": "rad/fs", "nu_i": "rad/fs", "tau_s": "fs", "tau_i": "fs"}
MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class GaussianForm4D:
    """``exp(logN - z.M.z + b.z)`` over the labelled coordinates ``coords``.

    Despite the name the same type carries the 2-D single-photon forms.
    """

    M: np.ndarray
    b: np.ndarray
    logN: float
    coords: tuple[str, ...] = COORDS

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        b = np.array(self.b, dtype=float)
        dim = len(self.coords)
        if M.shape != (dim, dim) or b.shape != (dim,):
            raise ValueError(f"M must be {dim}x{dim} and b length {dim} for coords {self.coords}")
        M = 0.5 * (M + M.T)
        M.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "logN", float(self.logN))
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, label: str) -> int:
        return self.coords.index(label)

    def log_value(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        quad = np.einsum("...i,ij,...j->...", z, self.M, z)
        return self.logN - quad + z @ self.b

    def __call__(self, z) -> np.ndarray:
        """Evaluate at points ``z`` of shape ``(..., dim)``."""
        return np.exp(self.log_value(z))

    def log_integral(self) -> float:
        Minv = _inverse(self.M)
        _, logdet = np.linalg.slogdet(self.M)
        return (self.logN + 0.5 * self.dim * math.log(math.pi) - 0.5 * logdet
                + 0.25 * float(self.b @ Minv @ self.b))

    def normalized(self) -> "GaussianForm4D":
        return normalize(self)

    def to_dict(self) -> dict:
        return {
            "coords": list(self.coords),
            "M": [float(x) for x in self.M.ravel()],
            "b": [float(x) for x in self.b],
            "logN": float(self.logN),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Mapping) -> "GaussianForm4D":
        coords = tuple(data["coords"])
        dim = len(coords)
        return cls(np.reshape(data["M"], (dim, dim)), data["b"], data["logN"], coords)


def _scaling(M: np.ndarray) -> np.ndarray:
    diag = np.diag(M)
    if np.any(~np.isfinite(diag)) or np.any(diag <= 0):
        raise SingularBlock("quadratic form is not positive definite")
    return 1.0 / np.sqrt(diag)


def _check_block(M: np.ndarray) -> np.ndarray:
    """Jacobi-scaled copy of ``M`` after a positive-definiteness and condition check.

    The condition number is taken on the unit-diagonal rescaling so that it
    does not depend on the mix of rad/fs and fs units.
    """
    s = _scaling(M)
    scaled = M * np.outer(s, s)
    eig = np.linalg.eigvalsh(scaled)
    if eig[0] <= 0 or eig[-1] / eig[0] > MAX_CONDITION:
        cond = np.inf if eig[0] <= 0 else eig[-1] / eig[0]
        raise SingularBlock(f"block condition number {cond:.3e} exceeds {MAX_CONDITION:g}")
    return scaled


def _inverse(M: np.ndarray) -> np.ndarray:
    s = _scaling(M)
    scaled = _check_block(M)
    inv = np.linalg.inv(scaled) * np.outer(s, s)
    return 0.5 * (inv + inv.T)


def normalize(form: GaussianForm4D) -> GaussianForm4D:
    """Same shape with unit integral: logN = log(det(M)^1/2 / pi^(dim/2)) - b.M^-1.b / 4."""
    _check_block(form.M)
    _, logdet = np.linalg.slogdet(form.M)
    Minv = _inverse(form.M)
    logN = 0.5 * logdet - 0.5 * form.dim * math.log(math.pi) - 0.25 * float(form.b @ Minv @ form.b)
    return GaussianForm4D(form.M, form.b, logN, form.coords)


def moments(form: GaussianForm4D) -> tuple[np.ndarray, np.ndarray]:
    """Mean ``M^-1 b / 2`` and covariance ``M^-1 / 2``."""
    Minv = _inverse(form.M)
    return 0.5 * Minv @ form.b, 0.5 * Minv


_SWAP_TIME = np.diag([1.0, 1.0, -1.0, -1.0])


def analytic_wigner(params: DerivedParams, chirp: float = 0.0, *,
                    normalize_form: bool = True, fault_injection: bool = False) -> GaussianForm4D:
    """Closed-form 4-D Wigner function of the Gaussian PDC state.

    The exponent is transcribed term by term in time variables conjugate to
    absolute frequency. Offsets nu = omega0 - omega run opposite to omega,
    so every term odd in tau changes sign when expressed in the
    nu-conjugate times used by the rest of the package.

    With ``normalize_form=False`` the prefactor corresponds to a unit
    coupling constant. ``fault_injection`` scales the (tau_s - tau_i)^2
    coefficient by 1.01; it exists only to exercise the validation harness.
    """
    n_ps, n_pi, n_si = params.n_ps, params.n_pi, params.n_si
    if abs(n_si) < EPS_DEGENERACY:
        raise DegenerateGroupVelocity(f"|n_si| = {abs(n_si):.3e} < {EPS_DEGENERACY:g}")
    sigma, gamma, Lc, a = params.sigma, params.gamma, params.L_over_c, chirp

    u = np.array([1.0, 1.0])  # nu_s + nu_i
    w = np.array([n_ps, n_pi])  # n_ps nu_s + n_pi nu_i
    p = np.array([1.0, -1.0])  # tau_s - tau_i
    q = np.array([n_pi, -n_ps])  # n_pi tau_s - n_ps tau_i

    M = np.zeros((4, 4))
    M[:2, :2] = ((1.0 / sigma**2 + 4.0 * a**2 * sigma**2) * np.outer(u, u)
                 + 0.5 * gamma * Lc**2 * np.outer(w, w))
    time_diff = 2.0 / (gamma * Lc**2 * n_si**2)
    if fault_injection:
        time_diff *= 1.01
    M[2:, 2:] = time_diff * np.outer(p, p) + (sigma**2 / n_si**2) * np.outer(q, q)
    # +(4 a sigma^2 / n_si)(u.nu)(q.tau) in the exponent is -2 nu.M_nt.tau
    M[:2, 2:] = -(2.0 * a * sigma**2 / n_si) * np.outer(u, q)
    M[2:, :2] = M[:2, 2:].T
    b = np.zeros(4)
    b[2:] = (2.0 / (gamma * Lc * n_si)) * p
    logN = (0.5 * math.log(2.0 / gamma) + math.log(sigma / (math.pi * Lc * abs(n_si)))
            - 0.5 / gamma)

    form = GaussianForm4D(_SWAP_TIME @ M @ _SWAP_TIME, _SWAP_TIME @ b, logN)
    return normalize(form) if normalize_form else form


def wigner_of_gaussian_jsa(jsa: ComplexGaussian2D, *, normalize_form: bool = True) -> GaussianForm4D:
    """Exact Wigner transform of ``exp(-v.(A + iC).v + i d.v)``.

    Completing the square in x gives

        W = exp(-2 nu.A.nu - (k.A^-1.k)/2) / (2 pi sqrt(det A)),
        k = tau + 2 C nu - d,

    a real Gaussian in (nu, tau).
    """
    A, C, d = jsa.A, jsa.C, jsa.d
    Ainv = np.linalg.inv(A)
    Ainv = 0.5 * (Ainv + Ainv.T)
    CA = C @ Ainv
    M = np.zeros((4, 4))
    M[:2, :2] = 2.0 * A + 2.0 * CA @ C
    M[:2, 2:] = CA
    M[2:, :2] = CA.T
    M[2:, 2:] = 0.5 * Ainv
    b = np.concatenate([2.0 * CA @ d, Ainv @ d])
    logN = -math.log(2.0 * math.pi) - 0.5 * math.log(np.linalg.det(A)) - 0.5 * float(d @ Ainv @ d)
    form = GaussianForm4D(M, b, logN)
    return normalize(form) if normalize_form else form


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor trapezoid rule over the Wigner-transform offsets.

    ``half_range_sigmas`` is measured in standard deviations of the
    Gaussian envelope |f(nu - x/2) f(nu + x/2)| along each offset axis.
    """

    half_range_sigmas: float = 8.0
    nodes: int = 256
    rtol: float = 1e-6

    def __post_init__(self):
        if self.half_range_sigmas < 6.0:
            raise ValueError("half_range_sigmas must be at least 6")
        if self.nodes < 256:
            raise ValueError("at least 256 nodes per axis are required")


@dataclass(frozen=True)
class OracleResult:
    value: float
    imag: float
    refined_value: float

    @property
    def relative_change(self) -> float:
        return abs(self.refined_value - self.value) / abs(self.refined_value)


def _wigner_quadrature(jsa, nu, tau, half_range, nodes) -> complex:
    x1 = np.linspace(-half_range[0], half_range[0], nodes)
    x2 = np.linspace(-half_range[1], half_range[1], nodes)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    integrand = (np.exp(1j * (X1 * tau[0] + X2 * tau[1]))
                 * eval_jsa(jsa, nu[0] - 0.5 * X1, nu[1] - 0.5 * X2)
                 * np.conj(eval_jsa(jsa, nu[0] + 0.5 * X1, nu[1] + 0.5 * X2)))
    w1 = np.full(nodes, x1[1] - x1[0])
    w2 = np.full(nodes, x2[1] - x2[0])
    w1[[0, -1]] *= 0.5
    w2[[0, -1]] *= 0.5
    return complex(w1 @ integrand @ w2) / (2.0 * np.pi) ** 2


def numeric_wigner_oracle(jsa: ComplexGaussian2D, nu_s: float, nu_i: float, tau_s: float, tau_i: float,
                          quad: QuadratureSpec = QuadratureSpec()) -> OracleResult:
    """Brute-force Wigner transform of the pure state built from ``jsa``.

    Evaluates the double integral directly from JSA samples; the closed form
    is not used. The rule is re-run with twice the nodes and the result
    rejected if the two disagree by more than ``quad.rtol``.
    """
    # |f(nu - x/2) f(nu + x/2)| ~ exp(-x.A.x / 2): covariance A^-1 in x
    std = np.sqrt(np.diag(np.linalg.inv(jsa.A)))
    half_range = quad.half_range_sigmas * std
    nu = (float(nu_s), float(nu_i))
    tau = (float(tau_s), float(tau_i))
    coarse = _wigner_quadrature(jsa, nu, tau, half_range, quad.nodes)
    fine = _wigner_quadrature(jsa, nu, tau, half_range, 2 * quad.nodes)
    result = OracleResult(coarse.real, coarse.imag, fine.real)
    if not result.relative_change <= quad.rtol:
        raise QuadratureNotConverged(
            f"node doubling changed W by {result.relative_change:.3e} (> {quad.rtol:g})"
        )
    return result


def _indices(form: GaussianForm4D, labels: Iterable) -> list[int]:
    out = []
    for lab in labels:
        out.append(form.index(lab) if isinstance(lab, str) else int(lab))
    if len(set(out)) != len(out):
        raise ValueError("duplicate coordinates")
    return out


def marginalize(form: GaussianForm4D, drop: Sequence) -> GaussianForm4D:
    """Integrate out the coordinates in ``drop`` (labels or indices).

    Schur complement: M' = M_kk - M_kd M_dd^-1 M_dk, b' = b_k - M_kd M_dd^-1 b_d.
    """
    d_idx = _indices(form, drop)
    if not d_idx or len(d_idx) >= form.dim:
        raise ValueError("drop must be a non-empty proper subset of the coordinates")
    k_idx = [i for i in range(form.dim) if i not in d_idx]
    M, b = form.M, form.b
    Mkk, Mkd, Mdd = M[np.ix_(k_idx, k_idx)], M[np.ix_(k_idx, d_idx)], M[np.ix_(d_idx, d_idx)]
    Mdd_inv = _inverse(Mdd)
    G = Mkd @ Mdd_inv
    M_new = Mkk - G @ Mkd.T
    b_new = b[k_idx] - G @ b[d_idx]
    _, logdet = np.linalg.slogdet(Mdd)
    logN = (form.logN + 0.5 * len(d_idx) * math.log(math.pi) - 0.5 * logdet
            + 0.25 * float(b[d_idx] @ Mdd_inv @ b[d_idx]))
    out = GaussianForm4D(M_new, b_new, logN, tuple(form.coords[i] for i in k_idx))
    return normalize(out)


def condition(form: GaussianForm4D, fix: Mapping, *, normalize_form: bool = True) -> GaussianForm4D:
    """Slice the form at fixed coordinate values, e.g. ``{"nu_i": 0.0, "tau_i": 0.0}``.

    The quadratic part of the result is ``M_kk`` whatever the fixed values, so
    the conditioned covariance does not depend on where the slice is taken.
    """
    d_idx = _indices(form, fix.keys())
    if not d_idx or len(d_idx) >= form.dim:
        raise ValueError("fix must name a non-empty proper subset of the coordinates")
    values = np.array([float(v) for v in fix.values()])
    k_idx = [i for i in range(form.dim) if i not in d_idx]
    M, b = form.M, form.b
    Mkk, Mkd, Mdd = M[np.ix_(k_idx, k_idx)], M[np.ix_(k_idx, d_idx)], M[np.ix_(d_idx, d_idx)]
    b_new = b[k_idx] - 2.0 * Mkd @ values
    logN = form.logN - float(values @ Mdd @ values) + float(b[d_idx] @ values)
    out = GaussianForm4D(Mkk, b_new, logN, tuple(form.coords[i] for i in k_idx))
    return normalize(out) if normalize_form else out


def sample_form(form: GaussianForm4D, half_widths=None, n: int = 256, window_sigmas: float = 4.0) -> Grid2D:
    """Sample a 2-D form on a grid centred on its mean."""
    if form.dim != 2:
        raise ValueError("sample_form needs a 2-D form")
    mean, cov = moments(form)
    if half_widths is None:
        half_widths = window_sigmas * np.sqrt(np.diag(cov))
    axes = [Axis(mean[k] - half_widths[k], mean[k] + half_widths[k], n,
                 form.coords[k], UNITS.get(form.coords[k], "")) for k in range(2)]
    z1, z2 = np.meshgrid(axes[0].values(), axes[1].values(), indexing="ij")
    return Grid2D(axes[0], axes[1], form(np.stack([z1, z2], axis=-1)))
