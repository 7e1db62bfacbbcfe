"""Physical configuration of a pulsed PDC source and its internal-unit parameters.

Internal units: angular frequency in rad/fs, time in fs, length in um.
Laboratory inputs (nm, mm, fs^2) are converted once, in :func:`derive_params`.
"""
from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import DegenerateGroupVelocity, InvalidConfig

#: speed of light in um/fs
C_UM_PER_FS = 0.299792458

#: smallest admissible |n_s - n_i|
EPS_DEGENERACY = 1e-6

#: relative tolerance on 1/lp = 1/ls + 1/li
ENERGY_CONSERVATION_RTOL = 1e-9

# intensity FWHM of exp(-w^2/2s^2) amplitude is 2 s sqrt(ln 2)
_FWHM_PER_SIGMA = 2.0 * math.sqrt(math.log(2.0))

# config-file key -> ProcessConfig field
CONFIG_KEYS = {
    "pump_central_wavelength_nm": "pump_central_wavelength",
    "signal_central_wavelength_nm": "signal_central_wavelength",
    "idler_central_wavelength_nm": "idler_central_wavelength",
    "pump_fwhm_nm": "pump_fwhm",
    "chirp_fs2": "chirp",
    "crystal_length_mm": "crystal_length",
    "gamma": "gamma",
    "n_g_pump": "group_index_pump",
    "n_g_signal": "group_index_signal",
    "n_g_idler": "group_index_idler",
}


@dataclass(frozen=True)
class ProcessConfig:
    """Laboratory-unit description of the pump and the nonlinear waveguide.

    Wavelengths and the pump intensity FWHM are in nm, the crystal length in
    mm and the pump chirp in fs^2. Group indices are taken as given; no
    dispersion model is applied.
    """

    pump_central_wavelength: float
    signal_central_wavelength: float
    idler_central_wavelength: float
    pump_fwhm: float
    crystal_length: float
    group_index_pump: float
    group_index_signal: float
    group_index_idler: float
    chirp: float = 0.0
    gamma: float = 1.0

    def replace(self, **changes) -> "ProcessConfig":
        data = asdict(self)
        data.update(changes)
        return ProcessConfig(**data)

    def to_mapping(self) -> dict[str, float]:
        """Config-file representation (file keys, laboratory units)."""
        return {key: float(getattr(self, name)) for key, name in CONFIG_KEYS.items()}

    @classmethod
    def from_mapping(cls, data: Mapping[str, object]) -> "ProcessConfig":
        unknown = sorted(set(data) - set(CONFIG_KEYS))
        if unknown:
            raise InvalidConfig(f"unknown config keys: {', '.join(unknown)}")
        kwargs = {}
        for key, name in CONFIG_KEYS.items():
            if key not in data:
                if name in ("chirp", "gamma"):
                    continue
                raise InvalidConfig(f"missing config key: {key}")
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidConfig(f"config key {key} must be a number, got {value!r}")
            kwargs[name] = float(value)
        return cls(**kwargs)


@dataclass(frozen=True)
class DerivedParams:
    """Internal-unit parameters entering the JSA exponent.

    ``n_ij`` follows the convention n_ij = n_i - n_j of group indices, so
    ``n_ps - n_pi == -n_si`` holds identically.
    """

    sigma: float  # rad/fs, pump amplitude width
    n_ps: float
    n_pi: float
    n_si: float
    L_over_c: float  # fs
    gamma: float
    pump_central_wavelength_um: float

    @property
    def phasematching_coefficient(self) -> float:
        """gamma L^2 / (4 c^2), in fs^2."""
        return 0.25 * self.gamma * self.L_over_c**2

    def with_sigma(self, sigma: float) -> "DerivedParams":
        if not sigma > 0:
            raise InvalidConfig(f"sigma must be positive, got {sigma!r}")
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["sigma"] = float(sigma)
        return DerivedParams(**data)


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    code: str
    message: str


def sigma_from_fwhm(fwhm_nm: float, central_wavelength_nm: float) -> float:
    """Pump amplitude width in rad/fs from its intensity FWHM in nm."""
    lam = central_wavelength_nm * 1e-3
    delta_omega = 2.0 * math.pi * C_UM_PER_FS * (fwhm_nm * 1e-3) / lam**2
    return delta_omega / _FWHM_PER_SIGMA


def fwhm_from_sigma(sigma: float, central_wavelength_nm: float) -> float:
    """Inverse of :func:`sigma_from_fwhm`."""
    lam = central_wavelength_nm * 1e-3
    delta_omega = sigma * _FWHM_PER_SIGMA
    return delta_omega * lam**2 / (2.0 * math.pi * C_UM_PER_FS) * 1e3


def validate_config(config: ProcessConfig) -> list[Diagnostic]:
    """Check a configuration without raising.

    Returns an empty list for a usable config. Entries with level ``"error"``
    make :func:`derive_params` fail; ``"warning"`` entries are informational.
    """
    out: list[Diagnostic] = []
    positive = {
        "pump_central_wavelength": "pump_central_wavelength_nm",
        "signal_central_wavelength": "signal_central_wavelength_nm",
        "idler_central_wavelength": "idler_central_wavelength_nm",
        "pump_fwhm": "pump_fwhm_nm",
        "crystal_length": "crystal_length_mm",
        "gamma": "gamma",
    }
    for name, key in positive.items():
        value = getattr(config, name)
        if not (math.isfinite(value) and value > 0):
            out.append(Diagnostic("error", "InvalidConfig", f"{key} must be finite and > 0, got {value!r}"))
    for name in ("chirp", "group_index_pump", "group_index_signal", "group_index_idler"):
        value = getattr(config, name)
        if not math.isfinite(value):
            out.append(Diagnostic("error", "InvalidConfig", f"{name} must be finite, got {value!r}"))

    n_si = config.group_index_signal - config.group_index_idler
    if math.isfinite(n_si) and abs(n_si) < EPS_DEGENERACY:
        out.append(Diagnostic(
            "error", "DegenerateGroupVelocity",
            f"|n_g_signal - n_g_idler| = {abs(n_si):.3e} < {EPS_DEGENERACY:g}; "
            "first-order phase-mismatch model is not valid",
        ))

    lp, ls, li = (config.pump_central_wavelength, config.signal_central_wavelength,
                  config.idler_central_wavelength)
    if all(math.isfinite(x) and x > 0 for x in (lp, ls, li)):
        inv_p = 1.0 / lp
        mismatch = abs(inv_p - (1.0 / ls + 1.0 / li)) / inv_p
        if mismatch > ENERGY_CONSERVATION_RTOL:
            out.append(Diagnostic(
                "warning", "EnergyConservation",
                f"1/lambda_p differs from 1/lambda_s + 1/lambda_i by {mismatch:.3e} (relative)",
            ))
    return out


def derive_params(config: ProcessConfig) -> DerivedParams:
    """Convert a validated config to internal units.

    Raises
    ------
    InvalidConfig
        For non-positive or non-finite physical quantities.
    DegenerateGroupVelocity
        When ``|n_si| < EPS_DEGENERACY``.
    """
    for diag in validate_config(config):
        if diag.level != "error":
            continue
        if diag.code == "DegenerateGroupVelocity":
            raise DegenerateGroupVelocity(diag.message)
        raise InvalidConfig(diag.message)

    n_p, n_s, n_i = config.group_index_pump, config.group_index_signal, config.group_index_idler
    n_ps = n_p - n_s
    n_pi = n_p - n_i
    n_si = n_s - n_i
    params = DerivedParams(
        sigma=sigma_from_fwhm(config.pump_fwhm, config.pump_central_wavelength),
        n_ps=n_ps,
        n_pi=n_pi,
        n_si=n_si,
        L_over_c=config.crystal_length * 1e3 / C_UM_PER_FS,
        gamma=config.gamma,
        pump_central_wavelength_um=config.pump_central_wavelength * 1e-3,
    )
    assert abs(params.n_ps - params.n_pi + params.n_si) <= 1e-12 * max(abs(n_p), abs(n_s), abs(n_i), 1.0)
    return params


def decorrelation_sigma(params: DerivedParams) -> float:
    """Pump width at which the JSA factorizes for an unchirped pump.

    Solves 1/sigma^2 = -(gamma L^2 / 2c^2) n_ps n_pi. Requires the pump group
    index to lie strictly between those of signal and idler.
    """
    product = params.n_ps * params.n_pi
    if not product < 0:
        raise InvalidConfig("no decorrelation point: n_ps * n_pi must be negative")
    return 1.0 / math.sqrt(-2.0 * params.phasematching_coefficient * product)


def decorrelation_pump_fwhm(config: ProcessConfig) -> float:
    """Pump intensity FWHM in nm at which the unchirped JSA factorizes."""
    params = derive_params(config)
    return fwhm_from_sigma(decorrelation_sigma(params), config.pump_central_wavelength)


def load_config(path: str | Path) -> ProcessConfig:
    """Read a TOML config file with the keys listed in ``CONFIG_KEYS``."""
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise InvalidConfig(f"{path}: {exc}") from exc
    return ProcessConfig.from_mapping(data)


def dumps_config(config: ProcessConfig) -> str:
    """TOML text for a config; keys in canonical order."""
    return "".join(f"{key} = {value!r}\n" for key, value in config.to_mapping().items())


def shipped_config_path(name: str) -> Path:
    """Path of a config bundled with the package, e.g. ``"ktp_symmetric"``."""
    if not name.endswith(".toml"):
        name += ".toml"
    path = Path(str(resources.files("pdcw") / "configs" / name))
    if not path.is_file():
        raise FileNotFoundError(path)
    return path


def shipped_config(name: str) -> ProcessConfig:
    return load_config(shipped_config_path(name))
