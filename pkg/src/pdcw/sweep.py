"""Pump-bandwidth sweeps of ICTBP and cooperativity."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import TextIO

import numpy as np

from .entanglement import (ictbp_closed_form, jsa_schmidt, jsi_cooperativity, tbp_from_moments,
                           unconditioned_spwf)
from .grid import FLOAT_FORMAT
from .jsa import DEFAULT_GRID, DEFAULT_WINDOW_SIGMAS, build_jsa
from .model import ProcessConfig, derive_params, sigma_from_fwhm
from .wigner import wigner_of_gaussian_jsa

log = logging.getLogger(__name__)

MIN_SUCCESS_FRACTION = 0.9


@dataclass(frozen=True)
class SweepRow:
    pump_fwhm_nm: float
    sigma: float
    ictbp: float
    k_jsa: float
    k_jsi: float
    tbp_unconditioned: float

    @property
    def ok(self) -> bool:
        return all(math.isfinite(x) for x in astuple(self))


SWEEP_COLUMNS = tuple(f.name for f in fields(SweepRow))


def sweep_point(config: ProcessConfig, pump_fwhm_nm: float, chirp: float | None = None,
                n: int = DEFAULT_GRID, window_sigmas: float = DEFAULT_WINDOW_SIGMAS) -> SweepRow:
    """Evaluate one pump bandwidth; ``chirp=None`` keeps the config's chirp."""
    chirp = config.chirp if chirp is None else chirp
    params = derive_params(config.replace(pump_fwhm=pump_fwhm_nm))
    jsa = build_jsa(params, chirp)
    form = wigner_of_gaussian_jsa(jsa)
    return SweepRow(
        pump_fwhm_nm=float(pump_fwhm_nm),
        sigma=params.sigma,
        ictbp=ictbp_closed_form(params, chirp),
        k_jsa=jsa_schmidt(jsa, n, window_sigmas).K,
        k_jsi=jsi_cooperativity(jsa, n, window_sigmas),
        tbp_unconditioned=tbp_from_moments(unconditioned_spwf(form)),
    )


def _failed_row(config: ProcessConfig, pump_fwhm_nm: float) -> SweepRow:
    try:
        sigma = sigma_from_fwhm(pump_fwhm_nm, config.pump_central_wavelength)
    except (ValueError, ZeroDivisionError):
        sigma = math.nan
    nan = math.nan
    return SweepRow(float(pump_fwhm_nm), sigma, nan, nan, nan, nan)


def sweep_fwhm_values(fwhm_from: float, fwhm_to: float, steps: int) -> np.ndarray:
    """Logarithmically spaced pump FWHM values, inclusive of both ends."""
    if not (fwhm_from > 0 and fwhm_to > fwhm_from):
        raise ValueError(f"invalid sweep range: from={fwhm_from!r} to={fwhm_to!r}")
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    return np.geomspace(fwhm_from, fwhm_to, steps)


def run_sweep(config: ProcessConfig, fwhm_from: float, fwhm_to: float, steps: int,
              chirp: float | None = None, n: int = DEFAULT_GRID,
              window_sigmas: float = DEFAULT_WINDOW_SIGMAS, jobs: int = 1) -> list[SweepRow]:
    """Sweep the pump FWHM; rows come back in ascending FWHM whatever ``jobs`` is.

    A point that raises is logged and returned as a row of NaNs.
    """
    values = sweep_fwhm_values(fwhm_from, fwhm_to, steps)

    def one(fwhm):
        try:
            return sweep_point(config, float(fwhm), chirp, n, window_sigmas)
        except Exception as exc:  # recorded per point, sweep continues
            log.error("sweep point %.6g nm failed: %s: %s", fwhm, type(exc).__name__, exc)
            return _failed_row(config, float(fwhm))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, values))
    return [one(v) for v in values]


def success_fraction(rows: list[SweepRow]) -> float:
    return sum(r.ok for r in rows) / len(rows) if rows else 0.0


def write_sweep_csv(rows: list[SweepRow], target: str | Path | TextIO) -> None:
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="\n", encoding="ascii") as fh:
            write_sweep_csv(rows, fh)
        return
    target.write(",".join(SWEEP_COLUMNS) + "\n")
    for row in rows:
        target.write(",".join(FLOAT_FORMAT % x for x in astuple(row)) + "\n")
