"""Command-line interface: ``pdcw <subcommand> --config FILE [options]``.

Exit codes: 0 success, 2 configuration or usage error, 3 I/O failure,
4 sweep with fewer than 90 % successful points, 5 failed validation.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .checks import run_checks
from .entanglement import (conditioned_spwf, e2_half_widths, ictbp_closed_form, jsa_schmidt,
                           jsi_cooperativity, tbp_from_moments, unconditioned_spwf)
from .errors import PdcwError
from .grid import Grid2D
from .jsa import auto_window, build_jsa, jsi_correlation, sample_jsa, sample_jsi, sample_jti_fft
from .manifest import RunManifest, atomic_write_text, manifest_path
from .model import (ProcessConfig, decorrelation_pump_fwhm, derive_params, load_config,
                    validate_config)
from .sweep import MIN_SUCCESS_FRACTION, run_sweep, success_fraction, write_sweep_csv
from .wigner import moments, sample_form, wigner_of_gaussian_jsa

log = logging.getLogger("pdcw")

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_SWEEP, EXIT_VALIDATE = 0, 2, 3, 4, 5
FAR_CONDITIONING_SIGMAS = 6.0


class ConfigError(Exception):
    pass


def _global_options(defaults: bool) -> argparse.ArgumentParser:
    # parsed both before and after the subcommand; only the top level sets defaults
    def d(value):
        return value if defaults else argparse.SUPPRESS

    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", default=d(None), help="TOML process configuration")
    p.add_argument("--grid", metavar="N", type=int, default=d(256), help="samples per axis (default 256)")
    p.add_argument("--window-sigmas", metavar="S", type=float, default=d(4.0),
                   help="window half-width in marginal standard deviations (default 4)")
    p.add_argument("--out", metavar="PATH", default=d(None), help="output file")
    p.add_argument("--jobs", metavar="N", type=int, default=d(1), help="parallel sweep workers")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdcw", parents=[_global_options(True)],
                                     description="Chronocyclic Wigner analysis of pulsed PDC.")
    parser.add_argument("--version", action="version", version=f"pdcw {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_options(False)]

    for name, help_ in (("jsa", "complex joint spectral amplitude grid"),
                        ("jsi", "joint spectral intensity grid"),
                        ("jti", "joint temporal intensity grid (FFT)")):
        sub.add_parser(name, parents=common, help=help_)

    sp = sub.add_parser("spwf", parents=common, help="single-photon Wigner function grid")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--conditioned", nargs=2, type=float, metavar=("NU", "TAU"),
                      help="partner frequency offset (rad/fs) and arrival time (fs)")
    mode.add_argument("--unconditioned", action="store_true")
    sp.add_argument("--photon", choices=("signal", "idler"), default="signal")
    sp.add_argument("--wigner-json", metavar="PATH", help="also write the 4-D form as JSON")

    sw = sub.add_parser("sweep", parents=common, help="pump-bandwidth sweep of ICTBP and K")
    sw.add_argument("--param", choices=("pump_fwhm_nm",), default="pump_fwhm_nm")
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--steps", type=int, required=True)
    sw.add_argument("--chirp-fs2", type=float, default=None, help="override the config chirp")

    sub.add_parser("ictbp", parents=common, help="closed-form inverse conditioned TBP")
    sub.add_parser("schmidt", parents=common, help="Schmidt spectrum and entanglement summary")
    va = sub.add_parser("validate", parents=common, help="run the cross-check suite")
    va.add_argument("--debug-corrupt-wigner", action="store_true", help=argparse.SUPPRESS)
    return parser


def _load(args) -> ProcessConfig:
    if not args.config:
        raise ConfigError("--config is required")
    try:
        config = load_config(args.config)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {args.config}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    for diag in validate_config(config):
        if diag.level == "warning":
            log.warning("%s: %s", diag.code, diag.message)
    derive_params(config)  # raises on hard errors
    return config


def _require_out(args) -> Path:
    if not args.out:
        raise ConfigError(f"{args.command} needs --out PATH")
    return Path(args.out)


def _manifest(args, config: ProcessConfig) -> RunManifest:
    grid = {"n": args.grid, "window_sigmas": args.window_sigmas}
    return RunManifest(command=" ".join(["pdcw", *args.argv]), config=config.to_mapping(), grid=grid)


def _write_outputs(manifest: RunManifest, files: dict[Path, str]) -> None:
    for path, text in files.items():
        atomic_write_text(path, text)
        manifest.add_output(path)
    first = next(iter(files))
    manifest.write(manifest_path(first))


def _emit(summary: dict) -> None:
    print(json.dumps(summary, indent=2, sort_keys=True))


def cmd_grid(args, config: ProcessConfig) -> int:
    out = _require_out(args)
    params = derive_params(config)
    jsa = build_jsa(params, config.chirp)
    window = auto_window(jsa, args.window_sigmas)
    if args.command == "jsa":
        grid = sample_jsa(jsa, window, args.grid)
        intensity = Grid2D(grid.axis1, grid.axis2, np.abs(grid.values) ** 2)
    elif args.command == "jsi":
        grid = intensity = sample_jsi(jsa, window, args.grid)
    else:
        grid = intensity = sample_jti_fft(jsa, window, args.grid)
    mean, _ = intensity.moments()
    summary = {
        "command": args.command,
        "n": args.grid,
        "peak": intensity.peak() if args.command != "jsa" else grid.peak(),
        "pearson": intensity.pearson(),
        "mean": mean.tolist(),
        "axes": [grid.axis1.label, grid.axis2.label],
    }
    if args.command in ("jsa", "jsi"):
        summary["pearson_analytic"] = jsi_correlation(jsa)
    manifest = _manifest(args, config)
    _write_outputs(manifest, {out: grid.to_csv_string()})
    _emit(summary)
    return EXIT_OK


def cmd_spwf(args, config: ProcessConfig) -> int:
    out = _require_out(args)
    params = derive_params(config)
    form = wigner_of_gaussian_jsa(build_jsa(params, config.chirp))
    other = "idler" if args.photon == "signal" else "signal"
    uncond = unconditioned_spwf(form, args.photon)
    nu0, tau0 = args.conditioned if args.conditioned else (0.0, 0.0)
    cond = conditioned_spwf(form, args.photon, nu0, tau0)
    if args.conditioned:
        partner_mean, partner_cov = moments(unconditioned_spwf(form, other))
        reach = np.abs(np.array([nu0, tau0]) - partner_mean) / np.sqrt(np.diag(partner_cov))
        if np.any(reach > FAR_CONDITIONING_SIGMAS):
            log.warning("conditioning point lies %.1f standard deviations outside the %s envelope; "
                        "the conditioned shape is unaffected but its weight is negligible",
                        float(reach.max()), other)
    shown = cond if args.conditioned else uncond
    grid = sample_form(shown, n=args.grid, window_sigmas=args.window_sigmas)
    summary = {
        "command": "spwf",
        "photon": args.photon,
        "mode": "conditioned" if args.conditioned else "unconditioned",
        "conditioning_point": [nu0, tau0] if args.conditioned else None,
        "tbp": tbp_from_moments(shown),
        "tbp_conditioned": tbp_from_moments(cond),
        "tbp_unconditioned": tbp_from_moments(uncond),
        "e2_half_widths_conditioned": list(e2_half_widths(cond)),
        "e2_half_widths_unconditioned": list(e2_half_widths(uncond)),
        "pure_reference_e2_half_widths": _pure_reference_widths(uncond),
    }
    files = {out: grid.to_csv_string()}
    if args.wigner_json:
        files[Path(args.wigner_json)] = form.to_json() + "\n"
    _write_outputs(_manifest(args, config), files)
    _emit(summary)
    return EXIT_OK


def _pure_reference_widths(spwf) -> list[float]:
    # pulse with the same spectral width and TBP exactly 1
    _, cov = moments(spwf)
    s_nu = math.sqrt(cov[0, 0])
    return [2.0 * s_nu, 1.0 / s_nu]


def cmd_sweep(args, config: ProcessConfig) -> int:
    out = _require_out(args)
    if args.steps < 2 or not (0 < args.start < args.stop):
        raise ConfigError(f"invalid sweep range: --from {args.start} --to {args.stop} --steps {args.steps}")
    rows = run_sweep(config, args.start, args.stop, args.steps, args.chirp_fs2, args.grid,
                     args.window_sigmas, max(1, args.jobs))
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    manifest = _manifest(args, config)
    manifest.grid.update({"param": args.param, "from": args.start, "to": args.stop, "steps": args.steps,
                          "chirp_fs2": config.chirp if args.chirp_fs2 is None else args.chirp_fs2})
    _write_outputs(manifest, {out: buf.getvalue()})
    frac = success_fraction(rows)
    good = [r for r in rows if r.ok]
    summary = {"command": "sweep", "points": len(rows), "succeeded": len(good)}
    if good:
        best = min(good, key=lambda r: r.ictbp)
        summary.update({"min_ictbp": best.ictbp, "argmin_pump_fwhm_nm": best.pump_fwhm_nm,
                        "max_rel_dev_ictbp_k_jsa": max(abs(r.ictbp - r.k_jsa) / r.k_jsa for r in good)})
    _emit(summary)
    return EXIT_OK if frac >= MIN_SUCCESS_FRACTION else EXIT_SWEEP


def entanglement_summary(config: ProcessConfig, n: int = 256, window_sigmas: float = 4.0) -> dict:
    params = derive_params(config)
    jsa = build_jsa(params, config.chirp)
    form = wigner_of_gaussian_jsa(jsa)
    spectrum = jsa_schmidt(jsa, n, window_sigmas)
    return {
        "k_jsa": spectrum.K,
        "k_jsi": jsi_cooperativity(jsa, n, window_sigmas),
        "ictbp": ictbp_closed_form(params, config.chirp),
        "tbp_conditioned": tbp_from_moments(conditioned_spwf(form)),
        "tbp_unconditioned": tbp_from_moments(unconditioned_spwf(form)),
        "schmidt_lambdas": [float(x) for x in spectrum.lambdas[:16]],
        "grid": {"n": spectrum.grid_meta["n"][0], "window": spectrum.grid_meta["window"]},
    }


def cmd_schmidt(args, config: ProcessConfig) -> int:
    summary = entanglement_summary(config, args.grid, args.window_sigmas)
    if args.out:
        _write_outputs(_manifest(args, config), {Path(args.out): json.dumps(summary, indent=2) + "\n"})
    _emit(summary)
    return EXIT_OK


def cmd_ictbp(args, config: ProcessConfig) -> int:
    params = derive_params(config)
    form = wigner_of_gaussian_jsa(build_jsa(params, config.chirp))
    summary = {
        "ictbp": ictbp_closed_form(params, config.chirp),
        "tbp_conditioned": tbp_from_moments(conditioned_spwf(form)),
        "pump_fwhm_nm": config.pump_fwhm,
        "sigma": params.sigma,
        "chirp_fs2": config.chirp,
    }
    try:
        summary["decorrelation_pump_fwhm_nm"] = decorrelation_pump_fwhm(config)
    except PdcwError:
        summary["decorrelation_pump_fwhm_nm"] = None
    if args.out:
        _write_outputs(_manifest(args, config), {Path(args.out): json.dumps(summary, indent=2) + "\n"})
    _emit(summary)
    return EXIT_OK


def cmd_validate(args, config: ProcessConfig) -> int:
    results = run_checks(config, args.grid, args.window_sigmas, fault_injection=args.debug_corrupt_wigner)
    report = {"passed": all(r.passed for r in results), "checks": [r.to_dict() for r in results]}
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        _write_outputs(_manifest(args, config), {Path(args.out): text})
    sys.stdout.write(text)
    for r in results:
        if not r.passed:
            log.error("check %s failed: %.3e > %.3e", r.name, r.measured, r.tolerance)
    return EXIT_OK if report["passed"] else EXIT_VALIDATE


COMMANDS = {
    "jsa": cmd_grid, "jsi": cmd_grid, "jti": cmd_grid,
    "spwf": cmd_spwf, "sweep": cmd_sweep, "ictbp": cmd_ictbp,
    "schmidt": cmd_schmidt, "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("PDCW_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="pdcw: %(levelname)s: %(message)s")
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        config = _load(args)
        return COMMANDS[args.command](args, config)
    except (ConfigError, PdcwError, ValueError) as exc:
        name = type(exc).__name__
        print(f"pdcw: error: {name}: {exc}" if name != "ConfigError" else f"pdcw: error: {exc}",
              file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"pdcw: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
