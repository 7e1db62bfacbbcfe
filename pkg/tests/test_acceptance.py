"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the report.
"""
import math
import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from pdcw import model
from pdcw.checks import check_marginals, check_oracle, check_wigner_paths
from pdcw.cli import main
from pdcw.entanglement import (conditioned_spwf, ictbp_closed_form, jsa_schmidt, jsi_cooperativity,
                               tbp_from_moments, unconditioned_spwf)
from pdcw.jsa import auto_window, build_jsa, sample_jsi
from pdcw.sweep import run_sweep
from pdcw.wigner import moments, wigner_of_gaussian_jsa

CONFIGS = ("ktp_symmetric", "ktp_narrow_pump", "ktp_chirped")
CHIRP = 3e5  # fs^2


def report(number, ok, detail):
    print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {number}: {detail}"


def test_criterion_1_consistency_triangle(symmetric_config):
    t0 = time.perf_counter()
    rows = run_sweep(symmetric_config.replace(chirp=0.0), 0.2, 10.0, 50, n=256)
    elapsed = time.perf_counter() - t0
    dev_k = max(abs(r.ictbp - r.k_jsa) / r.k_jsa for r in rows)
    dev_tbp = 0.0
    for r in rows:
        p = model.derive_params(symmetric_config.replace(pump_fwhm=r.pump_fwhm_nm))
        form = wigner_of_gaussian_jsa(build_jsa(p, 0.0))
        dev_tbp = max(dev_tbp, abs(r.ictbp - 1.0 / tbp_from_moments(conditioned_spwf(form))))
    ok = all(r.ok for r in rows) and dev_k <= 0.02 and dev_tbp <= 1e-9 and elapsed <= 60
    report(1, ok, f"50 points, max |ICTBP-K_JSA|/K_JSA = {dev_k:.2e} (<= 2e-2), "
                  f"max |ICTBP-1/TBP_cond| = {dev_tbp:.2e} (<= 1e-9), sweep {elapsed:.1f} s (<= 60 s)")


def test_criterion_2_decorrelated_point(symmetric_config):
    fwhm = model.decorrelation_pump_fwhm(symmetric_config)
    p = model.derive_params(symmetric_config.replace(pump_fwhm=fwhm, chirp=0.0))
    jsa = build_jsa(p, 0.0)
    ictbp = ictbp_closed_form(p, 0.0)
    k_jsa, k_jsi = jsa_schmidt(jsa).K, jsi_cooperativity(jsa)
    ok = abs(ictbp - 1) <= 1e-6 and abs(k_jsa - 1) <= 0.01 and abs(k_jsi - 1) <= 0.01
    report(2, ok, f"FWHM {fwhm:.9f} nm: ICTBP = {ictbp:.12f}, K_JSA = {k_jsa:.6f}, K_JSI = {k_jsi:.6f}")


def test_criterion_3_chirp_blindness(symmetric_config):
    fwhm = model.decorrelation_pump_fwhm(symmetric_config)
    p = model.derive_params(symmetric_config.replace(pump_fwhm=fwhm))
    plain, chirped = build_jsa(p, 0.0), build_jsa(p, CHIRP)
    k_jsi = jsi_cooperativity(chirped)
    k_jsa = jsa_schmidt(chirped).K
    ictbp = ictbp_closed_form(p, CHIRP)
    window = auto_window(plain)
    g0, g1 = sample_jsi(plain, window).values, sample_jsi(chirped, window).values
    jsi_dev = float(np.max(np.abs(g1 - g0) / g0))
    agree = abs(k_jsa - ictbp) / k_jsa
    ok = (abs(k_jsi - 1) <= 0.01 and agree <= 0.02 and min(k_jsa, ictbp) > 1.1 * k_jsi and jsi_dev <= 1e-12)
    report(3, ok, f"a = {CHIRP:g} fs^2: K_JSI = {k_jsi:.6f}, K_JSA = {k_jsa:.4f}, ICTBP = {ictbp:.4f} "
                  f"(rel diff {agree:.1e}), JSI grid deviation {jsi_dev:.1e}")


def test_criterion_4_minimum_shift(symmetric_config):
    p = model.derive_params(symmetric_config)

    def argmin(a):
        res = minimize_scalar(lambda x: ictbp_closed_form(p.with_sigma(math.exp(x)), a),
                              bracket=(math.log(p.sigma) - 1, math.log(p.sigma) + 1), tol=1e-12)
        return math.exp(res.x)

    s0, s1 = argmin(0.0), argmin(CHIRP)
    lam = p.pump_central_wavelength_um * 1e3
    report(4, s1 < s0, f"argmin sigma: a=0 {s0:.6e} rad/fs ({model.fwhm_from_sigma(s0, lam):.4f} nm), "
                       f"a={CHIRP:g} {s1:.6e} rad/fs ({model.fwhm_from_sigma(s1, lam):.4f} nm)")


def test_criterion_5_oracle_equivalence():
    worst = {"oracle_closed_form": 0.0, "oracle_transform": 0.0, "oracle_imaginary": 0.0}
    ok = True
    for name in CONFIGS:
        cfg = model.shipped_config(name)
        for r in check_oracle(model.derive_params(cfg), cfg.chirp, count=20):
            worst[r.name] = max(worst[r.name], r.measured)
            ok &= r.passed
    report(5, ok, f"20 points x {len(CONFIGS)} configs: closed form {worst['oracle_closed_form']:.1e}, "
                  f"transform {worst['oracle_transform']:.1e} (<= 1e-6), "
                  f"imaginary {worst['oracle_imaginary']:.1e} (<= 1e-9)")


def test_criterion_6_marginals():
    worst = {}
    ok = True
    for name in CONFIGS:
        cfg = model.shipped_config(name)
        jsa = build_jsa(model.derive_params(cfg), cfg.chirp)
        for r in check_marginals(jsa, wigner_of_gaussian_jsa(jsa), 256):
            worst[r.name] = max(worst.get(r.name, 0.0), r.measured)
            ok &= r.passed
    report(6, ok, f"frequency ratio spread {worst['frequency_marginal']:.1e} (<= 1e-9), "
                  f"time marginal vs FFT JTI {worst['time_marginal']:.1e} (<= 1e-4), "
                  f"|norm - 1| {worst['normalization']:.1e} (<= 1e-4)")


def test_criterion_7_property_suite(tmp_path, capsys):
    rng = np.random.default_rng(7)
    failures = []
    n_cases = 0
    for name in CONFIGS:
        base = model.shipped_config(name)
        for fwhm in rng.uniform(0.2, 10.0, 4):
            cfg = base.replace(pump_fwhm=float(fwhm))
            p = model.derive_params(cfg)
            jsa = build_jsa(p, cfg.chirp)
            spec = jsa_schmidt(jsa)
            if abs(np.sum(spec.lambdas**2) - 1) > 1e-10:
                failures.append(f"{name} {fwhm:.2f} nm: sum lambda^2")
            if spec.K < 1:
                failures.append(f"{name} {fwhm:.2f} nm: K < 1")
            form = wigner_of_gaussian_jsa(jsa)
            mean, cov = moments(form)
            u_cov = moments(unconditioned_spwf(form))[1]
            a = moments(conditioned_spwf(form, "signal", 0.0, 0.0))[1]
            for _ in range(3):
                nu, tau = rng.normal(mean[[1, 3]], 2 * np.sqrt(np.diag(cov)[[1, 3]]))
                b = moments(conditioned_spwf(form, "signal", nu, tau))[1]
                scale = np.sqrt(np.outer(np.diag(a), np.diag(a)))
                if np.max(np.abs(a - b) / scale) > 1e-12:
                    failures.append(f"{name} {fwhm:.2f} nm: conditioned covariance moves")
            if np.any(np.diag(a) > np.diag(u_cov) * (1 + 1e-12)):
                failures.append(f"{name} {fwhm:.2f} nm: conditioned variance exceeds unconditioned")
            n_cases += 1

    cfg_path = str(model.shipped_config_path("ktp_chirped"))
    runs = [
        ["jsa", "--grid", "64"], ["jti", "--grid", "64"],
        ["spwf", "--conditioned", "0", "0", "--grid", "64"],
        ["sweep", "--from", "0.5", "--to", "5", "--steps", "4", "--grid", "128"],
        ["schmidt"], ["ictbp"],
    ]
    for argv in runs:
        blobs = []
        for k in range(2):
            out = tmp_path / f"{argv[0]}_{k}.out"
            code = main([*argv, "--config", cfg_path, "--out", str(out)])
            stdout = capsys.readouterr().out
            blobs.append((code, out.read_bytes(), stdout))
        if blobs[0] != blobs[1] or blobs[0][0] != 0:
            failures.append(f"pdcw {argv[0]} output differs between runs")
    report(7, not failures, f"{n_cases} configurations, {len(runs)} CLI commands run twice"
                            + ("" if not failures else f": {'; '.join(failures)}"))


@pytest.mark.parametrize("name", CONFIGS)
def test_wigner_paths_shipped(name):
    # supports criterion 5: both constructions share one set of coefficients
    cfg = model.shipped_config(name)
    assert check_wigner_paths(model.derive_params(cfg), cfg.chirp).passed
