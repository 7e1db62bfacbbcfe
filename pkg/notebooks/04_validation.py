# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
#   kernelspec:
#     display_name: Python 3
#     name: python3
# ---

# # Cross-checks
#
# `run_checks` compares the closed-form Wigner function against a direct
# quadrature of its defining integral, checks both marginals against the
# JSI and the FFT-computed JTI, and closes the ICTBP / K triangle. The same
# report is produced by `pdcw validate`.

# +
from pdcw import model
from pdcw.checks import run_checks
from pdcw.jsa import build_jsa
from pdcw.wigner import numeric_wigner_oracle, wigner_of_gaussian_jsa

cfg = model.shipped_config("ktp_chirped")
for r in run_checks(cfg):
    print(f"{'ok  ' if r.passed else 'FAIL'} {r.name:28s} {r.measured:.2e} <= {r.tolerance:.0e}")
# -

# A single oracle evaluation, next to the closed form at the same point.

# +
params = model.derive_params(cfg)
f = build_jsa(params, cfg.chirp)
form = wigner_of_gaussian_jsa(f, normalize_form=False)
z = (1e-3, -1e-3, f.d[0] + 100.0, f.d[1] - 50.0)
ref = numeric_wigner_oracle(f, *z)
print("quadrature:", ref.value, "imag", ref.imag)
print("closed form:", form(z))
# -

# A deliberately corrupted closed form is caught.

for r in run_checks(cfg, fault_injection=True):
    if not r.passed:
        print("caught:", r.name, f"{r.measured:.2e}")
