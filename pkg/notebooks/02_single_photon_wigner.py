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

# # Single-photon Wigner functions
#
# The two-photon chronocyclic Wigner function is a 4-D Gaussian in
# (nu_s, nu_i, tau_s, tau_i). Tracing out the idler gives the unheralded
# signal state; fixing the idler's frequency and time gives the signal state
# conditioned on an ideal joint measurement of its partner.

# +
import numpy as np

from pdcw import model
from pdcw.entanglement import (conditioned_spwf, e2_half_widths, ictbp_closed_form,
                               tbp_from_moments, unconditioned_spwf)
from pdcw.jsa import build_jsa
from pdcw.wigner import analytic_wigner, moments, wigner_of_gaussian_jsa

np.set_printoptions(precision=4)
cfg = model.shipped_config("ktp_narrow_pump")
params = model.derive_params(cfg)
# -

# Two independent constructions: the closed form and the Wigner transform
# of the Gaussian JSA. Their coefficient matrices coincide.

closed = analytic_wigner(params, cfg.chirp)
derived = wigner_of_gaussian_jsa(build_jsa(params, cfg.chirp))
print("max |dM| / |M|:", np.max(np.abs(closed.M - derived.M)) / np.max(np.abs(derived.M)))

# For a correlated state the time-bandwidth products straddle one:
# the unconditioned photon is a mixture (TBP > 1), the conditioned one is
# squeezed below the classical limit.

uncond = unconditioned_spwf(derived)
cond = conditioned_spwf(derived, "signal", nu=0.0, tau=0.0)
print("TBP unconditioned:", tbp_from_moments(uncond))
print("TBP conditioned:  ", tbp_from_moments(cond))
print("ICTBP closed form:", ictbp_closed_form(params, cfg.chirp))
print("1/e^2 half widths (rad/fs, fs):", e2_half_widths(cond), e2_half_widths(uncond))

# Moving the conditioning point shifts the conditioned Wigner function but
# never changes its shape.

for nu, tau in [(0.0, 0.0), (5e-4, 0.0), (0.0, 300.0)]:
    mean, cov = moments(conditioned_spwf(derived, "signal", nu, tau))
    print((nu, tau), "mean", mean, "var", np.diag(cov))
