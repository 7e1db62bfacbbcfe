"""Spectral-temporal structure and entanglement of pulsed parametric downconversion."""

__version__ = "0.1.0"

from .errors import (DegenerateGroupVelocity, InvalidConfig, NegativeIntensity, NotConverged,
                     PdcwError, QuadratureNotConverged, SingularBlock, WindowTooSmall)
from .model import (ProcessConfig, DerivedParams, derive_params, validate_config, load_config,
                    shipped_config, sigma_from_fwhm, fwhm_from_sigma, decorrelation_pump_fwhm)
from .grid import Axis, Grid2D
from .jsa import (ComplexGaussian2D, build_jsa, eval_jsa, auto_window, sample_jsa, sample_jsi,
                  sample_jti_fft)
from .wigner import (GaussianForm4D, analytic_wigner, wigner_of_gaussian_jsa, numeric_wigner_oracle,
                     marginalize, condition, moments, normalize)
from .entanglement import (SchmidtSpectrum, schmidt_decompose, cooperativity, cooperativity_from_jsi,
                           ictbp_closed_form, tbp_from_moments, jsa_schmidt, conditioned_spwf,
                           unconditioned_spwf)
