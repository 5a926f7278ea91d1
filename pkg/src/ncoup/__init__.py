"""Uncertainty-principle certificates on (noncommutative) phase space."""

from .certify import CertReport, check_form, nqt_feasibility, oup_matrix, rsup, scalar_ozawa
from .errors import *  # noqa: F401,F403
from .explore import SearchConfig, ViolationWitness, find_violation, gain_sweep, sample_probe_cov
from .matcore import herm_eigen, is_psd
from .models import MeasurementModel, bae_model, noise_matrix, nqt_model, scalar_measures
from .symplectic import (
    NCParams,
    build_Omega,
    min_uncertainty_directions,
    standard_J,
    sw_map,
    symplectic_spectrum,
    williamson_diag,
)

__version__ = "0.1.0"
