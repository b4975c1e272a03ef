"""Exact Poisson-binomial laws, TV distances, and certification of TV bounds."""

from ._kernels import BACKEND
from .bounds import (
    BoundReport,
    DominatingPair,
    GProfile,
    certify_pair,
    g_profile,
    j_upper_bound,
    lower_bound_thm2,
    phi,
    pigeonhole_lower,
    tv_ber_lower,
    upper_bound_symmetric,
    upper_bound_thm1,
)
from .core import (
    C_BCV,
    CONSTANTS,
    ETA_BCV,
    Constants,
    Moments,
    ParamVec,
    Pmf,
    binom_pmf,
    is_log_concave,
    is_unimodal,
    moments,
    pb_pmf,
    shift_tv,
    survival,
    tv,
)
from .homog import (
    HomogReport,
    Partition,
    binom_tv,
    binom_tv_family,
    delete_trial_kernel,
    homog_certificate,
    homogenize,
    mixture_law,
    split_bound_check,
)
from .oracle import pb_pmf_bruteforce, product_tv_bruteforce

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "binom_pmf",
    "binom_tv",
    "binom_tv_family",
    "BoundReport",
    "C_BCV",
    "certify_pair",
    "Constants",
    "CONSTANTS",
    "delete_trial_kernel",
    "DominatingPair",
    "ETA_BCV",
    "g_profile",
    "GProfile",
    "homog_certificate",
    "homogenize",
    "HomogReport",
    "is_log_concave",
    "is_unimodal",
    "j_upper_bound",
    "lower_bound_thm2",
    "mixture_law",
    "moments",
    "Moments",
    "ParamVec",
    "Partition",
    "pb_pmf",
    "pb_pmf_bruteforce",
    "phi",
    "pigeonhole_lower",
    "Pmf",
    "product_tv_bruteforce",
    "shift_tv",
    "split_bound_check",
    "survival",
    "tv",
    "tv_ber_lower",
    "upper_bound_symmetric",
    "upper_bound_thm1",
]
