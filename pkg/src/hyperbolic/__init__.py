"""Generalized hyperbolic laws, sand-sorting dynamics, hyperbolic processes
and exact exponential-family inference."""
from ._backend import BACKEND
from .dist import (GenLogisticParams, GhParams, GigParams, MvGhParams, gh_cdf, gh_logpdf,
                   gh_mean_var, gh_pdf, gh_sample, gig_logpdf, gig_moment, gig_pdf, gig_sample,
                   random_stream)
from .errors import (ConvolutionError, DegenerateSampleError, DomainError, ExistenceError,
                     HyperbolicError, ParameterError, RangeError, UndefinedMomentError)
from .specfun import bessel_k, log_bessel_k

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "GenLogisticParams", "GhParams", "GigParams", "MvGhParams", "gh_cdf",
    "gh_logpdf", "gh_mean_var", "gh_pdf", "gh_sample", "gig_logpdf", "gig_moment", "gig_pdf",
    "gig_sample", "random_stream", "ConvolutionError", "DegenerateSampleError", "DomainError",
    "ExistenceError", "HyperbolicError", "ParameterError", "RangeError",
    "UndefinedMomentError", "bessel_k", "log_bessel_k", "__version__",
]
