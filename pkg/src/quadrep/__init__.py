"""Exact representation numbers of positive definite quadratic forms.

Enumeration of r(Q, n), local densities and the singular-series main term,
the Eisenstein/cusp split r = rho + tau, and lattice-point statistics on
spheres in Z^d.
"""
from .enumeration import available_backends, backend, count_representations, representation_numbers, use_backend
from .errors import QuadRepError
from .forms import QuadraticForm, ortho_lattice, scaled_identity, successive_minima, validate
from .local_densities import density_profile, rho, sigma_infinity, sigma_p
from .eisenstein import split

__version__ = "0.1.0"

__all__ = [
    "QuadRepError", "QuadraticForm", "available_backends", "backend", "count_representations",
    "density_profile", "ortho_lattice", "representation_numbers", "rho", "scaled_identity",
    "sigma_infinity", "sigma_p", "split", "successive_minima", "use_backend", "validate",
]
