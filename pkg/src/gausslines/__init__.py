"""Exact arithmetic on Gaussian lines and coprimality windows along them."""

from .errors import CapExceeded, DomainError
from .zi import GaussInt, canonical_associate, coprime, divides, gcd, is_gaussian_prime, norm, nu, primes_over
from .line import Line, NormPoly

__all__ = [
    "CapExceeded",
    "DomainError",
    "GaussInt",
    "Line",
    "NormPoly",
    "canonical_associate",
    "coprime",
    "divides",
    "gcd",
    "is_gaussian_prime",
    "norm",
    "nu",
    "primes_over",
]

__version__ = "0.1.0"
