"""Monte Carlo laboratory for random multiplicative functions.

Submodules
----------
primes      sieves, largest-prime-factor table, rough/smooth counting
sampler     seed-deterministic Steinhaus / Rademacher sampling and partial sums
euler       truncated random Euler products, exact expectations, variance proxies
quadrature  adaptive panel quadrature used by euler and verify
verify      experiment drivers for the identity / concentration / Gaussianity checks
stats       Monte Carlo orchestration, moments, KS distances, tail fits
cli         command line front end (`rmf-lab`)
"""

__version__ = "0.1.0"

from . import primes, sampler, euler, quadrature, verify, stats  # noqa: F401
