"""Seed-deterministic sampling and the restricted partial sum."""

import numpy as np

from rmf_lab import primes, sampler
from rmf_lab.sampler import RmfModel, RmfSampler

table = primes.build_prime_table(10**6)

# A sampler is just (model, seed, stream).  Same triple, same values,
# on every machine.  Stream 0 is the conventional base draw.
st = RmfSampler(RmfModel.STEINHAUS, seed=12345)
rd = RmfSampler(RmfModel.RADEMACHER, seed=12345)

ps = np.array([2, 3, 5, 7, 11], dtype=np.int64)
re, im = sampler.values_at_primes(st, ps)
print("steinhaus f(p):", np.round(re + 1j * im, 4))
re, im = sampler.values_at_primes(rd, ps)
print("rademacher f(p):", re.astype(int))

# f extends multiplicatively. Rademacher vanishes off squarefree integers.
print("f(12) steinhaus  =", sampler.f_at(st, table, 12))
print("f(12) rademacher =", sampler.f_at(rd, table, 12))

# Full prefix S(k) = sum_{n <= k} f(n) for every k up to the limit at once.
S = sampler.partial_sum_prefix(st, table, 10**4)
print("S(10^4) =", S[-1])

# The restricted sum keeps only n <= x whose largest prime factor
# exceeds sqrt(x). Each such n is p * m with a unique large prime p,
# so the sum collapses to sum_p f(p) S(x/p) over sqrt(x) < p <= x.
x = 10**6
v = sampler.restricted_sum(st, table, x)
print("restricted sum at 10^6 =", v)

# Normalization that makes the second moment order one.
print("normalized             =", sampler.normalize_sum(v, x))

# Determinism check: a fresh sampler object gives bit-identical output.
v2 = sampler.restricted_sum(RmfSampler(RmfModel.STEINHAUS, seed=12345), table, x)
print("bit identical rerun    =", v == v2)
