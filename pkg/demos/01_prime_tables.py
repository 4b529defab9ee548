"""
Prime tables and rough/smooth counting
======================================

Everything downstream runs off a single sieve pass: a largest-prime-factor
table up to some limit.  This script builds one, pulls out the classic
counting quantities, and shows the Mertens-style product that calibrates
the mean square of the random Euler products later on.
"""

import math

from rmf_lab import primes

# One sieve, reused for every query below.  10**6 takes well under a second.
table = primes.build_prime_table(10**6)
print("table limit:", table.limit)
print("pi(10^6)  =", len(table.primes))

# largest prime factor of a few composites
for n in (2, 97, 360, 2**19, 999983 * 1):
    print("lpf(%7d) = %d" % (n, primes.largest_prime_factor(table, n)))

# Rough numbers keep only integers whose prime factors are all > y,
# smooth numbers keep those with all factors <= y.  The two counts
# partition [1, x] only in the degenerate cases; in general they overlap
# at n = 1 and miss the middle.
q = primes.RoughSmoothQuery(x=10**4, y=100.0)
print("rough(10^4, 100)  =", primes.rough_count(table, q))
print("smooth(10^4, 100) =", primes.smooth_count(table, q))

# The vectorized indicator gives the same thing as a mask you can reuse.
ind = primes.rough_indicator(table, 10**4, 100.0)
print("indicator sum     =", int(ind.sum()), "(matches rough count)")

# Mertens sum: sum_{p <= x} 1/p, which grows like log log x + M.
for x in (10.0, 10**3, 10**6):
    s = primes.mertens_sum(table, x)
    print("mertens(%8g) = %.9f   loglog x = %.9f" % (x, s, math.log(math.log(x))))

# Prime sums twisted by p^{-it}: at t = 0 this is a plain Mertens
# difference, for larger t the oscillation kills most of the mass.
for t in (0.0, 2.0, 5.0):
    z = primes.prime_sum_oscillation(table, 100.0, 10**6, t)
    print("oscillation t=%.1f : |sum| = %.6f" % (t, abs(z)))
