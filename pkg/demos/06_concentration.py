"""Compare the two variance proxies V1 and V5 across random seeds.

V1 is the direct weighted sum of |S(x/p)|^2 over large primes; V5 is an
integral of the truncated Euler product along the critical line.  If the
product is a faithful stand-in for the prime sums, the two should track
each other seed by seed.
"""

from rmf_lab import primes, verify

table = primes.build_prime_table(10**5)

# j pins the product truncation level; j=0 uses B = sqrt(x).
rep = verify.concentration_experiment(table, x=10**5, n_trials=60, j=0)

print("trials: %d at x = %g (j = %d)" % (rep.n_trials, rep.x, rep.truncation_j))
print("corr(log V1, log V5) = %.4f" % rep.correlation)
print("median V1/V5 ratio   = %.4f" % rep.median_ratio)
print("mean |log diff|      = %.4f" % rep.mean_abs_diff)

# first few raw pairs
for v1, v5 in rep.pairs[:5]:
    print("  V1 = %10.4f   V5 = %10.4f" % (v1, v5))

# The correlation is scale free: rescaling every V5 by a constant changes
# ratios but not the log-log correlation.
