"""
Truncated random Euler products
===============================

F(s) = prod_{p <= B} (1 - f(p) p^{-s})^{-1} evaluated on the critical line
s = 1/2 + it, in log space so nothing overflows.  Two closed forms keep the
Monte Carlo honest: the exact mean square of |F| and the exact expectation
of a product pair over disjoint prime windows.
"""

import numpy as np

from rmf_lab import euler, primes
from rmf_lab.euler import EulerCutoffs
from rmf_lab.sampler import RmfModel, RmfSampler

table = primes.build_prime_table(10**6)

# Cutoff policy: B = x^{exp(-j)/2}, so j = 0 truncates at sqrt(x) and each
# extra level shrinks the window geometrically.
for j in (0, 1, 2):
    c = EulerCutoffs(x=10**6, j=j)
    print("j=%d  cutoff B = %10.2f" % (j, c.cutoff))

# The table-driven default picks j for you (clamped to what the scale supports).
print("default j at 10^6:", euler.truncation_level(10**6))

# One evaluation: log-magnitude plus phase, convertible to a complex number.
s = RmfSampler(RmfModel.STEINHAUS, seed=7)
val = euler.euler_product(s, table, EulerCutoffs(x=10**6, j=1), t=0.5)
print("log|F| = %.6f   arg F = %.6f   F = %s" % (val.log_mag, val.phase, val.to_complex()))

# 1) Mean square.  E|F(1/2+it)|^2 has a closed form; for Steinhaus it is the
#    Mertens-style product prod_p (1 - 1/p)^{-1} over p <= B, about e^gamma log B.
B = 1000.0
exact = euler.mean_square_exact(table, RmfModel.STEINHAUS, B)
draws = []
for seed in range(1, 2001):
    v = euler.euler_product(RmfSampler(RmfModel.STEINHAUS, seed=seed), table,
                            EulerCutoffs(x=B * B, j=0), t=0.0)
    draws.append(np.exp(2.0 * v.log_mag))
draws = np.asarray(draws)
se = draws.std(ddof=1) / np.sqrt(len(draws))
print("mean square: exact %.6f   MC %.6f +/- %.6f" % (exact, draws.mean(), se))

# 2) Pair expectation.  E[F(t1) conj(F)(t2)] over disjoint windows factorizes
#    prime by prime; the closed form below is what the Monte Carlo must hit.
pair = euler.pair_expectation_exact(table, RmfModel.STEINHAUS, 100.0, 10**4, 1.0, 0.0)
print("pair expectation (exact) =", pair)

# The variance proxies built from these products:
sam = RmfSampler(RmfModel.STEINHAUS, seed=42)
print("V1 at 10^6 =", euler.v1_variance(sam, table, 10**6))
r = euler.v5_integral(sam, table, 10**6)
print("V5 at 10^6 = %.6f   (j=%d, B=%.1f, T=%.1f, panels=%d, converged=%s)"
      % (r.value, r.j, r.B, r.T, r.panels_used, r.converged))
