"""Cross-check the rough-count density three independent ways.

(a) a weighted integral of |zeta-like prime sums| over a window on the
    critical line, done with adaptive quadrature,
(b) the exact count of B-rough integers up to x, normalized,
(c) the first-order asymptotic prediction for that density.

The three numbers agree only up to slack that shrinks like 1/loglog x,
so expect rough agreement, not decimal places.
"""

from rmf_lab import primes, verify

table = primes.build_prime_table(10**6)

x = 10**6
B = 100.0
rep = verify.rough_integral_three_ways(table, x, B)

print("x = %g, B = %g, window W = %.4f" % (rep.x, rep.B, rep.W))
# the integrand is complex but the integral is real up to rounding
print("(a) integral      = %.6f  (imag %.2e)"
      % (rep.lhs_numeric.real, rep.lhs_numeric.imag))
print("(b) exact count   = %.6f" % rep.mid_rough_count)
print("(c) asymptotic    = %.6f" % rep.rhs_asymptotic)
print("panels used: %d, converged: %s" % (rep.panels_used, rep.converged))

ab = abs(rep.lhs_numeric.real - rep.mid_rough_count) / rep.mid_rough_count
bc = abs(rep.mid_rough_count - rep.rhs_asymptotic) / rep.rhs_asymptotic
print("relative gaps: a vs b %.3f, b vs c %.3f" % (ab, bc))

# Reports serialize losslessly, so runs can be archived and diffed.
d = rep.to_dict()
rt = verify.RoughIntegralReport.from_dict(d)
print("round trip identical:", rt == rep)
