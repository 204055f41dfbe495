"""Desk-scale experiments on primes in arithmetic progressions.

Library layout:

- arith: sieves, multiplicative functions, Chebyshev psi in progressions
- characters: Dirichlet character groups, conductors, large sieve checks
- bv_sums: distribution error sums (worst-case, mean-square, smoothed)
- heath_brown: the Heath-Brown identity and dyadic decompositions
- comb_lemmas: exact subset-sum scans over exponent tuples
- variational: lower bounds for the Maynard functional M_k
- gaps: level of distribution, admissible tuples, gap-bound pipeline
- cli: batch command surface emitting JSON/CSV reports
"""

__version__ = "0.1.0"
