"""Exact quadratic Dirichlet L-functions over 𝔽_q[x] and their moment theory.

Subpackage map:

- poly: 𝔽_q[x] arithmetic, factorization, enumeration, counting functions
- quadfield: exact arithmetic in ℚ(√q) for critical-point values
- characters: residue symbols, Gauss sums, Poisson and ensemble dualities
- lfun: L-polynomials, zeros, functional equation, explicit formula
- moments: hyperelliptic-ensemble sweeps and moment reports
- eulerprod: prime Euler products, their derivatives, moment coefficients
- trigsums: closed forms and asymptotics for the oscillatory sums
- bounds: one-sided minorants and upper-bound machinery for log |L|
- cli: command-line front end
"""

__version__ = "0.1.0"
