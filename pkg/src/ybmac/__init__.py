"""Exact Macdonald polynomial library built on the Yang-Baxter graph.

Subpackages:

* ``coeffs``    -- exact coefficient fields Q(q,t) and Q(zeta_m)(u)
* ``combin``    -- partitions, compositions, reciprocal vectors, YB paths
* ``mvpoly``    -- sparse multivariate Laurent polynomials
* ``hecke``     -- right-acting affine Hecke operators T_i, tau, xi_i, Xi_i
* ``macdonald`` -- builders for E_v, M_v, P_lam, MS_lam plus checks
* ``jack``      -- Jack polynomials as u -> 1 limits
* ``identities``-- declarative identity corpus and checkers
* ``cli``       -- command-line front end
"""

__version__ = "0.1.0"
