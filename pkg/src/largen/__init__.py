"""Large-N analysis of Hermitian matrix models with even polynomial potentials.

The package computes, exactly where possible:

* the planar (leading-order) phase structure — one-cut or two-cut support
  of the eigenvalue density, with closed forms for quartic potentials;
* large-N expansions of the orthogonal-polynomial recurrence coefficients
  in both phases, as exact rational functions of the leading-order data;
* critical points of both phases, their order, and the scaled expansions
  that hold there;
* the member of the Painlevé I or Painlevé II hierarchy satisfied by the
  scaling function at each critical point;
* a finite-N oracle (high-precision Hankel/moment computation) used to
  cross-check every expansion numerically.

Everything symbolic runs over ``fractions.Fraction``; floating point enters
only at evaluation boundaries, via mpmath at a caller-chosen precision.
"""

__version__ = "0.1.0"
