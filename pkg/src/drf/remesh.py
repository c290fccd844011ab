"""Cubic-spline refit of the meridian profile onto a fresh uniform lattice.

The knot coordinate is the cumulative meridian position x (x1 = 0,
x_{i+1} = x_i + a_i) — the intrinsic PL arc length along the lateral edges,
which is the degree of freedom the flow actually evolves.  Resampling keeps
the total meridian length exactly and restores a uniform axial grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import NonMonotoneKnots
from .lattice import NeckpinchLattice, check_realizable


@dataclass(frozen=True)
class SplineFit:
    x: np.ndarray
    s: np.ndarray
    spline: CubicSpline

    def __call__(self, xq):
        return self.spline(xq)

    @property
    def coefficients(self) -> np.ndarray:
        return self.spline.c


def fit_spline(x, s) -> SplineFit:
    """Natural cubic spline through (x_i, s_i); x strictly increasing, n >= 3."""
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    if x.ndim != 1 or len(x) < 3 or x.shape != s.shape:
        raise ValueError("need matching 1-d arrays with at least 3 knots")
    bad = np.flatnonzero(np.diff(x) <= 0.0)
    if bad.size:
        raise NonMonotoneKnots(int(bad[0]) + 1)
    return SplineFit(x=x, s=s, spline=CubicSpline(x, s, bc_type="natural"))


def resample(lattice: NeckpinchLattice, n_prime: int | None = None,
             check_duals: bool = True) -> NeckpinchLattice:
    """Refit the (x, s) profile and sample it on n_prime uniform knots.

    End values are preserved exactly and the total meridian length is
    conserved by construction (a'_i = (x_n - x_1)/(n'-1)).  The result is
    checked for realizability and, when `check_duals`, for positive dual
    measures.
    """
    if n_prime is None:
        n_prime = lattice.n
    if n_prime < 3:
        raise ValueError("resample requires n_prime >= 3")
    x = lattice.meridian_knots()
    fit = fit_spline(x, lattice.s)
    xq = np.linspace(x[0], x[-1], n_prime)
    s_new = np.asarray(fit(xq), dtype=float)
    s_new[0] = lattice.s[0]
    s_new[-1] = lattice.s[-1]
    a_new = np.full(n_prime - 1, (x[-1] - x[0]) / (n_prime - 1))
    out = NeckpinchLattice(n=n_prime, s=s_new, a=a_new,
                           end_treatment=lattice.end_treatment,
                           lobe_label=lattice.lobe_label,
                           cap_lambda=lattice.cap_lambda)
    check_realizable(out)
    if check_duals:
        from .curvature import duals

        duals(out)  # raises NotWellCentered on degenerate measures
    return out
