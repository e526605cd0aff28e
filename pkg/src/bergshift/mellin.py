"""Radial symbols on [0,1) and their Mellin transforms.

The transform convention used throughout the package is

    phi_hat(z) = integral_0^1 phi(r) * r**(z-1) dr

so the monomial r**n has transform 1/(z+n).  Under this convention the
degree-p shift weight 2(k+p+1)*phi_hat(2k+p+2) reproduces the classical
diagonal action T_{r^n} z^k = (2k+2)/(2k+n+2) z^k, which the projection
quadrature oracle in :mod:`bergshift.operators` confirms independently.
The alternative convention carrying the measure r*dr is inconsistent with
that action and is not used anywhere.

Transforms are evaluated only on the closed half-plane Re z >= 2, where
they are continuous and bounded for integrable radial symbols.  The
:func:`mellin_monomial` helper extends the monomial closed form left of
that line for internal plumbing (it only needs Re z > -n).

Everything here is a pure function of immutable inputs; values are safe
to share across threads.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, PoleError, PreconditionError, QuadratureError

__all__ = [
    "Monomial",
    "MonomialSum",
    "Sampled",
    "RadialSymbol",
    "MellinDomainPoint",
    "adaptive_quadrature",
    "mellin_monomial",
    "mellin_eval",
    "muntz_szasz_check",
    "SATISFIED",
    "INCONCLUSIVE",
    "VIOLATED",
]

_POLE_EPS = 1e-12


@dataclass(frozen=True)
class Monomial:
    """The radial monomial r**exponent with non-negative integer exponent."""

    exponent: int

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, (int, np.integer)):
            raise PreconditionError("Monomial exponent must be an integer")
        if self.exponent < 0:
            raise PreconditionError("Monomial exponent must be non-negative")

    def __call__(self, r: float) -> float:
        return float(r) ** self.exponent


@dataclass(frozen=True)
class MonomialSum:
    """A finite combination sum_i c_i * r**e_i with real exponents e_i > -1."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(c), float(e)) for c, e in self.terms)
        if not terms:
            raise PreconditionError("MonomialSum needs at least one term")
        for c, e in terms:
            if not math.isfinite(c):
                raise PreconditionError("MonomialSum coefficients must be finite")
            if not e > -1.0:
                raise DomainError(f"exponent {e} is not integrable on [0,1)")
        object.__setattr__(self, "terms", terms)

    def __call__(self, r: float) -> float:
        r = float(r)
        return sum(c * r**e for c, e in self.terms)


@dataclass(frozen=True)
class Sampled:
    """A radial symbol known only through a pointwise evaluator on [0,1).

    ``min_exponent`` is the integrability hint: the evaluator is assumed to
    be O(r**min_exponent) near 0, and the hint must exceed -1.
    """

    evaluator: Callable[[float], float]
    min_exponent: float = 0.0

    def __post_init__(self):
        if not self.min_exponent > -1.0:
            raise DomainError(
                f"integrability hint {self.min_exponent} is not > -1; "
                "the symbol is not integrable against dr on [0,1)"
            )

    def __call__(self, r: float) -> float:
        return self.evaluator(float(r))


RadialSymbol = Union[Monomial, MonomialSum, Sampled]


@dataclass(frozen=True)
class MellinDomainPoint:
    """A point of the closed evaluation half-plane Re z >= 2."""

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if z.real < 2.0:
            raise DomainError(f"Re z = {z.real} < 2 is outside the transform domain")
        object.__setattr__(self, "z", z)


# ---------------------------------------------------------------------------
# Adaptive Gauss quadrature on a finite interval
# ---------------------------------------------------------------------------

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(15)


def _panel_value(f, lo: float, hi: float):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    total = 0.0
    for x, w in zip(_GAUSS_NODES, _GAUSS_WEIGHTS):
        total += w * f(mid + half * x)
    return half * total


def adaptive_quadrature(f, lo: float, hi: float, abs_tol: float, max_panels: int = 10_000):
    """Integrate ``f`` on [lo, hi] to absolute error <= abs_tol.

    Greedy panel bisection with a fixed-order Gauss rule per panel; the
    per-panel error estimate is the change under one refinement.  Nodes are
    interior, so endpoint values are never requested (the integrands used
    here live on the half-open interval [0,1)).  Raises QuadratureError
    carrying the achieved estimate when the panel cap is hit.
    """
    if abs_tol <= 0.0:
        raise PreconditionError("abs_tol must be positive")

    def refine(a: float, b: float):
        coarse = _panel_value(f, a, b)
        m = 0.5 * (a + b)
        fine = _panel_value(f, a, m) + _panel_value(f, m, b)
        err = abs(fine - coarse)
        if not math.isfinite(abs(fine)) or not math.isfinite(err):
            raise QuadratureError(
                f"integrand produced non-finite values on [{a}, {b}]",
                estimate=math.inf,
            )
        return fine, err

    value, err = refine(lo, hi)
    heap = [(-err, lo, hi, value)]
    total_err = err
    n_panels = 1
    while total_err > abs_tol:
        if n_panels >= max_panels:
            raise QuadratureError(
                f"quadrature stalled at estimated error {total_err:.3e} "
                f"(target {abs_tol:.3e}, {n_panels} panels)",
                estimate=float(total_err),
            )
        neg_err, a, b, _old = heapq.heappop(heap)
        m = 0.5 * (a + b)
        v1, e1 = refine(a, m)
        v2, e2 = refine(m, b)
        total_err += e1 + e2 - (-neg_err)
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
        n_panels += 1
    return sum(item[3] for item in heap)


# ---------------------------------------------------------------------------
# Transform evaluation
# ---------------------------------------------------------------------------

def mellin_monomial(n: int, z: complex) -> complex:
    """Closed-form transform 1/(z+n) of the monomial r**n.

    Valid on Re z > -n; the pole at z = -n raises PoleError.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise PreconditionError("monomial exponent must be a non-negative integer")
    zz = complex(z)
    if abs(zz + n) < _POLE_EPS:
        raise PoleError(f"z = {z} hits the pole of the transform of r^{n} at z = {-n}")
    if zz.real <= -n:
        raise DomainError(f"Re z = {zz.real} is not in the half-plane Re z > {-n}")
    return 1.0 / (zz + n)


def mellin_eval(symbol: RadialSymbol, z, quad_tol: float = 1e-12) -> complex:
    """Evaluate the transform of ``symbol`` at ``z`` with Re z >= 2.

    Monomial and MonomialSum symbols use the exact closed form; Sampled
    symbols are integrated adaptively to absolute error <= quad_tol.
    """
    zz = z.z if isinstance(z, MellinDomainPoint) else complex(z)
    if zz.real < 2.0:
        raise DomainError(f"Re z = {zz.real} < 2 is outside the transform domain")
    if isinstance(symbol, Monomial):
        return mellin_monomial(symbol.exponent, zz)
    if isinstance(symbol, MonomialSum):
        return sum(c / (zz + e) for c, e in symbol.terms)
    if isinstance(symbol, Sampled):
        if not quad_tol > 0.0:
            raise PreconditionError("quad_tol must be positive for sampled symbols")
        exponent = zz - 1.0

        def integrand(r: float):
            return symbol(r) * r**exponent

        return adaptive_quadrature(integrand, 0.0, 1.0, quad_tol)
    raise PreconditionError(f"not a radial symbol: {symbol!r}")


# ---------------------------------------------------------------------------
# Uniqueness condition on point sets
# ---------------------------------------------------------------------------

SATISFIED = "satisfied"
INCONCLUSIVE = "inconclusive"
VIOLATED = "violated"


def muntz_szasz_check(points, partial_sum_threshold: float) -> str:
    """Finite-evidence check of the uniqueness condition on a point set.

    A bounded analytic function on the right half-plane vanishing on points
    d_n with inf |d_n| > 0 and divergent sum of Re(1/d_n) vanishes
    identically.  Over the finite evidence provided this returns

    * ``violated``     if some point sits at 0 within working precision,
    * ``satisfied``    if the partial sum of Re(1/d_n) exceeds the threshold,
    * ``inconclusive`` otherwise.

    This certifies a finite partial sum, never divergence itself.
    """
    pts = [complex(p) for p in points]
    if not pts:
        raise PreconditionError("point list must be non-empty")
    if len(set(pts)) != len(pts):
        raise PreconditionError("points must be pairwise distinct")
    if min(abs(p) for p in pts) < _POLE_EPS:
        return VIOLATED
    partial = math.fsum((1.0 / p).real for p in pts)
    return SATISFIED if partial > partial_sum_threshold else INCONCLUSIVE
