"""Log-space Gamma and Beta evaluation, formal Gamma-factor ratios, the
divisibility test for when such a ratio is a rational function, and an
independent numerical detector used to cross-check that test.

A GammaRatio is a formal quotient of factors Gamma((z + a_i)/(2 delta))
sharing one even denominator 2 delta.  Such a quotient with two numerator
and two denominator factors is a rational function of z exactly when
2 delta divides the total offset gap and one of the numerator-denominator
offset differences.  :func:`is_rational_criterion` implements that
arithmetic test; :func:`rational_detect_oracle` decides the same question
by measuring growth and singularity multiplicities, reconstructing an
exact candidate, and validating it at held-out points, without ever
looking at the divisibility structure, so the two can certify each other.

Poles and zeros of a ratio are arithmetic progressions -a - 2*delta*N and
are handled symbolically; numerical evaluation refuses points near them.

Pure functions over immutable values throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, PoleError, PreconditionError, SamplingError

__all__ = [
    "log_gamma",
    "signed_log_gamma",
    "beta",
    "GammaFactor",
    "GammaRatio",
    "gamma_ratio",
    "gamma_ratio_eval",
    "is_rational_criterion",
    "RationalFn",
    "rationalfn_reduce",
    "rational_detect_oracle",
    "proportionality_test",
]

_POLE_EPS = 1e-9


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def signed_log_gamma(x: float) -> tuple:
    """(ln |Gamma(x)|, sign of Gamma(x)) for real x off the poles."""
    x = float(x)
    if x > 0.0:
        return math.lgamma(x), 1
    if x == math.floor(x):
        raise PoleError(f"Gamma pole at x = {x}")
    # Gamma alternates sign on (-j-1, -j): negative on (-1,0), positive on (-2,-1), ...
    sign = -1 if math.floor(-x) % 2 == 0 else 1
    return math.lgamma(x), sign


def beta(x: float, y: float) -> float:
    """Euler Beta via log-space Gamma, B(x,y) = Gamma(x)Gamma(y)/Gamma(x+y)."""
    if not (float(x) > 0.0 and float(y) > 0.0):
        raise DomainError(f"beta needs positive arguments, got ({x}, {y})")
    return math.exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y))


# ---------------------------------------------------------------------------
# Formal Gamma-factor ratios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaFactor:
    """One factor Gamma((z + offset) / denom) with shared even denom = 2*delta."""

    offset: int
    denom: int

    def __post_init__(self):
        if isinstance(self.offset, bool) or not isinstance(self.offset, (int, np.integer)):
            raise PreconditionError("factor offset must be an integer")
        if self.denom < 2 or self.denom % 2 != 0:
            raise PreconditionError(f"denom must be an even integer >= 2, got {self.denom}")

    def argument(self, z: float) -> float:
        return (z + self.offset) / self.denom

    def pole_progression(self) -> tuple:
        """Poles of this factor as (start, step): z = start - step*j, j >= 0."""
        return (-self.offset, self.denom)


@dataclass(frozen=True)
class GammaRatio:
    """A formal quotient prod Gamma(num_i) / prod Gamma(den_j), shared denom."""

    numerator: tuple
    denominator: tuple

    def __post_init__(self):
        num = tuple(self.numerator)
        den = tuple(self.denominator)
        if not num and not den:
            raise PreconditionError("a ratio needs at least one factor")
        denoms = {f.denom for f in num + den}
        if len(denoms) != 1:
            raise PreconditionError(f"all factors must share one denominator, got {denoms}")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @property
    def denom(self) -> int:
        return (self.numerator + self.denominator)[0].denom

    @property
    def offset_gap(self) -> int:
        """Sum of numerator offsets minus sum of denominator offsets."""
        return sum(f.offset for f in self.numerator) - sum(f.offset for f in self.denominator)

    def pole_progressions(self) -> list:
        """Symbolic pole progressions of the ratio (from numerator factors)."""
        return [f.pole_progression() for f in self.numerator]

    def zero_progressions(self) -> list:
        """Symbolic zero progressions of the ratio (from denominator factors)."""
        return [f.pole_progression() for f in self.denominator]

    def largest_singularity(self) -> float:
        """Rightmost point where any factor argument hits a pole of Gamma."""
        return max(-f.offset for f in self.numerator + self.denominator)


def gamma_ratio(num_offsets: Sequence[int], den_offsets: Sequence[int], denom: int) -> GammaRatio:
    """Build a GammaRatio from plain offset lists and the shared denominator."""
    return GammaRatio(
        tuple(GammaFactor(int(a), int(denom)) for a in num_offsets),
        tuple(GammaFactor(int(c), int(denom)) for c in den_offsets),
    )


def gamma_ratio_eval(ratio: GammaRatio, z: float) -> float:
    """Evaluate a ratio at real z off its poles and zeros, in log space."""
    z = float(z)
    log_total = 0.0
    sign_total = 1
    for factor, side in [(f, 1) for f in ratio.numerator] + [(f, -1) for f in ratio.denominator]:
        arg = factor.argument(z)
        if arg < 0.5 and abs(arg - round(arg)) < _POLE_EPS and round(arg) <= 0:
            raise PoleError(
                f"factor Gamma((z+{factor.offset})/{factor.denom}) hits the pole at "
                f"argument {round(arg)} for z = {z}"
            )
        lg, sg = signed_log_gamma(arg)
        log_total += side * lg
        sign_total *= sg  # 1/Gamma carries the same sign as Gamma
    return sign_total * math.exp(log_total)


def is_rational_criterion(ratio: GammaRatio) -> bool:
    """Divisibility test for rationality of a 2/2 Gamma-factor ratio.

    True exactly when 2*delta divides the offset gap a+b-c-d and at least
    one of the numerator-denominator differences a-c, a-d.  The offsets are
    sorted first, so the answer is invariant under swapping the two
    numerator factors and under swapping the two denominator factors (given
    the gap condition the pairings a-c and b-d fail or succeed together).
    """
    if len(ratio.numerator) != 2 or len(ratio.denominator) != 2:
        raise PreconditionError("the criterion applies to ratios with 2/2 factors")
    d2 = ratio.denom
    a, _b = sorted(f.offset for f in ratio.numerator)
    c, d = sorted(f.offset for f in ratio.denominator)
    if ratio.offset_gap % d2 != 0:
        return False
    return (a - c) % d2 == 0 or (a - d) % d2 == 0


# ---------------------------------------------------------------------------
# Exact rational functions
# ---------------------------------------------------------------------------

def _poly_trim(coeffs: list) -> list:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_divmod(a: list, b: list) -> tuple:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    if len(a) < len(b):
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        coef = a[i + db] / lb
        q[i] = coef
        if coef != 0:
            for j, bj in enumerate(b):
                a[i + j] -= coef * bj
    return _poly_trim(q), _poly_trim(a)


def _poly_gcd(a: list, b: list) -> list:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b != [Fraction(0)]:
        _, r = _poly_divmod(a, b)
        a, b = b, r
        if len(b) == 1 and b[0] == 0:
            break
    if a[-1] != 0:
        a = [c / a[-1] for c in a]  # monic gcd
    return a


def _poly_eval(coeffs, z):
    total = 0.0 if not isinstance(z, complex) else 0.0 + 0.0j
    for c in reversed(coeffs):
        total = total * z + (float(c) if isinstance(c, Fraction) else c)
    return total


def _poly_from_int_roots(roots: Sequence[int]) -> list:
    out = [Fraction(1)]
    for r in roots:
        out = _poly_mul(out, [Fraction(-int(r)), Fraction(1)])
    return out


@dataclass(frozen=True)
class RationalFn:
    """A rational function with exact coefficients, low-to-high degree.

    Canonical form: denominator monic, numerator and denominator coprime.
    Construct through :func:`rationalfn_reduce`.
    """

    numerator: tuple
    denominator: tuple

    def degree(self) -> tuple:
        return (len(self.numerator) - 1, len(self.denominator) - 1)

    def __call__(self, z):
        return _poly_eval(self.numerator, z) / _poly_eval(self.denominator, z)

    def __str__(self):
        def fmt(coeffs):
            parts = []
            for i, c in enumerate(coeffs):
                if c == 0:
                    continue
                term = f"{c}" if i == 0 else (f"{c}*z" if i == 1 else f"{c}*z^{i}")
                parts.append(term)
            return " + ".join(parts) if parts else "0"

        return f"({fmt(self.numerator)}) / ({fmt(self.denominator)})"


def rationalfn_reduce(num: Sequence, den: Sequence) -> RationalFn:
    """Reduce a coefficient-list quotient to canonical form, exactly.

    Coefficients are taken as exact rationals (ints and Fractions pass
    through; floats convert by their exact binary value).
    """
    num = _poly_trim([Fraction(c) for c in num] or [Fraction(0)])
    den = _poly_trim([Fraction(c) for c in den] or [Fraction(0)])
    if den == [Fraction(0)]:
        raise DomainError("denominator is identically zero")
    if num != [Fraction(0)]:
        g = _poly_gcd(num, den)
        if len(g) > 1:
            num, _ = _poly_divmod(num, g)
            den, _ = _poly_divmod(den, g)
    lead = den[-1]
    num = [c / lead for c in num]
    den = [c / lead for c in den]
    return RationalFn(tuple(num), tuple(den))


# ---------------------------------------------------------------------------
# Rational-detection oracle
# ---------------------------------------------------------------------------

def _ratio_log_abs_vec(ratio: GammaRatio, zs: np.ndarray) -> np.ndarray:
    """log |ratio(z)| for an array of real z off the singular integers."""
    from scipy.special import gammaln

    zs = np.asarray(zs, dtype=float)
    total = np.zeros_like(zs)
    for f in ratio.numerator:
        total += gammaln((zs + f.offset) / f.denom)
    for f in ratio.denominator:
        total -= gammaln((zs + f.offset) / f.denom)
    return total


def _candidate_rel_err(lead: float, num_roots, den_roots, zs: np.ndarray,
                       log_h: np.ndarray) -> float:
    """Max relative deviation of lead * prod(z-r)/prod(z-q) from the ratio.

    All z lie strictly right of every root, so every linear factor is
    positive and the evaluation is stable in log space.
    """
    if lead <= 0.0:
        return math.inf
    log_cand = np.full(zs.shape, math.log(lead))
    for r in num_roots:
        log_cand += np.log(zs - r)
    for q in den_roots:
        log_cand -= np.log(zs - q)
    return float(np.max(np.abs(np.expm1(log_cand - log_h))))


def rational_detect_oracle(ratio: GammaRatio, max_degree: int,
                           sample_count: int) -> Optional[RationalFn]:
    """Decide numerically whether a Gamma-factor ratio is a rational function.

    The detection never consults the offset arithmetic behind
    :func:`is_rational_criterion`; it only evaluates the ratio.  Stages:

    1. Growth screen.  Rational functions have integer asymptotic degree,
       so a clearly fractional exponent measured between two far points is
       an immediate rejection.
    2. Singularity probe.  A Gamma-factor ratio is meromorphic and its
       zeros and poles sit on integers, so probing the local slope of
       log |ratio| just right of every candidate integer yields the exact
       multiplicity there (zero net multiplicity where ladders cancel).
       A candidate must fit inside the degree budget with numerator minus
       denominator degree equal to the measured growth exponent.
    3. Exact reconstruction and held-out validation.  The candidate is
       rebuilt exactly from the integer roots (the leading coefficient of
       a genuinely rational ratio is a power of the shared denominator; a
       continued-fraction rationalization of a sampled value is the
       fallback) and accepted only when it matches the ratio to 1e-8
       relative at 2*sample_count held-out points spanning two decades
       past the probe region.  Non-rational ratios keep singularity
       ladders marching beyond any finite probe window and fail this
       match; sampled fits alone cannot be trusted here because smooth
       Stirling-type remainders admit deceptively good rational
       approximants on narrow windows.

    Returns the canonical RationalFn on success, None otherwise.
    """
    if sample_count < 2 * max_degree + 3:
        raise PreconditionError("need sample_count >= 2*max_degree + 3")
    if max_degree < 0:
        raise PreconditionError("max_degree must be non-negative")

    d2 = ratio.denom
    sing = ratio.largest_singularity()
    z0 = max(0.0, sing) + 0.5
    if not math.isfinite(z0):
        raise SamplingError("no pole-free sampling region")

    # Stage 1: asymptotic growth exponent.
    z_far = z0 + 1.0e7
    logs = _ratio_log_abs_vec(ratio, np.array([z_far, 2.0 * z_far]))
    theta_est = (logs[1] - logs[0]) / math.log(2.0)
    theta = round(theta_est)
    if abs(theta_est - theta) > 0.02 or abs(theta) > max_degree:
        return None

    # Stage 2: multiplicity probe at every integer a bounded rational
    # candidate could use.
    floor = min(-f.offset for f in ratio.numerator + ratio.denominator)
    floor -= d2 * max_degree + 1
    top = int(math.floor(sing))
    cand = np.arange(floor, top + 1, dtype=float)
    if cand.size == 0:
        num_roots: list = []
        den_roots: list = []
    else:
        eps = 1e-4
        s1 = _ratio_log_abs_vec(ratio, cand + eps)
        s2 = _ratio_log_abs_vec(ratio, cand + 2 * eps)
        mu_float = (s2 - s1) / math.log(2.0)
        mu = np.rint(mu_float).astype(int)
        if np.max(np.abs(mu_float - mu)) > 0.2:
            return None  # ambiguous local behavior, no trustworthy candidate
        num_roots = [int(j) for j, m in zip(cand, mu) for _ in range(max(m, 0))]
        den_roots = [int(j) for j, m in zip(cand, mu) for _ in range(max(-m, 0))]
    if len(num_roots) > max_degree or len(den_roots) > max_degree:
        return None
    if len(num_roots) - len(den_roots) != theta:
        return None

    # Stage 3: exact candidate against held-out points.
    z_val = np.geomspace(z0 + 0.5, z0 + 2.0e4, 2 * sample_count)
    log_h_val = _ratio_log_abs_vec(ratio, z_val)
    lead_candidates = [Fraction(1, d2**theta) if theta >= 0 else Fraction(d2 ** (-theta))]
    z_mid = float(z_val[len(z_val) // 2])
    lead_est = math.exp(
        float(_ratio_log_abs_vec(ratio, np.array([z_mid]))[0])
        - sum(math.log(z_mid - r) for r in num_roots)
        + sum(math.log(z_mid - q) for q in den_roots)
    )
    lead_candidates.append(Fraction(lead_est).limit_denominator(4 * d2 ** abs(theta)))
    for lead in lead_candidates:
        if lead <= 0:
            continue
        rel = _candidate_rel_err(float(lead), num_roots, den_roots, z_val, log_h_val)
        if rel < 1e-8:
            num_poly = [lead * c for c in _poly_from_int_roots(num_roots)]
            den_poly = _poly_from_int_roots(den_roots)
            return rationalfn_reduce(num_poly, den_poly)
    return None


# ---------------------------------------------------------------------------
# Proportionality detector on arithmetic grids
# ---------------------------------------------------------------------------

def proportionality_test(f_values, g_values, period: int, tol: float,
                         step: int = 1) -> Optional[complex]:
    """Detect F = c G from samples on an arithmetic grid.

    ``f_values`` and ``g_values`` sample two functions on the same grid of
    spacing ``step``; ``period`` must be a positive multiple of the step.
    When the cross difference F(z) G(z+period) - F(z+period) G(z) vanishes
    relative to its terms, below ``tol``, the grid is consistent with exact
    proportionality and the median of F/G is returned; otherwise None.

    This is a finite-grid surrogate: the full conclusion needs boundedness
    and analyticity hypotheses the sampler cannot check.
    """
    f = np.asarray(f_values, dtype=complex)
    g = np.asarray(g_values, dtype=complex)
    if f.shape != g.shape or f.ndim != 1 or f.size == 0:
        raise PreconditionError("need two equal-length non-empty sample vectors")
    if np.any(f == 0) or np.any(g == 0):
        raise PreconditionError("samples must be nonzero at every grid point")
    if period <= 0 or step <= 0 or period % step != 0:
        raise PreconditionError("grid step must divide the positive period")
    stride = period // step
    if stride >= f.size:
        raise PreconditionError("period exceeds the sampled grid")
    lhs = f[:-stride] * g[stride:]
    rhs = f[stride:] * g[:-stride]
    rel = np.abs(lhs - rhs) / (np.abs(lhs) + np.abs(rhs))
    if np.max(rel) >= tol:
        return None
    ratio = f / g
    c = complex(np.median(ratio.real), np.median(ratio.imag))
    return c
