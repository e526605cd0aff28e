"""Weighted-shift realization of quasihomogeneous Toeplitz operators.

On the Bergman space of the unit disk with normalized area measure the
monomials z^k are orthogonal with ||z^k||^2 = 1/(k+1), and a symbol
e^{ip theta} phi(r) acts as the degree-p weighted shift

    z^k  ->  2(k+p+1) phi_hat(2k+p+2) z^{k+p},

with phi_hat the transform from :mod:`bergshift.mellin`.  This module
materializes such operators as explicit weight sequences on k <= K_max and
provides the algebra the commutation harness needs: composition, powers,
commutators, degree-indexed sums, truncated band matrices with CSV export,
and a brute-force projection quadrature oracle that recomputes weights
from inner products without the closed-form transform.

Truncation is strict.  Any operation that would read a weight beyond the
materialized range raises TruncationError instead of padding with zeros;
silent truncation would corrupt residual measurements downstream.

Weight arrays are frozen read-only once built and every operation is a
pure function, so values are safe to share across threads.  Degree 0 is
allowed (diagonal operators) and weights may be complex even though all
monomial symbols produce real ones.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import PreconditionError, TruncationError
from .mellin import (
    Monomial,
    MonomialSum,
    RadialSymbol,
    adaptive_quadrature,
    mellin_eval,
)

__all__ = [
    "BasisVector",
    "WeightedShift",
    "ShiftSum",
    "shift_from_symbol",
    "identity_shift",
    "zero_shift",
    "compose",
    "power",
    "commutator",
    "add_shifts",
    "shift_sum",
    "scale",
    "sum_commutator",
    "apply",
    "matrix",
    "operator_norm_estimate",
    "brute_force_toeplitz",
    "write_matrix_csv",
    "read_matrix_csv",
]


@dataclass(frozen=True)
class BasisVector:
    """The basis monomial z^k with its squared Bergman norm 1/(k+1)."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise PreconditionError("basis index must be non-negative")

    @property
    def norm_squared(self) -> float:
        return 1.0 / (self.index + 1)


@dataclass(frozen=True, eq=False)
class WeightedShift:
    """A degree-p forward shift z^k -> w(k) z^{k+p} on k <= k_max.

    ``provenance`` records how the weights were obtained: directly from a
    symbol, from a root construction, or from algebra on other shifts.
    """

    degree: int
    weights: np.ndarray
    provenance: str = "composite"

    def __post_init__(self):
        if self.degree < 0:
            raise PreconditionError("shift degree must be non-negative")
        if self.provenance not in ("from_symbol", "root", "composite"):
            raise PreconditionError(f"unknown provenance {self.provenance!r}")
        w = np.array(self.weights, dtype=complex)
        if w.ndim != 1 or w.size == 0:
            raise PreconditionError("weights must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)):
            raise PreconditionError("weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def k_max(self) -> int:
        return self.weights.size - 1

    def weight(self, k: int) -> complex:
        if k < 0 or k > self.k_max:
            raise TruncationError(f"weight index {k} outside materialized range 0..{self.k_max}")
        return complex(self.weights[k])


@dataclass(frozen=True, eq=False)
class ShiftSum:
    """A finite sum of weighted shifts with pairwise distinct degrees."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(sorted(self.terms, key=lambda t: t.degree))
        degrees = [t.degree for t in terms]
        if len(set(degrees)) != len(degrees):
            raise PreconditionError(f"duplicate degrees in sum: {degrees}")
        object.__setattr__(self, "terms", terms)

    @property
    def degrees(self) -> tuple:
        return tuple(t.degree for t in self.terms)

    def term(self, degree: int) -> Optional[WeightedShift]:
        for t in self.terms:
            if t.degree == degree:
                return t
        return None


Operator = Union[WeightedShift, ShiftSum]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def shift_from_symbol(degree: int, radial: RadialSymbol, k_max: int,
                      quad_tol: float = 1e-12) -> WeightedShift:
    """Shift weights w(k) = 2(k+degree+1) phi_hat(2k+degree+2), k <= k_max."""
    if degree < 0:
        raise PreconditionError("quasihomogeneous degree must be non-negative")
    if k_max < 0:
        raise PreconditionError("k_max must be non-negative")
    ks = np.arange(k_max + 1, dtype=float)
    pref = 2.0 * (ks + degree + 1)
    if isinstance(radial, Monomial):
        w = pref / (2 * ks + degree + 2 + radial.exponent)
    elif isinstance(radial, MonomialSum):
        zs = 2 * ks + degree + 2
        acc = np.zeros_like(zs)
        for c, e in radial.terms:
            acc += c / (zs + e)
        w = pref * acc
    else:
        w = pref * np.array(
            [mellin_eval(radial, 2 * k + degree + 2, quad_tol) for k in range(k_max + 1)]
        )
    return WeightedShift(degree, w, provenance="from_symbol")


def identity_shift(k_max: int) -> WeightedShift:
    return WeightedShift(0, np.ones(k_max + 1))


def zero_shift(degree: int, k_max: int) -> WeightedShift:
    return WeightedShift(degree, np.zeros(k_max + 1))


# ---------------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------------

def compose(a: WeightedShift, b: WeightedShift) -> WeightedShift:
    """The operator 'a after b', with weight w(k) = a(k + deg b) * b(k).

    Matches matrix multiplication matrix(a) @ matrix(b).  The result is
    materialized on the largest range both factors support; an empty range
    raises TruncationError.
    """
    new_k = min(b.k_max, a.k_max - b.degree)
    if new_k < 0:
        raise TruncationError(
            f"composition needs weights of the outer factor up to k = {b.degree}, "
            f"materialized only to {a.k_max}"
        )
    ks = np.arange(new_k + 1)
    w = a.weights[ks + b.degree] * b.weights[ks]
    return WeightedShift(a.degree + b.degree, w)


def power(a: WeightedShift, m: int) -> WeightedShift:
    """The m-fold composition of a with itself, m >= 1."""
    if m < 1:
        raise PreconditionError("power exponent must be a positive integer")
    if a.k_max < (m - 1) * a.degree:
        raise TruncationError(
            f"power {m} of a degree-{a.degree} shift needs k_max >= {(m - 1) * a.degree}"
        )
    out = a
    for _ in range(m - 1):
        out = compose(out, a)
    return out


def commutator(a: WeightedShift, b: WeightedShift) -> WeightedShift:
    """[a, b] = ab - ba as a degree-(deg a + deg b) weighted shift."""
    new_k = min(a.k_max - b.degree, b.k_max - a.degree)
    if new_k < 0:
        raise TruncationError("insufficient truncation for both composition orders")
    ks = np.arange(new_k + 1)
    w = a.weights[ks + b.degree] * b.weights[ks] - b.weights[ks + a.degree] * a.weights[ks]
    return WeightedShift(a.degree + b.degree, w)


def add_shifts(a: WeightedShift, b: WeightedShift) -> WeightedShift:
    """Sum of two shifts of equal degree (weights add on the shared range)."""
    if a.degree != b.degree:
        raise PreconditionError("can only add shifts of equal degree; use shift_sum")
    new_k = min(a.k_max, b.k_max)
    return WeightedShift(a.degree, a.weights[: new_k + 1] + b.weights[: new_k + 1])


def shift_sum(ops: Iterable[WeightedShift]) -> ShiftSum:
    """Collect shifts of pairwise distinct degrees into a formal sum."""
    return ShiftSum(tuple(ops))


def scale(op: Operator, c: complex) -> Operator:
    """Multiply every weight by the constant c."""
    if isinstance(op, WeightedShift):
        return WeightedShift(op.degree, c * op.weights, provenance=op.provenance)
    return ShiftSum(tuple(scale(t, c) for t in op.terms))


def _as_terms(op: Operator) -> tuple:
    return (op,) if isinstance(op, WeightedShift) else op.terms


def sum_commutator(a: Operator, b: Operator) -> ShiftSum:
    """[a, b] for degree-indexed sums, collecting cross terms by degree.

    Distinct pairs of term degrees can land on the same total degree (that
    is exactly the situation the degree constraints l + p = m + s create),
    so colliding contributions are added weightwise.
    """
    by_degree: dict = {}
    for ta in _as_terms(a):
        for tb in _as_terms(b):
            c = commutator(ta, tb)
            if c.degree in by_degree:
                by_degree[c.degree] = add_shifts(by_degree[c.degree], c)
            else:
                by_degree[c.degree] = c
    return ShiftSum(tuple(by_degree[d] for d in sorted(by_degree)))


# ---------------------------------------------------------------------------
# Action, matrices, norms
# ---------------------------------------------------------------------------

def apply(op: Operator, coeffs: Sequence[complex]) -> np.ndarray:
    """Apply an operator to a finite coefficient vector sum_k c_k z^k."""
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise PreconditionError("coefficient vector must be non-empty 1-d")
    if isinstance(op, WeightedShift):
        if c.size - 1 > op.k_max:
            raise TruncationError(
                f"coefficient length {c.size} exceeds materialized weights (k_max={op.k_max})"
            )
        out = np.zeros(c.size + op.degree, dtype=complex)
        out[op.degree:] = op.weights[: c.size] * c
        return out
    max_deg = max(t.degree for t in op.terms)
    out = np.zeros(c.size + max_deg, dtype=complex)
    for t in op.terms:
        part = apply(t, c)
        out[: part.size] += part
    return out


def matrix(op: Operator, size: int) -> np.ndarray:
    """The truncated size x size matrix, entries M[k+p, k] = w(k)."""
    if size < 1:
        raise PreconditionError("matrix size must be positive")
    out = np.zeros((size, size), dtype=complex)
    for t in _as_terms(op):
        if size - 1 > t.k_max:
            raise TruncationError(f"matrix size {size} exceeds k_max = {t.k_max}")
        for k in range(size - t.degree):
            out[k + t.degree, k] += t.weights[k]
    return out


def operator_norm_estimate(op: WeightedShift) -> float:
    """Operator norm of the shift restricted to the truncation.

    The basis is orthogonal, not orthonormal, so the norm of the rank-one
    piece z^k -> w(k) z^{k+p} is |w(k)| sqrt((k+1)/(k+p+1)); a weighted
    shift's norm is the supremum over k.
    """
    ks = np.arange(op.k_max + 1, dtype=float)
    factors = np.sqrt((ks + 1.0) / (ks + op.degree + 1.0))
    return float(np.max(np.abs(op.weights) * factors))


# ---------------------------------------------------------------------------
# Projection quadrature oracle
# ---------------------------------------------------------------------------

def brute_force_toeplitz(degree: int, radial: RadialSymbol, k: int,
                         quad_tol: float = 1e-12) -> float:
    """Shift weight recomputed as a Bergman projection inner product.

    Evaluates <e^{ip.} phi(r) r^k e^{ik.}, z^{k+p}> / ||z^{k+p}||^2 by
    radial quadrature; the angular integral kills every basis index except
    k+p, leaving 2(k+p+1) integral_0^1 phi(r) r^{2k+p+1} dr.  The radial
    part is evaluated pointwise whatever its variant, so this route never
    touches the closed-form transform and can serve as its oracle.
    """
    if degree < 0 or k < 0:
        raise PreconditionError("degree and basis index must be non-negative")
    if not quad_tol > 0.0:
        raise PreconditionError("quad_tol must be positive")
    exponent = 2 * k + degree + 1

    def integrand(r: float) -> float:
        return radial(r) * r**exponent

    integral = adaptive_quadrature(integrand, 0.0, 1.0, quad_tol)
    return 2.0 * (k + degree + 1) * integral


# ---------------------------------------------------------------------------
# CSV export (full precision, reload-exact)
# ---------------------------------------------------------------------------

def _format_entry(v: complex) -> str:
    if v.imag == 0.0:
        return format(v.real, ".17e")
    return f"({format(v.real, '.17e')}{format(v.imag, '+.17e')}j)"


def write_matrix_csv(m: np.ndarray, path_or_file) -> None:
    """Write a matrix row-major in full-precision scientific notation."""
    m = np.asarray(m, dtype=complex)
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        for row in m:
            writer.writerow([_format_entry(complex(v)) for v in row])
    finally:
        if own:
            fh.close()


def read_matrix_csv(path_or_file) -> np.ndarray:
    """Reload a matrix written by :func:`write_matrix_csv`, entrywise exact."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "r", newline="") if own else path_or_file
    try:
        rows = [[complex(cell) for cell in row] for row in csv.reader(fh)]
    finally:
        if own:
            fh.close()
    return np.array(rows, dtype=complex)
