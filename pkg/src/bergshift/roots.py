"""Degree-1 roots of degree-p monomial-symbol shifts.

The degree-p shift with symbol e^{ip theta} r^n has, for p >= 2, a
quasihomogeneous degree-1 p-th root whose radial symbol is known only
through its transform values on the odd grid 2k+3:

    f_hat(2k+3) = B((2k+4)/(2p), 1 - 1/p) * B((2k+p+n+2)/(2p), 1/p),

up to one multiplicative constant.  The Gamma-recurrence ladder telescopes
under p-fold composition, so the calibrated root's p-th power reproduces
the target weight 2(k+p+1)/(2k+p+n+2) at every k; :func:`verify_root`
checks exactly that on a truncated basis and is treated as the ground
truth for each (p, n) rather than assuming the formula blindly.

The constant is fixed by matching the k = 0 weight of the p-th power to
the target and taking the positive real p-th root, which makes the
construction deterministic.  For p = 1 the Beta formula degenerates (its
second argument hits the Gamma pole at 0) and the first root is the
operator itself.

The radial symbol of the root is never reconstructed as a function of r;
the grid values are all the shift action requires, and they determine the
symbol uniquely because the grid satisfies the uniqueness condition of
:func:`bergshift.mellin.muntz_szasz_check`.  Inverse transforms are out of
scope.  Pure functions, immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CalibrationError, PreconditionError, RootOrderError, TruncationError
from .mellin import Monomial
from .operators import WeightedShift, power, shift_from_symbol
from .special import beta

__all__ = [
    "RootSpec",
    "root_weight_raw",
    "calibrate_root",
    "build_root",
    "root_mellin_grid",
    "RootVerification",
    "verify_root",
]


@dataclass(frozen=True)
class RootSpec:
    """Parameters of a root construction: target degree p, exponent n.

    ``calibration`` is the multiplicative constant applied to the raw Beta
    weights; None means 'compute it on demand'.
    """

    p: int
    n: int
    k_max: int = 256
    calibration: Optional[float] = None

    def __post_init__(self):
        if self.p < 1:
            raise PreconditionError("root target degree p must be >= 1")
        if self.n < 1:
            raise PreconditionError("monomial exponent n must be >= 1")
        if self.k_max < self.p:
            raise PreconditionError("k_max must be at least p")
        if self.calibration is not None and self.calibration == 0:
            raise PreconditionError("calibration must be nonzero")


def root_weight_raw(p: int, n: int, k: int) -> float:
    """Raw (uncalibrated) transform value f_hat(2k+3) of the root symbol."""
    if p < 2:
        raise RootOrderError(
            "the Beta weight formula needs p >= 2; the first root is the operator itself"
        )
    if n < 1 or k < 0:
        raise PreconditionError("need n >= 1 and k >= 0")
    return beta((2 * k + 4) / (2 * p), 1.0 - 1.0 / p) * beta(
        (2 * k + p + n + 2) / (2 * p), 1.0 / p
    )


def calibrate_root(spec: RootSpec) -> float:
    """The positive constant making the p-th power match the target at k = 0.

    The target weight at k = 0 is 2(p+1)/(p+n+2); the returned gamma scales
    the raw degree-1 weights so that the composed k = 0 weight equals it.
    """
    if spec.p == 1:
        return 1.0
    target = 2.0 * (spec.p + 1) / (spec.p + spec.n + 2)
    raw = 1.0
    for j in range(spec.p):
        raw *= 2.0 * (j + 2) * root_weight_raw(spec.p, spec.n, j)
    if not (math.isfinite(raw) and raw > 0.0):
        raise CalibrationError(f"raw k=0 composed weight {raw} is unusable")
    return (target / raw) ** (1.0 / spec.p)


def root_mellin_grid(p: int, n: int, count: int,
                     calibration: Optional[float] = None) -> np.ndarray:
    """Calibrated grid values f_hat(2k+3), k < count, of the root symbol.

    For p = 1 the root is the operator itself and the grid is the monomial
    transform 1/(2k+3+n).
    """
    if count < 1:
        raise PreconditionError("count must be positive")
    ks = np.arange(count, dtype=float)
    if p == 1:
        return 1.0 / (2 * ks + 3 + n)
    if calibration is None:
        calibration = calibrate_root(RootSpec(p, n, k_max=max(p, count)))
    raw = np.array([root_weight_raw(p, n, k) for k in range(count)])
    return calibration * raw


def build_root(spec: RootSpec) -> WeightedShift:
    """The calibrated degree-1 root shift with weight 2(k+2) f_hat(2k+3)."""
    if spec.p == 1:
        base = shift_from_symbol(1, Monomial(spec.n), spec.k_max)
        return WeightedShift(1, base.weights, provenance="root")
    gamma = spec.calibration if spec.calibration is not None else calibrate_root(spec)
    grid = root_mellin_grid(spec.p, spec.n, spec.k_max + 1, calibration=gamma)
    ks = np.arange(spec.k_max + 1, dtype=float)
    return WeightedShift(1, 2.0 * (ks + 2) * grid, provenance="root")


@dataclass(frozen=True)
class RootVerification:
    p: int
    n: int
    k_checked: int
    tol: float
    calibration: float
    max_rel_deviation: float
    passed: bool


def verify_root(spec: RootSpec, k_checked: int, tol: float = 1e-10) -> RootVerification:
    """Compare the p-th power of the built root against the target shift.

    Passes when the weights agree to relative deviation < tol for every
    k <= k_checked.
    """
    if k_checked > spec.k_max - spec.p:
        raise TruncationError(
            f"verification to k = {k_checked} needs k_max >= {k_checked + spec.p}"
        )
    gamma = spec.calibration if spec.calibration is not None else calibrate_root(spec)
    root = build_root(RootSpec(spec.p, spec.n, spec.k_max, calibration=gamma))
    composed = power(root, spec.p)
    target = shift_from_symbol(spec.p, Monomial(spec.n), k_checked)
    got = composed.weights[: k_checked + 1].real
    want = target.weights.real
    max_dev = float(np.max(np.abs(got - want) / np.abs(want)))
    return RootVerification(
        p=spec.p,
        n=spec.n,
        k_checked=k_checked,
        tol=tol,
        calibration=float(gamma),
        max_rel_deviation=max_dev,
        passed=bool(max_dev < tol),
    )
