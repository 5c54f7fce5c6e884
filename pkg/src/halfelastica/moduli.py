"""Algebraic layer of the moduli space of curves with periodic non-constant
Blaschke invariant.

A modulus is a pair (lambda, e2) with e2 > 0 and e2^4 + 2*lambda*e2^3 + 1 < 0.
Each modulus determines a quartic

    Q(x) = x^4 + 4*lambda*x^3 + 4*(lambda^2 - c)*x^2 - 1

with roots e1 > e2 > e3 > 0 > e4, where c is the squared Minkowski norm of
the conserved momentum.  The sign of c splits the moduli space into the
space-like region S, the light-like curve L and the time-like region T; T is
further split by the exceptional locus E (where 1 + 4*c*e1^2 = 0) into a
lower part T- and an upper part T+.

Root finding follows two independent routes: the reference path solves the
cubic satisfied by e1 with a companion-matrix eigensolve (numpy.roots) plus
Newton polish, while :func:`cardano_e1` evaluates the closed-form Cardano
solution of the same cubic with principal-branch complex radicals.  The two
are cross-checked in the test suite; closed forms alone are branch-fragile
near double roots.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, OutsideModuliSpaceError

__all__ = [
    "LAMBDA_CRITICAL",
    "LAMBDA_EXCEPTIONAL",
    "GOLDEN_RATIO",
    "Region",
    "ModulusPoint",
    "QuarticData",
    "LocusFunctions",
    "boundary_quartic",
    "in_moduli_space",
    "eta_pm",
    "b0",
    "a_lower",
    "chi",
    "cardano_e1",
    "roots_from_modulus",
    "reconstruct_lambda_c",
    "exceptional_residual",
    "radial_degeneracy",
    "classify_region",
    "exceptional_c",
    "locus_functions",
]

GOLDEN_RATIO = 0.5 * (1.0 + math.sqrt(5.0))

# Multipliers >= -2/27^(1/4) admit no periodic non-constant curvature at all.
LAMBDA_CRITICAL = -2.0 / 27.0**0.25

# The exceptional locus exists only for multipliers below -phi^(5/4)/2.
LAMBDA_EXCEPTIONAL = -(GOLDEN_RATIO**1.25) / 2.0

# e2-height of the exceptional locus at its right endpoint.
E2_EXCEPTIONAL_MIN = GOLDEN_RATIO**0.25

_REGION_TOL = 1e-9


class Region(enum.Enum):
    """Region tag of a point of the (lambda, e2) plane."""

    S = "S"
    L = "L"
    T_MINUS = "T-"
    E = "E"
    T_PLUS = "T+"
    BOUNDARY_MINUS = "B-"
    BOUNDARY_PLUS = "B+"
    OUTSIDE = "Outside"


_TIMELIKE = frozenset({Region.T_MINUS, Region.E, Region.T_PLUS})
_INTERIOR = frozenset({Region.S, Region.L}) | _TIMELIKE


@dataclass(frozen=True)
class ModulusPoint:
    """A point (lambda, e2) of the moduli space with its region tag."""

    lam: float
    e2: float
    region: Region

    @property
    def in_moduli_space(self) -> bool:
        return self.region in _INTERIOR

    @property
    def timelike(self) -> bool:
        return self.region in _TIMELIKE


@dataclass(frozen=True)
class QuarticData:
    """Roots e1 > e2 > e3 > 0 > e4 of the conserved quartic and the causal
    constant c (squared momentum norm)."""

    e1: float
    e2: float
    e3: float
    e4: float
    c: float

    @property
    def roots(self) -> tuple[float, float, float, float]:
        return (self.e1, self.e2, self.e3, self.e4)

    def quartic(self, x):
        """Evaluate Q(x) from the conservation-law coefficients."""
        lam, _ = reconstruct_lambda_c(self.e1, self.e2)
        return quartic_value(lam, self.c, x)


@dataclass(frozen=True)
class LocusFunctions:
    """Bundle of the boundary and locus heights at a fixed multiplier."""

    eta_minus: float
    eta_plus: float
    a_lower: float
    b0: float | None
    c_exc: float | None
    chi: float


def boundary_quartic(lam: float, x):
    """The boundary quartic x^4 + 2*lambda*x^3 + 1 whose negativity defines
    the moduli space."""
    return x**4 + 2.0 * lam * x**3 + 1.0


def quartic_value(lam: float, c: float, x):
    """The conserved quartic Q(x) = x^4 + 4 lam x^3 + 4 (lam^2 - c) x^2 - 1."""
    return x**4 + 4.0 * lam * x**3 + 4.0 * (lam * lam - c) * x**2 - 1.0


def in_moduli_space(lam: float, e2: float) -> bool:
    """Strict interior test: e2 > 0 and the boundary quartic is negative."""
    return e2 > 0.0 and boundary_quartic(lam, e2) < 0.0


def eta_pm(lam: float) -> tuple[float, float]:
    """The two positive roots eta- <= eta+ of the boundary quartic.

    They are the saddle and center heights of the curvature phase portrait;
    they merge at 3^(1/4) when lam reaches the critical multiplier, above
    which there are no equilibria at all.
    """
    if lam > LAMBDA_CRITICAL:
        raise DomainError(
            f"lambda={lam!r} above the critical multiplier {LAMBDA_CRITICAL!r}: "
            "the boundary quartic has no real roots"
        )
    if lam > LAMBDA_CRITICAL - 1e-13:
        r = 3.0**0.25
        return (r, r)
    # P has its minimum at -3 lam / 2; bracket each root on one side of it.
    x_min = -1.5 * lam
    lo = brentq(lambda x: boundary_quartic(lam, x), 1e-12, x_min,
                xtol=1e-15, rtol=8.9e-16)
    hi_cap = max(-2.0 * lam + 1.0, 2.0)
    hi = brentq(lambda x: boundary_quartic(lam, x), x_min, hi_cap,
                xtol=1e-15, rtol=8.9e-16)
    # one Newton step to polish
    for _ in range(2):
        lo -= boundary_quartic(lam, lo) / (4.0 * lo**3 + 6.0 * lam * lo**2)
        hi -= boundary_quartic(lam, hi) / (4.0 * hi**3 + 6.0 * lam * hi**2)
    return (lo, hi)


def b0(lam: float) -> float:
    """Height of the light-like locus L: the larger root of e^2 + 2 lam e + 1."""
    if lam > -1.0:
        raise DomainError(f"the light-like locus requires lambda <= -1, got {lam!r}")
    return -lam + math.sqrt(lam * lam - 1.0)


def a_lower(lam: float) -> float:
    """Lower boundary of the time-like region at multiplier lam.

    For lam <= -1 this is the light-like height b0(lam); for larger
    multipliers it is the saddle height eta-(lam).  The two branches agree
    at lam = -1 where both equal 1.
    """
    if lam > LAMBDA_CRITICAL:
        raise DomainError(f"lambda={lam!r} above the critical multiplier")
    if lam <= -1.0:
        return math.sqrt(lam * lam - 1.0) - lam
    return eta_pm(lam)[0]


def chi(lam: float) -> float:
    """Limit value of the period map at the center boundary.

    chi(lam) = (eta+^4 - 1) / sqrt(eta+^8 - 4 eta+^4 + 3); it is strictly
    increasing, tends to 1 as lam -> -inf and diverges at the critical
    multiplier where eta+^4 -> 3.
    """
    eta = eta_pm(lam)[1]
    q4 = eta**4
    if q4 <= 3.0:
        raise DomainError("chi undefined: eta+^4 <= 3 at the critical multiplier")
    return math.sqrt((q4 - 1.0) / (q4 - 3.0))


def _e1_cubic_coeffs(lam: float, e2: float) -> tuple[float, float, float, float]:
    # e1 is the unique real root > e2 of  e2^2 x^3 + (e2^3 + 4 e2^2 lam) x^2 + x + e2.
    return (e2 * e2, e2**3 + 4.0 * lam * e2 * e2, 1.0, e2)


def _e1_newton_polish(lam: float, e2: float, x: float, steps: int = 3) -> float:
    a3, a2, a1, a0 = _e1_cubic_coeffs(lam, e2)
    for _ in range(steps):
        f = ((a3 * x + a2) * x + a1) * x + a0
        fp = (3.0 * a3 * x + 2.0 * a2) * x + a1
        if fp == 0.0:
            break
        x -= f / fp
    return x


def cardano_e1(lam: float, e2: float) -> float:
    """Closed-form largest root of the cubic satisfied by e1.

    Standard Cardano solution with principal-branch complex radicals (branch
    cut along the negative real axis); cross-check path for the
    companion-matrix route.
    """
    a3, a2, a1, a0 = _e1_cubic_coeffs(lam, e2)
    b = a2 / a3
    c = a1 / a3
    d = a0 / a3
    p = c - b * b / 3.0
    q = (2.0 * b**3 - 9.0 * b * c + 27.0 * d) / 27.0
    disc = 0.25 * q * q + p**3 / 27.0
    if disc <= 0.0:
        # three real roots; the principal cube root of -q/2 + i sqrt(-disc)
        # has the smallest argument and yields the largest root
        z = complex(-0.5 * q, math.sqrt(-disc))
        t = 2.0 * (z ** (1.0 / 3.0)).real
    else:
        s = math.sqrt(disc)
        t = math.copysign(abs(-0.5 * q + s) ** (1.0 / 3.0), -0.5 * q + s)
        t += math.copysign(abs(-0.5 * q - s) ** (1.0 / 3.0), -0.5 * q - s)
    return t - b / 3.0


def _e1_companion(lam: float, e2: float) -> float:
    roots = np.roots(_e1_cubic_coeffs(lam, e2))
    real = [r.real for r in roots if abs(r.imag) <= 1e-8 * max(1.0, abs(r))]
    candidates = [r for r in real if r > e2]
    if not candidates:
        # fall back to the largest real root; the in-moduli-space check of the
        # caller guarantees one is > e2 up to rounding
        candidates = [max(real)]
    return _e1_newton_polish(lam, e2, max(candidates))


def _unpack_point(p, e2=None) -> tuple[float, float]:
    if e2 is not None:
        return float(p), float(e2)
    if isinstance(p, ModulusPoint):
        return p.lam, p.e2
    lam, e2 = p
    return float(lam), float(e2)


def roots_from_modulus(p, e2=None) -> QuarticData:
    """Quartic data (e1, e2, e3, e4, c) of a modulus point.

    Accepts a ModulusPoint, a (lambda, e2) pair, or two scalars.  e1 comes
    from the companion-matrix reference path with Newton polish; e3, e4 and c
    follow from the closed root relations.
    """
    lam, e2v = _unpack_point(p, e2)
    if not in_moduli_space(lam, e2v):
        raise OutsideModuliSpaceError(
            f"(lambda, e2) = ({lam!r}, {e2v!r}) is outside the moduli space"
        )
    e1 = _e1_companion(lam, e2v)
    s = math.sqrt(4.0 * e1**3 * e2v**3 + (e1 + e2v) ** 2)
    e3 = (e1 + e2v + s) / (2.0 * e1 * e1 * e2v * e2v)
    e4 = -2.0 * e1 * e2v / (e1 + e2v + s)
    _, c = reconstruct_lambda_c(e1, e2v)
    return QuarticData(e1=e1, e2=e2v, e3=e3, e4=e4, c=c)


def reconstruct_lambda_c(e1: float, e2: float) -> tuple[float, float]:
    """Multiplier and causal constant from the two largest quartic roots."""
    lam = -(e1**3 * e2**2 + e1**2 * e2**3 + e1 + e2) / (4.0 * e1**2 * e2**2)
    c = (
        e1**4 * e2**4 * (e1 - e2) ** 2
        - 2.0 * e1**2 * e2**2 * (e1**2 + e2**2)
        + (e1 + e2) ** 2
    ) / (16.0 * e1**4 * e2**4)
    return lam, c


def exceptional_residual(e1: float, e2: float) -> float:
    """Signed distance surrogate for the exceptional locus.

    T = e1^2 e2^3 - e1^3 e2^2 + e1 + e2 vanishes exactly on the locus, is
    negative below it and positive above it.
    """
    return e1 * e1 * e2**3 - e1**3 * e2 * e2 + e1 + e2


def radial_degeneracy(e1: float, e2: float) -> float:
    """1 + 4 c e1^2, evaluated as T^2 / (4 e1^2 e2^4).

    The direct form loses all digits near the exceptional locus where the
    quantity has a tangential (quadratic) zero; the factored form keeps full
    relative accuracy.
    """
    t = exceptional_residual(e1, e2)
    return t * t / (4.0 * e1 * e1 * e2**4)


def classify_region(lam: float, e2: float, tol: float = _REGION_TOL) -> ModulusPoint:
    """Total region classification of a (lambda, e2) pair.

    Points within ``tol`` (absolute, on the defining polynomial) of the
    light-like curve or of the exceptional locus are tagged to the locus,
    since the downstream parameterizations switch branch there.
    """
    lam = float(lam)
    e2 = float(e2)
    if e2 <= 0.0:
        return ModulusPoint(lam, e2, Region.OUTSIDE)
    pval = boundary_quartic(lam, e2)
    if abs(pval) <= tol:
        tag = Region.BOUNDARY_MINUS if e2 < 3.0**0.25 else Region.BOUNDARY_PLUS
        return ModulusPoint(lam, e2, tag)
    if pval > 0.0:
        return ModulusPoint(lam, e2, Region.OUTSIDE)
    t2 = e2 * e2 + 2.0 * lam * e2 + 1.0
    if abs(t2) <= tol:
        return ModulusPoint(lam, e2, Region.L)
    if t2 < 0.0:
        return ModulusPoint(lam, e2, Region.S)
    if lam < LAMBDA_EXCEPTIONAL:
        qd = roots_from_modulus((lam, e2))
        if radial_degeneracy(qd.e1, e2) <= tol:
            return ModulusPoint(lam, e2, Region.E)
        if exceptional_residual(qd.e1, e2) < 0.0:
            return ModulusPoint(lam, e2, Region.T_MINUS)
        return ModulusPoint(lam, e2, Region.T_PLUS)
    return ModulusPoint(lam, e2, Region.T_PLUS)


def exceptional_c(lam: float) -> float:
    """e2-height of the exceptional locus at multiplier lam.

    Seeds with the closed-form Cardano solution of the defining cubic
    4 lam^2 e^3 + 8 lam^3 e^2 + e - 2 lam = 0 (the e1 = -2 lam slice of the
    locus), then refines with a bracketed solve of the signed residual T,
    whose zero is simple; the degeneracy 1 + 4 c e1^2 itself has a double
    zero and converges too slowly for direct iteration.
    """
    if not lam < LAMBDA_EXCEPTIONAL:
        raise DomainError(
            f"the exceptional locus requires lambda < {LAMBDA_EXCEPTIONAL!r}, "
            f"got {lam!r}"
        )
    lam4 = lam**4
    rad = 256.0 * lam4**2 - 176.0 * lam4 - 1.0
    a = (9.0 - 8.0 * lam4) / (27.0 * lam)
    bb = math.sqrt(max(rad, 0.0)) / (24.0 * math.sqrt(3.0) * abs(lam) ** 3)
    seed = -2.0 * lam / 3.0 + 2.0 * (complex(a, bb) ** (1.0 / 3.0)).real

    def resid(e2: float) -> float:
        qd = roots_from_modulus((lam, e2))
        return exceptional_residual(qd.e1, e2)

    a_lo, eta_hi = a_lower(lam), eta_pm(lam)[1]
    span = eta_hi - a_lo
    lo_cap = a_lo + 1e-9 * span
    hi_cap = eta_hi - 1e-9 * span
    seed = min(max(seed, lo_cap), hi_cap)
    lo = max(seed - 1e-3 * span, lo_cap)
    hi = min(seed + 1e-3 * span, hi_cap)
    for _ in range(60):
        if resid(lo) < 0.0 < resid(hi):
            break
        lo = max(lo - 2e-2 * span, lo_cap)
        hi = min(hi + 2e-2 * span, hi_cap)
    else:
        raise DomainError(f"could not bracket the exceptional height at lambda={lam!r}")
    value = brentq(resid, lo, hi, xtol=1e-15, rtol=8.9e-16)
    qd = roots_from_modulus((lam, value))
    if radial_degeneracy(qd.e1, value) > 1e-9:
        raise DomainError(
            f"exceptional height refinement failed at lambda={lam!r}"
        )
    return value


def locus_functions(lam: float) -> LocusFunctions:
    """All locus heights at a multiplier, with None where undefined."""
    em, ep = eta_pm(lam)
    return LocusFunctions(
        eta_minus=em,
        eta_plus=ep,
        a_lower=a_lower(lam),
        b0=b0(lam) if lam <= -1.0 else None,
        c_exc=exceptional_c(lam) if lam < LAMBDA_EXCEPTIONAL else None,
        chi=chi(lam),
    )
