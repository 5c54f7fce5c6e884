"""The period map on the time-like moduli region and everything built on it:
closed-form elliptic evaluation, an independent quadrature oracle, interval
of admissible characteristic numbers, closed-string search for rational
characteristic numbers, fiber endpoints and tracing, and the geometric
invariants of the isomonodromic families.

The period map is the offset-normalized rotation number

    P = -Theta(omega)/(2 pi) + (1 on T-, 1/2 on E, 0 on T+),

and a time-like curve closes exactly when P is rational, q = m/n in lowest
terms, with n the wave number (order of the rotational symmetry group) and
m the hyperbolic turning number.

Numerical posture near the exceptional locus: the coefficient B and the
characteristic n1 of the closed form blow up like 1/(e2 - e_hat), through
the factor kappa1 = 1 - 2 sqrt|c| e1 which has a tangential zero there.
kappa1, and the companion small factor 1 + 4 lambda sqrt|c|, are therefore
evaluated through the signed locus residual T = e1^2 e2^3 - e1^3 e2^2 + e1
+ e2 (exact cancellation pulled out algebraically), never by direct
subtraction.  The quadrature oracle uses the same factorization inside its
integrand, with exact node distances supplied by the tanh-sinh driver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from . import ellint
from .dynamics import elliptic_arguments, wavelength
from .ellint import _tanh_sinh
from .errors import (
    BracketError,
    CharacteristicIntervalError,
    DomainError,
    QuadratureError,
    RegionError,
)
from .moduli import (
    LAMBDA_CRITICAL,
    LAMBDA_EXCEPTIONAL,
    ModulusPoint,
    QuarticData,
    Region,
    _unpack_point,
    a_lower,
    chi,
    classify_region,
    eta_pm,
    exceptional_c,
    exceptional_residual,
    radial_degeneracy,
    roots_from_modulus,
)

__all__ = [
    "EllipticCoeffs",
    "StringRecord",
    "FamilyInvariants",
    "FiberTrace",
    "elliptic_coeffs",
    "b_plus_c_closed_form",
    "coefficient_identity_residuals",
    "period_map",
    "period_map_oracle",
    "divergent_term",
    "j_interval",
    "find_string",
    "string_candidates",
    "fiber_endpoint",
    "trace_fiber",
    "family_invariants",
    "monotonicity_transition",
    "r_term",
]

_TIMELIKE = (Region.T_MINUS, Region.E, Region.T_PLUS)


@dataclass(frozen=True)
class EllipticCoeffs:
    """Arguments of the closed-form period integral.

    ``valid_n1B`` is False exactly on the exceptional locus, where n1 and B
    diverge and the exceptional reduction (without the B term) applies.
    """

    g: float
    m: float
    n1: float | None
    n2: float
    A: float
    B: float | None
    C: float
    valid_n1B: bool


@dataclass(frozen=True)
class FamilyInvariants:
    """Global invariants of the isomonodromic family of one rational q.

    ``limit_radius`` is the disk radius of the terminal circle the family
    contracts onto: the circle of curvature e*^2, with disk radius
    1/(e*^2 + sqrt(e*^4 - 1)).  ``limit_wavelength`` is the terminal value
    of the wavelength, 4 q pi r/(1 - r^2), which equals the linearized
    center period 2 pi / sqrt(e*^4 - 3); the string's total length tends to
    the wave number times that (m wraps of the terminal circle).
    """

    wave_number: int
    turning_number: int
    punctured_class: int
    isotopy_classes: int
    limit_radius: float
    limit_wavelength: float
    limit_length: float


@dataclass(frozen=True)
class StringRecord:
    """A closed time-like curve found on a rational fiber."""

    q_num: int
    q_den: int
    modulus: ModulusPoint
    wavelength: float
    length: float
    wave_number: int
    turning_number: int
    punctured_class: int
    isotopy_classes: int
    period_value: float

    @property
    def q(self) -> Fraction:
        return Fraction(self.q_num, self.q_den)


@dataclass(frozen=True)
class FiberTrace:
    """Polyline approximation of one rational fiber of the period map."""

    q_num: int
    q_den: int
    points: tuple[ModulusPoint, ...]
    crossing: ModulusPoint | None


def _resolve_timelike(p, e2=None) -> ModulusPoint:
    """Resolve an input to a time-like modulus by the strict sign tests.

    The tolerance tagging of classify_region widens to square-root scale at
    the corner multiplier -1 where the light-like polynomial has a double
    root; the period map is defined on the open strict-sign region, so the
    space/light-like decision here is exact, with only the exceptional
    sub-tag keeping its tolerance (the closed form branches there).
    """
    if isinstance(p, ModulusPoint) and e2 is None:
        lam, e2v = p.lam, p.e2
        if p.region in _TIMELIKE:
            return p
    else:
        lam, e2v = _unpack_point(p, e2)
    from .moduli import in_moduli_space, radial_degeneracy

    t2 = e2v * e2v + 2.0 * lam * e2v + 1.0
    if not in_moduli_space(lam, e2v) or t2 <= 0.0:
        raise RegionError(
            f"period-map operations require a time-like modulus, got "
            f"({lam}, {e2v})"
        )
    if lam < LAMBDA_EXCEPTIONAL:
        qd = roots_from_modulus((lam, e2v))
        if radial_degeneracy(qd.e1, e2v) <= 1e-9:
            return ModulusPoint(lam, e2v, Region.E)
        if exceptional_residual(qd.e1, e2v) < 0.0:
            return ModulusPoint(lam, e2v, Region.T_MINUS)
    return ModulusPoint(lam, e2v, Region.T_PLUS)


def _stable_small_factors(qd: QuarticData) -> tuple[float, float, float]:
    """(sqrt|c|, kappa1, 1 + 4 lam sqrt|c|) without catastrophic cancellation.

    Uses 1 - p^2 = 4|c| e1^2 with p = T/(2 e1 e2^2) and the factored
    tangential zero 1 + 4 c e1^2 = T^2/(4 e1^2 e2^4).
    """
    e1, e2 = qd.e1, qd.e2
    t = exceptional_residual(e1, e2)
    p_hat = t / (2.0 * e1 * e2 * e2)
    # 1 - p^2 = 4 |c| e1^2; both factors are far from zero in the interior
    one_minus_p2 = (1.0 - p_hat) * (1.0 + p_hat)
    sc = math.sqrt(max(one_minus_p2, 0.0)) / (2.0 * e1)
    w1p = 1.0 + 2.0 * sc * e1
    kappa1 = radial_degeneracy(e1, e2) / w1p
    q_hat = (e1 + e2) * (1.0 + e1 * e1 * e2 * e2)
    w = q_hat / (2.0 * e1**3 * e2 * e2)
    num = t * (-(2.0 * e1**3 * e2 * e2 + q_hat)
               + q_hat * q_hat * t / (4.0 * e1 * e1 * e2**4)) / (4.0 * e1**6 * e2**4)
    u = num / (1.0 + w * math.sqrt(max(1.0 - p_hat * p_hat, 0.0)))
    return sc, kappa1, u


def elliptic_coeffs(p, e2=None) -> EllipticCoeffs:
    """Closed-form coefficients (g, m, n1, n2, A, B, C) of a time-like
    modulus; n1 and B are withheld on the exceptional locus where they
    diverge."""
    point = _resolve_timelike(p, e2)
    qd = roots_from_modulus((point.lam, point.e2))
    return _coeffs_from_quartic(point, qd)


def _coeffs_from_quartic(point: ModulusPoint, qd: QuarticData,
                         force_general: bool = False) -> EllipticCoeffs:
    lam = point.lam
    e1, e2v, e3, e4 = qd.roots
    _, m, _, g = elliptic_arguments(qd)
    sc, kappa1, u = _stable_small_factors(qd)
    w1p = 1.0 + 2.0 * sc * e1
    w4m = 1.0 - 2.0 * sc * e4
    w4p = 1.0 + 2.0 * sc * e4
    n2 = (w4p * (e2v - e1)) / (w1p * (e2v - e4))
    a_coeff = -g * e4 * (e4 + 2.0 * lam) / (w4m * w4p)
    c_coeff = g * (1.0 - 4.0 * lam * sc) * (e1 - e4) / (4.0 * sc * w4p * w1p)
    on_locus = point.region is Region.E and not force_general
    if on_locus or kappa1 == 0.0:
        return EllipticCoeffs(g=g, m=m, n1=None, n2=n2, A=a_coeff, B=None,
                              C=c_coeff, valid_n1B=False)
    n1 = (w4m * (e2v - e1)) / (kappa1 * (e2v - e4))
    b_coeff = -g * u * (e1 - e4) / (4.0 * sc * w4m * kappa1)
    return EllipticCoeffs(g=g, m=m, n1=n1, n2=n2, A=a_coeff, B=b_coeff,
                          C=c_coeff, valid_n1B=True)


def b_plus_c_closed_form(p, e2=None) -> float:
    """Closed form of B + C (finite even where B and C individually are
    large with opposite signs)."""
    point = _resolve_timelike(p, e2)
    qd = roots_from_modulus((point.lam, point.e2))
    lam = point.lam
    e1, _, _, e4 = qd.roots
    c = qd.c
    _, _, _, g = elliptic_arguments(qd)
    num = g * (e1 - e4) * (e4 * (8.0 * c * lam * e1 - 1.0) - e1 - 2.0 * lam)
    den = radial_degeneracy(e1, qd.e2) * (1.0 + 4.0 * c * e4 * e4)
    return num / den


def coefficient_identity_residuals(p, e2=None) -> tuple[float, float]:
    """Residuals of the two algebraic identities satisfied by the
    coefficients: the partial-fraction sum identity and the B + C closed
    form.  Both should vanish to rounding off the exceptional locus."""
    point = _resolve_timelike(p, e2)
    qd = roots_from_modulus((point.lam, point.e2))
    co = _coeffs_from_quartic(point, qd)
    if not co.valid_n1B:
        raise RegionError("coefficient identities need the off-locus branch")
    lam = point.lam
    e2v = qd.e2
    lhs = co.A + co.B / (1.0 - co.n1) + co.C / (1.0 - co.n2)
    rhs = -co.g * e2v * (e2v + 2.0 * lam) / (1.0 + 4.0 * qd.c * e2v * e2v)
    q_resid = (lhs - rhs) / max(1.0, abs(rhs))
    bc = co.B + co.C
    bc_closed = b_plus_c_closed_form(point)
    bc_resid = (bc - bc_closed) / max(1.0, abs(bc_closed))
    return q_resid, bc_resid


def _offset(region: Region) -> float:
    return {Region.T_MINUS: 1.0, Region.E: 0.5, Region.T_PLUS: 0.0}[region]


def period_map(p, e2=None) -> float:
    """Closed-form period map value of a time-like modulus."""
    point = _resolve_timelike(p, e2)
    qd = roots_from_modulus((point.lam, point.e2))
    co = _coeffs_from_quartic(point, qd)
    sc = math.sqrt(-qd.c)
    k = ellint.complete_K(co.m)
    pi2 = ellint.complete_Pi(co.n2, co.m)
    if co.valid_n1B:
        pi1 = ellint.complete_Pi(co.n1, co.m)
        integral = (2.0 * sc / math.pi) * (co.A * k + co.B * pi1 + co.C * pi2)
    else:
        integral = (2.0 * sc / math.pi) * (co.A * k + co.C * pi2)
    return integral + _offset(point.region)


def divergent_term(p, e2=None) -> float:
    """The jump-carrying term (2 sqrt|c| / pi) B Pi(n1, m); it tends to
    -1/2 and +1/2 as the modulus approaches the exceptional locus from
    below and above.

    Always evaluated on the general branch (the analytic continuation off
    the locus), even when the point is close enough to be tagged to it.
    """
    point = _resolve_timelike(p, e2)
    qd = roots_from_modulus((point.lam, point.e2))
    co = _coeffs_from_quartic(point, qd, force_general=True)
    if not co.valid_n1B:
        raise RegionError("the divergent term is undefined exactly on the locus")
    sc = math.sqrt(-qd.c)
    return (2.0 * sc / math.pi) * co.B * ellint.complete_Pi(co.n1, co.m)


def period_map_oracle(p, e2=None, tol: float = 1e-12) -> float:
    """Independent period-map value by adaptive quadrature of the defining
    angular integral in the curvature variable.

    The near-locus denominator is rebuilt from the factored small quantities
    and the exact node distance to e1 supplied by the tanh-sinh driver.
    """
    point = _resolve_timelike(p, e2)
    qd = roots_from_modulus((point.lam, point.e2))
    lam = point.lam
    e1, e2v, e3, e4 = qd.roots
    sc, kappa1, _ = _stable_small_factors(qd)
    if point.region is Region.E:
        def integrand(x, da, db):
            return x / ((x - 2.0 * lam) * np.sqrt((x - e3) * (x - e4)))

        value, err, ok = _tanh_sinh(integrand, e2v, e1, tol, singular=(-0.5, -0.5))
        if not ok:
            raise QuadratureError("oracle quadrature failed on the locus",
                                  value=value, achieved=err)
        theta_omega = -16.0 * sc * lam * lam * value
    else:
        def integrand(x, da, db):
            denom = (kappa1 + 2.0 * sc * db) * (1.0 + 2.0 * sc * x)
            return x * (x + 2.0 * lam) / (denom * np.sqrt((x - e3) * (x - e4)))

        value, err, ok = _tanh_sinh(integrand, e2v, e1, tol, singular=(-0.5, -0.5))
        if not ok:
            raise QuadratureError("oracle quadrature failed", value=value,
                                  achieved=err)
        theta_omega = 4.0 * sc * value
    return -theta_omega / (2.0 * math.pi) + _offset(point.region)


def r_term(p, e2=None) -> float:
    """The bounded companion of the logarithmic divergence of the period
    integral near the lower boundary (arctan combination of the two
    characteristics)."""
    point = _resolve_timelike(p, e2)
    co = elliptic_coeffs(point)
    if not co.valid_n1B:
        raise RegionError("r_term needs the off-locus branch")

    def piece(n, coeff):
        return math.sqrt(-n) * math.atan(math.sqrt(-n)) / (1.0 - n) * coeff

    return piece(co.n1, co.B) + piece(co.n2, co.C)


def j_interval(lam: float) -> tuple[float, float]:
    """Open interval of characteristic numbers guaranteed to be attained by
    the period map at multiplier lam; (1, chi) for lam <= -1 and
    (chi, +inf) above."""
    if lam >= LAMBDA_CRITICAL:
        raise DomainError(f"lambda={lam!r} above the critical multiplier")
    x = chi(lam)
    if lam <= -1.0:
        return (1.0, x)
    return (x, math.inf)


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        frac = q
    elif isinstance(q, str):
        num, _, den = q.partition("/")
        frac = Fraction(int(num), int(den)) if den else Fraction(int(num), 1)
    elif isinstance(q, tuple):
        frac = Fraction(int(q[0]), int(q[1]))
    else:
        frac = Fraction(q)
    if frac <= 0:
        raise DomainError(f"characteristic number must be positive, got {frac}")
    return frac


def string_candidates(lam: float, q, n_scan: int = 512) -> list[float]:
    """All e2 heights on the multiplier slice where the period map crosses q.

    A full scan brackets every sign change before refinement; monotonicity
    of the slice is experimental and never assumed.
    """
    frac = _as_fraction(q)
    qv = float(frac)
    lo_int, hi_int = j_interval(lam)
    if not lo_int < qv < hi_int:
        raise CharacteristicIntervalError(
            f"q={frac} outside the admissible interval ({lo_int}, "
            f"{hi_int if math.isfinite(hi_int) else 'inf'}) at lambda={lam!r}",
            interval=(lo_int, hi_int),
        )
    a = a_lower(lam)
    eta_p = eta_pm(lam)[1]
    inset = 1e-7 * (eta_p - a)
    grid = np.linspace(a + inset, eta_p - inset, n_scan)
    vals = np.array([period_map((lam, e2)) - qv for e2 in grid])
    roots = []
    for i in range(len(grid) - 1):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            roots.append(float(grid[i]))
        elif va * vb < 0.0:
            roots.append(brentq(lambda e2: period_map((lam, e2)) - qv,
                                grid[i], grid[i + 1], xtol=1e-14,
                                rtol=8.9e-16))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    if not roots:
        raise BracketError(
            f"no period-map crossing of q={frac} found on the slice "
            f"lambda={lam!r} after a {n_scan}-point scan"
        )
    return roots


def family_invariants(q, p: ModulusPoint) -> FamilyInvariants:
    """Wave/turning numbers, homotopy class in the punctured disk, isotopy
    count, and the terminal circle data of the family of q."""
    frac = _as_fraction(q)
    m, n = frac.numerator, frac.denominator
    region = p.region if isinstance(p, ModulusPoint) else classify_region(*p).region
    punctured = m - n if region is Region.T_MINUS else m
    j = (n + (n % 2)) // 2 - (1 if n == 1 else 0)
    _, e_star = fiber_endpoint(frac)
    r_q = 1.0 / (e_star * e_star + math.sqrt(e_star**4 - 1.0))
    limit_wavelength = 4.0 * float(frac) * math.pi * r_q / (1.0 - r_q * r_q)
    return FamilyInvariants(
        wave_number=n,
        turning_number=m,
        punctured_class=punctured,
        isotopy_classes=2 * j + 1,
        limit_radius=r_q,
        limit_wavelength=limit_wavelength,
        limit_length=n * limit_wavelength,
    )


def find_string(lam: float, q, n_scan: int = 512) -> StringRecord:
    """Locate the canonical closed curve with characteristic number q on the
    multiplier slice; the smallest crossing height is canonical, all
    crossings are discoverable through :func:`string_candidates`."""
    frac = _as_fraction(q)
    e2 = string_candidates(lam, frac, n_scan)[0]
    point = classify_region(lam, e2)
    pval = period_map(point)
    if abs(pval - float(frac)) > 1e-9:
        raise BracketError(
            f"refined crossing missed the target: |P - q| = {abs(pval - float(frac)):.3e}"
        )
    omega = wavelength(point)
    inv = family_invariants(frac, point)
    return StringRecord(
        q_num=frac.numerator,
        q_den=frac.denominator,
        modulus=point,
        wavelength=omega,
        length=inv.wave_number * omega,
        wave_number=inv.wave_number,
        turning_number=inv.turning_number,
        punctured_class=inv.punctured_class,
        isotopy_classes=inv.isotopy_classes,
        period_value=pval,
    )


def fiber_endpoint(q) -> tuple[float, float]:
    """Terminal point of the fiber of q on the center boundary.

    Solves (e^4 - 1)/sqrt(e^8 - 4 e^4 + 3) = q in closed form:
    e* = ((3 q^2 - 1)/(q^2 - 1))^{1/4}, lam* = -(1 + e*^4)/(2 e*^3), so that
    e* is exactly the center height at lam*.
    """
    frac = _as_fraction(q)
    qv = float(frac)
    if qv <= 1.0:
        raise DomainError(f"fiber endpoints exist for q > 1 only, got {frac}")
    e4 = (3.0 * qv * qv - 1.0) / (qv * qv - 1.0)
    e_star = e4**0.25
    lam_star = -(1.0 + e4) / (2.0 * e_star**3)
    return lam_star, e_star


def _lambda_bracket(e2: float) -> tuple[float, float]:
    # time-like slice in lambda at fixed e2: below the center boundary and
    # above the light-like curve
    lam_hi = -(1.0 + e2**4) / (2.0 * e2**3)
    lam_lo = -(1.0 + e2 * e2) / (2.0 * e2)
    return lam_lo, lam_hi


def _solve_fiber_lambda(e2: float, qv: float, guess: float | None) -> float:
    lam_lo, lam_hi = _lambda_bracket(e2)
    width = lam_hi - lam_lo
    # insets must clear the locus-tagging tolerance zones at both ends
    lo = lam_lo + 1e-8
    hi = lam_hi - 1e-8

    def f(lam: float) -> float:
        return period_map((lam, e2)) - qv

    if guess is not None:
        glo = max(lo, guess - 0.05 * width)
        ghi = min(hi, guess + 0.05 * width)
        try:
            if f(glo) * f(ghi) < 0.0:
                return brentq(f, glo, ghi, xtol=1e-13, rtol=8.9e-16)
        except (DomainError, RegionError):
            pass
    return brentq(f, lo, hi, xtol=1e-13, rtol=8.9e-16)


def trace_fiber(q, steps: int = 200) -> FiberTrace:
    """Trace the fiber of q from the corner (-1, 1) to its endpoint on the
    center boundary by per-height root solves in the multiplier.

    Root solving is self-correcting, unlike direct integration of the
    fiber-tangent vector field, whose non-vanishing is only experimental.
    The crossing of the exceptional locus, when present, is refined by
    bisection along the trace and returned separately (it is also inserted
    into the polyline).
    """
    frac = _as_fraction(q)
    qv = float(frac)
    lam_star, e_star = fiber_endpoint(frac)
    e_lo = 1.0 + 1e-3 * (e_star - 1.0)
    e_hi = e_star - 1e-5 * (e_star - 1.0)
    heights = np.linspace(e_lo, e_hi, int(steps))
    points: list[ModulusPoint] = []
    lam_guess = None
    for e2 in heights:
        lam = _solve_fiber_lambda(float(e2), qv, lam_guess)
        lam_guess = lam
        points.append(classify_region(lam, float(e2)))

    def locus_gap(point: ModulusPoint) -> float | None:
        if point.lam >= LAMBDA_EXCEPTIONAL:
            return None
        return point.e2 - exceptional_c(point.lam)

    crossing = None
    gaps = [locus_gap(pt) for pt in points]
    for i in range(len(points) - 1):
        ga, gb = gaps[i], gaps[i + 1]
        if ga is None or gb is None or ga * gb > 0.0:
            continue
        lo_e, hi_e = points[i].e2, points[i + 1].e2
        lam_g = points[i].lam
        for _ in range(60):
            mid = 0.5 * (lo_e + hi_e)
            lam_g = _solve_fiber_lambda(mid, qv, lam_g)
            gap = mid - exceptional_c(lam_g)
            if gap == 0.0 or hi_e - lo_e < 1e-12:
                break
            if gap * ga < 0.0:
                hi_e = mid
            else:
                lo_e = mid
        mid = 0.5 * (lo_e + hi_e)
        lam_g = _solve_fiber_lambda(mid, qv, lam_g)
        crossing = classify_region(lam_g, mid)
        break
    if crossing is not None:
        pts = sorted(points + [crossing], key=lambda pt: pt.e2)
    else:
        pts = points
    return FiberTrace(q_num=frac.numerator, q_den=frac.denominator,
                      points=tuple(pts), crossing=crossing)


def _endpoint_slope(lam: float) -> float:
    """Slope of the period map at the center end of the slice; positive when
    an interior minimum exists, negative when the slice is strictly
    decreasing."""
    a = a_lower(lam)
    eta_p = eta_pm(lam)[1]
    span = eta_p - a
    e2 = eta_p - 1e-5 * span
    h = 1e-6 * span
    return (period_map((lam, e2 + h)) - period_map((lam, e2 - h))) / (2.0 * h)


def monotonicity_transition(lo: float = -0.9995, hi: float = -0.945,
                            tol: float = 2e-4) -> float:
    """Multiplier at which the slice-wise period map switches from having an
    interior minimum to being strictly decreasing, located by bisection on
    the sign of the slope at the center end."""
    flo, fhi = _endpoint_slope(lo), _endpoint_slope(hi)
    if not (flo > 0.0 > fhi):
        raise BracketError(
            f"monotonicity transition not bracketed on [{lo}, {hi}]: "
            f"slopes ({flo:.3e}, {fhi:.3e})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _endpoint_slope(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
