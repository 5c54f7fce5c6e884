"""Special-function kernel: complete and incomplete elliptic integrals of the
first, second and third kind, the Jacobi amplitude and sn with its inverse,
and a tanh-sinh quadrature oracle.

The Legendre-form integrals are evaluated through Carlson's symmetric forms
(R_F, R_C, R_D, R_J) computed by the duplication theorem; the parameter
convention throughout is

    K(m)        = int_0^{pi/2} dt / sqrt(1 - m sin^2 t),          0 <= m < 1,
    E(m)        = int_0^{pi/2} sqrt(1 - m sin^2 t) dt,            0 <= m <= 1,
    Pi(n, m)    = int_0^{pi/2} dt / ((1 - n sin^2 t) sqrt(1 - m sin^2 t)),
    Pi(n,phi,m) = the same with upper limit phi,                  n < 1.

Very degenerate parameters (1 - m below 1e-12) are routed to the standard
logarithmic asymptotic forms, where the Legendre integrals have lost all
significant digits anyway.

The quadrature oracle is the independent reference used by the test suite to
validate every closed form in the package.  It supports integrable endpoint
singularities of inverse-square-root type through the ``singular`` weight
option, in which case the singular factors are evaluated from exact node
distances to the endpoints (never by cancellation-prone subtraction).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, QuadratureError

__all__ = [
    "complete_K",
    "complete_E",
    "complete_Pi",
    "incomplete_F",
    "incomplete_Pi",
    "jacobi_am",
    "jacobi_sn",
    "inverse_sn",
    "quad_oracle",
]

_MAX_DUPLICATIONS = 500


def _rf(x: float, y: float, z: float) -> float:
    """Carlson symmetric integral R_F(x, y, z), all arguments >= 0."""
    errtol = 1.0e-3
    for _ in range(_MAX_DUPLICATIONS):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        ave = (x + y + z) / 3.0
        dx = (ave - x) / ave
        dy = (ave - y) / ave
        dz = (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) < errtol:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    s = 1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0
    return s / math.sqrt(ave)


def _rc(x: float, y: float) -> float:
    """Degenerate Carlson integral R_C(x, y) for y > 0."""
    errtol = 6.0e-4
    for _ in range(_MAX_DUPLICATIONS):
        lam = 2.0 * math.sqrt(x) * math.sqrt(y) + y
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        ave = (x + 2.0 * y) / 3.0
        s = (y - ave) / ave
        if abs(s) < errtol:
            break
    return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / math.sqrt(ave)


def _rd(x: float, y: float, z: float) -> float:
    """Carlson symmetric integral R_D(x, y, z) = R_J(x, y, z, z)."""
    errtol = 1.0e-3
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 6.0, 9.0 / 22.0, 3.0 / 26.0
    total = 0.0
    fac = 1.0
    for _ in range(_MAX_DUPLICATIONS):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        total += fac / (sz * (z + lam))
        fac *= 0.25
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        ave = 0.2 * (x + y + 3.0 * z)
        dx = (ave - x) / ave
        dy = (ave - y) / ave
        dz = (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) < errtol:
            break
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    s = (
        1.0
        + ed * (-c1 + 0.25 * c3 * ed - 1.5 * c4 * dz * ee)
        + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))
    )
    return 3.0 * total + fac * s / (ave * math.sqrt(ave))


def _rj(x: float, y: float, z: float, p: float) -> float:
    """Carlson symmetric integral R_J(x, y, z, p) for p > 0."""
    errtol = 1.0e-3
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 3.0, 3.0 / 22.0, 3.0 / 26.0
    total = 0.0
    fac = 1.0
    for _ in range(_MAX_DUPLICATIONS):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        alpha = (p * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = p * (p + lam) ** 2
        total += fac * _rc(alpha, beta)
        fac *= 0.25
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        p = 0.25 * (p + lam)
        ave = 0.2 * (x + y + z + 2.0 * p)
        dx = (ave - x) / ave
        dy = (ave - y) / ave
        dz = (ave - z) / ave
        dp = (ave - p) / ave
        if max(abs(dx), abs(dy), abs(dz), abs(dp)) < errtol:
            break
    ea = dx * (dy + dz) + dy * dz
    eb = dx * dy * dz
    ec = dp * dp
    ed = ea - 3.0 * ec
    ee = eb + 2.0 * dp * (ea - ec)
    s = (
        1.0
        + ed * (-c1 + 0.75 * c3 * ed - 1.5 * c4 * ee)
        + eb * (0.5 * c2 + dp * (-c3 - c3 + dp * c4))
        + dp * ea * (c2 - dp * c3)
        - c2 * dp * ec
    )
    return 3.0 * total + fac * s / (ave * math.sqrt(ave))


def _log_divergence(m: float) -> float:
    return math.log(4.0 / math.sqrt(1.0 - m))


def _check_m(m: float, allow_one: bool = False) -> None:
    hi_ok = m <= 1.0 if allow_one else m < 1.0
    if not (0.0 <= m and hi_ok):
        raise DomainError(f"parameter m={m!r} outside the supported range")


def _check_n(n: float) -> None:
    if not n < 1.0:
        raise DomainError(f"characteristic n={n!r} must be < 1")


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind."""
    _check_m(m)
    if 1.0 - m < 1e-12:
        # logarithmic asymptotic regime; the Legendre form has no digits left
        return _log_divergence(m)
    return _rf(0.0, 1.0 - m, 1.0)


def complete_E(m: float) -> float:
    """Complete elliptic integral of the second kind, 0 <= m <= 1."""
    _check_m(m, allow_one=True)
    if 1.0 - m < 1e-12:
        if m == 1.0:
            return 1.0
        return 1.0 + 0.5 * (1.0 - m) * (_log_divergence(m) - 0.5)
    return _rf(0.0, 1.0 - m, 1.0) - (m / 3.0) * _rd(0.0, 1.0 - m, 1.0)


def _pi_asymptotic_near_one(n: float, m: float) -> float:
    # Pi(n, m) ~ (L + g(n)) / (1 - n) as m -> 1-, with the arctan term
    # continued to positive characteristics through artanh.
    if n <= 0.0:
        g = math.sqrt(-n) * math.atan(math.sqrt(-n))
    else:
        g = -math.sqrt(n) * math.atanh(math.sqrt(n))
    return (_log_divergence(m) + g) / (1.0 - n)


def complete_Pi(n: float, m: float) -> float:
    """Complete elliptic integral of the third kind with characteristic n < 1."""
    _check_n(n)
    _check_m(m)
    if 1.0 - m < 1e-12:
        return _pi_asymptotic_near_one(n, m)
    rf = _rf(0.0, 1.0 - m, 1.0)
    if n == 0.0:
        return rf
    return rf + (n / 3.0) * _rj(0.0, 1.0 - m, 1.0, 1.0 - n)


def incomplete_F(phi: float, m: float) -> float:
    """Incomplete elliptic integral of the first kind with amplitude phi."""
    _check_m(m)
    if not 0.0 <= phi <= math.pi / 2.0:
        raise DomainError(f"amplitude phi={phi!r} outside [0, pi/2]")
    if phi == 0.0:
        return 0.0
    s = math.sin(phi)
    c = 1.0 / (s * s)
    return _rf(c - 1.0, c - m, c)


def incomplete_Pi(n: float, phi: float, m: float) -> float:
    """Incomplete elliptic integral of the third kind up to amplitude phi."""
    _check_n(n)
    _check_m(m)
    if not 0.0 <= phi <= math.pi / 2.0:
        raise DomainError(f"amplitude phi={phi!r} outside [0, pi/2]")
    if phi == 0.0:
        return 0.0
    if phi == math.pi / 2.0:
        return complete_Pi(n, m)
    s = math.sin(phi)
    c = 1.0 / (s * s)
    rf = _rf(c - 1.0, c - m, c)
    if n == 0.0:
        return rf
    return rf + (n / 3.0) * _rj(c - 1.0, c - m, c, c - n)


def jacobi_am(u: float, m: float) -> float:
    """Jacobi amplitude am(u, m) by the arithmetic-geometric mean descent."""
    _check_m(m)
    if u == 0.0:
        return 0.0
    if u < 0.0:
        return -jacobi_am(-u, m)
    if m == 0.0:
        return u
    a, b = 1.0, math.sqrt(1.0 - m)
    scale = []
    for _ in range(60):
        an = 0.5 * (a + b)
        cn = 0.5 * (a - b)
        b = math.sqrt(a * b)
        a = an
        scale.append((an, cn))
        if cn <= 1e-18 * an:
            break
    phi = (2.0 ** len(scale)) * a * u
    for an, cn in reversed(scale):
        t = cn / an * math.sin(phi)
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, t))))
    return phi


def jacobi_sn(u: float, m: float) -> float:
    """Jacobi elliptic sine sn(u, m) = sin(am(u, m))."""
    return math.sin(jacobi_am(u, m))


def inverse_sn(x: float, m: float) -> float:
    """Inverse of sn on the principal branch: u in [0, K(m)] with sn(u, m) = x."""
    _check_m(m)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"inverse_sn argument x={x!r} outside [0, 1]")
    if x == 0.0:
        return 0.0
    c = 1.0 / (x * x)
    return _rf(c - 1.0, c - m, c)


# ---------------------------------------------------------------------------
# tanh-sinh quadrature oracle
# ---------------------------------------------------------------------------

_TS_TMAX = 4.0
_TS_BASE_H = 0.5
_TS_MAX_LEVEL = 11
_ts_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}


def _ts_level_nodes(level: int):
    """Node table for one refinement level of the tanh-sinh rule.

    Returns (u, w, one_plus, one_minus) where u = tanh((pi/2) sinh t),
    w is the weight without the mesh factor h, and one_plus/one_minus are
    1 + u and 1 - u computed without cancellation.
    """
    cached = _ts_cache.get(level)
    if cached is not None:
        return cached
    h = _TS_BASE_H / 2.0**level
    if level == 0:
        t = np.arange(-round(_TS_TMAX / h), round(_TS_TMAX / h) + 1) * h
    else:
        pos = np.arange(1, round(_TS_TMAX / h), 2) * h
        t = np.concatenate([-pos[::-1], pos])
    z = 0.5 * np.pi * np.sinh(t)
    u = np.tanh(z)
    w = 0.5 * np.pi * np.cosh(t) / np.cosh(z) ** 2
    one_minus = 2.0 / (1.0 + np.exp(2.0 * z))
    one_plus = 2.0 / (1.0 + np.exp(-2.0 * z))
    _ts_cache[level] = (u, w, one_plus, one_minus)
    return _ts_cache[level]


def _tanh_sinh(fd, a: float, b: float, tol: float, singular=None,
               max_level: int = _TS_MAX_LEVEL):
    """Core tanh-sinh driver.

    ``fd(x, da, db)`` must be vectorized; da = x - a and db = b - x are exact
    node distances.  When ``singular=(alpha, beta)`` the integrand is
    fd * da**alpha * db**beta.  Returns (value, error_estimate, converged).
    """
    if a == b:
        return 0.0, 0.0, True
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)

    def level_sum(level: int) -> float:
        u, w, one_plus, one_minus = _ts_level_nodes(level)
        da = half * one_plus
        db = half * one_minus
        x = mid + half * u
        vals = np.asarray(fd(x, da, db), dtype=float) * w
        if singular is not None:
            alpha, beta = singular
            if alpha != 0.0:
                vals = vals * da**alpha
            if beta != 0.0:
                vals = vals * db**beta
        vals = np.where(np.isfinite(vals), vals, 0.0)
        return float(vals.sum())

    h = _TS_BASE_H
    total = level_sum(0)
    value = half * h * total
    err = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        total += level_sum(level)
        new_value = half * h * total
        err = abs(new_value - value)
        value = new_value
        if level >= 3 and err <= tol * max(1.0, abs(value)):
            return value, err, True
    return value, err, False


def quad_oracle(f, a: float, b: float, tol: float = 1e-12, singular=None) -> float:
    """Adaptive tanh-sinh estimate of the integral of f over (a, b).

    ``f`` must accept numpy arrays.  With ``singular=(alpha, beta)`` the
    integrand is f(x) * (x-a)**alpha * (b-x)**beta and the singular factors
    are formed from exact endpoint distances, which keeps inverse-square-root
    endpoint singularities accurate to full precision.  Raises
    QuadratureError when the error estimate does not reach ``tol``.
    """
    value, err, converged = _tanh_sinh(lambda x, da, db: f(x), a, b, tol,
                                       singular=singular)
    if not converged:
        raise QuadratureError(
            f"tanh-sinh quadrature did not converge: achieved error {err:.3e} "
            f"with target {tol:.3e}",
            value=value,
            achieved=err,
        )
    return value
