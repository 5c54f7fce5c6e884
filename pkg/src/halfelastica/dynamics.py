"""Curvature dynamics: the second-order equation for the Blaschke invariant,
its conservation law, the phase-plane orbit taxonomy, wavelength evaluation
(closed elliptic form cross-checked by quadrature), and the inverse of the
rising half-period.

The Blaschke invariant mu (positive square root of the geodesic curvature)
of a critical curve satisfies

    mu'' = 2 mu'^2 / mu - mu - 2 lam mu^4 - mu^5,
    mu'^2 = -mu^2 Q(mu),      Q(x) = x^4 + 4 lam x^3 + 4 (lam^2 - c) x^2 - 1,

so the phase curves are strata of the singular elliptic curve
y^2 + x^2 Q(x) = 0 in the half-plane x > 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import ellint
from .errors import DomainError, IntegrationError
from .moduli import (
    LAMBDA_CRITICAL,
    ModulusPoint,
    QuarticData,
    _unpack_point,
    classify_region,
    eta_pm,
    quartic_value,
    roots_from_modulus,
)

__all__ = [
    "OrbitKind",
    "MuSolution",
    "phase_field",
    "mu_acceleration",
    "conserved_level",
    "saddle_level",
    "m_star",
    "classify_orbit",
    "solve_mu",
    "wavelength",
    "wavelength_quadrature",
    "elliptic_arguments",
    "h_inverse",
    "signature",
    "linearized_center_period",
    "constant_curvature_census",
    "invert_by_bisection",
]

_DEGENERATE_GAP = 1e-12


class OrbitKind(enum.Enum):
    """Orbit taxonomy of the curvature phase portrait."""

    STABLE_EQUILIBRIUM = "stable-equilibrium"
    UNSTABLE_EQUILIBRIUM = "unstable-equilibrium"
    CLOSED = "closed"
    NONCLOSED_FIRST_KIND = "nonclosed-first-kind"
    NONCLOSED_SECOND_KIND = "nonclosed-second-kind"
    EXCEPTIONAL_FIRST_KIND = "exceptional-first-kind"
    EXCEPTIONAL_SECOND_KIND = "exceptional-second-kind"


@dataclass(frozen=True)
class MuSolution:
    """Sampled solution of the curvature dynamics over a whole number of
    periods, starting from the minimum mu(0) = e2, mu'(0) = 0."""

    modulus: ModulusPoint
    s: np.ndarray
    mu: np.ndarray
    mu_dot: np.ndarray
    wavelength: float
    quartic: QuarticData
    _dense: object = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        for arr in (self.s, self.mu, self.mu_dot):
            arr.flags.writeable = False

    def at(self, s):
        """Dense-output evaluation (mu, mu_dot) at arbitrary arclength."""
        if self._dense is None:
            raise IntegrationError("constant solution has no dense output")
        out = self._dense(np.atleast_1d(np.asarray(s, dtype=float)))
        return out[0], out[1]

    def conservation_residual(self) -> float:
        """max |mu'^2 + mu^2 Q(mu)| over the stored samples."""
        lam = self.modulus.lam
        q = quartic_value(lam, self.quartic.c, self.mu)
        return float(np.max(np.abs(self.mu_dot**2 + self.mu**2 * q)))


def phase_field(lam: float, x: float, y: float) -> tuple[float, float]:
    """The phase-plane vector field of the curvature dynamics at (x, y)."""
    if x <= 0.0:
        raise DomainError(f"phase field defined on x > 0 only, got x={x!r}")
    return (y, 2.0 * (y * y / x - 0.5 * x - lam * x**4 - 0.5 * x**5))


def mu_acceleration(lam: float, x: float, y: float) -> float:
    """mu'' as a function of (mu, mu')."""
    return 2.0 * y * y / x - x - 2.0 * lam * x**4 - x**5


def conserved_level(lam: float, x: float, y: float) -> float:
    """Causal constant c of the level set through (x, y)."""
    if x <= 0.0:
        raise DomainError(f"levels defined on x > 0 only, got x={x!r}")
    return lam * lam + (x**4 + 4.0 * lam * x**3 - 1.0 + (y / x) ** 2) / (4.0 * x * x)


def saddle_level(lam: float) -> float:
    """Level value of the separatrix through the saddle (eta-, 0)."""
    return conserved_level(lam, eta_pm(lam)[0], 0.0)


def m_star(lam: float) -> float:
    """Crossing height of the separatrix loop beyond the center: the unique
    root of the separatrix-level quartic above eta+."""
    c = saddle_level(lam)
    eta_p = eta_pm(lam)[1]
    roots = np.roots([1.0, 4.0 * lam, 4.0 * (lam * lam - c), 0.0, -1.0])
    real = sorted(r.real for r in roots if abs(r.imag) <= 1e-7 * max(1.0, abs(r)))
    candidates = [r for r in real if r > eta_p]
    if not candidates:
        raise DomainError(f"no separatrix crossing above the center at lambda={lam!r}")
    x = candidates[-1]
    for _ in range(3):
        f = quartic_value(lam, c, x)
        fp = 4.0 * x**3 + 12.0 * lam * x**2 + 8.0 * (lam * lam - c) * x
        x -= f / fp
    return x


def classify_orbit(lam: float, x0: float, y0: float,
                   tol: float = 1e-10) -> OrbitKind:
    """Orbit type of the phase curve through (x0, y0).

    Equilibria and separatrices are tagged within ``tol`` on the conserved
    level value.  Above the critical multiplier no equilibria exist and every
    orbit is of a non-closed kind.
    """
    if x0 <= 0.0:
        raise DomainError(f"orbits live in x > 0, got x0={x0!r}")
    c = conserved_level(lam, x0, y0)
    if lam < LAMBDA_CRITICAL:
        eta_m, eta_p = eta_pm(lam)
        if abs(c - saddle_level(lam)) <= tol:
            if abs(x0 - eta_m) <= 1e-6 and abs(y0) <= 1e-6:
                return OrbitKind.UNSTABLE_EQUILIBRIUM
            if x0 > eta_m:
                return OrbitKind.EXCEPTIONAL_FIRST_KIND
            return OrbitKind.EXCEPTIONAL_SECOND_KIND
        if abs(c - conserved_level(lam, eta_p, 0.0)) <= tol and x0 > eta_m:
            return OrbitKind.STABLE_EQUILIBRIUM
    roots = np.roots([1.0, 4.0 * lam, 4.0 * (lam * lam - c), 0.0, -1.0])
    real = sorted(
        (r.real for r in roots if abs(r.imag) <= 1e-7 * max(1.0, abs(r))),
        reverse=True,
    )
    if len(real) == 4 and real[2] > 0.0 > real[3]:
        e1, e2 = real[0], real[1]
        if e2 - 1e-9 <= x0 <= e1 + 1e-9:
            return OrbitKind.CLOSED
        return OrbitKind.NONCLOSED_SECOND_KIND
    # two real roots: the orbit runs from the origin out to the largest
    # positive root; it is of the second kind when it stays below the saddle
    if lam < LAMBDA_CRITICAL and real and max(real) < eta_pm(lam)[0]:
        return OrbitKind.NONCLOSED_SECOND_KIND
    return OrbitKind.NONCLOSED_FIRST_KIND


def _mu_rhs(lam: float):
    def rhs(_s, state):
        x, y = state
        return (y, 2.0 * y * y / x - x - 2.0 * lam * x**4 - x**5)

    return rhs


def _resolve_point(p, e2=None) -> ModulusPoint:
    if isinstance(p, ModulusPoint) and e2 is None:
        return p
    lam, e2v = _unpack_point(p, e2)
    return classify_region(lam, e2v)


def solve_mu(p, n_periods: float = 1.0, rtol: float = 3e-14,
             atol: float = 1e-14, samples_per_period: int = 2048,
             residual_tol: float = 1e-8) -> MuSolution:
    """Integrate the curvature dynamics from the orbit minimum over
    ``n_periods`` wavelengths with dense output.

    Inputs within 1e-12 of an equilibrium height return the constant
    solution explicitly: at the center the amplitude vanishes, at the saddle
    the period diverges, and integration would be meaningless either way.
    """
    from .moduli import Region

    point = _resolve_point(p)
    if point.region is Region.OUTSIDE:
        raise DomainError(f"{point!r} is not in the moduli space")
    lam, e2 = point.lam, point.e2
    eta_m, eta_p = eta_pm(lam)
    n_samples = max(int(round(samples_per_period * n_periods)), 2)
    on_boundary = point.region in (Region.BOUNDARY_MINUS, Region.BOUNDARY_PLUS)
    degenerate = (abs(e2 - eta_p) <= _DEGENERATE_GAP
                  or abs(e2 - eta_m) <= _DEGENERATE_GAP)
    if on_boundary or degenerate:
        eta = eta_p if abs(e2 - eta_p) <= abs(e2 - eta_m) else eta_m
        period = (
            linearized_center_period(lam) if eta == eta_p else math.inf
        )
        s_end = n_periods * (period if math.isfinite(period) else 1.0)
        s = np.linspace(0.0, s_end, n_samples + 1)
        c = conserved_level(lam, eta, 0.0)
        qd = QuarticData(e1=eta, e2=eta, e3=eta, e4=eta, c=c)
        return MuSolution(point, s, np.full_like(s, eta), np.zeros_like(s),
                          period, qd)
    qd = roots_from_modulus((lam, e2))
    omega = wavelength(point)
    s_end = n_periods * omega
    # the step cap keeps the dense-output interpolation error under the
    # conservation budget; the step error alone is far below it
    sol = solve_ivp(_mu_rhs(lam), (0.0, s_end), [e2, 0.0], method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True,
                    max_step=omega / 64.0)
    if not sol.success:
        raise IntegrationError(f"curvature integration failed: {sol.message}")
    s = np.linspace(0.0, s_end, n_samples + 1)
    states = sol.sol(s)
    out = MuSolution(point, s, states[0], states[1], omega, qd,
                     _dense=sol.sol)
    resid = out.conservation_residual()
    if resid > residual_tol:
        raise IntegrationError(
            f"conservation residual {resid:.3e} exceeds the {residual_tol:.1e} budget"
        )
    return out


def linearized_center_period(lam: float) -> float:
    """Small-oscillation period about the center: 2 pi / sqrt(eta+^4 - 3)."""
    eta = eta_pm(lam)[1]
    return 2.0 * math.pi / math.sqrt(eta**4 - 3.0)


def constant_curvature_census(lam: float) -> int:
    """Number of equivalence classes of closed constant-curvature critical
    curves at multiplier lam: 0 above the critical multiplier, 1 at it, 2 in
    (-1, critical), and 1 for lam <= -1 (the saddle height drops to
    curvature <= 1 there and its circle opens up)."""
    if lam > LAMBDA_CRITICAL:
        return 0
    if lam > LAMBDA_CRITICAL - 1e-13:
        return 1
    eta_m, eta_p = eta_pm(lam)
    return sum(1 for eta in (eta_m, eta_p) if eta > 1.0 + 1e-12)


def elliptic_arguments(qd: QuarticData) -> tuple[float, float, float, float]:
    """The (a, m, n, g) arguments of the complete-elliptic wavelength form."""
    e1, e2, e3, e4 = qd.roots
    a = (e2 - e1) / (e2 - e4)
    m = ((e1 - e2) * (e3 - e4)) / ((e1 - e3) * (e2 - e4))
    n = e4 * a / e1
    g = 2.0 / math.sqrt((e1 - e3) * (e2 - e4))
    return a, m, n, g


def wavelength(p, e2=None) -> float:
    """Least period of the curvature, in closed elliptic form.

    Equals twice the quadrature of dx / (x sqrt(-Q(x))) over [e2, e1]; the
    equality is enforced by the test suite against the tanh-sinh oracle.
    """
    point = _resolve_point(p, e2)
    if not point.in_moduli_space:
        raise DomainError(f"{point!r} is not in the moduli space")
    qd = roots_from_modulus((point.lam, point.e2))
    if qd.e1 - qd.e2 < 1e-10:
        return linearized_center_period(point.lam)
    a, m, n, g = elliptic_arguments(qd)
    k = ellint.complete_K(m)
    pi_n = ellint.complete_Pi(n, m)
    return (2.0 * g / qd.e1) * ((a / n) * k - ((a - n) / n) * pi_n)


def wavelength_quadrature(p, e2=None, tol: float = 1e-12) -> float:
    """Independent wavelength evaluation by singular-endpoint quadrature."""
    point = _resolve_point(p, e2)
    qd = roots_from_modulus((point.lam, point.e2))
    e1, e2v, e3, e4 = qd.roots

    def smooth(x):
        return 1.0 / (x * np.sqrt((x - e3) * (x - e4)))

    return 2.0 * ellint.quad_oracle(smooth, e2v, e1, tol, singular=(-0.5, -0.5))


def h_inverse(p, mu, e2=None) -> float:
    """Arclength h(mu) in [0, omega/2] at which the rising curvature branch
    reaches the value mu; h(e2) = 0 and h(e1) = omega/2."""
    point = _resolve_point(p, e2)
    qd = roots_from_modulus((point.lam, point.e2))
    e1, e2v, _, e4 = qd.roots
    if not e2v - 1e-12 <= mu <= e1 + 1e-12:
        raise DomainError(f"mu={mu!r} outside the curvature range [{e2v}, {e1}]")
    mu = min(max(mu, e2v), e1)
    a, m, n, g = elliptic_arguments(qd)
    omega = wavelength(point)
    ratio = ((e2v - e4) * (e1 - mu)) / ((e1 - e2v) * (mu - e4))
    u = ellint.inverse_sn(math.sqrt(min(max(ratio, 0.0), 1.0)), m)
    phi = ellint.jacobi_am(u, m)
    return 0.5 * omega - (g / e1) * (
        (a / n) * u - ((a - n) / n) * ellint.incomplete_Pi(n, phi, m)
    )


def signature(p, n: int = 512, e2=None) -> np.ndarray:
    """n samples of the modified invariant signature (mu, mu') over one
    period: a closed loop on the singular elliptic curve y^2 + x^2 Q(x) = 0."""
    point = _resolve_point(p, e2)
    sol = solve_mu(point, n_periods=1.0,
                   samples_per_period=max(int(n), 16))
    s = np.linspace(0.0, sol.wavelength, int(n), endpoint=False)
    mu, mu_dot = sol.at(s)
    return np.column_stack([mu, mu_dot])


def invert_by_bisection(sol: MuSolution, mu: float) -> float:
    """Oracle inversion of the rising branch by bisection on the dense output."""
    omega = sol.wavelength

    def f(s):
        return float(sol.at(s)[0][0]) - mu

    return brentq(f, 0.0, 0.5 * omega, xtol=1e-13)
