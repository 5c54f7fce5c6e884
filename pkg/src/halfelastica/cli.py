"""Command-line surface: classification, curve/signature generation,
period-map scans, closed-string search, fiber tracing, and a phase-portrait
renderer, with deterministic JSON/CSV output and self-contained SVG
rendering of the unit disk.

Exit codes: 0 success, 2 point outside the moduli space (classify), 3
characteristic number outside the admissible interval, 64 usage error, 65
numeric domain error.  Floating-point output is printed with 17 significant
digits in a fixed field order, so identical invocations produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import curvegen, dynamics, moduli, periodmap
from .errors import (
    BracketError,
    CharacteristicIntervalError,
    DomainError,
    HalfElasticaError,
)
__all__ = ["main", "RunConfig"]

SCHEMA = "halfelastica/1"

EXIT_OK = 0
EXIT_OUTSIDE = 2
EXIT_Q_RANGE = 3
EXIT_USAGE = 64
EXIT_DOMAIN = 65


@dataclass
class RunConfig:
    command: str
    lam: float | None = None
    e2: float | None = None
    q: Fraction | None = None
    samples: int = 2048
    periods: float = 1.0
    steps: int = 200
    tol: float = 1e-9
    output: str | None = None
    format: str = "json"


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return f"{x:.17g}"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if x is None:
        return "null"
    raise TypeError(f"unsupported scalar {type(x)!r}")


def dumps_json(obj, indent: int = 0) -> str:
    """Minimal JSON writer with fixed key order and 17-digit floats."""
    pad = "  " * indent
    if isinstance(obj, dict):
        items = [
            f'{pad}  "{k}": {dumps_json(v, indent + 1).lstrip()}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [f"{pad}  {dumps_json(v, indent + 1).lstrip()}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    return _fmt(obj)


def write_csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            f"{v:.17g}" if isinstance(v, float) else str(v) for v in row
        ))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SVG rendering of the unit disk (1000 x 1000 viewBox)
# ---------------------------------------------------------------------------


def _disk_xy(u: float, v: float) -> tuple[float, float]:
    return 500.0 * (1.0 + u), 500.0 * (1.0 - v)


def _svg_path(points, stroke: str, width: float = 2.0,
              dashed: bool = False) -> str:
    coords = " ".join(
        f"{'M' if i == 0 else 'L'}{x:.6f},{y:.6f}"
        for i, (x, y) in enumerate(points)
    )
    dash = ' stroke-dasharray="8,6"' if dashed else ""
    return (f'<path d="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width:.2f}"{dash}/>')


def _svg_circle(cx: float, cy: float, r: float, stroke: str,
                width: float = 2.0, dashed: bool = False) -> str:
    dash = ' stroke-dasharray="8,6"' if dashed else ""
    return (f'<circle cx="{cx:.6f}" cy="{cy:.6f}" r="{r:.6f}" fill="none" '
            f'stroke="{stroke}" stroke-width="{width:.2f}"{dash}/>')


def svg_document(elements: list[str]) -> str:
    body = "\n".join(elements)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000">\n'
        '<rect width="1000" height="1000" fill="white"/>\n'
        f"{_svg_circle(500, 500, 500, 'black', 2.0)}\n"
        f"{body}\n"
        "</svg>\n"
    )


def _osculating_circles(curve) -> list[str]:
    """Bounding circles of the trajectory: the two osculating circles/arcs
    of the light- and space-like families and the annulus circles of the
    time-like one."""
    qd = curve.quartic
    out = []
    if curve.kind is curvegen.CurveKind.BL:
        for mu in (qd.e2, qd.e1):
            v = (2.0 * mu * mu - 1.0) / (1.0 + math.sqrt(2.0) * mu) ** 2
            cx, cy = _disk_xy(0.0, 0.5 * (1.0 + v))
            out.append(_svg_circle(cx, cy, 500.0 * 0.5 * (1.0 - v), "red",
                                   1.5, dashed=True))
    elif curve.kind is curvegen.CurveKind.BS:
        c = qd.c
        for mu in (qd.e2, qd.e1):
            v = 1.0 / (2.0 * math.sqrt(c) * mu + math.sqrt(1.0 + 4.0 * c * mu * mu))
            k = (v * v - 1.0) / (2.0 * v)
            cx, cy = _disk_xy(0.0, k)
            out.append(_svg_circle(cx, cy, 500.0 * math.hypot(k, 1.0), "red",
                                   1.5, dashed=True))
    else:
        inner, outer = curvegen.bt_annulus_radii(curve.modulus)
        if inner > 1e-9:
            out.append(_svg_circle(500.0, 500.0, 500.0 * inner, "red", 1.5,
                                   dashed=True))
        out.append(_svg_circle(500.0, 500.0, 500.0 * outer, "red", 1.5,
                               dashed=True))
    return out


def curve_svg(curve) -> str:
    pts = [_disk_xy(u, v) for u, v in curve.poincare]
    return svg_document(_osculating_circles(curve) +
                        [_svg_path(pts, "steelblue", 2.0)])


def phase_portrait_orbits(lam: float, n_orbits: int = 6,
                          samples: int = 400):
    """Representative phase-plane orbits: closed loops between the
    equilibria, the separatrix level, and the two equilibrium points."""
    eta_m, eta_p = moduli.eta_pm(lam)
    orbits = []
    for frac in np.linspace(0.15, 0.85, n_orbits):
        e2 = eta_m + (eta_p - eta_m) * frac
        if not moduli.in_moduli_space(lam, e2):
            continue
        sig = dynamics.signature((lam, e2), samples)
        orbits.append(("closed", sig))
    # separatrix: level through the saddle, both lobes sampled from the quartic
    c_sep = dynamics.saddle_level(lam)
    mstar = dynamics.m_star(lam)
    for lo, hi, kind in ((eta_m, mstar, "separatrix"),
                         (1e-3, eta_m, "separatrix")):
        xs = np.linspace(lo + 1e-9, hi - 1e-9, samples)
        q = moduli.quartic_value(lam, c_sep, xs)
        ys = xs * np.sqrt(np.maximum(-q, 0.0))
        loop = np.concatenate([np.column_stack([xs, ys]),
                               np.column_stack([xs[::-1], -ys[::-1]])])
        orbits.append((kind, loop))
    orbits.append(("equilibrium", np.array([[eta_m, 0.0]])))
    orbits.append(("equilibrium", np.array([[eta_p, 0.0]])))
    return orbits


def phase_portrait_svg(lam: float) -> str:
    orbits = phase_portrait_orbits(lam)
    xs = np.concatenate([o[:, 0] for _, o in orbits])
    ys = np.concatenate([o[:, 1] for _, o in orbits])
    x_hi = float(xs.max()) * 1.05
    y_hi = max(float(np.abs(ys).max()), 1e-3) * 1.1

    def to_xy(x, y):
        return 1000.0 * x / x_hi, 500.0 * (1.0 - y / y_hi)

    colors = {"closed": "firebrick", "separatrix": "black",
              "equilibrium": "purple"}
    elements = [f'<line x1="0" y1="500" x2="1000" y2="500" '
                f'stroke="gray" stroke-width="1"/>']
    for kind, orbit in orbits:
        if kind == "equilibrium":
            x, y = to_xy(orbit[0, 0], orbit[0, 1])
            elements.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="6" '
                            f'fill="{colors[kind]}"/>')
        else:
            pts = [to_xy(x, y) for x, y in orbit]
            elements.append(_svg_path(pts, colors[kind], 1.5,
                                      dashed=(kind == "separatrix")))
    body = "\n".join(elements)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000">\n'
        '<rect width="1000" height="1000" fill="white"/>\n'
        f"{body}\n</svg>\n"
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_classify(cfg: RunConfig) -> int:
    point = moduli.classify_region(cfg.lam, cfg.e2)
    report: dict = {"schema": SCHEMA, "command": "classify",
                    "lambda": cfg.lam, "e2": cfg.e2,
                    "region": point.region.value}
    if cfg.lam < moduli.LAMBDA_CRITICAL:
        em, ep = moduli.eta_pm(cfg.lam)
        report["eta_minus"] = em
        report["eta_plus"] = ep
    else:
        report["eta_minus"] = None
        report["eta_plus"] = None
    if point.in_moduli_space:
        qd = moduli.roots_from_modulus(point)
        report.update(e1=qd.e1, e3=qd.e3, e4=qd.e4, c=qd.c,
                      wavelength=dynamics.wavelength(point))
    _emit(cfg, dumps_json(report) + "\n")
    return EXIT_OK if point.in_moduli_space else EXIT_OUTSIDE


def _curve_for(cfg: RunConfig):
    point = moduli.classify_region(cfg.lam, cfg.e2)
    return curvegen.make_curve(point, samples=cfg.samples,
                               periods=cfg.periods)


def cmd_curve(cfg: RunConfig) -> int:
    curve = _curve_for(cfg)
    if cfg.format == "svg":
        _emit(cfg, curve_svg(curve))
        return EXIT_OK
    rows = zip(curve.s, curve.mu, curve.mu_dot, curve.gamma[:, 0],
               curve.gamma[:, 1], curve.gamma[:, 2], curve.poincare[:, 0],
               curve.poincare[:, 1], curve.theta)
    _emit(cfg, write_csv(
        ["s", "mu", "mu_dot", "x1", "x2", "x3", "u", "v", "theta"],
        ([float(v) for v in row] for row in rows),
    ))
    return EXIT_OK


def cmd_signature(cfg: RunConfig) -> int:
    sig = dynamics.signature((cfg.lam, cfg.e2), cfg.samples)
    if cfg.format == "svg":
        x_hi = float(sig[:, 0].max()) * 1.1
        y_hi = max(float(np.abs(sig[:, 1]).max()), 1e-6) * 1.2

        def to_xy(x, y):
            return 1000.0 * x / x_hi, 500.0 * (1.0 - y / y_hi)

        loop = [to_xy(x, y) for x, y in sig] + [to_xy(sig[0, 0], sig[0, 1])]
        body = _svg_path(loop, "firebrick", 2.0)
        _emit(cfg, '<svg xmlns="http://www.w3.org/2000/svg" '
                   'viewBox="0 0 1000 1000">\n'
                   '<rect width="1000" height="1000" fill="white"/>\n'
                   f"{body}\n</svg>\n")
        return EXIT_OK
    omega = dynamics.wavelength((cfg.lam, cfg.e2))
    s = np.linspace(0.0, omega, len(sig), endpoint=False)
    _emit(cfg, write_csv(["s", "mu", "mu_dot"],
                         ([float(a), float(b), float(c)]
                          for a, (b, c) in zip(s, sig))))
    return EXIT_OK


def cmd_scan_period(cfg: RunConfig) -> int:
    lam = cfg.lam
    a = moduli.a_lower(lam)
    eta_p = moduli.eta_pm(lam)[1]
    n = cfg.samples
    rows = []
    for i in range(1, n + 1):
        e2 = a + (eta_p - a) * i / (n + 1.0)
        rows.append([float(e2), float(periodmap.period_map((lam, e2)))])
    _emit(cfg, write_csv(["e2", "P"], rows))
    return EXIT_OK


def cmd_find_string(cfg: RunConfig) -> int:
    rec = periodmap.find_string(cfg.lam, cfg.q)
    if cfg.format == "svg":
        curve = curvegen.bt_curve(rec.modulus, samples=cfg.samples,
                                  periods=float(rec.wave_number))
        _emit(cfg, curve_svg(curve))
        return EXIT_OK
    report = {
        "schema": SCHEMA,
        "command": "find-string",
        "q": f"{rec.q_num}/{rec.q_den}",
        "lambda": rec.modulus.lam,
        "e2": rec.modulus.e2,
        "region": rec.modulus.region.value,
        "period_map": rec.period_value,
        "wavelength": rec.wavelength,
        "length": rec.length,
        "wave_number": rec.wave_number,
        "turning_number": rec.turning_number,
        "punctured_class": rec.punctured_class,
        "isotopy_classes": rec.isotopy_classes,
    }
    _emit(cfg, dumps_json(report) + "\n")
    return EXIT_OK


def cmd_fiber(cfg: RunConfig) -> int:
    trace = periodmap.trace_fiber(cfg.q, steps=cfg.steps)
    rows = [[pt.lam, pt.e2, pt.region.value] for pt in trace.points]
    _emit(cfg, write_csv(["lambda", "e2", "region"], rows))
    return EXIT_OK


def cmd_phase_portrait(cfg: RunConfig) -> int:
    if cfg.format == "svg":
        _emit(cfg, phase_portrait_svg(cfg.lam))
        return EXIT_OK
    rows = []
    for idx, (kind, orbit) in enumerate(phase_portrait_orbits(cfg.lam)):
        for x, y in orbit:
            rows.append([idx, kind, float(x), float(y)])
    _emit(cfg, write_csv(["orbit", "kind", "x", "y"], rows))
    return EXIT_OK


_COMMANDS = {
    "classify": cmd_classify,
    "curve": cmd_curve,
    "signature": cmd_signature,
    "scan-period": cmd_scan_period,
    "find-string": cmd_find_string,
    "fiber": cmd_fiber,
    "phase-portrait": cmd_phase_portrait,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _parse_q(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    try:
        frac = Fraction(int(num), int(den)) if sep else Fraction(int(num), 1)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}: {exc}")
    if frac <= 0:
        raise argparse.ArgumentTypeError("q must be a positive rational m/n")
    return frac


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="halfelastica",
                     description="Constrained 1/2-elastica toolkit for the "
                                 "hyperbolic plane")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, *, lam=False, e2=False, q=False, fmt=("json",), steps=False):
        p = sub.add_parser(name)
        if lam:
            p.add_argument("--lambda", dest="lam", type=float, required=True)
        if e2:
            p.add_argument("--e2", dest="e2", type=float, required=True)
        if q:
            p.add_argument("--q", dest="q", type=_parse_q, required=True)
        if steps:
            p.add_argument("--steps", dest="steps", type=int, default=200)
        p.add_argument("--samples", dest="samples", type=int, default=2048)
        p.add_argument("--periods", dest="periods", type=float, default=1.0)
        p.add_argument("--tol", dest="tol", type=float, default=1e-9)
        p.add_argument("--out", dest="output", default=None)
        p.add_argument("--format", dest="format", choices=fmt, default=fmt[0])
        return p

    add("classify", lam=True, e2=True)
    add("curve", lam=True, e2=True, fmt=("csv", "svg"))
    add("signature", lam=True, e2=True, fmt=("csv", "svg"))
    add("scan-period", lam=True, fmt=("csv",))
    add("find-string", lam=True, q=True, fmt=("json", "svg"))
    add("fiber", q=True, fmt=("csv",), steps=True)
    add("phase-portrait", lam=True, fmt=("svg", "csv"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    cfg = RunConfig(
        command=ns.command,
        lam=getattr(ns, "lam", None),
        e2=getattr(ns, "e2", None),
        q=getattr(ns, "q", None),
        samples=ns.samples,
        periods=ns.periods,
        steps=getattr(ns, "steps", 200),
        tol=ns.tol,
        output=ns.output,
        format=ns.format,
    )
    if cfg.samples < 16:
        sys.stderr.write("error: --samples must be at least 16\n")
        return EXIT_USAGE
    try:
        return _COMMANDS[cfg.command](cfg)
    except CharacteristicIntervalError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_Q_RANGE
    except (DomainError, BracketError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except HalfElasticaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
