"""Command-line front end: single solves, parameter sweeps and file export."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .params import ModelParams, validate
from .shape import Diagnostics, InclusionContour, run_diagnostics

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_IO = 4

SWEEPABLE = ("m", "kappa", "tau1_hat", "tau1_inf_hat", "N0_star")
ALIASES = {"tau1": "tau1_hat", "tau1-inf": "tau1_inf_hat", "tau1_inf": "tau1_inf_hat", "n0star": "N0_star"}


@dataclass
class RunConfig:
    params: ModelParams
    out_contour: Path | None = None
    out_diag: Path | None = None
    out_svg: Path | None = None
    sweep_name: str | None = None
    sweep_values: list[float] = field(default_factory=list)
    quiet: bool = False

    def legs(self) -> list[tuple[str, ModelParams]]:
        if not self.sweep_name:
            return [("", self.params)]
        return [(f"{self.sweep_name}={v:g}", self.params.with_(**{self.sweep_name: v})) for v in self.sweep_values]


def _param_names() -> set[str]:
    return {f.name for f in fields(ModelParams)}


def params_from_dict(d: dict, base: ModelParams | None = None) -> ModelParams:
    base = base or ModelParams()
    unknown = set(d) - _param_names()
    if unknown:
        raise ValueError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    changes = dict(d)
    if "zeta0" in changes:
        z = changes["zeta0"]
        changes["zeta0"] = complex(z[0], z[1]) if isinstance(z, (list, tuple)) else complex(z)
    for name in ("quad_order", "n_points"):
        if name in changes:
            changes[name] = int(changes[name])
    return base.with_(**changes)


def parse_sweep(text: str) -> tuple[str, list[float]]:
    if "=" not in text:
        raise ValueError("sweep must look like name=v1,v2,...")
    name, vals = text.split("=", 1)
    name = ALIASES.get(name.strip(), name.strip())
    if name not in SWEEPABLE:
        raise ValueError(f"cannot sweep {name!r}; choose from {', '.join(SWEEPABLE)}")
    values = [float(v) for v in vals.split(",") if v.strip()]
    if not values:
        raise ValueError("sweep needs at least one value")
    return name, values


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="inclusion-rh",
        description="Uniformly stressed inclusions in a half-plane via two Riemann-Hilbert problems on an elliptic surface.",
    )
    ap.add_argument("--config", type=Path, help="JSON file with flat keys named like the model fields")
    ap.add_argument("--m", type=float)
    ap.add_argument("--kappa", type=float)
    ap.add_argument("--tau1", dest="tau1_hat", type=float)
    ap.add_argument("--tau1-inf", dest="tau1_inf_hat", type=float)
    ap.add_argument("--n0star", dest="N0_star", type=float)
    ap.add_argument("--n1", dest="N1", type=float)
    ap.add_argument("--b0", type=float)
    ap.add_argument("--xi0", type=float)
    ap.add_argument("--zeta0", type=str, help="RE,IM")
    ap.add_argument("--quad-order", dest="quad_order", type=int)
    ap.add_argument("--points", dest="n_points", type=int)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--sweep", type=str, help="name=v1,v2,... with name in " + ", ".join(SWEEPABLE))
    ap.add_argument("--out-contour", type=Path)
    ap.add_argument("--out-diag", type=Path)
    ap.add_argument("--out-svg", type=Path)
    ap.add_argument("--quiet", action="store_true")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    d: dict = {}
    if args.config is not None:
        with open(args.config) as fh:
            d.update(json.load(fh))
    for name in ("m", "kappa", "tau1_hat", "tau1_inf_hat", "N0_star", "N1", "b0", "xi0", "quad_order", "n_points", "tol"):
        v = getattr(args, name)
        if v is not None:
            d[name] = v
    if args.zeta0 is not None:
        re, im = (float(x) for x in args.zeta0.split(","))
        d["zeta0"] = [re, im]
    params = params_from_dict(d)
    cfg = RunConfig(params, args.out_contour, args.out_diag, args.out_svg, quiet=args.quiet)
    if args.sweep:
        cfg.sweep_name, cfg.sweep_values = parse_sweep(args.sweep)
    return cfg


# --- export ----------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def export_contour(contour: InclusionContour, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["xi", "side", "x", "y"])
        for xi, s, z in zip(contour.xi, contour.side, contour.z):
            w.writerow([_fmt(xi), int(s), _fmt(z.real), _fmt(z.imag)])


def read_contour(path: Path) -> np.ndarray:
    """Rows of (xi, side, x, y) as floats."""
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return np.array([[float(v) for v in r] for r in rows[1:]])


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def diagnostics_dict(diag: Diagnostics) -> dict:
    info = diag.info
    derived = {k: info.get(k) for k in ("k", "K", "b1", "zeta1", "sheet1", "n_a", "n_b", "X_inf", "M")}
    extra = {k: v for k, v in info.items() if k not in derived}
    return _jsonable(
        {
            "params": diag.params.to_dict(),
            "derived": derived,
            "residuals": dict(diag.residuals),
            "passed": dict(diag.passed),
            "contour": extra,
            "errors": list(diag.errors),
            "skipped": list(diag.skipped),
            "pass": diag.ok,
        }
    )


def export_diagnostics(diag: Diagnostics, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(diagnostics_dict(diag), fh, indent=2, sort_keys=False)
        fh.write("\n")


def export_svg(contours: list[InclusionContour], path: Path, size: int = 600) -> None:
    """Closed polylines in physical coordinates, y flipped to screen space."""
    pts = np.concatenate([c.z for c in contours]) if contours else np.zeros(1, complex)
    xmin, xmax = float(pts.real.min()), float(pts.real.max())
    ymin, ymax = min(float(pts.imag.min()), 0.0), max(float(pts.imag.max()), 0.0)
    w = max(xmax - xmin, 1e-12)
    h = max(ymax - ymin, 1e-12)
    xmin, xmax = xmin - 0.1 * w, xmax + 0.1 * w
    ymin, ymax = ymin - 0.1 * h, ymax + 0.1 * h
    w, h = xmax - xmin, ymax - ymin
    stroke = 0.003 * max(w, h)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{int(size * h / w) or 1}" '
        f'viewBox="{_fmt(xmin)} {_fmt(-ymax)} {_fmt(w)} {_fmt(h)}">',
        f'<line x1="{_fmt(xmin)}" y1="0" x2="{_fmt(xmax)}" y2="0" stroke="black" stroke-width="{_fmt(stroke)}"/>',
    ]
    for c in contours:
        z = np.append(c.z, c.z[0])
        coords = " ".join(f"{_fmt(p.real)},{_fmt(-p.imag)}" for p in z)
        lines.append(f'<polyline points="{coords}" fill="none" stroke="blue" stroke-width="{_fmt(stroke)}"/>')
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _leg_path(path: Path | None, tag: str) -> Path | None:
    if path is None or not tag:
        return path
    return path.with_name(f"{path.stem}_{tag}{path.suffix}")


# --- run -------------------------------------------------------------------------


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    legs = cfg.legs()
    bad = [(tag, validate(p)) for tag, p in legs]
    bad = [(tag, r) for tag, r in bad if not r]
    if bad:
        for tag, r in bad:
            print(f"validation error{' [' + tag + ']' if tag else ''}: {r}", file=err)
        return EXIT_VALIDATION

    results = []
    for tag, p in legs:
        diag = run_diagnostics(p)
        results.append((tag, diag))
        if not cfg.quiet:
            status = "pass" if diag.ok else "FAIL"
            c = diag.contour
            extra = f" diameter={c.diameter:.6g} area={abs(c.signed_area):.6g} min|y|={c.min_abs_y:.6g}" if c else ""
            print(f"{tag or 'solve'}: {status}{extra}", file=out)
            for e in diag.errors:
                print(f"  error: {e}", file=out)
            for name, ok in diag.passed.items():
                if not ok:
                    print(f"  residual {name} = {diag.residuals[name]:.3e} above threshold", file=out)

    try:
        for tag, diag in results:
            if cfg.out_contour is not None and diag.contour is not None:
                export_contour(diag.contour, _leg_path(cfg.out_contour, tag))
            if cfg.out_diag is not None:
                export_diagnostics(diag, _leg_path(cfg.out_diag, tag))
        if cfg.out_svg is not None:
            export_svg([d.contour for _, d in results if d.contour is not None], cfg.out_svg)
        if cfg.sweep_name and cfg.out_diag is not None:
            summary = {
                "sweep": cfg.sweep_name,
                "legs": [
                    {
                        "value": getattr(d.params, cfg.sweep_name),
                        "pass": d.ok,
                        "diameter": d.contour.diameter if d.contour else None,
                        "area": abs(d.contour.signed_area) if d.contour else None,
                        "min_abs_y": d.contour.min_abs_y if d.contour else None,
                    }
                    for _, d in results
                ],
            }
            with open(_leg_path(cfg.out_diag, "summary"), "w") as fh:
                json.dump(_jsonable(summary), fh, indent=2)
                fh.write("\n")
    except OSError as exc:
        print(f"I/O error: {exc}", file=err)
        return EXIT_IO

    if any(d.errors and d.state is None for _, d in results):
        return EXIT_SOLVER
    return EXIT_OK if all(d.ok for _, d in results) else EXIT_SOLVER


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
