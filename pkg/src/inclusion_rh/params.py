"""Model and numerical parameters, validation and closed-form constants."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

from .elliptic import ellipk

# stress tau_2 inside the inclusion; only the decoupled case tau_2 = 0 is solved
TAU2 = 0.0
# the additive displacement constant a_1; only N0* = N0 - a1 is user-facing
A1 = 0.0


@dataclass(frozen=True)
class ModelParams:
    kappa: float = 0.5
    tau1_hat: float = -1.0
    tau1_inf_hat: float = -2.0
    m: float = 4.0
    N0_star: float = 0.0
    N1: float = 1.0
    b0: float = 0.0
    xi0: float = -1.0
    zeta0: complex = 0.5 + 0.75j
    quad_order: int = 64
    n_points: int = 400
    tol: float = 1e-6

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["zeta0"] = [self.zeta0.real, self.zeta0.imag]
        return d


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(self.errors)


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


def validate(params: ModelParams) -> ValidationReport:
    p = params
    errors = []
    if p.kappa == 1.0:
        errors.append("kappa singular: kappa = 1 makes lambda = kappa/(1-kappa) undefined")
    elif not p.kappa > 0.0:
        errors.append("kappa must be positive")
    if p.tau1_hat == p.tau1_inf_hat:
        errors.append("no solution exists for tau1 = tau1_inf")
    if p.tau1_hat == 0.0:
        errors.append("tau1_hat must be nonzero (the map carries a 1/tau1 factor)")
    if not p.m > 1.0:
        errors.append("m must exceed 1")
    if p.N1 == 0.0:
        errors.append("N1 must be nonzero")
    if not p.xi0 < 0.0:
        errors.append("xi0 must be negative (kernel pole would collide with a slit)")
    z0 = complex(p.zeta0)
    if z0.imag == 0.0:
        errors.append("zeta0 must be off the real axis (factorization pole on the contour)")
    if p.quad_order < 8:
        errors.append("quad_order must be >= 8")
    if p.n_points < 16:
        errors.append("n_points must be >= 16")
    if not p.tol > 0.0:
        errors.append("tol must be positive")
    for name in ("kappa", "tau1_hat", "tau1_inf_hat", "m", "N0_star", "N1", "b0", "xi0", "tol"):
        if not math.isfinite(getattr(p, name)):
            errors.append(f"{name} must be finite")
    if not (math.isfinite(z0.real) and math.isfinite(z0.imag)):
        errors.append("zeta0 must be finite")
    return ValidationReport(errors)


@dataclass(frozen=True)
class DerivedConstants:
    lam: float
    k: float
    K: float
    Kp: float
    b1: float
    A: complex
    B: float
    infinity_ratio: complex


def derive(params: ModelParams) -> DerivedConstants:
    report = validate(params)
    if not report:
        raise ValidationError(report)
    p = params
    lam = p.kappa / (1.0 - p.kappa)
    k = p.m**-0.5
    K = ellipk(k)
    Kp = ellipk(math.sqrt((1.0 - k) * (1.0 + k)))
    b1 = p.b0 - math.pi * p.N1 / (k * K)
    ratio = lam * (p.tau1_inf_hat - p.tau1_hat) / (1j * p.tau1_hat)
    return DerivedConstants(
        lam=lam, k=k, K=K, Kp=Kp, b1=b1, A=-4j * k * K, B=4 * k * Kp, infinity_ratio=ratio
    )
