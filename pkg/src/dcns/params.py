"""Model constants and the derived exponents of the entropy-weighted variables.

The gas is polytropic with P = A e^{S/c_v} rho^gamma and temperature-power-law
viscosities mu = alpha*theta^nu, lambda = beta*theta^nu, kappa = 0.  Everything
downstream works in the variables

    phi = (A*gamma/(gamma-1)) rho^(gamma-1),  l = e^{S/c_v},
    h   = phi^(2*iota),                       n = (a*h)^b,

whose exponents and prefactors are fixed here once per run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConstraintViolation

CV_REL_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the gas model.

    gamma : adiabatic exponent (> 1)
    nu    : viscosity-temperature exponent
    alpha, beta : shear / second viscosity prefactors
    A, R  : pressure and gas constants
    c_v   : specific heat; derived as R/(gamma-1) when omitted
    S_bar : far-field entropy
    """

    gamma: float
    nu: float
    alpha: float
    beta: float
    A: float = 1.0
    R: float = 1.0
    c_v: float | None = None
    S_bar: float = 0.0

    @property
    def visc(self) -> float:
        """Combined 1-D viscosity 2*alpha + beta (coefficient of u_x in Q)."""
        return 2.0 * self.alpha + self.beta


@dataclass(frozen=True)
class DerivedConsts:
    """All derived constants, bundled with the params they came from."""

    params: ModelParams
    c_v: float
    delta: float
    iota: float
    a: float
    b: float
    a1: float
    a2: float
    a3: float
    a4: float
    l_bar: float
    warnings: tuple[str, ...] = field(default=())

    @property
    def gamma(self) -> float:
        return self.params.gamma

    @property
    def nu(self) -> float:
        return self.params.nu

    @property
    def A(self) -> float:
        return self.params.A

    @property
    def R(self) -> float:
        return self.params.R

    @property
    def visc(self) -> float:
        return self.params.visc

    @property
    def phi_coef(self) -> float:
        """Prefactor A*gamma/(gamma-1) mapping rho^(gamma-1) to phi."""
        return self.params.A * self.params.gamma / (self.params.gamma - 1.0)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConstraintViolation(message)


def validate_params(p: ModelParams, strict: bool = True) -> DerivedConsts:
    """Check admissibility of the model constants and derive the rest.

    Strict mode rejects 4*gamma + 3*delta > 7; lenient mode records a warning
    instead so that out-of-theory parameter studies remain possible.
    """
    base = [p.gamma, p.nu, p.alpha, p.beta, p.A, p.R, p.S_bar]
    if p.c_v is not None:
        base.append(p.c_v)
    _require(all(math.isfinite(v) for v in base), "all parameters must be finite")

    _require(p.gamma > 1.0, f"gamma = {p.gamma:g} must satisfy gamma > 1")
    _require(p.alpha > 0.0, f"alpha = {p.alpha:g} must satisfy alpha > 0")
    two_a_three_b = 2.0 * p.alpha + 3.0 * p.beta
    _require(two_a_three_b >= 0.0,
             f"2*alpha + 3*beta = {two_a_three_b:g} must be >= 0")
    _require(p.A > 0.0, f"A = {p.A:g} must be > 0")
    _require(p.R > 0.0, f"R = {p.R:g} must be > 0")

    delta = (p.gamma - 1.0) * p.nu
    _require(0.0 < delta < 1.0,
             f"delta = (gamma-1)*nu = {delta:g} must satisfy 0 < delta < 1")

    warnings: list[str] = []
    gate = 4.0 * p.gamma + 3.0 * delta
    if gate > 7.0:
        msg = f"4*gamma + 3*delta = {gate:g} > 7"
        if strict:
            raise ConstraintViolation(msg)
        warnings.append(msg + " (lenient mode: outside the proven regime)")

    c_v = p.R / (p.gamma - 1.0)
    if p.c_v is not None:
        if abs(p.c_v - c_v) > CV_REL_TOL * abs(c_v):
            raise ConstraintViolation(
                f"c_v = {p.c_v:.17g} inconsistent with R/(gamma-1) = {c_v:.17g}")

    iota = (delta - 1.0) / (2.0 * (p.gamma - 1.0))
    a = (p.A * p.gamma / (p.gamma - 1.0)) ** ((1.0 - delta) / (p.gamma - 1.0))
    b = (2.0 - delta - p.gamma) / (delta - 1.0)
    a1 = (p.gamma - 1.0) / p.gamma
    a2 = a * (p.A / p.R) ** p.nu
    a3 = (p.A / p.R) ** p.nu
    a4 = p.A ** (p.nu - 1.0) * a * a * (p.gamma - 1.0) / p.R ** p.nu
    l_bar = math.exp(p.S_bar / c_v)

    return DerivedConsts(params=p, c_v=c_v, delta=delta, iota=iota, a=a, b=b,
                         a1=a1, a2=a2, a3=a3, a4=a4, l_bar=l_bar,
                         warnings=tuple(warnings))
