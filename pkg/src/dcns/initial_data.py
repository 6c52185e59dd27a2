"""Admissible initial data and the discrete compatibility checks.

The density family is rho_0(x) = (1+x^2)^(-kappa) (vacuum only in the far
field), the velocity a compactly supported C^3 bump, and the entropy a smooth
decaying perturbation of the far-field constant.  The lift adds eta to phi_0
so the discrete flow starts uniformly away from vacuum:

    phi_0^eta = phi_0 + eta,   h_0^eta = (phi_0 + eta)^(2 iota).

Compatibility is probed by dividing derivative fields of the data by the
singular weights phi_0^(-iota) etc. and taking discrete L^2 norms; finiteness
and stability of those norms under grid refinement is the checkable surrogate
of the continuous conditions.
"""
from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InadmissibleKappa, NonpositiveCoefficient, SupportTooWide
from .fields import Grid
from .params import DerivedConsts
from .reformulation import ReformState, lame_of, pospow


@dataclass(frozen=True)
class InitSpec:
    """Parameters of the initial-data family.

    kappa     : density decay exponent
    q         : integrability exponent (> 3), enters only the kappa bound
    u0_amp    : bump amplitude of the initial velocity
    u0_radius : support radius of the bump (must sit strictly inside the box)
    s0_amp    : amplitude of the entropy perturbation S_bar + s/(1+x^2)
    eta       : density lift (> 0)
    """

    kappa: float
    q: float = 24.0
    u0_amp: float = 0.0
    u0_radius: float = 1.0
    s0_amp: float = 0.0
    eta: float = 1e-2


@dataclass
class CompatReport:
    """Discrete norms of the singularly weighted data derivatives.

    g1 = phi0^iota u0_x, g2 = phi0^(2 iota) L u0,
    g3 = phi0^iota (phi0^(2 iota) L u0)_x, g4 = phi0^iota (l0)_xx,
    all in L^2; grad_sqrt_h_l6 = |(sqrt h0)_x|_6 is reported, never gated.
    trend holds norm ratios fine/coarse when a coarse report is supplied.
    """

    g1_l2: float
    g2_l2: float
    g3_l2: float
    g4_l2: float
    grad_sqrt_h_l6: float
    threshold: float
    passed: bool
    trend: dict[str, float] = field(default_factory=dict)

    @property
    def norms(self) -> dict[str, float]:
        return {"g1_l2": self.g1_l2, "g2_l2": self.g2_l2,
                "g3_l2": self.g3_l2, "g4_l2": self.g4_l2}


def kappa_bounds(dc: DerivedConsts, q: float) -> tuple[float, float]:
    """Admissible open interval for the density decay exponent."""
    lo = 1.0 / (4.0 * (dc.gamma - 1.0))
    hi = (1.0 - 3.0 / q) / (2.0 * (1.0 - dc.delta))
    return lo, hi


def _check_admissible(spec: InitSpec, dc: DerivedConsts, strict: bool) -> None:
    if spec.q <= 3.0:
        raise InadmissibleKappa(f"q = {spec.q:g} must be > 3")
    lo, hi = kappa_bounds(dc, spec.q)
    gd = dc.gamma + dc.delta
    msgs = []
    if not (lo < spec.kappa < hi):
        if lo >= hi:
            msgs.append(f"empty kappa interval ({lo:g}, {hi:g}) for q = {spec.q:g}")
        else:
            msgs.append(f"kappa = {spec.kappa:g} outside ({lo:g}, {hi:g})")
    if not (1.5 + dc.delta / 2.0 < gd <= 2.0):
        msgs.append(f"gamma + delta = {gd:g} violates 3/2 + delta/2 < gamma + delta <= 2")
    if msgs:
        if strict:
            raise InadmissibleKappa("; ".join(msgs))
        for m in msgs:
            _warnings.warn(m + " (lenient mode)", stacklevel=3)


def velocity_bump(x: np.ndarray, amp: float, radius: float) -> np.ndarray:
    """C^3 compact bump amp*(1-(x/r)^2)^4 on |x| < r, zero outside."""
    s = x / radius
    inside = np.abs(s) < 1.0
    out = np.zeros_like(x)
    out[inside] = amp * (1.0 - s[inside] ** 2) ** 4
    return out


def gen_initial(spec: InitSpec, grid: Grid, dc: DerivedConsts,
                strict: bool = True, eps: float = 0.0) -> ReformState:
    """Build the lifted initial state on a grid."""
    if spec.u0_radius >= grid.L:
        raise SupportTooWide(
            f"u0_radius = {spec.u0_radius:g} must be < L = {grid.L:g}")
    if not spec.eta > 0.0:
        raise NonpositiveCoefficient(f"eta = {spec.eta:g} must be > 0")
    _check_admissible(spec, dc, strict)

    x = grid.x
    rho0 = (1.0 + x * x) ** (-spec.kappa)
    phi0 = dc.phi_coef * pospow(rho0, dc.gamma - 1.0, "rho0") + spec.eta
    u0 = velocity_bump(x, spec.u0_amp, spec.u0_radius)
    f = spec.s0_amp / (1.0 + x * x)
    l0 = np.exp((dc.params.S_bar + f) / dc.c_v)
    h0 = pospow(phi0, 2.0 * dc.iota, "phi0")
    psi0 = (dc.a * dc.delta / (dc.delta - 1.0)) * grid.ddx(h0)
    n0 = pospow(dc.a * h0, dc.b, "a*h0")
    return ReformState(grid=grid, phi=phi0, u=u0, l=l0, h=h0, psi=psi0, n=n0,
                       eta=spec.eta, eps=eps)


def check_compatibility(r0: ReformState, dc: DerivedConsts,
                        threshold: float = np.inf,
                        coarse: CompatReport | None = None) -> CompatReport:
    """Compute the weighted data norms; reports, never throws.

    Weights use the unlifted phi_0 = phi - eta: the data-class conditions are
    lift-independent, and only the unlifted weight is singular enough in the
    far field to detect slowly decaying data.
    """
    grid = r0.grid
    phi0 = r0.phi - r0.eta
    w_iota = pospow(phi0, dc.iota, "phi0")
    w_2iota = pospow(phi0, 2.0 * dc.iota, "phi0")
    lu = lame_of(r0.u, grid, dc.params)

    g1 = w_iota * grid.ddx(r0.u)
    g2 = w_2iota * lu
    g3 = w_iota * grid.ddx(w_2iota * lu)
    g4 = w_iota * grid.d2dx2(r0.l)
    sqrt_h = pospow(r0.h, 0.5, "h0")

    norms = {
        "g1_l2": grid.lp_norm(g1, 2),
        "g2_l2": grid.lp_norm(g2, 2),
        "g3_l2": grid.lp_norm(g3, 2),
        "g4_l2": grid.lp_norm(g4, 2),
    }
    grad_sqrt_h_l6 = grid.lp_norm(grid.ddx(sqrt_h), 6)

    trend: dict[str, float] = {}
    if coarse is not None:
        for key, val in norms.items():
            ref = getattr(coarse, key)
            trend[key] = val / ref if ref > 0.0 else (0.0 if val == 0.0 else np.inf)

    passed = all(v <= threshold for v in norms.values())
    return CompatReport(**norms, grad_sqrt_h_l6=grad_sqrt_h_l6,
                        threshold=threshold, passed=passed, trend=trend)
