"""Per-time-level observables: conserved integrals, bounds, weighted norms,
and the relation residuals of the variable change.

The velocity lower bound rides on the exact discrete chain

    |integral rho u| <= |u|_inf * integral rho,
    |integral rho u| <= sqrt(2 m E_k)        (Cauchy-Schwarz, shared weights),

so with conserved mass and momentum |u|_inf can never fall below
|P(0)|/m(0); the slack term converts measured conservation drift into the
tolerance of that statement.  l_min/l_max include the far-field value, since
the entropy floor is an infimum over the whole line and boundary inflow on
the truncated box legitimately carries the far-field constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DerivedConsts
from .reformulation import ReformState, pospow


@dataclass
class DiagRecord:
    """Snapshot observables at one time level."""

    t: float
    mass: float
    momentum: float
    E_k: float
    E_p: float
    E: float
    l_min: float
    l_max: float
    u_linf: float
    phi_min: float
    u_grad_linf: float
    w_phi_iota_grad_u: float
    w_h_d2u: float
    w_h14_dl: float
    psi_lq: float
    psi_d13: float
    res_h: float
    res_psi: float
    res_n: float
    psi_consistency: float
    slack: float
    bound_ok: bool


def record(state: ReformState, dc: DerivedConsts,
           ref0: DiagRecord | None = None, q: float = 24.0) -> DiagRecord:
    """Compute all observables; bound_ok is judged against the t=0 record."""
    grid = state.grid
    rho = pospow(state.phi / dc.phi_coef, 1.0 / (dc.gamma - 1.0), "phi")
    u, l = state.u, state.l
    press = dc.A * pospow(rho, dc.gamma, "rho") * l

    mass = grid.integrate(rho)
    momentum = grid.integrate(rho * u)
    e_k = 0.5 * grid.integrate(rho * u * u)
    e_p = grid.integrate(press) / (dc.gamma - 1.0)

    phi_2iota = pospow(state.phi, 2.0 * dc.iota, "phi")
    psi_of_phi = (dc.a * dc.delta / (dc.delta - 1.0)) * grid.ddx(phi_2iota)
    psi_of_h = (dc.a * dc.delta / (dc.delta - 1.0)) * grid.ddx(state.h)

    u_linf = grid.lp_norm(u, np.inf)
    rec = DiagRecord(
        t=0.0,
        mass=mass,
        momentum=momentum,
        E_k=e_k,
        E_p=e_p,
        E=e_k + e_p,
        l_min=min(float(np.min(l)), dc.l_bar),
        l_max=max(float(np.max(l)), dc.l_bar),
        u_linf=u_linf,
        phi_min=float(np.min(state.phi)),
        u_grad_linf=grid.lp_norm(grid.ddx(u), np.inf),
        w_phi_iota_grad_u=grid.lp_norm(
            pospow(state.phi, dc.iota, "phi") * grid.ddx(u), 2),
        w_h_d2u=grid.lp_norm(state.h * grid.d2dx2(u), 2),
        w_h14_dl=grid.lp_norm(pospow(state.h, 0.25, "h") * grid.ddx(l), 6),
        psi_lq=grid.lp_norm(state.psi, q),
        psi_d13=grid.lp_norm(grid.ddx(state.psi), 3),
        res_h=grid.lp_norm(state.h - phi_2iota, np.inf),
        res_psi=grid.lp_norm(state.psi - psi_of_phi, 2),
        res_n=grid.lp_norm(state.n - pospow(dc.a * state.h, dc.b, "a*h"), np.inf),
        psi_consistency=grid.lp_norm(state.psi - psi_of_h, 2),
        slack=0.0,
        bound_ok=True,
    )

    ref = ref0 if ref0 is not None else rec
    if abs(ref.momentum) > 0.0 and ref.mass > 0.0:
        drift = 2.0 * (abs(momentum - ref.momentum)
                       + abs(ref.momentum) * abs(mass - ref.mass) / ref.mass) / ref.mass
        rec.slack = drift
        rec.bound_ok = u_linf >= abs(ref.momentum) / ref.mass - drift
    return rec


@dataclass
class DriftReport:
    """Relative (or absolute, when the reference vanishes) drift per quantity."""

    drift: dict[str, float]
    absolute: dict[str, bool]
    slopes: dict[str, float] | None = None


def drift_report(records: list[DiagRecord],
                 refined: list[DiagRecord] | None = None) -> DriftReport:
    """Max drift of mass, momentum, and total energy over the records.

    When a second record list from a simultaneously refined run is supplied,
    slopes hold the empirical order log2(drift/refined drift).
    """
    if len(records) < 2:
        raise ValueError("need at least two records to measure drift")

    def one(recs: list[DiagRecord]) -> tuple[dict[str, float], dict[str, bool]]:
        r0 = recs[0]
        out: dict[str, float] = {}
        flags: dict[str, bool] = {}
        for name in ("mass", "momentum", "E"):
            q0 = getattr(r0, name)
            dev = max(abs(getattr(r, name) - q0) for r in recs)
            if q0 == 0.0:
                out[name] = dev
                flags[name] = True
            else:
                out[name] = dev / abs(q0)
                flags[name] = False
        return out, flags

    drift, absolute = one(records)
    slopes = None
    if refined is not None:
        fine, _ = one(refined)
        slopes = {}
        for name, coarse_val in drift.items():
            if fine[name] > 0.0 and coarse_val > 0.0:
                slopes[name] = math.log2(coarse_val / fine[name])
            else:
                slopes[name] = math.inf if coarse_val > 0.0 else math.nan
    return DriftReport(drift=drift, absolute=absolute, slopes=slopes)


def trajectory_records(times, states, dc: DerivedConsts,
                       q: float = 24.0) -> list[DiagRecord]:
    """Records along a trajectory, each judged against the t=0 record."""
    records: list[DiagRecord] = []
    ref0: DiagRecord | None = None
    for t, state in zip(times, states):
        rec = record(state, dc, ref0=ref0, q=q)
        rec.t = float(t)
        records.append(rec)
        if ref0 is None:
            ref0 = rec
    return records


def entropy_floor_deficit(records: list[DiagRecord]) -> float:
    """Worst drop of min l below its initial level (>= 0 means a drop)."""
    l0 = records[0].l_min
    return max(l0 - r.l_min for r in records)


def positivity_floor_deficit(records: list[DiagRecord], dc: DerivedConsts) -> float:
    """Worst deficit of phi_min below its characteristic-path floor.

    The floor is phi_min(0) * exp(-(gamma-1) * trapz |u_x|_inf dt) with the
    time integral accumulated by the trapezoid rule over the records.
    """
    phi0 = records[0].phi_min
    worst = 0.0
    integral = 0.0
    for prev, cur in zip(records, records[1:]):
        integral += 0.5 * (prev.u_grad_linf + cur.u_grad_linf) * (cur.t - prev.t)
        floor = phi0 * math.exp(-(dc.gamma - 1.0) * integral)
        worst = max(worst, floor - cur.phi_min)
    return worst
