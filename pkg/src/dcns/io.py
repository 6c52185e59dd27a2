"""Bit-specified CSV outputs: field snapshots and the diagnostics table.

All values print with 17 significant digits so identical configs reproduce
byte-identical files.
"""
from __future__ import annotations

import numpy as np

from .diagnostics import DiagRecord
from .errors import ConfigError
from .fields import Grid
from .params import DerivedConsts
from .reformulation import ReformState, from_reformulated

SNAPSHOT_HEADER = "x,rho,u,S,phi,l,h,psi,n,theta"
DIAG_HEADER = ("t,mass,momentum,E_k,E_p,E,l_min,l_max,u_linf,phi_min,"
               "w_phi_iota_grad_u,w_h_d2u,w_h14_dl,res_h,res_psi,res_n,bound_ok")


def _g17(value: float) -> str:
    return format(float(value), ".17g")


def write_snapshot(path: str, t: float, state: ReformState, dc: DerivedConsts) -> None:
    phys = from_reformulated(state, dc)
    cols = [state.grid.x, phys.rho, phys.u, phys.S, state.phi, state.l,
            state.h, state.psi, state.n, phys.theta]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# t={_g17(t)}\n")
        fh.write(SNAPSHOT_HEADER + "\n")
        for i in range(state.grid.N):
            fh.write(",".join(_g17(c[i]) for c in cols) + "\n")


def read_snapshot(path: str, grid: Grid, eta: float = 0.0,
                  eps: float = 0.0) -> tuple[float, ReformState]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("# t="):
        raise ConfigError(f"{path}: missing '# t=' snapshot time line")
    t = float(lines[0][4:])
    if lines[1] != SNAPSHOT_HEADER:
        raise ConfigError(f"{path}: unexpected snapshot header {lines[1]!r}")
    data = np.array([[float(tok) for tok in ln.split(",")] for ln in lines[2:]])
    if data.shape != (grid.N, 10):
        raise ConfigError(
            f"{path}: snapshot shape {data.shape} does not match grid N = {grid.N}")
    if not np.allclose(data[:, 0], grid.x, rtol=0.0, atol=1e-12 * grid.dx):
        raise ConfigError(f"{path}: snapshot nodes do not match the config grid")
    state = ReformState(grid=grid, phi=data[:, 4], u=data[:, 2], l=data[:, 5],
                        h=data[:, 6], psi=data[:, 7], n=data[:, 8],
                        eta=eta, eps=eps)
    return t, state


def write_diagnostics(path: str, records: list[DiagRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(DIAG_HEADER + "\n")
        for r in records:
            row = [r.t, r.mass, r.momentum, r.E_k, r.E_p, r.E, r.l_min, r.l_max,
                   r.u_linf, r.phi_min, r.w_phi_iota_grad_u, r.w_h_d2u,
                   r.w_h14_dl, r.res_h, r.res_psi, r.res_n]
            fh.write(",".join(_g17(v) for v in row)
                     + f",{1 if r.bound_ok else 0}\n")
