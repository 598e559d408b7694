"""Objective functionals: the flux energy F, the quadratic data term G,
their sum J_h, and the augmented Lagrangian coupling them.

F comes in two quadrature flavors: a reference 3x3-Gauss evaluation with
pointwise p(x), and a one-point barycenter-rule evaluation consistent with
grad_F and with the solver's per-element flux equation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dg import DgScalar, DgVector, b_operator
from .exponent import ExponentField
from .mesh import Mesh, edge_weights
from .quadrature import boundary_points, element_points

__all__ = [
    "ProblemData",
    "EnergyReport",
    "eval_F",
    "eval_F_barycenter",
    "grad_F",
    "eval_G",
    "eval_Jh",
    "eval_lagrangian",
]


@dataclass
class ProblemData:
    """Mesh, exponent field, data xi, boundary datum u_D, and penalty r > 0."""

    mesh: Mesh
    exponent: ExponentField
    xi: callable
    u_D: callable
    r: float = 1.0

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("penalty parameter r must be positive")


@dataclass(frozen=True)
class EnergyReport:
    F_value: float
    G_value: float
    J_value: float
    constraint_residual: float


def eval_F(q: DgVector, data: ProblemData) -> float:
    """Integral of |q|^{p(x)} / p(x), 3x3 Gauss with pointwise p."""
    mesh = data.mesh
    mag = np.hypot(q.values[:, 0], q.values[:, 1])
    xq, yq, wq = element_points(mesh)
    pq = np.asarray(data.exponent(xq, yq), float)
    vals = np.where(mag[:, None] > 0.0, mag[:, None] ** pq, 0.0) / pq
    return float((vals * wq[None, :]).sum())


def eval_F_barycenter(q: DgVector, data: ProblemData) -> float:
    """One-point variant: |k| |q_k|^{p_bar} / p_bar with barycenter exponents."""
    mesh = data.mesh
    p_bar = data.exponent.barycenter_values(mesh)
    mag = np.hypot(q.values[:, 0], q.values[:, 1])
    vals = np.where(mag > 0.0, mag ** p_bar, 0.0) / p_bar
    return float((mesh.areas * vals).sum())


def grad_F(q: DgVector, data: ProblemData) -> DgVector:
    """Per-element derivative density |q|^{p_bar - 2} q, zero where q = 0."""
    mesh = data.mesh
    p_bar = data.exponent.barycenter_values(mesh)
    mag = np.hypot(q.values[:, 0], q.values[:, 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(mag > 0.0, mag ** (p_bar - 2.0), 0.0)
    return DgVector(mesh, factor[:, None] * q.values)


def eval_G(v: DgScalar, data: ProblemData) -> float:
    """Half of: mean-square data misfit + weighted boundary and jump penalties."""
    mesh = data.mesh
    xq, yq, wq = element_points(mesh)
    data_term = float((wq[None, :] * (v.values[:, None] - data.xi(xq, yq)) ** 2).sum())

    w_int, w_bnd = edge_weights(mesh, data.exponent)
    du = v.values[mesh.int_plus] - v.values[mesh.int_minus]
    jump_term = float((w_int * mesh.int_length * du ** 2).sum())

    bx, by, bw = boundary_points(mesh)
    diff = v.values[mesh.bnd_element][:, None] - data.u_D(bx, by)
    bnd_term = float((w_bnd[:, None] * bw * diff ** 2).sum())
    return 0.5 * (data_term + jump_term + bnd_term)


def eval_Jh(v: DgScalar, data: ProblemData) -> EnergyReport:
    """Total objective F(Bv) + G(v) with the reference F quadrature."""
    fv = eval_F(b_operator(v), data)
    gv = eval_G(v, data)
    return EnergyReport(F_value=fv, G_value=gv, J_value=fv + gv,
                        constraint_residual=0.0)


def eval_lagrangian(v: DgScalar, q: DgVector, lam: DgVector,
                    data: ProblemData) -> float:
    """F(q) + G(v) + <lam, Bv - q> + (r/2) ||Bv - q||^2 (L2 pairings)."""
    mesh = data.mesh
    bv = b_operator(v)
    gap = bv.values - q.values
    inner = float((mesh.areas[:, None] * lam.values * gap).sum())
    penalty = float((mesh.areas[:, None] * gap ** 2).sum())
    return (eval_F(q, data) + eval_G(v, data) + inner
            + 0.5 * data.r * penalty)
