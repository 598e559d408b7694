"""Augmented-Lagrangian decomposition-coordination iterations.

Both algorithms alternate a linear SPD solve for u, a per-element scalar
root solve recovering the auxiliary flux eta, and a multiplier update
lam <- lam + rho (Bu - eta). The uncoupled variant performs one u-solve and
one eta-update per multiplier step; the coupled variant iterates the pair
to a joint minimum of the augmented Lagrangian before each multiplier step.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .dg import DgScalar, DgVector, l2_norm, lifting_matrices
from .energy import ProblemData, eval_Jh
from .mesh import edge_weights
from .quadrature import boundary_points, element_points

__all__ = [
    "Algorithm",
    "SolverConfig",
    "SolverState",
    "IterationRecord",
    "StepSizeWarning",
    "SystemMatrix",
    "assemble_matrix",
    "assemble_rhs",
    "solve_linear",
    "scalar_root",
    "eta_update",
    "lambda_update",
    "stopping_check",
    "run",
    "run_coupled",
    "run_uncoupled",
    "write_trace_csv",
]

GOLDEN = 0.5 * (1.0 + np.sqrt(5.0))


class Algorithm(IntEnum):
    COUPLED = 1
    UNCOUPLED = 2


class StepSizeWarning(UserWarning):
    """Raised as a warning when rho violates the convergence bound."""


@dataclass
class SolverConfig:
    r: float = 1.0
    rho: float | None = None  # defaults to r
    algorithm: Algorithm = Algorithm.UNCOUPLED
    tol_outer: float = 1e-8
    tol_inner: float = 1e-10
    max_outer: int = 500
    max_inner: int = 200
    linear_tol: float = 1e-12
    require_constraint: bool = False
    force_step_size: bool = False

    def __post_init__(self):
        # r = 0 is permitted for bare assembly; the run entry points insist
        # on r > 0, which both convergence bounds require
        if self.r < 0:
            raise ValueError("penalty parameter r must be nonnegative")
        if self.tol_outer <= 0 or self.tol_inner <= 0 or self.linear_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration limits must be positive")

    @property
    def effective_rho(self) -> float:
        return self.r if self.rho is None else self.rho


@dataclass
class IterationRecord:
    iteration: int
    residual_u: float
    residual_constraint: float
    residual_lambda: float
    energy: float


@dataclass
class SolverState:
    u: DgScalar
    eta: DgVector
    lam: DgVector
    iteration: int = 0
    residual_u: float = np.inf
    residual_constraint: float = np.inf
    residual_lambda: float = np.inf
    energy: float = np.nan
    converged: bool = False
    inner_converged: bool = True
    history: list = field(default_factory=list)


@dataclass
class SystemMatrix:
    matrix: sp.csc_matrix
    factor: object  # splu factorization

    @property
    def shape(self):
        return self.matrix.shape


def _zero_state(mesh) -> SolverState:
    m = mesh.n_elements
    return SolverState(u=DgScalar(mesh, np.zeros(m)),
                       eta=DgVector(mesh, np.zeros((m, 2))),
                       lam=DgVector(mesh, np.zeros((m, 2))))


def _check_step_size(cfg: SolverConfig) -> None:
    rho, r = cfg.effective_rho, cfg.r
    bound = 2.0 * r if cfg.algorithm == Algorithm.COUPLED else GOLDEN * r
    if 0.0 < rho < bound:
        return
    warnings.warn(
        f"step size rho={rho:g} outside the convergence range (0, {bound:g}) "
        f"for algorithm {int(cfg.algorithm)}", StepSizeWarning, stacklevel=3)
    if not cfg.force_step_size:
        raise ValueError(
            "step size violates the convergence bound; set force_step_size "
            "to proceed anyway")


def assemble_matrix(data: ProblemData, cfg: SolverConfig) -> SystemMatrix:
    """SPD system: mass + r B^T A B + interior jump and boundary penalties."""
    mesh = data.mesh
    m = mesh.n_elements
    lx, ly = lifting_matrices(mesh)
    area = sp.diags(mesh.areas)
    mat = sp.diags(mesh.areas) + cfg.r * (lx.T @ area @ lx + ly.T @ area @ ly)

    w_int, w_bnd = edge_weights(mesh, data.exponent)
    if len(mesh.int_plus):
        vals = w_int * mesh.int_length
        ij = np.concatenate([mesh.int_plus, mesh.int_minus,
                             mesh.int_plus, mesh.int_minus])
        ji = np.concatenate([mesh.int_plus, mesh.int_minus,
                             mesh.int_minus, mesh.int_plus])
        dat = np.concatenate([vals, vals, -vals, -vals])
        mat = mat + sp.csr_matrix((dat, (ij, ji)), shape=(m, m))
    mat = mat + sp.csr_matrix((w_bnd * mesh.bnd_length,
                               (mesh.bnd_element, mesh.bnd_element)),
                              shape=(m, m))
    mat = sp.csc_matrix(mat)
    return SystemMatrix(matrix=mat, factor=spla.splu(mat))


def _load_vector(data: ProblemData) -> np.ndarray:
    """Iteration-independent part of the right-hand side: data and boundary."""
    mesh = data.mesh
    xq, yq, wq = element_points(mesh)
    load = (np.asarray(data.xi(xq, yq), float) * wq[None, :]).sum(axis=1)
    _, w_bnd = edge_weights(mesh, data.exponent)
    bx, by, bw = boundary_points(mesh)
    bvals = (np.asarray(data.u_D(bx, by), float) * bw).sum(axis=1) * w_bnd
    np.add.at(load, mesh.bnd_element, bvals)
    return load


def assemble_rhs(state: SolverState, data: ProblemData,
                 cfg: SolverConfig) -> np.ndarray:
    """Load vector plus the flux coupling term integral (r eta - lam) . Bphi."""
    mesh = data.mesh
    load = _load_vector(data)
    lx, ly = lifting_matrices(mesh)
    s = cfg.r * state.eta.values - state.lam.values
    a = mesh.areas
    return load + lx.T @ (a * s[:, 0]) + ly.T @ (a * s[:, 1])


def solve_linear(matrix: SystemMatrix, rhs: np.ndarray,
                 linear_tol: float = 1e-12) -> np.ndarray:
    """Direct sparse solve with one step of iterative refinement if needed."""
    u = matrix.factor.solve(rhs)
    scale = max(1.0, float(np.abs(rhs).max(initial=0.0)))
    resid = rhs - matrix.matrix @ u
    if np.abs(resid).max(initial=0.0) > linear_tol * scale:
        u = u + matrix.factor.solve(resid)
    return u


def _root_many(p_bar: np.ndarray, r: float, c: np.ndarray) -> np.ndarray:
    """Vector solve of x^{p_bar - 1} + r x = c, x >= 0, safeguarded Newton.

    The Newton derivative (p_bar - 1) x^{p_bar - 2} blows up at 0 for
    p_bar < 2, so steps leaving the bracket fall back to bisection.
    """
    if r <= 0:
        raise ValueError("flux root solve requires r > 0")
    c = np.asarray(c, float)
    p_bar = np.broadcast_to(np.asarray(p_bar, float), c.shape)
    x = c / (1.0 + r)
    lo = np.zeros_like(c)
    hi = np.maximum(c, c / r)  # f(c/r) = (c/r)^{p_bar-1} >= 0 brackets above
    active = c > 0.0
    for _ in range(200):
        with np.errstate(all="ignore"):
            f = np.where(active, x ** (p_bar - 1.0) + r * x - c, 0.0)
        lo = np.where(active & (f <= 0.0), x, lo)
        hi = np.where(active & (f > 0.0), x, hi)
        done = np.abs(f) <= 1e-12 * np.maximum(1.0, c)
        if np.all(done | ~active):
            break
        with np.errstate(all="ignore"):
            xn = x - f / ((p_bar - 1.0) * x ** (p_bar - 2.0) + r)
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        x = np.where(active & ~done, xn, x)
    return np.where(active, x, 0.0)


def scalar_root(p_bar: float, r: float, c: float) -> float:
    """The unique x >= 0 with x^{p_bar - 1} + r x = c."""
    if not (1.0 < p_bar <= 2.0):
        raise ValueError("p_bar must lie in (1, 2]")
    if r <= 0 or c < 0:
        raise ValueError("requires r > 0 and c >= 0")
    return float(_root_many(np.array([p_bar]), r, np.array([c]))[0])


def _eta_from(bu: np.ndarray, lam: np.ndarray, p_bar: np.ndarray,
              r: float) -> np.ndarray:
    """Per-element minimizer of the flux subproblem.

    Solves |eta|^{p_bar - 2} eta + r (eta - bu) = lam elementwise: the
    solution is parallel to s = lam + r bu, its magnitude x solves
    x^{p_bar - 1} + r x = |s|, and eta = s / (x^{p_bar - 2} + r).
    """
    s = lam + r * bu
    c = np.hypot(s[:, 0], s[:, 1])
    x = _root_many(p_bar, r, c)
    with np.errstate(all="ignore"):
        denom = x ** (p_bar - 2.0) + r
    ok = (c > 0.0) & np.isfinite(denom)
    return np.where(ok[:, None], s / denom[:, None], 0.0)


def eta_update(u: DgScalar, lam: DgVector, data: ProblemData,
               cfg: SolverConfig) -> DgVector:
    """Flux recovery step for the current u and multiplier."""
    mesh = data.mesh
    lx, ly = lifting_matrices(mesh)
    bu = np.column_stack([lx @ u.values, ly @ u.values])
    p_bar = data.exponent.barycenter_values(mesh)
    return DgVector(mesh, _eta_from(bu, lam.values, p_bar, cfg.r))


def lambda_update(state: SolverState, cfg: SolverConfig) -> DgVector:
    """Multiplier step lam + rho (Bu - eta)."""
    mesh = state.u.mesh
    lx, ly = lifting_matrices(mesh)
    bu = np.column_stack([lx @ state.u.values, ly @ state.u.values])
    new = state.lam.values + cfg.effective_rho * (bu - state.eta.values)
    return DgVector(mesh, new)


def stopping_check(state: SolverState, cfg: SolverConfig) -> bool:
    """Relative u-increment test; with require_constraint also Bu = eta.

    The constraint residual decays geometrically with the multiplier
    updates, so demanding it at tol_outer costs many extra iterations after
    u has stabilized; it is opt-in for runs that need a tight saddle point.
    """
    if state.iteration < 1:
        return False
    ok = state.residual_u <= cfg.tol_outer * max(1.0, l2_norm(state.u))
    if cfg.require_constraint:
        ok = ok and (state.residual_constraint
                     <= cfg.tol_outer * max(1.0, l2_norm(state.eta)))
    return ok


def _iterate(data: ProblemData, cfg: SolverConfig, init: SolverState | None,
             coupled: bool) -> SolverState:
    if cfg.r <= 0:
        raise ValueError("iteration requires r > 0")
    _check_step_size(cfg)
    mesh = data.mesh
    matrix = assemble_matrix(data, cfg)
    load = _load_vector(data)
    lx, ly = lifting_matrices(mesh)
    a = mesh.areas
    p_bar = data.exponent.barycenter_values(mesh)
    state = init if init is not None else _zero_state(mesh)
    eta = state.eta.values.copy()
    lam = state.lam.values.copy()
    u_prev = state.u.values.copy()
    history = []
    inner_ok = True

    def usolve(eta_cur, lam_cur):
        s = cfg.r * eta_cur - lam_cur
        rhs = load + lx.T @ (a * s[:, 0]) + ly.T @ (a * s[:, 1])
        u = solve_linear(matrix, rhs, cfg.linear_tol)
        return u, np.column_stack([lx @ u, ly @ u])

    converged = False
    n = 0
    for n in range(1, cfg.max_outer + 1):
        if coupled:
            # joint (u, eta) minimization by alternation at frozen lam
            u, bu = usolve(eta, lam)
            eta_new = _eta_from(bu, lam, p_bar, cfg.r)
            inner_this = False
            for _ in range(cfg.max_inner - 1):
                step = np.sqrt((a[:, None] * (eta_new - eta) ** 2).sum())
                eta = eta_new
                if step <= cfg.tol_inner:
                    inner_this = True
                    break
                u, bu = usolve(eta, lam)
                eta_new = _eta_from(bu, lam, p_bar, cfg.r)
            eta = eta_new
            inner_ok = inner_ok and inner_this
        else:
            u, bu = usolve(eta, lam)
            eta = _eta_from(bu, lam, p_bar, cfg.r)

        gap = bu - eta
        lam_new = lam + cfg.effective_rho * gap
        res_u = float(np.sqrt((a * (u - u_prev) ** 2).sum()))
        res_c = float(np.sqrt((a[:, None] * gap ** 2).sum()))
        res_l = float(np.sqrt((a[:, None] * (lam_new - lam) ** 2).sum()))
        lam = lam_new
        u_prev = u

        state = SolverState(
            u=DgScalar(mesh, u), eta=DgVector(mesh, eta),
            lam=DgVector(mesh, lam), iteration=n,
            residual_u=res_u, residual_constraint=res_c, residual_lambda=res_l,
            energy=eval_Jh(DgScalar(mesh, u), data).J_value,
            inner_converged=inner_ok, history=history,
        )
        history.append(IterationRecord(n, res_u, res_c, res_l, state.energy))
        if stopping_check(state, cfg):
            converged = True
            break

    state.converged = converged
    return state


def run_uncoupled(data: ProblemData, cfg: SolverConfig,
                  init: SolverState | None = None) -> SolverState:
    """One linear solve and one flux recovery per multiplier update."""
    return _iterate(data, cfg, init, coupled=False)


def run_coupled(data: ProblemData, cfg: SolverConfig,
                init: SolverState | None = None) -> SolverState:
    """Inner alternation to the joint (u, eta) minimum per multiplier update."""
    return _iterate(data, cfg, init, coupled=True)


def run(data: ProblemData, cfg: SolverConfig,
        init: SolverState | None = None) -> SolverState:
    """Dispatch on cfg.algorithm."""
    if cfg.algorithm == Algorithm.COUPLED:
        return run_coupled(data, cfg, init)
    return run_uncoupled(data, cfg, init)


def write_trace_csv(state: SolverState, path) -> None:
    """Per-iteration residual and energy trace."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["iter", "residual_u", "residual_constraint",
                      "residual_lambda", "Jh"])
        for rec in state.history:
            out.writerow([rec.iteration,
                          "%.12g" % rec.residual_u,
                          "%.12g" % rec.residual_constraint,
                          "%.12g" % rec.residual_lambda,
                          "%.12g" % rec.energy])
