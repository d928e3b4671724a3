"""Per-step assembly and time marching of the weighted difference scheme.

Each time step solves a linear system for the new level.  After the
value coupling y_0 = alpha*y_N eliminates the left endpoint, the system
over the unknowns y_1..y_N is tridiagonal except for two departures: the
first interior row picks up a corner coefficient on y_N, and the last
row (the discretised flux coupling) touches columns 1, N-1 and N.  Such
a system is solved in O(N) by superposition: two Thomas sweeps of the
interior block, one with the actual right-hand side and one with the
border column as load, then a scalar closure for y_N.

A dense LU solve of the same system is kept as a test oracle, and the
march can optionally record the relative residual of every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    DimensionError,
    Grid,
    History,
    Problem,
    SchemeParams,
    face_coefficients,
    sample_space,
    sample_space_time,
)
from .fractional import l1_weights

__all__ = [
    "AssemblyError",
    "SingularSystemError",
    "StepSystem",
    "BlowUp",
    "SolveOutcome",
    "BLOWUP_LIMIT",
    "assemble_step",
    "solve_bordered",
    "solve_dense_oracle",
    "step_residual",
    "march",
]

# A level whose max norm exceeds this (or contains non-finite entries)
# stops the march; instabilities are reported, not crashed on.
BLOWUP_LIMIT = 1e100


class AssemblyError(ValueError):
    """The assembled system is structurally unusable (zero diagonal)."""


class SingularSystemError(RuntimeError):
    """The linear system has no usable pivot."""


@dataclass(frozen=True)
class StepSystem:
    """Linear system of one time step over the unknowns y_1..y_N.

    ``lower``, ``diag``, ``upper`` hold the bands of the N-1 interior
    rows (``lower[0]`` is unused; ``upper[-1]`` couples the last interior
    row to y_N).  ``corner`` is the extra y_N coefficient in the first
    row produced by eliminating y_0 = alpha*y_N.  ``last_row`` holds the
    flux-row coefficients on columns y_1, y_{N-1}, y_N, and ``rhs`` has
    length N with the flux-row load in its final entry.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    corner: float
    last_row: tuple[float, float, float]
    rhs: np.ndarray

    def __post_init__(self) -> None:
        if np.any(self.diag == 0.0):
            i = int(np.where(self.diag == 0.0)[0][0])
            raise AssemblyError(f"zero diagonal in interior row {i + 1}")

    @property
    def size(self) -> int:
        return self.rhs.size


@dataclass(frozen=True)
class BlowUp:
    """Record of a non-finite or astronomically large level."""

    level: int
    norm: float


@dataclass(frozen=True)
class SolveOutcome:
    """Result of a march: history, optional blow-up, optional residuals."""

    history: History
    blow_up: Optional[BlowUp] = None
    per_step_residuals: Optional[list[float]] = None


def assemble_step(problem: Problem, grid: Grid, params: SchemeParams,
                  history: History, face: np.ndarray | None = None) -> StepSystem:
    """Assemble the linear system advancing the history by one level.

    With n+1 levels recorded the system produces level n+1.  Interior
    rows encode

        c_new*y_i - sigma*(a*y_xbar)_{x,i} =
            f(x_i, t_n + sigma*tau) + (1-sigma)*(a*y_xbar)_{x,i}^n - load_i

    where (c_new, load) split the discrete Caputo operator at the new
    level; the last row encodes the flux coupling with the memory terms
    of both endpoints split the same way.
    """
    n = len(history) - 1
    N, h, tau, sigma = grid.N, grid.h, grid.tau, params.sigma
    if history.width != N + 1:
        raise DimensionError(
            f"history width {history.width} does not match grid ({N + 1})"
        )
    if face is None:
        face = face_coefficients(problem, grid)
    alpha, beta = problem.alpha, problem.beta
    h2 = h * h

    # Split the memory term at every node: D(y)_i = c_new*y_i^{n+1} + load_i.
    Y = history.array()
    c = l1_weights(n, problem.gamma, tau).c
    c_new = float(c[-1])
    if n >= 1:
        load = c[:-1] @ np.diff(Y, axis=0) - c_new * Y[n]
    else:
        load = -c_new * Y[0]

    t_sigma = (n + sigma) * tau
    phi = sample_space_time(problem.f, grid.x, t_sigma)
    yn = Y[n]

    lower = np.zeros(N - 1)
    diag = np.empty(N - 1)
    upper = np.empty(N - 1)
    rhs = np.empty(N)

    a_left = face[:-1]            # a_i   for rows i = 1..N-1
    a_right = face[1:]            # a_i+1
    lower[1:] = -sigma * a_left[1:] / h2
    diag[:] = c_new + sigma * (a_left + a_right) / h2
    upper[:] = -sigma * a_right / h2
    corner = -sigma * alpha * face[0] / h2

    second = (a_right * yn[2:] - (a_left + a_right) * yn[1:-1]
              + a_left * yn[:-2]) / h2
    rhs[:-1] = phi[1:-1] - load[1:-1] + (1.0 - sigma) * second

    # Flux row: beta*D(y)_0 + D(y)_N + (2/h)*(a_N*y_xbar_N - beta*a_1*y_x_0)
    #           = (2/h)*mu + phi_N + beta*phi_0, with y_0^{n+1} = alpha*y_N^{n+1}.
    a1, aN = face[0], face[-1]
    b1 = -sigma * 2.0 * beta * a1 / h2
    bNm1 = -sigma * 2.0 * aN / h2
    bN = (c_new * (1.0 + alpha * beta)
          + sigma * 2.0 * aN / h2
          + sigma * 2.0 * beta * a1 * alpha / h2)
    rhs[-1] = (2.0 / h * problem.mu(t_sigma) + phi[-1] + beta * phi[0]
               - beta * load[0] - load[-1]
               - (1.0 - sigma) * 2.0 * aN / h2 * (yn[-1] - yn[-2])
               + (1.0 - sigma) * 2.0 * beta * a1 / h2 * (yn[1] - yn[0]))

    return StepSystem(lower=lower, diag=diag, upper=upper, corner=corner,
                      last_row=(b1, bNm1, bN), rhs=rhs)


def _thomas(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray,
            rhs: np.ndarray) -> np.ndarray:
    """Tridiagonal solve without pivoting (diagonally dominant systems)."""
    m = diag.size
    w = np.empty(m - 1) if m > 1 else np.empty(0)
    g = np.empty(m)
    piv = diag[0]
    if piv == 0.0:
        raise SingularSystemError("zero pivot in tridiagonal sweep (row 1)")
    g[0] = rhs[0] / piv
    if m > 1:
        w[0] = sup[0] / piv
    for i in range(1, m):
        piv = diag[i] - sub[i - 1] * w[i - 1]
        if piv == 0.0:
            raise SingularSystemError(
                f"zero pivot in tridiagonal sweep (row {i + 1})"
            )
        g[i] = (rhs[i] - sub[i - 1] * g[i - 1]) / piv
        if i < m - 1:
            w[i] = sup[i] / piv
    for i in range(m - 2, -1, -1):
        g[i] -= w[i] * g[i + 1]
    return g


def solve_bordered(system: StepSystem) -> np.ndarray:
    """Solve the step system in O(N) by superposition.

    The interior block T (rows 1..N-1 over columns y_1..y_{N-1}) is swept
    twice: u = T^{-1} rhs and v = T^{-1} g, where g collects the border
    couplings to y_N (corner plus the natural last band entry).  The flux
    row then closes a single scalar equation for y_N, and the interior
    follows as u - y_N*v.
    """
    N = system.size
    m = N - 1
    sub = system.lower[1:]
    sup = system.upper[:-1]
    g = np.zeros(m)
    g[0] += system.corner
    g[m - 1] += system.upper[m - 1]

    u = _thomas(sub, system.diag, sup, system.rhs[:m])
    v = _thomas(sub, system.diag, sup, g)

    b1, bNm1, bN = system.last_row
    denom = bN - b1 * v[0] - bNm1 * v[m - 1]
    if abs(denom) < 1e-300:
        raise SingularSystemError(
            f"flux-row closure is singular (pivot {denom:.3e})"
        )
    yN = (system.rhs[m] - b1 * u[0] - bNm1 * u[m - 1]) / denom
    sol = np.empty(N)
    sol[:m] = u - yN * v
    sol[m] = yN
    return sol


def _dense_matrix(system: StepSystem) -> np.ndarray:
    N = system.size
    A = np.zeros((N, N))
    for j in range(N - 1):
        if j > 0:
            A[j, j - 1] += system.lower[j]
        A[j, j] += system.diag[j]
        A[j, j + 1] += system.upper[j]
    A[0, N - 1] += system.corner
    b1, bNm1, bN = system.last_row
    A[N - 1, 0] += b1
    A[N - 1, N - 2] += bNm1
    A[N - 1, N - 1] += bN
    return A


def solve_dense_oracle(system: StepSystem) -> np.ndarray:
    """Dense LU solve (partial pivoting) of the full step system.

    Reference path for :func:`solve_bordered`; O(N^3), tests only.
    """
    A = _dense_matrix(system)
    try:
        return np.linalg.solve(A, system.rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"dense solve failed: {exc}") from exc


def step_residual(system: StepSystem, sol: np.ndarray) -> float:
    """Max residual of a candidate solution, relative to row scale."""
    A = _dense_matrix(system)
    r = A @ sol - system.rhs
    scale = np.abs(A) @ np.abs(sol) + np.abs(system.rhs)
    return float(np.max(np.abs(r) / np.maximum(scale, 1e-300)))


def march(problem: Problem, grid: Grid, params: SchemeParams,
          y0=None, check_residuals: bool = False) -> SolveOutcome:
    """March the scheme from the initial condition to the final time.

    Level 0 samples ``problem.u0`` on the grid (or takes ``y0`` verbatim
    when supplied, as the stability experiments do with random data).
    Each later level is produced by assembly plus the bordered solve,
    with y_0 recovered from the value coupling.  A level that is
    non-finite or exceeds ``BLOWUP_LIMIT`` in max norm stops the march
    and is recorded in the outcome instead of raising.
    """
    face = face_coefficients(problem, grid)
    if y0 is None:
        first = sample_space(problem.u0, grid.x)
    else:
        first = np.asarray(y0, dtype=float)
        if first.shape != (grid.N + 1,):
            raise DimensionError(
                f"y0 has length {first.size}, expected {grid.N + 1}"
            )
    history = History(first, capacity=grid.Nt + 1)
    residuals: Optional[list[float]] = [] if check_residuals else None
    blow: Optional[BlowUp] = None

    for n in range(grid.Nt):
        system = assemble_step(problem, grid, params, history, face=face)
        sol = solve_bordered(system)
        if residuals is not None:
            residuals.append(step_residual(system, sol))
        level = np.empty(grid.N + 1)
        level[1:] = sol
        level[0] = problem.alpha * sol[-1]
        history.append(level)
        finite = bool(np.all(np.isfinite(level)))
        top = float(np.max(np.abs(level))) if finite else float("inf")
        if not finite or top > BLOWUP_LIMIT:
            blow = BlowUp(level=n + 1, norm=top)
            break

    return SolveOutcome(history=history, blow_up=blow,
                        per_step_residuals=residuals)
