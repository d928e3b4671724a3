"""Domain types shared by every part of the solver.

A problem on the unit interval couples a fractional-in-time diffusion
operator with two-parameter nonlocal boundary conditions: the solution
value at the left end is tied to the value at the right end through the
parameter ``alpha``, and the boundary fluxes are tied through ``beta``
plus a time-dependent datum ``mu``.  This module holds the mesh, the
problem data, the scheme weight, and the solution history container; the
numerics live in :mod:`fracheat.fractional`, :mod:`fracheat.stepper` and
:mod:`fracheat.norms`.

All types are immutable after construction (``History`` only grows) and
safe to share between threads by value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "DomainError",
    "DimensionError",
    "BoundsViolationError",
    "Grid",
    "Problem",
    "SchemeParams",
    "TimeLevel",
    "History",
    "face_coefficients",
    "weighted_level",
    "sample_space",
    "sample_space_time",
]

# A solution snapshot is a plain 1-D float array of length N+1.
TimeLevel = np.ndarray


class DomainError(ValueError):
    """A parameter lies outside its admissible range."""


class DimensionError(ValueError):
    """Vector lengths do not agree."""


class BoundsViolationError(ValueError):
    """A sampled diffusivity value escapes the declared [c1, c2] range."""


@dataclass(frozen=True)
class Grid:
    """Uniform space-time mesh on [0, 1] x [0, T].

    Parameters
    ----------
    N : int
        Number of space subintervals (N >= 2); mesh width ``h = 1/N``.
    Nt : int
        Number of time steps (Nt >= 1); step ``tau = T/Nt``.
    T : float
        Final time, positive.
    """

    N: int
    Nt: int
    T: float = 1.0

    def __post_init__(self) -> None:
        if self.N < 2:
            raise DomainError(f"need at least 2 space subintervals, got N={self.N}")
        if self.Nt < 1:
            raise DomainError(f"need at least 1 time step, got Nt={self.Nt}")
        if not self.T > 0:
            raise DomainError(f"final time must be positive, got T={self.T}")

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def tau(self) -> float:
        return self.T / self.Nt

    @property
    def x(self) -> np.ndarray:
        """Space nodes x_i = i*h, i = 0..N."""
        return np.arange(self.N + 1) * self.h

    @property
    def t(self) -> np.ndarray:
        """Time levels t_n = n*tau, n = 0..Nt."""
        return np.arange(self.Nt + 1) * self.tau

    @classmethod
    def balanced(cls, N: int, gamma: float, T: float = 1.0) -> "Grid":
        """Grid whose time step balances the two truncation terms.

        Picks the largest tau with ``tau**(2-gamma) <= h**2``, rounded so
        that ``Nt*tau = T`` exactly: ``Nt = ceil(T / h**(2/(2-gamma)))``.
        Rounding up keeps tau at or below the balancing value, so the
        combined error bound is preserved.
        """
        if not 0.0 < gamma < 1.0:
            raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
        h = 1.0 / N
        tau_star = h ** (2.0 / (2.0 - gamma))
        Nt = int(np.ceil(T / tau_star))
        return cls(N=N, Nt=Nt, T=T)


@dataclass(frozen=True)
class Problem:
    """Data of the nonlocal boundary value problem.

    The unknown u(x, t) satisfies a diffusion equation with a Caputo
    time derivative of order ``gamma`` and diffusivity ``k(x)``, subject
    to the value coupling ``u(0,t) = alpha*u(1,t)``, the flux coupling
    ``k(1)*u_x(1,t) = beta*k(0)*u_x(0,t) + mu(t)`` and the initial
    condition ``u(x,0) = u0(x)``.

    Parameters
    ----------
    gamma : float
        Fractional order of the time derivative, in (0, 1).
    alpha, beta : float
        Boundary coupling parameters; ``alpha*beta`` must be positive.
    k : callable
        Diffusivity ``k(x)`` on [0, 1].
    f : callable
        Source term ``f(x, t)``.
    mu : callable
        Flux boundary datum ``mu(t)``.
    u0 : callable
        Initial condition ``u0(x)``.
    c1, c2 : float
        Declared bounds ``0 < c1 <= k(x) <= c2``; verified against the
        grid samples when face coefficients are built.
    exact : callable, optional
        Reference solution ``u(x, t)`` used by error reports.
    """

    gamma: float
    alpha: float
    beta: float
    k: Callable
    f: Callable
    mu: Callable
    u0: Callable
    c1: float
    c2: float
    exact: Optional[Callable] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 1.0:
            raise DomainError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not self.alpha * self.beta > 0.0:
            raise DomainError(
                f"boundary parameters must satisfy alpha*beta > 0, "
                f"got alpha={self.alpha}, beta={self.beta}"
            )
        if not 0.0 < self.c1 <= self.c2:
            raise DomainError(f"need 0 < c1 <= c2, got c1={self.c1}, c2={self.c2}")


@dataclass(frozen=True)
class SchemeParams:
    """Weight of the two-level scheme: sigma=1 fully implicit, 0 explicit."""

    sigma: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.sigma <= 1.0:
            raise DomainError(f"sigma must lie in [0, 1], got {self.sigma}")


class History:
    """Ordered sequence of solution levels (the fractional memory).

    Level 0 is the sampled initial condition; every appended level must
    have the same length.  The backing storage is a single 2-D array so
    that per-step weighted sums over the whole history stay cheap.
    """

    def __init__(self, first_level, capacity: int | None = None):
        first = np.asarray(first_level, dtype=float)
        if first.ndim != 1:
            raise DimensionError("a time level must be a 1-D vector")
        cap = max(capacity or 0, 8)
        self._buf = np.empty((cap, first.size), dtype=float)
        self._buf[0] = first
        self._count = 1

    @property
    def width(self) -> int:
        """Number of space nodes per level (N+1)."""
        return self._buf.shape[1]

    def __len__(self) -> int:
        return self._count

    def __getitem__(self, n: int) -> TimeLevel:
        if not -self._count <= n < self._count:
            raise IndexError(f"level {n} not recorded (have {self._count})")
        return self._buf[n % self._count]

    def array(self) -> np.ndarray:
        """View of all recorded levels, shape (len, N+1)."""
        return self._buf[: self._count]

    def append(self, level) -> None:
        lv = np.asarray(level, dtype=float)
        if lv.shape != (self.width,):
            raise DimensionError(
                f"level length {lv.size} does not match history width {self.width}"
            )
        if self._count == self._buf.shape[0]:
            grown = np.empty((2 * self._count, self.width), dtype=float)
            grown[: self._count] = self._buf[: self._count]
            self._buf = grown
        self._buf[self._count] = lv
        self._count += 1


def sample_space(func: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate a scalar function of x on an array of nodes.

    Tries a single vectorised call first and falls back to per-point
    evaluation for callbacks written against plain floats.
    """
    try:
        out = np.asarray(func(x), dtype=float)
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(func(float(xi))) for xi in x])


def sample_space_time(func: Callable, x: np.ndarray, t: float) -> np.ndarray:
    """Evaluate f(x, t) on an array of space nodes at one time."""
    try:
        out = np.asarray(func(x, t), dtype=float)
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(func(float(xi), t)) for xi in x])


def face_coefficients(problem: Problem, grid: Grid) -> np.ndarray:
    """Diffusivity sampled at the cell faces, a_i = k(x_i - h/2).

    Returns the length-N vector (a_1, ..., a_N) used by the conservative
    second-difference operator, and verifies each sample against the
    problem's declared [c1, c2] bounds (with a small roundoff slack).

    Raises
    ------
    BoundsViolationError
        If any a_i falls outside [c1, c2], naming the offending index.
    """
    h = grid.h
    faces = (np.arange(1, grid.N + 1) - 0.5) * h
    a = sample_space(problem.k, faces)
    slack = 1e-12 * max(1.0, abs(problem.c2))
    bad = np.where((a < problem.c1 - slack) | (a > problem.c2 + slack))[0]
    if bad.size:
        i = int(bad[0]) + 1
        raise BoundsViolationError(
            f"face coefficient a_{i} = {a[bad[0]]} outside "
            f"[{problem.c1}, {problem.c2}]"
        )
    return a


def weighted_level(next_level, curr_level, sigma: float) -> TimeLevel:
    """Blend of two time levels: sigma*next + (1-sigma)*curr."""
    nxt = np.asarray(next_level, dtype=float)
    cur = np.asarray(curr_level, dtype=float)
    if nxt.shape != cur.shape:
        raise DimensionError(
            f"levels have different lengths: {nxt.shape} vs {cur.shape}"
        )
    return sigma * nxt + (1.0 - sigma) * cur
