"""Discrete heteroclinic connections between the wells on a plateau lattice.

A lattice profile assigns plateau values w_n in [-1, 1] to integer
indices n, with the implicit extension w_n = -1 below the stored window
and w_n = +1 above it.  The discrete energy over indices [j_lo, j_hi] is

    sum_j  (1/(2 r^2)) (w_{j+1} - w_j)^2 + W(w_j),

whose stationarity condition is the three-term recurrence

    w_{j+1} - 2 w_j + w_{j-1} = r^2 W'(w_j).

Three constrained minimizations over the box [-1, 1]:

  * solve_discrete_dirichlet: pinned w_0 = -1 and w_{K+1} = +1, free
    w_1..w_K, objective summed over j = 0..K.
  * solve_symmetric_node: odd about the lattice node 0 (w_0 = 0 and
    w_{-n} = -w_n), pinned w_j = 1 for j >= K, free w_1..w_{K-1},
    objective summed over j = -K..K.
  * solve_symmetric_bond: odd about the bond between -1 and 0
    (w_{-n-1} = -w_n), pinned w_j = 1 for j >= K-1, free w_0..w_{K-2},
    objective summed over j = -K..K.

Both symmetric problems are reduced to their free coordinates; reported
values are always recomputed from the full windowed sum on the assembled
profile.  Minimization is projected gradient descent with Armijo
backtracking from several deterministic starts, polished by damped
per-coordinate Newton sweeps on the stationarity system.

shoot_heteroclinic integrates the recurrence directly and bisects on the
first free value until the orbit lands on the well at +1, which produces
the infinite-lattice connection without choosing a window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    NoBracketError,
    PreconditionError,
    UnsupportedOperationError,
)
from .potential import DoubleWell, eval_dw, eval_dw_array, eval_w, eval_w_array
from .sampled import SampledFunction, snap_count

__all__ = [
    "LatticeProfile",
    "SolveReport",
    "SolverOptions",
    "EnergyUpperBounds",
    "WitnessReport",
    "discrete_energy",
    "el_residual",
    "recurrence_step",
    "solve_discrete_dirichlet",
    "solve_symmetric_node",
    "solve_symmetric_bond",
    "shoot_heteroclinic",
    "lift_profile",
    "energy_upper_bounds",
    "step_is_not_minimal",
]

ESCAPE_PAD = 1e-9  # orbit above 1 + pad has left the box for good
TURNBACK_PAD = 1e-12  # decrease below this is a genuine turn, not roundoff


@dataclass(eq=False)
class LatticeProfile:
    """Plateau values on an integer window, -1 to the left, +1 to the right.

    If a symmetry is declared it must hold exactly on the stored values:
    node_odd needs n_min = -n_max with w_{-n} = -w_n, bond_odd needs
    n_min = -(n_max + 1) with w_{-n-1} = -w_n.
    """

    r: float
    n_min: int
    n_max: int
    values: np.ndarray = field(repr=False)
    symmetry: str = "none"

    def __post_init__(self):
        self.r = float(self.r)
        if not (math.isfinite(self.r) and self.r > 0.0):
            raise DomainError(f"range r must be positive and finite, got {self.r}")
        self.n_min = int(self.n_min)
        self.n_max = int(self.n_max)
        if self.n_max < self.n_min:
            raise DomainError(f"empty window [{self.n_min}, {self.n_max}]")
        vals = np.array(self.values, dtype=float, copy=True)
        if vals.ndim != 1 or vals.size != self.n_max - self.n_min + 1:
            raise DomainError(
                f"expected {self.n_max - self.n_min + 1} values for the window "
                f"[{self.n_min}, {self.n_max}], got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("profile values must be finite")
        if np.any(np.abs(vals) > 1.0 + 1e-9):
            worst = float(np.max(np.abs(vals)))
            raise DomainError(f"profile values must lie in [-1, 1], worst |w| = {worst}")
        vals = np.clip(vals, -1.0, 1.0)
        if self.symmetry not in ("none", "node_odd", "bond_odd"):
            raise DomainError(f"unknown symmetry {self.symmetry!r}")
        if self.symmetry == "node_odd":
            if self.n_min != -self.n_max:
                raise DomainError(
                    f"node_odd needs a window [-K, K], got [{self.n_min}, {self.n_max}]"
                )
            if not np.all(vals == -vals[::-1]):
                raise DomainError("node_odd declared but values are not odd about 0")
        if self.symmetry == "bond_odd":
            if self.n_min != -(self.n_max + 1):
                raise DomainError(
                    f"bond_odd needs n_min = -(n_max + 1), got [{self.n_min}, {self.n_max}]"
                )
            if not np.all(vals == -vals[::-1]):
                raise DomainError("bond_odd declared but values are not odd about -1/2")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def value(self, n: int) -> float:
        """Plateau value at index n, using the implicit -1 / +1 extension."""
        if n < self.n_min:
            return -1.0
        if n > self.n_max:
            return 1.0
        return float(self.values[n - self.n_min])

    def values_range(self, j_lo: int, j_hi: int) -> np.ndarray:
        """Values at indices j_lo..j_hi inclusive, extension included."""
        idx = np.arange(j_lo, j_hi + 1)
        out = np.empty(idx.size)
        below = idx < self.n_min
        above = idx > self.n_max
        inside = ~(below | above)
        out[below] = -1.0
        out[above] = 1.0
        out[inside] = self.values[idx[inside] - self.n_min]
        return out


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for the constrained minimizers; defaults fit K up to ~64."""

    tol: float = 1e-10
    max_iters: int = 100_000
    multistart: int = 8
    seed: int = 0
    armijo_c: float = 1e-4
    backtrack: float = 0.5
    extra_starts: Tuple = ()


@dataclass(eq=False)
class SolveReport:
    minimizer: LatticeProfile
    value: float
    el_residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class EnergyUpperBounds:
    """The three explicit competitor bounds and which one binds."""

    r: float
    four_over_r: float
    four_plus_cw: float
    ramp: Optional[float]
    binding: str


@dataclass(frozen=True)
class WitnessReport:
    """Grid search showing the plain step is not an energy minimizer."""

    r: float
    step_energy: float
    best_eps: float
    best_energy: float
    improves: bool
    four_plus_cw: float
    cw_bound_beats_step: bool


def discrete_energy(p: LatticeProfile, W: DoubleWell, j_lo: int, j_hi: int) -> float:
    """Windowed discrete energy sum over indices j_lo..j_hi inclusive."""
    j_lo = int(j_lo)
    j_hi = int(j_hi)
    if j_hi < j_lo:
        raise DomainError(f"empty index window [{j_lo}, {j_hi}]")
    vals = p.values_range(j_lo, j_hi + 1)
    diffs = np.diff(vals)
    kin = float(np.sum(diffs * diffs)) / (2.0 * p.r * p.r)
    pot = float(np.sum(eval_w_array(W, vals[:-1])))
    return kin + pot


def el_residual(p: LatticeProfile, W: DoubleWell) -> float:
    """Max stationarity defect over the interior of the stored window."""
    if p.n_max - p.n_min < 2:
        return 0.0
    v = p.values
    inner = v[1:-1]
    defect = v[2:] - 2.0 * inner + v[:-2] - p.r * p.r * eval_dw_array(W, inner)
    return float(np.max(np.abs(defect)))


def recurrence_step(u_n: float, u_np1: float, r: float, W: DoubleWell) -> float:
    """Next plateau value from the stationarity recurrence."""
    if not (r > 0.0):
        raise DomainError(f"range r must be positive, got {r}")
    return 2.0 * float(u_np1) - float(u_n) + r * r * eval_dw(W, float(u_np1))


# ---------------------------------------------------------------------------
# constrained minimization
# ---------------------------------------------------------------------------


class _BoxProblem:
    """Reduced coordinates, gradient, and profile assembly for one problem."""

    def __init__(self, K: int, r: float, W: DoubleWell, flavor: str):
        self.K = K
        self.r = r
        self.W = W
        self.flavor = flavor
        if flavor == "plain":
            self.dim = K
        else:
            self.dim = K - 1
        self.inv_r2 = 1.0 / (r * r)
        # EL residual on the profile equals res_scale * |reduced gradient|
        self.res_scale = r * r if flavor == "plain" else 0.5 * r * r

    def _padded(self, z: np.ndarray) -> np.ndarray:
        """Free coordinates with their immediate pinned neighbours."""
        if self.flavor == "plain":
            return np.concatenate(([-1.0], z, [1.0]))
        if self.flavor == "node":
            return np.concatenate(([0.0], z, [1.0]))
        # bond: left neighbour of z_0 is -z_0, right end pinned at 1
        return np.concatenate(([-z[0]], z, [1.0]))

    def objective(self, z: np.ndarray) -> float:
        w = self._padded(z)
        d = np.diff(w)
        kin = float(np.sum(d * d))
        pot = float(np.sum(eval_w_array(self.W, z)))
        if self.flavor == "plain":
            return 0.5 * self.inv_r2 * kin + pot
        if self.flavor == "node":
            return self.inv_r2 * kin + 2.0 * pot + eval_w(self.W, 0.0)
        # bond: the first padded diff contributes (2 z_0)^2 but the full
        # windowed sum weights that central square by 1/(2 r^2) once, i.e.
        # 2 z_0^2 in these units, so drop half of it
        return self.inv_r2 * (kin - 2.0 * z[0] * z[0]) + 2.0 * pot

    def grad(self, z: np.ndarray) -> np.ndarray:
        w = self._padded(z)
        lap = 2.0 * w[1:-1] - w[:-2] - w[2:]
        dw = eval_dw_array(self.W, z)
        if self.flavor == "plain":
            return self.inv_r2 * lap + dw
        g = 2.0 * self.inv_r2 * lap + 2.0 * dw
        if self.flavor == "bond":
            # left neighbour -z_0 depends on z_0 itself
            g[0] = 2.0 * self.inv_r2 * (3.0 * z[0] - w[2]) + 2.0 * dw[0]
        return g

    def local_grad_diag(self, z: np.ndarray, i: int):
        """Gradient component i and its curvature, from the local stencil."""
        dw = self.W.dw
        zi = float(z[i])
        eps = 1e-6
        d2w = (float(dw(zi + eps)) - float(dw(zi - eps))) / (2.0 * eps)
        if self.flavor == "plain":
            left = -1.0 if i == 0 else float(z[i - 1])
            right = 1.0 if i == self.dim - 1 else float(z[i + 1])
            g = self.inv_r2 * (2.0 * zi - left - right) + float(dw(zi))
            return g, 2.0 * self.inv_r2 + d2w
        right = 1.0 if i == self.dim - 1 else float(z[i + 1])
        if self.flavor == "bond" and i == 0:
            g = 2.0 * self.inv_r2 * (3.0 * zi - right) + 2.0 * float(dw(zi))
            return g, 6.0 * self.inv_r2 + 2.0 * d2w
        if self.flavor == "node":
            left = 0.0 if i == 0 else float(z[i - 1])
        else:
            left = float(z[i - 1])
        g = 2.0 * self.inv_r2 * (2.0 * zi - left - right) + 2.0 * float(dw(zi))
        return g, 4.0 * self.inv_r2 + 2.0 * d2w

    def profile(self, z: np.ndarray) -> LatticeProfile:
        K = self.K
        if self.flavor == "plain":
            vals = np.concatenate(([-1.0], z, [1.0]))
            return LatticeProfile(self.r, 0, K + 1, vals, "none")
        if self.flavor == "node":
            pos = np.concatenate(([0.0], z, [1.0]))  # w_0..w_K
            vals = np.concatenate((-pos[1:][::-1], pos))
            return LatticeProfile(self.r, -K, K, vals, "node_odd")
        pos = np.concatenate((z, [1.0]))  # z_0..z_{K-1}
        vals = np.concatenate((-pos[::-1], pos))
        return LatticeProfile(self.r, -K, K - 1, vals, "bond_odd")

    def full_value(self, z: np.ndarray) -> float:
        p = self.profile(z)
        if self.flavor == "plain":
            return discrete_energy(p, self.W, 0, self.K)
        return discrete_energy(p, self.W, -self.K, self.K)

    def ramp_start(self) -> np.ndarray:
        K = self.K
        if self.flavor == "plain":
            return -1.0 + 2.0 * np.arange(1, K + 1) / (K + 1)
        if self.flavor == "node":
            return np.arange(1, K) / K
        return (2.0 * np.arange(K - 1) + 1.0) / (2.0 * K - 1.0)

    def starts(self, opts: SolverOptions):
        d = self.dim
        rng = np.random.default_rng(opts.seed)
        pool = [self.ramp_start()]
        for q in (0.5, 0.25, 0.75):
            pool.append(np.where((np.arange(d) + 0.5) / d <= q, -1.0, 1.0))
        while len(pool) < max(1, opts.multistart):
            pool.append(np.sort(rng.uniform(-1.0, 1.0, d)))
        pool = pool[: max(1, opts.multistart)]
        for extra in opts.extra_starts:
            arr = np.asarray(extra, dtype=float)
            if arr.shape != (d,):
                raise PreconditionError(
                    f"extra start has shape {arr.shape}, expected ({d},)"
                )
            pool.append(np.clip(arr, -1.0, 1.0))
        return pool


def _projected_residual(g: np.ndarray, z: np.ndarray) -> float:
    blocked_lo = (z <= -1.0) & (g > 0.0)
    blocked_hi = (z >= 1.0) & (g < 0.0)
    eff = np.where(blocked_lo | blocked_hi, 0.0, g)
    return float(np.max(np.abs(eff))) if eff.size else 0.0


def _pgd(problem: _BoxProblem, z: np.ndarray, opts: SolverOptions, budget: int):
    """Projected gradient descent with Armijo backtracking."""
    z = np.clip(z, -1.0, 1.0)
    obj = problem.objective(z)
    alpha = problem.r * problem.r / 4.0
    stop = max(opts.tol, 1e-8) / problem.res_scale
    iters = 0
    while iters < budget:
        g = problem.grad(z)
        if _projected_residual(g, z) < stop:
            break
        iters += 1
        while True:
            cand = np.clip(z - alpha * g, -1.0, 1.0)
            step = cand - z
            if not np.any(step):
                alpha = 0.0
                break
            cand_obj = problem.objective(cand)
            decrease = obj - cand_obj
            if decrease >= opts.armijo_c / max(alpha, 1e-300) * float(step @ step):
                z, obj = cand, cand_obj
                alpha *= 1.4
                break
            alpha *= opts.backtrack
            if alpha < 1e-14:
                break
        if alpha < 1e-14:
            break
        alpha = min(alpha, 1e3)
    return z, iters


def _newton_sweeps(problem: _BoxProblem, z: np.ndarray, opts: SolverOptions, budget: int):
    """Gauss-Seidel sweeps of damped coordinate Newton on the gradient."""
    z = z.copy()
    sweeps = 0
    while sweeps < budget:
        sweeps += 1
        for i in range(problem.dim):
            g_i, diag_i = problem.local_grad_diag(z, i)
            step = -g_i / max(diag_i, 1e-8)
            step = min(max(step, -0.25), 0.25)
            z[i] = min(max(z[i] + step, -1.0), 1.0)
        g = problem.grad(z)
        if _projected_residual(g, z) * problem.res_scale < opts.tol:
            break
    return z, sweeps


def _minimize(problem: _BoxProblem, opts: SolverOptions) -> SolveReport:
    if problem.W.dw is None:
        raise UnsupportedOperationError("minimization needs a potential derivative")
    candidates = []
    total_iters = 0
    pgd_budget = 4000
    sweep_budget = 400
    for z0 in problem.starts(opts):
        if total_iters >= opts.max_iters:
            break
        z, used = _pgd(problem, z0, opts, min(pgd_budget, opts.max_iters - total_iters))
        total_iters += used
        if total_iters < opts.max_iters:
            z, sweeps = _newton_sweeps(
                problem, z, opts, min(sweep_budget, opts.max_iters - total_iters)
            )
            total_iters += sweeps
        prof = problem.profile(z)
        res = el_residual(prof, problem.W)
        val = problem.full_value(z)
        candidates.append((round(val * 1e12), res > opts.tol, tuple(z), val, res, prof))
    if not candidates:
        raise ConvergenceError("iteration budget exhausted before any start ran")
    candidates.sort(key=lambda c: (c[0], c[1], c[2]))
    _, _, _, val, res, prof = candidates[0]
    return SolveReport(
        minimizer=prof,
        value=val,
        el_residual=res,
        iterations=total_iters,
        converged=res <= opts.tol,
    )


def _check_solver_args(K: int, r: float, W: DoubleWell, k_min: int) -> None:
    if int(K) != K or K < k_min:
        raise PreconditionError(f"K must be an integer >= {k_min}, got {K}")
    if not (r > 0.0 and math.isfinite(r)):
        raise PreconditionError(f"range r must be positive and finite, got {r}")
    if W.dw is None:
        raise UnsupportedOperationError("solvers need a potential with a derivative")


def solve_discrete_dirichlet(
    K: int, r: float, W: DoubleWell, opts: Optional[SolverOptions] = None
) -> SolveReport:
    """Minimize the window sum with pinned ends w_0 = -1, w_{K+1} = +1.

    The minimum is nonincreasing in K: a competitor for window K extends
    to window K+1 by repeating a well value, without changing its sum.
    """
    _check_solver_args(K, r, W, 1)
    return _minimize(_BoxProblem(int(K), float(r), W, "plain"), opts or SolverOptions())


def solve_symmetric_node(
    K: int, r: float, W: DoubleWell, opts: Optional[SolverOptions] = None
) -> SolveReport:
    """Minimize over profiles odd about the lattice node 0, pinned at j >= K."""
    _check_solver_args(K, r, W, 2)
    return _minimize(_BoxProblem(int(K), float(r), W, "node"), opts or SolverOptions())


def solve_symmetric_bond(
    K: int, r: float, W: DoubleWell, opts: Optional[SolverOptions] = None
) -> SolveReport:
    """Minimize over profiles odd about the bond (-1, 0), pinned at j >= K-1."""
    _check_solver_args(K, r, W, 2)
    return _minimize(_BoxProblem(int(K), float(r), W, "bond"), opts or SolverOptions())


# ---------------------------------------------------------------------------
# shooting
# ---------------------------------------------------------------------------


def _orbit_classify(s: float, r: float, W: DoubleWell, symmetry: str, tol: float, horizon: int):
    """Integrate the recurrence from the symmetric seed and classify.

    Returns (kind, orbit) with kind 'high' (escaped above 1), 'low'
    (turned back or stalled), or 'hit' (landed within tol of 1 from below).
    """
    if symmetry == "node_odd":
        orbit = [0.0, s]
    else:
        orbit = [-s, s]
    r2 = r * r
    dw = W.dw
    prev, cur = orbit[-2], orbit[-1]
    for _ in range(horizon):
        nxt = 2.0 * cur - prev + r2 * float(dw(cur))
        if nxt <= 1.0 and abs(nxt - 1.0) < tol:
            orbit.append(nxt)
            return "hit", orbit
        if nxt > 1.0 + ESCAPE_PAD:
            return "high", orbit
        if nxt < cur - TURNBACK_PAD:
            return "low", orbit
        orbit.append(nxt)
        prev, cur = cur, nxt
    return "low", orbit


def _profile_from_orbit(orbit, r: float, symmetry: str) -> LatticeProfile:
    if symmetry == "node_odd":
        pos = np.asarray(orbit)  # w_0 = 0 .. w_m
        vals = np.concatenate((-pos[1:][::-1], pos))
        m = pos.size - 1
        return LatticeProfile(r, -m, m, vals, "node_odd")
    pos = np.asarray(orbit[1:])  # z_0 .. z_m
    vals = np.concatenate((-pos[::-1], pos))
    m = pos.size - 1
    return LatticeProfile(r, -(m + 1), m, vals, "bond_odd")


def shoot_heteroclinic(
    r: float,
    W: DoubleWell,
    symmetry: str = "node_odd",
    tol: float = 1e-7,
    horizon: int = 1000,
) -> LatticeProfile:
    """Bisect the seed value until the recurrence orbit lands on the well.

    The seed s is w_1 for node_odd (with w_0 = 0) and z_0 for bond_odd
    (with z_{-1} = -z_0).  Orbits that exceed 1 + 1e-9 overshoot; orbits
    that decrease by more than 1e-12 have turned back.  The returned
    profile stores the orbit truncated at the first value within tol of
    1, is odd by construction, and satisfies the recurrence to roundoff
    on the interior of its window.
    """
    if not (r > 0.0 and math.isfinite(r)):
        raise PreconditionError(f"range r must be positive and finite, got {r}")
    if symmetry not in ("node_odd", "bond_odd"):
        raise PreconditionError(f"symmetry must be node_odd or bond_odd, got {symmetry!r}")
    if not (0.0 < tol < 0.1):
        raise PreconditionError(f"tol must be in (0, 0.1), got {tol}")
    if horizon < 10:
        raise PreconditionError(f"horizon must be at least 10, got {horizon}")
    if W.dw is None:
        raise UnsupportedOperationError("shooting needs a potential with a derivative")

    kind_hi, orbit = _orbit_classify(1.0, r, W, symmetry, tol, horizon)
    if kind_hi == "hit":
        return _profile_from_orbit(orbit, r, symmetry)
    if kind_hi != "high":
        raise NoBracketError("seed s = 1 does not overshoot; no bracket in (0, 1]")
    hi = 1.0
    lo = 1e-8
    kind_lo, orbit = _orbit_classify(lo, r, W, symmetry, tol, horizon)
    while kind_lo == "high":
        lo *= 1e-2
        if lo < 1e-300:
            raise NoBracketError("every seed in (0, 1] overshoots; no bracket")
        kind_lo, orbit = _orbit_classify(lo, r, W, symmetry, tol, horizon)
    if kind_lo == "hit":
        return _profile_from_orbit(orbit, r, symmetry)

    while hi - lo > 1e-17:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # adjacent doubles: no representable midpoint left
        kind, orbit = _orbit_classify(mid, r, W, symmetry, tol, horizon)
        if kind == "hit":
            return _profile_from_orbit(orbit, r, symmetry)
        if kind == "high":
            hi = mid
        else:
            lo = mid

    # the bracket is at roundoff width; take the inside orbit's closest pass
    _, orbit = _orbit_classify(lo, r, W, symmetry, tol, horizon)
    arr = np.asarray(orbit)
    cut = int(np.argmin(np.abs(arr - 1.0)))
    if abs(arr[cut] - 1.0) >= tol:
        raise ConvergenceError(
            f"orbit never came within tol={tol} of the well at +1 "
            f"(closest {abs(arr[cut] - 1.0):.3e}); raise tol or horizon"
        )
    return _profile_from_orbit(list(arr[: cut + 1]), r, symmetry)


def lift_profile(p: LatticeProfile, x_offset: float, h: float) -> SampledFunction:
    """Step function taking value w_n on [x_offset + 2nr, x_offset + 2(n+1)r).

    The sample step h must divide the plateau width 2r.
    """
    per = snap_count(2.0 * p.r, h, what="2r")
    vals = np.repeat(p.values, per)
    return SampledFunction(float(x_offset) + 2.0 * p.r * p.n_min, h, vals)


# ---------------------------------------------------------------------------
# explicit competitor bounds
# ---------------------------------------------------------------------------


def energy_upper_bounds(r: float, W: DoubleWell) -> EnergyUpperBounds:
    """The step bound 4/r, the well bound 4 + c_w, and the ramp bound.

    The ramp competitor (linear crossover of slope 1) needs r <= 1; for
    larger r that entry is None.  binding names the smallest bound.
    """
    if not (r > 0.0 and math.isfinite(r)):
        raise DomainError(f"range r must be positive and finite, got {r}")
    four_over_r = 4.0 / r
    four_plus_cw = 4.0 + W.c_w
    ramp = 8.0 * r / 3.0 + 4.0 * (1.0 - r) + W.c_w if r <= 1.0 else None
    table = {"four_over_r": four_over_r, "four_plus_cw": four_plus_cw}
    if ramp is not None:
        table["ramp"] = ramp
    binding = min(table, key=table.get)
    return EnergyUpperBounds(r, four_over_r, four_plus_cw, ramp, binding)


def step_is_not_minimal(
    r: float, W: DoubleWell, eps_grid: Optional[Sequence[float]] = None
) -> WitnessReport:
    """Scan eased steps v_eps and report the best improvement over the step.

    v_eps takes the values -1, -(1-eps), 1-eps, 1 on the four bands
    split at -r, 0, r.  Its energy over any interval containing (-2r, 2r)
    is exactly

        E(v_eps) = 4/r + (2 eps^2 - 4 eps)/r + 2 r W(1 - eps),

    which dips below the step energy 4/r for small eps > 0 because W
    vanishes at the wells.
    """
    if not (r > 0.0 and math.isfinite(r)):
        raise DomainError(f"range r must be positive and finite, got {r}")
    if eps_grid is None:
        eps_grid = np.linspace(0.0, 1.0, 401)
    eps = np.asarray(eps_grid, dtype=float)
    if eps.ndim != 1 or eps.size == 0 or np.any(eps < 0.0) or np.any(eps > 1.0):
        raise PreconditionError("eps_grid must be a nonempty 1-d array inside [0, 1]")
    base = 4.0 / r
    energies = base + (2.0 * eps * eps - 4.0 * eps) / r + 2.0 * r * eval_w_array(W, 1.0 - eps)
    best = int(np.argmin(energies))
    best_eps = float(eps[best])
    best_energy = float(energies[best])
    four_plus_cw = 4.0 + W.c_w
    return WitnessReport(
        r=r,
        step_energy=base,
        best_eps=best_eps,
        best_energy=best_energy,
        improves=best_energy < base - 1e-12,
        four_plus_cw=four_plus_cw,
        cw_bound_beats_step=four_plus_cw < base,
    )
