"""Propagation of states and fundamental matrices across smooth pieces and jumps.

Between breakpoints the coefficients are smooth, so each piece is handled by
an adaptive embedded Runge-Kutta 5(4) pair with dense output; integration
never steps across a breakpoint or impulse time because the pieces end there
by construction. Jumps are exact 2x2 matrix applications. Beyond one period,
solutions are composed from the period map rather than integrated, which
keeps long-horizon error flat.

Side conventions: an impulse strictly inside the propagation window is always
applied; an impulse at the start is applied only when the starting state
carries a left-side value; an impulse at the end is never applied, and the
result carries the left-side value there.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .piecewise import LEFT, RIGHT
from .system import ImpulsiveSystem, InvalidSystemError, validate_system
from .tolerances import DEFAULT_TOLERANCES, Tolerances


class IntegrationFailureError(RuntimeError):
    """The ODE solver failed or produced a non-finite state."""

    def __init__(self, message: str, t_last: float):
        super().__init__(f"{message} (last good t={t_last})")
        self.t_last = t_last


@dataclass(frozen=True)
class State:
    t: float
    x: float
    u: float
    side: str = RIGHT

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.u])


@dataclass(frozen=True, eq=False)
class FundamentalMatrix:
    """Columns are the basis solutions started as the identity at t_from."""

    matrix: np.ndarray
    t_from: float
    t_to: float

    @property
    def trace(self) -> float:
        return float(self.matrix[0, 0] + self.matrix[1, 1])

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


@dataclass(frozen=True, eq=False)
class MonodromyResult:
    """Period map with its trace, determinant and characteristic roots.

    `det` is the exact impulse product (the value used in the characteristic
    polynomial); `det_integrated` is the determinant of the integrated matrix,
    kept as a cross-check of integration quality.
    """

    matrix: np.ndarray
    period: float
    trace: float
    det: float
    det_integrated: float
    multipliers: tuple[complex, complex]
    error_estimate: float
    tolerances: Tolerances


def floquet_multipliers(trace: float, det: float) -> tuple[complex, complex]:
    """Roots of rho^2 - trace*rho + det, larger magnitude first."""
    disc = trace * trace - 4.0 * det
    if disc >= 0.0:
        s = math.sqrt(disc)
        r1 = 0.5 * (trace + s) if trace >= 0.0 else 0.5 * (trace - s)
        if r1 == 0.0:
            return complex(0.0), complex(0.0)
        return complex(r1), complex(det / r1)
    im = 0.5 * math.sqrt(-disc)
    re = 0.5 * trace
    return complex(re, im), complex(re, -im)


def _apply_jump(imp, y: np.ndarray) -> np.ndarray:
    if y.size == 2:
        return imp.matrix @ y
    Y = y.reshape(2, 2, order="F")
    return (imp.matrix @ Y).ravel(order="F")


def _rhs_factory(seg_a, seg_b, seg_c, size: int):
    if size == 2:
        def rhs(t, y):
            a = float(seg_a(t))
            b = float(seg_b(t))
            c = float(seg_c(t))
            return (a * y[0] + b * y[1], -c * y[0] - a * y[1])
        return rhs

    def rhs4(t, y):
        a = float(seg_a(t))
        b = float(seg_b(t))
        c = float(seg_c(t))
        return (a * y[0] + b * y[1], -c * y[0] - a * y[1],
                a * y[2] + b * y[3], -c * y[2] - a * y[3])
    return rhs4


@dataclass(eq=False)
class _Piece:
    t_lo: float
    t_hi: float
    sol: object  # scipy OdeSolution, or None for a zero-length piece
    aprod: float
    y_const: np.ndarray | None = None

    def __call__(self, t):
        if self.sol is None:
            return np.array(self.y_const, dtype=float)
        return np.asarray(self.sol(t), dtype=float)


def _walk(system: ImpulsiveSystem, t_from: float, t_to: float, y0: np.ndarray,
          tol: Tolerances, dense: bool, jump_at_start: bool = False):
    """Integrate piecewise, applying jumps at interior impulse times."""
    T = system.period
    eps = 1e-12 * max(1.0, T)
    y = np.array(y0, dtype=float).ravel(order="F")
    aprod = 1.0
    if jump_at_start:
        imp = system.impulse_at(t_from)
        if imp is not None:
            y = _apply_jump(imp, y)
            aprod *= imp.alpha
    pieces: list[_Piece] = []
    bounds = [t_from, *system.interior_knots(t_from, t_to), t_to]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi - lo > eps:
            segs = system.segment_evaluators(0.5 * (lo + hi))
            rhs = _rhs_factory(*segs, y.size)
            sol = solve_ivp(rhs, (lo, hi), y, method="RK45",
                            rtol=tol.rel_tol, atol=tol.abs_tol, dense_output=dense)
            if not sol.success:
                raise IntegrationFailureError(sol.message, float(sol.t[-1]))
            y = np.asarray(sol.y[:, -1], dtype=float)
            if not np.all(np.isfinite(y)):
                raise IntegrationFailureError("state is non-finite", float(sol.t[-1]))
            pieces.append(_Piece(lo, hi, sol.sol if dense else None, aprod,
                                 None if dense else y))
        else:
            pieces.append(_Piece(lo, hi, None, aprod, y.copy()))
        if hi < t_to - eps:
            imp = system.impulse_at(hi)
            if imp is not None:
                y = _apply_jump(imp, y)
                aprod *= imp.alpha
    return y, aprod, pieces


class Trajectory:
    """Dense solution over a window inside one period."""

    def __init__(self, system: ImpulsiveSystem, t_from: float, t_to: float,
                 y0: np.ndarray, tol: Tolerances, jump_at_start: bool = False):
        self.system = system
        self.t_from = float(t_from)
        self.t_to = float(t_to)
        self.shape = np.asarray(y0).shape
        y_end, aprod_end, pieces = _walk(system, t_from, t_to, np.asarray(y0, dtype=float),
                                         tol, dense=True, jump_at_start=jump_at_start)
        self.pieces = pieces
        self.y_end = y_end
        self.aprod_end = aprod_end
        self._starts = [p.t_lo for p in pieces]
        self._eps = 1e-12 * max(1.0, system.period)

    def _locate(self, t: float, side: str | None) -> _Piece:
        eps = self._eps
        if t < self.t_from - eps or t > self.t_to + eps:
            raise ValueError(f"t={t} outside trajectory window [{self.t_from}, {self.t_to}]")
        t = min(max(t, self.t_from), self.t_to)
        if not self.pieces:
            raise ValueError("empty trajectory")
        i = bisect.bisect_right(self._starts, t) - 1
        i = max(i, 0)
        if side is None:
            side = LEFT if self.system.impulse_at(t) is not None or t >= self.t_to - eps else RIGHT
        if side == LEFT and i > 0 and t - self._starts[i] <= eps:
            i -= 1
        if side == RIGHT and i < len(self.pieces) - 1 and self.pieces[i].t_hi - t <= eps:
            i += 1
        return self.pieces[i]

    def eval(self, t: float, side: str | None = None) -> np.ndarray:
        p = self._locate(t, side)
        t = min(max(t, p.t_lo), p.t_hi)
        y = p(t)
        return y.reshape(self.shape, order="F") if len(self.shape) == 2 else y

    def alpha_product(self, t: float, side: str | None = None) -> float:
        return self._locate(t, side).aprod

    def sample(self, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Values and alpha products on a grid (right-limit convention)."""
        ts = np.asarray(ts, dtype=float)
        size = 4 if len(self.shape) == 2 else 2
        flat = np.empty((ts.size, size))
        prods = np.empty(ts.size)
        eps = self._eps
        for j, p in enumerate(self.pieces):
            last = j == len(self.pieces) - 1
            mask = (ts >= p.t_lo - (eps if j == 0 else 0.0)) & \
                   ((ts <= p.t_hi + eps) if last else (ts < p.t_hi))
            if not np.any(mask):
                continue
            tt = np.clip(ts[mask], p.t_lo, p.t_hi)
            if p.sol is None:
                flat[mask] = np.asarray(p.y_const, dtype=float)
            else:
                flat[mask] = np.asarray(p.sol(tt), dtype=float).T
            prods[mask] = p.aprod
        if len(self.shape) == 2:
            return flat.reshape(ts.size, 2, 2).transpose(0, 2, 1), prods
        return flat, prods


def _mat_pow(M: np.ndarray, k: int, cache: list[np.ndarray]) -> np.ndarray:
    """M**k by binary expansion; cache holds M**(2**j)."""
    if k == 0:
        return np.eye(2)
    out = None
    j = 0
    while (1 << j) <= k:
        if len(cache) <= j:
            cache.append(cache[j - 1] @ cache[j - 1])
        if k & (1 << j):
            out = cache[j] if out is None else cache[j] @ out
        j += 1
    return out


class DensePath:
    """Dense fundamental solution over [t_start, t_end], any number of periods.

    The first (partial) period is integrated directly; later times compose the
    in-period dense basis with powers of the period map.
    """

    def __init__(self, system: ImpulsiveSystem, t_start: float, t_end: float,
                 tol: Tolerances | None = None):
        tol = tol or DEFAULT_TOLERANCES
        T = system.period
        eps = 1e-12 * max(1.0, T)
        if not -eps <= t_start <= T + eps:
            raise ValueError(f"t_start={t_start} must lie in [0, {T}]")
        if t_end < t_start - eps:
            raise ValueError("t_end before t_start")
        self.system = system
        self.t_start = float(t_start)
        self.t_end = float(t_end)
        self._eps = eps
        self.head = Trajectory(system, t_start, min(t_end, T), np.eye(2), tol)
        self.cycle = None
        self._pow_cache: list[np.ndarray] = []
        if t_end > T + eps:
            if abs(t_start) <= eps:
                self.cycle = self.head
            else:
                self.cycle = Trajectory(system, 0.0, T, np.eye(2), tol)
            self._pow_cache = [np.asarray(self.cycle.y_end).reshape(2, 2, order="F").copy()]

    def _split(self, t: float) -> tuple[int, float]:
        T = self.system.period
        k = math.floor(t / T)
        s = t - k * T
        if s > T - self._eps:
            k += 1
            s = 0.0
        elif s < self._eps:
            s = 0.0
        return k, s

    def matrix(self, t: float, side: str | None = None) -> np.ndarray:
        eps = self._eps
        if t < self.t_start - eps or t > self.t_end + eps:
            raise ValueError(f"t={t} outside path window")
        T = self.system.period
        if t <= self.head.t_to + eps:
            return self.head.eval(min(t, self.head.t_to), side)
        k, s = self._split(t)
        headT = self.head.y_end.reshape(2, 2, order="F")
        Mk = _mat_pow(self._pow_cache[0], k - 1, self._pow_cache)
        base = Mk @ headT
        if s == 0.0 and side in (None, LEFT):
            return base
        return self.cycle.eval(s, side) @ base

    def alpha_product(self, t: float, side: str | None = None) -> float:
        eps = self._eps
        if t <= self.head.t_to + eps:
            return self.head.alpha_product(min(t, self.head.t_to), side)
        k, s = self._split(t)
        prod = self.head.aprod_end * self.cycle.aprod_end ** (k - 1)
        if s == 0.0 and side in (None, LEFT):
            return prod
        return prod * self.cycle.alpha_product(s, side)

    def eval_state(self, t: float, y0: np.ndarray, side: str | None = None) -> np.ndarray:
        return self.matrix(t, side) @ np.asarray(y0, dtype=float)

    def sample_matrices(self, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Matrices (n,2,2) and alpha products (n,) on a sorted grid."""
        ts = np.asarray(ts, dtype=float)
        out = np.empty((ts.size, 2, 2))
        prods = np.empty(ts.size)
        eps = self._eps
        head_mask = ts <= self.head.t_to + eps
        if np.any(head_mask):
            vals, pr = self.head.sample(np.minimum(ts[head_mask], self.head.t_to))
            out[head_mask] = vals
            prods[head_mask] = pr
        rest = ~head_mask
        if np.any(rest):
            T = self.system.period
            ks = np.floor(ts[rest] / T + self._eps / T).astype(int)
            ss = ts[rest] - ks * T
            ss[ss < eps] = 0.0
            headT = self.head.y_end.reshape(2, 2, order="F")
            full = self.cycle.aprod_end
            idx = np.flatnonzero(rest)
            for k in np.unique(ks):
                m = ks == k
                base = _mat_pow(self._pow_cache[0], int(k) - 1, self._pow_cache) @ headT
                vals, pr = self.cycle.sample(ss[m])
                out[idx[m]] = vals @ base
                prods[idx[m]] = self.head.aprod_end * full ** (int(k) - 1) * pr
        return out, prods


def propagate_state(system: ImpulsiveSystem, state: State, t_to: float,
                    tolerances: Tolerances | None = None) -> State:
    """Advance a state to t_to within one period window.

    An impulse at state.t is applied only if the state carries the left-side
    value; an impulse exactly at t_to is not applied (the result carries the
    left-side value there).
    """
    tol = tolerances or DEFAULT_TOLERANCES
    T = system.period
    eps = 1e-12 * max(1.0, T)
    if t_to < state.t - eps:
        raise ValueError("t_to must not precede the state time")
    if t_to > T + eps or state.t < -eps:
        raise ValueError(f"window [{state.t}, {t_to}] outside [0, {T}]")
    if abs(t_to - state.t) <= eps:
        return state
    y, _, _ = _walk(system, state.t, t_to, state.vector, tol, dense=False,
                    jump_at_start=(state.side == LEFT))
    side = LEFT if system.impulse_at(t_to) is not None else RIGHT
    return State(t_to, float(y[0]), float(y[1]), side)


def fundamental_matrix(system: ImpulsiveSystem, t_from: float, t_to: float,
                       tolerances: Tolerances | None = None) -> FundamentalMatrix:
    """Basis-solution matrix over [t_from, t_to] (identity at t_from)."""
    tol = tolerances or DEFAULT_TOLERANCES
    if t_to < t_from:
        raise ValueError("t_to must not precede t_from")
    y, _, _ = _walk(system, t_from, t_to, np.eye(2), tol, dense=False)
    return FundamentalMatrix(y.reshape(2, 2, order="F"), t_from, t_to)


def monodromy(system: ImpulsiveSystem, tolerances: Tolerances | None = None) -> MonodromyResult:
    """Period map, trace, determinant and characteristic roots.

    The determinant used in the characteristic polynomial is the exact
    impulse product; the integrated determinant is retained as a cross-check.
    """
    violations = validate_system(system)
    if violations:
        raise InvalidSystemError(violations)
    tol = tolerances or DEFAULT_TOLERANCES
    fm = fundamental_matrix(system, 0.0, system.period, tol)
    X = fm.matrix
    trace = float(X[0, 0] + X[1, 1])
    det_prod = system.schedule.alpha_sq_product
    det_int = float(np.linalg.det(X))
    mult = floquet_multipliers(trace, det_prod)
    err = 10.0 * (tol.abs_tol + tol.rel_tol * float(np.linalg.norm(X, 2)))
    return MonodromyResult(matrix=X, period=system.period, trace=trace, det=det_prod,
                           det_integrated=det_int, multipliers=mult,
                           error_estimate=err, tolerances=tol)
