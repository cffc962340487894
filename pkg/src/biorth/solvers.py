"""First-order descent over a manifold interface.

Gradient descent and Polak-Ribiere conjugate gradient, both with Armijo
backtracking, plus a finite-difference gradient checker. A problem is any
object with ``cost(x, y) -> float`` and ``euclidean_gradient(x, y) ->
AmbientPair``; the manifold supplies project/retract/metric/transport.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import InvalidTangentError, LineSearchError, NumericalError, OffManifoldError


@dataclass
class SolverOptions:
    """Shared knobs for the first-order solvers.

    cg_restart_every = None means "restart every dim(manifold) iterations".
    """

    max_iters: int = 100
    grad_tol: float = 1e-8
    armijo_c1: float = 1e-4
    backtrack_factor: float = 0.5
    initial_step: float = 1.0
    cg_restart_every: int | None = None
    min_step: float = 1e-16

    def __post_init__(self):
        if self.max_iters < 0:
            raise ValueError(f"max_iters must be >= 0, got {self.max_iters}")
        if self.grad_tol < 0:
            raise ValueError(f"grad_tol must be >= 0, got {self.grad_tol}")
        if not 0 < self.armijo_c1 < 1:
            raise ValueError(f"armijo_c1 must be in (0, 1), got {self.armijo_c1}")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError(
                f"backtrack_factor must be in (0, 1), got {self.backtrack_factor}"
            )
        if self.initial_step <= 0:
            raise ValueError(f"initial_step must be > 0, got {self.initial_step}")
        if self.cg_restart_every is not None and self.cg_restart_every < 1:
            raise ValueError(
                f"cg_restart_every must be >= 1, got {self.cg_restart_every}"
            )
        if self.min_step <= 0:
            raise ValueError(f"min_step must be > 0, got {self.min_step}")


@dataclass(frozen=True)
class TraceRecord:
    """One accepted iterate: cost, gradient norm, fro_norm(x @ y - I), wall time."""

    iter: int
    cost: float
    grad_norm: float
    feas_err: float
    elapsed_ms: float


def riemannian_gradient(problem, manifold, p):
    """Euclidean gradient projected onto the tangent space at `p`."""
    return manifold.project(p, problem.euclidean_gradient(p.x, p.y))


def armijo_search(problem, manifold, p, direction, slope, opts, f0=None, initial_step=None):
    """Backtracking line search along `direction` from `p`.

    `slope` is the metric inner product of the Riemannian gradient with the
    direction and must be negative. Returns (step, new_point, new_cost)
    with new_cost <= f0 + armijo_c1 * step * slope. Candidates that leave
    the feasible region or overflow are treated as infinitely bad and
    backtracked past. Once a step is accepted, one quadratic interpolation
    of the ray is tried and kept when it is both lower and still
    acceptable. Raises LineSearchError at the min_step floor.
    """
    if not slope < 0:
        raise ValueError(f"not a descent direction: slope = {slope!r}")
    if f0 is None:
        f0 = problem.cost(p.x, p.y)

    def evaluate(s):
        # Oversized trial steps legitimately overflow before being rejected.
        with np.errstate(over="ignore", invalid="ignore"):
            try:
                candidate = manifold.retract(p, s * direction)
                return candidate, problem.cost(candidate.x, candidate.y)
            except (OffManifoldError, NumericalError, InvalidTangentError):
                return None, math.inf

    def acceptable(s, fc):
        return math.isfinite(fc) and fc <= f0 + opts.armijo_c1 * s * slope

    s = opts.initial_step if initial_step is None else initial_step
    while s >= opts.min_step:
        candidate, fc = evaluate(s)
        if acceptable(s, fc):
            curvature = (fc - f0 - slope * s) / (s * s)
            if curvature > 0:
                t = -slope / (2.0 * curvature)
                if 0 < t < 4.0 * s and abs(t - s) > 1e-3 * s:
                    refined, fr = evaluate(t)
                    if fr < fc and acceptable(t, fr):
                        return t, refined, fr
            return s, candidate, fc
        s *= opts.backtrack_factor
    raise LineSearchError(
        f"no sufficient decrease above min_step = {opts.min_step:.1e}"
    )


def gradient_descent(problem, manifold, p0, opts=None):
    """Steepest descent with Armijo backtracking. Returns (point, trace)."""
    return _descend(problem, manifold, p0, opts, cg=False)


def conjugate_gradient(problem, manifold, p0, opts=None):
    """Nonlinear conjugate gradient with Polak-Ribiere(+) directions.

    Previous directions and gradients are carried to the new tangent space
    by projection; beta is clipped at zero and the direction resets to
    steepest descent on schedule, whenever descent is lost, or when
    successive gradients stop being near-orthogonal (Powell's restart
    criterion), which keeps stale conjugacy information from degrading the
    iteration below plain steepest descent.
    """
    return _descend(problem, manifold, p0, opts, cg=True)


# Restart when |<g_new, g_old>| >= threshold * |g_new|^2 (Powell).
POWELL_RESTART_THRESHOLD = 0.1


def _descend(problem, manifold, p0, opts, cg):
    if opts is None:
        opts = SolverOptions()
    manifold.check_point(p0)
    restart_every = opts.cg_restart_every
    if restart_every is None:
        restart_every = max(manifold.dim, 1)

    started = time.perf_counter()

    def elapsed_ms():
        return (time.perf_counter() - started) * 1e3

    p = p0
    f = problem.cost(p.x, p.y)
    if not math.isfinite(f):
        raise ValueError(f"cost at the starting point is not finite: {f!r}")
    g = riemannian_gradient(problem, manifold, p)
    gnorm_sq = manifold.metric(p, g, g)
    gnorm = math.sqrt(gnorm_sq)
    trace = [TraceRecord(0, f, gnorm, manifold.feasibility_error(p), elapsed_ms())]

    d = -g
    steepest = True
    since_restart = 0
    step_hint = opts.initial_step

    for k in range(1, opts.max_iters + 1):
        if gnorm <= opts.grad_tol:
            break
        slope = -gnorm_sq if steepest else manifold.metric(p, g, d)
        if not steepest and slope >= 0:
            d, steepest, since_restart = -g, True, 0
            slope = -gnorm_sq
        try:
            step, p_new, f_new = armijo_search(
                problem, manifold, p, d, slope, opts, f0=f, initial_step=step_hint
            )
        except LineSearchError:
            if steepest:
                break
            d, steepest, since_restart = -g, True, 0
            try:
                step, p_new, f_new = armijo_search(
                    problem, manifold, p, d, -gnorm_sq, opts, f0=f,
                    initial_step=step_hint,
                )
            except LineSearchError:
                break
        step_hint = min(max(2.0 * step, opts.min_step), 4.0 * opts.initial_step)

        g_new = riemannian_gradient(problem, manifold, p_new)
        gnorm_sq_new = manifold.metric(p_new, g_new, g_new)
        if cg:
            since_restart += 1
            g_prev = manifold.transport(p_new, g)
            orthogonality_lost = (
                abs(manifold.metric(p_new, g_new, g_prev))
                >= POWELL_RESTART_THRESHOLD * gnorm_sq_new
            )
            if since_restart >= restart_every or orthogonality_lost:
                d, steepest, since_restart = -g_new, True, 0
            else:
                d_prev = manifold.transport(p_new, d)
                beta = max(
                    0.0,
                    manifold.metric(p_new, g_new, g_new - g_prev) / gnorm_sq,
                )
                d = -g_new + beta * d_prev
                steepest = beta == 0.0
        else:
            d, steepest = -g_new, True

        p, f, g = p_new, f_new, g_new
        gnorm_sq = gnorm_sq_new
        gnorm = math.sqrt(gnorm_sq)
        trace.append(
            TraceRecord(k, f, gnorm, manifold.feasibility_error(p), elapsed_ms())
        )

    return p, trace


def fd_gradient_check(problem, manifold, p, n_dirs=10, h=1e-6, seed=0):
    """Worst relative error of the projected gradient against central differences.

    Compares metric(grad, t) with (f(R(h t)) - f(R(-h t))) / 2h along
    `n_dirs` seeded unit tangents t at `p`.
    """
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    g = riemannian_gradient(problem, manifold, p)
    worst = 0.0
    for i in range(n_dirs):
        t = manifold.random_tangent(seed + i, p, 1.0)
        analytic = manifold.metric(p, g, t)
        fp = problem.cost(*_xy(manifold.retract(p, h * t)))
        fm = problem.cost(*_xy(manifold.retract(p, (-h) * t)))
        fd = (fp - fm) / (2.0 * h)
        denom = max(abs(analytic), abs(fd), 1e-12)
        worst = max(worst, abs(analytic - fd) / denom)
    return worst


def _xy(point):
    return point.x, point.y
