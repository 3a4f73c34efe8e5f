"""Small deterministic Levenberg-Marquardt engine.

Damped Gauss-Newton with a finite-difference Jacobian, per-parameter
scaling and box bounds (step clamping).  No randomness anywhere: the
same problem always takes the same path, which the fit reports rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_FD_REL = 1e-6          # central-difference step, in scaled coordinates
_LAMBDA_INIT = 1e-3
_LAMBDA_UP = 10.0
_LAMBDA_DOWN = 0.3
_LAMBDA_MAX = 1e14


@dataclass
class LeastSquaresResult:
    """Outcome of :func:`least_squares`.

    ``cost`` is the sum of squared residuals at ``x``; ``jac`` the
    Jacobian there (for covariance estimates); ``converged`` reflects
    the gradient/step/cost criteria, with ``message`` naming which.
    """

    x: np.ndarray
    cost: float
    residual: np.ndarray
    jac: np.ndarray
    iterations: int
    converged: bool
    message: str


def _clip(x, lower, upper):
    return np.minimum(np.maximum(x, lower), upper)


def _fd_jacobian(fun, x, scale, lower, upper):
    """Central-difference Jacobian with bound-respecting evaluation points."""
    n = x.size
    cols = []
    for i in range(n):
        h = _FD_REL * scale[i]
        xm = x.copy()
        xp = x.copy()
        xp[i] = min(x[i] + h, upper[i])
        xm[i] = max(x[i] - h, lower[i])
        dx = xp[i] - xm[i]
        if dx == 0.0:  # parameter pinned by a degenerate bound
            cols.append(np.zeros_like(np.asarray(fun(x))))
            continue
        cols.append((np.asarray(fun(xp)) - np.asarray(fun(xm))) / dx)
    return np.column_stack(cols)


def least_squares(
    fun,
    x0,
    *,
    bounds=None,
    x_scale=None,
    max_iter: int = 100,
    gtol: float = 1e-8,
    xtol: float = 1e-10,
    ftol: float = 1e-12,
) -> LeastSquaresResult:
    """Minimize ``sum(fun(x)**2)`` from ``x0``.

    Parameters
    ----------
    fun : callable
        Maps a parameter vector to a residual vector.
    bounds : (lower, upper) array pair, optional
        Box constraints; steps are clamped onto the box.
    x_scale : array, optional
        Typical magnitude per parameter; conditions the trust region,
        the finite-difference steps and the convergence tests.
    gtol, xtol, ftol : float
        Stop when the scaled gradient norm relative to max(cost, 1)
        falls below ``gtol``, an accepted scaled step falls below
        ``xtol``, or an accepted relative cost reduction falls below
        ``ftol``.
    """
    x = np.asarray(x0, dtype=np.float64).copy()
    n = x.size
    if bounds is None:
        lower = np.full(n, -np.inf)
        upper = np.full(n, np.inf)
    else:
        lower = np.asarray(bounds[0], dtype=np.float64)
        upper = np.asarray(bounds[1], dtype=np.float64)
    scale = (
        np.ones(n) if x_scale is None else np.asarray(x_scale, dtype=np.float64)
    )
    if np.any(scale <= 0.0):
        raise ValueError("x_scale entries must be positive")

    x = _clip(x, lower, upper)
    r = np.asarray(fun(x), dtype=np.float64)
    cost = float(r @ r)
    jac = _fd_jacobian(fun, x, scale, lower, upper)
    lam = _LAMBDA_INIT
    converged = False
    message = "iteration limit reached"
    iterations = 0

    for iterations in range(1, max_iter + 1):
        g = jac.T @ r
        g_rel = float(np.max(np.abs(g * scale))) / max(cost, 1.0)
        if g_rel <= gtol:
            converged = True
            message = f"relative gradient norm {g_rel:.2e} <= {gtol:.0e}"
            break

        jtj = jac.T @ jac
        diag = np.maximum(np.diag(jtj), 1e-14 / scale**2)
        accepted = False
        while lam <= _LAMBDA_MAX:
            try:
                step = np.linalg.solve(jtj + lam * np.diag(diag), -g)
            except np.linalg.LinAlgError:
                step = np.linalg.lstsq(jtj + lam * np.diag(diag), -g, rcond=None)[0]
            x_new = _clip(x + step, lower, upper)
            r_new = np.asarray(fun(x_new), dtype=np.float64)
            cost_new = float(r_new @ r_new)
            if cost_new < cost:
                accepted = True
                break
            lam *= _LAMBDA_UP
        if not accepted:
            # cannot reduce the cost any further in this quadratic model
            g_rel = float(np.max(np.abs(g * scale))) / max(cost, 1.0)
            converged = g_rel <= gtol * 1e2
            message = (
                "no descent step found; "
                + ("gradient already small" if converged else "stalled")
            )
            break

        step_scaled = float(np.max(np.abs((x_new - x) / scale)))
        drop = (cost - cost_new) / max(cost, 1e-300)
        x, r, cost = x_new, r_new, cost_new
        jac = _fd_jacobian(fun, x, scale, lower, upper)
        lam = max(lam * _LAMBDA_DOWN, 1e-12)
        if step_scaled <= xtol:
            converged = True
            message = f"scaled step {step_scaled:.2e} <= {xtol:.0e}"
            break
        if drop <= ftol:
            converged = True
            message = f"relative cost reduction {drop:.2e} <= {ftol:.0e}"
            break

    return LeastSquaresResult(
        x=x,
        cost=cost,
        residual=r,
        jac=jac,
        iterations=iterations,
        converged=converged,
        message=message,
    )


def covariance_diagonal(result: LeastSquaresResult) -> np.ndarray:
    """Per-parameter variance from the Gauss-Newton approximation.

    (J^T J)^-1 scaled by the residual variance at the optimum; an
    estimate, not a guarantee.  Degrees of freedom are clamped at 1 so
    exactly-determined fits return finite numbers.
    """
    m, n = result.jac.shape
    dof = max(m - n, 1)
    s2 = result.cost / dof
    jtj = result.jac.T @ result.jac
    try:
        cov = np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(jtj)
    return np.maximum(np.diag(cov) * s2, 0.0)
