"""Error norms, order fits, energy series, and symplecticity checks.

The mean-square error of a batch of phase-space differences is the
square root of the mean squared Euclidean norm. Convergence order is
the slope of an ordinary least-squares line through (log dt, log error).
Symplecticity of a one-step map is measured through the defect
``J^T Jc J - Jc`` of its finite-difference Jacobian, reported in the
spectral norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._csv import fmt, write_csv
from .errors import DomainError
from .hamiltonian import PhaseState, hamiltonian_value

__all__ = [
    "OrderFit",
    "ms_error",
    "estimate_order",
    "reference_residual",
    "hamiltonian_series",
    "one_step_jacobian",
    "symplectic_defect",
    "write_order_fit_csv",
]

FD_STEP = 1e-6


@dataclass(frozen=True)
class OrderFit:
    """Least-squares fit of log(error) against log(dt).

    residual is the largest absolute deviation of the data from the
    fitted line, in log space.
    """

    dts: np.ndarray
    errors: np.ndarray
    slope: float
    intercept: float
    residual: float

    def __post_init__(self):
        dts = np.asarray(self.dts, dtype=float)
        errors = np.asarray(self.errors, dtype=float)
        if dts.ndim != 1 or dts.size < 3 or errors.shape != dts.shape:
            raise DomainError("dts and errors must be 1-D of equal length >= 3")
        if not (np.all(dts > 0) and np.all(errors > 0)):
            raise DomainError("dts and errors must be positive")
        object.__setattr__(self, "dts", dts)
        object.__setattr__(self, "errors", errors)


def ms_error(differences):
    """Root mean squared Euclidean norm over a batch of difference vectors."""
    diffs = np.atleast_2d(np.asarray(differences, dtype=float))
    if diffs.size == 0:
        raise DomainError("differences must be non-empty")
    if not np.all(np.isfinite(diffs)):
        raise DomainError("differences must be finite")
    return float(np.sqrt(np.mean(np.sum(diffs * diffs, axis=-1))))


def estimate_order(dts, errors):
    """Fit log(error) = slope*log(dt) + intercept by ordinary least squares."""
    dts = np.asarray(dts, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if dts.ndim != 1 or dts.size < 3:
        raise DomainError("need at least 3 step sizes")
    if errors.shape != dts.shape:
        raise DomainError("dts and errors must have equal length")
    if not (np.all(dts > 0) and np.all(errors > 0)):
        raise DomainError("dts and errors must be positive for a log-log fit")
    log_dt = np.log(dts)
    log_err = np.log(errors)
    slope, intercept = np.polyfit(log_dt, log_err, 1)
    residual = float(np.max(np.abs(log_err - (slope * log_dt + intercept))))
    return OrderFit(dts, errors, float(slope), float(intercept), residual)


def reference_residual(fit, slope=0.5):
    """Max log deviation from the best line of a prescribed slope.

    The intercept is chosen to minimize the same max-deviation metric,
    so the result measures how far the data departs from an exact
    power law of the given order.
    """
    log_dt = np.log(fit.dts)
    log_err = np.log(fit.errors)
    centered = log_err - slope * log_dt
    intercept = 0.5 * (np.max(centered) + np.min(centered))
    return float(np.max(np.abs(centered - intercept)))


def hamiltonian_series(system, trajectory, r=None):
    """Energy along a trajectory as an (N, 2) array of (time, value)."""
    out = np.empty((len(trajectory), 2))
    for j in range(len(trajectory)):
        out[j, 0] = trajectory.times[j]
        out[j, 1] = hamiltonian_value(system, r, trajectory.state(j))
    return out


def _apply_step(system, scheme, state, dt, dL, controls):
    # imported here to avoid a module cycle: integrators imports the
    # phase-state types from hamiltonian, analysis sits above both
    from .integrators import explicit_euler_step, symplectic_euler_step

    if scheme == "symplectic":
        return symplectic_euler_step(system, state, dt, dL, controls)
    if scheme == "explicit":
        return explicit_euler_step(system, state, dt, dL, controls)
    raise DomainError(f"scheme must be 'symplectic' or 'explicit', got {scheme!r}")


def one_step_jacobian(system, scheme, state, dt, dL, controls, step=FD_STEP):
    """Central finite-difference Jacobian of one step of a scheme.

    Coordinates are ordered (p_1..p_n, q_1..q_n); column k differentiates
    with respect to the k-th coordinate of the input state.
    """
    x0 = state.as_vector()
    dim = x0.size
    jac = np.empty((dim, dim))
    for k in range(dim):
        xp = x0.copy()
        xm = x0.copy()
        xp[k] += step
        xm[k] -= step
        sp = _apply_step(system, scheme, PhaseState.from_vector(xp), dt, dL, controls)
        sm = _apply_step(system, scheme, PhaseState.from_vector(xm), dt, dL, controls)
        jac[:, k] = (sp.as_vector() - sm.as_vector()) / (2.0 * step)
    return jac


def symplectic_defect(jacobian):
    """Spectral norm of J^T Jc J - Jc where Jc = ((0, I), (-I, 0))."""
    jac = np.asarray(jacobian, dtype=float)
    if jac.ndim != 2 or jac.shape[0] != jac.shape[1]:
        raise DomainError("jacobian must be a square matrix")
    dim = jac.shape[0]
    if dim % 2 != 0 or dim == 0:
        raise DomainError(f"jacobian dimension must be even and positive, got {dim}")
    n = dim // 2
    eye = np.eye(n)
    jc = np.block([[np.zeros((n, n)), eye], [-eye, np.zeros((n, n))]])
    defect = jac.T @ jc @ jac - jc
    return float(np.linalg.norm(defect, ord=2))


def write_order_fit_csv(fit, file_path):
    """CSV with per-dt rows and a trailing slope,intercept,residual line."""
    rows = []
    for dt, err in zip(fit.dts, fit.errors):
        rows.append([fmt(dt), fmt(err), fmt(math.log(dt)), fmt(math.log(err))])
    trailer = "slope,intercept,residual\n" + ",".join(
        [fmt(fit.slope), fmt(fit.intercept), fmt(fit.residual)]
    )
    write_csv(file_path, "dt,ms_error,log_dt,log_error", rows, trailer=trailer)
