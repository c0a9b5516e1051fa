"""Hamiltonian system descriptions and the Kubo oscillator oracle.

A system in this package is the separable-coefficient form

    dP = -sigma_0(P,Q) dt - sum_r sigma_r(P,Q) (jump increments)
    dQ = +gamma_0(P,Q) dt + sum_r gamma_r(P,Q) (jump increments)

where sigma_r = dH_r/dQ and gamma_r = dH_r/dP for Hamiltonians H_r,
r = 0..m (r = 0 is the drift, r = 1..m the noise channels). Systems are
built from caller-supplied pure evaluators; a finite-difference check
(gradient_defect) guards the gradient identities.

The Kubo oscillator (n = 1) is the package's exactly solvable instance:
its solution is a rotation by angle alpha*t + beta*L(t), which makes it
the oracle behind most tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidSpecError

__all__ = [
    "PhaseState",
    "HamiltonianSystem",
    "KuboParams",
    "kubo_system",
    "kubo_exact",
    "hamiltonian_value",
    "gradient_defect",
]


@dataclass(frozen=True)
class PhaseState:
    """Momentum/position pair; both are length-n float vectors."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float, copy=True).reshape(-1)
        q = np.array(self.q, dtype=float, copy=True).reshape(-1)
        if p.size < 1 or p.size != q.size:
            raise DomainError(f"p and q must have equal length >= 1, got {p.size} and {q.size}")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise DomainError("phase-space entries must be finite")
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def n(self):
        return self.p.size

    def as_vector(self):
        """Concatenated (p, q) vector of length 2n."""
        return np.concatenate([self.p, self.q])

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=float)
        if vec.ndim != 1 or vec.size % 2 != 0:
            raise DomainError("vector must be 1-D with even length")
        n = vec.size // 2
        return cls(vec[:n], vec[n:])


@dataclass(frozen=True)
class HamiltonianSystem:
    """Coefficient evaluators sigma_r, gamma_r and Hamiltonians H_r, r = 0..m.

    Parameters
    ----------
    n : int
        Degrees of freedom.
    m : int
        Noise channel count (entries 1..m of the evaluator tuples).
    sigma, gamma : tuple of callables
        Each maps (p, q) arrays of length n to an array of length n;
        sigma[r] must be dH_r/dQ and gamma[r] must be dH_r/dP.
    hamiltonians : tuple of callables
        Each maps (p, q) to a float.
    monitored : callable or None
        Optional scalar invariant reported by the analysis module when
        no index is given (the Kubo system monitors (P^2+Q^2)/2).
    """

    n: int
    m: int
    sigma: tuple
    gamma: tuple
    hamiltonians: tuple
    monitored: object = None

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidSpecError(f"n must be an integer >= 1, got {self.n!r}")
        if not (isinstance(self.m, int) and self.m >= 0):
            raise InvalidSpecError(f"m must be an integer >= 0, got {self.m!r}")
        for name, evaluators in (("sigma", self.sigma), ("gamma", self.gamma), ("hamiltonians", self.hamiltonians)):
            if len(evaluators) != self.m + 1:
                raise InvalidSpecError(f"{name} must have m+1 = {self.m + 1} entries, got {len(evaluators)}")
            if not all(callable(f) for f in evaluators):
                raise InvalidSpecError(f"{name} entries must be callable")
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "gamma", tuple(self.gamma))
        object.__setattr__(self, "hamiltonians", tuple(self.hamiltonians))
        if self.monitored is not None and not callable(self.monitored):
            raise InvalidSpecError("monitored must be callable or None")


@dataclass(frozen=True)
class KuboParams:
    """Kubo oscillator constants: drift rate alpha, noise coupling beta."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise InvalidSpecError(f"{name} must be a finite real, got {value!r}")


def kubo_system(params):
    """The Kubo oscillator as a HamiltonianSystem (n = 1, m = 1).

    Coefficients: sigma_0 = alpha*Q, gamma_0 = alpha*P, sigma_1 = beta*Q,
    gamma_1 = beta*P, from H_0 = alpha*(P^2+Q^2)/2 and
    H_1 = beta*(P^2+Q^2)/2. The monitored invariant is (P^2+Q^2)/2.
    """
    alpha = float(params.alpha)
    beta = float(params.beta)

    def h0(p, q):
        return 0.5 * alpha * (float(p[0]) ** 2 + float(q[0]) ** 2)

    def h1(p, q):
        return 0.5 * beta * (float(p[0]) ** 2 + float(q[0]) ** 2)

    def energy(p, q):
        return 0.5 * (float(p[0]) ** 2 + float(q[0]) ** 2)

    return HamiltonianSystem(
        n=1,
        m=1,
        sigma=(lambda p, q: alpha * q, lambda p, q: beta * q),
        gamma=(lambda p, q: alpha * p, lambda p, q: beta * p),
        hamiltonians=(h0, h1),
        monitored=energy,
    )


def kubo_exact(params, initial, t, L_t):
    """Exact Kubo solution: rotate the initial state by alpha*t + beta*L(t).

    Returns PhaseState(p*cos(theta) - q*sin(theta), p*sin(theta) + q*cos(theta)).
    The rotation preserves p^2 + q^2 exactly, which is what makes this
    the oracle for energy and convergence tests.
    """
    theta = params.alpha * t + params.beta * L_t
    c = math.cos(theta)
    s = math.sin(theta)
    p = initial.p
    q = initial.q
    return PhaseState(p * c - q * s, p * s + q * c)


def hamiltonian_value(system, r, state):
    """Evaluate H_r at a state; r = None selects the monitored invariant."""
    if r is None:
        if system.monitored is None:
            raise DomainError("system registers no monitored invariant")
        return float(system.monitored(state.p, state.q))
    if not (isinstance(r, int) and 0 <= r <= system.m):
        raise DomainError(f"Hamiltonian index {r!r} outside 0..{system.m}")
    return float(system.hamiltonians[r](state.p, state.q))


def gradient_defect(system, state, step=1e-5):
    """Worst relative mismatch between coefficients and H_r gradients.

    Central finite differences of H_r with the given step are compared
    against sigma_r (the Q-gradient) and gamma_r (the P-gradient) for
    every r; the relative scale is max(1, |coefficient|) so states with
    vanishing gradients do not inflate the measure.
    """
    p = np.asarray(state.p, dtype=float)
    q = np.asarray(state.q, dtype=float)
    worst = 0.0
    for r in range(system.m + 1):
        h = system.hamiltonians[r]
        sig = np.asarray(system.sigma[r](p, q), dtype=float)
        gam = np.asarray(system.gamma[r](p, q), dtype=float)
        for i in range(system.n):
            dq = np.zeros(system.n)
            dq[i] = step
            fd_q = (h(p, q + dq) - h(p, q - dq)) / (2.0 * step)
            dp = np.zeros(system.n)
            dp[i] = step
            fd_p = (h(p + dp, q) - h(p - dp, q)) / (2.0 * step)
            worst = max(worst, abs(fd_q - sig[i]) / max(1.0, abs(sig[i])))
            worst = max(worst, abs(fd_p - gam[i]) / max(1.0, abs(gam[i])))
    return worst
