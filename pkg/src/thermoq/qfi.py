"""Quantum Fisher information for temperature estimation.

Three evaluation routes, each tagged in the returned QfiResult:

* "qubit-closed-form": the 2x2 formula
      I = 4 Tr[rho (d rho)^2] + (det rho)^{-1} (d det rho)^2,
  valid for mixed qubit states (equivalent to the Bloch-vector expression
  |dr|^2 + (r.dr)^2/(1-|r|^2)).
* "vectorized": the general mixed-state formula
      I = 2 vec(d rho)^dag (rho* (x) 1 + 1 (x) rho)^+ vec(d rho),
  evaluated in the factorized eigenbasis of the Jordan superoperator: with
  rho = sum_a p_a |a><a| its eigenpairs are conj|a> (x) |b> at p_a + p_b, so
      I = 2 sum_{ab, p_a+p_b > cutoff} |<a| d rho |b>|^2 / (p_a + p_b).
* "long-time-approx": the printed long-time expression for the two-level
  meter, controlled by the effective decay rate Gamma_N.

Temperature derivatives of states are central finite differences unless an
analytic derivative is supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bath import bose_occupation, d_occupation_dT
from .dynamics import joint_state, meter_state

__all__ = [
    "QfiResult",
    "SupportError",
    "state_derivative",
    "qfi_qubit",
    "qfi_general",
    "qfi_longtime",
    "meter_qfi",
    "joint_qfi",
    "effective_decay_rate",
]

# derivatives with weight beyond this (relative to ||d rho||_F, floored at 1)
# on the Jordan null space indicate a rank-changing derivative or a rank_tol
# too coarse for the state
_SUPPORT_TOL = 1e-8

# QFI estimates may dip this far below zero from roundoff before it is an error
_NEGATIVE_TOL = 1e-9


@dataclass(frozen=True)
class QfiResult:
    """QFI value, the formula that produced it, and the finite-difference
    step used for the temperature derivative (None = analytic input)."""

    value: float
    method: str
    derivative_step: float | None = None


class SupportError(ValueError):
    """vec(d rho) has weight outside the numerical support of the Jordan operator."""


def _clipped(value):
    if value < -_NEGATIVE_TOL:
        raise ValueError(f"QFI evaluated to {value}, below the roundoff tolerance")
    return max(value, 0.0)


def state_derivative(state_fn, tau, step=None):
    """Central-difference temperature derivative of a matrix-valued map.

    step defaults to 1e-6 tau. The result of differencing Hermitian
    constant-trace states is Hermitian and traceless to roundoff.
    """
    h = 1e-6 * tau if step is None else float(step)
    if not (h > 0 and tau - h > 0):
        raise ValueError(f"step {h!r} invalid for tau = {tau!r}")
    d = (np.asarray(state_fn(tau + h), dtype=complex)
         - np.asarray(state_fn(tau - h), dtype=complex)) / (2.0 * h)
    if not np.all(np.isfinite(d)):
        raise ValueError("state derivative contains non-finite entries")
    return d


def qfi_qubit(rho, drho):
    """Closed-form qubit QFI; falls back to qfi_general within 1e-14 of purity."""
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    if rho.shape != (2, 2) or drho.shape != (2, 2):
        raise ValueError("qfi_qubit needs 2x2 matrices")
    det = (rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]).real
    if det < 1e-14:
        return qfi_general(rho, drho)
    term = 4.0 * np.trace(rho @ drho @ drho).real
    ddet = (drho[0, 0] * rho[1, 1] + rho[0, 0] * drho[1, 1]
            - drho[0, 1] * rho[1, 0] - rho[0, 1] * drho[1, 0]).real
    return QfiResult(_clipped(term + ddet * ddet / det), "qubit-closed-form")


def qfi_general(rho, drho, rank_tol=1e-12):
    """General mixed-state QFI via the pseudo-inverse of the Jordan superoperator.

    Eigenvalues of rho* (x) 1 + 1 (x) rho below rank_tol times the largest
    are dropped; any weight of the derivative on the dropped subspace beyond
    1e-8 (relative to its norm) raises SupportError.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    if rho.ndim != 2 or rho.shape != drho.shape or rho.shape[0] != rho.shape[1]:
        raise ValueError("rho and drho must be square matrices of equal shape")
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    p, u = np.linalg.eigh(rho)
    e = u.conj().T @ drho @ u
    denom = p[:, None] + p[None, :]
    cutoff = rank_tol * denom.max()
    support = denom > cutoff
    weights = np.abs(e) ** 2
    norm = math.sqrt(weights.sum())
    outside = math.sqrt(weights[~support].sum())
    if outside > _SUPPORT_TOL * max(1.0, norm):
        raise SupportError(
            f"derivative weight {outside:.3e} outside the state support "
            f"(rank_tol={rank_tol:g}); derivative changes the rank or rank_tol is too coarse")
    value = 2.0 * float(np.sum(weights[support] / denom[support]))
    return QfiResult(_clipped(value), "vectorized")


def effective_decay_rate(params, omega_drive):
    """Slow decoherence rate Gamma_N = N gamma (Omega^2 - N gamma^2)/(Omega^2 + gamma^2)."""
    n = bose_occupation(params)
    g = params.gamma
    return n * g * (omega_drive ** 2 - n * g * g) / (omega_drive ** 2 + g * g)


def qfi_longtime(params, omega_drive, t):
    """Long-time approximation of the two-level meter QFI.

    I ~ (dN/dtau)^2 gamma^2 t^2 e^{-2 Gamma_N t} / (Omega^2 + gamma^2)
        * (Omega^2 + 4 gamma^2 N^2 + (Omega^2 - 2 gamma^2 N)^2
           / ((Omega^2 + gamma^2)(e^{2 Gamma_N t} - 1)))

    Valid for gamma t >> 1; returns the formula value without validity checks
    beyond t > 0.
    """
    if not t > 0:
        raise ValueError("the long-time approximation needs t > 0")
    n = bose_occupation(params)
    dn = d_occupation_dT(params)
    g = params.gamma
    o2 = omega_drive ** 2
    gamma_n = effective_decay_rate(params, omega_drive)
    # np.exp saturates instead of raising; for gamma_n < 0 (outside the
    # approximation's validity) the formula value is returned as-is
    decay = float(np.exp(-2.0 * gamma_n * t))
    if decay == 0.0:
        return QfiResult(0.0, "long-time-approx")
    pref = dn * dn * g * g * t * t * decay / (o2 + g * g)
    tail = (o2 - 2.0 * g * g * n) ** 2 / ((o2 + g * g) * float(np.expm1(2.0 * gamma_n * t)))
    return QfiResult(_clipped(pref * (o2 + 4.0 * g * g * n * n + tail)),
                     "long-time-approx")


def meter_qfi(params, meter, psi0, t, step=None):
    """Temperature QFI of the reduced meter state at time t.

    Finite-difference derivative in tau (step defaults to 1e-6 tau), then the
    qubit closed form for n = 2 and the vectorized general formula otherwise.
    """
    tau = params.temperature
    h = 1e-6 * tau if step is None else float(step)

    def state(x):
        return meter_state(replace(params, temperature=x), meter, psi0, t)

    drho = state_derivative(state, tau, h)
    rho = state(tau)
    inner = qfi_qubit(rho, drho) if meter.n == 2 else qfi_general(rho, drho)
    return QfiResult(inner.value, inner.method, h)


def joint_qfi(params, meter, psi0, t, step=None):
    """Temperature QFI of the full joint sensor-meter state at time t."""
    tau = params.temperature
    h = 1e-6 * tau if step is None else float(step)

    def state(x):
        return joint_state(replace(params, temperature=x), meter, psi0, t)

    drho = state_derivative(state, tau, h)
    inner = qfi_general(state(tau), drho)
    return QfiResult(inner.value, inner.method, h)
