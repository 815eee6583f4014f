"""Dense complex linear algebra and ODE integration shared by the whole package.

Thin, contract-enforcing wrappers around numpy.linalg and scipy's solve_ivp.
Vectorization uses column stacking throughout (vec(A X B) = (B^T kron A) vec X),
and every routine accepts anything numpy can coerce to a complex array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "Spectrum",
    "matmul",
    "kron",
    "partial_trace",
    "eig",
    "solve_or_pinv",
    "integrate_ode",
    "vec",
    "unvec",
]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigendecomposition result.

    eigenvalues : 1-D complex array.
    eigenvectors : matching right eigenvectors as columns, or None when the
        caller asked for eigenvalues only.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None


def _as_complex(a, name="argument"):
    a = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _as_square(a, name="matrix"):
    a = _as_complex(a, name)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def matmul(a, b):
    """Matrix product with an explicit dimension check."""
    a = _as_complex(a, "a")
    b = _as_complex(b, "b")
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"incompatible shapes for matmul: {a.shape} and {b.shape}")
    return a @ b


def kron(a, b):
    """Kronecker product, complex dtype."""
    return np.kron(_as_complex(a, "a"), _as_complex(b, "b"))


def partial_trace(rho, dims, keep):
    """Trace out one factor of a bipartite matrix.

    Parameters
    ----------
    rho : (d0*d1, d0*d1) matrix on the tensor-product space.
    dims : pair (d0, d1) of factor dimensions.
    keep : 0 or 1, index of the subsystem the reduced matrix lives on.
    """
    rho = _as_square(rho, "rho")
    d0, d1 = int(dims[0]), int(dims[1])
    if d0 < 1 or d1 < 1 or d0 * d1 != rho.shape[0]:
        raise ValueError(f"dims {dims} incompatible with matrix of shape {rho.shape}")
    r = rho.reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum("ijkj->ik", r)
    if keep == 1:
        return np.einsum("ijil->jl", r)
    raise ValueError("keep must be 0 or 1")


def eig(a, vectors=True):
    """General complex eigendecomposition.

    Returns a Spectrum; eigenvalues come in LAPACK order (no sorting here).
    Convergence failures propagate as numpy.linalg.LinAlgError.
    """
    a = _as_square(a)
    if vectors:
        w, v = np.linalg.eig(a)
        return Spectrum(w, v)
    return Spectrum(np.linalg.eigvals(a), None)


def solve_or_pinv(a, b, rank_tol=1e-12):
    """Solve a x = b, falling back to the minimum-norm least-squares solution.

    Singular values below rank_tol times the largest are treated as zero,
    so rank-deficient systems return the pseudo-inverse solution with no
    component along the dropped directions.
    """
    a = _as_complex(a, "a")
    b = _as_complex(b, "b")
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValueError(f"incompatible shapes for solve: {a.shape} and {b.shape}")
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=rank_tol)
    return x


def integrate_ode(f, y0, t_span, tol=1e-10):
    """Integrate dy/dt = f(t, y) for matrix- or vector-valued complex y.

    DOP853 with rtol = atol = tol. Returns y at the end of t_span with the
    shape of y0. Solver failures (e.g. step-size underflow) raise RuntimeError.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    y0 = _as_complex(y0, "y0")
    shape = y0.shape

    def rhs(t, y):
        return np.asarray(f(t, y.reshape(shape)), dtype=complex).reshape(-1)

    sol = solve_ivp(rhs, tuple(t_span), y0.reshape(-1), method="DOP853",
                    rtol=tol, atol=tol)
    if not sol.success:
        raise RuntimeError(f"ODE integration failed: {sol.message}")
    return sol.y[:, -1].reshape(shape)


def vec(a):
    """Column-stacking vectorization."""
    return np.asarray(a, dtype=complex).reshape(-1, order="F")


def unvec(v, dim=None):
    """Inverse of vec; dim defaults to the square root of the length."""
    v = np.asarray(v, dtype=complex)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise ValueError(f"cannot reshape length {v.size} into a square matrix")
    return v.reshape(dim, dim, order="F")
