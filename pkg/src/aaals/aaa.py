"""Discrete AAA rational approximation on a fixed sample set.

Greedy loop: adopt the sample of largest residual as a new support point,
solve the Loewner least-squares problem for the weights (smallest right
singular vector), stop once the relative sup-norm error drops below the
tolerance or the degree cap is reached.  Ties in the residual break toward
the lowest sample index so reruns are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .barycentric import BarycentricRational, PoleSet

__all__ = ["AaaResult", "aaa_fit"]


@dataclass(frozen=True)
class AaaResult:
    approx: BarycentricRational
    max_error: float
    poles: PoleSet
    iterations: int
    converged: bool


def aaa_fit(F, Z, tol: float = 1e-13, mmax: int = 100) -> AaaResult:
    """Fit a rational function to samples F on points Z.

    ``tol`` is relative to ``max|F|``; ``mmax`` caps the degree (the number of
    support points is at most ``mmax + 1``).  Non-convergence is reported via
    ``converged=False`` rather than an exception.  The returned pole set is
    cleaned of Froissart doublets (residue below ``1e-13 * max|F|``).
    """
    Z = np.asarray(Z, dtype=complex).ravel()
    F = np.asarray(F, dtype=complex).ravel()
    if len(Z) != len(F):
        raise ValueError("Z and F must have equal length")
    if len(Z) < 2:
        raise ValueError("need at least 2 samples")
    if np.unique(Z).size != Z.size:
        raise ValueError("sample points must be pairwise distinct")

    norm_f = float(np.abs(F).max())
    if norm_f == 0.0:
        # zero data: degree-0 zero function
        r = BarycentricRational(Z[:1], F[:1], np.ones(1))
        return AaaResult(r, 0.0, PoleSet(*3 * (np.empty(0, complex),)), 1, True)

    rest = np.ones(len(Z), dtype=bool)
    sup_idx: list[int] = []
    R = np.full(len(F), F.mean(), dtype=complex)
    w = np.ones(1, dtype=complex)
    err = np.inf
    iters = 0
    for _ in range(mmax + 1):
        iters += 1
        jj = int(np.argmax(np.where(rest, np.abs(F - R), -1.0)))
        sup_idx.append(jj)
        rest[jj] = False
        zj = Z[sup_idx]
        fj = F[sup_idx]
        C = 1.0 / (Z[rest, None] - zj[None, :])
        A = (F[rest, None] - fj[None, :]) * C
        _, _, Vh = np.linalg.svd(A, full_matrices=False)
        w = Vh[-1].conj()
        R = F.copy()
        if len(sup_idx) == 1:
            R[rest] = fj[0]
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                R[rest] = (C @ (w * fj)) / (C @ w)
        err = float(np.abs(F - R).max())
        if err <= tol * norm_f:
            break

    r = BarycentricRational(Z[sup_idx], F[sup_idx], w)
    poles = r.pole_set().filter_spurious(norm_f) if r.degree >= 1 else PoleSet(
        *3 * (np.empty(0, complex),)
    )
    return AaaResult(r, err, poles, iters, err <= tol * norm_f)
