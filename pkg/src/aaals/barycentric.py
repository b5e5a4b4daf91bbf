"""Barycentric rational functions: evaluation, derivatives, poles/zeros/residues.

A rational function is stored as support points ``s_j``, values ``f_j`` and
weights ``w_j`` and evaluated as

    r(z) = N(z) / D(z),   N = sum_j w_j f_j / (z - s_j),   D = sum_j w_j / (z - s_j).

Every support point with nonzero weight is a removable singularity of the
quotient and r interpolates f there exactly; evaluation special-cases those
points.  Poles and zeros come from generalized eigenvalue problems on the
arrowhead pencil built from the weights and support points, residues from
N(p)/D'(p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = ["BarycentricRational", "PoleSet"]

# Relative proximity below which an evaluation point is snapped to a support
# point.  Matches exact double-precision hits without masking near-pole
# behavior.
_SNAP_RTOL = 1e-15


@dataclass(frozen=True)
class PoleSet:
    """Poles, residues and zeros of a rational function."""

    poles: np.ndarray
    residues: np.ndarray
    zeros: np.ndarray

    def filter_spurious(self, scale: float, tol_residue: float = 1e-13) -> "PoleSet":
        """Drop Froissart doublets: poles with |residue| < tol_residue * scale."""
        keep = np.abs(self.residues) >= tol_residue * scale
        return PoleSet(self.poles[keep], self.residues[keep], self.zeros)


class BarycentricRational:
    """Immutable rational function in barycentric form."""

    def __init__(self, support, values, weights):
        support = np.atleast_1d(np.asarray(support, dtype=complex))
        values = np.atleast_1d(np.asarray(values, dtype=complex))
        weights = np.atleast_1d(np.asarray(weights, dtype=complex))
        if not (len(support) == len(values) == len(weights)):
            raise ValueError("support, values and weights must have equal length")
        if len(support) == 0:
            raise ValueError("empty barycentric data")
        if not np.any(weights != 0):
            raise ValueError("all weights are zero")
        scale = np.abs(support).max()
        if len(support) > 1:
            d = np.abs(support[:, None] - support[None, :])
            d[np.diag_indices_from(d)] = np.inf
            if d.min() <= _SNAP_RTOL * max(scale, 1e-300):
                raise ValueError("support points must be pairwise distinct")
        self.support = support
        self.values = values
        self.weights = weights
        self._scale = max(scale, 1e-300)

    @property
    def degree(self) -> int:
        return len(self.support) - 1

    def __call__(self, z):
        zs = np.isscalar(z) or np.asarray(z).ndim == 0
        zv = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        if len(self.support) == 1:  # degree 0: exactly the constant f_0
            r = np.full(zv.shape, self.values[0])
            return complex(r[0]) if zs else r.reshape(np.shape(z))
        D = zv[:, None] - self.support[None, :]
        hit_i, hit_j = np.nonzero(np.abs(D) <= _SNAP_RTOL * self._scale)
        with np.errstate(divide="ignore", invalid="ignore"):
            if len(hit_i):
                D[hit_i, hit_j] = 1.0
            C = 1.0 / D
            r = (C @ (self.weights * self.values)) / (C @ self.weights)
            if len(hit_i):
                r[hit_i] = self.values[hit_j]
        if zs:
            return complex(r[0])
        r = r.reshape(np.shape(z))
        return r

    def deriv(self, z, order: int = 1):
        """First or second derivative of r at z.

        Uses the Schneider-Werner divided-difference formulas at support
        points and analytic differentiation of N/D elsewhere.
        """
        if order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        zs = np.isscalar(z) or np.asarray(z).ndim == 0
        zv = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        if len(self.support) == 1:  # constant function
            out = np.zeros(zv.shape, dtype=complex)
            return complex(out[0]) if zs else out.reshape(np.shape(z))
        out = np.empty(zv.shape, dtype=complex)
        D = zv[:, None] - self.support[None, :]
        near = np.abs(D) <= _SNAP_RTOL * self._scale
        on_node = near.any(axis=1)
        w, f = self.weights, self.values
        # off-node points, vectorized
        if np.any(~on_node):
            Dn = D[~on_node]
            with np.errstate(divide="ignore", invalid="ignore"):
                C = 1.0 / Dn
                C2 = C * C
                N = C @ (w * f)
                Dd = C @ w
                N1 = -(C2 @ (w * f))
                D1 = -(C2 @ w)
                r = N / Dd
                r1 = (N1 - r * D1) / Dd
                if order == 1:
                    out[~on_node] = r1
                else:
                    C3 = C2 * C
                    N2 = 2.0 * (C3 @ (w * f))
                    D2 = 2.0 * (C3 @ w)
                    out[~on_node] = (N2 - 2.0 * r1 * D1 - r * D2) / Dd
        # support points via Schneider-Werner
        for i in np.nonzero(on_node)[0]:
            j = int(np.argmin(np.abs(D[i])))
            if w[j] == 0:
                raise ZeroDivisionError("derivative at a support point with zero weight")
            dx = self.support - self.support[j]
            dx[j] = np.inf
            dd1 = (f - f[j]) / dx
            r1 = -np.sum(w * dd1) / w[j]
            if order == 1:
                out[i] = r1
            else:
                dd2 = (dd1 - r1) / dx
                out[i] = -2.0 * np.sum(w * dd2) / w[j]
        if zs:
            return complex(out[0])
        return out.reshape(np.shape(z))

    def _pencil_roots(self, top_row: np.ndarray) -> np.ndarray:
        m = len(self.support)
        B = np.eye(m + 1, dtype=complex)
        B[0, 0] = 0.0
        E = np.zeros((m + 1, m + 1), dtype=complex)
        E[0, 1:] = top_row
        E[1:, 0] = 1.0
        E[1:, 1:] = np.diag(self.support)
        ev = scipy.linalg.eigvals(E, B)
        ev = ev[np.isfinite(ev)]
        # eigenvalues escaping to ~1/eps of the data scale are the pencil's
        # spurious infinite roots, not genuine poles/zeros
        return ev[np.abs(ev) < 1e13 * max(1.0, self._scale)]

    def poles(self) -> np.ndarray:
        """Finite generalized eigenvalues of the weight/support pencil."""
        if np.all(self.weights == 0):
            raise ValueError("degenerate pencil: all weights are zero")
        if self.degree < 1:
            return np.empty(0, dtype=complex)
        return self._pencil_roots(self.weights)

    def zeros(self) -> np.ndarray:
        """Zeros, from the analogous pencil with w_j f_j on the top row."""
        if self.degree < 1:
            return np.empty(0, dtype=complex)
        return self._pencil_roots(self.weights * self.values)

    def residues(self, poles: np.ndarray) -> np.ndarray:
        """Residues at simple poles via N(p)/D'(p)."""
        if len(poles) == 0:
            return np.empty(0, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            C = 1.0 / (poles[:, None] - self.support[None, :])
            N = C @ (self.weights * self.values)
            D1 = -(C * C) @ self.weights
            return N / D1

    def pole_set(self) -> PoleSet:
        """Poles, residues and zeros in one record."""
        p = self.poles()
        return PoleSet(p, self.residues(p), self.zeros())

    def to_dict(self) -> dict:
        """JSON record with complex numbers as [re, im] pairs."""
        pair = lambda a: [[float(v.real), float(v.imag)] for v in a]
        return {
            "support": pair(self.support),
            "values": pair(self.values),
            "weights": pair(self.weights),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "BarycentricRational":
        unpair = lambda key: np.array([complex(re, im) for re, im in rec[key]])
        return cls(unpair("support"), unpair("values"), unpair("weights"))
