"""Adaptive continuum AAA on a parametric curve.

Unlike discrete AAA, which needs a prescribed sample set, this routine
generates its own samples while it runs: one new support point is adopted per
outer iteration (largest working residual), and after every adoption the
working grid is topped up so each gap between adjacent support points keeps at
least three interior samples, bisecting the largest parameter subintervals.
Samples therefore cluster automatically wherever support points cluster, i.e.
where the data or the geometry vary fastest.  Function values are cached by
parameter so no point is ever evaluated twice.

Convergence is declared only after the residual passes on a check grid seven
times finer than the working grid; failing check points are adopted into the
working grid (up to 64 per sweep) and the iteration continues.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .barycentric import BarycentricRational, PoleSet
from .curves import ParametricCurve

__all__ = ["ContinuumApprox", "ContinuumError", "aaazp"]

_INITIAL_GRID = 16
_INTERIOR_PER_GAP = 3
_CHECK_FACTOR = 7
_MAX_ADOPTIONS = 64
_PARAM_EPS = 4e-15


class ContinuumError(RuntimeError):
    """Raised when the working grid cannot be assembled at all."""


@dataclass
class ContinuumApprox:
    """Result of a continuum AAA fit along a curve."""

    approx: BarycentricRational
    derivs: list
    poles: PoleSet
    support_params: np.ndarray
    samples: np.ndarray
    max_error: float
    norm_f: float
    meromorphic_flag: bool
    converged: bool
    iterations: int

    @property
    def degree(self) -> int:
        return self.approx.degree

    def interior_poles(self, curve: ParametricCurve) -> np.ndarray:
        """Poles inside the curve (winding-number test)."""
        if len(self.poles.poles) == 0:
            return np.empty(0, dtype=complex)
        return self.poles.poles[curve.contains(self.poles.poles)]


class _Workspace:
    """Sorted parameter grid with cached function values and a support mask."""

    def __init__(self, f, curve):
        self.f = f
        self.curve = curve
        self.t = np.empty(0, dtype=float)
        self.v = np.empty(0, dtype=complex)
        self.is_support = np.empty(0, dtype=bool)

    def _fresh_mask(self, params: np.ndarray) -> np.ndarray:
        if len(self.t) == 0:
            return np.ones(len(params), dtype=bool)
        pos = np.searchsorted(self.t, params)
        exists = (pos < len(self.t)) & (self.t[np.minimum(pos, len(self.t) - 1)] == params)
        return ~exists

    def insert(self, params, values=None) -> int:
        """Add parameters (wrapped into [-1, 1)); returns the number inserted.

        ``values`` supplies already-computed function values aligned with
        ``params`` so cached evaluations are never repeated.
        """
        params = np.asarray(params, dtype=float).ravel()
        params = np.where(params >= 1.0, params - 2.0, params)
        params = np.where(params < -1.0, params + 2.0, params)
        if values is None:
            params = np.unique(params)
            fresh = params[self._fresh_mask(params)]
            if len(fresh) == 0:
                return 0
            vals = np.atleast_1d(np.asarray(self.f(self.curve(fresh)), dtype=complex))
        else:
            values = np.asarray(values, dtype=complex).ravel()
            order = np.argsort(params)
            params, values = params[order], values[order]
            keep = np.ones(len(params), dtype=bool)
            keep[1:] = np.diff(params) > 0
            params, values = params[keep], values[keep]
            mask = self._fresh_mask(params)
            fresh, vals = params[mask], values[mask]
            if len(fresh) == 0:
                return 0
        pos = np.searchsorted(self.t, fresh)
        self.t = np.insert(self.t, pos, fresh)
        self.v = np.insert(self.v, pos, vals)
        self.is_support = np.insert(self.is_support, pos, False)
        return len(fresh)

    def adopt(self, param: float) -> None:
        i = int(np.searchsorted(self.t, param))
        if i >= len(self.t) or self.t[i] != param:
            raise KeyError(f"parameter {param} not in working grid")
        self.is_support[i] = True

    def norm_f(self) -> float:
        return float(np.abs(self.v).max()) if len(self.v) else 0.0


def _topup(ws: _Workspace, per_gap: int = _INTERIOR_PER_GAP) -> int:
    """Ensure each support gap holds >= per_gap interior samples.

    Gaps narrower than machine resolution are left alone (saturated); the
    greedy loop then simply stops placing support points there.
    """
    sup = ws.t[ws.is_support]
    if len(sup) == 0:
        return 0
    new_params: list[float] = []
    bounds = np.append(sup, sup[0] + 2.0)
    for a, b in zip(bounds[:-1], bounds[1:]):
        lo, hi = np.searchsorted(ws.t, [a, b])
        inside = ws.t[lo:hi]
        inside = inside[inside > a]
        if b > 1.0:  # wrapped gap
            extra = ws.t[ws.t < b - 2.0] + 2.0
            inside = np.concatenate([inside, extra])
        count = len(inside)
        if count >= per_gap:
            continue
        pts = np.sort(np.concatenate([[a], inside, [b]]))
        for _ in range(per_gap - count):
            widths = np.diff(pts)
            j = int(np.argmax(widths))
            if widths[j] < _PARAM_EPS:
                break
            mid = 0.5 * (pts[j] + pts[j + 1])
            pts = np.insert(pts, j + 1, mid)
            new_params.append(mid)
    if not new_params:
        return 0
    return ws.insert(new_params)


def _solve_weights(ws: _Workspace):
    """Loewner least-squares weights and the working residual vector."""
    sup = ws.is_support
    if not (~sup).any():
        raise ContinuumError("no free samples left to solve the weight problem")
    zj = ws.curve(ws.t[sup])
    fj = ws.v[sup]
    Z = ws.curve(ws.t[~sup])
    FZ = ws.v[~sup]
    with np.errstate(divide="ignore", invalid="ignore"):
        C = 1.0 / (Z[:, None] - zj[None, :])
        A = (FZ[:, None] - fj[None, :]) * C
        _, _, Vh = np.linalg.svd(A, full_matrices=False)
        w = Vh[-1].conj()
        R = fj[0] * np.ones(len(Z)) if len(zj) == 1 else (C @ (w * fj)) / (C @ w)
    res = np.abs(FZ - R)
    res[~np.isfinite(res)] = np.inf
    return zj, fj, w, res


def _check_params(ws: _Workspace) -> np.ndarray:
    """Parameters of a grid _CHECK_FACTOR times finer than the working grid."""
    t = ws.t
    bounds = np.append(t, t[0] + 2.0)
    steps = np.arange(1, _CHECK_FACTOR)[None, :] / _CHECK_FACTOR
    fine = (t[:, None] + np.diff(bounds)[:, None] * steps).ravel()
    fine = np.where(fine >= 1.0, fine - 2.0, fine)
    return np.unique(fine)


def aaazp(
    f,
    curve: ParametricCurve,
    mmax: int = 300,
    lawson: bool = False,
    tol: float = 1e-13,
    meromorphic: bool = True,
    deriv_order: int = 0,
    initial_support=None,
) -> ContinuumApprox:
    """Continuum AAA fit of ``f`` along ``curve``.

    Parameters
    ----------
    f : callable
        Function of the curve point z (complex); may return complex values.
    curve : ParametricCurve
        Closed parametric curve supplying the evaluation points.
    mmax : int
        Maximum approximant degree.
    lawson : bool
        Accepted for interface compatibility; minimax refinement is not
        implemented and the flag is ignored with a warning.
    tol : float
        Relative tolerance against max|f| over the generated samples.
    meromorphic : bool
        Recorded on the result; when set, interior poles are meaningful
        singularity indicators rather than fitting artifacts.
    deriv_order : int
        Return derivative evaluators up to this order (0..2).
    initial_support : array_like, optional
        Parameter values adopted as support points before the greedy loop;
        used to recycle support points between pipeline stages.

    Returns the best approximant found; ``converged`` is False when the
    degree cap was reached first.
    """
    if not 0 <= deriv_order <= 2:
        raise ValueError("deriv_order must be 0, 1 or 2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if lawson:
        warnings.warn("lawson refinement is not implemented; flag ignored")

    ws = _Workspace(f, curve)
    ws.insert(np.linspace(-1.0, 1.0, _INITIAL_GRID, endpoint=False))
    if initial_support is not None:
        init = np.asarray(initial_support, dtype=float).ravel()
        init = np.unique(np.where(init >= 1.0, init - 2.0, init))
        ws.insert(init)
        for p in init:
            ws.adopt(p)
        _topup(ws)

    best = None
    converged = False
    iters = 0
    while True:
        iters += 1
        if not ws.is_support.any():
            j = int(np.argmax(np.abs(ws.v - ws.v.mean())))
            ws.adopt(ws.t[j])
            _topup(ws)

        zj, fj, w, res = _solve_weights(ws)
        norm_f = max(ws.norm_f(), 1e-300)
        err = float(res.max()) if len(res) else 0.0
        if best is None or err < best[0]:
            best = (err, ws.t[ws.is_support].copy(), zj, fj, w)

        if err <= tol * norm_f:
            r = BarycentricRational(zj, fj, w)
            chk = _check_params(ws)
            zc = ws.curve(chk)
            fc = np.atleast_1d(np.asarray(ws.f(zc), dtype=complex))
            cres = np.abs(fc - r(zc))
            norm_f = max(norm_f, float(np.abs(fc).max()))
            cerr = float(cres.max())
            if cerr <= tol * norm_f:
                best = (cerr, ws.t[ws.is_support].copy(), zj, fj, w)
                converged = True
                break
            bad = np.argsort(cres)[::-1]
            bad = bad[cres[bad] > tol * norm_f][:_MAX_ADOPTIONS]
            ws.insert(chk[bad], fc[bad])
            continue

        if int(ws.is_support.sum()) - 1 >= mmax:
            break
        # adopt the worst working sample as the next support point
        rest_t = ws.t[~ws.is_support]
        order = np.argsort(res)[::-1]
        cand = None
        zscale = max(float(np.abs(zj).max()), 1e-300)
        for j in order[: min(8, len(order))]:
            if np.abs(zj - ws.curve(rest_t[j])).min() > 1e-15 * zscale:
                cand = rest_t[j]
                break
        if cand is None:
            # every high-residual sample coincides with a support point in z;
            # the grid is saturated (corner data) -- stop with best-so-far
            break
        ws.adopt(cand)
        _topup(ws)

    max_error, sup_t, zj, fj, w = best
    approx = BarycentricRational(zj, fj, w)
    if not converged:
        # report the error verified on the fine check grid, not the working one
        chk = _check_params(ws)
        zc = ws.curve(chk)
        fc = np.atleast_1d(np.asarray(ws.f(zc), dtype=complex))
        max_error = max(max_error, float(np.abs(fc - approx(zc)).max()))
    derivs = [approx] + [
        (lambda z, k=k: approx.deriv(z, k)) for k in range(1, deriv_order + 1)
    ]
    poles = approx.pole_set() if approx.degree >= 1 else PoleSet(
        *3 * (np.empty(0, complex),)
    )
    return ContinuumApprox(
        approx=approx,
        derivs=derivs,
        poles=poles,
        support_params=np.sort(sup_t),
        samples=ws.t.copy(),
        max_error=max_error,
        norm_f=ws.norm_f(),
        meromorphic_flag=bool(meromorphic),
        converged=converged,
        iterations=iters,
    )
