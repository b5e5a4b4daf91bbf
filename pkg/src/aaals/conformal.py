"""Boundary map fitting, Schwarz-function structure and the shielding curve.

``fit_map`` approximates the map M from the unit circle onto the physical
curve (value at exp(i*pi*t) is Gamma(t)) and locates the zeros of M' inside
the circle, which mark where the map stops being conformal.  ``schwarz`` fits
conj(z) along the curve; the interior poles of that fit trace the branch-cut
structure limiting analytic continuation into the interior.

``build_shield`` turns the detected singular points in the zeta-plane into a
periodic radius function rho(theta) strictly inside the unit circle: the
per-angle radial envelope of the points, interpolated with a shape-preserving
(pchip) periodic cubic so no overshoot beyond the knot range can occur.
Sources are later placed between this curve and the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .aaa import aaa_fit
from .barycentric import BarycentricRational
from .continuum import ContinuumApprox, aaazp
from .curves import ParametricCurve, unit_circle

__all__ = [
    "ConformalMap",
    "SchwarzStructure",
    "ShieldingCurve",
    "fit_map",
    "schwarz",
    "build_shield",
]

_INTERIOR_RADIUS = 1.0 - 1e-10  # |zeta| below this counts as inside the circle
_RHO_MIN = 1e-3
_RHO_CAP = 1.0 - 1e-3
_DEFAULT_RHO = 0.5


@dataclass
class ConformalMap:
    """Rational approximant to the boundary map M and its derivative data."""

    m_approx: BarycentricRational
    m_prime: callable
    m_second: callable
    interior_zeros_dm: np.ndarray
    circle_samples: np.ndarray
    support_params: np.ndarray

    def __call__(self, zeta):
        return self.m_approx(zeta)

    def to_dict(self) -> dict:
        pair = lambda a: [[float(v.real), float(v.imag)] for v in np.atleast_1d(a)]
        return {
            "map": self.m_approx.to_dict(),
            "interior_zeros_dm": pair(self.interior_zeros_dm),
            "circle_samples": list(map(float, self.circle_samples)),
            "support_params": list(map(float, self.support_params)),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "ConformalMap":
        approx = BarycentricRational.from_dict(rec["map"])
        zeros = np.array([complex(re, im) for re, im in rec["interior_zeros_dm"]])
        return cls(
            m_approx=approx,
            m_prime=lambda z: approx.deriv(z, 1),
            m_second=lambda z: approx.deriv(z, 2),
            interior_zeros_dm=zeros,
            circle_samples=np.asarray(rec["circle_samples"], dtype=float),
            support_params=np.asarray(rec["support_params"], dtype=float),
        )


@dataclass
class SchwarzStructure:
    """Rational fit of conj(z) on the curve and its interior pole stream."""

    s_approx: BarycentricRational
    interior_poles: np.ndarray
    max_error: float

    def __call__(self, z):
        return self.s_approx(z)

    def to_dict(self) -> dict:
        pair = lambda a: [[float(v.real), float(v.imag)] for v in np.atleast_1d(a)]
        return {
            "schwarz": self.s_approx.to_dict(),
            "interior_poles": pair(self.interior_poles),
            "max_error": float(self.max_error),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "SchwarzStructure":
        return cls(
            s_approx=BarycentricRational.from_dict(rec["schwarz"]),
            interior_poles=np.array(
                [complex(re, im) for re, im in rec["interior_poles"]]
            ),
            max_error=float(rec["max_error"]),
        )


def fit_map(curve: ParametricCurve, tol: float = 1e-8) -> ConformalMap:
    """Fit the unit-circle-to-curve map and find interior zeros of M'.

    The zeros come from a loose-tolerance (1e-3) discrete AAA fit of M'
    sampled on the circle; only zeros strictly inside the circle are kept.
    """
    circle = unit_circle()
    fit = aaazp(
        lambda zeta: curve(np.angle(zeta) / np.pi),
        circle,
        tol=tol,
        deriv_order=2,
        meromorphic=True,
    )
    m = fit.approx
    scale = max(float(np.abs(m.values).max()), 1e-300)
    samples_z = circle(fit.samples)
    dm = m.deriv(samples_z, 1)
    if np.abs(dm).min() < 1e-10 * scale:
        raise ValueError(
            "map derivative vanishes on the circle: parametrization is "
            "degenerate or the curve is not analytic"
        )
    # loose discrete fit of M' on a denser circle point set to locate zeros
    tz = np.unique(np.concatenate([fit.samples, np.linspace(-1, 1, 257)[:-1]]))
    Z = circle(tz)
    dres = aaa_fit(m.deriv(Z, 1), Z, tol=1e-3, mmax=150)
    zeros = dres.poles.zeros
    zeros = zeros[np.abs(zeros) < _INTERIOR_RADIUS] if len(zeros) else zeros
    return ConformalMap(
        m_approx=m,
        m_prime=fit.derivs[1],
        m_second=fit.derivs[2],
        interior_zeros_dm=np.asarray(zeros, dtype=complex),
        circle_samples=fit.samples,
        support_params=fit.support_params,
    )


def schwarz(curve: ParametricCurve, tol: float = 1e-13) -> SchwarzStructure:
    """Fit conj(z) along the curve; interior poles delineate branch cuts."""
    fit = aaazp(np.conj, curve, tol=tol, meromorphic=True)
    poles = fit.poles.filter_spurious(fit.norm_f)
    inner = poles.poles[curve.contains(poles.poles)] if len(poles.poles) else poles.poles
    return SchwarzStructure(
        s_approx=fit.approx,
        interior_poles=np.asarray(inner, dtype=complex),
        max_error=fit.max_error,
    )


class ShieldingCurve:
    """Periodic radius function rho(theta) in (0, 1) built from knots."""

    def __init__(self, knot_angles, knot_radii):
        order = np.argsort(knot_angles)
        self.knot_angles = np.asarray(knot_angles, dtype=float)[order]
        self.knot_radii = np.clip(
            np.asarray(knot_radii, dtype=float)[order], _RHO_MIN, _RHO_CAP
        )
        th = self.knot_angles
        rh = self.knot_radii
        ext_t = np.concatenate([th - 2 * np.pi, th, th + 2 * np.pi])
        ext_r = np.concatenate([rh, rh, rh])
        self._interp = PchipInterpolator(ext_t, ext_r)

    def radius(self, theta):
        """rho(theta); total and periodic in theta."""
        th = np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
        out = self._interp(th)
        if np.isscalar(theta):
            return float(out)
        return out

    __call__ = radius

    @property
    def knots(self):
        return self.knot_angles.copy(), self.knot_radii.copy()

    def to_dict(self) -> dict:
        return {
            "knot_angles": list(map(float, self.knot_angles)),
            "knot_radii": list(map(float, self.knot_radii)),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "ShieldingCurve":
        return cls(rec["knot_angles"], rec["knot_radii"])


def build_shield(points, shrink: float = 0.3, default_rho: float = _DEFAULT_RHO) -> ShieldingCurve:
    """Shielding curve enclosing the given zeta-plane points.

    The angular axis is split into bins (width controlled by ``shrink``),
    each occupied bin contributes its outermost point as a knot, and a
    periodic pchip interpolant runs through the knots.  A containment pass
    inserts extra knots for any point the interpolant would leave outside
    (up to the hard radius cap just inside the unit circle).
    """
    if not 0.0 <= shrink <= 1.0:
        raise ValueError("shrink must lie in [0, 1]")
    pts = np.atleast_1d(np.asarray(points, dtype=complex)).ravel()
    if len(pts) == 0:
        angles = np.linspace(-np.pi, np.pi, 5)[:-1]
        return ShieldingCurve(angles, np.full(4, default_rho))
    if np.any(np.abs(pts) >= 1.0):
        raise ValueError("shield input points must lie strictly inside the unit circle")

    width = (2 * np.pi / 32.0) * (1.0 - shrink)
    width = min(max(width, 2 * np.pi / 128.0), 2 * np.pi / 16.0)
    nbins = max(4, int(round(2 * np.pi / width)))
    ang = np.angle(pts)
    rad = np.abs(pts)
    bins = np.floor((ang + np.pi) / (2 * np.pi / nbins)).astype(int) % nbins
    knot_t: list[float] = []
    knot_r: list[float] = []
    for b in np.unique(bins):
        sel = bins == b
        j = np.argmax(rad[sel])
        knot_t.append(float(ang[sel][j]))
        knot_r.append(float(rad[sel][j]))
    knot_t = np.asarray(knot_t)
    knot_r = np.asarray(knot_r)
    # merge neighboring knots that ended up angularly coincident
    if len(knot_t) > 1:
        order = np.argsort(knot_t)
        knot_t, knot_r = knot_t[order], knot_r[order]
        keep = np.ones(len(knot_t), dtype=bool)
        for i in range(1, len(knot_t)):
            if knot_t[i] - knot_t[i - 1] < 1e-9:
                keep[i - 1 if knot_r[i] >= knot_r[i - 1] else i] = False
        knot_t, knot_r = knot_t[keep], knot_r[keep]
    if len(knot_t) == 1:
        # single detected direction: decay toward the floor elsewhere
        knot_t = np.array([knot_t[0] - 2 * np.pi / 3, knot_t[0], knot_t[0] + 2 * np.pi / 3])
        knot_t = np.mod(knot_t + np.pi, 2 * np.pi) - np.pi
        knot_r = np.array([_RHO_MIN, knot_r[0], _RHO_MIN])

    shield = ShieldingCurve(knot_t, knot_r)
    # containment: insert knots until every input point is radially enclosed
    for _ in range(len(pts) + 1):
        viol = rad > shield.radius(ang) + 1e-12
        viol &= rad <= _RHO_CAP + 1e-12
        if not viol.any():
            break
        t, r = shield.knots
        for p_ang, p_rad in zip(ang[viol], rad[viol]):
            j = int(np.argmin(np.abs(t - p_ang)))
            if abs(t[j] - p_ang) < 1e-9:
                r[j] = max(r[j], p_rad)
            else:
                t = np.append(t, p_ang)
                r = np.append(r, p_rad)
        shield = ShieldingCurve(t, r)
    return shield
