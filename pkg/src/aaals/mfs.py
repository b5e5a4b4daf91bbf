"""Multipole method-of-fundamental-solutions discretization.

The scattered field is expanded as

    u_s(z) = sum_j sum_{r=-R..R} c_{j,r} H_{|r|}^(1)(k |z-p_j|) ((z-p_j)/|z-p_j|)^r

with sources p_j inside the obstacle.  Columns of the collocation matrix are
scaled so each basis function attains max magnitude 1 on the boundary
samples, which keeps the system solvable as sources approach the boundary;
the same scale factors are reapplied at evaluation.  The least-squares solve
is rank-revealing (SVD): the system is severely ill-conditioned by
construction and plain normal equations would destroy the attainable
accuracy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .conformal import ConformalMap, ShieldingCurve
from .curves import ParametricCurve
from .specfun import hankel1

__all__ = [
    "IncidentField",
    "MfsSolution",
    "SourcePlacementError",
    "place_sources",
    "assemble",
    "solve_ls",
    "eval_field",
    "boundary_residual",
]


class SourcePlacementError(RuntimeError):
    """A mapped source landed outside the obstacle and could not be fixed."""


@dataclass(frozen=True)
class IncidentField:
    """Plane wave or a set of point sources at wavenumber ``k``.

    Plane wave: exp(i k (x cos(angle) + y sin(angle))).
    Point sources: sum_m amp_m * H_0^(1)(k |z - q_m|), q_m exterior to the
    obstacle (checked by the pipeline, which knows the curve).
    """

    k: float
    kind: str = "plane"
    angle: float = 0.0
    locations: tuple = ()
    amplitudes: tuple = ()

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("wavenumber k must be positive")
        if self.kind not in ("plane", "points"):
            raise ValueError(f"unknown incident field kind {self.kind!r}")
        if self.kind == "points":
            if len(self.locations) == 0:
                raise ValueError("point-source field needs at least one location")
            amps = self.amplitudes or tuple(1.0 for _ in self.locations)
            object.__setattr__(self, "amplitudes", tuple(complex(a) for a in amps))
            object.__setattr__(self, "locations", tuple(complex(q) for q in self.locations))
            if len(self.amplitudes) != len(self.locations):
                raise ValueError("amplitudes and locations must have equal length")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "plane":
            d = np.exp(-1j * self.angle)
            return np.exp(1j * self.k * np.real(z * d))
        out = np.zeros(z.shape, dtype=complex)
        for q, a in zip(self.locations, self.amplitudes):
            out = out + a * hankel1(0, self.k * np.abs(z - q))
        return out

    def to_dict(self) -> dict:
        rec = {"k": self.k, "kind": self.kind}
        if self.kind == "plane":
            rec["angle"] = self.angle
        else:
            rec["locations"] = [[q.real, q.imag] for q in self.locations]
            rec["amplitudes"] = [[a.real, a.imag] for a in self.amplitudes]
        return rec

    @classmethod
    def from_dict(cls, rec: dict) -> "IncidentField":
        if rec["kind"] == "plane":
            return cls(k=rec["k"], kind="plane", angle=rec.get("angle", 0.0))
        return cls(
            k=rec["k"],
            kind="points",
            locations=tuple(complex(re, im) for re, im in rec["locations"]),
            amplitudes=tuple(complex(re, im) for re, im in rec["amplitudes"]),
        )


@dataclass
class MfsSolution:
    """Sources, multipole coefficients and the column scalings of a solve."""

    sources: np.ndarray
    coeffs: np.ndarray  # in scaled-column space, r-major blocks of length J
    order: int
    k: float
    scale_factors: np.ndarray
    incident: IncidentField | None = None
    sample_params: np.ndarray | None = None

    def to_dict(self) -> dict:
        pair = lambda a: [[float(v.real), float(v.imag)] for v in np.atleast_1d(a)]
        return {
            "sources": pair(self.sources),
            "coeffs": pair(self.coeffs),
            "order": int(self.order),
            "k": float(self.k),
            "scale_factors": list(map(float, self.scale_factors)),
        }

    @classmethod
    def from_dict(cls, rec: dict, incident: IncidentField | None = None) -> "MfsSolution":
        unpair = lambda key: np.array([complex(re, im) for re, im in rec[key]])
        return cls(
            sources=unpair("sources"),
            coeffs=unpair("coeffs"),
            order=int(rec["order"]),
            k=float(rec["k"]),
            scale_factors=np.asarray(rec["scale_factors"], dtype=float),
            incident=incident,
        )


def place_sources(
    cmap: ConformalMap,
    shield: ShieldingCurve,
    support_angles,
    curve: ParametricCurve | None = None,
    collar_factor: float = 0.25,
    max_lift_rounds: int = 60,
):
    """Map support angles to interior source points p_j = M(sqrt(rho_j) e^{i theta_j}).

    The preimage radius sqrt(rho) puts each source at the geometric mean
    between the shielding curve and the unit circle.  When ``curve`` is given,
    every mapped source is verified to lie inside it and at a distance from
    the boundary consistent with a conformal collar, dist >= collar_factor *
    (1-|pi_j|) * |M'(e^{i theta_j})|; offenders are fold artifacts of the map
    approximant and are moved toward the circle (where the map is always
    conformal) until they comply.  Raises SourcePlacementError if lifting
    cannot fix a source, which signals that the shielding curve hugs the
    circle too closely.

    Returns ``(sources, rho)`` with the possibly lifted per-source radii.
    """
    theta = np.atleast_1d(np.asarray(support_angles, dtype=float)).ravel()
    rho = np.asarray(shield.radius(theta), dtype=float).copy()
    if curve is None:
        sources = cmap(np.sqrt(rho) * np.exp(1j * theta))
        return np.atleast_1d(sources), rho
    dm_boundary = np.abs(cmap.m_prime(np.exp(1j * theta)))
    sources = None
    for _ in range(max_lift_rounds):
        pi_j = np.sqrt(rho) * np.exp(1j * theta)
        sources = np.atleast_1d(cmap(pi_j))
        inside = curve.contains(sources)
        dist = curve.distance_to(sources)
        need = collar_factor * (1.0 - np.abs(pi_j)) * dm_boundary
        bad = (~inside) | (dist < need)
        if not bad.any():
            return sources, rho
        rho[bad] = 1.0 - (1.0 - rho[bad]) / 2.0
    raise SourcePlacementError(
        f"sources at angle indices {bad.nonzero()[0][:8].tolist()} could not be "
        "placed inside the curve: the shielding curve is too close to the "
        "unit circle"
    )


def assemble(sources, samples, k: float, order: int):
    """Collocation matrix and per-column scale factors.

    Columns are grouped in r-major blocks: all J sources at harmonic order
    r = -R, then r = -R+1, etc.  Each column is divided by its maximum
    magnitude over the samples.
    """
    p = np.atleast_1d(np.asarray(sources, dtype=complex)).ravel()
    z = np.atleast_1d(np.asarray(samples, dtype=complex)).ravel()
    J, N = len(p), len(z)
    if N < J * (2 * order + 1):
        raise ValueError(
            f"underdetermined system: {N} samples for {J * (2 * order + 1)} unknowns"
        )
    dz = z[:, None] - p[None, :]
    d = np.abs(dz)
    if d.min() == 0.0:
        n_bad, j_bad = np.unravel_index(int(np.argmin(d)), d.shape)
        raise ValueError(f"source {j_bad} coincides with boundary sample {n_bad}")
    u = dz / d
    hank = {r: hankel1(r, k * d) for r in range(order + 1)}
    blocks = []
    scales = []
    for r in range(-order, order + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            block = hank[abs(r)] * u**r
        if not np.all(np.isfinite(block)):
            n_bad, j_bad = np.unravel_index(
                int(np.argmin(np.isfinite(block))), block.shape
            )
            raise ValueError(
                f"non-finite entry at sample {n_bad}, source {j_bad}, order {r}"
            )
        sc = np.abs(block).max(axis=0)
        blocks.append(block / sc)
        scales.append(sc)
    return np.hstack(blocks), np.concatenate(scales)


def solve_ls(matrix: np.ndarray, rhs, rcond: float = 1e-14):
    """Rank-revealing dense least-squares solve (SVD, lapack gelsd).

    Effective rank below half the column count raises a conditioning warning,
    not an error.
    """
    rhs = np.asarray(rhs, dtype=complex).ravel()
    if len(rhs) != matrix.shape[0]:
        raise ValueError("rhs length does not match the matrix")
    coeffs, _, rank, _ = scipy.linalg.lstsq(
        matrix, rhs, cond=rcond, lapack_driver="gelsd"
    )
    if rank < matrix.shape[1] // 2:
        warnings.warn(
            f"effective rank {rank} below half of {matrix.shape[1]} columns; "
            "solution may be limited by conditioning"
        )
    return coeffs


def eval_field(sol: MfsSolution, points, total: bool = False, incident=None, chunk: int = 4096):
    """Scattered field of the expansion at the given points.

    With ``total=True`` returns u_s - u_inc, which vanishes on the boundary
    for a converged solve (the expansion is fitted to +u_inc).
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex)).ravel()
    J = len(sol.sources)
    R = sol.order
    out = np.zeros(len(pts), dtype=complex)
    eff = (sol.coeffs / sol.scale_factors).reshape(2 * R + 1, J)
    for i0 in range(0, len(pts), chunk):
        z = pts[i0 : i0 + chunk]
        dz = z[:, None] - sol.sources[None, :]
        d = np.abs(dz)
        u = dz / d
        acc = np.zeros(len(z), dtype=complex)
        hank = {r: hankel1(r, sol.k * d) for r in range(R + 1)}
        for idx, r in enumerate(range(-R, R + 1)):
            acc += (hank[abs(r)] * u**r) @ eff[idx]
        out[i0 : i0 + chunk] = acc
    if total:
        inc = incident if incident is not None else sol.incident
        if inc is None:
            raise ValueError("total field requested but no incident field available")
        out = out - inc(pts)
    if np.isscalar(points) or np.asarray(points).ndim == 0:
        return complex(out[0])
    return out.reshape(np.shape(points))


def boundary_residual(
    sol: MfsSolution,
    curve: ParametricCurve,
    incident=None,
    refine: int = 4,
    sample_params=None,
) -> float:
    """Max |u_s - u_inc| on a grid ``refine`` times finer than the samples."""
    inc = incident if incident is not None else sol.incident
    if inc is None:
        raise ValueError("boundary residual needs the incident field")
    if sample_params is None and sol.sample_params is not None:
        sample_params = sol.sample_params
    if sample_params is None:
        n = max(64, 8 * len(sol.sources))
        sample_params = np.linspace(-1.0, 1.0, n, endpoint=False)
    t = np.sort(np.asarray(sample_params, dtype=float).ravel())
    bounds = np.append(t, t[0] + 2.0)
    steps = np.arange(refine)[None, :] / refine
    fine = (t[:, None] + np.diff(bounds)[:, None] * steps).ravel()
    fine = np.where(fine >= 1.0, fine - 2.0, fine)
    z = curve(np.unique(fine))
    return float(np.abs(eval_field(sol, z) - inc(z)).max())
