"""End-to-end solvers: exterior sound-soft scattering and Laplace problems.

``solve_scattering`` runs the full source-placement chain:

1. fit the unit-circle-to-curve map M and find the interior zeros of M';
2. fit Re(u_inc) pulled back to the unit circle and collect the interior
   poles of that fit (the zeta-plane images of the singularities limiting
   analytic continuation of the boundary data);
3. build the shielding curve around both point sets;
4. fit Re(u_inc) directly on the curve; its support-point parameters give the
   source angles and the collocation layout;
5. map the radially projected support angles to interior sources and solve
   the multipole least-squares system.

Support points are recycled between the three fits (map -> circle -> curve),
which cuts the fitting cost dramatically: each warm-started stage only
appends the few support points it is missing.

``solve_laplace`` reuses stages 1-4 for harmonic boundary-value problems with
a rational basis: either poles derived from support points via the shield
(support mode) or the AAA poles of the boundary fit used with both first- and
second-order terms (double-pole mode).
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .conformal import ConformalMap, ShieldingCurve, build_shield, fit_map
from .continuum import aaazp
from .curves import ParametricCurve, unit_circle
from .mfs import (
    IncidentField,
    MfsSolution,
    assemble,
    boundary_residual,
    place_sources,
    solve_ls,
)
from .specfun import bessel_j, hankel1

__all__ = [
    "SolverOptions",
    "ScatteringProblem",
    "PipelineDiagnostics",
    "StageError",
    "solve_scattering",
    "exact_disk_scatter",
    "LaplaceOptions",
    "LaplaceProblem",
    "LaplaceSolution",
    "solve_laplace",
    "convergence_study",
    "fit_decay_rate",
    "DEGRADED_RESIDUAL",
]

DEGRADED_RESIDUAL = 1e-4


class StageError(RuntimeError):
    """Failure of a pipeline stage, annotated with the stage index and name."""

    def __init__(self, stage: int, name: str, cause: Exception):
        super().__init__(f"stage {stage} ({name}) failed: {cause}")
        self.stage = stage
        self.name = name
        self.cause = cause


@dataclass
class SolverOptions:
    """Tunable parameters of the scattering pipeline (defaults per contract)."""

    tol_circle: float = 1e-6
    tol_map: float = 1e-8
    multipole_order: int = 2
    shrink: float = 0.3
    samples_per_gap: int | None = None  # 9 for order 2, else 3
    refine_check: int = 4
    mmax: int = 300
    rcond: float = 1e-14
    collar_factor: float = 0.25

    def effective_samples_per_gap(self) -> int:
        if self.samples_per_gap is not None:
            return int(self.samples_per_gap)
        return 9 if self.multipole_order >= 2 else 3


@dataclass
class ScatteringProblem:
    curve: ParametricCurve
    incident: IncidentField
    options: SolverOptions = field(default_factory=SolverOptions)


@dataclass
class PipelineDiagnostics:
    """Everything a stage produced, for inspection, plotting and caching."""

    map_degree: int = 0
    v_circle_degree: int = 0
    v_gamma_degree: int = 0
    data_poles_zeta: np.ndarray = field(default_factory=lambda: np.empty(0, complex))
    map_deriv_zeros_zeta: np.ndarray = field(default_factory=lambda: np.empty(0, complex))
    shield_knots: tuple = ()
    support_angles: np.ndarray = field(default_factory=lambda: np.empty(0))
    source_count: int = 0
    sample_count: int = 0
    boundary_residual: float = float("nan")
    degraded: bool = False
    recycled_support_counts: dict = field(default_factory=dict)
    wall_times: dict = field(default_factory=dict)
    lifted_rho: np.ndarray = field(default_factory=lambda: np.empty(0))
    sources: np.ndarray = field(default_factory=lambda: np.empty(0, complex))
    curve_polyline: np.ndarray = field(default_factory=lambda: np.empty(0, complex))
    shield_polyline: tuple = ()
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        pair = lambda a: [[float(v.real), float(v.imag)] for v in np.atleast_1d(a)]
        knots = self.shield_knots
        return {
            "map_degree": self.map_degree,
            "v_circle_degree": self.v_circle_degree,
            "v_gamma_degree": self.v_gamma_degree,
            "data_poles_zeta": pair(self.data_poles_zeta),
            "map_deriv_zeros_zeta": pair(self.map_deriv_zeros_zeta),
            "shield_knots": {
                "angles": list(map(float, knots[0])) if knots else [],
                "radii": list(map(float, knots[1])) if knots else [],
            },
            "support_angles": list(map(float, self.support_angles)),
            "source_count": self.source_count,
            "sample_count": self.sample_count,
            "boundary_residual": self.boundary_residual,
            "degraded": self.degraded,
            "recycled_support_counts": self.recycled_support_counts,
            "wall_times": self.wall_times,
            "lifted_rho": list(map(float, self.lifted_rho)),
            "sources": pair(self.sources),
            "curve_polyline": pair(self.curve_polyline),
            "shield_polyline": {
                "angles": list(map(float, self.shield_polyline[0])) if self.shield_polyline else [],
                "radii": list(map(float, self.shield_polyline[1])) if self.shield_polyline else [],
            },
            "extras": self.extras,
        }


def _collocation_params(support_params: np.ndarray, per_gap: int) -> np.ndarray:
    """per_gap equispaced parameters in each support gap, supports included."""
    t = np.sort(support_params)
    bounds = np.append(t, t[0] + 2.0)
    steps = np.arange(per_gap)[None, :] / per_gap
    fine = (t[:, None] + np.diff(bounds)[:, None] * steps).ravel()
    fine = np.where(fine >= 1.0, fine - 2.0, fine)
    return np.unique(fine)


def _stage(diag: PipelineDiagnostics, idx: int, name: str):
    class _Timer:
        def __enter__(self):
            self.start = time.perf_counter()
            return self

        def __exit__(self, exc_type, exc, tb):
            diag.wall_times[name] = time.perf_counter() - self.start
            if exc is not None and not isinstance(exc, StageError):
                raise StageError(idx, name, exc) from exc
            return False

    return _Timer()


def solve_scattering(
    problem: ScatteringProblem, cmap: ConformalMap | None = None
) -> tuple[MfsSolution, PipelineDiagnostics]:
    """Solve an exterior sound-soft scattering problem.

    ``cmap`` may carry a precomputed map fit (e.g. from the stage cache); the
    map is wavenumber-independent, so sweeps over k reuse it.
    """
    curve = problem.curve
    inc = problem.incident
    opt = problem.options
    if inc.kind == "points":
        qin = curve.contains(np.asarray(inc.locations))
        if qin.any():
            raise ValueError("incident point sources must lie outside the obstacle")
    diag = PipelineDiagnostics()
    diag.curve_polyline = curve.points(256)

    with _stage(diag, 2, "map"):
        if cmap is None:
            cmap = fit_map(curve, tol=opt.tol_map)
        diag.map_degree = cmap.m_approx.degree
        diag.map_deriv_zeros_zeta = cmap.interior_zeros_dm

    with _stage(diag, 3, "v_circle"):
        circle = unit_circle()
        v_on_circle = lambda zeta: np.real(inc(curve(np.angle(zeta) / np.pi)))
        fit_c = aaazp(
            v_on_circle,
            circle,
            mmax=opt.mmax,
            tol=opt.tol_circle,
            meromorphic=True,
            initial_support=cmap.support_params,
        )
        diag.v_circle_degree = fit_c.degree
        diag.recycled_support_counts["v_circle"] = len(cmap.support_params)
        pol = fit_c.poles.filter_spurious(fit_c.norm_f)
        Q = pol.poles[np.abs(pol.poles) < 1.0 - 1e-10]
        diag.data_poles_zeta = Q

    with _stage(diag, 4, "shield"):
        shield = build_shield(
            np.concatenate([Q, cmap.interior_zeros_dm]), shrink=opt.shrink
        )
        diag.shield_knots = shield.knots
        th_dense = np.linspace(-np.pi, np.pi, 256)
        diag.shield_polyline = (th_dense, shield.radius(th_dense))

    with _stage(diag, 6, "v_gamma"):
        v_on_curve = lambda z: np.real(inc(z))
        fit_g = aaazp(
            v_on_curve,
            curve,
            mmax=opt.mmax,
            tol=opt.tol_circle,
            meromorphic=True,
            initial_support=fit_c.support_params,
        )
        diag.v_gamma_degree = fit_g.degree
        diag.recycled_support_counts["v_gamma"] = len(fit_c.support_params)
        support_t = np.sort(fit_g.support_params)
        diag.support_angles = np.pi * support_t

    with _stage(diag, 7, "place_sources"):
        sources, rho = place_sources(
            cmap,
            shield,
            diag.support_angles,
            curve=curve,
            collar_factor=opt.collar_factor,
        )
        diag.sources = sources
        diag.lifted_rho = rho
        diag.source_count = len(sources)

    with _stage(diag, 8, "solve"):
        sample_t = _collocation_params(support_t, opt.effective_samples_per_gap())
        zn = curve(sample_t)
        diag.sample_count = len(zn)
        matrix, scales = assemble(sources, zn, inc.k, opt.multipole_order)
        coeffs = solve_ls(matrix, inc(zn), rcond=opt.rcond)
        sol = MfsSolution(
            sources=sources,
            coeffs=coeffs,
            order=opt.multipole_order,
            k=inc.k,
            scale_factors=scales,
            incident=inc,
            sample_params=sample_t,
        )
        diag.boundary_residual = boundary_residual(
            sol, curve, inc, refine=opt.refine_check
        )
        diag.degraded = diag.boundary_residual > DEGRADED_RESIDUAL
        if diag.degraded:
            warnings.warn(
                f"degraded accuracy: boundary residual {diag.boundary_residual:.2e}"
            )
    return sol, diag


def exact_disk_scatter(k: float, angle: float, points) -> np.ndarray:
    """Exact sound-soft scattered field off the unit disk for a plane wave.

    Cylindrical-harmonic series truncated at |n| <= k + 8 k^(1/3) + 20; the
    last retained term must be below 1e-15 of the partial sum, otherwise a
    truncation error is raised.  Sign convention: the physical scattered
    field, so u_inc + u_s vanishes on |z| = 1.
    """
    if k <= 0:
        raise ValueError("wavenumber k must be positive")
    pts = np.atleast_1d(np.asarray(points, dtype=complex)).ravel()
    r = np.abs(pts)
    if np.any(r < 1.0 - 1e-12):
        raise ValueError("exact disk field is defined for |z| >= 1")
    r = np.maximum(r, 1.0)
    phi = np.angle(pts)
    nmax = int(np.ceil(k + 8.0 * k ** (1.0 / 3.0) + 20.0))
    psi = phi - angle
    total = np.zeros(len(pts), dtype=complex)
    last = np.zeros(len(pts))
    for n in range(nmax + 1):
        cn = (1j**n) * bessel_j(n, float(k)) / hankel1(n, float(k))
        term = cn * hankel1(n, k * r) * np.cos(n * psi) * (1.0 if n == 0 else 2.0)
        total += term
        last = np.abs(term)
    if np.any(last > 1e-15 * np.maximum(np.abs(total), 1e-300)):
        raise RuntimeError(
            "disk series truncation did not converge; increase the order margin"
        )
    out = -total
    if np.isscalar(points) or np.asarray(points).ndim == 0:
        return complex(out[0])
    return out.reshape(np.shape(points))


# ---------------------------------------------------------------------------
# Laplace problems


@dataclass
class LaplaceOptions:
    tol: float = 3e-13
    tol_map: float = 1e-8
    shrink: float = 0.3
    samples_per_gap: int = 9
    poly_degree: int = 40
    mmax: int = 300
    rcond: float = 1e-15
    collar_factor: float = 0.25


@dataclass
class LaplaceProblem:
    curve: ParametricCurve
    boundary_data: callable  # real-valued on the curve
    side: str = "exterior"  # or "interior"
    mode: str = "support"  # "support" (shield-derived poles) or "double"
    options: LaplaceOptions = field(default_factory=LaplaceOptions)

    def __post_init__(self):
        if self.side not in ("exterior", "interior"):
            raise ValueError("side must be 'exterior' or 'interior'")
        if self.mode not in ("support", "double"):
            raise ValueError("mode must be 'support' or 'double'")


@dataclass
class LaplaceSolution:
    """Real part of a rational expansion: poles plus a polynomial tail."""

    poles: np.ndarray
    coeffs: np.ndarray  # real; layout per design matrix
    anchor: complex
    side: str
    double_poles: bool
    poly_degree: int

    def _design(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        cols = []
        if len(self.poles):
            cols.append(1.0 / (z[:, None] - self.poles[None, :]))
            if self.double_poles:
                cols.append(1.0 / (z[:, None] - self.poles[None, :]) ** 2)
        if self.side == "exterior":
            q = 1.0 / (z - self.anchor)
        else:
            q = z - self.anchor
        cols.append(q[:, None] ** np.arange(self.poly_degree + 1)[None, :])
        phi = np.hstack(cols)
        return np.hstack([phi.real, -phi.imag])

    def __call__(self, z):
        out = self._design(z) @ self.coeffs
        if np.isscalar(z) or np.asarray(z).ndim == 0:
            return float(out[0])
        return out.reshape(np.shape(z))


def solve_laplace(problem: LaplaceProblem) -> tuple[LaplaceSolution, PipelineDiagnostics]:
    """Solve a Laplace boundary-value problem with a rational basis."""
    curve = problem.curve
    v = problem.boundary_data
    opt = problem.options
    diag = PipelineDiagnostics()
    diag.curve_polyline = curve.points(256)
    interior = problem.side == "interior"

    with _stage(diag, 2, "map"):
        cmap = fit_map(curve, tol=opt.tol_map)
        diag.map_degree = cmap.m_approx.degree
        diag.map_deriv_zeros_zeta = cmap.interior_zeros_dm

    with _stage(diag, 3, "v_circle"):
        circle = unit_circle()
        fit_c = aaazp(
            lambda zeta: np.asarray(v(curve(np.angle(zeta) / np.pi)), dtype=complex),
            circle,
            mmax=opt.mmax,
            tol=opt.tol,
            meromorphic=True,
            initial_support=cmap.support_params,
        )
        diag.v_circle_degree = fit_c.degree
        pol = fit_c.poles.filter_spurious(fit_c.norm_f)
        Q = pol.poles[np.abs(pol.poles) < 1.0 - 1e-10]
        diag.data_poles_zeta = Q

    with _stage(diag, 4, "shield"):
        shield = build_shield(
            np.concatenate([Q, cmap.interior_zeros_dm]), shrink=opt.shrink
        )
        diag.shield_knots = shield.knots
        th_dense = np.linspace(-np.pi, np.pi, 256)
        diag.shield_polyline = (th_dense, shield.radius(th_dense))

    with _stage(diag, 6, "v_gamma"):
        fit_g = aaazp(
            lambda z: np.asarray(v(z), dtype=complex),
            curve,
            mmax=opt.mmax,
            tol=opt.tol,
            meromorphic=True,
            initial_support=fit_c.support_params,
        )
        diag.v_gamma_degree = fit_g.degree
        support_t = np.sort(fit_g.support_params)
        diag.support_angles = np.pi * support_t

    with _stage(diag, 7, "poles"):
        if problem.mode == "support":
            if interior:
                # mirror rule: reflect the shield radius across the circle
                theta = diag.support_angles
                rho = np.asarray(shield.radius(theta), dtype=float)
                pk = np.atleast_1d(cmap(np.exp(1j * theta) / np.sqrt(rho)))
                keep = ~curve.contains(pk)
                pk = pk[keep]
            else:
                pk, rho = place_sources(
                    cmap,
                    shield,
                    diag.support_angles,
                    curve=curve,
                    collar_factor=opt.collar_factor,
                )
                diag.lifted_rho = rho
        else:
            ps = fit_g.poles.filter_spurious(fit_g.norm_f)
            inside = curve.contains(ps.poles) if len(ps.poles) else np.empty(0, bool)
            pk = ps.poles[~inside] if interior else ps.poles[inside]
        diag.sources = np.asarray(pk, dtype=complex)
        diag.source_count = len(pk)

    with _stage(diag, 8, "solve"):
        sample_t = _collocation_params(support_t, opt.samples_per_gap)
        zn = curve(sample_t)
        diag.sample_count = len(zn)
        sol = LaplaceSolution(
            poles=np.asarray(pk, dtype=complex),
            coeffs=np.empty(0),
            anchor=curve.centroid(),
            side=problem.side,
            double_poles=problem.mode == "double",
            poly_degree=opt.poly_degree,
        )
        A = sol._design(zn)
        scales = np.abs(A).max(axis=0)
        scales[scales == 0] = 1.0
        rhs = np.asarray(np.real(v(zn)), dtype=float)
        coeffs, _, _, _ = scipy.linalg.lstsq(
            A / scales, rhs, cond=opt.rcond, lapack_driver="gelsd"
        )
        sol.coeffs = coeffs / scales
        bounds = np.append(sample_t, sample_t[0] + 2.0)
        steps = np.arange(4)[None, :] / 4.0
        fine = (sample_t[:, None] + np.diff(bounds)[:, None] * steps).ravel()
        fine = np.where(fine >= 1.0, fine - 2.0, fine)
        zf = curve(np.unique(fine))
        diag.boundary_residual = float(
            np.abs(sol(zf) - np.asarray(np.real(v(zf)), dtype=float)).max()
        )
        diag.degraded = diag.boundary_residual > DEGRADED_RESIDUAL
    return sol, diag


# ---------------------------------------------------------------------------
# Convergence study


def convergence_study(
    curve: ParametricCurve,
    incident: IncidentField,
    J_list,
    options: SolverOptions | None = None,
) -> list[tuple[int, float]]:
    """Boundary residual versus source count, sources equispaced in angle.

    The map and shield are computed once at the study's tolerances; for each
    J, sources sit at J equispaced conformal angles radially projected
    between the shielding curve and the unit circle (the configuration whose
    convergence rate the placement strategy is built around).
    """
    J_list = [int(j) for j in J_list]
    if not J_list:
        raise ValueError("J_list must not be empty")
    opt = options or SolverOptions()
    cmap = fit_map(curve, tol=opt.tol_map)
    circle = unit_circle()
    fit_c = aaazp(
        lambda zeta: np.real(incident(curve(np.angle(zeta) / np.pi))),
        circle,
        mmax=opt.mmax,
        tol=opt.tol_circle,
        meromorphic=True,
        initial_support=cmap.support_params,
    )
    pol = fit_c.poles.filter_spurious(fit_c.norm_f)
    Q = pol.poles[np.abs(pol.poles) < 1.0 - 1e-10]
    shield = build_shield(np.concatenate([Q, cmap.interior_zeros_dm]), shrink=opt.shrink)
    rows = []
    per_gap = opt.effective_samples_per_gap()
    for J in J_list:
        support_t = np.linspace(-1.0, 1.0, J, endpoint=False)
        theta = np.pi * support_t
        sources, _ = place_sources(
            cmap, shield, theta, curve=curve, collar_factor=opt.collar_factor
        )
        sample_t = _collocation_params(support_t, per_gap)
        zn = curve(sample_t)
        matrix, scales = assemble(sources, zn, incident.k, opt.multipole_order)
        coeffs = solve_ls(matrix, incident(zn), rcond=opt.rcond)
        sol = MfsSolution(
            sources=sources,
            coeffs=coeffs,
            order=opt.multipole_order,
            k=incident.k,
            scale_factors=scales,
            incident=incident,
            sample_params=sample_t,
        )
        rows.append((J, boundary_residual(sol, curve, incident, refine=opt.refine_check)))
    return rows


def fit_decay_rate(rows) -> dict:
    """Log-linear fit of residual vs J over the pre-plateau range.

    Returns slope (per source), intercept, and the R^2 of the fit.  The
    plateau is cut where the residual stops improving (within 10x of the
    best value reached).
    """
    J = np.array([r[0] for r in rows], dtype=float)
    res = np.array([max(r[1], 1e-300) for r in rows], dtype=float)
    best = res.min()
    keep = np.ones(len(J), dtype=bool)
    floor = max(best * 10.0, 1e-13)
    plateaued = res <= floor
    if plateaued.any():
        first = int(np.argmax(plateaued))
        keep[first + 1 :] = False
    J_fit, r_fit = J[keep], np.log(res[keep])
    if len(J_fit) < 2:
        return {"slope": float("nan"), "intercept": float("nan"), "r2": float("nan")}
    A = np.vstack([J_fit, np.ones_like(J_fit)]).T
    coef, *_ = np.linalg.lstsq(A, r_fit, rcond=None)
    pred = A @ coef
    ss_res = float(((r_fit - pred) ** 2).sum())
    ss_tot = float(((r_fit - r_fit.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(coef[0]), "intercept": float(coef[1]), "r2": r2}
