"""Estimator-style front end: fit a solver to a boundary, predict fields.

The solvers follow the scikit-learn convention: constructor arguments are
hyperparameters stored verbatim, ``fit`` consumes the geometry (and, for the
Laplace solver, the boundary data), fitted state lives in trailing-underscore
attributes, and ``get_params``/``set_params`` allow composition with generic
tooling (grid search over tolerances, cloning, pipelines).
"""

from __future__ import annotations

import inspect

import numpy as np

from .curves import CurveError, ParametricCurve, make_curve
from .mfs import IncidentField, boundary_residual, eval_field
from .pipeline import (
    LaplaceOptions,
    LaplaceProblem,
    ScatteringProblem,
    SolverOptions,
    solve_laplace,
    solve_scattering,
)

__all__ = ["HelmholtzScatterer", "LaplaceSolver", "check_curve"]


def check_curve(curve) -> ParametricCurve:
    """Accept a ParametricCurve, a spec string, or a callable; validate it."""
    if isinstance(curve, ParametricCurve):
        return curve.validate()
    if isinstance(curve, str):
        return make_curve(curve)
    if callable(curve):
        return ParametricCurve(curve).validate()
    raise CurveError(f"cannot interpret {curve!r} as a curve")


class _ParamsMixin:
    """get_params/set_params over the constructor signature."""

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [p for p in sig.parameters if p != "self"]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(f"invalid parameter {key!r} for {type(self).__name__}")
            setattr(self, key, value)
        return self

    def _check_is_fitted(self, attr: str):
        if not hasattr(self, attr):
            raise RuntimeError(
                f"{type(self).__name__} is not fitted yet; call fit() first"
            )


class HelmholtzScatterer(_ParamsMixin):
    """Exterior sound-soft scattering solver with automatic source placement.

    Parameters mirror :class:`aaals.pipeline.SolverOptions`; ``incident``
    is an :class:`aaals.mfs.IncidentField` or a (k, angle) pair for a plane
    wave.

    After ``fit(curve)`` the solution is available through ``predict(points)``
    (scattered field; pass ``total=True`` for the total field) and the
    fitted attributes ``solution_``, ``diagnostics_`` and ``residual_``.
    """

    def __init__(
        self,
        incident=None,
        k: float = 10.0,
        angle: float = 0.0,
        tol_circle: float = 1e-6,
        tol_map: float = 1e-8,
        multipole_order: int = 2,
        shrink: float = 0.3,
        samples_per_gap: int | None = None,
        rcond: float = 1e-14,
    ):
        self.incident = incident
        self.k = k
        self.angle = angle
        self.tol_circle = tol_circle
        self.tol_map = tol_map
        self.multipole_order = multipole_order
        self.shrink = shrink
        self.samples_per_gap = samples_per_gap
        self.rcond = rcond

    def _incident(self) -> IncidentField:
        if isinstance(self.incident, IncidentField):
            return self.incident
        if self.incident is None:
            return IncidentField(k=self.k, kind="plane", angle=self.angle)
        raise ValueError("incident must be an IncidentField or None")

    def fit(self, curve, y=None):
        curve = check_curve(curve)
        problem = ScatteringProblem(
            curve=curve,
            incident=self._incident(),
            options=SolverOptions(
                tol_circle=self.tol_circle,
                tol_map=self.tol_map,
                multipole_order=self.multipole_order,
                shrink=self.shrink,
                samples_per_gap=self.samples_per_gap,
                rcond=self.rcond,
            ),
        )
        self.curve_ = curve
        self.solution_, self.diagnostics_ = solve_scattering(problem)
        self.residual_ = self.diagnostics_.boundary_residual
        return self

    def predict(self, points, total: bool = False):
        self._check_is_fitted("solution_")
        return eval_field(self.solution_, points, total=total)

    def score(self, points=None, y=None) -> float:
        """Negative log10 boundary residual (higher is better)."""
        self._check_is_fitted("solution_")
        return -float(np.log10(max(self.residual_, 1e-300)))


class LaplaceSolver(_ParamsMixin):
    """Harmonic boundary-value solver with a rational pole basis."""

    def __init__(
        self,
        boundary_data=None,
        side: str = "exterior",
        mode: str = "support",
        tol: float = 3e-13,
        samples_per_gap: int = 9,
        poly_degree: int = 40,
        shrink: float = 0.3,
    ):
        self.boundary_data = boundary_data
        self.side = side
        self.mode = mode
        self.tol = tol
        self.samples_per_gap = samples_per_gap
        self.poly_degree = poly_degree
        self.shrink = shrink

    def fit(self, curve, y=None):
        if self.boundary_data is None:
            raise ValueError("boundary_data must be set before fit")
        curve = check_curve(curve)
        problem = LaplaceProblem(
            curve=curve,
            boundary_data=self.boundary_data,
            side=self.side,
            mode=self.mode,
            options=LaplaceOptions(
                tol=self.tol,
                samples_per_gap=self.samples_per_gap,
                poly_degree=self.poly_degree,
                shrink=self.shrink,
            ),
        )
        self.curve_ = curve
        self.solution_, self.diagnostics_ = solve_laplace(problem)
        self.residual_ = self.diagnostics_.boundary_residual
        return self

    def predict(self, points):
        self._check_is_fitted("solution_")
        return self.solution_(points)

    def score(self, points=None, y=None) -> float:
        self._check_is_fitted("solution_")
        return -float(np.log10(max(self.residual_, 1e-300)))
