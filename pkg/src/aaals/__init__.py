"""Meshless exterior scattering and Laplace solvers driven by adaptive
rational approximation: singularity-adapted source placement via continuum
AAA fits, conformal boundary maps and shielding curves."""

from .aaa import AaaResult, aaa_fit
from .barycentric import BarycentricRational, PoleSet
from .conformal import (
    ConformalMap,
    SchwarzStructure,
    ShieldingCurve,
    build_shield,
    fit_map,
    schwarz,
)
from .continuum import ContinuumApprox, aaazp
from .curves import CurveError, ParametricCurve, make_curve, random_jordan, unit_circle
from .estimator import HelmholtzScatterer, LaplaceSolver, check_curve
from .mfs import (
    IncidentField,
    MfsSolution,
    assemble,
    boundary_residual,
    eval_field,
    place_sources,
    solve_ls,
)
from .pipeline import (
    LaplaceOptions,
    LaplaceProblem,
    LaplaceSolution,
    PipelineDiagnostics,
    ScatteringProblem,
    SolverOptions,
    StageError,
    convergence_study,
    exact_disk_scatter,
    fit_decay_rate,
    solve_laplace,
    solve_scattering,
)
from .specfun import bessel_j, bessel_y, hankel1

__version__ = "0.1.0"

__all__ = [
    "AaaResult",
    "aaa_fit",
    "BarycentricRational",
    "PoleSet",
    "ConformalMap",
    "SchwarzStructure",
    "ShieldingCurve",
    "build_shield",
    "fit_map",
    "schwarz",
    "ContinuumApprox",
    "aaazp",
    "CurveError",
    "ParametricCurve",
    "make_curve",
    "random_jordan",
    "unit_circle",
    "HelmholtzScatterer",
    "LaplaceSolver",
    "check_curve",
    "IncidentField",
    "MfsSolution",
    "assemble",
    "boundary_residual",
    "eval_field",
    "place_sources",
    "solve_ls",
    "LaplaceOptions",
    "LaplaceProblem",
    "LaplaceSolution",
    "PipelineDiagnostics",
    "ScatteringProblem",
    "SolverOptions",
    "StageError",
    "convergence_study",
    "exact_disk_scatter",
    "fit_decay_rate",
    "solve_laplace",
    "solve_scattering",
    "bessel_j",
    "bessel_y",
    "hankel1",
]
