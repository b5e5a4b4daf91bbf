import numpy as np
import pytest

import aaals
from aaals import HelmholtzScatterer, LaplaceSolver, check_curve, exact_disk_scatter


def test_get_set_params_round_trip():
    est = HelmholtzScatterer(k=12.0, angle=0.1)
    params = est.get_params()
    assert params["k"] == 12.0
    est2 = HelmholtzScatterer(**params)
    assert est2.get_params() == params
    est2.set_params(k=5.0, shrink=0.2)
    assert est2.k == 5.0 and est2.shrink == 0.2


def test_set_params_rejects_unknown():
    with pytest.raises(ValueError):
        HelmholtzScatterer().set_params(waviness=3)


def test_not_fitted_error():
    with pytest.raises(RuntimeError):
        HelmholtzScatterer().predict([2.0])


def test_fit_predict_matches_oracle():
    est = HelmholtzScatterer(k=10.0).fit("circle")
    z = 2.0 * np.exp(1j * np.linspace(0, 2 * np.pi, 50, endpoint=False))
    err = np.abs(-est.predict(z) - exact_disk_scatter(10.0, 0.0, z)).max()
    assert err <= 1e-8
    assert est.residual_ <= 1e-9
    assert est.score() >= 8.0


def test_fit_accepts_callable_curve():
    est = HelmholtzScatterer(k=4.0).fit(lambda t: np.exp(1j * np.pi * np.asarray(t)))
    assert est.residual_ <= 1e-9


def test_check_curve_rejects_garbage():
    with pytest.raises(aaals.CurveError):
        check_curve(42)


def test_laplace_estimator():
    est = LaplaceSolver(boundary_data=lambda z: np.real(z) ** 2).fit("random:seed=1")
    assert est.residual_ <= 1e-11
    z = np.array([3.0 + 1j, -2.5])
    vals = est.predict(z)
    assert vals.shape == (2,)
    assert np.all(np.isfinite(vals))


def test_laplace_estimator_requires_data():
    with pytest.raises(ValueError):
        LaplaceSolver().fit("circle")
