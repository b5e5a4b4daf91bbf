import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aaals import BarycentricRational, aaa_fit


def unit_circle_pts(n=256):
    return np.exp(1j * np.linspace(-np.pi, np.pi, n, endpoint=False))


def interp_linear():
    """Degree-1 data f(z) = z at three support points."""
    s = np.array([1.0, -1.0, 1j])
    f = s.copy()
    # polynomial-interpolation weights reproduce f(z) = z exactly
    w = np.array(
        [1 / np.prod([s[i] - s[j] for j in range(3) if j != i]) for i in range(3)]
    )
    return BarycentricRational(s, f, w)


def test_eval_reproduces_linear_data():
    r = interp_linear()
    assert abs(r(0.5) - 0.5) <= 1e-15


def test_eval_exact_at_support():
    r = interp_linear()
    for sj, fj in zip(r.support, r.values):
        assert r(sj) == fj


def test_eval_aaa_fit_of_simple_pole():
    Z = unit_circle_pts()
    res = aaa_fit(1.0 / (Z - 2.0), Z)
    assert abs(res.approx(0.0) - (-0.5)) <= 1e-13


def test_pole_of_simple_pole_fit():
    Z = unit_circle_pts()
    res = aaa_fit(1.0 / (Z - 2.0), Z)
    ps = res.poles
    assert len(ps.poles) >= 1
    nearest = ps.poles[np.argmin(np.abs(ps.poles - 2.0))]
    assert abs(nearest - 2.0) <= 1e-12


def test_polynomial_fit_has_no_significant_poles():
    Z = unit_circle_pts()
    res = aaa_fit(Z.copy(), Z)
    scale = 1.0  # max |f| on the circle
    strong = res.approx.pole_set().filter_spurious(scale)
    assert len(strong.poles) == 0


def test_zero_and_pole_of_rational():
    Z = unit_circle_pts()
    res = aaa_fit((Z - 3.0) / (Z - 2.0), Z)
    ps = res.approx.pole_set().filter_spurious(np.abs((Z - 3) / (Z - 2)).max())
    pole = ps.poles[np.argmin(np.abs(ps.poles - 2.0))]
    zero = ps.zeros[np.argmin(np.abs(ps.zeros - 3.0))]
    assert abs(pole - 2.0) <= 1e-12
    assert abs(zero - 3.0) <= 1e-12


def square_fit():
    Z = unit_circle_pts()
    return aaa_fit(Z**2, Z).approx


def test_derivative_of_square():
    r = square_fit()
    z = 0.3 + 0.1j
    assert abs(r.deriv(z, 1) - 2 * z) <= 1e-12


def test_second_derivative_at_support_point():
    r = square_fit()
    assert abs(r.deriv(r.support[0], 2) - 2.0) <= 1e-10


def test_derivative_matches_finite_difference():
    Z = unit_circle_pts()
    res = aaa_fit(np.exp(Z) / (Z - 1.7), Z)
    r = res.approx
    scale = np.abs(r.support).max()
    h = 1e-6 * scale
    for z in (0.3 + 0.2j, -0.5j, 0.1):
        fd = (r(z + h) - r(z - h)) / (2 * h)
        assert abs(r.deriv(z, 1) - fd) <= 1e-6 * max(abs(fd), 1e-10)


def test_second_derivative_is_derivative_of_derivative():
    Z = unit_circle_pts()
    r = aaa_fit(np.exp(Z) / (Z - 1.7), Z).approx
    h = 1e-5
    for z in (0.3 + 0.2j, -0.4 + 0.1j):
        fd = (r.deriv(z + h, 1) - r.deriv(z - h, 1)) / (2 * h)
        assert abs(r.deriv(z, 2) - fd) <= 1e-8 * max(abs(fd), 1e-10)


def test_pole_residue_reconstruction():
    # strictly proper rational with simple, separated poles
    poles_true = np.array([0.3 + 0.2j, -0.5 - 0.4j, 0.1 - 0.6j])
    res_true = np.array([1.0, 0.5 - 0.2j, -0.7j])
    Z = 2.0 * unit_circle_pts()  # test circle separated from all poles
    fit = aaa_fit(np.sum(res_true / (Z[:, None] - poles_true[None, :]), axis=1), Z)
    ps = fit.approx.pole_set().filter_spurious(np.abs(fit.approx.values).max())
    zt = 1.5 * np.exp(1j * np.linspace(0, 2 * np.pi, 37))
    recon = np.sum(ps.residues / (zt[:, None] - ps.poles[None, :]), axis=1)
    assert np.abs(fit.approx(zt) - recon).max() <= 1e-10


def test_eval_returns_nonfinite_only_at_genuine_pole():
    # D(z) = 2z/(z^2-1) vanishes exactly at z = 0 while N(0) = -2
    r = BarycentricRational([1.0, -1.0], [1.0, -1.0], [1.0, 1.0])
    assert not np.isfinite(r(0.0))
    assert np.isfinite(r(0.3))


def test_validation_errors():
    with pytest.raises(ValueError):
        BarycentricRational([1.0, 2.0], [1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        BarycentricRational([1.0, 1.0], [1.0, 2.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        BarycentricRational([1.0, 2.0], [1.0, 2.0], [0.0, 0.0])


def test_degenerate_pencil_reported():
    r = interp_linear()
    r.weights[:] = 0.0
    with pytest.raises(ValueError):
        r.poles()


@settings(max_examples=25, deadline=None)
@given(
    st.lists(
        st.complex_numbers(
            min_magnitude=0.1, max_magnitude=3.0, allow_nan=False, allow_infinity=False
        ),
        min_size=2,
        max_size=8,
        unique=True,
    )
)
def test_interpolation_property(support):
    support = np.array(support)
    d = np.abs(support[:, None] - support[None, :]) + np.eye(len(support))
    if d.min() < 1e-6:
        return  # too close for a well-posed interpolation test
    values = np.sin(support.real) + 1j * support.imag
    weights = np.ones(len(support))
    r = BarycentricRational(support, values, weights)
    assert max(abs(r(s) - f) for s, f in zip(support, values)) == 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=10), st.integers(min_value=0, max_value=2**31))
def test_serialization_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    support = rng.normal(size=n) + 1j * rng.normal(size=n)
    d = np.abs(support[:, None] - support[None, :]) + np.eye(n)
    if d.min() < 1e-9:
        return
    values = rng.normal(size=n) + 1j * rng.normal(size=n)
    weights = rng.normal(size=n) + 1j * rng.normal(size=n)
    if not np.any(weights != 0):
        return
    r = BarycentricRational(support, values, weights)
    r2 = BarycentricRational.from_dict(r.to_dict())
    assert np.array_equal(r2.support, r.support)
    assert np.array_equal(r2.values, r.values)
    assert np.array_equal(r2.weights, r.weights)
