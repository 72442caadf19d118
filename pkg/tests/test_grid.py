import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from desolve.core.grid import chebyshev_basis, chebyshev_values, make_collocation_grid
from desolve.errors import InvalidArgumentError, UnsupportedOrderError


def test_three_point_grid():
    g = make_collocation_grid(2, -1.0, 1.0)
    np.testing.assert_allclose(g.x_points, [-1, 0, 1], atol=1e-16)
    np.testing.assert_allclose(g.t_points, [-1, 0, 1], atol=1e-16)
    assert g.scale_c == 1.0


def test_five_point_grid_matches_cosines():
    g = make_collocation_grid(4, -1.0, 1.0)
    np.testing.assert_allclose(g.x_points, [-1, -0.70710678, 0, 0.70710678, 1], atol=1e-8)
    np.testing.assert_allclose(g.x_points, -np.cos(np.arange(5) * np.pi / 4), atol=1e-15)


def test_endpoints_are_exact():
    g = make_collocation_grid(100, 0.0, 1.0)
    assert g.t_points[0] == 0.0 and g.t_points[100] == 1.0
    assert g.scale_c == 2.0


def test_grid_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        make_collocation_grid(0, 0.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        make_collocation_grid(4, 1.0, 1.0)


@given(st.integers(1, 200), st.floats(-5, 5), st.floats(0.1, 10))
def test_grid_is_sorted_and_maps_back(n, t0, length):
    g = make_collocation_grid(n, t0, t0 + length)
    assert np.all(np.diff(g.t_points) > 0)
    np.testing.assert_allclose(g.to_x(g.t_points), g.x_points, atol=1e-12)
    np.testing.assert_allclose(g.to_t(g.x_points), g.t_points, atol=1e-12 * (1 + abs(t0)))


def test_basis_row_at_half():
    (vals,) = chebyshev_values([0.5], 4)
    np.testing.assert_allclose(vals[0], [1, 0.5, -0.5, -1], atol=1e-15)


@pytest.mark.parametrize("m", [1, 5, 40])
def test_basis_is_one_at_right_end(m):
    (vals,) = chebyshev_values([1.0], m)
    np.testing.assert_array_equal(vals[0], np.ones(m))


def test_first_derivative_matches_finite_difference():
    h = 1e-6
    vals, d1 = chebyshev_values([0.3], 8, 1)
    up = chebyshev_values([0.3 + h], 8)[0]
    dn = chebyshev_values([0.3 - h], 8)[0]
    fd = (up - dn) / (2 * h)
    np.testing.assert_allclose(d1[0, 1:], fd[0, 1:], rtol=1e-7)
    assert d1[0, 0] == 0.0


def test_derivatives_against_numpy_chebyshev():
    x = np.linspace(-1, 1, 37)
    mats = chebyshev_values(x, 12, 4)
    for j in range(12):
        c = np.zeros(12)
        c[j] = 1
        for k in range(5):
            ref = np.polynomial.chebyshev.chebval(x, np.polynomial.chebyshev.chebder(c, k)
                                                  if k else c)
            np.testing.assert_allclose(mats[k][:, j], ref, atol=1e-9 * max(1, j) ** (2 * k))


def test_recurrence_residual_and_end_slope():
    x = np.linspace(-1, 1, 101)
    T, dT = chebyshev_values(x, 40, 1)
    res = T[:, 2:] - (2 * x[:, None] * T[:, 1:-1] - T[:, :-2])
    assert np.max(np.abs(res)) <= 1e-13
    j = np.arange(40)
    np.testing.assert_allclose(dT[-1], j ** 2, atol=1e-10)


def test_basis_matrix_from_grid():
    g = make_collocation_grid(6, 0.0, 2.0)
    B = chebyshev_basis(g, 5, 2)
    assert B.values.shape == (7, 5)
    np.testing.assert_array_equal(B.deriv(0), B.values)
    assert B.deriv(2).shape == (7, 5)


def test_basis_rejects_orders():
    with pytest.raises(UnsupportedOrderError):
        chebyshev_values([0.0], 4, 5)
    with pytest.raises(InvalidArgumentError):
        chebyshev_values([0.0], 0)
