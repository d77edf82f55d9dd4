import math

import numpy as np
import pytest

from hrzero import profile as pf
from hrzero.errors import DomainError
from hrzero.quadrature import integrate


def test_classify_regime_examples():
    assert pf.classify_regime(3, 3, 0.0) is pf.Regime.SLICE
    assert pf.classify_regime(3, 3, 0.7) is pf.Regime.TILTED_GRAPH
    assert pf.classify_regime(3, 1, 2.0) is pf.Regime.TWO_SHEETS
    assert pf.classify_regime(4, 2, 1.0) is pf.Regime.HALF_GRAPH
    assert pf.classify_regime(3, 1, 0.5) is pf.Regime.ENTIRE_GRAPH


def test_classify_regime_rejections():
    with pytest.raises(DomainError):
        pf.classify_regime(3, 1, 0.0)
    with pytest.raises(DomainError):
        pf.classify_regime(3, 1, -0.5)
    with pytest.raises(DomainError):
        pf.classify_regime(3, 4, 1.0)
    with pytest.raises(DomainError):
        pf.classify_regime(1, 1, 1.0)


def test_waist_radius_matches_first_integral_blowup():
    # where the slope blows up, cosh(rho)^(n-r) = d^r
    for n, r, d in [(3, 1, 2.0), (4, 2, 1.5), (5, 3, 3.0)]:
        a = pf.waist_radius(n, r, d)
        assert math.cosh(a) ** (n - r) == pytest.approx(d**r, rel=1e-12)


def test_lambda_dot_closed_form_points():
    n, r, d = 3, 1, 2.0
    q = pf.exponent_q(n, r)
    rho_star = math.acosh((2.0 * d * d) ** (1.0 / (2.0 * q)))
    assert pf.lambda_dot(n, r, d, rho_star) == pytest.approx(1.0, rel=1e-12)
    assert pf.lambda_dot(3, 1, 0.5, 0.0) == pytest.approx(
        0.5 / math.sqrt(1.0 - 0.25), rel=1e-14
    )


def test_lambda_dot_domain_guard():
    a = pf.waist_radius(3, 1, 2.0)
    with pytest.raises(DomainError):
        pf.lambda_dot(3, 1, 2.0, 0.9 * a)


def test_lambda_dot_matches_profile_derivative():
    # differentiate the quadrature-built profile as an independent route
    n, r, d = 3, 1, 2.0
    a = pf.waist_radius(n, r, d)
    rho = 2.0 * a
    h = 1e-5
    fd = (
        pf.profile_two_sheets(n, r, d, rho + h)
        - pf.profile_two_sheets(n, r, d, rho - h)
    ) / (2.0 * h)
    assert pf.lambda_dot(n, r, d, rho) == pytest.approx(fd, rel=1e-7)


def test_lambda_ddot_sign_and_zero():
    assert pf.lambda_ddot(3, 1, 0.5, 0.0) == 0.0
    for rho in (0.5, 1.0, 2.0):
        assert pf.lambda_ddot(3, 1, 0.5, rho) < 0.0
        assert pf.lambda_ddot(3, 1, 0.5, -rho) > 0.0  # odd profile


def test_lambda_ddot_matches_second_differences():
    n, r, d = 3, 1, 2.0
    a = pf.waist_radius(n, r, d)
    rho = 2.0 * a
    h = 1e-4
    lam = [pf.profile_two_sheets(n, r, d, rho + k * h) for k in (-1, 0, 1)]
    fd = (lam[0] - 2.0 * lam[1] + lam[2]) / (h * h)
    assert pf.lambda_ddot(n, r, d, rho) == pytest.approx(fd, abs=1e-5, rel=1e-5)


def test_two_sheets_zero_at_waist_and_monotone():
    n, r, d = 3, 1, 2.0
    a = pf.waist_radius(n, r, d)
    assert pf.profile_two_sheets(n, r, d, a) == 0.0
    vals = [pf.profile_two_sheets(n, r, d, a + s) for s in (0.1, 0.4, 1.0, 2.5)]
    assert all(b > x for x, b in zip(vals, vals[1:]))
    with pytest.raises(DomainError):
        pf.profile_two_sheets(n, r, d, 0.5 * a)


def _two_sheets_direct_oracle(n, r, d, rho, eps=1e-8):
    """Independent route in the profile variable: truncate the inverse-sqrt
    endpoint at waist + eps and put back the leading 2 C sqrt(eps) piece."""
    q = pf.exponent_q(n, r)
    a = pf.waist_radius(n, r, d)

    def integrand(xi):
        return d / math.sqrt(math.cosh(xi) ** (2.0 * q) - d * d)

    res = integrate(integrand, a + eps, rho)
    assert res.converged
    slope_coeff = math.sqrt(2.0 / (q * math.tanh(a)))  # lambda ~ C sqrt(xi - a)
    return res.value + slope_coeff * math.sqrt(eps)


def test_two_sheets_profile_variable_oracle():
    # the two integral routes agree to 1e-9 at (3,1,2), rho = 3
    val = pf.profile_two_sheets(3, 1, 2.0, 3.0)
    oracle = _two_sheets_direct_oracle(3, 1, 2.0, 3.0)
    assert val == pytest.approx(oracle, abs=1e-9)


def test_two_sheets_approaches_height():
    from hrzero.heights import height

    n, r, d = 3, 1, 2.0
    h = height(n, r, d).h
    lam = pf.profile_two_sheets(n, r, d, 14.0)
    assert lam < h
    assert lam == pytest.approx(h, abs=1e-8)


def test_half_graph_examples():
    n, r, b = 3, 1, 1.0
    assert pf.profile_half_graph(n, r, b, b) == 0.0
    assert pf.profile_half_graph(n, r, b, 0.5 * b) < 0.0 < pf.profile_half_graph(n, r, b, 2.0 * b)
    vals = [pf.profile_half_graph(n, r, b, rho) for rho in (0.3, 0.7, 1.5, 3.0)]
    assert all(y > x for x, y in zip(vals, vals[1:]))
    # bounded above: the outward tail is exponentially small
    tail = pf.profile_half_graph(n, r, b, 20.0) - pf.profile_half_graph(n, r, b, 10.0)
    assert 0.0 < tail < 1e-6
    with pytest.raises(DomainError):
        pf.profile_half_graph(n, r, b, -0.1)


def test_half_graph_log_divergence_rate():
    # small xi: integrand ~ 1/(xi sqrt(q)), so decades differ by ln(10)/sqrt(q)
    n, r = 3, 1
    q = pf.exponent_q(n, r)
    step = pf.profile_half_graph(n, r, 1.0, 1e-3) - pf.profile_half_graph(n, r, 1.0, 1e-2)
    assert step == pytest.approx(-math.log(10.0) / math.sqrt(q), rel=0.02)
    # and the value is bounded above by the model divergence line
    lam = pf.profile_half_graph(n, r, 1.0, 1e-3)
    assert lam <= -math.log(1.0 / 1e-3) / math.sqrt(q) + 2.0


def test_entire_graph_examples():
    n, r, d = 3, 1, 0.5
    assert pf.profile_entire(n, r, d, 0.0) == 0.0
    for rho in (0.3, 1.0, 4.0):
        assert pf.profile_entire(n, r, d, -rho) == -pf.profile_entire(n, r, d, rho)
    assert pf.profile_entire(n, r, d, 20.0) - pf.profile_entire(n, r, d, 10.0) < 1e-6
    with pytest.raises(DomainError):
        pf.profile_entire(n, r, 1.5, 1.0)


def test_entire_graph_tail_bound_oracle():
    # integrand <= d / sqrt(cosh(xi)^2q - d^2) <= C exp(-q xi) for xi >= 10
    n, r, d = 3, 1, 0.5
    q = pf.exponent_q(n, r)
    tail = pf.profile_entire(n, r, d, 20.0) - pf.profile_entire(n, r, d, 10.0)
    bound = d / math.sqrt((math.cosh(10.0) / 2.0) ** (2 * q)) * 10.0
    assert 0.0 <= tail <= bound


def test_linear_profile():
    assert pf.profile_r_equals_n(0.0, 1.3, 5.0) == pytest.approx(1.3)
    assert pf.profile_r_equals_n(1.0, 0.0, 2.0) == pytest.approx(2.0)
    for rho in (0.5, 2.0):
        left = pf.profile_r_equals_n(0.7, 0.2, -rho)
        right = pf.profile_r_equals_n(0.7, 0.2, rho)
        assert left + right == pytest.approx(2.0 * 0.2)
    with pytest.raises(DomainError):
        pf.profile_r_equals_n(-1.0, 0.0, 1.0)


def test_first_integral_limits():
    assert pf.first_integral(3, 1, 1.0, 0.0) == 0.0
    big = pf.first_integral(3, 1, 1.0, 1e12)
    assert big == pytest.approx(math.cosh(1.0) ** 2, rel=1e-10)
    assert pf.first_integral(3, 1, 1.0, math.inf) == pytest.approx(math.cosh(1.0) ** 2)


def test_first_integral_constancy_on_samples():
    n, r, d = 3, 1, 2.0
    grid = pf.default_grid(n, r, d, 6.0, 256)
    curve = pf.sample_profile(n, r, d, grid)
    fi = pf.first_integral(n, r, curve.rho, curve.lam_dot)
    assert float(np.max(np.abs(fi ** (1.0 / r) - d))) < 1e-9 * max(d, 1.0)


def test_sample_profile_slice_and_tilted():
    grid = np.linspace(-2.0, 2.0, 31)
    curve = pf.sample_profile(3, 3, 0.0, grid, vertical_offset=0.7)
    assert np.all(curve.lam == 0.7)
    assert np.all(curve.lam_dot == 0.0)
    tilted = pf.sample_profile(3, 3, 0.8, grid)
    np.testing.assert_allclose(tilted.lam, 0.8 * grid, atol=1e-15)


def test_sample_profile_two_sheets_shape():
    n, r, d = 3, 1, 2.0
    grid = pf.default_grid(n, r, d, 6.0, 200)
    curve = pf.sample_profile(n, r, d, grid)
    assert np.all(np.diff(curve.lam) > 0.0)
    assert np.all(np.diff(curve.lam_dot) < 0.0)
    assert np.all(curve.lam_ddot < 0.0)  # matches the closed-form sign


def test_sample_profile_half_graph_branch_signs():
    curve = pf.sample_profile(4, 2, 1.0, pf.default_grid(4, 2, 1.0, 4.0, 96))
    assert np.all(curve.lam_dot > 0.0)
    assert np.all(curve.lam_ddot < 0.0)


def test_sample_profile_entire_odd():
    grid = pf.default_grid(3, 1, 0.5, 4.0, 64)
    curve = pf.sample_profile(3, 1, 0.5, grid)
    np.testing.assert_allclose(curve.lam + curve.lam[::-1], 0.0, atol=1e-12)


def test_sample_profile_branch_and_offset():
    n, r, d = 3, 1, 2.0
    grid = pf.default_grid(n, r, d, 4.0, 64)
    plus = pf.sample_profile(n, r, d, grid)
    minus = pf.sample_profile(n, r, d, grid, branch_sign=-1, vertical_offset=1.5)
    np.testing.assert_allclose(minus.lam, 1.5 - plus.lam, atol=1e-14)
    np.testing.assert_allclose(minus.lam_dot, -plus.lam_dot, atol=1e-14)
    # the conserved quantity is insensitive to branch and offset
    fi = pf.first_integral(n, r, minus.rho, minus.lam_dot)
    assert float(np.max(np.abs(fi - d**r))) < 1e-9


def test_sample_profile_grid_validation():
    with pytest.raises(DomainError):
        pf.sample_profile(3, 1, 2.0, np.array([1.0, 1.0, 2.0]))
    with pytest.raises(DomainError):
        pf.sample_profile(3, 1, 2.0, np.array([0.1, 0.2, 0.3]))  # below waist
    with pytest.raises(DomainError):
        pf.sample_profile(4, 2, 1.0, np.array([-0.5, 0.5]))  # half graph needs rho > 0


def test_default_grid_domains():
    grid = pf.default_grid(3, 1, 2.0, 5.0, 128)
    a = pf.waist_radius(3, 1, 2.0)
    assert grid[0] > a
    assert grid[-1] == pytest.approx(5.0)
    assert np.all(np.diff(grid) > 0.0)
    grid = pf.default_grid(4, 2, 1.0, 5.0, 128)
    assert grid[0] > 0.0
    grid = pf.default_grid(3, 1, 0.5, 4.0, 65)
    assert grid[0] == -grid[-1]
