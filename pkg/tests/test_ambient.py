import math

import numpy as np
import pytest

from hrzero import ambient as am
from hrzero.errors import DomainError

N = 3


def _pt(*coords, t=0.0):
    return am.BallPoint(np.array(coords, dtype=float), t)


# ---------------------------------------------------------------------------
# metric basics


def test_conformal_factor_values():
    assert am.conformal_factor(_pt(0, 0, 0)) == pytest.approx(0.5)
    assert am.conformal_factor(_pt(0.5, 0, 0)) == pytest.approx(3.0 / 8.0)


def test_conformal_factor_monotone_to_zero():
    radii = np.linspace(0.0, 0.999, 40)
    vals = [am.conformal_factor(_pt(r, 0, 0)) for r in radii]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-3


def test_ball_guard():
    with pytest.raises(DomainError):
        _pt(1.0 - 1e-14, 0, 0)
    with pytest.raises(DomainError):
        _pt(1.1, 0, 0)


def test_ambient_inner_examples():
    p = _pt(0, 0, 0)
    e1 = am.AmbientVector(p, np.array([1.0, 0, 0, 0]))
    assert am.ambient_inner(p, e1, e1) == pytest.approx(4.0)
    up = am.AmbientVector(p, np.array([0.0, 0, 0, 1.0]))
    assert am.ambient_inner(p, up, up) == pytest.approx(1.0)
    q = _pt(0.3, -0.2, 0.1)
    upq = am.AmbientVector(q, np.array([0.0, 0, 0, 1.0]))
    assert am.ambient_inner(q, upq, upq) == pytest.approx(1.0)


def test_ambient_inner_base_mismatch():
    p = _pt(0, 0, 0)
    q = _pt(0.1, 0, 0)
    v = am.AmbientVector(p, np.ones(4))
    w = am.AmbientVector(q, np.ones(4))
    with pytest.raises(DomainError):
        am.ambient_inner(p, v, w)


def test_norm_comparison_examples(rng):
    p = _pt(0, 0, 0)
    up = am.AmbientVector(p, np.array([0.0, 0, 0, 1.0]))
    amb, euc = am.norm_comparison(p, up)
    assert amb == pytest.approx(euc) == pytest.approx(1.0)
    e1 = am.AmbientVector(p, np.array([1.0, 0, 0, 0]))
    amb, euc = am.norm_comparison(p, e1)
    assert (amb, euc) == (pytest.approx(2.0), pytest.approx(1.0))
    for _ in range(200):
        x = rng.uniform(-0.55, 0.55, size=N)
        v = rng.normal(size=N + 1)
        amb, euc = am.norm_comparison(am.BallPoint(x), am.AmbientVector(am.BallPoint(x), v))
        assert amb >= euc - 1e-14


# ---------------------------------------------------------------------------
# Christoffel symbols and the position field


def test_christoffel_origin_and_closed_form():
    assert np.all(am.christoffel(_pt(0, 0, 0)) == 0.0)
    g = am.christoffel(_pt(0.5, 0, 0))
    assert g[0, 0, 0] == pytest.approx(4.0 / 3.0)
    # vanishing whenever any index is vertical or all three differ
    assert np.all(g[N, :, :] == 0.0)
    assert np.all(g[:, N, :] == 0.0)
    assert g[0, 1, 2] == 0.0


def test_christoffel_symmetry(rng):
    for _ in range(10):
        x = rng.uniform(-0.5, 0.5, size=N)
        g = am.christoffel(am.BallPoint(x))
        assert np.allclose(g, np.swapaxes(g, 1, 2), atol=0.0)


def _metric_matrix(x):
    n = x.shape[0]
    f = 0.5 * (1.0 - float(np.dot(x, x)))
    g = np.eye(n + 1)
    g[:n, :n] /= f * f
    return g


def _christoffel_fd(x, h=1e-4):
    """Independent route: 5-point central differences of the metric.

    dg[k][i, j] approximates the derivative of g_ij along direction k
    (derivatives along the vertical direction vanish).
    """
    n = x.shape[0]
    dg = np.zeros((n + 1, n + 1, n + 1))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        dg[k] = (
            -_metric_matrix(x + 2 * e)
            + 8.0 * _metric_matrix(x + e)
            - 8.0 * _metric_matrix(x - e)
            + _metric_matrix(x - 2 * e)
        ) / (12.0 * h)
    ginv = np.linalg.inv(_metric_matrix(x))
    gam = np.zeros((n + 1, n + 1, n + 1))
    for k in range(n + 1):
        for i in range(n + 1):
            for j in range(n + 1):
                gam[k, i, j] = 0.5 * sum(
                    ginv[k, m] * (dg[i][j, m] + dg[j][i, m] - dg[m][i, j])
                    for m in range(n + 1)
                )
    return gam


def test_christoffel_matches_metric_differences(rng):
    worst = 0.0
    for _ in range(100):
        x = rng.uniform(-1.0, 1.0, size=N)
        nrm = np.linalg.norm(x)
        if nrm >= 0.9:
            x *= 0.9 * rng.uniform(0.2, 1.0) / nrm
        gam = am.christoffel(am.BallPoint(x))
        gam_fd = _christoffel_fd(x)
        worst = max(worst, float(np.max(np.abs(gam - gam_fd))))
    assert worst < 1e-6


def test_position_factor_L():
    assert am.position_factor_L(_pt(0, 0, 0)) == pytest.approx(1.0)
    x = math.sqrt(1.0 / 3.0)
    assert am.position_factor_L(_pt(x, 0, 0)) == pytest.approx(2.0)
    assert am.position_factor_L(_pt(0.999, 0, 0)) > 500.0


def test_covariant_derivative_position_basics(rng):
    p = _pt(0, 0, 0)
    v = am.AmbientVector(p, rng.normal(size=N + 1))
    out = am.covariant_derivative_position(p, v)
    np.testing.assert_allclose(out.v, v.v, atol=1e-15)
    q = _pt(0.2, -0.4, 0.1, t=0.3)
    up = am.AmbientVector(q, np.array([0.0, 0, 0, 1.0]))
    np.testing.assert_allclose(
        am.covariant_derivative_position(q, up).v, up.v, atol=1e-15
    )


def _covariant_position_fd(x, j, h=1e-4):
    """Finite-difference covariant derivative of the position field along
    the canonical direction j, using the finite-difference symbols."""
    n = x.shape[0]
    gam = _christoffel_fd(x)
    out = np.zeros(n + 1)
    out[j] = 1.0  # partial derivative of the field's components
    X = np.concatenate([x, [0.7]])  # any height; symbols ignore it
    for k in range(n + 1):
        out[k] += sum(gam[k, j, m] * X[m] for m in range(n + 1))
    return out


def test_covariant_position_field_identity(rng):
    """The derivative along e_j is L e_j horizontally and e_{n+1} vertically."""
    worst = 0.0
    for _ in range(100):
        x = rng.uniform(-1.0, 1.0, size=N)
        nrm = np.linalg.norm(x)
        if nrm >= 0.9:
            x *= 0.9 * rng.uniform(0.2, 1.0) / nrm
        L = am.position_factor_L(am.BallPoint(x))
        for j in range(N):
            got = _covariant_position_fd(x, j)
            want = np.zeros(N + 1)
            want[j] = L
            worst = max(worst, float(np.max(np.abs(got - want))))
        got = _covariant_position_fd(x, N)
        want = np.zeros(N + 1)
        want[N] = 1.0
        worst = max(worst, float(np.max(np.abs(got - want))))
    assert worst < 1e-6


# ---------------------------------------------------------------------------
# distances and translations


def test_distance_origin_roundtrip():
    assert am.hyp_distance_origin(_pt(0, 0, 0)) == 0.0
    rho = 2.0 * math.atanh(0.5)
    assert am.ball_radius(rho) == pytest.approx(0.5, abs=1e-15)
    assert am.hyp_distance_origin(_pt(0.5, 0, 0)) == pytest.approx(rho)


def test_ball_radius_against_bisection():
    # invert tanh by bisection as an independent route
    rho = 1.0
    lo, hi = 0.0, 1.0 - 1e-16
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 2.0 * math.atanh(mid) < rho:
            lo = mid
        else:
            hi = mid
    assert am.ball_radius(1.0) == pytest.approx(0.5 * (lo + hi), abs=1e-14)


def test_signed_distance_basics():
    plane = am.Hyperplane.through_origin([1.0, 0, 0])
    assert am.signed_distance_to_hyperplane(_pt(0, 0.3, 0.1), plane) == pytest.approx(0.0, abs=1e-14)
    rho = 1.3
    p = _pt(math.tanh(rho / 2), 0, 0)
    assert am.signed_distance_to_hyperplane(p, plane) == pytest.approx(rho, abs=1e-13)
    assert am.signed_distance_to_hyperplane(
        _pt(-math.tanh(rho / 2), 0, 0), plane
    ) == pytest.approx(-rho, abs=1e-13)


def _hyp_dist(x, y):
    dx = np.asarray(x) - np.asarray(y)
    num = 2.0 * float(np.dot(dx, dx))
    den = (1.0 - float(np.dot(x, x))) * (1.0 - float(np.dot(y, y)))
    return math.acosh(1.0 + num / den)


def test_signed_distance_matches_minimization(rng):
    opt = pytest.importorskip("scipy.optimize")
    for _ in range(6):
        nvec = rng.normal(size=N)
        nvec /= np.linalg.norm(nvec)
        plane = am.Hyperplane.through_origin(nvec)
        # orthonormal in-plane directions
        b = np.eye(N) - np.outer(nvec, nvec)
        basis = np.linalg.qr(b)[0][:, :2]
        x = rng.uniform(-0.6, 0.6, size=N)

        def dist_to_plane_point(params, _x=x, _b=basis):
            radius, phi = params
            y = math.tanh(radius / 2.0) * (
                math.cos(phi) * _b[:, 0] + math.sin(phi) * _b[:, 1]
            )
            return _hyp_dist(_x, y)

        best = min(
            opt.minimize(dist_to_plane_point, [0.5, phi0], method="Nelder-Mead",
                         options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000}).fun
            for phi0 in (0.0, 2.0, 4.0)
        )
        sd = am.signed_distance_to_hyperplane(am.BallPoint(x), plane)
        assert abs(sd) == pytest.approx(best, abs=1e-6)


def test_translation_examples():
    line = am.GeodesicLine([-1.0, 0, 0], [1.0, 0, 0])
    p = _pt(0.2, -0.1, 0.3, t=0.7)
    q = am.translate_along_geodesic(p, line, 0.0)
    np.testing.assert_allclose(q.x, p.x, atol=1e-15)
    assert q.t == p.t
    origin = _pt(0, 0, 0)
    s = 1.7
    q = am.translate_along_geodesic(origin, line, s)
    np.testing.assert_allclose(q.x, [math.tanh(s / 2), 0, 0], atol=1e-15)


def test_translation_composition(rng):
    for _ in range(20):
        u = rng.normal(size=N)
        u /= np.linalg.norm(u)
        v = rng.normal(size=N)
        v /= np.linalg.norm(v)
        if np.linalg.norm(u - v) < 1e-6:
            continue
        line = am.GeodesicLine(u, v)
        p = am.BallPoint(rng.uniform(-0.5, 0.5, size=N), float(rng.normal()))
        s1, s2 = rng.uniform(-1.5, 1.5, size=2)
        q1 = am.translate_along_geodesic(
            am.translate_along_geodesic(p, line, s1), line, s2
        )
        q2 = am.translate_along_geodesic(p, line, s1 + s2)
        np.testing.assert_allclose(q1.x, q2.x, atol=1e-12)


def test_translation_is_isometry_via_frame_differences(rng):
    line = am.GeodesicLine([-1.0, 0, 0], [0.0, 1.0, 0])
    s = 0.8
    h = 1e-4

    def push(x):
        return am.translate_along_geodesic(am.BallPoint(x), line, s).x

    for _ in range(20):
        x = rng.uniform(-0.5, 0.5, size=N)
        p = am.BallPoint(x)
        q = am.BallPoint(push(x))
        dirs = rng.normal(size=(2, N))
        imgs = []
        for v in dirs:
            imgs.append(
                (-push(x + 2 * h * v) + 8 * push(x + h * v)
                 - 8 * push(x - h * v) + push(x - 2 * h * v)) / (12 * h)
            )
        for i in range(2):
            for j in range(2):
                vi = am.AmbientVector(p, np.concatenate([dirs[i], [0.0]]))
                vj = am.AmbientVector(p, np.concatenate([dirs[j], [0.0]]))
                wi = am.AmbientVector(q, np.concatenate([imgs[i], [0.0]]))
                wj = am.AmbientVector(q, np.concatenate([imgs[j], [0.0]]))
                lhs = am.ambient_inner(p, vi, vj)
                rhs = am.ambient_inner(q, wi, wj)
                assert rhs == pytest.approx(lhs, rel=1e-10, abs=1e-10)


def test_signed_distance_equivariance():
    # translating point and hyperplane together along the orthogonal axis
    plane = am.Hyperplane.through_origin([1.0, 0, 0])
    line = am.GeodesicLine([-1.0, 0, 0], [1.0, 0, 0])
    p = _pt(0.3, 0.2, -0.4)
    base = am.signed_distance_to_hyperplane(p, plane)
    for s in (0.4, 1.1, -0.7):
        moved = am.translate_along_geodesic(p, line, s)
        plane_s = am.Hyperplane.general(
            np.array([1.0 / math.tanh(s), 0, 0]), 1.0 / abs(math.sinh(s))
        )
        sd = am.signed_distance_to_hyperplane(moved, plane_s)
        orient = 1.0 if s > 0 else -1.0  # the pole flips with the side
        assert orient * sd == pytest.approx(base, abs=1e-10)


# ---------------------------------------------------------------------------
# cylinders, caps, halfspace region


def test_rho_cylinder_membership():
    plane = am.Hyperplane.through_origin([1.0, 0, 0])
    on_plane = _pt(0, 0.2, 0.0, t=5.0)
    assert am.rho_cylinder_contains(plane, 0.3, on_plane)
    boundary = _pt(math.tanh(0.45), 0, 0)
    rho = am.signed_distance_to_hyperplane(boundary, plane)
    # a point at distance exactly rho sits on the (closed) complement
    assert not am.rho_cylinder_contains(plane, rho, boundary)
    far = _pt(math.tanh(rho), 0, 0)
    assert not am.rho_cylinder_contains(plane, rho, far)


def test_admissible_check_examples():
    plane = am.Hyperplane.through_origin([1.0, 0, 0])
    assert am.admissible_check([plane], [plane.cap(+1)])

    s0 = 0.9
    c = 1.0 / math.tanh(s0)
    r = 1.0 / math.sinh(s0)
    gp = am.Hyperplane.general(np.array([c, 0, 0]), r)
    gp_far = am.Hyperplane.general(np.array([1.0 / math.tanh(2.0), 0, 0]),
                                   1.0 / math.sinh(2.0))
    # nested caps on the same side overlap
    assert not am.admissible_check([gp, gp_far], [gp.cap(+1), gp_far.cap(+1)])

    # antipodal caps of angular radius pi/8
    ang = math.pi / 8.0
    p1 = am.Hyperplane.general(np.array([1.0 / math.cos(ang), 0, 0]), math.tan(ang))
    p2 = am.Hyperplane.general(np.array([-1.0 / math.cos(ang), 0, 0]), math.tan(ang))
    caps = [p1.cap(+1), p2.cap(+1)]
    assert am.admissible_check([p1, p2], caps)
    # spherical-cap oracle: disjoint iff center separation exceeds angle sum
    sep = math.acos(float(np.dot(caps[0].center, caps[1].center)))
    assert sep >= caps[0].angle + caps[1].angle


def test_cap_mismatch_raises():
    plane = am.Hyperplane.through_origin([1.0, 0, 0])
    bad = am.BoundaryCap([0.0, 1.0, 0.0], 0.4)
    with pytest.raises(DomainError):
        am.admissible_check([plane], [bad])


def test_region_membership_single_plane():
    plane = am.Hyperplane.through_origin([1.0, 0, 0])
    coll = am.AdmissibleCollection((plane,), (plane.cap(+1),))
    assert am.region_P_contains(coll, _pt(-0.4, 0.1, 0.0))
    assert not am.region_P_contains(coll, _pt(0.4, 0.1, 0.0))
    assert not am.region_P_contains(coll, _pt(0, 0.1, 0.0))  # open region


def test_region_membership_two_planes():
    s0 = 1.0
    c = 1.0 / math.tanh(s0)
    r = 1.0 / math.sinh(s0)
    p1 = am.Hyperplane.general(np.array([c, 0, 0]), r)
    p2 = am.Hyperplane.general(np.array([-c, 0, 0]), r)
    coll = am.AdmissibleCollection((p1, p2), (p1.cap(+1), p2.cap(+1)))
    assert am.region_P_contains(coll, _pt(0, 0, 0))
    # oracle: explicit signed-distance signs
    probe = _pt(0.3, 0.2, 0.0)
    sd1 = am.signed_distance_to_hyperplane(probe, p1)
    sd2 = am.signed_distance_to_hyperplane(probe, p2)
    assert am.region_P_contains(coll, probe) == (sd1 < 0 and sd2 < 0)
    assert not am.region_P_contains(coll, _pt(0.9, 0, 0))


def test_overlapping_collection_rejected():
    plane = am.Hyperplane.through_origin([1.0, 0, 0])
    tilted = am.Hyperplane.through_origin([math.cos(0.3), math.sin(0.3), 0.0])
    with pytest.raises(DomainError):
        am.AdmissibleCollection((plane, tilted), (plane.cap(+1), tilted.cap(+1)))


def test_boundary_point_tags():
    bp = am.BoundaryPoint([1.0, 0, 0], 2.5)
    assert bp.tag is am.HeightTag.FINITE
    top = am.BoundaryPoint.top([0.0, 1.0, 0.0])
    assert top.tag is am.HeightTag.PLUS_INFINITY
    with pytest.raises(DomainError):
        am.BoundaryPoint([1.0, 0, 0], math.inf)
    with pytest.raises(DomainError):
        am.BoundaryPoint([2.0, 0, 0], 0.0)


def test_geodesic_line_validation():
    with pytest.raises(DomainError):
        am.GeodesicLine([1.0, 0, 0], [1.0, 0, 0])


def test_vertical_hyperplane_wrapper():
    plane = am.Hyperplane.through_origin([0.0, 1.0, 0.0])
    vert = am.VerticalHyperplane(plane)
    assert vert.base is plane


def test_translation_dimension_mismatch():
    line = am.GeodesicLine([-1.0, 0.0], [1.0, 0.0])
    with pytest.raises(DomainError):
        am.translate_along_geodesic(_pt(0.1, 0.2, 0.3), line, 1.0)


def test_hyperplane_constructor_guards():
    with pytest.raises(DomainError):
        am.Hyperplane.general([1.0, 0.0, 0.0], 0.5)  # not orthogonal to the sphere
    with pytest.raises(DomainError):
        am.Hyperplane.general([2.0, 0.0, 0.0], -1.0)
    with pytest.raises(DomainError):
        am.Hyperplane.through_origin([0.5, 0.0, 0.0])
    with pytest.raises(DomainError):
        am.Hyperplane(normal=None, center=None, radius=None)
