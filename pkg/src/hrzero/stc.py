"""Weighted curvature norms on discretized invariant hypersurfaces.

The hypersurface is a warped product over the reference hyperplane: in
profile/orbit coordinates (rho, eta) the induced metric is

    ds^2 = (1 + slope^2) drho^2 + cosh(rho)^2 deta^2,

with eta the intrinsic polar radius inside the orbit factor, so a 2-d
(rho x eta) grid carries the full n-dimensional geometry: cell measures pick
up the equidistant factor cosh(rho)^(n-1) and the orbit shell factor
omega_{n-2} sinh(eta)^(n-2) (for n >= 3; for n = 2 eta is a signed
coordinate).  Curvature fields depend on rho alone, so their intrinsic
gradient |d|A|/drho| / sqrt(1 + slope^2) is available in closed form.

Intrinsic distances xi are shortest paths on the grid graph (axis plus
diagonal edges); the discretization error this introduces is measured by the
tests, not hidden.  Weighted norms are plain sums in vertex order, hence
deterministic.
"""

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from ._backend import _families as fam
from .curvature import (principal_curvatures, shape_norm,
                        shape_norm_derivative)
from .errors import DomainError
from .profile import (Regime, default_grid, lambda_ddot, lambda_dot,
                      sample_profile, waist_radius)
from .quadrature import (DEFAULT_CONFIG, QuadratureConfig, integrate_family,
                         require_converged)

_GL4_NODES = (
    -0.8611363115940526,
    -0.3399810435848563,
    0.3399810435848563,
    0.8611363115940526,
)
_GL4_WEIGHTS = (
    0.34785484513745385,
    0.6521451548625461,
    0.6521451548625461,
    0.34785484513745385,
)


def sphere_area(k: int) -> float:
    """Surface measure of the unit k-sphere."""
    if k < 0:
        raise DomainError("sphere dimension must be nonnegative")
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


@dataclass(frozen=True)
class FermiMesh:
    """Discretized invariant hypersurface with fields for weighted norms.

    Vertex (i, j) has index i * len(eta) + j.  `xi` is the graph distance
    from `base_index` (minimal rho, orbit coordinate 0); `area_weight` is the
    measure of the full n-dimensional hypersurface piece.
    """

    n: int
    r: int
    d: float
    regime: Regime
    rho: np.ndarray            # profile grid (n_rho,)
    eta: np.ndarray            # orbit grid (n_eta,)
    x: np.ndarray              # ball coordinates per vertex (nv, n)
    t: np.ndarray              # heights per vertex (nv,)
    shape_norm: np.ndarray     # |A| per vertex (nv,)
    grad_shape_norm: np.ndarray
    xi: np.ndarray             # intrinsic distance from the base vertex
    area_weight: np.ndarray    # cell measure per vertex
    edges_u: np.ndarray
    edges_v: np.ndarray
    edge_length: np.ndarray
    base_index: int
    orbit_radius: float

    def __post_init__(self):
        for name in ("rho", "eta", "x", "t", "shape_norm", "grad_shape_norm",
                     "xi", "area_weight", "edges_u", "edges_v", "edge_length"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def vertex_count(self) -> int:
        return self.t.shape[0]

    def vertex_index(self, i: int, j: int) -> int:
        return i * self.eta.shape[0] + j


def _csr_from_edges(nv, eu, ev, w):
    u2 = np.concatenate([eu, ev]).astype(np.int32)
    v2 = np.concatenate([ev, eu]).astype(np.int32)
    w2 = np.concatenate([w, w])
    order = np.lexsort((v2, u2))
    u2, v2, w2 = u2[order], v2[order], w2[order]
    indptr = np.zeros(nv + 1, dtype=np.int32)
    np.add.at(indptr, u2 + 1, 1)
    indptr = np.cumsum(indptr).astype(np.int32)
    return indptr, np.ascontiguousarray(v2), np.ascontiguousarray(w2)


def mesh_distances(mesh: FermiMesh, source: int) -> np.ndarray:
    """Graph shortest-path distances from one vertex to all others."""
    indptr, idx, w = _csr_from_edges(
        mesh.vertex_count, mesh.edges_u, mesh.edges_v, mesh.edge_length
    )
    return _backend.dijkstra(mesh.vertex_count, indptr, idx, w, int(source))


def _metric_E(n, r, d, rho, regime):
    """1 + slope^2 on the profile grid."""
    rho = np.asarray(rho, dtype=np.float64)
    if regime in (Regime.SLICE, Regime.TILTED_GRAPH):
        return np.full(rho.shape, 1.0 + d * d)
    q = (n - r) / r
    den = np.cosh(rho) ** (2.0 * q) - d * d
    if np.any(den <= 0.0):
        raise DomainError("rho grid leaves the member's domain")
    return 1.0 + d * d / den


def _segment_lengths(n, r, d, regime, rho_a, eta_a, rho_b, eta_b):
    """4-point Gauss-Legendre lengths of straight coordinate segments under
    ds^2 = E(rho) drho^2 + cosh(rho)^2 deta^2 (vectorized)."""
    drho = rho_b - rho_a
    deta = eta_b - eta_a
    total = np.zeros(np.broadcast(rho_a, eta_a).shape)
    for node, wgt in zip(_GL4_NODES, _GL4_WEIGHTS):
        s = 0.5 * (node + 1.0)
        rho_s = rho_a + s * drho
        E = _metric_E(n, r, d, rho_s, regime)
        G = np.cosh(rho_s) ** 2
        total = total + wgt * np.sqrt(E * drho**2 + G * deta**2)
    return 0.5 * total


def _orbit_cell_measures(n, eta):
    """Cell measures of the orbit grid: interval lengths for n = 2, polar
    shells omega_{n-2} * int sinh^{n-2} over half-neighbor cells otherwise."""
    m = eta.shape[0]
    bounds = np.empty(m + 1)
    bounds[1:-1] = 0.5 * (eta[1:] + eta[:-1])
    bounds[0] = eta[0]
    bounds[-1] = eta[-1]
    if n == 2:
        return bounds[1:] - bounds[:-1]
    area = sphere_area(n - 2)
    lo, hi = bounds[:-1], bounds[1:]
    total = np.zeros(m)
    for node, wgt in zip(_GL4_NODES, _GL4_WEIGHTS):
        s = lo + 0.5 * (node + 1.0) * (hi - lo)
        total = total + wgt * np.sinh(s) ** (n - 2)
    return area * 0.5 * (hi - lo) * total


def _profile_ball_points(rho, lam, eta, n):
    """Ball coordinates of the (rho x eta) vertices: profile ray along the
    first axis, orbit positions by translation along the second axis (one
    representative orbit direction; all fields are orbit-symmetric)."""
    from .ambient import GeodesicLine, _translate_many

    n_rho = rho.shape[0]
    n_eta = eta.shape[0]
    base = np.zeros((n_rho, n))
    base[:, 0] = np.tanh(0.5 * rho)
    e2 = np.zeros(n)
    e2[1] = 1.0
    line = GeodesicLine(-e2, e2)
    xs = np.empty((n_rho * n_eta, n))
    for j, etaj in enumerate(eta):
        xs[j::n_eta] = _translate_many(base, line, float(etaj))
    ts = np.repeat(lam, n_eta)
    return xs, ts


def _tilted_gradient(n, d, rho):
    # |A| = sqrt(n-1) d tanh(rho) / sqrt(1+d^2); intrinsic gradient divides
    # the rho-derivative by the profile speed sqrt(1+d^2)
    sech2 = 1.0 / np.cosh(rho) ** 2
    return math.sqrt(n - 1) * d * sech2 / (1.0 + d * d)


def _rho_interval_lengths(n, r, d, regime, rho, cfg):
    """Arclengths of consecutive profile intervals, waist-regularized."""
    lo = rho[:-1]
    hi = rho[1:]
    lengths = _segment_lengths(n, r, d, regime, lo, np.zeros_like(lo), hi,
                               np.zeros_like(hi))
    if regime is Regime.TWO_SHEETS:
        a = waist_radius(n, r, d)
        q = (n - r) / r
        params = fam.arclen_u_params(q, d, a)
        near = np.where(0.5 * (lo + hi) - a < 0.05 * (1.0 + a))[0]
        for i in near:
            res = integrate_family(
                fam.ARCLEN_U, params,
                math.sqrt(lo[i] - a), math.sqrt(hi[i] - a), cfg,
            )
            lengths[i] = require_converged(res, "waist-adjacent edge length")
    return lengths


def build_fermi_mesh(n: int, r: int, d: float, rho_range, orbit_radius: float,
                     resolution, cfg: QuadratureConfig = DEFAULT_CONFIG) -> FermiMesh:
    """Mesh one invariant hypersurface piece on a (rho x orbit) grid.

    rho_range = (rho_min, rho_max) inside the member's domain; orbit
    truncation at intrinsic polar radius `orbit_radius`; resolution =
    (n_rho, n_orbit).  The norm estimators built on top are explicitly
    truncated-norm estimators: the truncation is part of the mesh.
    """
    n = int(n)
    r = int(r)
    d = float(d)
    rho_min, rho_max = (float(rho_range[0]), float(rho_range[1]))
    n_rho, n_eta = (int(resolution[0]), int(resolution[1]))
    if n_rho < 3 or n_eta < 3:
        raise DomainError("resolution too small to mesh (need >= 3 each)")
    if orbit_radius <= 0.0:
        raise DomainError("orbit_radius must be positive")
    if rho_min >= rho_max:
        raise DomainError("empty rho range")

    curve = sample_profile(
        n, r, d, default_grid(n, r, d, rho_max, n_rho, rho_min=rho_min), cfg
    )
    regime = curve.regime
    rho = curve.rho
    n_rho = rho.shape[0]
    if n == 2:
        if n_eta % 2 == 0:
            n_eta += 1  # keep orbit coordinate 0 on the grid
        eta = np.linspace(-orbit_radius, orbit_radius, n_eta)
    else:
        eta = np.linspace(0.0, orbit_radius, n_eta)

    E = _metric_E(n, r, d, rho, regime)
    k1, k2 = principal_curvatures(rho, curve.lam_dot, curve.lam_ddot)
    A_rho = np.atleast_1d(shape_norm(n, k1, k2))
    if regime is Regime.SLICE:
        gA_rho = np.zeros_like(rho)
    elif regime is Regime.TILTED_GRAPH:
        gA_rho = np.abs(_tilted_gradient(n, d, rho))
    else:
        gA_rho = np.abs(shape_norm_derivative(n, r, d, rho)) / np.sqrt(E)

    bounds = np.empty(n_rho + 1)
    bounds[1:-1] = 0.5 * (rho[1:] + rho[:-1])
    bounds[0] = rho[0]
    bounds[-1] = rho[-1]
    w_rho = np.cosh(rho) ** (n - 1) * np.sqrt(E) * (bounds[1:] - bounds[:-1])
    w_eta = _orbit_cell_measures(n, eta)
    area_weight = np.repeat(w_rho, n_eta) * np.tile(w_eta, n_rho)

    xs, ts = _profile_ball_points(rho, curve.lam, eta, n)

    # edge tables: profile edges share lengths across orbit columns; orbit
    # edges at fixed rho are exact (the warp factor is constant along them)
    len_rho = _rho_interval_lengths(n, r, d, regime, rho, cfg)
    deta = np.diff(eta)

    idx = np.arange(n_rho * n_eta).reshape(n_rho, n_eta)
    blocks = []

    u = idx[:-1, :].ravel()
    v = idx[1:, :].ravel()
    w = np.repeat(len_rho, n_eta)
    blocks.append((u, v, w))

    u = idx[:, :-1].ravel()
    v = idx[:, 1:].ravel()
    w = (np.cosh(rho)[:, None] * deta[None, :]).ravel()
    blocks.append((u, v, w))

    diag_lo = np.repeat(rho[:-1], n_eta - 1)
    diag_hi = np.repeat(rho[1:], n_eta - 1)
    eta_lo = np.tile(eta[:-1], n_rho - 1)
    eta_hi = np.tile(eta[1:], n_rho - 1)
    diag_len = _segment_lengths(n, r, d, regime, diag_lo, eta_lo, diag_hi, eta_hi)
    u = idx[:-1, :-1].ravel()
    v = idx[1:, 1:].ravel()
    blocks.append((u, v, diag_len))
    u = idx[:-1, 1:].ravel()
    v = idx[1:, :-1].ravel()
    blocks.append((u, v, diag_len))

    edges_u = np.concatenate([b[0] for b in blocks]).astype(np.int64)
    edges_v = np.concatenate([b[1] for b in blocks]).astype(np.int64)
    edge_length = np.concatenate([b[2] for b in blocks])

    base_index = 0 if n >= 3 else (n_eta // 2)
    mesh = FermiMesh(
        n=n, r=r, d=d, regime=regime, rho=rho, eta=eta, x=xs, t=ts,
        shape_norm=np.repeat(A_rho, n_eta),
        grad_shape_norm=np.repeat(gA_rho, n_eta),
        xi=np.zeros(n_rho * n_eta),
        area_weight=area_weight, edges_u=edges_u, edges_v=edges_v,
        edge_length=edge_length,
        base_index=int(base_index), orbit_radius=float(orbit_radius),
    )
    xi = mesh_distances(mesh, mesh.base_index)
    return replace(mesh, xi=xi)


@dataclass(frozen=True)
class WeightedNormEstimate:
    q: float
    s: float
    value: float
    truncation_R: float
    tail_flag: bool  # True when the outer distance shells are not settling


def weighted_Lq_norm(mesh: FermiMesh, field, q: float, s: float) -> float:
    """Discrete weighted norm (sum |u|^q xi^(-q s - n) cell)^(1/q).

    The base vertex (xi = 0) contributes nothing when the distance exponent
    is positive or the field vanishes there; otherwise the norm is undefined
    and a DomainError is raised.
    """
    q = float(q)
    if q < 1.0:
        raise DomainError("need q >= 1")
    u = np.asarray(field, dtype=np.float64)
    if u.shape != mesh.xi.shape:
        raise DomainError("field must be a per-vertex array")
    expo = -q * float(s) - mesh.n
    xi = mesh.xi
    at_base = xi == 0.0
    if expo <= 0.0 and bool(np.any(at_base & (u != 0.0))):
        raise DomainError(
            "field does not vanish at the base vertex and the distance "
            "weight is singular there"
        )
    ok = ~at_base
    total = float(np.sum(np.abs(u[ok]) ** q * xi[ok] ** expo * mesh.area_weight[ok]))
    return total ** (1.0 / q)


def weighted_sobolev_norm(mesh: FermiMesh, field, grad_field, q: float,
                          s: float) -> float:
    """First-order weighted norm: field at weight s, gradient at weight s-1."""
    return weighted_Lq_norm(mesh, field, q, s) + weighted_Lq_norm(
        mesh, grad_field, q, float(s) - 1.0
    )


def _restricted_value(mesh, q, cap):
    sel = mesh.xi <= cap
    xi = mesh.xi[sel]
    w = mesh.area_weight[sel]
    ok = xi > 0.0
    t1 = np.sum(np.abs(mesh.shape_norm[sel][ok]) ** q * xi[ok] ** (q - mesh.n) * w[ok])
    t2 = np.sum(
        np.abs(mesh.grad_shape_norm[sel][ok]) ** q
        * xi[ok] ** (2.0 * q - mesh.n)
        * w[ok]
    )
    return t1 ** (1.0 / q) + t2 ** (1.0 / q)


def strong_total_curvature(mesh: FermiMesh, q: float) -> WeightedNormEstimate:
    """Weight -1 first-order norm of |A| on the truncated mesh, q > n.

    `truncation_R` records how far the mesh reaches; `tail_flag` is set when
    the outermost distance shells still contribute increasing increments.
    """
    q = float(q)
    if q <= mesh.n:
        raise DomainError(f"need q > n = {mesh.n}")
    value = weighted_sobolev_norm(mesh, mesh.shape_norm, mesh.grad_shape_norm,
                                  q, -1.0)
    R = float(np.max(mesh.xi[np.isfinite(mesh.xi)]))
    v1 = _restricted_value(mesh, q, 0.5 * R)
    v2 = _restricted_value(mesh, q, 0.75 * R)
    v3 = _restricted_value(mesh, q, R)
    tail_flag = bool((v3 - v2) > (v2 - v1) and (v3 - v2) > 1e-30)
    return WeightedNormEstimate(q=q, s=-1.0, value=value, truncation_R=R,
                                tail_flag=tail_flag)


def truncation_profile(mesh: FermiMesh, q: float, caps) -> list:
    """Truncated-norm values at increasing distance caps (nondecreasing)."""
    q = float(q)
    if q <= mesh.n:
        raise DomainError(f"need q > n = {mesh.n}")
    return [(float(cap), _restricted_value(mesh, q, float(cap))) for cap in caps]


def dilation_transform(mesh: FermiMesh, c: float) -> FermiMesh:
    """Rescale the intrinsic data by a dilation factor c > 0.

    Lengths scale by c, measures by c^n, curvature by 1/c and its gradient
    by 1/c^2; the weighted curvature norm is exactly invariant.  Ambient
    coordinates are kept for reference only.
    """
    c = float(c)
    if c <= 0.0:
        raise DomainError("dilation factor must be positive")
    return replace(
        mesh,
        xi=mesh.xi * c,
        edge_length=mesh.edge_length * c,
        area_weight=mesh.area_weight * c**mesh.n,
        shape_norm=mesh.shape_norm / c,
        grad_shape_norm=mesh.grad_shape_norm / c**2,
    )


def profile_arclength(n: int, r: int, d: float, rho_grid,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Cumulative intrinsic arclength int sqrt(1 + slope^2) drho along the
    profile, from the first grid point (waist-regularized for d > 1)."""
    grid = np.asarray(rho_grid, dtype=np.float64)
    if r == n:
        return math.sqrt(1.0 + d * d) * (grid - grid[0])
    q = (n - r) / r
    a = waist_radius(n, r, d) if d > 1.0 else None
    params = fam.arclen_params(q, d)
    params_u = fam.arclen_u_params(q, d, a) if a is not None else None
    out = np.zeros_like(grid)
    for i in range(1, grid.shape[0]):
        lo, hi = grid[i - 1], grid[i]
        if a is not None and 0.5 * (lo + hi) - a < 0.05 * (1.0 + a):
            res = integrate_family(
                fam.ARCLEN_U, params_u, math.sqrt(lo - a), math.sqrt(hi - a), cfg
            )
        else:
            res = integrate_family(fam.ARCLEN, params, lo, hi, cfg)
        out[i] = out[i - 1] + require_converged(res, "profile arclength")
    return out


def decay_check(n: int, r: int, d: float, R_grid,
                cfg: QuadratureConfig = DEFAULT_CONFIG) -> list:
    """(R, R^2 * sup of |A|^2 at intrinsic radius >= R) along the profile.

    The supremum runs over profile samples whose arclength from the
    innermost sample is at least R; the two-sheet members decay to zero.
    A totally geodesic slice reports zeros.
    """
    Rs = [float(R) for R in R_grid]
    if any(b <= a for a, b in zip(Rs, Rs[1:])):
        raise DomainError("R grid must be strictly increasing")
    if r == n and d == 0.0:
        return [(R, 0.0) for R in Rs]
    if d <= 1.0:
        raise DomainError("decay profiling targets the two-sheet members")
    a = waist_radius(n, r, d)
    rho_max = a + max(Rs) + 4.0
    grid = default_grid(n, r, d, rho_max, 1024)
    s = profile_arclength(n, r, d, grid, cfg)
    A = shape_norm(
        n, *principal_curvatures(grid, lambda_dot(n, r, d, grid),
                                 lambda_ddot(n, r, d, grid))
    )
    A2 = np.asarray(A) ** 2
    out = []
    for R in Rs:
        sel = s >= R
        if not np.any(sel):
            raise DomainError(f"profile does not reach intrinsic radius {R}")
        out.append((R, float(R * R * np.max(A2[sel]))))
    return out


# ---------------------------------------------------------------------------
# mesh dump format: vertex table plus edge list


def dump_mesh_csv(mesh: FermiMesh, prefix: str) -> tuple[str, str]:
    """Write <prefix>.vertices.csv and <prefix>.edges.csv; returns the paths."""
    vpath = f"{prefix}.vertices.csv"
    epath = f"{prefix}.edges.csv"
    meta = (
        f"# hrzero-mesh n={mesh.n} r={mesh.r} d={mesh.d:.17g} "
        f"regime={mesh.regime.value} base={mesh.base_index} "
        f"orbit_radius={mesh.orbit_radius:.17g} "
        f"n_rho={mesh.rho.shape[0]} n_eta={mesh.eta.shape[0]}"
    )
    n_eta = mesh.eta.shape[0]
    with open(vpath, "w", newline="") as fh:
        fh.write(meta + "\n")
        writer = csv.writer(fh)
        writer.writerow(
            ["rho", "orbit"]
            + [f"x_{k}" for k in range(1, mesh.n + 1)]
            + ["t", "shape_norm", "grad_shape_norm", "xi", "weight"]
        )
        for idx in range(mesh.vertex_count):
            i, j = divmod(idx, n_eta)
            row = [mesh.rho[i], mesh.eta[j], *mesh.x[idx], mesh.t[idx],
                   mesh.shape_norm[idx], mesh.grad_shape_norm[idx],
                   mesh.xi[idx], mesh.area_weight[idx]]
            writer.writerow([f"{v:.17g}" for v in row])
    with open(epath, "w", newline="") as fh:
        fh.write(meta + "\n")
        writer = csv.writer(fh)
        writer.writerow(["u", "v", "length"])
        for k in range(mesh.edges_u.shape[0]):
            writer.writerow(
                [int(mesh.edges_u[k]), int(mesh.edges_v[k]),
                 f"{mesh.edge_length[k]:.17g}"]
            )
    return vpath, epath


def _parse_meta(line: str) -> dict:
    if not line.startswith("# hrzero-mesh "):
        raise DomainError("not a mesh dump (missing metadata line)")
    out = {}
    for tok in line[len("# hrzero-mesh "):].split():
        key, val = tok.split("=")
        out[key] = val
    return out


def load_mesh_csv(prefix: str) -> FermiMesh:
    """Reload a mesh dump written by dump_mesh_csv."""
    vpath = f"{prefix}.vertices.csv"
    epath = f"{prefix}.edges.csv"
    with open(vpath, newline="") as fh:
        meta = _parse_meta(fh.readline().strip())
        rows = list(csv.reader(fh))[1:]
    n = int(meta["n"])
    data = np.array([[float(v) for v in row] for row in rows])
    with open(epath, newline="") as fh:
        _parse_meta(fh.readline().strip())
        erows = list(csv.reader(fh))[1:]
    eu = np.array([int(row[0]) for row in erows], dtype=np.int64)
    ev = np.array([int(row[1]) for row in erows], dtype=np.int64)
    el = np.array([float(row[2]) for row in erows])
    n_eta = int(meta["n_eta"])
    return FermiMesh(
        n=n, r=int(meta["r"]), d=float(meta["d"]),
        regime=Regime(meta["regime"]),
        rho=data[::n_eta, 0], eta=data[:n_eta, 1],
        x=data[:, 2:2 + n], t=data[:, 2 + n],
        shape_norm=data[:, 3 + n], grad_shape_norm=data[:, 4 + n],
        xi=data[:, 5 + n], area_weight=data[:, 6 + n],
        edges_u=eu, edges_v=ev, edge_length=el,
        base_index=int(meta["base"]), orbit_radius=float(meta["orbit_radius"]),
    )
