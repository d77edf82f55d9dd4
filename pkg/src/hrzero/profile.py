"""Generating curves of the translation-invariant zero-H_r family.

Every member is determined by (n, r, d): the conserved quantity of the
generating ODE is cosh(rho)^(n-r) * (slope^2/(1+slope^2))^(r/2) = d^r, which
gives the slope in closed form and the curve itself as a one-dimensional
integral.  Five qualitative shapes occur:

  r = n, d = 0      horizontal slice (totally geodesic)
  r = n, d > 0      tilted complete graph, lambda = d*rho + c
  r < n, d > 1      two symmetric sheets of finite height over rho >= a,
                    a = acosh(d^(r/(n-r)))
  r < n, d = 1      graph over a halfspace, log-divergent at rho -> 0
  r < n, 0 < d < 1  entire bounded graph, odd in rho

The positive slope branch is constructed; reflections and vertical shifts
are applied at assembly time through `branch_sign` and `vertical_offset`.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._backend import _families as fam
from .errors import DomainError
from .quadrature import (DEFAULT_CONFIG, QuadratureConfig, integrate_family,
                         require_converged)


class Regime(Enum):
    SLICE = "slice"
    TILTED_GRAPH = "tilted_graph"
    TWO_SHEETS = "two_sheets"
    HALF_GRAPH = "half_graph"
    ENTIRE_GRAPH = "entire_graph"


def classify_regime(n: int, r: int, d: float) -> Regime:
    """Qualitative shape of the (n, r, d) member."""
    n = int(n)
    r = int(r)
    d = float(d)
    if n < 2:
        raise DomainError("need ambient hyperbolic dimension n >= 2")
    if not 1 <= r <= n:
        raise DomainError(f"curvature order r must satisfy 1 <= r <= n, got {r}")
    if d < 0.0:
        raise DomainError("family parameter d must be nonnegative")
    if r == n:
        return Regime.SLICE if d == 0.0 else Regime.TILTED_GRAPH
    if d == 0.0:
        raise DomainError("d = 0 is only admissible when r = n")
    if d > 1.0:
        return Regime.TWO_SHEETS
    if d == 1.0:
        return Regime.HALF_GRAPH
    return Regime.ENTIRE_GRAPH


def exponent_q(n: int, r: int) -> float:
    """q = (n - r)/r, the exponent governing every r < n formula."""
    if r >= n:
        raise DomainError("q is only defined for r < n")
    return (n - r) / r


def waist_radius(n: int, r: int, d: float) -> float:
    """Distance a of the two-sheet waist from the reference hyperplane.

    Solves cosh(a)^(n-r) = d^r, i.e. a = acosh(d^(r/(n-r))).
    """
    if d <= 1.0:
        raise DomainError("the waist exists only for d > 1")
    return math.acosh(d ** (r / (n - r)))


def lambda_dot(n: int, r: int, d: float, rho):
    """Slope of the generating curve: d / sqrt(cosh(rho)^2q - d^2).

    Defined where cosh(rho)^2q > d^2 (all rho for d < 1, rho > a otherwise);
    the positive square root is taken.
    """
    q = exponent_q(n, r)
    d = float(d)
    if d <= 0.0:
        raise DomainError("d must be positive for r < n")
    rho_arr = np.asarray(rho, dtype=np.float64)
    den = np.cosh(rho_arr) ** (2.0 * q) - d * d
    if np.any(den <= 0.0):
        raise DomainError(
            "slope undefined: cosh(rho)^2q <= d^2 "
            "(rho must exceed the waist radius)"
        )
    out = d / np.sqrt(den)
    return float(out) if np.isscalar(rho) or rho_arr.ndim == 0 else out


def lambda_ddot(n: int, r: int, d: float, rho):
    """Second derivative of the generating curve on the positive branch:

    -(q/d^2) * slope^3 * tanh(rho) * cosh(rho)^2q, nonpositive for rho >= 0.
    """
    q = exponent_q(n, r)
    ld = lambda_dot(n, r, d, rho)
    rho_arr = np.asarray(rho, dtype=np.float64)
    out = -(q / (d * d)) * np.asarray(ld) ** 3 * np.tanh(rho_arr) * np.cosh(
        rho_arr
    ) ** (2.0 * q)
    return float(out) if np.isscalar(rho) or rho_arr.ndim == 0 else out


def first_integral(n: int, r: int, rho, lam_dot):
    """Conserved quantity cosh(rho)^(n-r) * (slope^2/(1+slope^2))^(r/2).

    Equals d^r at every point of a valid generating curve.
    """
    if r >= n:
        raise DomainError("the first integral is for r < n")
    rho_arr = np.asarray(rho, dtype=np.float64)
    ld = np.asarray(lam_dot, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        ratio = np.where(np.isinf(ld), 1.0, ld * ld / (1.0 + ld * ld))
    out = np.cosh(rho_arr) ** (n - r) * ratio ** (0.5 * r)
    return float(out) if out.ndim == 0 else out


_SPLIT_V = 2.0  # endpoint substitution is used on [1, 2] of the v-integral


def profile_two_sheets(n: int, r: int, d: float, rho: float,
                       cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Height lambda(rho) of the upper sheet, vanishing at the waist.

    Computed in the v = cosh(xi)/cosh(a) variable:
    lambda = cosh(a) * int_1^{cosh(rho)/cosh(a)}
             dv / sqrt((v^2q - 1)(cosh(a)^2 v^2 - 1)),
    with the v = 1 inverse-square-root endpoint removed by v = 1 + u^2.
    """
    q = exponent_q(n, r)
    if d <= 1.0:
        raise DomainError("two-sheet members require d > 1")
    a = waist_radius(n, r, d)
    rho = float(rho)
    if rho > 350.0:
        raise DomainError("rho too large: cosh(rho) overflows")
    if rho < a - 1e-12 * (1.0 + a):
        raise DomainError(f"rho = {rho} below the waist radius a = {a}")
    cosh_a = math.cosh(a)
    upper = math.cosh(rho) / cosh_a
    if upper <= 1.0:
        return 0.0
    value = 0.0
    u_top = math.sqrt(min(upper, _SPLIT_V) - 1.0)
    res = integrate_family(fam.HEIGHT_U, fam.height_u_params(q, cosh_a), 0.0, u_top, cfg)
    value += require_converged(res, "sheet profile (endpoint part)")
    if upper > _SPLIT_V:
        res = integrate_family(
            fam.HEIGHT_V, fam.height_v_params(q, cosh_a), _SPLIT_V, upper, cfg
        )
        value += require_converged(res, "sheet profile (regular part)")
    return value


def profile_half_graph(n: int, r: int, b: float, rho: float,
                       cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Half-graph profile for d = 1, normalized to vanish at rho = b > 0.

    lambda(rho) = int_b^rho dxi / sqrt(cosh(xi)^2q - 1); decreasing rho to 0
    diverges logarithmically, large rho approaches a finite limit.
    """
    q = exponent_q(n, r)
    b = float(b)
    rho = float(rho)
    if b <= 0.0:
        raise DomainError("base point b must be positive")
    if rho <= 0.0:
        raise DomainError("the half-graph profile lives on rho > 0")
    if rho == b:
        return 0.0
    lo, hi, sign = (b, rho, 1.0) if rho > b else (rho, b, -1.0)
    res = integrate_family(fam.PROFILE_SLOPE, fam.profile_slope_params(q, 1.0), lo, hi, cfg)
    return sign * require_converged(res, "half-graph profile")


def profile_entire(n: int, r: int, d: float, rho: float,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Entire-graph profile for 0 < d < 1; odd and bounded in rho.

    lambda(rho) = sign(rho) * d * int_0^{|rho|} dxi / sqrt(cosh(xi)^2q - d^2).
    """
    q = exponent_q(n, r)
    d = float(d)
    if not 0.0 < d < 1.0:
        raise DomainError("entire graphs require 0 < d < 1")
    rho = float(rho)
    if rho == 0.0:
        return 0.0
    res = integrate_family(
        fam.PROFILE_SLOPE, fam.profile_slope_params(q, d), 0.0, abs(rho), cfg
    )
    return math.copysign(require_converged(res, "entire profile"), rho)


def profile_r_equals_n(d: float, c: float, rho):
    """Straight-line profile of the r = n family: lambda = d*rho + c."""
    if d < 0.0:
        raise DomainError("d must be nonnegative")
    out = float(d) * np.asarray(rho, dtype=np.float64) + float(c)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ProfileCurve:
    """Sampled generating curve with derivatives and assembly transforms.

    Stored samples already include `branch_sign` and `vertical_offset`:
    lam = branch_sign * lambda_positive + vertical_offset.
    """

    n: int
    r: int
    d: float
    regime: Regime
    rho: np.ndarray
    lam: np.ndarray
    lam_dot: np.ndarray
    lam_ddot: np.ndarray
    vertical_offset: float = 0.0
    branch_sign: int = +1
    half_graph_base: float = 1.0

    def __post_init__(self):
        for name in ("rho", "lam", "lam_dot", "lam_ddot"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def q(self) -> float:
        return exponent_q(self.n, self.r) if self.r < self.n else 0.0

    @property
    def waist(self) -> float | None:
        if self.regime is Regime.TWO_SHEETS:
            return waist_radius(self.n, self.r, self.d)
        return None

    def __len__(self) -> int:
        return self.rho.shape[0]


def default_grid(n: int, r: int, d: float, rho_max: float, count: int = 512,
                 rho_min: float | None = None) -> np.ndarray:
    """Sampling grid for one member: geometric near singular ends, uniform
    elsewhere.  Entire graphs get a symmetric grid; slices/tilted graphs a
    uniform one."""
    regime = classify_regime(n, r, d)
    count = int(count)
    if count < 4:
        raise DomainError("need at least 4 grid points")
    if regime is Regime.TWO_SHEETS:
        a = waist_radius(n, r, d)
        if rho_max <= a:
            raise DomainError("rho_max must exceed the waist radius")
        eps = 1e-6 * (1.0 + a) if rho_min is None else rho_min - a
        if eps <= 0.0:
            raise DomainError("rho_min must exceed the waist radius")
        knee = min(1.0 + a, 0.5 * (a + rho_max))
        n_geo = count // 2
        geo = a + np.geomspace(eps, knee - a, n_geo)
        uni = np.linspace(knee, rho_max, count - n_geo + 1)[1:]
        return np.concatenate([geo, uni])
    if regime is Regime.HALF_GRAPH:
        lo = 1e-4 if rho_min is None else rho_min
        if lo <= 0.0:
            raise DomainError("rho_min must be positive for half graphs")
        n_geo = count // 2
        knee = min(1.0, 0.5 * rho_max)
        geo = np.geomspace(lo, knee, n_geo)
        uni = np.linspace(knee, rho_max, count - n_geo + 1)[1:]
        return np.concatenate([geo, uni])
    if regime is Regime.ENTIRE_GRAPH:
        half = np.linspace(0.0, rho_max, count // 2 + 1)
        return np.concatenate([-half[:0:-1], half])
    lo = -rho_max if rho_min is None else rho_min
    return np.linspace(lo, rho_max, count)


def _incremental_lambda(q: float, d: float, grid: np.ndarray, lam0: float,
                        cfg: QuadratureConfig) -> np.ndarray:
    """Cumulative profile over an increasing grid given its first value."""
    params = fam.profile_slope_params(q, d)
    lam = np.empty_like(grid)
    lam[0] = lam0
    for i in range(1, grid.shape[0]):
        res = integrate_family(fam.PROFILE_SLOPE, params, grid[i - 1], grid[i], cfg)
        lam[i] = lam[i - 1] + require_converged(res, "profile increment")
    return lam


def sample_profile(n: int, r: int, d: float, rho_grid,
                   cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                   vertical_offset: float = 0.0, branch_sign: int = +1,
                   half_graph_base: float = 1.0) -> ProfileCurve:
    """Assemble a ProfileCurve on the given strictly increasing grid."""
    regime = classify_regime(n, r, d)
    if branch_sign not in (+1, -1):
        raise DomainError("branch_sign must be +1 or -1")
    grid = np.asarray(rho_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.shape[0] < 2:
        raise DomainError("rho_grid must be a 1-d grid with >= 2 points")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("rho_grid must be strictly increasing")

    if regime in (Regime.SLICE, Regime.TILTED_GRAPH):
        lam = float(d) * grid
        ld = np.full_like(grid, float(d))
        ldd = np.zeros_like(grid)
    elif regime is Regime.TWO_SHEETS:
        a = waist_radius(n, r, d)
        if grid[0] <= a:
            raise DomainError("grid must start above the waist radius")
        q = exponent_q(n, r)
        lam0 = profile_two_sheets(n, r, d, float(grid[0]), cfg)
        lam = _incremental_lambda(q, d, grid, lam0, cfg)
        ld = lambda_dot(n, r, d, grid)
        ldd = lambda_ddot(n, r, d, grid)
    elif regime is Regime.HALF_GRAPH:
        if grid[0] <= 0.0:
            raise DomainError("half-graph grid must be positive")
        if half_graph_base <= 0.0:
            raise DomainError("base point must be positive")
        q = exponent_q(n, r)
        lam0 = profile_half_graph(n, r, half_graph_base, float(grid[0]), cfg)
        lam = _incremental_lambda(q, 1.0, grid, lam0, cfg)
        ld = lambda_dot(n, r, d, grid)
        ldd = lambda_ddot(n, r, d, grid)
    else:  # entire graph: odd extension around 0
        q = exponent_q(n, r)
        mags = np.unique(np.abs(grid))
        if mags[0] > 0.0:
            mags = np.concatenate([[0.0], mags])
        cum = _incremental_lambda(q, d, mags, 0.0, cfg)
        lookup = dict(zip(mags.tolist(), cum.tolist()))
        lam = np.array([math.copysign(lookup[abs(g)], g) if g != 0.0 else 0.0
                        for g in grid.tolist()])
        ld = lambda_dot(n, r, d, grid)
        ldd = lambda_ddot(n, r, d, grid)

    sgn = float(branch_sign)
    return ProfileCurve(
        n=int(n), r=int(r), d=float(d), regime=regime, rho=grid,
        lam=sgn * lam + float(vertical_offset),
        lam_dot=sgn * ld, lam_ddot=sgn * ldd,
        vertical_offset=float(vertical_offset), branch_sign=int(branch_sign),
        half_graph_base=float(half_graph_base),
    )
