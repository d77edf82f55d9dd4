"""Ball-model geometry of hyperbolic n-space cross a vertical line.

Points carry ball coordinates x (|x| < 1) and a height t; the metric is
conformal with factor F = (1 - |x|^2)/2 on the horizontal part and product
on the vertical part.  Totally geodesic hyperplanes come in two forms: flat
disks through the origin (unit normal) and spheres orthogonal to the unit
sphere (center/radius with |c|^2 - r^2 = 1).  Translations along geodesics
are computed in the hyperboloid model, where they are linear.

All operations are pure functions of immutable inputs and safe to call
concurrently.  Operations reject points with |x| > 1 - 1e-12; work near the
ideal boundary should be done in (distance, direction) coordinates instead.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError

BALL_GUARD = 1.0 - 1e-12
_UNIT_TOL = 1e-9
_CAP_TOL = 1e-9


def _as_vector(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be a 1-d vector")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def _unit(v, name: str) -> np.ndarray:
    arr = _as_vector(v, name)
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > _UNIT_TOL:
        raise DomainError(f"{name} must be a unit vector (|{name}| = {norm})")
    return arr / norm


@dataclass(frozen=True, eq=False)
class BallPoint:
    """A point of the product space: ball coordinates x, height t."""

    x: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        arr = _as_vector(self.x, "x")
        if float(np.dot(arr, arr)) > BALL_GUARD * BALL_GUARD:
            raise DomainError(
                f"|x| = {np.linalg.norm(arr):.15g} too close to the ideal boundary"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "x", arr)
        object.__setattr__(self, "t", float(self.t))
        if not math.isfinite(self.t):
            raise DomainError("height t must be finite")

    @property
    def n(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True, eq=False)
class AmbientVector:
    """A tangent vector at `base`, components in the canonical basis."""

    base: BallPoint
    v: np.ndarray

    def __post_init__(self):
        arr = _as_vector(self.v, "v")
        if arr.shape[0] != self.base.n + 1:
            raise DomainError("vector must have n+1 components")
        arr.setflags(write=False)
        object.__setattr__(self, "v", arr)


class HeightTag(Enum):
    FINITE = "finite"
    PLUS_INFINITY = "+inf"
    MINUS_INFINITY = "-inf"


@dataclass(frozen=True)
class BoundaryPoint:
    """Ideal boundary point: unit direction plus a (possibly infinite) height.

    Infinite heights are tagged, never stored as floating-point infinities.
    """

    direction: np.ndarray
    height: float = 0.0
    tag: HeightTag = HeightTag.FINITE

    def __post_init__(self):
        object.__setattr__(self, "direction", _unit(self.direction, "direction"))
        if self.tag is HeightTag.FINITE and not math.isfinite(self.height):
            raise DomainError("finite boundary point needs a finite height")

    @classmethod
    def top(cls, direction):
        return cls(direction, 0.0, HeightTag.PLUS_INFINITY)

    @classmethod
    def bottom(cls, direction):
        return cls(direction, 0.0, HeightTag.MINUS_INFINITY)


@dataclass(frozen=True)
class BoundaryCap:
    """Open spherical cap of the ideal boundary: center direction and angle."""

    center: np.ndarray
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "center", _unit(self.center, "center"))
        if not 0.0 < self.angle < math.pi:
            raise DomainError("cap angle must lie in (0, pi)")

    def contains_direction(self, u) -> bool:
        u = _unit(u, "direction")
        ang = math.acos(max(-1.0, min(1.0, float(np.dot(u, self.center)))))
        return ang < self.angle


@dataclass(frozen=True)
class Hyperplane:
    """Totally geodesic hyperplane of the ball.

    Either a flat disk through the origin (unit `normal`) or a sphere
    orthogonal to the unit sphere (`center`, `radius` with |c|^2 - r^2 = 1).
    """

    normal: np.ndarray | None = None
    center: np.ndarray | None = None
    radius: float | None = None

    @classmethod
    def through_origin(cls, normal) -> "Hyperplane":
        return cls(normal=_unit(normal, "normal"))

    @classmethod
    def general(cls, center, radius: float) -> "Hyperplane":
        c = _as_vector(center, "center")
        r = float(radius)
        if r <= 0.0:
            raise DomainError("radius must be positive")
        c2 = float(np.dot(c, c))
        if abs(c2 - r * r - 1.0) > 1e-9 * (1.0 + r * r):
            raise DomainError(
                "orthosphere condition |c|^2 - r^2 = 1 violated "
                f"(got {c2 - r * r:.12g})"
            )
        return cls(center=c, radius=r)

    def __post_init__(self):
        if (self.normal is None) == (self.center is None):
            raise DomainError(
                "use Hyperplane.through_origin(...) or Hyperplane.general(...)"
            )

    @property
    def is_through_origin(self) -> bool:
        return self.normal is not None

    @property
    def n(self) -> int:
        v = self.normal if self.is_through_origin else self.center
        return v.shape[0]

    def pole(self) -> np.ndarray:
        """Unit direction from the origin toward the positive side."""
        if self.is_through_origin:
            return self.normal
        return self.center / np.linalg.norm(self.center)

    def origin_distance(self) -> float:
        """Signed hyperbolic distance from the origin to the hyperplane.

        Zero for through-origin planes; positive otherwise (the origin is
        never inside the orthosphere).
        """
        if self.is_through_origin:
            return 0.0
        return 2.0 * math.atanh(float(np.linalg.norm(self.center)) - self.radius)

    def cap(self, side: int = +1) -> BoundaryCap:
        """Ideal cap on the requested side (+1 = side the pole points to)."""
        if side not in (+1, -1):
            raise DomainError("side must be +1 or -1")
        pole = self.pole()
        if self.is_through_origin:
            return BoundaryCap(side * pole, 0.5 * math.pi)
        half = math.acos(1.0 / float(np.linalg.norm(self.center)))
        if side == +1:
            return BoundaryCap(pole, half)
        return BoundaryCap(-pole, math.pi - half)

    def cap_side(self, cap: BoundaryCap) -> int:
        """Which side (+1/-1) a cap of this hyperplane sits on."""
        for side in (+1, -1):
            own = self.cap(side)
            if (
                np.linalg.norm(own.center - cap.center) <= _CAP_TOL
                and abs(own.angle - cap.angle) <= _CAP_TOL
            ):
                return side
        raise DomainError("cap does not match the hyperplane's ideal boundary")


@dataclass(frozen=True)
class VerticalHyperplane:
    """Vertical extension of a hyperplane: the product with the height line."""

    base: Hyperplane


@dataclass(frozen=True)
class GeodesicLine:
    """Complete geodesic given by its ordered ideal endpoints.

    Translations with positive length move points toward `end`.
    """

    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", _unit(self.start, "start"))
        object.__setattr__(self, "end", _unit(self.end, "end"))
        if float(np.linalg.norm(self.start - self.end)) < 1e-9:
            raise DomainError("geodesic endpoints must be distinct")


@dataclass(frozen=True)
class AdmissibleCollection:
    """Hyperplanes with chosen ideal caps that are pairwise disjoint."""

    hyperplanes: tuple
    caps: tuple

    def __post_init__(self):
        object.__setattr__(self, "hyperplanes", tuple(self.hyperplanes))
        object.__setattr__(self, "caps", tuple(self.caps))
        if len(self.hyperplanes) != len(self.caps) or not self.hyperplanes:
            raise DomainError("need one cap per hyperplane")
        if not admissible_check(self.hyperplanes, self.caps):
            raise DomainError("caps are not pairwise disjoint")

    def __len__(self) -> int:
        return len(self.hyperplanes)


# ---------------------------------------------------------------------------
# metric quantities


def conformal_factor(p: BallPoint) -> float:
    """F = (1 - |x|^2)/2; lies in (0, 1/2] with the maximum at the origin."""
    return 0.5 * (1.0 - float(np.dot(p.x, p.x)))


def ambient_inner(p: BallPoint, v: AmbientVector, w: AmbientVector) -> float:
    """Product-metric inner product of two tangent vectors at p."""
    if not (
        np.array_equal(v.base.x, p.x) and v.base.t == p.t
        and np.array_equal(w.base.x, p.x) and w.base.t == p.t
    ):
        raise DomainError("vectors must be based at the same point p")
    f = conformal_factor(p)
    horiz = float(np.dot(v.v[:-1], w.v[:-1])) / (f * f)
    return horiz + v.v[-1] * w.v[-1]


def ambient_norm(p: BallPoint, v: AmbientVector) -> float:
    return math.sqrt(ambient_inner(p, v, v))


def norm_comparison(p: BallPoint, v: AmbientVector) -> tuple[float, float]:
    """(ambient norm, Euclidean norm); the ambient one is never smaller."""
    if not np.array_equal(v.base.x, p.x) or v.base.t != p.t:
        raise DomainError("vector must be based at p")
    return ambient_norm(p, v), float(np.linalg.norm(v.v))


def christoffel(p: BallPoint) -> np.ndarray:
    """Christoffel symbols G[k, i, j] of the product metric at p.

    Nonzero only for horizontal index triples:
    G[k,i,j] = (d_ki x_j + d_kj x_i - d_ij x_k) / F.
    """
    n = p.n
    f = conformal_factor(p)
    gam = np.zeros((n + 1, n + 1, n + 1))
    eye = np.eye(n)
    x = p.x
    gam[:n, :n, :n] = (
        np.einsum("ki,j->kij", eye, x)
        + np.einsum("kj,i->kij", eye, x)
        - np.einsum("ij,k->kij", eye, x)
    ) / f
    return gam


def position_factor_L(p: BallPoint) -> float:
    """L = (1 + |x|^2)/(1 - |x|^2) >= 1, with equality only at the origin."""
    x2 = float(np.dot(p.x, p.x))
    return (1.0 + x2) / (1.0 - x2)


def covariant_derivative_position(p: BallPoint, tangent: AmbientVector) -> AmbientVector:
    """Covariant derivative of the position field along `tangent`.

    Horizontal components are scaled by L(p); the vertical one is unchanged.
    """
    if not np.array_equal(tangent.base.x, p.x) or tangent.base.t != p.t:
        raise DomainError("tangent must be based at p")
    out = np.array(tangent.v, dtype=np.float64)
    out[:-1] *= position_factor_L(p)
    return AmbientVector(p, out)


def hyp_distance_origin(p: BallPoint) -> float:
    """Hyperbolic distance of the horizontal part from the origin."""
    return 2.0 * math.atanh(float(np.linalg.norm(p.x)))


def ball_radius(rho: float) -> float:
    """Euclidean ball radius of the sphere at hyperbolic distance rho."""
    if rho < 0.0:
        raise DomainError("rho must be nonnegative")
    return math.tanh(0.5 * rho)


# ---------------------------------------------------------------------------
# hyperboloid-model translation machinery


def _lift(xs: np.ndarray) -> np.ndarray:
    """Ball coordinates (m, n) -> hyperboloid coordinates (m, n+1)."""
    x2 = np.sum(xs * xs, axis=-1)
    denom = 1.0 - x2
    out = np.empty(xs.shape[:-1] + (xs.shape[-1] + 1,))
    out[..., 0] = (1.0 + x2) / denom
    out[..., 1:] = 2.0 * xs / denom[..., None]
    return out


def _drop(X: np.ndarray) -> np.ndarray:
    return X[..., 1:] / (1.0 + X[..., 0])[..., None]


def _translate_many(xs: np.ndarray, line: GeodesicLine, s: float) -> np.ndarray:
    """Hyperbolic translation by length s along `line`, vectorized over rows.

    In the hyperboloid model the translation scales the two null directions
    spanned by the ideal endpoints by e^{+-s} and fixes their Minkowski
    complement.
    """
    lp = np.concatenate(([1.0], line.end))
    lm = np.concatenate(([1.0], line.start))
    denom = float(np.dot(line.end, line.start)) - 1.0  # Minkowski <lp, lm>
    X = _lift(np.atleast_2d(xs))
    mink = np.array([-1.0] + [1.0] * xs.shape[-1])
    alpha = (X * (mink * lm)).sum(axis=-1) / denom
    beta = (X * (mink * lp)).sum(axis=-1) / denom
    W = X - alpha[:, None] * lp[None, :] - beta[:, None] * lm[None, :]
    es = math.exp(s)
    Xp = es * alpha[:, None] * lp[None, :] + (beta / es)[:, None] * lm[None, :] + W
    out = _drop(Xp)
    return out.reshape(np.shape(xs))


def translate_along_geodesic(p: BallPoint, line: GeodesicLine, s: float) -> BallPoint:
    """Slice-wise hyperbolic translation: moves the ball part, keeps t."""
    if line.start.shape[0] != p.n:
        raise DomainError("geodesic and point dimensions differ")
    return BallPoint(_translate_many(p.x, line, float(s)), p.t)


def reflect_ideal(u, plane: Hyperplane) -> np.ndarray:
    """Reflection across the hyperplane, restricted to ideal directions."""
    u = _unit(u, "direction")
    if plane.is_through_origin:
        nh = plane.normal
        return u - 2.0 * float(np.dot(u, nh)) * nh
    d = u - plane.center
    img = plane.center + (plane.radius**2 / float(np.dot(d, d))) * d
    return img / np.linalg.norm(img)


# ---------------------------------------------------------------------------
# distances to hyperplanes, cylinders, halfspace predicates


def _signed_distance_many(xs: np.ndarray, plane: Hyperplane) -> np.ndarray:
    """Signed distance of ball points to the hyperplane, positive on the
    side the pole points to (the cap side for orthosphere planes)."""
    xs = np.atleast_2d(xs)
    if plane.is_through_origin:
        nh = plane.normal
    else:
        pole = plane.pole()
        line = GeodesicLine(-pole, pole)
        xs = _translate_many(xs, line, -plane.origin_distance())
        nh = pole
    x2 = np.sum(xs * xs, axis=-1)
    return np.arcsinh(2.0 * (xs @ nh) / (1.0 - x2))


def signed_distance_to_hyperplane(p: BallPoint, plane: Hyperplane) -> float:
    """Signed hyperbolic distance from the horizontal part of p to the plane.

    Positive on the side the plane's pole points to.  Orthosphere planes are
    first carried to a through-origin position by the translation along their
    axis; the flat-plane formula asinh(2<x, n> / (1 - |x|^2)) then applies.
    """
    if plane.n != p.n:
        raise DomainError("plane and point dimensions differ")
    return float(_signed_distance_many(p.x, plane)[0])


def rho_cylinder_contains(plane: Hyperplane, rho: float, p: BallPoint) -> bool:
    """Open region between the two equidistants at distance rho from the plane."""
    if rho <= 0.0:
        raise DomainError("rho must be positive")
    return abs(signed_distance_to_hyperplane(p, plane)) < rho


def admissible_check(hyperplanes, caps) -> bool:
    """True iff the chosen ideal caps are pairwise disjoint.

    Raises DomainError when a cap is not bounded by its hyperplane's ideal
    sphere.  Tangent caps count as disjoint (the caps are open).
    """
    hyperplanes = tuple(hyperplanes)
    caps = tuple(caps)
    if len(hyperplanes) != len(caps):
        raise DomainError("need one cap per hyperplane")
    for plane, cap in zip(hyperplanes, caps):
        plane.cap_side(cap)  # raises on mismatch
    for i in range(len(caps)):
        for j in range(i + 1, len(caps)):
            ci, cj = caps[i], caps[j]
            ang = math.acos(
                max(-1.0, min(1.0, float(np.dot(ci.center, cj.center))))
            )
            if ang < ci.angle + cj.angle - 1e-12:
                return False
    return True


def region_P_contains(collection: AdmissibleCollection, p: BallPoint) -> bool:
    """Membership in the open region cut out by the collection.

    For each hyperplane the admitted halfspace is the side opposite its cap
    (for a single hyperplane this is the convention; for several it is the
    side containing all the others).
    """
    for plane, cap in zip(collection.hyperplanes, collection.caps):
        side = plane.cap_side(cap)
        if side * signed_distance_to_hyperplane(p, plane) >= 0.0:
            return False
    return True
