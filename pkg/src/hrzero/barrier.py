"""Barrier sweeps: translate two-sheet members toward a target point set.

A placed barrier is a two-sheet member built over a base hyperplane, pushed
a signed length s along the orthogonal sweep geodesic and lifted by t.  In
the barrier's own coordinates a point reduces to (delta, tau): signed
distance to the (translated) base hyperplane along the sweep orientation and
height relative to the lift.  The signed gap

    gap = |tau| - lambda(delta)          (lambda extended below the waist
                                          by -sqrt(waist - delta) * slope)

is continuous, zero exactly on the sheets, negative in the enclosed region
beyond the waist, positive outside.  Sweeping the offset down a schedule and
watching the minimum gap over the target reproduces the first-contact /
containment dichotomy numerically; tangency itself is reported as a contact
event, never as a proof.

Targets are finite point sets (CSV: x_1..x_n, t, optional boundary flag).
Reports are plain data and serialize to JSON.
"""

import csv
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .ambient import (AdmissibleCollection, BallPoint, GeodesicLine,
                      Hyperplane, _signed_distance_many, _translate_many,
                      reflect_ideal)
from .errors import DomainError
from .profile import exponent_q, profile_two_sheets, waist_radius
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

_ORTHO_TOL = 1e-10


def sweep_geodesic_for(plane: Hyperplane, side: int) -> GeodesicLine:
    """The axis geodesic orthogonal to the plane, oriented into `side`."""
    if side not in (+1, -1):
        raise DomainError("side must be +1 or -1")
    pole = plane.pole()
    return GeodesicLine(-side * pole, side * pole)


@dataclass(frozen=True)
class PlacedBarrier:
    """A two-sheet member over `base_hyperplane`, offset along
    `sweep_geodesic` by `horizontal_offset` and lifted by `vertical_offset`."""

    n: int
    r: int
    d: float
    base_hyperplane: Hyperplane
    sweep_geodesic: GeodesicLine
    horizontal_offset: float = 0.0
    vertical_offset: float = 0.0

    def __post_init__(self):
        if self.d <= 1.0:
            raise DomainError("barriers are two-sheet members: need d > 1")
        if self.r >= self.n:
            raise DomainError("barriers require r < n")
        # the sweep geodesic must cross the base hyperplane orthogonally:
        # reflection across the plane swaps its ideal endpoints
        img = reflect_ideal(self.sweep_geodesic.end, self.base_hyperplane)
        if float(np.linalg.norm(img - self.sweep_geodesic.start)) > _ORTHO_TOL:
            raise DomainError("sweep geodesic is not orthogonal to the base")

    @property
    def waist(self) -> float:
        """Resting distance of the member from its base vertical hyperplane."""
        return waist_radius(self.n, self.r, self.d)

    @property
    def orientation(self) -> int:
        """+1 when the sweep geodesic points to the plane's positive side."""
        end = self.sweep_geodesic.end
        if self.base_hyperplane.is_through_origin:
            return +1 if float(np.dot(end, self.base_hyperplane.normal)) > 0.0 else -1
        c = self.base_hyperplane.center
        nc = float(np.linalg.norm(c))
        return +1 if float(np.dot(end, c / nc)) > 1.0 / nc else -1

    @property
    def waist_slope(self) -> float:
        """Leading sqrt coefficient of the sheet profile at the waist."""
        q = exponent_q(self.n, self.r)
        return math.sqrt(2.0 / (q * math.tanh(self.waist)))

    def height(self) -> float:
        from .heights import height

        return height(self.n, self.r, self.d).h


def _fermi_coordinates(b: PlacedBarrier, points: np.ndarray):
    """(delta, tau) of ambient points (m, n+1) relative to the barrier."""
    xs = points[:, :-1]
    if b.horizontal_offset != 0.0:
        xs = _translate_many(xs, b.sweep_geodesic, -b.horizontal_offset)
    delta = b.orientation * _signed_distance_many(xs, b.base_hyperplane)
    tau = points[:, -1] - b.vertical_offset
    return delta, tau


def _sheet_profile_extended(b: PlacedBarrier, delta: np.ndarray,
                            cfg: QuadratureConfig) -> np.ndarray:
    a = b.waist
    out = np.empty_like(delta)
    below = delta <= a
    out[below] = -b.waist_slope * np.sqrt(a - delta[below])
    for i in np.where(~below)[0]:
        out[i] = profile_two_sheets(b.n, b.r, b.d, float(delta[i]), cfg)
    return out


def barrier_classify(b: PlacedBarrier, p,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Signed gap of one point: negative strictly inside the region enclosed
    beyond the barrier, zero on the sheets, positive outside."""
    if isinstance(p, BallPoint):
        pt = np.concatenate([p.x, [p.t]])[None, :]
    else:
        pt = np.atleast_2d(np.asarray(p, dtype=np.float64))
    return float(classify_batch(b, pt, cfg)[0])


def classify_batch(b: PlacedBarrier, points: np.ndarray,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Signed gaps for an (m, n+1) array of points."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[1] != b.n + 1:
        raise DomainError(f"points must have {b.n + 1} columns")
    delta, tau = _fermi_coordinates(b, points)
    lam = _sheet_profile_extended(b, delta, cfg)
    return np.abs(tau) - lam


class Verdict(Enum):
    CONTAINMENT = "containment"
    FIRST_CONTACT = "first_contact"
    NO_CONTACT = "no_contact"


@dataclass(frozen=True)
class SweepReport:
    verdict: Verdict
    parameter: str                     # which offset was swept ("s" or "t")
    s_star: float | None = None        # contact offset, if any
    d_star: float | None = None
    witness: np.ndarray | None = None  # contact point (x_1..x_n, t)
    witness_gap: float | None = None
    trace: tuple = ()                  # (offset, min gap) pairs

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "verdict": self.verdict.value,
            "parameter": self.parameter,
            "s_star": self.s_star,
            "d_star": self.d_star,
            "witness": None if self.witness is None else list(map(float, self.witness)),
            "witness_gap": self.witness_gap,
            "trace": [[float(a), float(g)] for a, g in self.trace],
        }


@dataclass(frozen=True)
class TargetSet:
    """Finite point set (m, n+1) with an optional boundary-point mask."""

    points: np.ndarray
    boundary: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.boundary is None:
            mask = np.zeros(pts.shape[0], dtype=bool)
        else:
            mask = np.asarray(self.boundary, dtype=bool)
        mask.setflags(write=False)
        object.__setattr__(self, "boundary", mask)

    def __len__(self) -> int:
        return self.points.shape[0]


def _validate_schedule(schedule) -> np.ndarray:
    sched = np.asarray([float(v) for v in schedule])
    if sched.ndim != 1 or sched.shape[0] < 1:
        raise DomainError("schedule must be a nonempty 1-d sequence")
    if np.any(np.diff(sched) >= 0.0) and sched.shape[0] > 1:
        raise DomainError("schedule must be strictly decreasing")
    return sched


def _sweep_offsets(make_barrier, target: TargetSet, schedule, contact_tol,
                   cfg, parameter: str, d: float) -> SweepReport:
    sched = _validate_schedule(schedule)
    if len(target) == 0:
        return SweepReport(Verdict.CONTAINMENT, parameter, trace=())

    def min_gap(offset: float):
        gaps = classify_batch(make_barrier(offset), target.points, cfg)
        k = int(np.argmin(gaps))
        return float(gaps[k]), k

    trace = []
    g0, _ = min_gap(float(sched[0]))
    if g0 <= contact_tol:
        raise DomainError(
            "start not disjoint: the barrier already touches the target at "
            f"the first offset (min gap {g0:.3e})"
        )
    prev = float(sched[0])
    trace.append((prev, g0))
    for offset in sched[1:]:
        offset = float(offset)
        g, k = min_gap(offset)
        trace.append((offset, g))
        if g <= contact_tol:
            lo, hi = offset, prev
            g_lo = g
            for _ in range(200):
                if abs(g_lo) <= contact_tol or hi - lo < 1e-14 * (1.0 + abs(hi)):
                    break
                midp = 0.5 * (lo + hi)
                g_mid, k_mid = min_gap(midp)
                if g_mid <= contact_tol:
                    lo, g_lo, k = midp, g_mid, k_mid
                else:
                    hi = midp
            s_star = lo
            g_star, k_star = min_gap(s_star)
            return SweepReport(
                Verdict.FIRST_CONTACT, parameter, s_star=s_star, d_star=d,
                witness=np.array(target.points[k_star]),
                witness_gap=g_star, trace=tuple(trace),
            )
        prev = offset
    verdict = Verdict.CONTAINMENT if abs(float(sched[-1])) <= 1e-12 else Verdict.NO_CONTACT
    return SweepReport(verdict, parameter, trace=tuple(trace))


def sweep(target: TargetSet, plane: Hyperplane, side: int, n: int, r: int,
          d: float, s_schedule, t: float = 0.0, contact_tol: float = 1e-6,
          cfg: QuadratureConfig = DEFAULT_CONFIG) -> SweepReport:
    """Horizontal sweep: bring the barrier back along its axis toward rest.

    The schedule must be strictly decreasing; the first offset must leave the
    barrier disjoint from the target (min gap > contact_tol), otherwise a
    DomainError is raised.  First contact is refined by bisection between
    consecutive schedule entries.
    """
    line = sweep_geodesic_for(plane, side)

    def make(offset: float) -> PlacedBarrier:
        return PlacedBarrier(n, r, d, plane, line, horizontal_offset=offset,
                             vertical_offset=t)

    return _sweep_offsets(make, target, s_schedule, contact_tol, cfg, "s", d)


def vertical_sweep(target: TargetSet, plane: Hyperplane, n: int, r: int,
                   d: float, t_schedule, side: int = +1, s: float = 0.0,
                   contact_tol: float = 1e-6,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> SweepReport:
    """Vertical sweep: fixed horizontal offset, decreasing lift schedule."""
    line = sweep_geodesic_for(plane, side)

    def make(offset: float) -> PlacedBarrier:
        return PlacedBarrier(n, r, d, plane, line, horizontal_offset=s,
                             vertical_offset=offset)

    return _sweep_offsets(make, target, t_schedule, contact_tol, cfg, "t", d)


@dataclass(frozen=True)
class ProbeResult:
    cap_center: np.ndarray
    cap_angle: float
    d: float
    report: SweepReport


@dataclass(frozen=True)
class HalfspaceCertificate:
    consistent: bool
    message: str
    probes: tuple
    witness: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "consistent": self.consistent,
            "message": self.message,
            "witness": None if self.witness is None else list(map(float, self.witness)),
            "probes": [
                {
                    "cap_center": list(map(float, p.cap_center)),
                    "cap_angle": p.cap_angle,
                    "d": p.d,
                    "report": p.report.to_dict(),
                }
                for p in self.probes
            ],
        }


def _require_boundary_inside(target: TargetSet, collection: AdmissibleCollection):
    """Boundary-flagged target points must lie in the region's closure."""
    if not np.any(target.boundary):
        return
    pts = target.points[target.boundary]
    for plane, cap in zip(collection.hyperplanes, collection.caps):
        side = plane.cap_side(cap)
        sd = side * _signed_distance_many(pts[:, :-1], plane)
        if np.any(sd > 1e-9):
            raise DomainError(
                "boundary-flagged target points leave the admitted region"
            )


def probe_hyperplane(cap_center, cap_angle: float) -> Hyperplane:
    """Hyperplane whose positive ideal cap is (cap_center, cap_angle)."""
    if not 0.0 < cap_angle < 0.5 * math.pi:
        raise DomainError("probe cap angle must lie in (0, pi/2)")
    u = np.asarray(cap_center, dtype=np.float64)
    u = u / np.linalg.norm(u)
    return Hyperplane.general(u / math.cos(cap_angle), math.tan(cap_angle))


def default_probes(collection: AdmissibleCollection,
                   shrink_factors=(0.8, 0.6)) -> list:
    """Probe caps strictly inside each admitted cap of the collection."""
    probes = []
    for plane, cap in zip(collection.hyperplanes, collection.caps):
        for f in shrink_factors:
            angle = f * min(cap.angle, 0.5 * math.pi * 0.999)
            probes.append((np.array(cap.center), float(angle)))
    return probes


def halfspace_certificate(target: TargetSet, collection: AdmissibleCollection,
                          n: int, r: int, d_schedule, s_schedule,
                          probes=None, contact_tol: float = 1e-6,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> HalfspaceCertificate:
    """Sweep barriers over a probe family of hyperplanes beyond the region.

    Containment for every probe and every d yields a certificate that the
    target is consistent with lying in the region's closure; any first
    contact yields a counterexample witness.  The probe family samples, it
    does not exhaust, the hyperplanes beyond the region, so the positive
    answer is always "consistent with containment", never a proof.
    """
    d_sched = [float(v) for v in d_schedule]
    if any(v <= 1.0 for v in d_sched):
        raise DomainError("d schedule must stay above 1")
    if any(b >= a for a, b in zip(d_sched, d_sched[1:])):
        raise DomainError("d schedule must be strictly decreasing")
    _require_boundary_inside(target, collection)
    if probes is None:
        probes = default_probes(collection)
    results = []
    witness = None
    for center, angle in probes:
        plane = probe_hyperplane(center, angle)
        for dval in d_sched:
            report = sweep(target, plane, +1, n, r, dval, s_schedule,
                           contact_tol=contact_tol, cfg=cfg)
            results.append(ProbeResult(np.asarray(center, dtype=np.float64), float(angle),
                                       dval, report))
            if report.verdict is Verdict.FIRST_CONTACT and witness is None:
                witness = report.witness
    consistent = witness is None
    message = (
        "consistent with containment" if consistent
        else "counterexample witness found"
    )
    return HalfspaceCertificate(consistent=consistent, message=message,
                                probes=tuple(results), witness=witness)


# ---------------------------------------------------------------------------
# target CSV ingestion and bundled fixtures


def write_target_csv(path: str, target: TargetSet) -> None:
    n = target.points.shape[1] - 1
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x_{k}" for k in range(1, n + 1)] + ["t", "boundary"])
        for row, flag in zip(target.points, target.boundary):
            writer.writerow([f"{v:.17g}" for v in row] + [int(flag)])


def load_target_csv(path: str) -> TargetSet:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DomainError("empty target file")
    header = rows[0]
    has_flag = header[-1].strip().lower() == "boundary"
    ncols = len(header) - (1 if has_flag else 0)
    pts = []
    flags = []
    for row in rows[1:]:
        vals = [float(v) for v in row[:ncols]]
        pts.append(vals)
        flags.append(bool(int(row[ncols])) if has_flag else False)
    return TargetSet(np.array(pts), np.array(flags, dtype=bool))


def barrier_surface_points(b: PlacedBarrier, rho_values, eta_values,
                           cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Sample points of both sheets (m, n+1), for checks and fixtures.

    rho_values >= waist are profile distances; eta_values are orbit
    translation lengths along a direction inside the base hyperplane.
    """
    n = b.n
    a = b.waist
    pole = b.sweep_geodesic.end
    # an orbit direction orthogonal to the sweep axis
    k = int(np.argmin(np.abs(pole)))
    e = np.zeros(n)
    e[k] = 1.0
    orbit_dir = e - float(np.dot(e, pole)) * pole
    orbit_dir /= np.linalg.norm(orbit_dir)
    rows = []
    for rho in rho_values:
        rho = float(rho)
        if rho < a:
            raise DomainError("rho below the waist")
        lam = profile_two_sheets(b.n, b.r, b.d, rho, cfg) if rho > a else 0.0
        base = np.tanh(0.5 * rho) * pole
        for eta in eta_values:
            x = _translate_many(base, GeodesicLine(-orbit_dir, orbit_dir),
                                float(eta))
            if b.horizontal_offset != 0.0:
                x = _translate_many(x, b.sweep_geodesic, b.horizontal_offset)
            for sign in (+1.0, -1.0) if lam != 0.0 else (1.0,):
                rows.append(np.concatenate([x, [sign * lam + b.vertical_offset]]))
    return np.array(rows)


def containment_fixture(n: int = 3, r: int = 1, d: float = 2.0):
    """Target inside the protected halfspace plus sweep parameters.

    Points sit on a vertical hyperplane at distance 0.5 on the far side of
    the base plane, so every sweep offset keeps positive gaps and the sweep
    ends in containment.
    """
    plane = _plane_e1(n)
    line = sweep_geodesic_for(plane, +1)
    pts = []
    back = _translate_many(np.zeros((1, n)), line, -0.5)[0]
    orbit_dir = np.zeros(n)
    orbit_dir[1] = 1.0
    for eta in (-1.2, -0.6, 0.0, 0.6, 1.2):
        x = _translate_many(back, GeodesicLine(-orbit_dir, orbit_dir), eta)
        for t in (-0.8, 0.0, 0.8):
            pts.append(np.concatenate([x, [t]]))
    target = TargetSet(np.array(pts))
    a = waist_radius(n, r, d)
    schedule = np.linspace(2.0 * a + 2.0, 0.0, 41)
    return target, plane, +1, n, r, d, schedule


def violation_fixture(n: int = 3, r: int = 1, d: float = 2.0):
    """Target with one point in the swept region: first contact at s = 2a.

    The violator sits at barrier coordinates (delta = 3a, tau = 0); the sheet
    reaches it exactly when the translated waist passes distance 3a, i.e. at
    offset 2a.
    """
    plane = _plane_e1(n)
    a = waist_radius(n, r, d)
    pts = []
    x_bad = np.zeros(n)
    x_bad[0] = math.tanh(1.5 * a)
    pts.append(np.concatenate([x_bad, [0.0]]))
    line = sweep_geodesic_for(plane, +1)
    back = _translate_many(np.zeros((1, n)), line, -0.5)[0]
    for t in (-0.5, 0.5):
        pts.append(np.concatenate([back, [t]]))
    target = TargetSet(np.array(pts))
    schedule = np.linspace(2.0 * a + 2.0, 0.0, 41)
    return target, plane, +1, n, r, d, schedule


def _plane_e1(n: int) -> Hyperplane:
    e1 = np.zeros(n)
    e1[0] = 1.0
    return Hyperplane.through_origin(e1)
