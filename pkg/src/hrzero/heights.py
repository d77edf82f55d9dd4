"""Half-height of the two-sheet members, its derivative and limits.

Parametrized internally by the waist radius a (d = cosh(a)^((n-r)/r)), which
stays well conditioned for large d:

    h(a) = cosh(a) * int_1^inf dv / sqrt((v^2q - 1)(cosh(a)^2 v^2 - 1))

The hypersurface's total vertical extent is 2 h.  h decreases strictly in a,
blows up as a -> 0 and tends to pi*r/(2(n-r)) as a -> infinity.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import _families as fam
from .errors import DomainError
from .profile import exponent_q
from .quadrature import (DEFAULT_CONFIG, QuadratureConfig, integrate_family,
                         require_converged)

_SPLIT_V = 2.0
_A_CAP = 300.0  # cosh(a)^2 must stay inside double range


@dataclass(frozen=True)
class HeightResult:
    n: int
    r: int
    d: float
    a: float
    h: float
    error_estimate: float


def _waist_from_d(n: int, r: int, d: float) -> float:
    if d <= 1.0:
        raise DomainError("height is finite only for d > 1")
    return math.acosh(d ** (r / (n - r)))


def _d_from_waist(n: int, r: int, a: float) -> float:
    return math.cosh(a) ** ((n - r) / r)


def _height_tail(q: float, cosh_a: float, cfg: QuadratureConfig):
    cutoff = max(cfg.tail_start, 2.0 * _SPLIT_V)
    m = max(1.0, 2.0 / q)
    finite = integrate_family(
        fam.HEIGHT_V, fam.height_v_params(q, cosh_a), _SPLIT_V, cutoff, cfg
    )
    tail = integrate_family(
        fam.HEIGHT_TAIL, fam.height_tail_params(q, cosh_a, cutoff, m), 0.0, 1.0, cfg
    )
    return finite, tail


def height(n: int, r: int, d: float | None = None, *, a: float | None = None,
           cfg: QuadratureConfig = DEFAULT_CONFIG) -> HeightResult:
    """Half-height of the (n, r, d) two-sheet member.

    Exactly one of d (> 1) or the waist radius a (> 0) must be given.  The
    integral is split at v = 2: the endpoint part uses the v = 1 + u^2
    substitution, the far part is truncated at the configured cutoff with the
    remaining pure-power tail pulled back to a bounded interval.
    """
    q = exponent_q(n, r)
    if (d is None) == (a is None):
        raise DomainError("give exactly one of d or a")
    if a is None:
        a = _waist_from_d(n, r, float(d))
    else:
        a = float(a)
        if a <= 0.0:
            raise DomainError("waist radius a must be positive")
        d = _d_from_waist(n, r, a)
    if a > _A_CAP:
        raise DomainError(f"waist radius a = {a} too large (cap {_A_CAP})")

    cosh_a = math.cosh(a)
    near = integrate_family(
        fam.HEIGHT_U, fam.height_u_params(q, cosh_a), 0.0, 1.0, cfg
    )
    finite, tail = _height_tail(q, cosh_a, cfg)
    h = (
        require_converged(near, "height (endpoint part)")
        + require_converged(finite, "height (middle part)")
        + require_converged(tail, "height (tail part)")
    )
    err = near.error_estimate + finite.error_estimate + tail.error_estimate
    return HeightResult(n=int(n), r=int(r), d=float(d), a=a, h=h, error_estimate=err)


def height_derivative(n: int, r: int, a: float,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """dh/da = -sinh(a) * int_1^inf dv / (sqrt(v^2q - 1) (cosh(a)^2 v^2 - 1)^{3/2}).

    Strictly negative: the family height decreases as the waist radius grows.
    """
    q = exponent_q(n, r)
    a = float(a)
    if a <= 0.0:
        raise DomainError("waist radius a must be positive")
    if a > _A_CAP:
        raise DomainError(f"waist radius a = {a} too large (cap {_A_CAP})")
    cosh_a = math.cosh(a)
    near = integrate_family(
        fam.DHDA_U, fam.dhda_u_params(q, cosh_a), 0.0, 1.0, cfg
    )
    cutoff = max(cfg.tail_start, 2.0 * _SPLIT_V)
    m = max(1.0, 2.0 / (q + 2.0))
    finite = integrate_family(
        fam.DHDA_V, fam.dhda_v_params(q, cosh_a), _SPLIT_V, cutoff, cfg
    )
    tail = integrate_family(
        fam.DHDA_TAIL, fam.dhda_tail_params(q, cosh_a, cutoff, m), 0.0, 1.0, cfg
    )
    total = (
        require_converged(near, "height derivative (endpoint part)")
        + require_converged(finite, "height derivative (middle part)")
        + require_converged(tail, "height derivative (tail part)")
    )
    return -math.sinh(a) * total


def height_limit(n: int, r: int) -> float:
    """Large-d limit of the half-height: pi * r / (2 (n - r))."""
    if r >= n:
        raise DomainError("the height limit requires r < n")
    return math.pi * r / (2.0 * (n - r))


@dataclass(frozen=True)
class DivergenceReport:
    """Heights along a waist-radius sequence decreasing to zero."""

    entries: tuple  # (a, h) pairs in input order
    strictly_increasing: bool
    threshold: float | None
    threshold_exceeded: bool | None
    first_a_exceeding: float | None


def divergence_check(n: int, r: int, a_sequence, threshold: float | None = None,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> DivergenceReport:
    """Evaluate h along a strictly decreasing positive sequence of waist radii.

    Reports whether h increases strictly along the sequence (the blow-up
    trend as the member degenerates) and, when a threshold is supplied,
    whether some entry exceeds it.
    """
    seq = [float(v) for v in a_sequence]
    if len(seq) < 2:
        raise DomainError("need at least two waist radii")
    if any(v <= 0.0 for v in seq):
        raise DomainError("waist radii must be positive")
    if any(b >= a for a, b in zip(seq, seq[1:])):
        raise DomainError("waist radii must be strictly decreasing")
    entries = tuple((av, height(n, r, a=av, cfg=cfg).h) for av in seq)
    hs = [h for _, h in entries]
    increasing = all(h2 > h1 for h1, h2 in zip(hs, hs[1:]))
    exceeded = None
    first_a = None
    if threshold is not None:
        for av, h in entries:
            if h > threshold:
                exceeded = True
                first_a = av
                break
        else:
            exceeded = False
    return DivergenceReport(
        entries=entries,
        strictly_increasing=increasing,
        threshold=threshold,
        threshold_exceeded=exceeded,
        first_a_exceeding=first_a,
    )


def slab_obstruction(n: int, r: int, slab_height: float) -> bool:
    """Whether a slab of the given height is narrow enough to rule out
    complete zero-H_r hypersurfaces with boundary data confined to it.

    The cutoff is the full limiting height of the barrier family,
    2 * height_limit(n, r) = pi * r / (n - r); the boundary case counts.
    """
    if slab_height <= 0.0:
        raise DomainError("slab height must be positive")
    return slab_height <= 2.0 * height_limit(n, r)


def total_height(result: HeightResult) -> float:
    """Full vertical extent of the member: both sheets together."""
    return 2.0 * result.h


def height_profile_over_a(n: int, r: int, a_values,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> np.ndarray:
    """h(a) over an array of waist radii (convenience for reports)."""
    return np.array([height(n, r, a=float(v), cfg=cfg).h for v in a_values])
