"""Adaptive quadrature for singular and improper one-dimensional integrals.

Globally adaptive bisection with an embedded Gauss-Kronrod 7/15 pair per
panel.  Inverse-square-root endpoint singularities are removed exactly by the
substitution v = a + u^2; infinite upper limits are split at a finite cutoff
with the far part pulled back to a bounded interval by v = V w^(-m), where
the caller-supplied decay exponent picks the regularizing power m.

Everything here is pure and reentrant; panel sums are accumulated in interval
order, so results are deterministic regardless of refinement history.
"""

import math
from dataclasses import dataclass

from . import _backend
from .errors import DomainError, NonConvergedError


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 4000
    tail_start: float = 10.0  # earliest cutoff for infinite upper limits

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    subdivisions_used: int
    converged: bool


def integrate(f, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> IntegralResult:
    """Integrate a continuous f over the finite interval [a, b]."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate requires finite endpoints")
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    val, err, nsub, ok = _backend.adaptive(
        f, -1, None, a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions
    )
    return IntegralResult(val, err, nsub, ok)


def integrate_family(fid: int, params, a: float, b: float,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> IntegralResult:
    """integrate() for a registered closed-form integrand family."""
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    val, err, nsub, ok = _backend.adaptive(
        None, fid, params, a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions
    )
    return IntegralResult(val, err, nsub, ok)


def integrate_sqrt_singular(g, a: float, b: float,
                            cfg: QuadratureConfig = DEFAULT_CONFIG) -> IntegralResult:
    """Integrate g(v) * (v - a)^(-1/2) over [a, b], g continuous at a.

    The substitution v = a + u^2 removes the endpoint singularity exactly:
    the returned value is 2 * int_0^sqrt(b-a) g(a + u^2) du.
    """
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")

    def transformed(u, _g=g, _a=a):
        return 2.0 * _g(_a + u * u)

    return integrate(transformed, 0.0, math.sqrt(b - a), cfg)


def _panel_estimate(f, a, b, cfg):
    val, _err, _n, _ok = _backend.adaptive(f, -1, None, a, b, 0.05, cfg.abs_tol, 20)
    return val


def integrate_to_infinity(f, a: float, decay_exponent_hint: float,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> IntegralResult:
    """Integrate f over [a, inf) for f decaying like v^(-p), p = hint > 1.

    The range is split at a cutoff V >= cfg.tail_start.  [a, V] is integrated
    directly; [V, inf) is pulled back to (0, 1] by v = V w^(-m) with
    m = max(1, 2/(p-1)), which turns a clean power tail into an integrand
    vanishing at least linearly at w = 0.  Divergent tails (growth of
    successive octave segments) raise NonConvergedError.
    """
    p = float(decay_exponent_hint)
    if p <= 1.0:
        raise NonConvergedError(
            f"tail with decay exponent {p} <= 1 is not integrable"
        )
    if not math.isfinite(a):
        raise DomainError("lower endpoint must be finite")

    cutoff = max(cfg.tail_start, a + 1.0, 2.0 * abs(a))

    # octave-segment growth check: sum over [V, 2V] vs [2V, 4V]
    seg1 = _panel_estimate(f, cutoff, 2.0 * cutoff, cfg)
    seg2 = _panel_estimate(f, 2.0 * cutoff, 4.0 * cutoff, cfg)
    if abs(seg2) > 10.0 * cfg.abs_tol and abs(seg2) >= 0.99 * abs(seg1):
        raise NonConvergedError(
            "tail integral not decaying: successive octave segments "
            f"{seg1:.3e}, {seg2:.3e}"
        )

    m = min(max(1.0, 2.0 / (p - 1.0)), 16.0)

    def tail_integrand(w, _f=f, _V=cutoff, _m=m):
        if w <= 0.0:
            return 0.0
        wm = w ** _m
        if wm == 0.0:
            return 0.0
        v = _V / wm
        if not math.isfinite(v):
            return 0.0
        return _f(v) * _m * _V / (wm * w)

    finite = integrate(f, a, cutoff, cfg)
    tail = integrate(tail_integrand, 0.0, 1.0, cfg)
    value = finite.value + tail.value
    err = finite.error_estimate + tail.error_estimate
    converged = (
        finite.converged
        and tail.converged
        and err <= max(cfg.abs_tol, cfg.rel_tol * abs(value))
    )
    return IntegralResult(
        value, err, finite.subdivisions_used + tail.subdivisions_used, converged
    )


def require_converged(result: IntegralResult, what: str) -> float:
    """Unwrap an IntegralResult, raising NonConvergedError if it failed."""
    if not result.converged:
        raise NonConvergedError(
            f"{what} did not converge (value={result.value:.6e}, "
            f"error={result.error_estimate:.3e}, "
            f"subdivisions={result.subdivisions_used})"
        )
    return result.value
