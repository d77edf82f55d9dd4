"""Closed-form integrand families shared by both quadrature backends.

The generating-curve and height integrals all reduce to a handful of fixed
integrand shapes.  Registering them by id lets the compiled kernel evaluate
them without any Python-callable overhead; this module is the reference
implementation and the one the pure-Python backend uses.  Parameters travel
as a fixed-width float vector so both backends share one calling convention.

Conventions: x**(2q) terms are computed through expm1/log1p so that the
near-cancellation at the waist stays accurate, and overflow saturates to
inf (1/sqrt(inf) == 0.0) exactly as C libm does.
"""

import math

import numpy as np

# family ids (fid < 0 means "plain Python callable" to the backends)
PROFILE_SLOPE = 1  # d / sqrt(cosh(s)^2q - d^2)
HEIGHT_V = 2       # A / sqrt((v^2q - 1)(A^2 v^2 - 1)), A = cosh(waist)
HEIGHT_U = 3       # HEIGHT_V with the v = 1 + u^2 endpoint substitution
DHDA_V = 4         # 1 / (sqrt(v^2q - 1) (A^2 v^2 - 1)^{3/2})
DHDA_U = 5         # DHDA_V with the v = 1 + u^2 endpoint substitution
ARCLEN = 6         # sqrt(1 + slope(s)^2) along the profile parameter
ARCLEN_U = 7       # ARCLEN with s = s0 + u^2 (waist regularization)
HEIGHT_TAIL = 8    # HEIGHT_V on [V, inf) pulled back to (0, 1] by v = V w^-m
DHDA_TAIL = 9      # same pullback for the DHDA_V integrand

NPARAMS = 8

_INF = math.inf
_EXP_CAP = 700.0  # beyond this the exact value overflows a double anyway


def pack(*vals) -> np.ndarray:
    p = np.zeros(NPARAMS, dtype=np.float64)
    for i, v in enumerate(vals):
        p[i] = float(v)
    return p


def profile_slope_params(q: float, d: float) -> np.ndarray:
    return pack(2.0 * q, d, d * d - 1.0)


def arclen_params(q: float, d: float) -> np.ndarray:
    return pack(2.0 * q, d, d * d - 1.0)


def arclen_u_params(q: float, d: float, waist: float) -> np.ndarray:
    # p4 carries the derivative of cosh^2q at the waist for the u -> 0 limit
    dd = 2.0 * q * d * d * math.tanh(waist)
    return pack(2.0 * q, d, d * d - 1.0, waist, dd)


def height_v_params(q: float, cosh_a: float) -> np.ndarray:
    return pack(2.0 * q, cosh_a, cosh_a * cosh_a)


def height_u_params(q: float, cosh_a: float) -> np.ndarray:
    a2 = cosh_a * cosh_a
    return pack(2.0 * q, cosh_a, a2 - 1.0, a2)


def dhda_v_params(q: float, cosh_a: float) -> np.ndarray:
    return pack(2.0 * q, cosh_a * cosh_a)


def dhda_u_params(q: float, cosh_a: float) -> np.ndarray:
    a2 = cosh_a * cosh_a
    return pack(2.0 * q, a2 - 1.0, a2)


def height_tail_params(q: float, cosh_a: float, cutoff: float, m: float) -> np.ndarray:
    a2 = cosh_a * cosh_a
    return pack(
        m * q - 1.0,                      # exponent of w
        m * cosh_a * cutoff ** (-q),      # constant prefactor
        cutoff ** (-2.0 * q),
        2.0 * m * q,
        a2,
        cutoff ** -2.0,
        2.0 * m,
    )


def dhda_tail_params(q: float, cosh_a: float, cutoff: float, m: float) -> np.ndarray:
    a2 = cosh_a * cosh_a
    return pack(
        m * (q + 2.0) - 1.0,
        m * cutoff ** (-(q + 2.0)),
        cutoff ** (-2.0 * q),
        2.0 * m * q,
        a2,
        cutoff ** -2.0,
        2.0 * m,
    )


def _coshpow_minus(s: float, two_q: float, shift: float) -> float:
    """cosh(s)**two_q - 1 - shift, accurate near s = 0 and near cancellation."""
    hs = math.sinh(0.5 * s)
    arg = two_q * math.log1p(2.0 * hs * hs)
    if arg > _EXP_CAP:
        return _INF
    return math.expm1(arg) - shift


def _powm1_over(w: float, two_q: float) -> float:
    """((1+w)**two_q - 1) / w for w > 0, with the w -> 0 limit two_q."""
    if w == 0.0:
        return two_q
    arg = two_q * math.log1p(w)
    if arg > _EXP_CAP:
        return _INF
    return math.expm1(arg) / w


def _vpow_minus1(v: float, two_q: float) -> float:
    """v**two_q - 1 for v >= 1, saturating to inf."""
    arg = two_q * math.log(v)
    if arg > _EXP_CAP:
        return _INF
    return math.expm1(arg)


def eval_family(fid: int, p, x: float) -> float:
    if fid == PROFILE_SLOPE:
        den = _coshpow_minus(x, p[0], p[2])
        if den <= 0.0:
            return _INF
        return p[1] / math.sqrt(den)

    if fid == HEIGHT_V:
        t1 = _vpow_minus1(x, p[0])
        t2 = p[2] * x * x - 1.0
        if t1 <= 0.0 or t2 <= 0.0:
            return _INF
        return p[1] / (math.sqrt(t1) * math.sqrt(t2))

    if fid == HEIGHT_U:
        w = x * x
        ratio = _powm1_over(w, p[0])
        t2 = p[2] + p[3] * w * (2.0 + w)
        return 2.0 * p[1] / (math.sqrt(ratio) * math.sqrt(t2))

    if fid == DHDA_V:
        t1 = _vpow_minus1(x, p[0])
        t2 = p[1] * x * x - 1.0
        if t1 <= 0.0 or t2 <= 0.0:
            return _INF
        return 1.0 / (math.sqrt(t1) * t2 * math.sqrt(t2))

    if fid == DHDA_U:
        w = x * x
        ratio = _powm1_over(w, p[0])
        t2 = p[1] + p[2] * w * (2.0 + w)
        return 2.0 / (math.sqrt(ratio) * t2 * math.sqrt(t2))

    if fid == ARCLEN:
        den = _coshpow_minus(x, p[0], p[2])
        if den <= 0.0:
            return _INF
        return math.sqrt(1.0 + p[1] * p[1] / den)

    if fid == ARCLEN_U:
        s = p[3] + x * x
        den = _coshpow_minus(s, p[0], p[2])
        if den <= 0.0 or x == 0.0:
            return 2.0 * p[1] / math.sqrt(p[4])
        return 2.0 * x * math.sqrt(1.0 + p[1] * p[1] / den)

    if fid == HEIGHT_TAIL or fid == DHDA_TAIL:
        if x <= 0.0:
            return 0.0
        t1 = 1.0 - p[2] * x ** p[3]
        t2 = p[4] - p[5] * x ** p[6]
        if t1 <= 0.0 or t2 <= 0.0:
            return _INF
        if fid == HEIGHT_TAIL:
            return p[1] * x ** p[0] / (math.sqrt(t1) * math.sqrt(t2))
        return p[1] * x ** p[0] / (math.sqrt(t1) * t2 * math.sqrt(t2))

    raise ValueError(f"unknown integrand family id {fid}")
