"""Shared 1-D radial integration helpers.

All radial integrals in the package run through here: exact antiderivatives
for power integrands, scipy adaptive quadrature in log-radius for anything
else, and the decay-cutoff search that truncates integrable tails before
handing them to the quadrature routine.
"""

from __future__ import annotations

import math
import warnings

from scipy import integrate

_INF = math.inf

# |beta + 1| below this counts as the exact divergence boundary
DIV_TOL = 1e-12

# stop a tail once the log-integrand drops below this
_LOG_FLOOR = -720.0


def exp_clip(x: float) -> float:
    """exp with overflow clipped to a huge finite value."""
    if x > 700.0:
        return 1e304
    if x < -745.0:
        return 0.0
    return math.exp(x)


def power_integral(u: float, v: float, beta: float) -> float:
    """Exact integral of r**beta over [u, v]; +inf when it diverges.

    Divergence at the singular endpoints follows the power test: at v=inf
    the integral is infinite iff beta >= -1, at u=0 iff beta <= -1 (both
    within DIV_TOL of the boundary).
    """
    b = beta + 1.0
    if v < u:
        raise ValueError("need u <= v")
    if v == u:
        return 0.0
    if math.isinf(v):
        if b >= -DIV_TOL:
            return _INF
        return -(u ** b) / b
    if u == 0.0:
        if b <= DIV_TOL:
            return _INF
        return (v ** b) / b
    # finite positive interval; expm1 keeps precision near b = 0
    return (u ** b) * math.expm1(b * math.log(v / u)) / b if b != 0.0 else math.log(v / u)


def log_power_integral(u: float, v: float, beta: float) -> float:
    """ln of the integral of r**beta over [u, v]; +inf marks divergence.

    Overflow-safe for extreme beta, unlike power_integral.
    """
    b = beta + 1.0
    if v <= u:
        return -_INF
    if math.isinf(v):
        if b >= -DIV_TOL:
            return _INF
        return b * math.log(u) - math.log(-b)
    if u == 0.0:
        if b <= DIV_TOL:
            return _INF
        return b * math.log(v) - math.log(b)
    span = math.log(v / u)
    scaled = b * span
    if abs(scaled) < 1e-10:
        return b * math.log(u) + math.log(span)
    if b > 0:
        return b * math.log(v) + math.log1p(-math.exp(-scaled)) - math.log(b)
    return b * math.log(u) + math.log1p(-math.exp(scaled)) - math.log(-b)


def quad_log(fn, r_lo: float, r_hi: float, rel_tol: float = 1e-9,
             inner_breaks: tuple[float, ...] = ()) -> float:
    """Adaptive quadrature of fn(r) dr over finite [r_lo, r_hi], 0 < r_lo.

    Integrates in s = ln r so wide dynamic ranges stay well conditioned.
    inner_breaks lists radii where the integrand may be non-smooth.
    """
    if r_lo <= 0 or math.isinf(r_hi):
        raise ValueError("quad_log needs a finite positive interval")
    if r_hi <= r_lo:
        return 0.0
    pts = tuple(math.log(b) for b in inner_breaks if r_lo < b < r_hi)
    return quad_s(
        lambda s: fn(math.exp(s)) * math.exp(s),
        math.log(r_lo),
        math.log(r_hi),
        rel_tol,
        pts,
    )


def quad_s(g, s_lo: float, s_hi: float, rel_tol: float = 1e-9,
           points: tuple[float, ...] = ()) -> float:
    """Adaptive quadrature of g(s) ds over a finite interval in log-radius.

    g must be evaluable for any s, however extreme; callers express radial
    integrands through log-amplitudes so this holds.
    """
    if s_hi <= s_lo:
        return 0.0
    pts = sorted(p for p in points if s_lo < p < s_hi)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _err = integrate.quad(
            g, s_lo, s_hi,
            epsabs=0.0,
            epsrel=rel_tol,
            limit=400,
            points=pts or None,
        )
    return val


def _cut_target(log_integrand, s_ref: float, drop: float) -> float:
    level = log_integrand(s_ref)
    if not math.isfinite(level):
        level = 0.0
    return max(level - drop, _LOG_FLOOR)


def search_cutoff(log_integrand, s_start: float, direction: int,
                  drop: float = 80.0, step0: float = 8.0,
                  s_limit: float = 3e5) -> float | None:
    """First s past s_start where the log-integrand has dropped far enough
    below its reference level that the remaining tail is negligible.

    Returns None when no such point appears before |s| exceeds s_limit,
    which callers treat as a non-integrable (or hopelessly slow) tail.
    """
    target = _cut_target(log_integrand, s_start, drop)
    s = s_start
    step = step0
    for _ in range(80):
        if log_integrand(s) < target:
            return s
        step *= 2.0
        s += direction * step
        if abs(s) > s_limit:
            return None
    return None


def linear_cutoff(log_integrand, s_ref: float, rate: float, direction: int,
                  drop: float = 80.0) -> float | None:
    """Cutoff for a tail whose log-integrand decays ~ rate * |s - s_ref|.

    Starts from the analytic estimate and extends until the drop below the
    reference level is truly reached; gives up (None) after a few tries.
    """
    if rate <= 0:
        return None
    target = _cut_target(log_integrand, s_ref, drop)
    s = s_ref + direction * (drop + 20.0) / rate
    for _ in range(50):
        if log_integrand(s) < target:
            return s
        s += direction * drop / rate
        if abs(s) > 1e7:
            return None
    return None
