"""Modulars and Luxemburg norms of weighted variable-exponent Lebesgue spaces.

Functions are radial piecewise powers: on each segment the value is
c * r^{a(r)} with a structured exponent expression a(r), optionally times
factors 2^{m * alpha(r)}.  The modular of g against a radial exponent p over
a region is

    F_p(g) = |S^{n-1}| * integral of r^{n-1} g(r)^{p(r)} dr,

computed in closed form whenever p and the segment exponent are constant on
the piece and by adaptive quadrature otherwise.  Divergence is decided
analytically first (power test at the singular endpoints), so infinite
norms are reported instead of silently truncated.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from . import _quad
from .exponents import PowerWeight, RadialExponent, sphere_area

__all__ = [
    "ExprTerm",
    "ExponentExpr",
    "Region",
    "Segment",
    "PiecewisePowerFunction",
    "BracketError",
    "modular",
    "luxemburg_norm",
    "weighted_vexp_norm",
    "norm_of_one",
]

_INF = math.inf
_LN2 = math.log(2.0)

# relative width of the bisection certificate
CERT_DELTA = 1e-10

# snap tolerance for segment ends landing on region boundaries
_SNAP = 1e-12


class BracketError(RuntimeError):
    """Norm bisection failed to bracket the unit modular level."""


@dataclass(frozen=True)
class ExprTerm:
    """One structured term of a segment exponent: coef * f(r) or coef / f(r)."""

    coef: float
    fn: RadialExponent
    reciprocal: bool = False

    def value(self, r):
        return self.coef / self.fn(r) if self.reciprocal else self.coef * self.fn(r)

    def _of(self, v):
        if self.reciprocal:
            return self.coef / v if not math.isinf(v) else 0.0
        return self.coef * v

    def limit_zero(self):
        return self._of(self.fn.p_zero)

    def limit_infty(self):
        return self._of(self.fn.p_infty)

    @property
    def is_constant(self):
        return self.coef == 0.0 or self.fn.is_constant


@dataclass(frozen=True)
class ExponentExpr:
    """a(r) = const + sum of structured terms over registered exponents."""

    const: float = 0.0
    terms: tuple[ExprTerm, ...] = ()

    def __call__(self, r):
        if not self.terms:
            return self.const
        return self.const + math.fsum(t.value(r) for t in self.terms)

    @property
    def is_constant(self):
        return all(t.is_constant for t in self.terms)

    def constant_value(self):
        if not self.is_constant:
            raise ValueError("exponent expression is not constant")
        return self(1.0)

    def limit_zero(self):
        return self.const + math.fsum(t.limit_zero() for t in self.terms)

    def limit_infty(self):
        return self.const + math.fsum(t.limit_infty() for t in self.terms)

    def shifted(self, delta: float) -> "ExponentExpr":
        return ExponentExpr(self.const + delta, self.terms)

    def plus(self, other: "ExponentExpr") -> "ExponentExpr":
        return ExponentExpr(self.const + other.const, self.terms + other.terms)

    def discontinuities(self):
        out: list[float] = []
        for t in self.terms:
            out.extend(t.fn.discontinuities())
        return tuple(sorted(set(out)))


@dataclass(frozen=True)
class Region:
    """Radial region r_lo < |x| <= r_hi (endpoints immaterial for integrals)."""

    r_lo: float = 0.0
    r_hi: float = _INF

    def __post_init__(self):
        if not (0 <= self.r_lo < self.r_hi):
            raise ValueError("need 0 <= r_lo < r_hi")

    @classmethod
    def all(cls):
        return cls(0.0, _INF)

    @classmethod
    def ball(cls, radius):
        return cls(0.0, float(radius))

    @classmethod
    def annulus(cls, r_lo, r_hi):
        return cls(float(r_lo), float(r_hi))

    @classmethod
    def shell(cls, k: int):
        """Dyadic shell 2^(k-1) < |x| <= 2^k."""
        return cls(2.0 ** (k - 1), 2.0 ** k)


@dataclass(frozen=True)
class Segment:
    """c * r^{a(r)} * prod_j 2^{m_j alpha_j(r)} on [r_lo, r_hi), 0 elsewhere."""

    r_lo: float
    r_hi: float
    coef: float
    expr: ExponentExpr = ExponentExpr()
    pow2: tuple[tuple[float, RadialExponent], ...] = ()

    def __post_init__(self):
        if self.coef < 0:
            raise ValueError("segment coefficient must be nonnegative")
        if not (0 <= self.r_lo < self.r_hi):
            raise ValueError("segment bounds must satisfy 0 <= lo < hi")

    def value(self, r: float) -> float:
        if r < self.r_lo or r >= self.r_hi or self.coef == 0.0:
            return 0.0
        return self.amplitude(r)

    def amplitude(self, r: float) -> float:
        """Segment formula ignoring the support window."""
        a = self.expr(r)
        if r == 0.0:
            base = 0.0 if a > 0 else (1.0 if a == 0 else _INF)
        else:
            base = r ** a
        out = self.coef * base
        for m, alpha in self.pow2:
            out *= 2.0 ** (m * alpha(r))
        return out

    def log_amplitude_s(self, s: float) -> float:
        """ln amplitude at r = e^s; safe even when e^s under/overflows."""
        r = math.exp(s) if s < 700 else _INF
        a = self.expr(r)
        out = math.log(self.coef) + a * s
        for m, alpha in self.pow2:
            out += m * alpha(r) * _LN2
        return out

    # limits of the power exponent and of the bounded prefactor
    def exponent_limits(self) -> tuple[float, float]:
        return (self.expr.limit_zero(), self.expr.limit_infty())

    def coef_limits(self) -> tuple[float, float]:
        c0 = c1 = self.coef
        for m, alpha in self.pow2:
            c0 *= 2.0 ** (m * alpha.p_zero)
            c1 *= 2.0 ** (m * alpha.p_infty)
        return (c0, c1)

    @property
    def plain_power(self) -> bool:
        return self.expr.is_constant and not self.pow2

    def discontinuities(self):
        out = list(self.expr.discontinuities())
        for _, alpha in self.pow2:
            out.extend(alpha.discontinuities())
        return tuple(sorted(set(out)))


def _fold_pow2(pow2, m, alpha):
    if alpha.is_constant:
        return pow2, 2.0 ** (m * alpha(1.0))
    return pow2 + ((m, alpha),), 1.0


@dataclass(frozen=True)
class PiecewisePowerFunction:
    """Nonnegative radial function assembled from power segments."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(sorted(self.segments, key=lambda s: s.r_lo))
        for a, b in zip(segs, segs[1:]):
            if b.r_lo < a.r_hi * (1 - _SNAP):
                raise ValueError("segments overlap")
        object.__setattr__(self, "segments", segs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def single_power(cls, coef, expo, r_lo=0.0, r_hi=_INF):
        return cls((Segment(r_lo, r_hi, coef, ExponentExpr(expo)),))

    @classmethod
    def power_with_terms(cls, coef, const, terms, r_lo=0.0, r_hi=_INF):
        return cls((Segment(r_lo, r_hi, coef, ExponentExpr(const, tuple(terms))),))

    @classmethod
    def one(cls):
        return cls.single_power(1.0, 0.0)

    @classmethod
    def zero(cls):
        return cls(())

    # -- evaluation ---------------------------------------------------------

    def segment_at(self, r: float) -> Segment | None:
        starts = [s.r_lo for s in self.segments]
        i = bisect_right(starts, r) - 1
        if i >= 0 and self.segments[i].r_lo <= r < self.segments[i].r_hi:
            return self.segments[i]
        return None

    def value(self, r: float) -> float:
        seg = self.segment_at(r)
        return seg.value(r) if seg is not None else 0.0

    __call__ = value

    @property
    def is_zero(self) -> bool:
        return all(s.coef == 0.0 for s in self.segments)

    def support(self) -> tuple[float, float]:
        live = [s for s in self.segments if s.coef > 0.0]
        if not live:
            return (0.0, 0.0)
        return (live[0].r_lo, live[-1].r_hi)

    # -- algebra ------------------------------------------------------------

    def scaled(self, c: float) -> "PiecewisePowerFunction":
        if c < 0:
            raise ValueError("only nonnegative scalings are representable")
        return PiecewisePowerFunction(
            tuple(Segment(s.r_lo, s.r_hi, c * s.coef, s.expr, s.pow2) for s in self.segments)
        )

    def weighted(self, gamma: float) -> "PiecewisePowerFunction":
        """Multiply by |x|^gamma (power weights fold into the exponents)."""
        return PiecewisePowerFunction(
            tuple(
                Segment(s.r_lo, s.r_hi, s.coef, s.expr.shifted(gamma), s.pow2)
                for s in self.segments
            )
        )

    def times_pow2(self, m: float, alpha: RadialExponent) -> "PiecewisePowerFunction":
        """Multiply by 2^{m * alpha(|x|)}; constant alpha folds into coefficients."""
        out = []
        for s in self.segments:
            pow2, fold = _fold_pow2(s.pow2, m, alpha)
            out.append(Segment(s.r_lo, s.r_hi, s.coef * fold, s.expr, pow2))
        return PiecewisePowerFunction(tuple(out))

    def multiply(self, other: "PiecewisePowerFunction") -> "PiecewisePowerFunction":
        out = []
        for a in self.segments:
            for b in other.segments:
                lo, hi = max(a.r_lo, b.r_lo), min(a.r_hi, b.r_hi)
                if lo < hi:
                    out.append(
                        Segment(lo, hi, a.coef * b.coef, a.expr.plus(b.expr), a.pow2 + b.pow2)
                    )
        return PiecewisePowerFunction(tuple(out))

    def pieces_in(self, region: Region):
        """Yield (segment, lo, hi) clipped to the region, snapped at boundaries."""
        for s in self.segments:
            if s.coef == 0.0:
                continue
            lo, hi = max(s.r_lo, region.r_lo), min(s.r_hi, region.r_hi)
            if hi <= lo * (1 + _SNAP) and not (lo == 0.0 and hi > 0.0):
                continue
            if lo > 0 and abs(lo - region.r_lo) <= _SNAP * region.r_lo:
                lo = region.r_lo
            if math.isfinite(hi) and region.r_hi > 0 and math.isfinite(region.r_hi):
                if abs(hi - region.r_hi) <= _SNAP * region.r_hi:
                    hi = region.r_hi
            if hi > lo:
                yield s, lo, hi


# ---------------------------------------------------------------------------
# the modular


def _piece_modular(seg: Segment, u: float, v: float, p: RadialExponent,
                   n: int, eta: float, rel_tol: float) -> tuple[float, bool]:
    """Modular contribution of one clipped segment, with eta folded in.

    Returns (value, eta_independent) where the flag marks divergence that no
    choice of eta can repair (a power tail at or past the critical slope).
    """
    p_lo, p_hi = p.range_on(u, v)
    p_const = p.is_constant or (p_lo == p_hi and math.isfinite(p_lo))

    if p_const and seg.plain_power and math.isfinite(p_lo):
        pbar = p_lo
        a = seg.expr.constant_value()
        beta = n - 1 + a * pbar
        ln_integral = _quad.log_power_integral(u, v, beta)
        if math.isinf(ln_integral) and ln_integral > 0:
            return _INF, True
        ln_val = pbar * (math.log(seg.coef) - math.log(eta)) + ln_integral
        return _quad.exp_clip(ln_val), False

    ln_eta = math.log(eta)

    def log_integrand(s):
        r = math.exp(s) if s < 700 else _INF
        pv = p(r)
        la = seg.log_amplitude_s(s) - ln_eta
        if math.isinf(pv):
            if la < 0:
                return -_INF
            if la == 0:
                return n * s
            return _INF
        return n * s + pv * la

    def integrand(s):
        return _quad.exp_clip(log_integrand(s))

    # --- endpoint analysis -------------------------------------------------
    s_lo = None if u == 0.0 else math.log(u)
    s_hi = None if math.isinf(v) else math.log(v)
    a0, a_inf = seg.exponent_limits()
    c0, c_inf = seg.coef_limits()

    if s_hi is None:
        p_inf = p.p_infty
        if math.isfinite(p_inf):
            beta = n - 1 + a_inf * p_inf
            if beta >= -1.0 - _quad.DIV_TOL:
                return _INF, True
            rate = abs(beta + 1.0)
            ref = max(math.log(u), 0.0) if u > 0 else 0.0
            s_hi = _quad.linear_cutoff(log_integrand, ref, rate, +1)
        else:
            if a_inf > _quad.DIV_TOL:
                return _INF, True
            if abs(a_inf) <= _quad.DIV_TOL and c_inf >= eta * (1 - 1e-12):
                return _INF, False
            start = max(math.log(u), 1.0) if u > 0 else 1.0
            s_hi = _quad.search_cutoff(log_integrand, start, +1)
        if s_hi is None:
            return _INF, False

    if s_lo is None:
        p0 = p.p_zero
        if math.isfinite(p0):
            beta = n - 1 + a0 * p0
            if beta <= -1.0 + _quad.DIV_TOL:
                return _INF, True
            rate = beta + 1.0
            ref = min(s_hi, 0.0)
            s_lo = _quad.linear_cutoff(log_integrand, ref, rate, -1)
        else:
            if a0 < -_quad.DIV_TOL:
                return _INF, True
            start = min(s_hi - 1.0, -1.0)
            s_lo = _quad.search_cutoff(log_integrand, start, -1)
        if s_lo is None:
            return _INF, False

    if s_hi <= s_lo:
        return 0.0, False

    breaks = set(seg.discontinuities())
    breaks.update(p.discontinuities())
    pts = tuple(math.log(b) for b in breaks if b > 0)
    val = _quad.quad_s(integrand, s_lo, s_hi, rel_tol, pts)
    return val, False


def modular(g: PiecewisePowerFunction, p: RadialExponent, region: Region,
            n: int, rel_tol: float = 1e-9) -> float:
    """F_p(g * chi_region); may be +inf, never raises on divergence."""
    return _modular_scaled(g, p, region, n, 1.0, rel_tol)[0]


def _modular_scaled(g, p, region, n, eta, rel_tol):
    sigma = sphere_area(n)
    total = []
    eta_indep = False
    for seg, u, v in g.pieces_in(region):
        val, indep = _piece_modular(seg, u, v, p, n, eta, rel_tol)
        if math.isinf(val):
            return _INF, indep
        total.append(val)
    return sigma * math.fsum(total), eta_indep


def luxemburg_norm(g: PiecewisePowerFunction, p: RadialExponent, region: Region,
                   n: int, rel_tol: float = 1e-9, max_iter: int = 200) -> float:
    """inf{eta > 0 : F_p(g/eta) <= 1}, certified by bisection.

    Returns 0 for the zero function and +inf when no finite eta brackets
    the unit level.  For constant p the norm has the closed form
    F_p(g)^(1/p), which is used directly.
    """
    pieces = list(g.pieces_in(region))
    if not pieces or all(s.coef == 0.0 for s, _, _ in pieces):
        return 0.0

    if p.is_constant and math.isfinite(p.p_zero):
        pbar = p(1.0)
        m = _modular_scaled(g, p, region, n, 1.0, rel_tol)[0]
        if m == 0.0:
            return 0.0
        return m ** (1.0 / pbar)

    evals = 0

    def F(eta):
        nonlocal evals
        evals += 1
        if evals > max_iter:
            raise BracketError("norm bisection exceeded the iteration cap")
        return _modular_scaled(g, p, region, n, eta, rel_tol)

    lo, hi = 1e-12, 1e12
    f_hi, indep = F(hi)
    if math.isinf(f_hi) and indep:
        return _INF
    while f_hi > 1.0:
        lo = hi
        hi *= 1e4
        if hi > 1e280:
            return _INF
        f_hi, indep = F(hi)
        if math.isinf(f_hi) and indep:
            return _INF
    f_lo, _ = F(lo)
    while f_lo < 1.0:
        hi = lo
        lo *= 1e-4
        if lo < 1e-280:
            raise BracketError("modular stays below 1 for arbitrarily small eta")
        f_lo, _ = F(lo)

    while hi > lo * (1.0 + CERT_DELTA):
        mid = math.sqrt(lo * hi)
        if F(mid)[0] <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def weighted_vexp_norm(f: PiecewisePowerFunction, p: RadialExponent,
                       w: PowerWeight, region: Region,
                       rel_tol: float = 1e-9) -> float:
    """Norm of f in the weighted space: the Luxemburg norm of f * |x|^gamma."""
    return luxemburg_norm(f.weighted(w.gamma), p, region, w.n, rel_tol)


def norm_of_one(r_exp: RadialExponent, region: Region, n: int,
                rel_tol: float = 1e-9) -> float:
    """Luxemburg norm of the constant function 1 against the exponent r_exp.

    The everywhere-infinite exponent gives exactly 1 (essential-sup branch);
    exponents with a finite limit at infinity give +inf on unbounded regions.
    """
    if r_exp.infinite_everywhere:
        return 1.0
    return luxemburg_norm(PiecewisePowerFunction.one(), r_exp, region, n, rel_tol)
