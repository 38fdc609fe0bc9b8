"""Evaluators for the twelve boundedness constants and the sharpness regions.

Every constant is a 1-D radial integral of the kernel against per-slot
factors built from the matrix families (norm powers, determinant powers,
dyadic locator sums) and, for the variable-exponent constants, the norm of
the constant function 1 against a per-radius residual exponent.  Factors
that are piecewise powers of the kernel radius integrate exactly; anything
else falls back to adaptive quadrature with per-node memoisation, and
divergence is decided before integrating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from . import _quad
from .exponents import (
    Constant,
    PointwiseSum,
    RadialExponent,
    combine_reciprocal,
    difference_reciprocal,
    pullback_exponent,
)
from .hausdorff import OperatorSpec
from .luxemburg import Region, norm_of_one
from .matrices import family_power_data as _family_power_data, theta_star

__all__ = [
    "SlotParams",
    "BoundConfig",
    "BoundResult",
    "SharpnessSlot",
    "RegionCheck",
    "HypothesisError",
    "CONSTANT_IDS",
    "evaluate_constant",
    "lebesgue_constants",
    "herz_morrey_constants",
    "constparam_constants",
    "central_morrey_constants",
    "sharpness_region_check",
    "slot_region_values",
]

_INF = math.inf

CONSTANT_IDS = (
    "C1", "C2", "C2*", "C3", "C4", "C5", "C5*", "C6", "C6*",
    "C7", "C8", "C9", "C10", "C11", "C12",
)


class HypothesisError(ValueError):
    """A hypothesis needed by the requested constant fails."""


@dataclass(frozen=True)
class SlotParams:
    """Per-slot data: integrability index, weight power, smoothness index,
    Morrey decay, and outer summability index."""

    q: RadialExponent
    gamma: float = 0.0
    alpha: RadialExponent = Constant(0.0, signed=True)
    lam: float = 0.0
    p: float = 2.0


@dataclass(frozen=True)
class BoundConfig:
    operator: OperatorSpec
    slots: tuple[SlotParams, ...]
    zeta: float = 1.0
    rel_tol: float = 1e-9

    def __post_init__(self):
        if len(self.slots) != self.operator.m:
            raise ValueError("need one slot of parameters per operator slot")
        if self.zeta <= 0:
            raise ValueError("zeta must be positive")

    # --- derived couplings -------------------------------------------------

    def combined_q(self) -> RadialExponent:
        return combine_reciprocal([s.q for s in self.slots])

    def gamma_sum(self) -> float:
        return math.fsum(s.gamma for s in self.slots)

    def alpha_sum(self) -> RadialExponent:
        if all(s.alpha.is_constant for s in self.slots):
            return Constant(math.fsum(s.alpha(1.0) for s in self.slots), signed=True)
        return PointwiseSum(tuple(s.alpha for s in self.slots))

    def lam_sum(self) -> float:
        return math.fsum(s.lam for s in self.slots)

    def p_combined(self) -> float:
        return 1.0 / math.fsum(1.0 / s.p for s in self.slots)

    def gamma_weighted(self) -> float:
        """gamma with gamma/q = sum gamma_i/q_i (constant exponents)."""
        q = self.combined_q()
        if not q.is_constant:
            raise HypothesisError("gamma/q coupling needs constant exponents")
        return q(1.0) * math.fsum(s.gamma / s.q(1.0) for s in self.slots)

    def gamma_central(self) -> float:
        qinf = self.combined_q().p_infty
        return qinf * math.fsum(s.gamma / s.q.p_infty for s in self.slots)

    def lam_central(self) -> float:
        n = self.operator.n
        g = self.gamma_central()
        return math.fsum((n + s.gamma) / (n + g) * s.lam for s in self.slots)


@dataclass(frozen=True)
class BoundResult:
    id: str
    value: float
    finite: bool
    breakdown: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "value": None if math.isinf(self.value) else self.value,
            "finite": self.finite,
            "breakdown": self.breakdown,
        }


# ---------------------------------------------------------------------------
# factor algebra: piecewise powers of the kernel radius, plus opaque callables


@dataclass(frozen=True)
class PowerPiece:
    lo: float
    hi: float
    coef: float
    expo: float

    def value(self, r):
        return self.coef * r ** self.expo


def _const_factor(value: float, label: str):
    return [PowerPiece(0.0, _INF, value, 0.0)], label


def _power_factor(coef: float, expo: float, label: str):
    return [PowerPiece(0.0, _INF, coef, expo)], label


def _extreme_factor(base_coef: float, base_expo: float, e1: float, e2: float,
                    want_max: bool, label: str):
    """max or min of (K r^b)^e1 and (K r^b)^e2 as piecewise powers."""
    pick = max if want_max else min
    if base_expo == 0.0:
        return [PowerPiece(0.0, _INF, pick(base_coef ** e1, base_coef ** e2), 0.0)], label
    if e1 == e2:
        return [PowerPiece(0.0, _INF, base_coef ** e1, base_expo * e1)], label
    hi_e, lo_e = (max(e1, e2), min(e1, e2)) if want_max else (min(e1, e2), max(e1, e2))
    r_star = base_coef ** (-1.0 / base_expo)  # where K r^b crosses 1
    # the winner above the crossing is hi_e; which side that is depends on b
    lo_side, hi_side = (lo_e, hi_e) if base_expo > 0 else (hi_e, lo_e)
    return [
        PowerPiece(0.0, r_star, base_coef ** lo_side, base_expo * lo_side),
        PowerPiece(r_star, _INF, base_coef ** hi_side, base_expo * hi_side),
    ], label


@dataclass
class NodeFactor:
    """Opaque per-radius factor evaluated at quadrature nodes (memoised)."""

    fn: Callable[[float], float]
    label: str

    def __post_init__(self):
        self._cache: dict[float, float] = {}

    def value(self, t: float) -> float:
        if t not in self._cache:
            self._cache[t] = self.fn(t)
        return self._cache[t]


def _inv_norm_piece(fam):
    data = _family_power_data(fam)
    if data is None:
        return None
    c, a = data
    return math.sqrt(fam.n) / c, -a


def _norm_piece(fam):
    data = _family_power_data(fam)
    if data is None:
        return None
    c, a = data
    return math.sqrt(fam.n) * c, a


def _c_factor_pieces(fam, q: RadialExponent, gamma: float, label: str):
    """Weight-distortion times determinant-power factor, split where |s|=1.

    The pair max(||A||^-g, ||A^-1||^g) shares the radius power, so only the
    determinant max needs a split.
    """
    data = _family_power_data(fam)
    if data is None:
        return None
    c, a = data
    n = fam.n
    weight_coef = n ** (abs(gamma) / 2.0) * c ** (-gamma)
    weight_expo = -a * gamma
    det_pieces, _ = _extreme_factor(
        c ** (-n), -a * n, 1.0 / q.p_plus, 1.0 / q.p_minus, True, "det"
    )
    out = [
        PowerPiece(p.lo, p.hi, weight_coef * p.coef, weight_expo + p.expo)
        for p in det_pieces
    ]
    return out, label


def _norm_one_node(cfg: BoundConfig, slot: SlotParams, fam, zeta: float) -> NodeFactor | None:
    """The per-radius factor ||1|| for the residual exponent, or None if it
    is identically 1 (degenerate everywhere-infinite residual)."""
    n = cfg.operator.n

    if slot.q.is_constant and zeta == 1.0:
        return None

    def fn(t: float) -> float:
        pulled = pullback_exponent(slot.q, fam, t)
        resid = difference_reciprocal(pulled, slot.q, zeta)
        if resid.infinite_everywhere:
            return 1.0
        return norm_of_one(resid, Region.all(), n, rel_tol=max(cfg.rel_tol, 1e-7))

    return NodeFactor(fn, "norm-of-one")


def _kernel_piece(spec: OperatorSpec):
    k = spec.kernel
    return PowerPiece(k.r_lo, k.r_hi, spec.sigma * k.c, k.a - 1.0)


def _integrate_factors(spec: OperatorSpec, power_factors, node_factors,
                       rel_tol: float):
    """Integrate the kernel piece against all factors; (value, diagnostics)."""
    base = _kernel_piece(spec)
    cuts = {base.lo, base.hi}
    for pieces, _label in power_factors:
        for p in pieces:
            for edge in (p.lo, p.hi):
                if base.lo < edge < base.hi:
                    cuts.add(edge)
    edges = sorted(cuts)

    diag: dict = {
        "factors": [label for _p, label in power_factors]
        + [nf.label for nf in node_factors],
        "pieces": [],
    }

    def local_power(lo, hi):
        mid = math.sqrt(lo * hi) if lo > 0 else (hi / 2 if math.isfinite(hi) else 1.0)
        coef, expo = base.coef, base.expo
        for pieces, _label in power_factors:
            for p in pieces:
                if p.lo <= mid < p.hi:
                    coef *= p.coef
                    expo += p.expo
                    break
            else:
                raise RuntimeError("factor pieces do not cover the support")
        return coef, expo

    total = []
    for lo, hi in zip(edges, edges[1:]):
        if hi <= lo:
            continue
        coef, expo = local_power(lo, hi)
        if not node_factors:
            val = coef * _quad.power_integral(lo, hi, expo)
            diag["pieces"].append({"lo": lo, "hi": hi, "coef": coef, "expo": expo})
            if math.isinf(val):
                diag["divergent_at"] = [lo, hi]
                return _INF, diag
            total.append(val)
            continue

        def log_integrand(s, coef=coef, expo=expo):
            out = math.log(coef) + (expo + 1.0) * s
            r = math.exp(s) if s < 700 else _INF
            if r == 0.0:
                r = 5e-324
            for nf in node_factors:
                nv = nf.value(r)
                if nv <= 0.0:
                    return -_INF
                if math.isinf(nv):
                    return _INF
                out += math.log(nv)
            return out

        def integrand(s):
            return _quad.exp_clip(log_integrand(s))

        expo_eff = expo
        if lo == 0.0 or math.isinf(hi):
            probe_at = hi / 8.0 if lo == 0.0 else lo * 8.0
            expo_eff = expo + math.fsum(
                _probe_slope(nf, probe_at, lo == 0.0) for nf in node_factors
            )
        if lo == 0.0:
            if expo_eff <= -1.0 + 1e-6:
                diag["divergent_at"] = [lo, hi]
                diag["endpoint_slope"] = expo_eff
                return _INF, diag
            s_lo = _quad.linear_cutoff(
                log_integrand, min(math.log(hi), 0.0), expo_eff + 1.0, -1
            )
            if s_lo is None:
                diag["divergent_at"] = [lo, hi]
                return _INF, diag
        else:
            s_lo = math.log(lo)
        if math.isinf(hi):
            if expo_eff >= -1.0 - 1e-6:
                diag["divergent_at"] = [lo, hi]
                diag["endpoint_slope"] = expo_eff
                return _INF, diag
            s_hi = _quad.linear_cutoff(
                log_integrand, max(s_lo, 0.0), abs(expo_eff + 1.0), +1
            )
            if s_hi is None:
                diag["divergent_at"] = [lo, hi]
                return _INF, diag
        else:
            s_hi = math.log(hi)
        val = _quad.quad_s(integrand, s_lo, s_hi, rel_tol)
        diag["pieces"].append({"s_lo": s_lo, "s_hi": s_hi, "quadrature": True})
        total.append(val)
    return math.fsum(total), diag


def _probe_slope(nf: NodeFactor, r0: float, towards_zero: bool) -> float:
    """Empirical log-log slope of an opaque factor near a singular endpoint."""
    step = 1 / 8.0 if towards_zero else 8.0
    rs = [r0, r0 * step, r0 * step ** 2]
    vs = [nf.value(r) for r in rs]
    if any(v <= 0 or math.isinf(v) for v in vs):
        return _INF if any(math.isinf(v) for v in vs) else 0.0
    s1 = math.log(vs[1] / vs[0]) / math.log(rs[1] / rs[0])
    s2 = math.log(vs[2] / vs[1]) / math.log(rs[2] / rs[1])
    # conservative toward divergence at the relevant end
    return min(s1, s2) if towards_zero else max(s1, s2)


# ---------------------------------------------------------------------------
# per-slot hypothesis checks


def _check_pullback_hypothesis(cfg: BoundConfig, zeta: float) -> None:
    """Sampled check of q_i(A_i^{-1}(t) .) <= zeta q_i(.) over the support."""
    k = cfg.operator.kernel
    lo = k.r_lo if k.r_lo > 0 else k.r_hi * 1e-6
    ts = [lo * (k.r_hi / lo) ** (i / 8.0) for i in range(9) if math.isfinite(k.r_hi)]
    if not ts:
        ts = [lo * 4.0 ** i for i in range(9)]
    radii = [10.0 ** (-6 + 12 * i / 40) for i in range(41)]
    for slot, fam in zip(cfg.slots, cfg.operator.families):
        for t in ts:
            pulled = pullback_exponent(slot.q, fam, t)
            for r in radii:
                if pulled(r) > zeta * slot.q(r) * (1 + 1e-12):
                    raise HypothesisError(
                        "pullback bound q(A^-1(t) x) <= zeta q(x) fails at "
                        f"t={t:.4g}, |x|={r:.4g}"
                    )


def _require(cond: bool, name: str) -> None:
    if not cond:
        raise HypothesisError(f"hypothesis violated: {name}")


def _theta_sum(theta: int, c: float) -> float:
    return math.fsum(2.0 ** (r * c) for r in range(theta - 1, 1))


def _theta_of(cfg: BoundConfig) -> int:
    """Dyadic conditioning locator; constant in t for the supported families."""
    k = cfg.operator.kernel
    lo = k.r_lo if k.r_lo > 0 else (k.r_hi / 2 if math.isfinite(k.r_hi) else 1.0)
    hi = k.r_hi if math.isfinite(k.r_hi) else 2 * lo
    samples = [lo, math.sqrt(lo * hi), hi]
    thetas = {theta_star(cfg.operator.families, t) for t in samples}
    if len(thetas) != 1:
        raise HypothesisError("dyadic conditioning locator varies over the support")
    return thetas.pop()


# ---------------------------------------------------------------------------
# the constants


def _run_builders(cfg, builders, which, rel_tol):
    rel_tol = cfg.rel_tol if rel_tol is None else rel_tol
    out: dict[str, BoundResult] = {}
    for cid in which:
        factors, nodes = builders[cid]()
        if any(f is None for f in factors):
            raise HypothesisError("constants need power-law scalar maps")
        val, diag = _integrate_factors(cfg.operator, factors, nodes, rel_tol)
        out[cid] = BoundResult(cid, val, math.isfinite(val), diag)
    return out


def lebesgue_constants(cfg: BoundConfig, rel_tol: float | None = None,
                       which=("C1", "C2", "C2*")) -> dict[str, BoundResult]:
    """C1 (zeta-dilated sources), C2 and C2* (undilated sources)."""
    n = cfg.operator.n

    def build_c1():
        _check_pullback_hypothesis(cfg, cfg.zeta)
        factors, nodes = [], []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            factors.append(_c_factor_pieces(fam, slot.q, slot.gamma, "c-factor"))
            node = _norm_one_node(cfg, slot, fam, cfg.zeta)
            if node is not None:
                nodes.append(node)
        return factors, nodes

    def build_c2(want_max: bool):
        _check_pullback_hypothesis(cfg, 1.0)
        factors, nodes = [], []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            ic, ie = _inv_norm_piece(fam)
            factors.append(
                _extreme_factor(
                    ic, ie,
                    n / slot.q.p_plus + slot.gamma,
                    n / slot.q.p_minus + slot.gamma,
                    want_max,
                    "inv-norm-weight",
                )
            )
            if want_max:
                node = _norm_one_node(cfg, slot, fam, 1.0)
                if node is not None:
                    nodes.append(node)
        return factors, nodes

    builders = {
        "C1": build_c1,
        "C2": lambda: build_c2(True),
        "C2*": lambda: build_c2(False),
    }
    return _run_builders(cfg, builders, which, rel_tol)


def herz_morrey_constants(cfg: BoundConfig, rel_tol: float | None = None,
                          which=("C3", "C4", "C5", "C5*", "C6", "C6*"),
                          ) -> dict[str, BoundResult]:
    """C3/C4 (zeta-dilated Morrey-Herz and Herz) and C5/C5*/C6/C6*.

    The integrands are defined at lam = 0 and the definitional reductions
    evaluate there, so only negative lam raises.
    """
    n = cfg.operator.n
    theta = _theta_of(cfg)

    def a0_ainf(slot):
        return slot.alpha.p_zero, slot.alpha.p_infty

    def build_c3():
        _check_pullback_hypothesis(cfg, cfg.zeta)
        factors, nodes = [], []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            a0, ainf = a0_ainf(slot)
            _require(a0 - ainf >= 0, "alpha(0) >= alpha(inf)")
            _require(slot.lam >= 0, "lam_i >= 0")
            factors.append(_c_factor_pieces(fam, slot.q, slot.gamma, "c-factor"))
            nc, ne = _norm_piece(fam)
            factors.append(
                _extreme_factor(nc, ne, slot.lam - a0, slot.lam - ainf, True, "norm-shift")
            )
            tsum = max(_theta_sum(theta, slot.lam - a0), _theta_sum(theta, slot.lam - ainf))
            factors.append(_const_factor(tsum, "dyadic-sum"))
            node = _norm_one_node(cfg, slot, fam, cfg.zeta)
            if node is not None:
                nodes.append(node)
        return factors, nodes

    def build_c4():
        _check_pullback_hypothesis(cfg, cfg.zeta)
        p = cfg.p_combined()
        factors = [_const_factor((2.0 - theta) ** (cfg.operator.m - 1.0 / p), "theta-count")]
        nodes = []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            a0, ainf = a0_ainf(slot)
            _require(abs(a0 - ainf) <= 1e-12, "alpha(0) == alpha(inf)")
            factors.append(_c_factor_pieces(fam, slot.q, slot.gamma, "c-factor"))
            nc, ne = _norm_piece(fam)
            factors.append(_power_factor(nc ** (-a0), -ne * a0, "norm-alpha0"))
            factors.append(_const_factor(_theta_sum(theta, -a0), "dyadic-sum"))
            node = _norm_one_node(cfg, slot, fam, cfg.zeta)
            if node is not None:
                nodes.append(node)
        return factors, nodes

    def build_c5(star: bool):
        _check_pullback_hypothesis(cfg, 1.0)
        factors, nodes = [], []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            a0, ainf = a0_ainf(slot)
            if not star:
                _require(a0 - ainf >= 0, "alpha(0) >= alpha(inf)")
            _require(slot.lam >= 0, "lam_i >= 0")
            ic, ie = _inv_norm_piece(fam)
            factors.append(
                _extreme_factor(
                    ic, ie,
                    n / slot.q.p_plus + slot.gamma,
                    n / slot.q.p_minus + slot.gamma,
                    not star,
                    "inv-norm-weight",
                )
            )
            factors.append(_power_factor(ic ** (-slot.lam), -ie * slot.lam, "inv-norm-lam"))
            if star:
                if not slot.alpha.log_holder_certified:
                    raise HypothesisError(
                        "sharp-side constant needs a certified continuity constant for alpha"
                    )
                c0 = slot.alpha.c_log_zero
                factors.append(
                    _extreme_factor(ic, ie, a0 + c0, a0 - c0, False, "inv-norm-alpha-band")
                )
            else:
                factors.append(
                    _extreme_factor(ic, ie, a0, ainf, True, "inv-norm-alpha")
                )
                node = _norm_one_node(cfg, slot, fam, 1.0)
                if node is not None:
                    nodes.append(node)
        return factors, nodes

    def build_c6(star: bool):
        _check_pullback_hypothesis(cfg, 1.0)
        factors, nodes = [], []
        all_const_q = all(s.q.is_constant for s in cfg.slots)
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            a0, ainf = a0_ainf(slot)
            ic, ie = _inv_norm_piece(fam)
            if star and all_const_q:
                e = a0 + n / slot.q(1.0) + slot.gamma
                factors.append(_power_factor(ic ** e, ie * e, "inv-norm-herz"))
                continue
            factors.append(
                _extreme_factor(
                    ic, ie,
                    n / slot.q.p_plus + slot.gamma,
                    n / slot.q.p_minus + slot.gamma,
                    not star,
                    "inv-norm-weight",
                )
            )
            if star:
                lo, hi = slot.alpha.range_on(0.0, _INF)
                sup_alpha = max(abs(lo), abs(hi))
                factors.append(
                    _power_factor(ic ** sup_alpha, ie * sup_alpha, "inv-norm-alpha-sup")
                )
            else:
                _require(abs(a0 - ainf) <= 1e-12, "alpha(0) == alpha(inf)")
                factors.append(_power_factor(ic ** a0, ie * a0, "inv-norm-alpha0"))
                node = _norm_one_node(cfg, slot, fam, 1.0)
                if node is not None:
                    nodes.append(node)
        return factors, nodes

    builders = {
        "C3": build_c3,
        "C4": build_c4,
        "C5": lambda: build_c5(False),
        "C5*": lambda: build_c5(True),
        "C6": lambda: build_c6(False),
        "C6*": lambda: build_c6(True),
    }
    return _run_builders(cfg, builders, which, rel_tol)


def constparam_constants(cfg: BoundConfig, rel_tol: float | None = None,
                         which=("C7", "C8", "C9")) -> dict[str, BoundResult]:
    """C7/C8 (constant-parameter Morrey-Herz and Herz targets) and C9
    (power-weight Lebesgue targets under equal-modulus dilations)."""
    n = cfg.operator.n
    for slot in cfg.slots:
        _require(slot.q.is_constant, "constant integrability exponents")
        _require(slot.alpha.is_constant, "constant smoothness indices")

    def powers_of(exps_fn, check=None):
        factors = []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            if check:
                check(slot)
            ic, ie = _inv_norm_piece(fam)
            e = exps_fn(slot)
            factors.append(_power_factor(ic ** e, ie * e, "inv-norm"))
        return factors, []

    def build_c9():
        factors = []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            data = _family_power_data(fam)
            if data is None:
                raise HypothesisError("constants need power-law scalar maps")
            c, a = data
            e = -(slot.alpha(1.0) + n / slot.p)
            factors.append(_power_factor(c ** e, a * e, "dilation-scale"))
        return factors, []

    builders = {
        "C7": lambda: powers_of(
            lambda s: -s.lam + s.alpha(1.0) + (n + s.gamma) / s.q(1.0),
            check=lambda s: _require(s.lam >= 0, "lam_i >= 0"),
        ),
        "C8": lambda: powers_of(lambda s: s.alpha(1.0) + (n + s.gamma) / s.q(1.0)),
        "C9": build_c9,
    }
    return _run_builders(cfg, builders, which, rel_tol)


def central_morrey_constants(cfg: BoundConfig, rel_tol: float | None = None,
                             which=("C10", "C11", "C12")) -> dict[str, BoundResult]:
    """C10 (variable-exponent two-weight), C11 and C12 (constant-exponent)."""
    n = cfg.operator.n
    for slot in cfg.slots:
        qinf = slot.q.p_infty
        _require(-1.0 / qinf < slot.lam < 0, "lam_i in (-1/q_inf, 0)")
        _require(slot.gamma > -n, "gamma_i > -n")
        _require(slot.alpha.is_constant, "constant inner weight powers")

    def build_c10():
        _check_pullback_hypothesis(cfg, 1.0)
        factors, nodes = [], []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            nc, ne = _norm_piece(fam)
            e = (n + slot.gamma) * (1.0 / slot.q.p_infty + slot.lam)
            factors.append(_power_factor(nc ** e, ne * e, "norm-ball-growth"))
            factors.append(_c_factor_pieces(fam, slot.q, slot.alpha(1.0), "c-factor"))
            node = _norm_one_node(cfg, slot, fam, 1.0)
            if node is not None:
                nodes.append(node)
        return factors, nodes

    def powers_of(exps_fn):
        factors = []
        for slot, fam in zip(cfg.slots, cfg.operator.families):
            ic, ie = _inv_norm_piece(fam)
            e = exps_fn(slot)
            factors.append(_power_factor(ic ** e, ie * e, "inv-norm"))
        return factors, []

    builders = {
        "C10": build_c10,
        "C11": lambda: powers_of(
            lambda s: s.alpha(1.0) - s.gamma / s.q.p_infty - s.lam * (n + s.gamma)
        ),
        "C12": lambda: powers_of(lambda s: -(n + s.gamma) * s.lam),
    }
    return _run_builders(cfg, builders, which, rel_tol)


_GROUPS = {
    "C1": lebesgue_constants, "C2": lebesgue_constants, "C2*": lebesgue_constants,
    "C3": herz_morrey_constants, "C4": herz_morrey_constants,
    "C5": herz_morrey_constants, "C5*": herz_morrey_constants,
    "C6": herz_morrey_constants, "C6*": herz_morrey_constants,
    "C7": constparam_constants, "C8": constparam_constants, "C9": constparam_constants,
    "C10": central_morrey_constants, "C11": central_morrey_constants,
    "C12": central_morrey_constants,
}


def evaluate_constant(cfg: BoundConfig, cid: str, rel_tol: float | None = None) -> BoundResult:
    if cid not in _GROUPS:
        raise KeyError(f"unknown constant id {cid!r}")
    return _GROUPS[cid](cfg, rel_tol, which=(cid,))[cid]


# ---------------------------------------------------------------------------
# sharpness regions


@dataclass(frozen=True)
class SharpnessSlot:
    q_minus: float
    q_plus: float
    alpha0: float
    alpha_inf: float
    c0: float
    c_inf: float
    lam: float
    beta0: float
    beta_inf: float
    theta0: float
    theta_inf: float
    eta0: float
    eta1: float
    zeta0: float
    zeta1: float
    c_alpha: float

    @property
    def in_intervals(self) -> bool:
        return (
            self.eta0 - 1e-15 <= self.lam <= self.eta1 + 1e-15
            and self.zeta0 - 1e-15 <= self.lam <= self.zeta1 + 1e-15
        )

    @property
    def thetas_nonneg(self) -> bool:
        return self.theta0 >= 0.0 and self.theta_inf >= 0.0


def slot_region_values(q_minus, q_plus, alpha0, alpha_inf, c0, c_inf, lam) -> SharpnessSlot:
    """All region data for one slot from the raw parameter values."""
    ratio_up = q_plus / q_minus
    ratio_dn = q_minus / q_plus
    beta0 = ratio_up if lam - alpha0 + c0 >= 0 else ratio_dn
    beta_inf = ratio_up if lam - alpha_inf - c_inf < 0 else ratio_dn
    theta0 = lam - alpha_inf - (lam - alpha0 + c0) * beta0
    theta_inf = alpha0 + (lam - alpha_inf - c_inf) * beta_inf - lam

    if q_plus == q_minus:
        eta0 = zeta0 = -_INF
        eta1 = zeta1 = _INF
    else:
        eta0 = (c0 * ratio_dn - alpha0 * ratio_dn + alpha_inf) / (1.0 - ratio_dn)
        eta1 = (c0 * ratio_up - alpha0 * ratio_up + alpha_inf) / (1.0 - ratio_up)
        zeta0 = (c_inf * ratio_up - alpha0 + alpha_inf * ratio_up) / (ratio_up - 1.0)
        zeta1 = (c_inf * ratio_dn - alpha0 + alpha_inf * ratio_dn) / (ratio_dn - 1.0)
    c_alpha = q_minus * (alpha0 - alpha_inf) * (1.0 + ratio_up) / q_plus
    return SharpnessSlot(
        q_minus, q_plus, alpha0, alpha_inf, c0, c_inf, lam,
        beta0, beta_inf, theta0, theta_inf, eta0, eta1, zeta0, zeta1, c_alpha,
    )


@dataclass(frozen=True)
class RegionCheck:
    case: str  # "b1" | "b2" | "b3" | "none"
    satisfied: bool
    slots: tuple[SharpnessSlot, ...]
    herz_case: str  # same for the Herz-side conditions
    reciprocal_identity: bool  # sum 1/q_i- == 1/q+


def _slot_from_params(slot: SlotParams) -> SharpnessSlot:
    alpha = slot.alpha
    if not alpha.log_holder_certified:
        raise HypothesisError(
            "region membership needs certified continuity constants for alpha"
        )
    return slot_region_values(
        slot.q.p_minus, slot.q.p_plus,
        alpha.p_zero, alpha.p_infty,
        alpha.c_log_zero, alpha.c_log_infty,
        slot.lam,
    )


def sharpness_region_check(cfg: BoundConfig) -> RegionCheck:
    """Classify the configuration against the sharpness conditions.

    Case b1: equal exponent bounds with small continuity constants.
    Case b2: unequal bounds but flat smoothness index, lam pinned to it.
    Case b3: unequal bounds with lam inside the four-endpoint window; here
    the sign test theta0 >= 0 and theta_inf >= 0 must agree with interval
    membership, and that equivalence is verified numerically.
    """
    slots = tuple(_slot_from_params(s) for s in cfg.slots)

    def is_b1(s: SharpnessSlot):
        return (
            s.q_plus == s.q_minus
            and s.c0 <= s.alpha0 - s.alpha_inf + 1e-15
            and s.c_inf <= s.alpha0 - s.alpha_inf + 1e-15
        )

    def is_b2(s: SharpnessSlot):
        return (
            s.q_plus != s.q_minus
            and s.c0 == 0.0
            and s.c_inf == 0.0
            and s.lam == s.alpha0 == s.alpha_inf
        )

    def is_b3(s: SharpnessSlot):
        gap = s.alpha0 - s.alpha_inf
        return (
            s.q_plus != s.q_minus
            and s.c0 < gap
            and s.c_inf < gap
            and s.c0 + s.c_inf <= s.c_alpha + 1e-15
            and s.in_intervals
        )

    case = "none"
    if all(is_b1(s) for s in slots):
        case = "b1"
    elif all(is_b2(s) for s in slots):
        case = "b2"
    elif all(is_b3(s) for s in slots):
        case = "b3"
        for s in slots:
            if s.thetas_nonneg != s.in_intervals:
                raise RuntimeError(
                    "sign test disagrees with interval membership in case b3"
                )

    def herz_b2(slot: SlotParams, s: SharpnessSlot):
        lo, hi = slot.alpha.range_on(0.0, _INF)
        sup_alpha = max(abs(lo), abs(hi))
        return s.alpha0 < sup_alpha * s.q_minus / s.q_plus

    herz_case = "none"
    if all(s.q_plus == s.q_minus for s in slots):
        herz_case = "b1"
    elif all(herz_b2(sp, s) for sp, s in zip(cfg.slots, slots)):
        herz_case = "b2"

    q = cfg.combined_q()
    recip = abs(
        math.fsum(1.0 / s.q_minus for s in slots) - 1.0 / q.p_plus
    ) <= 1e-12

    return RegionCheck(case, case != "none", slots, herz_case, recip)
