"""Acceptance criteria, one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
summary lines; tolerances are pinned here and nowhere else.
"""

import math
from pathlib import Path

import pytest

from hausnorm.bounds import (
    BoundConfig,
    SlotParams,
    constparam_constants,
    evaluate_constant,
    herz_morrey_constants,
    lebesgue_constants,
    slot_region_values,
)
from hausnorm.cli import main as cli_main
from hausnorm.exponents import Constant, LogInterp, PowerWeight
from hausnorm.harness import extremal_family, sharpness_sweep, spaces_for_constant, upper_bound_suite
from hausnorm.hausdorff import (
    OperatorSpec,
    RadialKernel,
    from_multilinear_hardy_cesaro,
    operator_ratio,
)
from hausnorm.luxemburg import (
    ExponentExpr,
    PiecewisePowerFunction,
    Region,
    Segment,
    luxemburg_norm,
    modular,
    weighted_vexp_norm,
)
from hausnorm.matrices import (
    DiagonalEqualModulus,
    OrthogonalTimesScalar,
    PowerMap,
    ScalarDilation,
    dyadic_index,
    frobenius_norm,
    inverse_stats,
)
from hausnorm.spaces import SpaceSpec, herz_norm, morrey_herz_norm, space_norm

from conftest import seeded

FIXTURES = Path(__file__).parent / "fixtures"


def _report(num, text):
    print(f"PASS criterion {num}: {text}")


def test_criterion_1_luxemburg_closed_form():
    """Constant-exponent norms of single powers match the closed form."""
    rng = seeded(1001)
    for _ in range(50):
        p = rng.choice([1.5, 2.0, 3.0])
        c = rng.uniform(0.05, 10.0)
        a = rng.uniform(-0.5, 1.5)
        u, v = sorted(rng.uniform(0.05, 8.0) for _ in range(2))
        if v - u < 0.01:
            v = u + 0.5
        f = PiecewisePowerFunction.single_power(c, a, u, v)
        beta = a * p
        if abs(beta + 1.0) < 1e-9:
            integral = math.log(v / u)
        else:
            integral = (v ** (beta + 1) - u ** (beta + 1)) / (beta + 1)
        expected = (2.0 * c**p * integral) ** (1.0 / p)
        got = luxemburg_norm(f, Constant(p), Region.all(), 1)
        assert got == pytest.approx(expected, rel=1e-8)
    _report(1, "50 constant-exponent power norms match the closed form at rel 1e-8")


def test_criterion_2_modular_norm_bracketing():
    """Modular level C brackets the norm between min/max of C^(1/p+-)."""
    rng = seeded(1002)
    violations = 0
    for _ in range(200):
        p = LogInterp(rng.uniform(2.2, 4.0), rng.uniform(1.3, 2.1))
        u, v = sorted(rng.uniform(0.05, 6.0) for _ in range(2))
        if v - u < 0.02:
            v = u + 0.3
        f = PiecewisePowerFunction.single_power(
            rng.uniform(0.05, 5.0), rng.uniform(-0.4, 1.2), u, v
        )
        C = modular(f, p, Region.all(), 1)
        norm = luxemburg_norm(f, p, Region.all(), 1)
        hi = max(C ** (1 / p.p_minus), C ** (1 / p.p_plus))
        lo = min(C ** (1 / p.p_minus), C ** (1 / p.p_plus))
        if not (norm <= hi * (1 + 1e-9) and norm >= lo * (1 - 1e-9)):
            violations += 1
    assert violations == 0
    _report(2, "200 modular/norm bracketing pairs hold at tolerance 1e-9, zero violations")


def test_criterion_3_hardy_sharp_constant(hardy_op, hardy_cfg):
    """The averaging operator at integrability 2 has sharp constant 2."""
    c9 = evaluate_constant(hardy_cfg, "C9")
    assert c9.value == pytest.approx(2.0, abs=1e-9)

    suite = upper_bound_suite(hardy_op, hardy_cfg, "C9", 100, 42)
    assert suite.exact
    assert len(suite.violations) == 0

    sweep = sharpness_sweep(hardy_op, hardy_cfg, "lebesgue_eps", [0.1, 0.03, 0.01])
    ratios = [row[1] for row in sweep.rows]
    assert ratios[-1] == pytest.approx(1.980, abs=5e-3)
    assert ratios[0] < ratios[1] < ratios[2]
    _report(
        3,
        f"C9 = {c9.value:.9f}; suite max ratio {suite.max_ratio:.4f} with 0 violations; "
        f"sweep ratio(0.01) = {ratios[-1]:.4f}, monotone",
    )


def test_criterion_4_bilinear_sharp_constant():
    """Two slots with quarter integrability couple to the same constant 2."""
    op = from_multilinear_hardy_cesaro(
        PowerMap(1.0, 0.0), [PowerMap(1.0, 1.0), PowerMap(1.0, 1.0)]
    )
    cfg = BoundConfig(
        op, (SlotParams(q=Constant(2.0), p=4.0), SlotParams(q=Constant(2.0), p=4.0))
    )
    c9 = evaluate_constant(cfg, "C9")
    assert c9.value == pytest.approx(2.0, abs=1e-9)
    suite = upper_bound_suite(op, cfg, "C9", 100, 42)
    assert suite.exact and len(suite.violations) == 0
    _report(4, f"bilinear C9 = {c9.value:.9f}; 100 tuples, 0 violations, max ratio {suite.max_ratio:.4f}")


def test_criterion_5_central_morrey_exactness():
    """Annular kernel with unit-slope dilations: norm quotient equals C12."""
    kern = RadialKernel(1.0, 0.0, 1.0, 2.0, one_sided=False)
    op = OperatorSpec(1, 1, kern, (ScalarDilation(PowerMap(1.0, 1.0), 1),))
    cfg = BoundConfig(op, (SlotParams(q=Constant(2.0), gamma=0.0, lam=-0.1),))

    c12 = evaluate_constant(cfg, "C12")
    assert c12.value == pytest.approx(1.33934, abs=1e-5)

    fs = extremal_family("central_morrey_power", cfg)
    sources, target = spaces_for_constant(cfg, "C12")
    norm = space_norm(fs[0], sources[0]).value
    assert norm == pytest.approx(1.19828, abs=1e-4)

    ratio = operator_ratio(op, fs, sources, target)
    assert ratio == pytest.approx(c12.value, rel=1e-6)
    _report(
        5,
        f"C12 = {c12.value:.6f}; member norm {norm:.6f}; ratio/C12 - 1 = "
        f"{ratio / c12.value - 1.0:.2e}",
    )


def test_criterion_6_definitional_reductions(hardy_cfg):
    """Degenerate parameters collapse the spaces and constants pairwise."""
    rng = seeded(1006)
    alpha1 = Constant(0.7, signed=True)

    # Morrey-Herz at lam = 0 equals the Herz value exactly
    for _ in range(5):
        edges = sorted(2.0 ** rng.uniform(-4, 4) for _ in range(4))
        segs = tuple(
            Segment(lo, hi, rng.uniform(0.2, 2.0), ExponentExpr(rng.uniform(-1, 1)))
            for lo, hi in zip(edges, edges[1:])
            if hi > lo * (1 + 1e-9)
        )
        f = PiecewisePowerFunction(segs)
        h = SpaceSpec("herz", 1, Constant(2.0), alpha=alpha1, p_outer=1.5)
        mh = SpaceSpec("morrey_herz", 1, Constant(2.0), alpha=alpha1, lam=0.0, p_outer=1.5)
        assert morrey_herz_norm(f, mh).value == herz_norm(f, h).value

    # alpha = 0 with matching inner and outer indices rebuilds the full norm
    for _ in range(20):
        p = rng.choice([1.5, 2.0, 3.0])
        edges = sorted(2.0 ** rng.uniform(-4, 4) for _ in range(3))
        segs = tuple(
            Segment(lo, hi, rng.uniform(0.2, 2.0), ExponentExpr(rng.uniform(-1, 1)))
            for lo, hi in zip(edges, edges[1:])
            if hi > lo * (1 + 1e-9)
        )
        f = PiecewisePowerFunction(segs)
        spec = SpaceSpec("herz", 1, Constant(p), alpha=Constant(0.0, signed=True), p_outer=p)
        lhs = herz_norm(f, spec, (-20, 20)).value
        rhs = luxemburg_norm(f, Constant(p), Region.all(), 1)
        assert lhs == pytest.approx(rhs, rel=1e-6)

    leb = lebesgue_constants(hardy_cfg, which=("C2", "C2*"))
    assert abs(leb["C2"].value - leb["C2*"].value) <= 1e-12
    hm = herz_morrey_constants(hardy_cfg, which=("C5", "C5*", "C6", "C6*"))
    assert abs(hm["C5"].value - hm["C5*"].value) <= 1e-12
    assert abs(hm["C6"].value - hm["C6*"].value) <= 1e-12
    cp = constparam_constants(hardy_cfg, which=("C7", "C8"))
    assert abs(cp["C7"].value - cp["C8"].value) <= 1e-12
    _report(6, "space and constant reductions collapse pairwise (1e-12 / 1e-6)")


def test_criterion_7_matrix_layer_oracles():
    """Closed forms for the dyadic locators match integer scans; the
    determinant sandwich and conditioning transfers hold on samples."""
    rng = seeded(1007)

    def scan_dyadic(x):
        for ell in range(-80, 81):
            if 2.0 ** (ell - 1) < x <= 2.0**ell:
                return ell
        raise AssertionError

    def scan_theta(rho):
        best = None
        for t in range(-80, 81):
            if rho < 2.0 ** (-t):
                best = t
        return best

    for _ in range(1000):
        x = 2.0 ** rng.uniform(-55.0, 55.0)
        assert dyadic_index(x) == scan_dyadic(x)
        rho = 2.0 ** rng.uniform(0.0, 10.0)
        m, e = math.frexp(rho)
        assert -(e - 1) - 1 == scan_theta(rho)

    rot = ((0.0, -1.0), (1.0, 0.0))
    fams = [
        ScalarDilation(PowerMap(1.3, 0.9), 1),
        ScalarDilation(PowerMap(0.4, -0.7), 2),
        DiagonalEqualModulus(PowerMap(2.2, 0.5), (1, -1, 1)),
        OrthogonalTimesScalar(rot, PowerMap(0.8, 1.5)),
    ]
    import numpy as np

    for _ in range(100):
        fam = rng.choice(fams)
        t = rng.uniform(0.08, 7.0)
        sigma = rng.choice([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
        norm = frobenius_norm(fam, t)
        inv_norm, det_inv = inverse_stats(fam, t)
        rho = float(fam.n)
        assert norm ** (-fam.n) <= det_inv * (1 + 1e-12)
        assert det_inv <= inv_norm**fam.n * (1 + 1e-12)
        assert norm**sigma <= rho ** abs(sigma) * inv_norm ** (-sigma) * (1 + 1e-12)
        x = np.array([rng.uniform(-2, 2) for _ in range(fam.n)])
        if float(np.linalg.norm(x)) < 1e-6:
            continue
        ax = float(np.linalg.norm(fam.matrix(t) @ x))
        assert ax**sigma >= (
            rho ** (-abs(sigma)) * inv_norm ** (-sigma) * float(np.linalg.norm(x)) ** sigma
        ) * (1 - 1e-12)
    _report(7, "dyadic locators match scans on 1000 draws; sandwich and transfers on 100 samples")


def test_criterion_8_region_predicate_equivalence():
    """Sign test against interval membership along a fine decay-rate grid."""
    rng = seeded(1008)
    checked = 0
    for _ in range(20):
        q_minus = rng.uniform(1.2, 3.0)
        q_plus = q_minus + rng.uniform(0.2, 2.0)
        gap = rng.uniform(0.3, 1.5)
        alpha_inf = rng.uniform(-0.5, 0.5)
        alpha0 = alpha_inf + gap
        c_alpha = q_minus * gap * (1.0 + q_plus / q_minus) / q_plus
        c0 = rng.uniform(0.0, min(0.9 * gap, c_alpha))
        c_inf = rng.uniform(0.0, min(0.9 * gap, max(c_alpha - c0, 0.0)))
        probe = slot_region_values(q_minus, q_plus, alpha0, alpha_inf, c0, c_inf, 0.0)
        lam = min(probe.eta0, probe.zeta0) - 0.5
        hi = max(probe.eta1, probe.zeta1) + 0.5
        while lam <= hi:
            s = slot_region_values(q_minus, q_plus, alpha0, alpha_inf, c0, c_inf, lam)
            near_edge = any(
                abs(lam - e) <= 1e-3 for e in (s.eta0, s.eta1, s.zeta0, s.zeta1)
            )
            if not near_edge:
                assert s.thetas_nonneg == s.in_intervals
                checked += 1
            lam += 1e-3
    assert checked > 10000
    _report(8, f"sign test equals interval membership at {checked} grid points")


def test_criterion_9_shell_norm_decay_band(hardy_op):
    """Plain shell norms of the power member track the endpoint decay rates."""
    q = Constant(2.0)
    alpha = LogInterp(0.6, 0.2, signed=True)
    lam = 0.3
    cfg = BoundConfig(hardy_op, (SlotParams(q=q, alpha=alpha, lam=lam, p=2.0),))
    fs = extremal_family("morrey_herz_power", cfg)
    sources, _ = spaces_for_constant(cfg, "C5")
    mk = space_norm(fs[0], sources[0]).value
    assert 0.0 < mk < math.inf
    w = PowerWeight(0.0, 1)
    ratios = []
    for j in list(range(-40, -4)) + list(range(5, 41)):
        plain = weighted_vexp_norm(fs[0], q, w, Region.shell(j))
        rate = lam - (alpha.p_zero if j <= -5 else alpha.p_infty)
        ratios.append(plain / (2.0 ** (j * rate) * mk))
    spread = max(ratios) / min(ratios)
    assert spread < 1e3
    _report(9, f"shell decay ratios stay in a factor-{spread:.2f} band over both tails")


def test_criterion_10_verify_determinism(tmp_path):
    """Fixed seed gives byte-identical CSV across runs and worker counts."""
    outputs = []
    for i, workers in enumerate((1, 1, 4)):
        out = tmp_path / f"run{i}.csv"
        code = cli_main(
            ["verify", "--config", str(FIXTURES / "hardy_p2.json"),
             "--suite", "upper", "--n", "12", "--seed", "42",
             "--workers", str(workers), "--out", str(out)]
        )
        assert code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
    _report(10, "verify CSV byte-identical across repeated runs and worker counts 1/4")
