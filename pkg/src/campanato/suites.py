"""Acceptance suites shared by ``campanato verify`` and the test-suite.

Each suite returns a :class:`SuiteResult`: the measured quantities (written
as CSV by ``verify``) and named pass/fail checks at fixed tolerances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _sint

from .commutator import KernelConfig, commutator_apply, convolution_range_probe, frac_integral, tail_decay_probe
from .families import default_domain, lattice_family
from .grid import Cube, GridFunction, GridSpec, catalog, integrate, interval, restrict
from .io import rows_csv
from .oscillation import (key_estimate_ratio, lip_modulus, literal_key_ratio, mollifier_second_moment, osc_many,
                          second_diff_modulus, u_decompose)
from .polyproj import minimal_polynomial, moment_residuals
from .spaces import (Herz, Lorentz, Lp, MixedNorm, Morrey, VariableLp, WeightedLp, associate, indicator_norm,
                     lorentz_norm, norm)
from .vanishing import CurveConfig, cross_space_compare

TWO_OVER_E = 2.0 / math.e


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    detail: str


@dataclass
class SuiteResult:
    name: str
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def record(self, key: str, value: float):
        self.rows.append((key, float(value)))

    def check(self, label: str, passed: bool, detail: str):
        self.checks.append(Check(label, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def csv(self) -> str:
        return rows_csv(self.rows, header=("quantity", "value"))

    def lines(self) -> list:
        return [f"[{'PASS' if c.passed else 'FAIL'}] {self.name}: {c.label} ({c.detail})" for c in self.checks]


def _weight(grid: GridSpec) -> GridFunction:
    return catalog("power_weight", {"delta": 0.5}, grid)


def criterion_spaces_1d(grid: GridSpec) -> list:
    """The one-dimensional members of the criterion space lists."""
    return [Lp(1.5), WeightedLp(2.0, _weight(grid), "|x|^0.5"), Herz(0.1, 2.0, 2.0),
            Lp(1.0), Lp(2.0), Morrey(3.0, 2.0), Lorentz(2.0, 2.0)]


# ---------------------------------------------------------------------------
# 1. projection exactness

def suite_projection(seed: int = 0, count: int = 50) -> SuiteResult:
    res = SuiteResult("projection")
    rng = np.random.default_rng(seed)
    worst_c, worst_m = 0.0, 0.0
    for k in range(count):
        dim = 1 + k % 2
        s = (k // 2) % 2
        grid = GridSpec(dim, 1.0, 4096 if dim == 1 else 256)
        c = rng.normal(size=1 + (dim if s else 0))
        coeffs = list(c) if dim == 1 else list(c) if s else [c[0]]
        f = catalog("poly", {"coeffs": coeffs}, grid)
        edge = rng.uniform(0.05, 1.0)
        center = rng.uniform(-1 + edge / 2, 1 - edge / 2, size=dim)
        Q = Cube(tuple(center), edge)
        P = minimal_polynomial(f, Q, s)
        # true coefficients in the basis (x - centre)^g
        grad = np.asarray(c[1:]) if s else np.zeros(0)
        truth = np.concatenate([[c[0] + float(grad @ center) if s else c[0]], grad])
        err = float(np.max(np.abs(P.coeffs - truth)) / max(1.0, np.max(np.abs(truth))))
        mres = float(np.max(np.abs(moment_residuals(f, Q, P))))
        worst_c, worst_m = max(worst_c, err), max(worst_m, mres)
    res.record("max_relative_coefficient_error", worst_c)
    res.record("max_moment_residual", worst_m)
    res.check("coefficients reproduced", worst_c <= 1e-10, f"max rel err {worst_c:.2e} <= 1e-10")
    res.check("moment residuals", worst_m <= 1e-8, f"max residual {worst_m:.2e} <= 1e-8")
    return res


# ---------------------------------------------------------------------------
# 2. analytic oscillation values

def suite_oscillation(seed: int = 0) -> SuiteResult:
    res = SuiteResult("oscillation")
    grid = GridSpec(1, 1.0, 4096)
    x = catalog("poly", {"coeffs": [0.0, 1.0]}, grid)
    v = osc_many(x, interval(0, 1), 0.0, [None])[0]
    res.record("osc_x_on_unit_interval", v)
    res.check("osc(x, [0,1], 0) = 1/4", abs(v - 0.25) <= 1e-3, f"{v:.6f}")
    L = catalog("log_abs", None, grid)
    for a in (1 / 4, 1 / 16, 1 / 64):
        w = osc_many(L, interval(0, a), 0.0, [None])[0]
        res.record(f"osc_log_on_0_{a:g}", w)
        res.check(f"osc(log, (0,{a:g}], 0) = 2/e", abs(w - TWO_OVER_E) <= 2e-2, f"{w:.5f} vs {TWO_OVER_E:.5f}")
    return res


# ---------------------------------------------------------------------------
# 3. Hoelder and reverse Hoelder

def _holder_setup(resolution_1d: int, resolution_2d: int):
    g1 = GridSpec(1, 1.0, resolution_1d)
    g2 = GridSpec(2, 1.0, resolution_2d)
    return [("Lp(3/2)", Lp(1.5), g1), ("weighted L2 |x|^1/2", WeightedLp(2.0, _weight(g1), "|x|^0.5"), g1),
            ("MixedNorm(3,3/2)", MixedNorm((3.0, 1.5)), g2), ("Herz(0.1,2,2)", Herz(0.1, 2.0, 2.0), g1)]


def reverse_holder_constant(X, grid: GridSpec, scales=(1 / 8, 1 / 4, 1 / 2, 1.0)) -> float:
    """``max ||1_Q||_X ||1_Q||_X' / |Q|`` over non-overlapping dyadic cubes of four scales in [-1, 1]^n."""
    f = GridFunction(grid.box, np.zeros((grid.n,) * grid.dim))
    Xa = associate(X)
    best = 0.0
    for edge in scales:
        cells = int(round(edge / f.h))
        for Q in lattice_family(f, f.box, cells, cells):
            best = max(best, indicator_norm(X, f, Q) * indicator_norm(Xa, f, Q) / Q.volume)
    return best


def suite_holder(seed: int = 0, pairs: int = 100) -> SuiteResult:
    res = SuiteResult("holder")
    rng = np.random.default_rng(seed)
    for label, X, grid in _holder_setup(4096, 128):
        Xa = associate(X)
        worst = 0.0
        D = grid.box
        for _ in range(pairs):
            sf, sg = (int(v) for v in rng.integers(0, 2 ** 31, size=2))
            f = catalog("trig", {"seed": sf, "terms": 6}, grid)
            g = catalog("trig", {"seed": sg, "terms": 6}, grid)
            lhs = integrate(f.with_values(np.abs(f.values * g.values)), D)
            worst = max(worst, lhs / (norm(X, f, D) * norm(Xa, g, D)))
        res.record(f"holder_max_ratio[{label}]", worst)
        res.check(f"Hoelder {label}", worst <= 1.01, f"max int|fg| / (|f|_X |g|_X') = {worst:.6f} <= 1.01")
    for (label, X, grid), (_, X2, grid2) in zip(_holder_setup(2048, 64), _holder_setup(4096, 128)):
        c1 = reverse_holder_constant(X, grid)
        c2 = reverse_holder_constant(X2, grid2)
        res.record(f"reverse_holder_C[{label}]", c1)
        res.record(f"reverse_holder_C_doubled[{label}]", c2)
        rel = abs(c2 / c1 - 1)
        res.check(f"reverse Hoelder {label}", math.isfinite(c1) and rel <= 0.2,
                  f"C = {c1:.4f} -> {c2:.4f} under doubling ({100 * rel:.1f}% <= 20%)")
    return res


# ---------------------------------------------------------------------------
# 4. collapses and the Lorentz subset oracle

class SubsetOracle:
    """Brute-force ``f**`` and Lorentz norm of a step function on a few cells.

    ``f**(t) = sup { (1/t) int_E |f| : |E| >= t }`` is maximised over every
    subset of whole cells, optionally with one extra cell taken in part, and
    topped up with zero region outside the support when short of ``t``.
    """

    def __init__(self, values, measures):
        self.values = np.abs(np.asarray(values, dtype=float))
        self.measures = np.asarray(measures, dtype=float)
        n = len(self.values)
        self.subsets = np.array(list(itertools.product((0, 1), repeat=n)), dtype=bool)
        self.mass = self.subsets @ (self.values * self.measures)
        self.meas = self.subsets @ self.measures

    def fstarstar(self, t: float) -> float:
        best = float(np.max(self.mass / np.maximum(self.meas, t)))
        r = t - self.meas
        for c in range(len(self.values)):
            ok = ~self.subsets[:, c] & (r > 0) & (r <= self.measures[c])
            if np.any(ok):
                best = max(best, float(np.max(self.mass[ok] + self.values[c] * r[ok])) / t)
        return best

    def lorentz(self, p: float, q: float) -> float:
        integrand = lambda t: (t ** (1 / p) * self.fstarstar(t)) ** q / t
        total = float(self.measures.sum())
        # the integrand is smooth between the measures of the nested top-value sets
        order = np.argsort(-self.values, kind="stable")
        cuts = np.unique(np.concatenate([[0.0], np.cumsum(self.measures[order])]))
        acc = 0.0
        for a, b in zip(cuts, cuts[1:]):
            acc += _sint.quad(integrand, a, b, epsabs=0, epsrel=1e-13, limit=200)[0]
        acc += _sint.quad(integrand, total, math.inf, epsabs=0, epsrel=1e-13, limit=200)[0]
        return acc ** (1 / q)


def suite_collapse(seed: int = 0) -> SuiteResult:
    res = SuiteResult("collapse")
    rng = np.random.default_rng(seed)
    worst_mixed, worst_var = 0.0, 0.0
    for k in range(10):
        dim = 1 + k % 2
        grid = GridSpec(dim, 1.0, 1024 if dim == 1 else 64)
        f = catalog("trig", {"seed": int(rng.integers(0, 2 ** 31)), "terms": 5}, grid)
        p = float(rng.uniform(1.0, 4.0))
        ref = norm(Lp(p), f, grid.box)
        mixed = norm(MixedNorm((p,) * dim), f, grid.box)
        worst_mixed = max(worst_mixed, abs(mixed / ref - 1))
        pv = float(rng.uniform(1.1, 4.0))
        const = GridFunction(grid.box, np.full((grid.n,) * dim, pv))
        var = norm(VariableLp(const), f, grid.box)
        worst_var = max(worst_var, abs(var / norm(Lp(pv), f, grid.box) - 1))
    res.record("mixed_vs_lp_max_rel", worst_mixed)
    res.record("variable_vs_lp_max_rel", worst_var)
    res.check("MixedNorm(p,p) = Lp", worst_mixed <= 1e-8, f"max rel diff {worst_mixed:.2e}")
    res.check("constant-exponent VariableLp = Lp", worst_var <= 1e-8, f"max rel diff {worst_var:.2e}")
    grid = GridSpec(1, 2.0, 4096)
    ind = catalog("indicator", {"a": 0.0, "b": 1.0}, grid)
    lz = norm(Lorentz(2.0, 2.0), ind, grid.box)
    res.record("lorentz22_indicator", lz)
    res.check("Lorentz{2,2}(1_[0,1]) = sqrt 2", abs(lz - math.sqrt(2)) <= 1e-3, f"{lz:.8f}")
    worst = 0.0
    for k in range(6):
        n = int(rng.integers(3, 13))
        vals = rng.uniform(0.0, 2.0, size=n)
        if k % 2:
            meas = np.full(n, 1.0 / n)
        else:
            meas = rng.uniform(0.2, 1.0, size=n)
        p, q = float(rng.uniform(1.2, 4.0)), float(rng.uniform(1.2, 4.0))
        fast = lorentz_norm(vals, meas, p, q)
        slow = SubsetOracle(vals, meas).lorentz(p, q)
        worst = max(worst, abs(fast - slow) / slow)
    res.record("lorentz_vs_subset_oracle_max_rel", worst)
    res.check("Lorentz = subset oracle", worst <= 1e-10, f"max rel diff {worst:.2e} <= 1e-10")
    return res


# ---------------------------------------------------------------------------
# 5. two-sided comparison of osc and osc_X

SANDWICH_FUNCTIONS_1D = (("bump", {"radius": 0.75}), ("trig", {"seed": 11, "terms": 5}), ("abs_pow", {"alpha": 0.5}),
                         ("loglog", {}), ("log_abs", {}), ("poly", {"coeffs": [0.3, -1.0, 2.0]}))
SANDWICH_FUNCTIONS_2D = (("bump", {"radius": 0.75}), ("trig", {"seed": 11, "terms": 5}), ("abs_pow", {"alpha": 0.5}),
                         ("loglog", {}), ("log_abs", {}))
SANDWICH_ALPHAS = (0.5, 1.0)


def sandwich_constants(spaces, dim: int, samples: int, edges) -> tuple:
    """``C2 = max osc / osc_X`` and ``C1 = max osc_X / lip_modulus(alpha, diam Q, Q)`` per space."""
    grid = GridSpec(dim, 1.0, samples)
    names = SANDWICH_FUNCTIONS_1D if dim == 1 else SANDWICH_FUNCTIONS_2D
    C1 = np.zeros(len(spaces))
    C2 = np.zeros(len(spaces))
    for name, params in names:
        f = catalog(name, params, grid)
        for edge in edges:
            cells = int(round(edge / f.h))
            for Q in lattice_family(f, f.box, cells, cells):
                for alpha in SANDWICH_ALPHAS:
                    vals = osc_many(f, Q, alpha, [None] + list(spaces))
                    o, ox = vals[0], np.array(vals[1:])
                    lip = lip_modulus(f, alpha, Q.diameter, Q)
                    with np.errstate(divide="ignore", invalid="ignore"):
                        C2 = np.maximum(C2, np.where(ox > 0, o / ox, 0.0))
                        C1 = np.maximum(C1, np.where(lip > 0, ox / lip, 0.0))
    return C1, C2


def suite_sandwich(seed: int = 0) -> SuiteResult:
    res = SuiteResult("sandwich")
    runs = [(1, 2048, 4096, (1 / 16, 1 / 4, 1.0), criterion_spaces_1d),
            (2, 64, 128, (1 / 4, 1 / 2, 1.0), lambda g: [MixedNorm((3.0, 1.5))])]
    for dim, n1, n2, edges, make in runs:
        spaces_a = make(GridSpec(dim, 1.0, n1))
        spaces_b = make(GridSpec(dim, 1.0, n2))
        a1, a2 = sandwich_constants(spaces_a, dim, n1, edges)
        b1, b2 = sandwich_constants(spaces_b, dim, n2, edges)
        for X, c1, c2, d1, d2 in zip(spaces_a, a1, a2, b1, b2):
            lab = f"{X.describe()} ({dim}-D)"
            res.record(f"C1[{lab}]", c1)
            res.record(f"C1_doubled[{lab}]", d1)
            res.record(f"C2[{lab}]", c2)
            res.record(f"C2_doubled[{lab}]", d2)
            r1, r2 = abs(d1 / c1 - 1), abs(d2 / c2 - 1)
            res.check(f"C1 stable {lab}", r1 <= 0.2, f"{c1:.4f} -> {d1:.4f} ({100 * r1:.1f}%)")
            res.check(f"C2 stable {lab}", r2 <= 0.2, f"{c2:.4f} -> {d2:.4f} ({100 * r2:.1f}%)")
    return res


# ---------------------------------------------------------------------------
# 6. second differences and the u0 + u1 + u2 decomposition

def suite_second_diff(seed: int = 0) -> SuiteResult:
    res = SuiteResult("second_diff")
    grid = GridSpec(1, 2.0, 2049)
    sq = catalog("poly", {"coeffs": [0.0, 0.0, 1.0]}, grid)
    a = 64 * sq.h
    m = second_diff_modulus(sq, a, interval(-1, 1))
    res.record("second_diff_x2", m)
    res.check("second_diff_modulus(x^2, a) = 2a", abs(m - 2 * a) <= 1e-6, f"{m:.9f} vs {2 * a:.9f}")
    # dyadic grid and coefficients: every sample and difference is exact in binary
    dy = GridSpec(1, 1.0, 1024)
    aff = catalog("poly", {"coeffs": [1.0, 2.0]}, dy)
    z = second_diff_modulus(aff, 16 * aff.h, interval(-0.5, 0.5))
    res.record("second_diff_affine", z)
    res.check("affine gives 0 exactly", z == 0.0, f"{z!r}")
    lin = catalog("poly", {"coeffs": [0.7, -1.3]}, grid)
    t = 64 * grid.box.edge / grid.n
    d = u_decompose(lin, 0.3, t)
    err_aff = max(abs(d.u0 - d.f_x), abs(d.u1), abs(d.u2))
    res.record("u_decompose_affine_max_err", err_aff)
    res.check("u_decompose affine = (f(x), 0, 0)", err_aff <= 1e-6, f"max err {err_aff:.2e}")
    d = u_decompose(sq, 0.3, t)
    c = mollifier_second_moment(1)
    x = d.x[0]
    errs = (abs(d.u0 - (x * x + c * t * t)), abs(d.u1 + 2 * c * t * t), abs(d.u2 - c * t * t), abs(d.total - x * x))
    for name, e in zip(("u0", "u1", "u2", "sum"), errs):
        res.record(f"u_decompose_x2_{name}_err", e)
    res.check("u_decompose x^2 components", max(errs[:3]) <= 1e-4, f"max err {max(errs[:3]):.2e}")
    res.check("u_decompose x^2 sum", errs[3] <= 1e-4, f"err {errs[3]:.2e}")
    return res


# ---------------------------------------------------------------------------
# 7. key estimate scaling

KEY_SCALES = (1 / 32, 1 / 16, 1 / 8)
KEY_POINTS = (-0.6, -0.3, 0.0, 0.25, 0.5)


def key_estimate_table(samples: int = 4096):
    grid = GridSpec(1, 2.0, samples)
    f = catalog("bump", {"radius": 1.0}, grid)
    table = {k: [[key_estimate_ratio(f, x, t, k) for x in KEY_POINTS] for t in KEY_SCALES] for k in (0, 1, 2)}
    literal = [max(literal_key_ratio(f, x, t) for x in KEY_POINTS) for t in KEY_SCALES]
    return table, literal


def suite_key_estimate(seed: int = 0) -> SuiteResult:
    res = SuiteResult("key_estimate")
    table, literal = key_estimate_table()
    for k, rows in table.items():
        per_scale = [max(r) for r in rows]
        for t, v in zip(KEY_SCALES, per_scale):
            res.record(f"k{k}_max_ratio_t{t:g}", v)
        spread = max(per_scale) / min(per_scale)
        ok = all(math.isfinite(v) and v > 0 for v in per_scale) and spread <= 2.0
        res.check(f"k={k} ratio uniform over scales", ok,
                  f"C = {max(per_scale):.3f}, per-scale maxima spread x{spread:.2f} <= 2")
    for t, v in zip(KEY_SCALES, literal):
        res.record(f"k0_literal_ratio_t{t:g}", v)
    return res


# ---------------------------------------------------------------------------
# 8. cross-space classification

def classification_runs():
    """(label, grid, spaces) for the 1-D and 2-D classification runs."""
    g1 = GridSpec(1, 1.0, 4096)
    g2 = GridSpec(2, 0.5, 256)
    s2 = [MixedNorm((3.0, 1.5))] + criterion_spaces_1d(g2)
    return [("1-D", g1, criterion_spaces_1d(g1)), ("2-D", g2, s2)]


def suite_theorem1(seed: int = 0) -> SuiteResult:
    res = SuiteResult("theorem1")
    for label, grid, spaces in classification_runs():
        for name, want in (("loglog", True), ("log_abs", False)):
            f = catalog(name, None, grid)
            comp = cross_space_compare(f, 0.0, spaces, CurveConfig())
            vecs = {r.space: r.flag_vector for r in comp.reports}
            for r in comp.reports:
                res.record(f"{label}:{name}:{r.space}:small_last_over_peak", r.small.last / r.small.peak)
                res.record(f"{label}:{name}:{r.space}:small_vanish", float(r.flags["small_vanish"]))
            small_ok = all(r.flags["small_vanish"] == want for r in comp.reports)
            res.check(f"{label} {name} small_vanish={want} in every space", small_ok,
                      ", ".join(f"{k}={v[1]}" for k, v in vecs.items()))
            res.check(f"{label} {name} identical flag vectors", comp.all_agree,
                      f"{len(set(vecs.values()))} distinct vector(s): {sorted(set(vecs.values()))}")
    return res


# ---------------------------------------------------------------------------
# 9-11. commutator analytics, tail decay, convolution range

def suite_commutator(seed: int = 0) -> SuiteResult:
    res = SuiteResult("commutator")
    grid = GridSpec(1, 2.0, 1025)
    f = catalog("indicator", {"a": 0.0, "b": 1.0}, grid)
    x = catalog("poly", {"coeffs": [0.0, 1.0]}, grid)
    i0 = f.node_index(0.0)
    cfg = KernelConfig(0.5, "symmetric_average")
    I = frac_integral(f, cfg).values[i0]
    C = commutator_apply(x, f, cfg).values[i0]
    res.record("I_half_indicator_at_0", I)
    res.record("commutator_x_indicator_at_0", C)
    res.check("I_1/2(1_[0,1])(0) = 2", abs(I - 2) <= 0.05, f"{I:.6f}")
    res.check("[x, I_1/2] 1_[0,1](0) = -2/3", abs(C + 2 / 3) <= 0.02, f"{C:.6f}")
    const = catalog("poly", {"coeffs": [1.7]}, grid)
    Z = commutator_apply(const, f, KernelConfig(0.5))
    mx = float(np.max(np.abs(Z.values)))
    res.record("constant_symbol_max_abs", mx)
    res.check("constant b gives exactly 0", mx == 0.0, f"max |[c, I]f| = {mx!r}")
    return res


TAIL_RADII = (4.0, 8.0, 16.0, 32.0)


def suite_tail(seed: int = 0, samples: int = 1024) -> SuiteResult:
    res = SuiteResult("tail")
    grid = GridSpec(1, 64.0, samples)
    b = catalog("bump", {"radius": 0.5}, grid)
    f = catalog("indicator", {"a": -1.0, "b": 1.0}, grid)
    rep = tail_decay_probe(b, f, 0.25, 2.0, TAIL_RADII)
    for R, v in rep.curve.points:
        res.record(f"tail_sup_R{R:g}", v)
    slope = rep.fitted_slope
    res.record("fitted_slope", slope)
    res.check("tail slope = -(n/p - alpha) = -0.25 +- 0.15", abs(slope + 0.25) <= 0.15,
              f"fitted {slope:.4f}; fixed-f rate -(n - alpha) = -0.75")
    return res


def suite_convolution(seed: int = 0) -> SuiteResult:
    res = SuiteResult("convolution")
    grid = GridSpec(1, 1.0, 4096)
    f = catalog("log_abs", None, grid)
    r = 1 / 16
    m = int(round(2 * r / f.h)) + 2
    phi = catalog("bump", {"radius": r}, GridSpec(1, m * f.h / 2, m))
    rep = convolution_range_probe(phi, f, 0.0)
    res.record("phi_l1", rep.phi_l1)
    res.record("sup_osc_convolved", rep.sup_convolved)
    res.record("sup_osc_source", rep.sup_source)
    res.check("sup osc(phi*f) <= sup osc(f) * 1.01", rep.sup_convolved <= rep.sup_source * 1.01,
              f"{rep.sup_convolved:.5f} vs {rep.sup_source:.5f}")
    ratio = rep.curve.last / rep.curve.first
    res.record("convolved_last_over_first", ratio)
    res.check("convolved curve decays below 0.2", ratio < 0.2, f"last/first = {ratio:.4f}")
    dev = float(np.max(np.abs(rep.source_curve.values / TWO_OVER_E - 1)))
    res.record("log_abs_curve_max_rel_dev_from_2_over_e", dev)
    res.check("log_abs curve within 10% of 2/e", dev <= 0.1, f"max rel deviation {dev:.4f}")
    return res


SUITES = {
    "projection": suite_projection,
    "oscillation": suite_oscillation,
    "holder": suite_holder,
    "collapse": suite_collapse,
    "sandwich": suite_sandwich,
    "second_diff": suite_second_diff,
    "key_estimate": suite_key_estimate,
    "theorem1": suite_theorem1,
    "commutator": suite_commutator,
    "tail": suite_tail,
    "convolution": suite_convolution,
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    from .errors import ConfigError

    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    return SUITES[name](seed)
