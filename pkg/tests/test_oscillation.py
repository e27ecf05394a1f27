import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate as sint

from campanato.errors import AdmissibilityError, ComputationError, ConfigError, UnderResolvedError
from campanato.families import lattice_family
from campanato.grid import Cube, GridFunction, GridSpec, catalog, integrate, interval
from campanato.oscillation import (degree, key_estimate_ratio, lip_modulus, literal_key_ratio, mollifier_second_moment,
                                   mollify, mollify_at, osc, osc_many, osc_tilde1, osc_x, second_diff_modulus,
                                   taylor_report, u_decompose)
from campanato.spaces import Herz, Lorentz, Lp, Morrey, WeightedLp

G1 = GridSpec(1, 1.0, 4096)
TWO_OVER_E = 2 / math.e


def test_degree():
    assert [degree(a) for a in (0.0, 0.5, 0.99, 1.0)] == [0, 0, 0, 1]
    with pytest.raises(ConfigError):
        degree(1.5)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_constant_has_zero_oscillation(alpha):
    f = catalog("poly", {"coeffs": [3.0]}, G1)
    Q = interval(-0.2, 0.3)
    assert osc(f, Q, alpha) == pytest.approx(0.0, abs=1e-14)
    for X in (Lp(2.0), Morrey(3.0, 2.0), Lorentz(2.0, 2.0)):
        assert osc_x(f, Q, alpha, X) == pytest.approx(0.0, abs=1e-13)
    assert osc_tilde1(f, Q, Lp(2.0)) == pytest.approx(0.0, abs=1e-13)


def test_analytic_oscillations():
    x = catalog("poly", {"coeffs": [0.0, 1.0]}, G1)
    assert osc(x, interval(0, 1), 0.0) == pytest.approx(0.25, abs=1e-6)
    assert osc_tilde1(x, interval(0, 1), Lp(1.0)) == pytest.approx(0.25, abs=1e-6)
    L = catalog("log_abs", None, G1)
    for a in (1 / 4, 1 / 16, 1 / 64):
        assert osc(L, interval(0, a), 0.0) == pytest.approx(TWO_OVER_E, abs=2e-2)


def test_log_oscillation_oracle():
    # substitution x = a u reduces the mean oscillation to int_0^1 |log u + 1| du
    val, _ = sint.quad(lambda u: abs(math.log(u) + 1), 0, 1, points=[1 / math.e])
    assert val == pytest.approx(TWO_OVER_E, rel=1e-10)


def test_osc_x_examples():
    f = catalog("trig", {"seed": 7}, G1)
    Q = interval(-0.3, 0.2)
    for alpha in (0.0, 0.4, 1.0):
        assert osc_x(f, Q, alpha, Lp(1.0)) == pytest.approx(osc(f, Q, alpha), rel=1e-13)
    s = catalog("sign", None, G1)
    assert osc_x(s, interval(-1, 1), 0.0, Lp(2.0)) == pytest.approx(1.0, abs=1e-12)
    assert osc_many(f, Q, 0.4, [None, Lp(1.0)]) == pytest.approx([osc(f, Q, 0.4)] * 2, rel=1e-13)


def test_under_resolved_cube():
    f = catalog("trig", {"seed": 7}, GridSpec(1, 1.0, 64))
    with pytest.raises(UnderResolvedError, match="under-resolved"):
        osc(f, interval(0, 2 / 64), 0.0)


def test_vanishing_weight_on_the_cube_is_an_error():
    grid = GridSpec(1, 1.0, 64)
    w = GridFunction(grid.box, np.where(np.abs(np.asarray(grid_axes(grid))) < 0.3, 0.0, 1.0))
    f = catalog("trig", {"seed": 7}, grid)
    with pytest.raises(ComputationError):
        osc_x(f, interval(-0.25, 0.25), 0.0, WeightedLp(2.0, w))


def grid_axes(grid):
    return GridFunction(grid.box, np.zeros(grid.n)).axes()[0]


# --------------------------------------------------------------------------- moduli

def test_second_diff_examples():
    grid = GridSpec(1, 2.0, 2049)
    D = interval(-1, 1)
    aff = catalog("poly", {"coeffs": [0.5, -2.0]}, grid)
    assert second_diff_modulus(aff, 0.1, D) == pytest.approx(0.0, abs=1e-12)
    sq = catalog("poly", {"coeffs": [0.0, 0.0, 1.0]}, grid)
    for k in (1, 16, 100):
        a = k * sq.h
        assert second_diff_modulus(sq, a, D) == pytest.approx(2 * a, abs=1e-9)
    ab = catalog("abs_pow", {"alpha": 1.0}, grid)
    assert second_diff_modulus(ab, 0.1, D) == pytest.approx(2.0, abs=1e-9)


def test_second_diff_exact_zero_on_dyadic_affine():
    f = catalog("poly", {"coeffs": [1.0, 2.0]}, GridSpec(1, 1.0, 1024))
    assert second_diff_modulus(f, 32 * f.h, interval(-0.5, 0.5)) == 0.0


def test_lip_modulus_examples():
    grid = GridSpec(1, 1.0, 1024)
    D = interval(-0.5, 0.5)
    const = catalog("poly", {"coeffs": [2.0]}, grid)
    assert lip_modulus(const, 0.5, 0.1, D) == 0.0
    x = catalog("poly", {"coeffs": [0.0, 1.0]}, grid)
    a = 64 * grid.box.edge / grid.n
    for alpha in (0.25, 0.5, 0.75):
        assert lip_modulus(x, alpha, a, D) == pytest.approx(a ** (1 - alpha), rel=1e-9)
    # an odd sample count puts a node at the origin, where the quotient is exactly 1
    ap = catalog("abs_pow", {"alpha": 0.5}, GridSpec(1, 1.0, 1025))
    v = lip_modulus(ap, 0.5, 0.5, D)
    assert 1.0 <= v <= 2.0


def test_moduli_errors():
    f = catalog("trig", {"seed": 1}, GridSpec(1, 1.0, 64))
    with pytest.raises(UnderResolvedError):
        second_diff_modulus(f, 0.001, interval(-0.5, 0.5))
    with pytest.raises(AdmissibilityError):
        second_diff_modulus(f, 0.1, Cube((5.0,), 0.1))
    with pytest.raises(ConfigError):
        lip_modulus(f, 0.0, 0.1, interval(-0.5, 0.5))


@given(st.integers(0, 2 ** 20), st.integers(1, 20), st.integers(1, 20))
def test_moduli_monotone_in_scale(seed, k1, k2):
    f = catalog("trig", {"seed": seed}, GridSpec(1, 1.0, 256))
    a, b = sorted((k1 * f.h, k2 * f.h))
    D = interval(-0.5, 0.5)
    assert second_diff_modulus(f, a, D) <= second_diff_modulus(f, b, D)
    assert lip_modulus(f, 0.5, a, D) <= lip_modulus(f, 0.5, b, D)


# --------------------------------------------------------------------------- invariants

def _catalog_1d(grid):
    return [catalog(n, p, grid) for n, p in (("trig", {"seed": 3}), ("abs_pow", {"alpha": 0.5}), ("bump", {}),
                                             ("loglog", None))]


def test_chain_bound_over_translated_and_scaled_cubes():
    grid = GridSpec(1, 1.0, 4096)
    worst = 0.0
    for f in _catalog_1d(grid):
        for alpha in (0.25, 0.5, 1.0):
            for edge in (1 / 64, 1 / 8, 1 / 2):
                for Q in lattice_family(f, interval(-0.9, 0.9), int(round(edge / f.h))):
                    lip = lip_modulus(f, alpha, Q.diameter, Q)
                    if lip > 0:
                        worst = max(worst, osc(f, Q, alpha) / lip)
    # the mean distance to the best affine or constant fit is at most a fixed
    # multiple of the Hoelder quotient over the cube
    assert worst <= 1.0


def test_lip_modulus_bounded_by_small_cube_oscillation():
    grid = GridSpec(1, 1.0, 2048)
    D = interval(-0.75, 0.75)
    ratios = []
    for f in _catalog_1d(grid)[:3]:
        for alpha in (0.25, 0.5, 0.75):
            for k in (8, 32):
                a = k * f.h
                sup_osc = max(osc(f, Q, alpha) for cells in (4, 8, 16, 32, 64) if cells * f.h <= 2 * a
                              for Q in lattice_family(f, D, cells))
                ratios.append(lip_modulus(f, alpha, a, D) / sup_osc)
    assert max(ratios) < 50 and min(ratios) > 0


@pytest.mark.parametrize("X", [Lp(1.0), Lp(2.0), Morrey(3.0, 2.0), Herz(0.1, 2.0, 2.0)], ids=str)
def test_second_difference_dominates_alpha_one_oscillation(X):
    grid = GridSpec(1, 1.0, 2048)
    worst = 0.0
    for f in _catalog_1d(grid):
        for cells in (16, 64, 256):
            for Q in lattice_family(f, interval(-0.8, 0.8), cells):
                m = second_diff_modulus(f, Q.edge / 2, Q)
                if m > 0:
                    worst = max(worst, osc_x(f, Q, 1.0, X) / m)
    assert worst < 1.0


@pytest.mark.parametrize("lam", [0.5, 2.0])
@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
def test_scaling_law(lam, alpha):
    f = catalog("trig", {"seed": 11}, GridSpec(1, 1.0, 2048))
    Q = interval(-0.3, 0.1)
    g = f.dilated(lam)  # x -> f(lam x)
    assert osc(g, Q.dilate(1 / lam), alpha) == pytest.approx(lam ** alpha * osc(f, Q, alpha), rel=1e-10)


# --------------------------------------------------------------------------- mollification

def test_mollifier_second_moment_matches_quadrature():
    c1 = sint.quad(lambda x: (1 - x * x) ** 4 * x * x, -1, 1)[0] / sint.quad(lambda x: (1 - x * x) ** 4, -1, 1)[0]
    assert mollifier_second_moment(1) == pytest.approx(c1, rel=1e-12)
    num = sint.dblquad(lambda y, x: (1 - x * x - y * y) ** 4 * x * x if x * x + y * y < 1 else 0.0, -1, 1, -1, 1)[0]
    den = sint.dblquad(lambda y, x: (1 - x * x - y * y) ** 4 if x * x + y * y < 1 else 0.0, -1, 1, -1, 1)[0]
    assert mollifier_second_moment(2) == pytest.approx(num / den, rel=1e-6)


def test_mollify_examples():
    grid = GridSpec(1, 1.0, 2048)
    aff = catalog("poly", {"coeffs": [0.3, 1.7]}, grid)
    psi = mollify(aff, 0.05)
    inner = np.abs(np.asarray(aff.axes()[0])) < 0.9
    assert np.max(np.abs(psi.values - aff.values)[inner]) <= 1e-12
    bump = catalog("bump", {"radius": 0.5}, grid)
    dev = np.max(np.abs(mollify(bump, 2 * bump.h).values - bump.values))
    assert dev <= 1e-3 * np.max(bump.values)
    trig = catalog("trig", {"seed": 2}, grid)
    psi = mollify(trig, 0.05)
    Q = interval(-0.5, 0.5)
    assert integrate(psi, Q) == pytest.approx(integrate(trig, Q), abs=5e-3)
    with pytest.raises(UnderResolvedError):
        mollify(trig, grid.box.edge / grid.n)


def test_mollify_at_agrees_with_lattice_mollify_at_nodes():
    f = catalog("trig", {"seed": 5}, GridSpec(2, 1.0, 64))
    psi = mollify(f, 0.1)
    idx = (30, 17)
    assert mollify_at(f, f.node(idx), 0.1) == pytest.approx(psi.values[idx], rel=1e-10)


# --------------------------------------------------------------------------- decomposition

def test_u_decompose_affine_and_square():
    grid = GridSpec(1, 2.0, 2049)
    lin = catalog("poly", {"coeffs": [0.7, -1.3]}, grid)
    t = 64 * lin.h
    d = u_decompose(lin, 0.3, t)
    assert (d.u0, d.u1, d.u2) == pytest.approx((d.f_x, 0.0, 0.0), abs=1e-6)
    sq = catalog("poly", {"coeffs": [0.0, 0.0, 1.0]}, grid)
    d = u_decompose(sq, 0.3, t)
    c = mollifier_second_moment(1)
    x = d.x[0]
    assert d.u0 == pytest.approx(x * x + c * t * t, abs=1e-4)
    assert d.u1 == pytest.approx(-2 * c * t * t, abs=1e-4)
    assert d.u2 == pytest.approx(c * t * t, abs=1e-4)
    assert d.total == pytest.approx(x * x, abs=1e-4)


@pytest.mark.parametrize("n", [2048, 4096])
def test_u_decompose_bump(n):
    f = catalog("bump", {"radius": 1.0}, GridSpec(1, 2.0, n))
    for x in (-0.5, 0.0, 0.35):
        d = u_decompose(f, x, 0.1)
        assert abs(d.total - d.f_x) <= 1e-3
        assert d.residual == pytest.approx(abs(d.total - d.f_x))


def test_u_decompose_boundary_and_resolution_errors():
    f = catalog("bump", None, GridSpec(1, 1.0, 256))
    with pytest.raises(ConfigError):
        u_decompose(f, 0.95, 0.1)
    with pytest.raises(UnderResolvedError):
        u_decompose(f, 0.0, f.h)


def test_key_estimate_uniform_over_scales():
    f = catalog("bump", {"radius": 1.0}, GridSpec(1, 2.0, 4096))
    for k in (0, 1, 2):
        per_scale = [max(key_estimate_ratio(f, x, t, k) for x in (-0.6, -0.3, 0.0, 0.25, 0.5))
                     for t in (1 / 32, 1 / 16, 1 / 8)]
        assert max(per_scale) / min(per_scale) <= 2.0


def test_literal_zero_order_quotient_is_not_uniform():
    # without subtracting the affine fit the k = 0 quotient grows like 1/t^2
    f = catalog("bump", {"radius": 1.0}, GridSpec(1, 2.0, 4096))
    vals = [literal_key_ratio(f, 0.25, t) for t in (1 / 32, 1 / 16, 1 / 8)]
    assert vals[0] > 8 * vals[2]


# --------------------------------------------------------------------------- Taylor polynomial

def test_taylor_affine_and_square():
    grid = GridSpec(1, 2.0, 4096)
    aff = catalog("poly", {"coeffs": [0.4, -0.9]}, grid)
    rep = taylor_report(aff, interval(-0.5, 0.5))
    assert rep.polynomial.coeffs == pytest.approx([0.4, -0.9], abs=1e-9)
    sq = catalog("poly", {"coeffs": [0.0, 0.0, 1.0]}, grid)
    rep = taylor_report(sq, interval(-1, 1))
    r = rep.radius
    assert rep.polynomial.constant == pytest.approx(mollifier_second_moment(1) * r * r, abs=1e-5)
    assert rep.polynomial.gradient[0] == pytest.approx(0.0, abs=1e-9)
    assert rep.residual_sup <= 2 * r * (2 * r)


def test_taylor_sign_ratio_stays_bounded():
    grid = GridSpec(1, 1.0, 4096)
    s = catalog("sign", None, grid)
    ratios = []
    for delta in (1 / 64, 1 / 16, 1 / 4):
        rep = taylor_report(s, interval(-delta, delta))
        assert rep.residual_sup > 0.5
        ratios.append(rep.ratio)
    assert max(ratios) <= 2.0


def test_taylor_margin_error():
    f = catalog("bump", None, GridSpec(1, 1.0, 256))
    with pytest.raises(ConfigError):
        taylor_report(f, interval(0.2, 0.9))
