import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from campanato.errors import BracketError, ComputationError, ConfigError
from campanato.families import lattice_family
from campanato.grid import Cube, GridFunction, GridSpec, catalog, interval
from campanato.spaces import (Herz, Linf, Lorentz, Lp, MixedNorm, Morrey, VariableLp, Weight, WeightedLp,
                              ap_constant, associate, has_associate, indicator_norm, lorentz_norm, luxemburg, maximal, norm)

G1 = GridSpec(1, 2.0, 4096)


def _variants(grid):
    pex = GridFunction(grid.box, 1.5 + 0.5 * np.abs(GridFunction(grid.box, np.zeros((grid.n,) * grid.dim)).mesh()[0]))
    out = [Lp(1.0), Lp(2.5), Linf(), WeightedLp(2.0, catalog("power_weight", {"delta": 0.5}, grid), "|x|^0.5"),
           VariableLp(pex, "1.5+|x_1|/2"), Morrey(3.0, 2.0), Lorentz(2.0, 3.0), Herz(0.1, 2.0, 2.0),
           Herz(-0.2, 1.5, 3.0, homogeneous=False)]
    if grid.dim == 2:
        out.append(MixedNorm((3.0, 1.5)))
    return out


def test_lp_indicator_example():
    f = catalog("indicator", {"a": 0.0, "b": 1.0}, G1)
    assert norm(Lp(2.0), f, G1.box) == pytest.approx(1.0, abs=1e-12)


def test_lorentz_indicator_is_sqrt_two():
    f = catalog("indicator", {"a": 0.0, "b": 1.0}, G1)
    assert norm(Lorentz(2.0, 2.0), f, G1.box) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_lorentz_rearrangement_invariance():
    rng = np.random.default_rng(0)
    vals = rng.uniform(0, 3, 10)
    meas = np.full(10, 0.1)
    perm = rng.permutation(10)
    assert lorentz_norm(vals, meas, 2.5, 1.5) == pytest.approx(lorentz_norm(vals[perm], meas[perm], 2.5, 1.5), rel=1e-14)


def test_lorentz_with_ties_and_zero_cells_matches_subset_oracle():
    from campanato.suites import SubsetOracle

    vals = np.array([1.0, 1.0, 0.0, 2.0, 2.0, 0.5, 0.0])
    meas = np.array([0.1, 0.3, 0.2, 0.05, 0.05, 0.4, 0.1])
    for p, q in ((2.0, 2.0), (1.5, 3.0), (4.0, 1.2)):
        assert lorentz_norm(vals, meas, p, q) == pytest.approx(SubsetOracle(vals, meas).lorentz(p, q), rel=1e-10)


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0])
def test_collapses(p):
    grid = GridSpec(2, 1.0, 64)
    f = catalog("trig", {"seed": 5}, grid)
    ref = norm(Lp(p), f, grid.box)
    assert norm(MixedNorm((p, p)), f, grid.box) == pytest.approx(ref, rel=1e-8)
    if p > 1:
        const = GridFunction(grid.box, np.full((64, 64), p))
        assert norm(VariableLp(const), f, grid.box) == pytest.approx(ref, rel=1e-8)


def test_parameter_ranges_are_enforced():
    with pytest.raises(ConfigError, match=r"\[1,inf\)"):
        Lp(0.5)
    with pytest.raises(ConfigError):
        Morrey(2.0, 3.0)
    with pytest.raises(ConfigError):
        Lorentz(1.0, 2.0)
    with pytest.raises(ConfigError):
        VariableLp(GridFunction(interval(0, 1), [1.0, 2.0]))
    assert Herz(0.1, 2, 2).admissible(1) and not Herz(0.6, 2, 2).admissible(1)


def test_associate_examples():
    assert associate(Lp(2.0)) == Lp(2.0)
    assert associate(MixedNorm((3.0, 1.5))) == MixedNorm((1.5, 3.0))
    w = catalog("power_weight", {"delta": 0.5}, G1)
    A = associate(WeightedLp(2.0, w))
    assert A.p == 2.0 and np.allclose(A.weight.values * w.values, 1.0, rtol=1e-14)
    H = associate(Herz(0.1, 2.0, 4.0))
    assert (H.alpha, H.p, H.q) == (-0.1, 2.0, 4.0 / 3.0)
    for X in (Morrey(3, 2), Lorentz(2, 2), VariableLp(GridFunction(interval(0, 1), [2.0, 2.0]))):
        assert not has_associate(X)
        with pytest.raises(ConfigError, match="associate not modelled"):
            associate(X)


def test_morrey_value_and_collapse():
    f = catalog("indicator", {"a": 0.0, "b": 1.0}, G1)
    # the unit interval itself is a ball of the family, |B|^(1/3 - 1/2) ||1_B||_2 = 1
    assert norm(Morrey(3.0, 2.0), f, G1.box) == pytest.approx(1.0, rel=1e-3)
    g = catalog("bump", {"radius": 0.5}, G1)
    for p in (1.5, 2.0, 3.0):
        assert norm(Morrey(p, p), g, G1.box) == pytest.approx(norm(Lp(p), g, G1.box), rel=0.02)


def test_morrey_2d_collapse():
    grid = GridSpec(2, 1.0, 64)
    g = catalog("bump", {"radius": 0.5}, grid)
    assert norm(Morrey(2.0, 2.0), g, grid.box) == pytest.approx(norm(Lp(2.0), g, grid.box), rel=0.02)


@pytest.mark.parametrize("dim", [1, 2])
def test_indicators_have_finite_positive_norms(dim):
    grid = GridSpec(dim, 1.0, 512 if dim == 1 else 64)
    f = GridFunction(grid.box, np.zeros((grid.n,) * dim))
    Q = Cube((0.25,) * dim, 0.5)
    for X in _variants(grid):
        v = indicator_norm(X, f, Q)
        assert 0 < v < math.inf, X.describe()


@pytest.mark.parametrize("dim", [1, 2])
@given(seed=st.integers(0, 2 ** 20), shrink=st.floats(0.0, 1.0))
def test_lattice_property(dim, seed, shrink):
    grid = GridSpec(dim, 1.0, 256 if dim == 1 else 32)
    rng = np.random.default_rng(seed)
    f = GridFunction(grid.box, rng.normal(size=(grid.n,) * dim))
    g = f.with_values(f.values * rng.uniform(0, shrink, size=f.values.shape) * rng.choice([-1, 1], f.values.shape))
    Q = Cube((0.1,) * dim, 1.2)
    for X in _variants(grid):
        assert norm(X, g, Q) <= norm(X, f, Q) * (1 + 1e-9), X.describe()


def test_constant_functions_are_not_in_the_spaces():
    grid = GridSpec(1, 16.0, 4096)
    one = GridFunction(grid.box, np.ones(grid.n))
    for X in _variants(grid):
        vals = [norm(X, one, interval(-R, R)) for R in (1, 2, 4, 8, 16)]
        if isinstance(X, Linf):
            assert vals == [1.0] * 5
            continue
        assert all(b > a for a, b in zip(vals, vals[1:])), X.describe()


def test_variable_lp_is_homogeneous_across_magnitudes():
    grid = GridSpec(1, 1.0, 64)
    pex = GridFunction(grid.box, np.linspace(1.2, 6.0, 64))
    f = catalog("trig", {"seed": 3}, grid)
    base = norm(VariableLp(pex), f, grid.box)
    for c in (1e-300, 1e-30, 1e30, 1e300):
        assert norm(VariableLp(pex), f.with_values(c * f.values), grid.box) == pytest.approx(c * base, rel=1e-12)


def test_luxemburg_non_finite_modular_raises():
    with pytest.raises(BracketError):
        luxemburg(np.array([1.0, 2.0]), np.array([np.inf, 1.0]), np.array([2.0, 2.0]))


# --------------------------------------------------------------------------- maximal operator

def test_maximal_examples():
    grid = GridSpec(1, 4.0, 4096)
    c = GridFunction(grid.box, np.full(grid.n, 2.5))
    Mc = maximal(c, [0.1, 0.2, 0.5])
    inner = np.abs(np.asarray(c.axes()[0])) < 3
    assert np.allclose(Mc.values[inner], 2.5, rtol=1e-12)
    ind = catalog("indicator", {"a": 0.0, "b": 1.0}, grid)
    radii = [0.5 * 2 ** (k / 8) for k in range(40)]
    M = maximal(ind, radii)
    assert M.values[M.node_index(2.0)] == pytest.approx(0.25, abs=2e-3)


def test_maximal_dominates_members_and_is_monotone_in_radii():
    grid = GridSpec(2, 1.0, 64)
    f = catalog("trig", {"seed": 1}, grid)
    small = maximal(f, [0.05, 0.2])
    big = maximal(f, [0.05, 0.1, 0.2, 0.4])
    only = maximal(f, [0.05])
    assert np.all(big.values >= small.values) and np.all(small.values >= only.values)
    with pytest.raises(ConfigError):
        maximal(f, [0.2, 0.1])
    with pytest.raises(ConfigError):
        maximal(f, [])


# --------------------------------------------------------------------------- A_p

def _dyadic_cubes(f, levels=(8, 4, 2, 1)):
    cubes = []
    for k in levels:
        cells = f.samples_per_axis[0] // (2 * k)
        cubes.extend(lattice_family(f, f.box, cells, cells))
    return cubes


def test_ap_constant_examples():
    grid = GridSpec(1, 1.0, 1024)
    one = GridFunction(grid.box, np.ones(grid.n))
    cubes = _dyadic_cubes(one)
    assert ap_constant(Weight(one), 2.0, cubes) == pytest.approx(1.0, abs=1e-12)
    assert ap_constant(Weight(one.with_values(np.full(grid.n, 7.0))), 3.0, cubes) == pytest.approx(1.0, abs=1e-12)
    vals = []
    for n in (1024, 2048):
        w = catalog("power_weight", {"delta": 0.5}, GridSpec(1, 1.0, n))
        vals.append(ap_constant(Weight(w), 2.0, _dyadic_cubes(w)))
    assert math.isfinite(vals[0]) and abs(vals[1] / vals[0] - 1) <= 0.05


def test_ap_constant_rejects_nonpositive_weights():
    w = GridFunction(interval(0, 1), [1.0, 0.0, 2.0, 1.0])
    with pytest.raises(ComputationError):
        Weight(w)
    with pytest.raises(ComputationError):
        ap_constant(w, 2.0, [interval(0, 1)])
    with pytest.raises(ConfigError):
        ap_constant(w.with_values([1.0] * 4), 1.0, [interval(0, 1)])
