import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from campanato.errors import ConfigError, NonFiniteError
from campanato.grid import (Cube, GridFunction, GridSpec, average, catalog, catalog_entry, integrate, interval,
                            restrict)


def test_cube_translate_keeps_edge_bitwise():
    Q = Cube((0.1, -0.3), 0.1 + 0.2)
    R = Q.translate((1e5, -7.25))
    assert R.edge == Q.edge and R.dim == Q.dim


def test_cube_rejects_nonpositive_edge():
    with pytest.raises(ConfigError):
        Cube((0.0,), 0.0)


def test_gridfunction_rejects_nonfinite():
    with pytest.raises(NonFiniteError):
        GridFunction(interval(0, 1), [0.0, np.nan])


def test_node_evaluation_is_exact_and_outside_is_zero():
    f = catalog("trig", {"seed": 4}, GridSpec(1, 1.0, 64))
    nodes = f.axes()[0]
    assert np.array_equal(f(nodes), f.values)
    assert f(1.5) == 0.0 and f(-3.0) == 0.0


@pytest.mark.parametrize("fn,Q,expected", [
    (lambda x: np.ones_like(x), (-1, 1), 2.0),
    (lambda x: x, (0, 1), 0.5),
    (lambda x: x ** 2, (0, 1), 1 / 3),
])
def test_integrate_examples(fn, Q, expected):
    f = GridFunction.from_callable(fn, interval(-1, 1), 2048)
    assert integrate(f, interval(*Q)) == pytest.approx(expected, abs=1e-6)


def test_average_examples():
    grid = GridSpec(1, 1.0, 2048)
    assert average(catalog("poly", {"coeffs": [3.5]}, grid), interval(-0.3, 0.7)) == pytest.approx(3.5, abs=1e-13)
    assert average(catalog("poly", {"coeffs": [0, 1]}, grid), interval(0, 1)) == pytest.approx(0.5, abs=1e-12)
    assert average(catalog("sign", None, grid), interval(-1, 1)) == pytest.approx(0.0, abs=1e-12)


def test_partial_cells_are_weighted_by_overlap():
    f = GridFunction(interval(0, 1), np.ones(4))
    assert integrate(f, interval(0.1, 0.6)) == pytest.approx(0.5, abs=1e-15)
    win = restrict(f, interval(0.1, 0.6))
    assert win.measure.sum() == pytest.approx(0.5, abs=1e-15)


def test_catalog_examples():
    grid = GridSpec(1, 1.0, 4096)
    assert catalog("sign", None, grid)(0.5) == 1.0
    ll = catalog("loglog", None, GridSpec(1, 1.0, 4096))
    x = math.exp(-math.e)
    assert float(ll(x)) == pytest.approx(1.0, abs=1e-3)
    bump = catalog("bump", None, grid)
    assert integrate(bump, grid.box) == pytest.approx(1.0, abs=1e-6)
    bump2 = catalog("bump", None, GridSpec(2, 1.0, 256))
    assert integrate(bump2, bump2.box) == pytest.approx(1.0, abs=1e-3)


def test_catalog_is_deterministic_and_validates():
    grid = GridSpec(2, 1.0, 32)
    a = catalog("trig", {"seed": 9, "terms": 3}, grid)
    b = catalog("trig", {"seed": 9, "terms": 3}, grid)
    assert np.array_equal(a.values, b.values)
    with pytest.raises(ConfigError):
        catalog("nope", None, grid)
    with pytest.raises(ConfigError):
        catalog("abs_pow", {"alpha": 2.0}, grid)
    assert catalog_entry("loglog").provenance == "worked-example"


def test_singular_entries_stay_finite():
    for name in ("loglog", "log_abs", "power_weight"):
        for grid in (GridSpec(1, 1.0, 4096), GridSpec(1, 1.0, 4097), GridSpec(2, 1.0, 65)):
            assert np.all(np.isfinite(catalog(name, None, grid).values))


@pytest.mark.parametrize("name", ["bump", "poly"])
def test_quadrature_is_second_order(name):
    params = {"coeffs": [0.2, -1.0, 0.0, 3.0]} if name == "poly" else {"radius": 0.8}
    Q = interval(-0.5, 0.5)
    exact = integrate(catalog(name, params, GridSpec(1, 1.0, 2 ** 16)), Q)
    errs = [abs(integrate(catalog(name, params, GridSpec(1, 1.0, n)), Q) - exact) for n in (256, 512)]
    h = 2.0 / 256
    assert errs[0] <= 2 * h * h
    assert errs[1] <= errs[0] / 3


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2 ** 20))
def test_integrate_is_linear(a, b, seed):
    grid = GridSpec(1, 1.0, 256)
    f = catalog("trig", {"seed": seed}, grid)
    g = catalog("trig", {"seed": seed + 1}, grid)
    Q = interval(-0.37, 0.81)
    lhs = integrate(f.with_values(a * f.values + b * g.values), Q)
    rhs = a * integrate(f, Q) + b * integrate(g, Q)
    assert lhs == pytest.approx(rhs, abs=1e-12 * (1 + abs(a) + abs(b)))


@given(st.integers(-40, 40), st.integers(0, 2 ** 20))
def test_translation_covariance(k, seed):
    grid = GridSpec(1, 1.0, 512)
    f = catalog("trig", {"seed": seed}, grid)
    z = k * f.h
    Q = interval(-0.25, 0.25)
    shifted = f.shifted(z)  # x -> f(x + z)
    assert average(f, Q.translate(z)) == pytest.approx(average(shifted, Q), abs=1e-12)
