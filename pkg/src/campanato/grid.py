"""Sampled functions on uniform lattices, cubes, quadrature and the builtin catalog.

A :class:`GridFunction` stores one sample per lattice cell, located at the
cell centre.  Integrals use the composite midpoint rule with cells clipped to
the integration cube, so indicators of lattice-aligned cubes integrate
exactly.  Outside its bounding box a grid function is identically zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy import integrate as _sint

from .errors import ConfigError, NonFiniteError

DEFAULT_SAMPLES = {1: 4096, 2: 256}
EVAL_MODES = ("nearest", "multilinear")

# Relative slack used when snapping cube faces onto lattice lines.
_SNAP = 1e-9


@dataclass(frozen=True)
class Cube:
    """Axis-aligned cube with the given centre and edge length."""

    center: tuple
    edge: float

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(np.asarray(self.center, dtype=float)))
        object.__setattr__(self, "center", c)
        edge = float(self.edge)
        if not (math.isfinite(edge) and edge > 0):
            raise ConfigError(f"cube edge must be positive and finite, got {self.edge!r}")
        if len(c) not in (1, 2):
            raise ConfigError(f"only dimensions 1 and 2 are supported, got {len(c)}")
        if not all(math.isfinite(v) for v in c):
            raise ConfigError("cube centre must be finite")
        object.__setattr__(self, "edge", edge)

    @classmethod
    def from_bounds(cls, lower, upper) -> "Cube":
        lo = np.atleast_1d(np.asarray(lower, dtype=float))
        hi = np.atleast_1d(np.asarray(upper, dtype=float))
        edges = hi - lo
        if not np.allclose(edges, edges[0], rtol=1e-12, atol=0):
            raise ConfigError("bounds do not describe a cube (unequal edges)")
        return cls(tuple((lo + hi) / 2), float(edges[0]))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def lower(self) -> np.ndarray:
        return np.asarray(self.center) - self.edge / 2

    @property
    def upper(self) -> np.ndarray:
        return np.asarray(self.center) + self.edge / 2

    @property
    def volume(self) -> float:
        return self.edge ** self.dim

    @property
    def diameter(self) -> float:
        return self.edge * math.sqrt(self.dim)

    def translate(self, z) -> "Cube":
        z = np.broadcast_to(np.asarray(z, dtype=float), (self.dim,))
        return Cube(tuple(np.asarray(self.center) + z), self.edge)

    def dilate(self, lam: float) -> "Cube":
        """Image of the cube under ``x -> lam * x``."""
        return Cube(tuple(np.asarray(self.center) * lam), self.edge * lam)

    def shrink(self, margin: float) -> "Cube":
        return Cube(self.center, self.edge - 2 * margin)

    def contains(self, other: "Cube", tol: float = 1e-12) -> bool:
        slack = tol * max(self.edge, 1.0)
        return bool(np.all(other.lower >= self.lower - slack) and np.all(other.upper <= self.upper + slack))

    def describe(self) -> str:
        lo, hi = self.lower, self.upper
        return " x ".join(f"[{a:.6g},{b:.6g}]" for a, b in zip(lo, hi))


def interval(a: float, b: float) -> Cube:
    """The one-dimensional cube ``[a, b]``."""
    if not b > a:
        raise ConfigError(f"empty interval [{a}, {b}]")
    return Cube(((a + b) / 2,), b - a)


@dataclass(frozen=True)
class Window:
    """Lattice cells meeting a cube, with clipped per-axis lengths."""

    cube: Cube
    coords: tuple
    weights: tuple
    indices: tuple
    values: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def measure(self) -> np.ndarray:
        if self.dim == 1:
            return self.weights[0]
        return np.multiply.outer(self.weights[0], self.weights[1])

    def mesh(self):
        return np.meshgrid(*self.coords, indexing="ij")

    def with_values(self, values) -> "Window":
        return Window(self.cube, self.coords, self.weights, self.indices, np.asarray(values, dtype=float))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real samples at the cell centres of a uniform lattice over ``box``."""

    box: Cube
    values: np.ndarray
    eval_mode: str = "multilinear"

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != self.box.dim:
            raise ConfigError(f"values have {v.ndim} axes but the box has dimension {self.box.dim}")
        if min(v.shape) < 1:
            raise ConfigError("need at least one sample per axis")
        if not np.all(np.isfinite(v)):
            raise NonFiniteError("grid function samples must be finite")
        if self.eval_mode not in EVAL_MODES:
            raise ConfigError(f"eval_mode must be one of {EVAL_MODES}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, fn, box: Cube, samples, eval_mode="multilinear") -> "GridFunction":
        samples = _samples_tuple(samples, box.dim)
        axes = _axes(box, samples)
        pts = np.meshgrid(*axes, indexing="ij")
        return cls(box, np.asarray(fn(*pts), dtype=float), eval_mode)

    @property
    def dim(self) -> int:
        return self.box.dim

    @property
    def samples_per_axis(self) -> tuple:
        return self.values.shape

    @property
    def cell_size(self) -> tuple:
        return tuple(self.box.edge / n for n in self.values.shape)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.cell_size))

    @property
    def h(self) -> float:
        """Largest cell edge."""
        return max(self.cell_size)

    def axes(self) -> list:
        return _axes(self.box, self.values.shape)

    def mesh(self):
        return np.meshgrid(*self.axes(), indexing="ij")

    def with_values(self, values, eval_mode=None) -> "GridFunction":
        return GridFunction(self.box, values, eval_mode or self.eval_mode)

    def shifted(self, z) -> "GridFunction":
        """The function ``x -> f(x + z)`` on the same samples."""
        return GridFunction(self.box.translate(-np.asarray(z, dtype=float)), self.values, self.eval_mode)

    def dilated(self, lam: float) -> "GridFunction":
        """The function ``x -> f(lam * x)`` on the same samples."""
        return GridFunction(self.box.dilate(1.0 / lam), self.values, self.eval_mode)

    def node_index(self, x) -> tuple:
        """Index of the lattice node nearest to ``x``."""
        x = np.broadcast_to(np.asarray(x, dtype=float), (self.dim,))
        lo = self.box.lower
        idx = []
        for k, (n, h) in enumerate(zip(self.values.shape, self.cell_size)):
            i = int(np.floor((x[k] - lo[k]) / h))
            idx.append(min(max(i, 0), n - 1))
        return tuple(idx)

    def node(self, index) -> np.ndarray:
        lo = self.box.lower
        return np.array([lo[k] + (index[k] + 0.5) * h for k, h in enumerate(self.cell_size)])

    def __call__(self, x):
        """Evaluate at points; ``x`` has shape ``(..., dim)`` (or any shape when dim is 1)."""
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            pts = x[..., None]
        else:
            pts = x
        out_shape = pts.shape[:-1]
        pts = pts.reshape(-1, self.dim)
        lo, hi = self.box.lower, self.box.upper
        inside = np.all((pts >= lo) & (pts <= hi), axis=1)
        res = np.zeros(len(pts))
        if self.eval_mode == "nearest":
            idx = []
            for k, (n, h) in enumerate(zip(self.values.shape, self.cell_size)):
                i = np.floor((pts[:, k] - lo[k]) / h).astype(int)
                idx.append(np.clip(i, 0, n - 1))
            res = self.values[tuple(idx)]
        else:
            corners = []
            for k, (n, h) in enumerate(zip(self.values.shape, self.cell_size)):
                u = (pts[:, k] - lo[k]) / h - 0.5
                u = np.clip(u, 0.0, n - 1.0)
                i0 = np.minimum(np.floor(u).astype(int), max(n - 2, 0))
                t = u - i0
                i1 = np.minimum(i0 + 1, n - 1)
                corners.append((i0, i1, t))
            if self.dim == 1:
                i0, i1, t = corners[0]
                res = (1 - t) * self.values[i0] + t * self.values[i1]
            else:
                (a0, a1, s), (b0, b1, t) = corners
                v = self.values
                res = ((1 - s) * (1 - t) * v[a0, b0] + s * (1 - t) * v[a1, b0]
                       + (1 - s) * t * v[a0, b1] + s * t * v[a1, b1])
        res = np.where(inside, res, 0.0)
        return res.reshape(out_shape) if out_shape else float(res[0])


def _samples_tuple(samples, dim) -> tuple:
    if samples is None:
        samples = DEFAULT_SAMPLES[dim]
    if np.isscalar(samples):
        samples = (int(samples),) * dim
    samples = tuple(int(s) for s in samples)
    if len(samples) != dim or min(samples) < 1:
        raise ConfigError(f"samples_per_axis must be {dim} positive integers")
    return samples


def _axes(box: Cube, samples) -> list:
    lo = box.lower
    return [lo[k] + (np.arange(n) + 0.5) * (box.edge / n) for k, n in enumerate(samples)]


def _axis_cells(lo: float, h: float, a: float, b: float):
    """Cell indices of the infinite lattice ``lo + h*Z`` meeting ``[a, b]`` and clipped lengths."""
    fa = (a - lo) / h
    fb = (b - lo) / h
    ra, rb = round(fa), round(fb)
    if abs(fa - ra) <= _SNAP * max(1.0, abs(fa)):
        fa = float(ra)
    if abs(fb - rb) <= _SNAP * max(1.0, abs(fb)):
        fb = float(rb)
    i0, i1 = math.floor(fa), math.ceil(fb)
    idx = np.arange(i0, i1)
    w = (np.minimum(idx + 1, fb) - np.maximum(idx, fa)) * h
    keep = w > 0
    return idx[keep], w[keep]


def restrict(f: GridFunction, Q: Cube) -> Window:
    """Cells of ``f``'s (infinitely extended) lattice meeting ``Q``; samples are 0 off the box."""
    if Q.dim != f.dim:
        raise ConfigError(f"cube dimension {Q.dim} does not match function dimension {f.dim}")
    lo = f.box.lower
    coords, weights, indices = [], [], []
    for k, h in enumerate(f.cell_size):
        idx, w = _axis_cells(lo[k], h, Q.lower[k], Q.upper[k])
        indices.append(idx)
        weights.append(w)
        coords.append(lo[k] + (idx + 0.5) * h)
    shape = f.values.shape
    inside = [(i >= 0) & (i < n) for i, n in zip(indices, shape)]
    if all(m.all() for m in inside):
        sl = tuple(slice(int(i[0]), int(i[-1]) + 1) if len(i) else slice(0, 0) for i in indices)
        vals = f.values[sl]
    else:
        clipped = [np.clip(i, 0, n - 1) for i, n in zip(indices, shape)]
        vals = f.values[np.ix_(*clipped)] if f.dim == 2 else f.values[clipped[0]]
        mask = inside[0] if f.dim == 1 else np.multiply.outer(inside[0], inside[1])
        vals = np.where(mask, vals, 0.0)
    return Window(Q, tuple(coords), tuple(weights), tuple(indices), np.asarray(vals, dtype=float))


def integrate(f: GridFunction, Q: Cube) -> float:
    """Composite midpoint approximation of the integral of ``f`` over ``Q``."""
    win = restrict(f, Q)
    if not np.all(np.isfinite(win.values)):
        raise NonFiniteError("non-finite integrand")
    return float(np.sum(win.values * win.measure))


def average(f: GridFunction, Q: Cube) -> float:
    return integrate(f, Q) / Q.volume


# ---------------------------------------------------------------------------
# catalog

@dataclass(frozen=True)
class GridSpec:
    """Symmetric sampling box ``center + [-half_width, half_width]^dim``."""

    dim: int = 1
    half_width: float = 1.0
    samples: int | None = None
    center: tuple | None = None

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ConfigError("dim must be 1 or 2")
        if not self.half_width > 0:
            raise ConfigError("half_width must be positive")
        if self.samples is not None and int(self.samples) < 1:
            raise ConfigError("samples must be positive")

    @property
    def n(self) -> int:
        return int(self.samples) if self.samples is not None else DEFAULT_SAMPLES[self.dim]

    @property
    def box(self) -> Cube:
        c = self.center if self.center is not None else (0.0,) * self.dim
        return Cube(c, 2 * self.half_width)

    def doubled(self) -> "GridSpec":
        return GridSpec(self.dim, self.half_width, 2 * self.n, self.center)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: Mapping = field(default_factory=dict)
    description: str = ""
    provenance: str = "synthetic"
    support_radius: float = math.inf


# bump normalisations: 1 / integral of (1-|x|^2)^4 over the unit ball
BUMP_CONST = {1: 315.0 / 256.0, 2: 5.0 / math.pi}


def _radius(*xs):
    if len(xs) == 1:
        return np.abs(xs[0])
    return np.hypot(xs[0], xs[1])


def _loglog(r):
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    m = (r > 0) & (r <= 1 / math.e)
    out[m] = np.log(np.log(1.0 / r[m]))
    return out


def _bump_profile(r):
    r = np.asarray(r, dtype=float)
    return np.where(r < 1, (1 - np.minimum(r, 1) ** 2) ** 4, 0.0)


def _trig_coeffs(seed: int, terms: int):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(terms, 4)) / (1.0 + np.arange(terms))[:, None]


def trig_eval(coeffs, *xs):
    """Seeded trigonometric polynomial, a sum of separable cos/sin modes."""
    out = 0.0
    for k, (a, b, c, d) in enumerate(coeffs, start=1):
        if len(xs) == 1:
            out = out + a * np.cos(k * np.pi * xs[0] / 2) + b * np.sin(k * np.pi * xs[0] / 2)
        else:
            out = out + (a * np.cos(k * np.pi * xs[0] / 2) + b * np.sin(k * np.pi * xs[0] / 2)) * \
                (1 + c * np.cos(k * np.pi * xs[1] / 2) + d * np.sin(k * np.pi * xs[1] / 2))
    return out + 0 * xs[0]


def _poly_eval(coeffs, *xs):
    coeffs = list(coeffs)
    if len(xs) == 1:
        return np.polynomial.polynomial.polyval(xs[0], coeffs) + 0 * xs[0]
    out = 0 * xs[0]
    k = 0
    d = 0
    while k < len(coeffs):
        for j in range(d + 1):
            if k >= len(coeffs):
                break
            out = out + coeffs[k] * xs[0] ** (d - j) * xs[1] ** j
            k += 1
        d += 1
    return out


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _get(params, key, default=None):
    if key in params:
        return params[key]
    if default is None:
        raise ConfigError(f"missing catalog parameter {key!r}")
    return default


def catalog_callable(name: str, params: Mapping | None = None, dim: int = 1):
    """Pointwise definition of a catalog entry: ``(fn(*coords), CatalogEntry, flags)``.

    ``flags`` holds ``singular`` (cells touching the origin are replaced by
    cell averages), ``cell_average`` (every cell is a cell average, used for
    indicators) and ``eval_mode``.
    """
    params = dict(params or {})
    flags = {"singular": False, "indicator": None, "eval_mode": "multilinear"}
    if name == "loglog":
        _require(not params, "loglog takes no parameters")
        fn = lambda *xs: _loglog(_radius(*xs))
        entry = CatalogEntry(name, params, "log log(1/|x|) for |x| <= 1/e, else 0",
                             "worked-example", 1 / math.e)
        flags["singular"] = True
    elif name == "log_abs":
        _require(not params, "log_abs takes no parameters")
        fn = lambda *xs: np.log(np.maximum(_radius(*xs), 1e-300))
        entry = CatalogEntry(name, params, "log|x|", "worked-example")
        flags["singular"] = True
    elif name == "abs_pow":
        a = float(_get(params, "alpha", 0.5))
        _require(0 < a <= 1, "abs_pow alpha must lie in (0, 1]")
        fn = lambda *xs: _radius(*xs) ** a
        entry = CatalogEntry(name, {"alpha": a}, f"|x|^{a:g}", "synthetic")
    elif name == "bump":
        rad = float(_get(params, "radius", 1.0))
        _require(rad > 0, "bump radius must be positive")
        c = BUMP_CONST[dim] / rad ** dim
        fn = lambda *xs: c * _bump_profile(_radius(*xs) / rad)
        entry = CatalogEntry(name, {"radius": rad}, f"normalised quartic bump of radius {rad:g}",
                             "synthetic", rad)
    elif name == "sign":
        _require(not params, "sign takes no parameters")
        fn = lambda *xs: np.sign(xs[0])
        entry = CatalogEntry(name, params, "sign of the first coordinate", "synthetic")
        flags["eval_mode"] = "nearest"
    elif name == "poly":
        coeffs = [float(c) for c in _get(params, "coeffs")]
        _require(len(coeffs) > 0, "poly needs at least one coefficient")
        fn = lambda *xs: _poly_eval(coeffs, *xs)
        entry = CatalogEntry(name, {"coeffs": tuple(coeffs)}, "polynomial (ascending / graded order)",
                             "synthetic")
    elif name == "power_weight":
        d = float(_get(params, "delta", 0.5))
        _require(d > -dim, f"power_weight delta must exceed -{dim}")
        fn = lambda *xs: np.maximum(_radius(*xs), 1e-300) ** d
        entry = CatalogEntry(name, {"delta": d}, f"|x|^{d:g}", "synthetic")
        flags["singular"] = True
    elif name == "indicator":
        a = float(_get(params, "a"))
        b = float(_get(params, "b"))
        _require(b > a, "indicator needs a < b")
        fn = lambda *xs: np.prod([(x >= a) & (x <= b) for x in xs], axis=0).astype(float)
        entry = CatalogEntry(name, {"a": a, "b": b}, f"indicator of [{a:g},{b:g}]^n", "synthetic",
                             max(abs(a), abs(b)) * math.sqrt(dim))
        flags["indicator"] = (a, b)
        flags["eval_mode"] = "nearest"
    elif name == "trig":
        seed = int(_get(params, "seed", 0))
        terms = int(_get(params, "terms", 4))
        _require(terms >= 1, "trig needs at least one term")
        coeffs = _trig_coeffs(seed, terms)
        fn = lambda *xs: trig_eval(coeffs, *xs)
        entry = CatalogEntry(name, {"seed": seed, "terms": terms}, "seeded trigonometric polynomial",
                             "synthetic")
    else:
        raise ConfigError(f"unknown catalog function {name!r}; known: {', '.join(CATALOG_NAMES)}")
    return fn, entry, flags


CATALOG_NAMES = ("loglog", "log_abs", "abs_pow", "bump", "sign", "poly", "power_weight",
                 "indicator", "trig")


def _cell_average(fn, lo, hi) -> float:
    if len(lo) == 1:
        pts = [0.0] if lo[0] < 0 < hi[0] else None
        val, _ = _sint.quad(lambda t: float(fn(np.array(t))), lo[0], hi[0], points=pts, limit=200)
        return val / (hi[0] - lo[0])
    val, _ = _sint.dblquad(lambda y, x: float(fn(np.array(x), np.array(y))),
                           lo[0], hi[0], lo[1], hi[1], epsabs=1e-12, epsrel=1e-10)
    return val / ((hi[0] - lo[0]) * (hi[1] - lo[1]))


def catalog(name: str, params: Mapping | None = None, grid: GridSpec | None = None) -> GridFunction:
    """Sample a catalog entry on ``grid`` (default: 1-D, [-1, 1], 4096 cells).

    Cells touching a singularity at the origin hold the exact cell average
    instead of the (infinite or badly resolved) centre value.
    """
    grid = grid or GridSpec()
    fn, entry, flags = catalog_callable(name, params, grid.dim)
    box = grid.box
    samples = _samples_tuple(grid.n, grid.dim)
    axes = _axes(box, samples)
    pts = np.meshgrid(*axes, indexing="ij")
    h = [box.edge / n for n in samples]
    if flags["indicator"] is not None:
        a, b = flags["indicator"]
        fracs = [np.clip((np.minimum(ax + hk / 2, b) - np.maximum(ax - hk / 2, a)) / hk, 0, 1)
                 for ax, hk in zip(axes, h)]
        vals = fracs[0] if grid.dim == 1 else np.multiply.outer(fracs[0], fracs[1])
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.asarray(fn(*pts), dtype=float)
        if flags["singular"]:
            near = np.all([np.abs(p) < hk for p, hk in zip(pts, h)], axis=0)
            for idx in zip(*np.nonzero(near)):
                c = [ax[i] for ax, i in zip(axes, idx)]
                lo = [ci - hk / 2 for ci, hk in zip(c, h)]
                hi = [ci + hk / 2 for ci, hk in zip(c, h)]
                vals[idx] = _cell_average(fn, lo, hi)
    return GridFunction(box, vals, flags["eval_mode"])


def catalog_entry(name: str, params: Mapping | None = None, dim: int = 1) -> CatalogEntry:
    return catalog_callable(name, params, dim)[1]
