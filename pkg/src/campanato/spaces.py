"""Norms of concrete ball Banach function spaces on sampled functions.

Every norm is evaluated on a :class:`~campanato.grid.Window`, i.e. on the
lattice cells meeting a cube with their clipped measures, so ``norm(X, f, Q)``
is the norm of ``f * 1_Q`` under the cell (midpoint) discretisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy import signal

from .errors import AdmissibilityError, BracketError, ComputationError, ConfigError
from .grid import Cube, GridFunction, Window, restrict

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(20)

# Morrey ball centres: every MORREY_STRIDE-th lattice node of the support.
MORREY_STRIDE = 8
# Above this many (centre, cell) pairs the 2-D ball masses go through FFT convolution.
MORREY_DIRECT_LIMIT = 2_000_000
LUXEMBURG_ITERATIONS = 60


def conjugate(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _check_p(p, lo=1.0, name="p", open_lo=False):
    p = float(p)
    ok = (p > lo) if open_lo else (p >= lo)
    if not (ok and math.isfinite(p)):
        bracket = "(" if open_lo else "["
        raise ConfigError(f"{name}={p:g} outside the admissible range {bracket}{lo:g},inf)")
    return p


class SpaceSpec:
    """Base class of the space variants; subclasses implement ``_norm``."""

    kind: ClassVar[str] = "abstract"

    def _norm(self, win: Window, vals: np.ndarray) -> float:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.describe()


@dataclass(frozen=True)
class Lp(SpaceSpec):
    p: float
    kind: ClassVar[str] = "Lp"

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))

    def _norm(self, win, vals):
        return _lp(np.abs(vals), win.measure, self.p)

    def describe(self):
        return f"Lp(p={self.p:g})"


@dataclass(frozen=True)
class Linf(SpaceSpec):
    kind: ClassVar[str] = "Linf"

    def _norm(self, win, vals):
        m = win.measure > 0
        return float(np.max(np.abs(vals)[m])) if np.any(m) else 0.0

    def describe(self):
        return "Linf"


@dataclass(frozen=True, eq=False)
class WeightedLp(SpaceSpec):
    """``(int |f|^p w dx)^(1/p)``; the weight is read at the cell centres."""

    p: float
    weight: GridFunction
    label: str = "w"
    kind: ClassVar[str] = "WeightedLp"

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))

    def weight_on(self, win: Window) -> np.ndarray:
        w = _sample_on(self.weight, win)
        if np.any(w[win.measure > 0] <= 0):
            raise ComputationError("nonpositive weight sample inside the support")
        return w

    def _norm(self, win, vals):
        return _lp(np.abs(vals), win.measure * self.weight_on(win), self.p)

    def describe(self):
        return f"WeightedLp(p={self.p:g},{self.label})"


@dataclass(frozen=True, eq=False)
class VariableLp(SpaceSpec):
    """Luxemburg norm ``inf{lam > 0 : int (|f|/lam)^p(x) dx <= 1}``."""

    exponent: GridFunction
    label: str = "p(.)"
    kind: ClassVar[str] = "VariableLp"

    def __post_init__(self):
        if np.any(self.exponent.values <= 1):
            raise ConfigError("variable exponent values must lie in (1, inf)")

    def _norm(self, win, vals):
        pex = _sample_on(self.exponent, win)
        return luxemburg(np.abs(vals), win.measure, pex)

    def describe(self):
        return f"VariableLp({self.label})"


@dataclass(frozen=True)
class MixedNorm(SpaceSpec):
    """Iterated norm: ``L^{p_1}`` in ``x_1`` first, then ``L^{p_2}`` in ``x_2``."""

    p_vec: tuple
    kind: ClassVar[str] = "MixedNorm"

    def __post_init__(self):
        pv = tuple(_check_p(p, name="p_i") for p in np.atleast_1d(self.p_vec))
        if len(pv) not in (1, 2):
            raise ConfigError("p_vec must have one entry per dimension (1 or 2)")
        object.__setattr__(self, "p_vec", pv)

    def _norm(self, win, vals):
        if len(self.p_vec) != win.dim:
            raise ConfigError(f"MixedNorm with {len(self.p_vec)} exponents on a {win.dim}-D function")
        a = np.abs(vals)
        if win.dim == 1:
            return _lp(a, win.weights[0], self.p_vec[0])
        p1, p2 = self.p_vec
        inner = np.sum(a ** p1 * win.weights[0][:, None], axis=0) ** (1 / p1)
        return _lp(inner, win.weights[1], p2)

    def describe(self):
        return "MixedNorm(" + ",".join(f"{p:g}" for p in self.p_vec) + ")"


@dataclass(frozen=True)
class Morrey(SpaceSpec):
    """``sup_B |B|^(1/p - 1/q) ||f 1_B||_{L^q}`` with ``1 < q <= p``.

    The sup runs over a sampled ball family: centres on every 8th lattice node
    of the support (plus its middle node), radii dyadic multiples of the cell
    size up to the support diameter.  The sampled sup under-estimates the true one.
    """

    p: float
    q: float
    kind: ClassVar[str] = "Morrey"

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (1 < q <= p < math.inf):
            raise ConfigError(f"Morrey needs 1 < q <= p < inf, got p={p:g}, q={q:g}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def _norm(self, win, vals):
        if win.dim == 1:
            return _morrey_1d(win, np.abs(vals), self.p, self.q)
        return _morrey_2d(win, np.abs(vals), self.p, self.q)

    def describe(self):
        return f"Morrey(p={self.p:g},q={self.q:g})"


@dataclass(frozen=True)
class Lorentz(SpaceSpec):
    """``(int_0^inf [t^(1/p) f**(t)]^q dt/t)^(1/q)`` with ``f**`` the maximal average of ``f*``."""

    p: float
    q: float
    kind: ClassVar[str] = "Lorentz"

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (1 < p < math.inf and 1 < q < math.inf):
            raise ConfigError(f"Lorentz needs p, q in (1, inf), got p={p:g}, q={q:g}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def _norm(self, win, vals):
        return lorentz_norm(np.abs(vals).ravel(), win.measure.ravel(), self.p, self.q)

    def describe(self):
        return f"Lorentz(p={self.p:g},q={self.q:g})"


@dataclass(frozen=True)
class Herz(SpaceSpec):
    """Herz norm over dyadic annuli ``2^(k-1) <= |x| < 2^k`` (cells assigned by their centres)."""

    alpha: float
    p: float
    q: float
    homogeneous: bool = True
    kind: ClassVar[str] = "Herz"

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "p", _check_p(self.p))
        object.__setattr__(self, "q", _check_p(self.q, name="q"))

    def admissible(self, dim: int) -> bool:
        """Whether ``alpha`` lies in the range where the associate pairing holds."""
        return -dim * (1 - 1 / self.q) < self.alpha < dim / self.q

    def _norm(self, win, vals):
        if win.dim == 1:
            r = np.abs(win.coords[0])
        else:
            X, Y = win.mesh()
            r = np.hypot(X, Y)
        cell = max(float(np.max(w)) if len(w) else 0.0 for w in win.weights)
        kmin = math.floor(math.log2(cell)) + 1 if cell > 0 else 0
        with np.errstate(divide="ignore"):
            k = np.floor(np.log2(np.maximum(r, 1e-300))).astype(int) + 1
        k = np.maximum(k, kmin)
        if not self.homogeneous:
            k = np.maximum(k, 0)
        k = k.ravel()
        mass = (win.measure * np.abs(vals) ** self.q).ravel()
        k0 = int(k.min()) if k.size else 0
        sums = np.bincount(k - k0, weights=mass)
        ks = np.arange(k0, k0 + len(sums))
        shell = sums ** (1 / self.q)
        return float(np.sum((2.0 ** (ks * self.alpha) * shell) ** self.p) ** (1 / self.p))

    def describe(self):
        tag = "" if self.homogeneous else ",inhom"
        return f"Herz(a={self.alpha:g},p={self.p:g},q={self.q:g}{tag})"


# ---------------------------------------------------------------------------
# helpers

def _lp(a, w, p) -> float:
    return float(np.sum(w * a ** p) ** (1.0 / p))


def _sample_on(g: GridFunction, win: Window) -> np.ndarray:
    if win.dim == 1:
        return np.asarray(g(win.coords[0]), dtype=float).reshape(win.values.shape)
    X, Y = win.mesh()
    return np.asarray(g(np.stack([X, Y], axis=-1)), dtype=float).reshape(win.values.shape)


def luxemburg(a: np.ndarray, w: np.ndarray, pex: np.ndarray, iterations: int = LUXEMBURG_ITERATIONS) -> float:
    """Luxemburg norm by bisection on ``log lam`` for the modular ``sum w (a/lam)^p``.

    The norm is positively homogeneous, so the bisection runs on ``a / max(a)``
    and the result is scaled back; this keeps tiny and huge samples representable.
    """
    m = (w > 0) & (a > 0)
    a, w, pex = a[m], w[m], pex[m]
    if a.size == 0:
        return 0.0
    scale = float(np.max(a))
    a = a / scale

    def modular(lam):
        with np.errstate(over="ignore"):
            return float(np.sum(w * (a / lam) ** pex))

    rho1 = modular(1.0)
    if not math.isfinite(rho1):
        raise BracketError("modular is not finite at lambda = 1")
    hi = max(1.0, rho1) * (1.0 + float(np.max(a)))
    lo = 1e-12 * hi
    while modular(lo) <= 1.0:
        lo *= 1e-6
        if lo < 1e-300:
            raise BracketError("could not bracket the Luxemburg norm from below")
    if modular(hi) > 1.0:
        raise BracketError("could not bracket the Luxemburg norm from above")
    llo, lhi = math.log(lo), math.log(hi)
    for _ in range(iterations):
        mid = 0.5 * (llo + lhi)
        if modular(math.exp(mid)) > 1.0:
            llo = mid
        else:
            lhi = mid
    return math.exp(lhi) * scale


def _morrey_1d(win, a, p, q) -> float:
    w = win.weights[0]
    if a.size == 0:
        raise AdmissibilityError("empty sampled ball family")
    centres = win.coords[0]
    # clipped cells are contiguous, so their edges follow from the lengths
    edges = win.cube.lower[0] + np.concatenate([[0.0], np.cumsum(w)])
    cum = np.concatenate([[0.0], np.cumsum(w * a ** q)])
    idx = np.unique(np.concatenate([np.arange(0, len(centres), MORREY_STRIDE), [len(centres) // 2]]))
    x = centres[idx][:, None]
    R = _dyadic_radii(float(np.max(w)), edges[-1] - edges[0])[None, :]
    mass = np.interp(x + R, edges, cum) - np.interp(x - R, edges, cum)
    vals = (2 * R) ** (1 / p - 1 / q) * np.maximum(mass, 0.0) ** (1 / q)
    return float(np.max(vals))


def _dyadic_radii(h, diam):
    k = max(0, math.ceil(math.log2(max(diam, h) / h)))
    return h * 2.0 ** np.arange(k + 1)


def _morrey_2d(win, a, p, q) -> float:
    if a.size == 0:
        raise AdmissibilityError("empty sampled ball family")
    h0, h1 = float(np.max(win.weights[0])), float(np.max(win.weights[1]))
    dens = win.measure * a ** q
    n0, n1 = dens.shape
    diam = math.hypot(n0 * h0, n1 * h1)
    ci = np.unique(np.concatenate([np.arange(0, n0, MORREY_STRIDE), [n0 // 2]]))
    cj = np.unique(np.concatenate([np.arange(0, n1, MORREY_STRIDE), [n1 // 2]]))
    radii = _dyadic_radii(max(h0, h1), diam)
    direct = len(ci) * len(cj) * dens.size <= MORREY_DIRECT_LIMIT
    if direct:
        # squared distances between the sampled centres and every cell, in cell units
        di = (np.arange(n0)[None, :] - ci[:, None]) * h0
        dj = (np.arange(n1)[None, :] - cj[:, None]) * h1
        d2 = (di[:, None, :, None] ** 2 + dj[None, :, None, :] ** 2).reshape(len(ci) * len(cj), -1)
        flat = dens.ravel()
    best = 0.0
    for R in radii:
        k0, k1 = int(R // h0), int(R // h1)
        ii = np.arange(-k0, k0 + 1)[:, None] * h0
        jj = np.arange(-k1, k1 + 1)[None, :] * h1
        mask = (ii ** 2 + jj ** 2 <= R * R * (1 + 1e-12)).astype(float)
        ball = float(mask.sum()) * h0 * h1
        if direct:
            mass = (d2 <= R * R * (1 + 1e-12)) @ flat
        else:
            conv = signal.fftconvolve(dens, mask, mode="same") if mask.size > 1 else dens
            mass = conv[np.ix_(ci, cj)]
        mass = np.maximum(mass, 0.0)
        best = max(best, float(np.max(ball ** (1 / p - 1 / q) * mass ** (1 / q))))
    return best


def lorentz_norm(a: np.ndarray, w: np.ndarray, p: float, q: float) -> float:
    """Lorentz ``L^{p,q}`` norm of a step function with values ``a`` on cells of measure ``w``.

    ``f**`` is exact for step functions; the ``dt/t`` integral is analytic on the
    first segment and beyond the support, Gauss-Legendre in between.
    """
    m = (a > 0) & (w > 0)
    if not np.any(m):
        return 0.0
    order = np.argsort(-a[m], kind="stable")
    v = a[m][order]
    mu = w[m][order]
    t = np.cumsum(mu)
    F = np.cumsum(v * mu)
    e = q / p - 1 - q
    head = v[0] ** q * t[0] ** (q / p) * p / q
    tail = F[-1] ** q * t[-1] ** (q / p - q) / (q - q / p)
    mid = 0.0
    if len(v) > 1:
        a0, b0 = t[:-1], t[1:]
        A = F[:-1] - v[1:] * a0
        vv = v[1:]
        # split segments geometrically so each piece has endpoint ratio <= 2
        pieces = np.maximum(1, np.ceil(np.log2(b0 / a0)).astype(int))
        rep = np.repeat(np.arange(len(a0)), pieces)
        j = np.arange(len(rep)) - np.repeat(np.cumsum(pieces) - pieces, pieces)
        ratio = (b0 / a0)[rep] ** (1.0 / pieces[rep])
        lo = a0[rep] * ratio ** j
        hi = np.where(j == pieces[rep] - 1, b0[rep], lo * ratio)
        half = (hi - lo) / 2
        nodes = (lo + hi)[:, None] / 2 + half[:, None] * _GAUSS_X[None, :]
        vals = nodes ** e * (A[rep][:, None] + vv[rep][:, None] * nodes) ** q
        mid = float(np.sum(half * (vals @ _GAUSS_W)))
    return float((head + mid + tail) ** (1 / q))


def lorentz_maximal_average(a: np.ndarray, w: np.ndarray, t: float) -> float:
    """``f**(t) = (1/t) int_0^t f*`` for a step function (sorted path)."""
    m = (a > 0) & (w > 0)
    v = np.sort(a[m])[::-1]
    mu = w[m][np.argsort(-a[m], kind="stable")]
    cum = np.concatenate([[0.0], np.cumsum(mu)])
    F = np.concatenate([[0.0], np.cumsum(v * mu)])
    if t >= cum[-1]:
        return F[-1] / t
    k = int(np.searchsorted(cum, t, side="right")) - 1
    return (F[k] + v[k] * (t - cum[k])) / t


# ---------------------------------------------------------------------------
# public operations

def norm(X: SpaceSpec, f: GridFunction, support: Cube) -> float:
    """``||f 1_support||_X``."""
    return norm_window(X, restrict(f, support))


def norm_window(X: SpaceSpec, win: Window, values=None) -> float:
    vals = win.values if values is None else np.asarray(values, dtype=float)
    return X._norm(win, vals)


def indicator_norm(X: SpaceSpec, f: GridFunction, Q: Cube) -> float:
    """``||1_Q||_X`` on the lattice of ``f``."""
    win = restrict(f, Q)
    return X._norm(win, np.ones_like(win.values))


def associate(X: SpaceSpec) -> SpaceSpec:
    """The associate (Koethe dual) space where it is modelled."""
    if isinstance(X, Lp):
        return Linf() if X.p == 1 else Lp(conjugate(X.p))
    if isinstance(X, Linf):
        return Lp(1.0)
    if isinstance(X, WeightedLp):
        if X.p == 1:
            raise ConfigError("associate of weighted L^1 is not modelled")
        pp = conjugate(X.p)
        return WeightedLp(pp, X.weight.with_values(X.weight.values ** (1 - pp)), f"{X.label}^{1 - pp:g}")
    if isinstance(X, MixedNorm):
        if any(p == 1 for p in X.p_vec):
            raise ConfigError("associate of a mixed norm with an exponent 1 is not modelled")
        return MixedNorm(tuple(conjugate(p) for p in X.p_vec))
    if isinstance(X, Herz):
        if X.p == 1 or X.q == 1:
            raise ConfigError("associate of a Herz space with an exponent 1 is not modelled")
        return Herz(-X.alpha, conjugate(X.p), conjugate(X.q), X.homogeneous)
    raise ConfigError(f"associate not modelled for {X.describe()}")


def has_associate(X: SpaceSpec) -> bool:
    try:
        associate(X)
    except ConfigError:
        return False
    return True


def ball_average(f: GridFunction, r: float) -> GridFunction:
    """Centred ball average of ``|f|`` at every lattice node (f vanishes off its box)."""
    a = np.abs(f.values)
    if f.dim == 1:
        h = f.cell_size[0]
        lo = f.box.lower[0]
        edges = lo + h * np.arange(len(a) + 1)
        cum = np.concatenate([[0.0], np.cumsum(a * h)])
        x = f.axes()[0]
        out = (np.interp(x + r, edges, cum) - np.interp(x - r, edges, cum)) / (2 * r)
        return f.with_values(np.maximum(out, 0.0), "multilinear")
    h0, h1 = f.cell_size
    k0, k1 = int(r // h0), int(r // h1)
    ii = np.arange(-k0, k0 + 1)[:, None] * h0
    jj = np.arange(-k1, k1 + 1)[None, :] * h1
    mask = (ii ** 2 + jj ** 2 <= r * r * (1 + 1e-12)).astype(float)
    out = signal.fftconvolve(a, mask, mode="same") / mask.sum() if mask.size > 1 else a
    return f.with_values(np.maximum(out, 0.0), "multilinear")


def default_radii(f: GridFunction) -> list:
    return list(_dyadic_radii(f.h, f.box.diameter))


def maximal(f: GridFunction, radii=None) -> GridFunction:
    """Pointwise max over ``radii`` of the centred ball averages of ``|f|``."""
    radii = default_radii(f) if radii is None else [float(r) for r in radii]
    if not radii or min(radii) <= 0:
        raise ConfigError("radii must be a non-empty list of positive reals")
    if any(b < a for a, b in zip(radii, radii[1:])):
        raise ConfigError("radii must be ascending")
    out = None
    for r in radii:
        v = ball_average(f, r).values
        out = v if out is None else np.maximum(out, v)
    return f.with_values(out, "multilinear")


@dataclass(frozen=True, eq=False)
class Weight:
    """A strictly positive sampled weight."""

    w: GridFunction
    p: float | None = None

    def __post_init__(self):
        if np.any(self.w.values <= 0):
            raise ComputationError("nonpositive weight sample")


def ap_constant(weight, p: float, cubes) -> float:
    """Max over ``cubes`` of ``avg(w) * avg(w^(1/(1-p)))^(p-1)`` (cubes stand in for balls)."""
    w = weight.w if isinstance(weight, Weight) else weight
    if not p > 1:
        raise ConfigError("ap_constant needs p > 1")
    if np.any(w.values <= 0):
        raise ComputationError("nonpositive weight sample")
    best = 0.0
    for Q in cubes:
        win = restrict(w, Q)
        meas = win.measure
        inside = meas > 0
        if np.any(win.values[inside] <= 0):
            raise ComputationError("cube leaves the weight's box (weight vanishes there)")
        tot = float(meas.sum())
        a1 = float(np.sum(meas * win.values)) / tot
        a2 = float(np.sum(meas[inside] * win.values[inside] ** (1.0 / (1.0 - p)))) / tot
        best = max(best, a1 * a2 ** (p - 1))
    return best
