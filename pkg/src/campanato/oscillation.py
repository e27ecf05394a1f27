"""Oscillation functionals, difference moduli, mollification and the u0 + u1 + u2 decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import AdmissibilityError, ComputationError, ConfigError, UnderResolvedError
from .families import MIN_CELLS
from .grid import BUMP_CONST, Cube, GridFunction, Window, restrict
from .polyproj import Polynomial, project_window
from .spaces import SpaceSpec

MOLLIFIER = "normalised quartic bump (1-|x|^2)^4 on the unit ball"
FD_FRACTION = 1.0 / 16.0
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class Modulus:
    kind: str
    scale: float
    value: float
    domain: Cube
    order: float | None = None

    def __post_init__(self):
        if not self.value >= 0:
            raise ComputationError("modulus value must be nonnegative")


# ---------------------------------------------------------------------------
# oscillations

def degree(alpha: float) -> int:
    if not 0 <= alpha <= 1:
        raise ConfigError(f"alpha must lie in [0, 1], got {alpha}")
    return int(math.floor(alpha))


def _resolved_window(f: GridFunction, Q: Cube) -> Window:
    if Q.dim != f.dim:
        raise ConfigError("cube and function dimensions differ")
    cells = Q.edge / np.asarray(f.cell_size)
    if np.any(cells < MIN_CELLS * (1 - 1e-9)):
        raise UnderResolvedError(f"cube under-resolved: {cells.min():.3g} cells per axis, need {MIN_CELLS}")
    return restrict(f, Q)


def residual(f: GridFunction, Q: Cube, s: int, win: Window | None = None):
    """Window of ``Q`` and the samples of ``f - P_Q^s f`` on it."""
    win = win or _resolved_window(f, Q)
    P = Polynomial(s, project_window(win, s), Q)
    return win, win.values - P.on_window(win)


def osc(f: GridFunction, Q: Cube, alpha: float) -> float:
    """``|Q|^(-alpha/n) avg_Q |f - P_Q^{floor(alpha)} f|``."""
    win, r = residual(f, Q, degree(alpha))
    return Q.edge ** (-alpha) * float(np.sum(win.measure * np.abs(r))) / Q.volume


def osc_x(f: GridFunction, Q: Cube, alpha: float, X: SpaceSpec) -> float:
    """``|Q|^(-alpha/n) ||(f - P) 1_Q||_X / ||1_Q||_X``."""
    win, r = residual(f, Q, degree(alpha))
    return _quotient(win, r, X, alpha)


def osc_tilde1(f: GridFunction, Q: Cube, X: SpaceSpec) -> float:
    """The alpha = 1 oscillation measured against the mean instead of ``P_Q^1``."""
    win, r = residual(f, Q, 0)
    return _quotient(win, r, X, 1.0)


def _quotient(win: Window, r: np.ndarray, X: SpaceSpec, alpha: float) -> float:
    ind = X._norm(win, np.ones_like(r))
    if not ind > 0:
        raise ComputationError(f"indicator of the cube has zero norm in {X.describe()}")
    return win.cube.edge ** (-alpha) * X._norm(win, r) / ind


def osc_many(f: GridFunction, Q: Cube, alpha: float, spaces) -> list:
    """``osc_x`` for several spaces sharing one projection; ``None`` stands for plain ``osc``."""
    win, r = residual(f, Q, degree(alpha))
    out = []
    for X in spaces:
        if X is None:
            out.append(Q.edge ** (-alpha) * float(np.sum(win.measure * np.abs(r))) / Q.volume)
        else:
            out.append(_quotient(win, r, X, alpha))
    return out


# ---------------------------------------------------------------------------
# moduli

def _offsets(f: GridFunction, a: float, half: bool):
    h = f.cell_size
    ks = [int(math.floor(a / hk * (1 + 1e-12))) for hk in h]
    if f.dim == 1:
        offs = [(k,) for k in range(1, ks[0] + 1)]
        if not half:
            offs += [(-k,) for k in range(1, ks[0] + 1)]
        return offs
    offs = []
    for i in range(-ks[0], ks[0] + 1):
        for j in range(-ks[1], ks[1] + 1):
            if (i, j) == (0, 0) or math.hypot(i * h[0], j * h[1]) > a * (1 + 1e-12):
                continue
            if half and (i < 0 or (i == 0 and j < 0)):
                continue
            offs.append((i, j))
    return offs


def _node_mask(f: GridFunction, D: Cube) -> np.ndarray:
    """Lattice nodes of ``f`` lying in the closed cube ``D``."""
    axes = f.axes()
    tol = 1e-12 * max(1.0, D.edge)
    masks = [(ax >= D.lower[k] - tol) & (ax <= D.upper[k] + tol) for k, ax in enumerate(axes)]
    return masks[0] if f.dim == 1 else np.multiply.outer(masks[0], masks[1])


def _shift(arr, off):
    """``out[x] = arr[x + off]``, with a validity mask for indices leaving the array."""
    out = np.zeros_like(arr)
    valid = np.zeros(arr.shape, dtype=bool)
    src, dst = [], []
    for k, o in enumerate(off):
        n = arr.shape[k]
        if abs(o) >= n:
            return out, valid
        if o >= 0:
            src.append(slice(o, n))
            dst.append(slice(0, n - o))
        else:
            src.append(slice(0, n + o))
            dst.append(slice(-o, n))
    out[tuple(dst)] = arr[tuple(src)]
    valid[tuple(dst)] = True
    return out, valid


def _index_range(f: GridFunction, D: Cube, pad: int = 0):
    """Slices covering the nodes of ``f`` in ``D``, widened by ``pad`` nodes (clipped to the box)."""
    sl = []
    for k, ax in enumerate(f.axes()):
        tol = 1e-12 * max(1.0, D.edge)
        inside = np.nonzero((ax >= D.lower[k] - tol) & (ax <= D.upper[k] + tol))[0]
        if inside.size == 0:
            return None
        sl.append(slice(max(0, inside[0] - pad), min(len(ax), inside[-1] + 1 + pad)))
    return tuple(sl)


def second_diff_modulus(f: GridFunction, a: float, D: Cube) -> float:
    """``sup |f(x+y) + f(x-y) - 2 f(x)| / |y|`` over lattice ``x`` in ``D`` and offsets ``0 < |y| <= a``.

    Both ``x + y`` and ``x - y`` must be lattice nodes of the box.
    """
    if a < f.h * (1 - 1e-9):
        raise UnderResolvedError("second_diff_modulus needs a >= cell size")
    pad = int(math.floor(a / min(f.cell_size) * (1 + 1e-12)))
    sl = _index_range(f, D, pad)
    if sl is None:
        raise AdmissibilityError("no lattice node inside the domain")
    v = f.values[sl]
    inD = _node_mask(f, D)[sl]
    best = -1.0
    for off in _offsets(f, a, half=True):
        plus, vp = _shift(v, off)
        minus, vm = _shift(v, tuple(-o for o in off))
        ok = vp & vm & inD
        if not np.any(ok):
            continue
        y = math.hypot(*[o * hk for o, hk in zip(off, f.cell_size)])
        d2 = np.abs(plus + minus - 2 * v)[ok]
        best = max(best, float(d2.max()) / y)
    if best < 0:
        raise AdmissibilityError("no admissible (x, y) pair for the second difference")
    return best


def lip_modulus(f: GridFunction, alpha: float, a: float, D: Cube) -> float:
    """``sup |f(x) - f(y)| / |x - y|^alpha`` over lattice pairs in ``D`` with ``0 < |x - y| <= a``."""
    if not 0 < alpha <= 1:
        raise ConfigError("lip_modulus needs alpha in (0, 1]")
    if a < f.h * (1 - 1e-9):
        raise UnderResolvedError("lip_modulus needs a >= cell size")
    sl = _index_range(f, D)
    if sl is None:
        raise AdmissibilityError("no lattice node inside the domain")
    v = f.values[sl]
    best = -1.0
    for off in _offsets(f, a, half=True):
        other, valid = _shift(v, off)
        if not np.any(valid):
            continue
        d = math.hypot(*[o * hk for o, hk in zip(off, f.cell_size)])
        best = max(best, float(np.abs(other - v)[valid].max()) / d ** alpha)
    if best < 0:
        raise AdmissibilityError("no admissible pair for the Lipschitz quotient")
    return best


# ---------------------------------------------------------------------------
# mollification

def bump_kernel(f: GridFunction, r: float) -> np.ndarray:
    """Quartic bump of radius ``r`` on the lattice offsets, normalised to unit discrete mass."""
    h = f.cell_size
    ks = [int(math.ceil(r / hk)) for hk in h]
    grids = np.meshgrid(*[np.arange(-k, k + 1) * hk for k, hk in zip(ks, h)], indexing="ij")
    rho = np.sqrt(sum(g ** 2 for g in grids)) / r
    ker = np.where(rho < 1, (1 - np.minimum(rho, 1) ** 2) ** 4, 0.0)
    total = ker.sum() * f.cell_volume
    return ker / total


def _check_radius(f: GridFunction, r: float):
    if not r >= 2 * f.h * (1 - 1e-9):
        raise UnderResolvedError(f"mollification radius {r:.3g} below two cells")


def mollify(f: GridFunction, r: float) -> GridFunction:
    """``f * phi_r`` on the lattice of ``f`` (``f`` vanishes off its box)."""
    _check_radius(f, r)
    ker = bump_kernel(f, r) * f.cell_volume
    if f.dim == 1:
        out = np.convolve(f.values, ker, mode="same") if len(ker) <= len(f.values) else \
            signal.convolve(f.values, ker, mode="same", method="direct")
    else:
        out = signal.fftconvolve(f.values, ker, mode="same")
    return f.with_values(out, "multilinear")


def mollify_at(f: GridFunction, x, r: float) -> float:
    """``(f * phi_r)(x)`` at an arbitrary point, with the kernel normalised on the shifted lattice."""
    _check_radius(f, r)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lo = f.box.lower
    h = f.cell_size
    sl, pts = [], []
    for k in range(f.dim):
        i0 = max(0, int(math.floor((x[k] - r - lo[k]) / h[k] - 0.5)))
        i1 = min(f.values.shape[k], int(math.ceil((x[k] + r - lo[k]) / h[k] - 0.5)) + 1)
        sl.append(slice(i0, i1))
        pts.append(lo[k] + (np.arange(i0, i1) + 0.5) * h[k] - x[k])
    grids = np.meshgrid(*pts, indexing="ij")
    rho2 = sum(g ** 2 for g in grids) / r ** 2
    ker = np.where(rho2 < 1, (1 - np.minimum(rho2, 1)) ** 4, 0.0)
    # normalise on the full (unclipped) shifted lattice so boundary truncation is visible
    full = _lattice_mass(x, lo, h, r, f.dim)
    return float(np.sum(ker * f.values[tuple(sl)])) / full


def _lattice_mass(x, lo, h, r, dim):
    pts = []
    for k in range(dim):
        i0 = int(math.floor((x[k] - r - lo[k]) / h[k] - 0.5))
        i1 = int(math.ceil((x[k] + r - lo[k]) / h[k] - 0.5)) + 1
        pts.append(lo[k] + (np.arange(i0, i1) + 0.5) * h[k] - x[k])
    grids = np.meshgrid(*pts, indexing="ij")
    rho2 = sum(g ** 2 for g in grids) / r ** 2
    return float(np.sum(np.where(rho2 < 1, (1 - np.minimum(rho2, 1)) ** 4, 0.0)))


def mollifier_second_moment(dim: int = 1) -> float:
    """``int phi(z) z_1^2 dz`` for the normalised quartic bump (exact)."""
    # int_0^1 (1-u^2)^4 u^(dim+1) du expressed through the Beta function
    if dim == 1:
        return BUMP_CONST[1] * 2 * math.gamma(1.5) * math.gamma(5) / (2 * math.gamma(6.5))
    return BUMP_CONST[2] * math.pi * math.gamma(2) * math.gamma(5) / (2 * math.gamma(7)) * 1.0


@dataclass(frozen=True)
class Decomposition:
    """``f(x) ~ u0 + u1 + u2`` at scale ``t``; ``u2`` includes an extrapolated head on ``(0, s0)``."""

    x: tuple
    t: float
    u0: float
    u1: float
    u2: float
    f_x: float
    head: float
    s0: float
    residual: float
    quadrature_error: float

    @property
    def total(self) -> float:
        return self.u0 + self.u1 + self.u2


def _u0_derivs(f, x, s):
    d = FD_FRACTION * s
    u = mollify_at(f, x, s)
    up = mollify_at(f, x, s + d)
    um = mollify_at(f, x, s - d)
    return u, (up - um) / (2 * d), (up - 2 * u + um) / d ** 2


def _check_interior(f: GridFunction, x, t: float):
    reach = t * (1 + FD_FRACTION)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x - reach < f.box.lower - 1e-12) or np.any(x + reach > f.box.upper + 1e-12):
        raise ConfigError("point too close to the boundary for the mollifier stencil")


def u_decompose(f: GridFunction, x, t: float) -> Decomposition:
    """``u0 = f*phi_t``, ``u1 = -t d/dt u0``, ``u2 = int_0^t s d^2/ds^2 u0 ds`` at the node nearest ``x``.

    Derivatives in ``t`` are central differences with step ``t/16``.  The integral
    for ``u2`` is Gauss-Legendre on dyadic pieces of ``[s0, t]`` (``s0`` = four
    cells); the unresolved head on ``(0, s0)`` is extrapolated with the second
    derivative frozen at ``s0`` and reported as ``head``.
    """
    s0 = MIN_CELLS * f.h
    if t < s0 * (1 - 1e-9):
        raise UnderResolvedError(f"t must span at least {MIN_CELLS} cells")
    idx = f.node_index(x)
    xn = f.node(idx)
    _check_interior(f, xn, t)
    u0, du, _ = _u0_derivs(f, xn, t)
    u1 = -t * du
    u0s, du0s, d2s = _u0_derivs(f, xn, s0)
    head = 0.5 * s0 ** 2 * d2s
    quad, quad_coarse = 0.0, 0.0
    a = s0
    while a < t * (1 - 1e-12):
        b = min(2 * a, t)
        mid, half = (a + b) / 2, (b - a) / 2
        nodes = mid + half * _GL_X
        vals = np.array([s * _u0_derivs(f, xn, s)[2] for s in nodes])
        quad += half * float(vals @ _GL_W)
        # a 3-point rule on the same piece gives the error estimate
        gx, gw = np.polynomial.legendre.leggauss(3)
        cv = np.array([s * _u0_derivs(f, xn, s)[2] for s in mid + half * gx])
        quad_coarse += half * float(cv @ gw)
        a = b
    u2 = quad + head
    fx = float(f.values[idx])
    total = u0 + u1 + u2
    return Decomposition(tuple(float(v) for v in xn), float(t), float(u0), float(u1), float(u2), fx,
                         float(head), float(s0), abs(fx - total), abs(quad - quad_coarse))


def key_estimate_ratio(f: GridFunction, x, t: float, k: int) -> float:
    """``|d^k/dt^k u0(x, t)| / (t^(1-k) osc(f, Q(x, t), 1))`` with ``Q(x, t)`` the cube bounding ``B(x, t)``.

    For ``k = 0`` the numerator is ``|u0(x, t) - P^1_Q f(x)|``: the raw value
    ``u0 ~ f(x)`` does not shrink with the oscillation, while the difference
    to the best affine fit does.
    """
    if k not in (0, 1, 2):
        raise ConfigError("k must be 0, 1 or 2")
    idx = f.node_index(x)
    xn = f.node(idx)
    _check_interior(f, xn, t)
    Q = Cube(tuple(xn), 2 * t)
    win = _resolved_window(f, Q)
    P = Polynomial(1, project_window(win, 1), Q)
    o = Q.edge ** (-1) * float(np.sum(win.measure * np.abs(win.values - P.on_window(win)))) / Q.volume
    u, du, d2u = _u0_derivs(f, xn, t)
    num = {0: abs(u - P(*xn)), 1: abs(du), 2: abs(d2u)}[k]
    den = t ** (1 - k) * o
    if den == 0:
        if num <= 1e-14 * max(1.0, abs(u)):
            return 0.0
        raise ComputationError("zero oscillation with a nonzero derivative")
    return num / den


def literal_key_ratio(f: GridFunction, x, t: float) -> float:
    """``|u0(x, t)| / (t osc(f, Q(x, t), 1))``: the k = 0 quotient without subtracting ``P^1``."""
    idx = f.node_index(x)
    xn = f.node(idx)
    _check_interior(f, xn, t)
    Q = Cube(tuple(xn), 2 * t)
    o = osc(f, Q, 1.0)
    return abs(mollify_at(f, xn, t)) / (t * o)


# ---------------------------------------------------------------------------
# Taylor polynomial of the mollification

@dataclass(frozen=True)
class TaylorReport:
    polynomial: Polynomial
    radius: float
    residual_sup: float
    modulus: float
    ratio: float


def taylor_p1(f: GridFunction, Q: Cube) -> Polynomial:
    """Degree-1 Taylor polynomial at the centre of ``Q`` of ``f * phi_r`` with ``r = edge/2``."""
    return taylor_report(f, Q).polynomial


def taylor_report(f: GridFunction, Q: Cube) -> TaylorReport:
    """:func:`taylor_p1` together with ``sup_Q |f - P1|`` and its ratio to ``r * second_diff_modulus``."""
    r = Q.edge / 2
    if f.box.edge <= 2 * r or not f.box.shrink(r * (1 - 1e-12)).contains(Q):
        raise ConfigError("cube must sit inside the box with a margin of edge/2")
    c = np.asarray(Q.center)
    psi = mollify_at(f, c, r)
    grad = []
    for k, hk in enumerate(f.cell_size):
        e = np.zeros(f.dim)
        e[k] = hk
        grad.append((mollify_at(f, c + e, r) - mollify_at(f, c - e, r)) / (2 * hk))
    P = Polynomial(1, [psi, *grad], Q)
    win = restrict(f, Q)
    inside = win.measure > 0
    res = float(np.max(np.abs(win.values - P.on_window(win))[inside]))
    mod = second_diff_modulus(f, r, Q)
    ratio = res / (r * mod) if mod > 0 else (0.0 if res < 1e-12 else math.inf)
    return TaylorReport(P, r, res, mod, ratio)
