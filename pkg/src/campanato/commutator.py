"""Fractional integrals, Lipschitz commutators and the probes built on them.

Operators are dense kernel sums over the cells of a grid function: the weight
of cell ``j`` seen from node ``x_i`` is the exact integral of ``|x_i - y|^(alpha-n)``
over that cell (analytic in 1-D, Gauss-Legendre in 2-D with a polar formula on
the singular cell).  Grid functions vanish off their box, so every input is
compactly supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _sint
from scipy import signal

from ._parallel import pmap
from .errors import ConfigError
from .families import default_domain, dyadic_cells
from .grid import GridFunction, integrate
from .oscillation import lip_modulus
from .spaces import Lp, Morrey, norm
from .vanishing import DecayCurve, scale_profile, small_cube_curve

DIAGONAL_RULES = ("omit_cell", "symmetric_average")
ROW_BLOCK = 256
_NEAR = 3


@dataclass(frozen=True)
class KernelConfig:
    """Kernel ``|x - y|^(alpha_frac - n)`` truncated at ``truncation_radius``."""

    alpha_frac: float
    diagonal_rule: str = "omit_cell"
    truncation_radius: float = math.inf

    def __post_init__(self):
        if self.diagonal_rule not in DIAGONAL_RULES:
            raise ConfigError(f"diagonal_rule must be one of {DIAGONAL_RULES}")
        if not self.truncation_radius > 0:
            raise ConfigError("truncation_radius must be positive")
        if not self.alpha_frac > 0:
            raise ConfigError("alpha_frac must be positive")

    def check(self, dim: int):
        if not 0 < self.alpha_frac < dim:
            raise ConfigError(f"alpha_frac={self.alpha_frac:g} outside (0, {dim})")

    def describe(self) -> str:
        return (f"|x-y|^(alpha-n), alpha={self.alpha_frac:g}, diagonal={self.diagonal_rule}, "
                f"truncation={self.truncation_radius:g}")


# ---------------------------------------------------------------------------
# kernel weights

def _cell_weights_1d(n: int, h: float, a: float) -> np.ndarray:
    """``int_{cell d} |z|^(a-1) dz`` for offsets ``d = 0..n-1``."""
    d = np.arange(n, dtype=float)
    w = ((d + 0.5) ** a - np.maximum(d - 0.5, 0.0) ** a) * h ** a / a
    w[0] *= 2
    return w


def _square_singular(h: float, a: float) -> float:
    """``int_{[-h/2, h/2]^2} |z|^(a-2) dz`` in polar coordinates."""
    inner, _ = _sint.quad(lambda t: math.cos(t) ** (-a), 0.0, math.pi / 4)
    return 8 * (0.5 * h) ** a / a * inner


def _cell_weights_2d(n0: int, n1: int, h0: float, h1: float, a: float) -> np.ndarray:
    i = np.arange(n0)[:, None] * h0
    j = np.arange(n1)[None, :] * h1
    w = np.hypot(i, j) ** np.where((i == 0) & (j == 0), 1.0, a - 2) * h0 * h1
    gx, gw = np.polynomial.legendre.leggauss(16)
    for a_ in range(min(_NEAR + 1, n0)):
        for b_ in range(min(_NEAR + 1, n1)):
            if a_ == 0 and b_ == 0:
                continue
            xs = (a_ + 0.5 * gx) * h0
            ys = (b_ + 0.5 * gx) * h1
            X, Y = np.meshgrid(xs, ys, indexing="ij")
            w[a_, b_] = float(np.einsum("i,j,ij->", gw, gw, np.hypot(X, Y) ** (a - 2))) * h0 * h1 / 4
    w[0, 0] = _square_singular(h0, a) if abs(h0 - h1) < 1e-12 * h0 else _rect_singular(h0, h1, a)
    return w


def _rect_singular(h0, h1, a):
    val, _ = _sint.dblquad(lambda y, x: math.hypot(x, y) ** (a - 2), 0, h0 / 2, 0, h1 / 2)
    return 4 * val


def kernel_weights(f: GridFunction, cfg: KernelConfig) -> np.ndarray:
    """Weights indexed by absolute lattice offset; entry 0 is the singular cell."""
    cfg.check(f.dim)
    a = cfg.alpha_frac
    if f.dim == 1:
        (n,), (h,) = f.values.shape, f.cell_size
        w = _cell_weights_1d(n, h, a)
        dist = np.arange(n) * h
    else:
        (n0, n1), (h0, h1) = f.values.shape, f.cell_size
        w = _cell_weights_2d(n0, n1, h0, h1, a)
        dist = np.hypot(np.arange(n0)[:, None] * h0, np.arange(n1)[None, :] * h1)
    w = np.where(dist <= cfg.truncation_radius, w, 0.0)
    return w


def diagonal_mass(f: GridFunction, cfg: KernelConfig) -> float:
    """Kernel mass of the singular cell, ``int_cell |z|^(alpha-n) dz``."""
    return float(kernel_weights(f, cfg).flat[0])


def kernel_matrix(f: GridFunction, cfg: KernelConfig, rows=None) -> np.ndarray:
    """Dense matrix ``K[i, j]`` acting on the flattened samples of ``f``."""
    w = kernel_weights(f, cfg)
    if cfg.diagonal_rule == "omit_cell":
        w = w.copy()
        w.flat[0] = 0.0
    if f.dim == 1:
        n = f.values.shape[0]
        idx = np.arange(n)
        rows = idx if rows is None else np.asarray(rows)
        return w[np.abs(rows[:, None] - idx[None, :])]
    n0, n1 = f.values.shape
    I, J = np.meshgrid(np.arange(n0), np.arange(n1), indexing="ij")
    I, J = I.ravel(), J.ravel()
    rows = np.arange(n0 * n1) if rows is None else np.asarray(rows)
    return w[np.abs(I[rows][:, None] - I[None, :]), np.abs(J[rows][:, None] - J[None, :])]


def _blocks(total):
    return [np.arange(s, min(s + ROW_BLOCK, total)) for s in range(0, total, ROW_BLOCK)]


def frac_integral(f: GridFunction, cfg: KernelConfig) -> GridFunction:
    """``I_alpha f(x) = int f(y) |x - y|^(alpha - n) dy`` at every lattice node."""
    cfg.check(f.dim)
    v = f.values.ravel()

    def work(rows):
        return (kernel_matrix(f, cfg, rows) * v[None, :]).sum(axis=1)

    out = np.concatenate(pmap(work, _blocks(v.size)))
    return f.with_values(out.reshape(f.values.shape), "multilinear")


def omitted_mass_bound(f: GridFunction, cfg: KernelConfig) -> float:
    """Bound on the contribution of the singular cell: ``||f||_inf * int_cell |z|^(alpha-n) dz``."""
    return float(np.max(np.abs(f.values))) * diagonal_mass(f, cfg)


def _same_lattice(b: GridFunction, f: GridFunction):
    if b.box != f.box or b.values.shape != f.values.shape:
        raise ConfigError("symbol and function must share one grid")


def commutator_apply(b: GridFunction, f: GridFunction, cfg: KernelConfig) -> GridFunction:
    """``[b, I_alpha] f(x) = int (b(x) - b(y)) |x - y|^(alpha - n) f(y) dy``.

    The factor ``b(x) - b(y)`` vanishes on the singular cell, so that cell never
    contributes whatever the diagonal rule.
    """
    cfg.check(f.dim)
    _same_lattice(b, f)
    bv, v = b.values.ravel(), f.values.ravel()

    def work(rows):
        K = kernel_matrix(f, cfg, rows)
        return (K * (bv[rows][:, None] - bv[None, :]) * v[None, :]).sum(axis=1)

    out = np.concatenate(pmap(work, _blocks(v.size)))
    return f.with_values(out.reshape(f.values.shape), "multilinear")


# ---------------------------------------------------------------------------
# probes

TARGETS = ("bmo", "lip", "morrey")


@dataclass(frozen=True)
class BoundReport:
    target: str
    ratios: tuple
    max_ratio: float
    b_seminorm: float
    family_descriptor: str


def _check_relation(ok: bool, msg: str):
    if not ok:
        raise ConfigError(f"parameter relation violated: {msg}")


def _bmo_sup(g: GridFunction):
    D = default_domain(g)
    prof, desc = scale_profile(g, 0.0, [None], D, dyadic_cells(g, D))
    return float(prof.max()), "; ".join(desc)


def bound_probe(b: GridFunction, f_set, alpha: float, beta: float, p: float, q: float, target: str,
                gamma: float | None = None, s: float | None = None, t: float | None = None,
                cfg: KernelConfig | None = None, tol: float = 1e-12) -> BoundReport:
    """Target seminorm of ``[b, I_alpha] f`` over ``||b||_Lip_beta * ||f||_Morrey(p, q)`` for each ``f``.

    Targets: ``bmo`` needs ``n/p = alpha + beta``; ``lip`` needs ``gamma = alpha +
    beta - n/p`` in (0, 1); ``morrey`` needs ``alpha + beta < n/p``, ``1/s = 1/p -
    alpha/n`` and ``t/s = q/p`` (so ``t <= s``).
    """
    n = b.dim
    if target not in TARGETS:
        raise ConfigError(f"target must be one of {TARGETS}")
    if not (0 < beta < 1 and 1 < q <= p):
        raise ConfigError("need beta in (0, 1) and 1 < q <= p")
    if target == "bmo":
        _check_relation(abs(n / p - (alpha + beta)) <= tol, "n/p = alpha + beta")
    elif target == "lip":
        gamma = alpha + beta - n / p if gamma is None else gamma
        _check_relation(abs(gamma - (alpha + beta - n / p)) <= tol and 0 < gamma < 1,
                        "gamma = alpha + beta - n/p in (0, 1)")
    else:
        _check_relation(alpha + beta < n / p, "alpha + beta < n/p")
        s = 1 / (1 / p - alpha / n) if s is None else s
        _check_relation(abs(1 / s - (1 / p - alpha / n)) <= tol, "1/s = 1/p - alpha/n")
        t = s * q / p if t is None else t
        _check_relation(abs(t / s - q / p) <= tol and 1 < t <= s, "t/s = q/p with 1 < t <= s")
    cfg = cfg or KernelConfig(alpha)
    if abs(cfg.alpha_frac - alpha) > 0:
        raise ConfigError("kernel alpha differs from the probe alpha")
    box = b.box
    bsemi = lip_modulus(b, beta, box.diameter, box)
    ratios, desc = [], "whole box"
    for f in f_set:
        _same_lattice(b, f)
        fn = norm(Morrey(p, q), f, box)
        if fn == 0 or bsemi == 0:
            ratios.append(0.0)
            continue
        C = commutator_apply(b, f, cfg)
        if target == "bmo":
            val, desc = _bmo_sup(C)
        elif target == "lip":
            val = lip_modulus(C, gamma, box.diameter, box)
            desc = "lattice pairs in the whole box"
        else:
            val = norm(Morrey(s, t), C, box)
            desc = "Morrey ball family over the whole box"
        ratios.append(val / (bsemi * fn))
    return BoundReport(target, tuple(ratios), max(ratios) if ratios else 0.0, bsemi, desc)


@dataclass(frozen=True)
class TailReport:
    curve: DecayCurve
    fitted_slope: float | None
    expected_slope: float


def fit_slope(x, y) -> float | None:
    """Least-squares slope of ``log y`` against ``log x``; ``None`` when some value is zero."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any(y <= 0):
        return None
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _support_radius(g: GridFunction) -> float:
    nz = np.abs(g.values) > 0
    if not np.any(nz):
        return 0.0
    pts = np.stack([m[nz] for m in g.mesh()], axis=-1)
    return float(np.max(np.linalg.norm(pts, axis=-1)) + g.h / 2 * math.sqrt(g.dim))


def tail_decay_probe(b: GridFunction, f: GridFunction, alpha: float, p: float, radii,
                     cfg: KernelConfig | None = None) -> TailReport:
    """``R -> sup_{|x| >= R} |[b, I_alpha] f(x)|`` over the box, with its log-log slope."""
    n = f.dim
    radii = [float(r) for r in radii]
    if any(b2 <= a for a, b2 in zip(radii, radii[1:])):
        raise ConfigError("radii must be ascending")
    if not n / p - alpha > 0:
        raise ConfigError("need n/p - alpha > 0")
    if _support_radius(b) > radii[0] / 2 + 1e-12:
        raise ConfigError("support of b must lie in B(0, min(radii)/2)")
    C = commutator_apply(b, f, cfg or KernelConfig(alpha))
    r = np.linalg.norm(np.stack(C.mesh(), axis=-1), axis=-1)
    pts = []
    for R in radii:
        m = r >= R
        if not np.any(m):
            raise ConfigError(f"no lattice point with |x| >= {R:g} in the box")
        pts.append((R, float(np.max(np.abs(C.values[m])))))
    curve = DecayCurve("shift_distance", pts, f"sup over lattice points with |x| >= R; {(cfg or KernelConfig(alpha)).describe()}")
    return TailReport(curve, fit_slope(radii, curve.values), -(n / p - alpha))


@dataclass(frozen=True)
class ConvolutionReport:
    curve: DecayCurve
    source_curve: DecayCurve
    sup_convolved: float
    sup_source: float
    phi_l1: float

    @property
    def bound_ratio(self) -> float:
        den = self.phi_l1 * self.sup_source
        return self.sup_convolved / den if den > 0 else (0.0 if self.sup_convolved == 0 else math.inf)


def convolve(phi: GridFunction, f: GridFunction) -> GridFunction:
    """Discrete ``phi * f`` on the lattice of ``f`` (``phi`` read at the lattice offsets)."""
    if not np.allclose(phi.cell_size, f.cell_size, rtol=1e-12):
        raise ConfigError("phi and f must have the same cell size")
    h = f.cell_size
    reach = [int(math.ceil(phi.box.edge / hk)) for hk in h]
    offs = np.meshgrid(*[np.arange(-k, k + 1) * hk for k, hk in zip(reach, h)], indexing="ij")
    ker = np.asarray(phi(np.stack(offs, axis=-1)), dtype=float) * f.cell_volume
    out = signal.convolve(f.values, ker, mode="same", method="direct")
    return f.with_values(out, "multilinear")


def convolution_range_probe(phi: GridFunction, f: GridFunction, alpha: float, scales=None,
                            D=None) -> ConvolutionReport:
    """Small-cube curve of ``phi * f`` in ``L^1`` next to that of ``f`` on the same family."""
    g = convolve(phi, f)
    phi_l1 = integrate(phi.with_values(np.abs(phi.values)), phi.box)
    cur = small_cube_curve(g, alpha, Lp(1.0), scales, D)
    src = small_cube_curve(f, alpha, Lp(1.0), scales, D)
    return ConvolutionReport(cur, src, cur.peak, src.peak, phi_l1)
