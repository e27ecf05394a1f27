"""Decay curves of sampled oscillation sups and the small/far/large vanishing classifier."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .errors import ComputationError, ConfigError
from .families import MIN_CELLS, CubeFamily, default_domain, dyadic_cells, lattice_family
from .grid import Cube, GridFunction, restrict
from .oscillation import _quotient, degree, osc_many
from .spaces import Linf, Lp, MixedNorm, SpaceSpec, WeightedLp, _sample_on

AXES = ("small_scale", "shift_distance", "large_scale")
CHUNK = 256


@dataclass(frozen=True)
class DecayCurve:
    axis: str
    points: tuple
    family_descriptor: str

    def __post_init__(self):
        if self.axis not in AXES:
            raise ConfigError(f"axis must be one of {AXES}")
        pts = tuple((float(p), float(v)) for p, v in self.points)
        if not pts:
            raise ConfigError("a decay curve needs at least one point")
        params = np.array([p for p, _ in pts])
        d = np.diff(params)
        if len(d) and not (np.all(d > 0) or np.all(d < 0)):
            raise ConfigError("curve parameters must be strictly monotone")
        vals = np.array([v for _, v in pts])
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ComputationError("curve values must be finite and nonnegative")
        object.__setattr__(self, "points", pts)

    @property
    def parameters(self) -> np.ndarray:
        return np.array([p for p, _ in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points])

    @property
    def first(self) -> float:
        return self.points[0][1]

    @property
    def last(self) -> float:
        return self.points[-1][1]

    @property
    def peak(self) -> float:
        return float(self.values.max())


@dataclass(frozen=True)
class CurveConfig:
    """Sampled families behind the three curves.

    ``small_scales`` (descending) and ``large_scales`` (ascending) are cube edge
    lengths; ``None`` means every dyadic edge from four cells up to the domain.
    ``stride_div`` sets the anchor stride to ``edge_cells // stride_div``.
    Far cubes move along ``direction``.
    """

    domain: Cube | None = None
    small_scales: tuple | None = None
    large_scales: tuple | None = None
    far_cube: Cube | None = None
    shifts: tuple | None = None
    direction: tuple | None = None
    stride_div: int = 2


@dataclass(frozen=True)
class Thresholds:
    """A curve vanishes when its last point is at most ``theta * max(curve)``
    or at most ``floor_fraction * global_sup``."""

    theta: float = 0.5
    floor_fraction: float = 0.02

    def __post_init__(self):
        if not 0 < self.theta < 1:
            raise ConfigError("theta must lie in (0, 1)")
        if not 0 <= self.floor_fraction < 1:
            raise ConfigError("floor_fraction must lie in [0, 1)")


@dataclass(frozen=True)
class VanishingReport:
    alpha: float
    space: str
    flags: dict
    small: DecayCurve
    far: DecayCurve
    large: DecayCurve
    global_sup: float
    thresholds: Thresholds
    nesting_consistent: bool
    smallest_scale: float

    @property
    def flag_vector(self) -> tuple:
        return tuple(self.flags[k] for k in ("bounded", "small_vanish", "far_vanish", "large_vanish"))

    def summary(self) -> str:
        f = ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in self.flags.items())
        return (f"{self.space}: {f}; consistent with these flags at theta={self.thresholds.theta:g}, "
                f"floor={self.thresholds.floor_fraction:g}*sup")


# ---------------------------------------------------------------------------
# per-scale sups

def _aligned_starts(f, family):
    """Lattice index of each cube's lower corner, or ``None`` if some cube leaves the box."""
    lo = f.box.lower
    starts = []
    for Q in family.cubes:
        idx = np.rint((Q.lower - lo) / f.h).astype(int)
        if np.any(idx < 0) or np.any(idx + family.cells > np.array(f.values.shape)):
            return None
        starts.append(idx)
    return np.array(starts)


def family_values(f: GridFunction, family, alpha: float, spaces) -> np.ndarray:
    """``osc_many`` for every cube of a lattice family, as an array ``[cube, space]``.

    Families fully inside the box take a batched path (all projections at once,
    closed-form norms for L^p, weighted L^p and mixed norms); otherwise each cube
    goes through :func:`~campanato.oscillation.osc_many`.
    """
    starts = _aligned_starts(f, family)
    if starts is None:
        return np.array([osc_many(f, Q, alpha, spaces) for Q in family.cubes])
    m, dim, h = family.cells, f.dim, f.h
    s = degree(alpha)
    span = np.arange(m)
    if dim == 1:
        W = f.values[starts[:, 0:1] + span[None, :]]
    else:
        W = f.values[(starts[:, 0][:, None, None] + span[None, :, None]),
                     (starts[:, 1][:, None, None] + span[None, None, :])]
    axes = tuple(range(1, dim + 1))
    P = W.mean(axis=axes, keepdims=True)
    if s == 1:
        u = (span - (m - 1) / 2) * h
        for k in range(dim):
            shape = [1] * (dim + 1)
            shape[k + 1] = m
            uk = u.reshape(shape)
            P = P + (np.sum(W * uk, axis=axes, keepdims=True) / (np.sum(u ** 2) * m ** (dim - 1))) * uk
    R = W - P
    A = np.abs(R)
    scale = (m * h) ** (-alpha)
    cols = []
    for X in spaces:
        if X is None or (isinstance(X, Lp) and X.p == 1):
            cols.append(scale * A.mean(axis=axes))
        elif isinstance(X, Lp):
            cols.append(scale * np.mean(A ** X.p, axis=axes) ** (1 / X.p))
        elif isinstance(X, Linf):
            cols.append(scale * A.max(axis=axes))
        elif isinstance(X, MixedNorm) and len(X.p_vec) == dim:
            inner = np.mean(A ** X.p_vec[0], axis=1) ** (1 / X.p_vec[0])
            if dim == 2:
                inner = np.mean(inner ** X.p_vec[1], axis=1) ** (1 / X.p_vec[1])
            cols.append(scale * inner)
        elif isinstance(X, WeightedLp):
            wv = _sample_on(X.weight, restrict(f, f.box))
            if dim == 1:
                Wt = wv[starts[:, 0:1] + span[None, :]]
            else:
                Wt = wv[(starts[:, 0][:, None, None] + span[None, :, None]),
                        (starts[:, 1][:, None, None] + span[None, None, :])]
            if np.any(Wt <= 0):
                raise ComputationError("nonpositive weight sample inside the support")
            num = np.sum(Wt * A ** X.p, axis=axes)
            den = np.sum(Wt, axis=axes)
            cols.append(scale * (num / den) ** (1 / X.p))
        else:
            vals = []
            for Q, r in zip(family.cubes, R):
                win = restrict(f, Q)
                vals.append(_quotient(win, r, X, alpha))
            cols.append(np.array(vals))
    return np.stack(cols, axis=1)


def _family_sup(f, family, alpha, spaces):
    cubes = list(family.cubes)
    chunks = [cubes[i:i + CHUNK] for i in range(0, len(cubes), CHUNK)]

    def work(chunk):
        sub = CubeFamily(family.domain, family.h, family.cells, family.stride, family.origin, tuple(chunk))
        return np.max(family_values(f, sub, alpha, spaces), axis=0)

    return np.max(np.array(pmap(work, chunks)), axis=0)


def scale_profile(f: GridFunction, alpha: float, spaces, D: Cube, cells_list, stride_div: int = 2):
    """Array ``[len(cells_list), len(spaces)]`` of family sups, plus the family descriptors."""
    rows, desc = [], []
    for m in cells_list:
        fam = lattice_family(f, D, m, max(1, m // stride_div))
        rows.append(_family_sup(f, fam, alpha, spaces))
        desc.append(fam.describe())
    return np.array(rows), desc


def _edge_cells(f: GridFunction, D: Cube):
    return dyadic_cells(f, D)


def _check_scales(f, D, scales, name):
    lo = MIN_CELLS * f.h
    for a in scales:
        if a < lo * (1 - 1e-9) or a > D.edge * (1 + 1e-9):
            raise ConfigError(f"{name} scale {a:.6g} outside [{lo:.6g}, {D.edge:.6g}] (four cells to the domain edge)")


def _domain(f, cfg):
    return cfg.domain if cfg.domain is not None else default_domain(f)


def _profile_for(f, alpha, spaces, cfg):
    D = _domain(f, cfg)
    cells = _edge_cells(f, D)
    prof, desc = scale_profile(f, alpha, spaces, D, cells, cfg.stride_div)
    return D, np.array(cells) * f.h, prof, desc


def _small_from_profile(edges, prof, j, scales, desc):
    pts = []
    for a in scales:
        m = edges <= a * (1 + 1e-9)
        pts.append((a, float(prof[m, j].max())))
    return DecayCurve("small_scale", pts, "sup over edges <= a of: " + "; ".join(desc))


def _large_from_profile(edges, prof, j, scales, desc):
    pts = []
    for a in scales:
        m = edges >= a * (1 - 1e-9)
        if not np.any(m):
            raise ConfigError(f"no sampled cube with edge >= {a:.6g}")
        pts.append((a, float(prof[m, j].max())))
    return DecayCurve("large_scale", pts, "sup over edges >= a of: " + "; ".join(desc))


def small_cube_curve(f: GridFunction, alpha: float, X: SpaceSpec, scales=None, D: Cube | None = None,
                     stride_div: int = 2) -> DecayCurve:
    """``a -> sup { osc_X(f, Q) : Q in the family, Q in D, edge(Q) <= a }`` for descending ``a``."""
    cfg = CurveConfig(domain=D, stride_div=stride_div)
    D, edges, prof, desc = _profile_for(f, alpha, [X], cfg)
    scales = tuple(sorted(edges, reverse=True)) if scales is None else tuple(scales)
    _check_scales(f, D, scales, "small")
    return _small_from_profile(edges, prof, 0, scales, desc)


def large_cube_curve(f: GridFunction, alpha: float, X: SpaceSpec, scales=None, D: Cube | None = None,
                     stride_div: int = 2) -> DecayCurve:
    """``a -> sup { osc_X(f, Q) : Q in the family, Q in D, edge(Q) >= a }`` for ascending ``a``."""
    cfg = CurveConfig(domain=D, stride_div=stride_div)
    D, edges, prof, desc = _profile_for(f, alpha, [X], cfg)
    scales = tuple(sorted(edges)) if scales is None else tuple(scales)
    _check_scales(f, D, scales, "large")
    return _large_from_profile(edges, prof, 0, scales, desc)


def default_far(f: GridFunction, D: Cube):
    """Cube of an eighth of the domain edge at the domain centre and dyadic shifts that keep it inside."""
    edge = D.edge / 8
    m = max(MIN_CELLS, int(round(edge / f.h)))
    Q = Cube(D.center, m * f.h)
    room = (D.edge - Q.edge) / 2
    shifts = [room]
    while shifts[-1] / 2 >= Q.edge / 4:
        shifts.append(shifts[-1] / 2)
    return Q, tuple(sorted(shifts))


def _far_points(f, alpha, spaces, Q, shifts, direction):
    direction = np.asarray(direction if direction is not None else (1.0,) + (0.0,) * (f.dim - 1), dtype=float)
    if direction.shape != (f.dim,) or not np.linalg.norm(direction) > 0:
        raise ConfigError("direction must be a nonzero vector of the function's dimension")
    direction = direction / np.linalg.norm(direction)
    cubes = []
    for z in shifts:
        Qz = Q.translate(z * direction)
        if not f.box.contains(Qz):
            raise ConfigError(f"shifted cube {Qz.describe()} leaves the box {f.box.describe()}")
        cubes.append(Qz)
    vals = pmap(lambda C: osc_many(f, C, alpha, spaces), cubes)
    desc = f"translates of {Q.describe()} along {tuple(round(float(v), 6) for v in direction)}"
    return np.array(vals), desc


def far_cube_curve(f: GridFunction, alpha: float, X: SpaceSpec, Q: Cube, shifts, direction=None) -> DecayCurve:
    """``z -> osc_X(f, Q + z e)`` along a ray (first axis by default)."""
    vals, desc = _far_points(f, alpha, [X], Q, shifts, direction)
    return DecayCurve("shift_distance", list(zip(shifts, vals[:, 0])), desc)


# ---------------------------------------------------------------------------
# classification

def _vanishes(curve: DecayCurve, th: Thresholds, global_sup: float) -> bool:
    last = curve.last
    return last <= th.theta * curve.peak or last <= th.floor_fraction * global_sup


def _reports(f, alpha, spaces, cfg: CurveConfig, th: Thresholds):
    D, edges, prof, desc = _profile_for(f, alpha, spaces, cfg)
    small_scales = tuple(sorted(edges, reverse=True)) if cfg.small_scales is None else tuple(cfg.small_scales)
    large_scales = tuple(sorted(edges)) if cfg.large_scales is None else tuple(cfg.large_scales)
    _check_scales(f, D, small_scales, "small")
    _check_scales(f, D, large_scales, "large")
    if cfg.far_cube is None:
        Q, shifts = default_far(f, D)
    else:
        Q = cfg.far_cube
        shifts = cfg.shifts if cfg.shifts is not None else default_far(f, D)[1]
    far_vals, far_desc = _far_points(f, alpha, spaces, Q, tuple(shifts), cfg.direction)
    out = []
    for j, X in enumerate(spaces):
        small = _small_from_profile(edges, prof, j, small_scales, desc)
        large = _large_from_profile(edges, prof, j, large_scales, desc)
        far = DecayCurve("shift_distance", list(zip(shifts, far_vals[:, j])), far_desc)
        gsup = float(max(prof[:, j].max(), far.peak))
        flags = {
            "bounded": bool(math.isfinite(gsup)),
            "small_vanish": _vanishes(small, th, gsup),
            "far_vanish": _vanishes(far, th, gsup),
            "large_vanish": _vanishes(large, th, gsup),
        }
        nest = (not flags["large_vanish"]) or (flags["far_vanish"] and flags["small_vanish"])
        name = "osc" if X is None else X.describe()
        out.append(VanishingReport(alpha, name, flags, small, far, large, gsup, th, nest, MIN_CELLS * f.h))
    return out


def classify(f: GridFunction, alpha: float, X: SpaceSpec, config: CurveConfig | None = None,
             thresholds: Thresholds | None = None) -> VanishingReport:
    """Flags consistent with the sampled curves; never a membership proof."""
    return _reports(f, alpha, [X], config or CurveConfig(), thresholds or Thresholds())[0]


@dataclass(frozen=True)
class Comparison:
    reports: tuple
    ratio_max: dict
    ratio_min: dict
    agreement: np.ndarray = field(repr=False)

    @property
    def all_agree(self) -> bool:
        return bool(np.all(self.agreement))

    @property
    def constants(self) -> dict:
        """Per-space ``C`` with ``curve_X / curve_L1`` in ``[1/C, C]`` over the small-scale curve."""
        out = {}
        for k in self.ratio_max:
            hi, lo = self.ratio_max[k], self.ratio_min[k]
            out[k] = max(hi, 1 / lo if lo > 0 else math.inf)
        return out


def _ratio(a: np.ndarray, b: np.ndarray):
    m = b > 0
    if not np.any(m):
        return 1.0, 1.0
    r = a[m] / b[m]
    return float(r.max()), float(r.min())


def cross_space_compare(f: GridFunction, alpha: float, spaces, config: CurveConfig | None = None,
                        thresholds: Thresholds | None = None) -> Comparison:
    """Curves and flags for each space on identical families, with ratios against ``L^1``."""
    spaces = list(spaces)
    if len(spaces) < 2:
        raise ConfigError("cross_space_compare needs at least two spaces")
    reps = _reports(f, alpha, [Lp(1.0)] + spaces, config or CurveConfig(), thresholds or Thresholds())
    base, reps = reps[0], reps[1:]
    rmax, rmin = {}, {}
    for X, rep in zip(spaces, reps):
        a = np.concatenate([rep.small.values, rep.large.values])
        b = np.concatenate([base.small.values, base.large.values])
        rmax[X.describe()], rmin[X.describe()] = _ratio(a, b)
    vecs = [r.flag_vector for r in reps]
    agree = np.array([[u == v for v in vecs] for u in vecs])
    return Comparison(tuple(reps), rmax, rmin, agree)
