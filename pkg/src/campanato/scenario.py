"""Scenario files (JSON) and the text forms of spaces used on the command line.

A scenario is a JSON object with the keys below; every key except
``function`` is optional and unknown keys are rejected::

    {
      "function": {"name": "loglog", "params": {}}
                  | {"samples": [...], "box": [lo, hi]},
      "alpha": 0.0,
      "spaces": ["l1", "lp:2", {"kind": "morrey", "p": 3, "q": 2}],
      "grid": {"dim": 1, "half_width": 1.0, "samples": 4096},
      "curves": {"domain": [lo, hi], "small_scales": [...], "large_scales": [...],
                 "far_cube": {"center": [c], "edge": e}, "shifts": [...],
                 "direction": [1.0], "stride_div": 2},
      "thresholds": {"theta": 0.5, "floor_fraction": 0.02},
      "kernel": {"alpha_frac": 0.5, "diagonal_rule": "omit_cell", "truncation_radius": null},
      "seed": 0
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .commutator import KernelConfig
from .errors import ConfigError
from .grid import CATALOG_NAMES, Cube, GridFunction, GridSpec, catalog
from .spaces import Herz, Linf, Lorentz, Lp, MixedNorm, Morrey, SpaceSpec, VariableLp, WeightedLp
from .vanishing import CurveConfig, Thresholds

TOP_KEYS = {"function", "alpha", "spaces", "grid", "curves", "thresholds", "kernel", "seed"}
FUNCTION_KEYS = {"name", "params", "samples", "box"}
GRID_KEYS = {"dim", "half_width", "samples"}
CURVE_KEYS = {"domain", "small_scales", "large_scales", "far_cube", "shifts", "direction", "stride_div"}
THRESHOLD_KEYS = {"theta", "floor_fraction"}
KERNEL_KEYS = {"alpha_frac", "diagonal_rule", "truncation_radius"}
SPACE_KEYS = {
    "l1": set(), "l2": set(), "linf": set(), "lp": {"p"}, "wlp": {"p", "delta"},
    "vlp": {"p0", "p1"}, "mixed": {"p_vec"}, "morrey": {"p", "q"}, "lorentz": {"p", "q"},
    "herz": {"alpha", "p", "q", "homogeneous"},
}


def _reject_unknown(obj: dict, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"unknown key {extra[0]!r} in {where}")


def _float(x, name):
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number") from None
    if not math.isfinite(v):
        raise ConfigError(f"{name} must be finite")
    return v


def parse_space(spec, grid: GridSpec) -> SpaceSpec:
    """A space from its text form (``lp:2``, ``morrey:3:2``, ``mixed:3,1.5`` ...) or a dict with ``kind``."""
    if isinstance(spec, str):
        parts = spec.strip().lower().split(":")
        kind, args = parts[0], parts[1:]
        keys = {"lp": ["p"], "wlp": ["p", "delta"], "vlp": ["p0", "p1"], "mixed": ["p_vec"],
                "morrey": ["p", "q"], "lorentz": ["p", "q"], "herz": ["alpha", "p", "q", "homogeneous"]}
        if kind not in SPACE_KEYS:
            raise ConfigError(f"unknown space {spec!r}")
        names = keys.get(kind, [])
        if len(args) > len(names):
            raise ConfigError(f"too many parameters in space {spec!r}")
        d = {"kind": kind}
        for n, a in zip(names, args):
            d[n] = [float(t) for t in a.split(",")] if n == "p_vec" else a
        spec = d
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("a space must be a string or an object with a 'kind'")
    kind = str(spec["kind"]).lower()
    if kind not in SPACE_KEYS:
        raise ConfigError(f"unknown space kind {kind!r}")
    _reject_unknown(spec, SPACE_KEYS[kind] | {"kind"}, f"space {kind}")

    def g(key, default=None):
        val = spec.get(key, default)
        if val is None:
            raise ConfigError(f"space {kind} needs parameter {key!r}")
        return _float(val, f"{kind}.{key}")

    if kind == "l1":
        return Lp(1.0)
    if kind == "l2":
        return Lp(2.0)
    if kind == "linf":
        return Linf()
    if kind == "lp":
        return Lp(g("p"))
    if kind == "wlp":
        delta = g("delta", 0.5)
        w = catalog("power_weight", {"delta": delta}, grid)
        return WeightedLp(g("p"), w, f"|x|^{delta:g}")
    if kind == "vlp":
        p0 = g("p0")
        p1 = _float(spec.get("p1", p0), f"{kind}.p1")
        r = np.sqrt(sum(m ** 2 for m in GridFunction(grid.box, np.zeros((grid.n,) * grid.dim)).mesh()))
        vals = p0 + (p1 - p0) * np.clip(r / grid.half_width, 0, 1)
        return VariableLp(GridFunction(grid.box, vals), f"p0={p0:g},p1={p1:g}")
    if kind == "mixed":
        pv = spec.get("p_vec")
        if pv is None:
            raise ConfigError("space mixed needs parameter 'p_vec'")
        return MixedNorm(tuple(_float(p, "mixed.p_vec") for p in np.atleast_1d(pv)))
    if kind == "morrey":
        return Morrey(g("p"), g("q"))
    if kind == "lorentz":
        return Lorentz(g("p"), g("q"))
    hom = spec.get("homogeneous", True)
    if isinstance(hom, str):
        hom = hom not in ("0", "false", "inhom", "no")
    return Herz(g("alpha"), g("p"), g("q"), bool(hom))


@dataclass(frozen=True)
class Scenario:
    function: dict
    alpha: float = 0.0
    spaces: tuple = ("l1",)
    grid: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    kernel: dict = field(default_factory=dict)
    seed: int = 0

    def grid_spec(self, resolution: int | None = None) -> GridSpec:
        g = dict(self.grid)
        if resolution is not None:
            g["samples"] = resolution
        return GridSpec(int(g.get("dim", 1)), float(g.get("half_width", 1.0)), g.get("samples"))

    def build_function(self, grid: GridSpec) -> GridFunction:
        fn = self.function
        if "name" in fn:
            return catalog(fn["name"], fn.get("params") or {}, grid)
        vals = np.asarray(fn["samples"], dtype=float)
        return GridFunction(_cube_from_bounds(fn["box"], vals.ndim), vals)

    def build_spaces(self, grid: GridSpec) -> list:
        return [parse_space(s, grid) for s in self.spaces]

    def curve_config(self, dim: int) -> CurveConfig:
        c = self.curves
        dom = c.get("domain")
        domain = _cube_from_bounds(dom, dim) if dom is not None else None
        far = c.get("far_cube")
        far_cube = Cube(tuple(far["center"]), far["edge"]) if far is not None else None
        return CurveConfig(
            domain=domain,
            small_scales=tuple(c["small_scales"]) if c.get("small_scales") else None,
            large_scales=tuple(c["large_scales"]) if c.get("large_scales") else None,
            far_cube=far_cube,
            shifts=tuple(c["shifts"]) if c.get("shifts") else None,
            direction=tuple(c["direction"]) if c.get("direction") else None,
            stride_div=int(c.get("stride_div", 2)),
        )

    def threshold_config(self) -> Thresholds:
        return Thresholds(**self.thresholds)

    def kernel_config(self) -> KernelConfig:
        k = dict(self.kernel)
        if k.get("truncation_radius") is None:
            k.pop("truncation_radius", None)
        k.setdefault("alpha_frac", 0.5)
        return KernelConfig(**k)

    def echo(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _cube_from_bounds(b, dim):
    b = [float(v) for v in b]
    if len(b) != 2 * dim:
        raise ConfigError(f"domain needs {2 * dim} numbers (lo, hi per axis)")
    return Cube.from_bounds(b[0::2], b[1::2])


def scenario_from_dict(d: dict) -> Scenario:
    _reject_unknown(d, TOP_KEYS, "scenario")
    if "function" not in d:
        raise ConfigError("scenario needs a 'function'")
    fn = d["function"]
    _reject_unknown(fn, FUNCTION_KEYS, "function")
    if "name" in fn:
        if fn["name"] not in CATALOG_NAMES:
            raise ConfigError(f"unknown catalog function {fn['name']!r}")
        if "samples" in fn or "box" in fn:
            raise ConfigError("function takes either a catalog name or an inline sample table")
    elif not ("samples" in fn and "box" in fn):
        raise ConfigError("inline function needs 'samples' and 'box'")
    alpha = _float(d.get("alpha", 0.0), "alpha")
    if not 0 <= alpha <= 1:
        raise ConfigError("alpha must lie in [0, 1]")
    grid = d.get("grid", {})
    _reject_unknown(grid, GRID_KEYS, "grid")
    curves = d.get("curves", {})
    _reject_unknown(curves, CURVE_KEYS, "curves")
    th = d.get("thresholds", {})
    _reject_unknown(th, THRESHOLD_KEYS, "thresholds")
    ker = d.get("kernel", {})
    _reject_unknown(ker, KERNEL_KEYS, "kernel")
    seed = d.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ConfigError("seed must be an integer")
    spaces = d.get("spaces", ["l1"])
    if isinstance(spaces, (str, dict)):
        spaces = [spaces]
    sc = Scenario(dict(fn), alpha, tuple(spaces), dict(grid), dict(curves), dict(th), dict(ker), seed)
    # validate eagerly so errors surface at load time
    gs = sc.grid_spec()
    sc.build_spaces(gs)
    sc.threshold_config()
    sc.curve_config(gs.dim)
    if ker:
        sc.kernel_config()
    return sc


def read_scenario_dict(path) -> dict:
    """Parsed but not yet validated scenario file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario {path} is not valid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise ConfigError(f"scenario {path} must hold a JSON object")
    return d


def load_scenario(path) -> Scenario:
    return scenario_from_dict(read_scenario_dict(path))
