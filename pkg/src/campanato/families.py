"""Sampled cube families: lattice-anchored cubes of dyadic edge length.

Every sup over "all cubes" in this package is taken over such a family, and
reports carry :meth:`CubeFamily.describe` so that the family is always named.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import AdmissibilityError, ConfigError
from .grid import Cube, GridFunction

# A cube must span at least this many cells per axis to be resolvable.
MIN_CELLS = 4


@dataclass(frozen=True)
class CubeFamily:
    """Cubes of edge ``cells * h`` whose corners sit on the lattice every ``stride`` cells."""

    domain: Cube
    h: float
    cells: int
    stride: int
    origin: tuple
    cubes: tuple

    @property
    def edge(self) -> float:
        return self.cells * self.h

    def __len__(self):
        return len(self.cubes)

    def __iter__(self):
        return iter(self.cubes)

    def describe(self) -> str:
        return (f"lattice cubes of edge {self.cells} cells ({self.edge:.6g}) with stride {self.stride} cells "
                f"inside {self.domain.describe()} ({len(self.cubes)} cubes)")


def default_stride(cells: int) -> int:
    return max(1, cells // 2)


def lattice_family(f: GridFunction, D: Cube, cells: int, stride: int | None = None) -> CubeFamily:
    """All cubes of edge ``cells`` lattice cells inside ``D`` with corners on the ``stride``-subgrid.

    The subgrid is anchored at the lower corner of ``f``'s box, so families of
    different resolutions cover the same physical cubes.
    """
    if cells < MIN_CELLS:
        raise ConfigError(f"cubes must span at least {MIN_CELLS} cells, got {cells}")
    stride = default_stride(cells) if stride is None else int(stride)
    if stride < 1:
        raise ConfigError("stride must be a positive number of cells")
    if len(set(np.round(f.cell_size, 15))) != 1:
        raise ConfigError("cube families need square cells")
    h = f.h
    step = stride * h
    origin = f.box.lower
    edge = cells * h
    tol = 1e-9 * h
    ranges = []
    for k in range(f.dim):
        j0 = math.ceil((D.lower[k] - origin[k] - tol) / step)
        j1 = math.floor((D.upper[k] - edge - origin[k] + tol) / step)
        ranges.append(range(j0, j1 + 1))
    cubes = []
    for js in itertools.product(*ranges):
        lo = [origin[k] + js[k] * step for k in range(f.dim)]
        cubes.append(Cube(tuple(x + edge / 2 for x in lo), edge))
    if not cubes:
        raise AdmissibilityError(f"empty cube family: edge {edge:.6g} does not fit in {D.describe()}")
    return CubeFamily(D, h, int(cells), stride, tuple(origin), tuple(cubes))


def dyadic_cells(f: GridFunction, D: Cube, smallest: int = MIN_CELLS) -> list:
    """Dyadic cell counts ``smallest, 2*smallest, ...`` whose cubes fit in ``D``."""
    out = []
    m = smallest
    while m * f.h <= D.edge * (1 + 1e-12):
        out.append(m)
        m *= 2
    if not out:
        raise AdmissibilityError("domain is smaller than the smallest resolvable cube")
    return out


def default_domain(f: GridFunction, margin_cells: int = MIN_CELLS) -> Cube:
    """The box of ``f`` shrunk by a margin of ``margin_cells`` cells."""
    return f.box.shrink(margin_cells * f.h)
