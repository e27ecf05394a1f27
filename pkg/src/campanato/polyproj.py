"""Minimal polynomials: degree <= s projections defined by moment conditions on a cube."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComputationError, ConfigError, UnderResolvedError
from .grid import Cube, GridFunction, Window, restrict

# Gram matrices with a larger condition number count as singular.
MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class Polynomial:
    """``sum_g coeffs[g] * (x - anchor.center)^g`` over multi-indices ``|g| <= degree_bound``.

    Only degrees 0 and 1 are supported, so the multi-indices are ``0`` and the
    unit vectors ``e_1, ..., e_n`` in that order.
    """

    degree_bound: int
    coeffs: np.ndarray
    anchor: Cube

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        if self.degree_bound not in (0, 1):
            raise ConfigError("degree_bound must be 0 or 1")
        if len(c) != n_monomials(self.anchor.dim, self.degree_bound):
            raise ConfigError("coefficient count does not match the number of multi-indices")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def constant(self) -> float:
        return float(self.coeffs[0])

    @property
    def gradient(self) -> np.ndarray:
        if self.degree_bound == 0:
            return np.zeros(self.anchor.dim)
        return np.asarray(self.coeffs[1:])

    def __call__(self, *coords):
        """Evaluate at coordinates given per axis (broadcasting)."""
        out = self.coeffs[0] + 0.0 * np.asarray(coords[0], dtype=float)
        if self.degree_bound == 1:
            for k, x in enumerate(coords):
                out = out + self.coeffs[1 + k] * (np.asarray(x, dtype=float) - self.anchor.center[k])
        return out

    def on_window(self, win: Window) -> np.ndarray:
        if win.dim == 1:
            return self(win.coords[0])
        X, Y = win.mesh()
        return self(X, Y)


def n_monomials(dim: int, s: int) -> int:
    return 1 if s == 0 else 1 + dim


def _scaled_basis(win: Window, s: int):
    """Basis ``((x - c) / edge)^g`` evaluated on the window cells."""
    c = win.cube.center
    ell = win.cube.edge
    if win.dim == 1:
        pts = [(win.coords[0] - c[0]) / ell]
    else:
        X, Y = win.mesh()
        pts = [(X - c[0]) / ell, (Y - c[1]) / ell]
    basis = [np.ones_like(pts[0])]
    if s == 1:
        basis.extend(pts)
    return basis


def project_window(win: Window, s: int, values=None) -> np.ndarray:
    """Coefficients (anchor basis) of the degree-``s`` minimal polynomial of ``values`` on ``win``."""
    if s not in (0, 1):
        raise ConfigError("only s in {0, 1} is supported")
    vals = win.values if values is None else values
    w = win.measure
    if s == 0:
        total = float(np.sum(w))
        if total <= 0:
            raise UnderResolvedError("cube under-resolved")
        return np.array([float(np.sum(w * vals)) / total])
    basis = _scaled_basis(win, s)
    G = np.array([[np.sum(w * a * b) for b in basis] for a in basis])
    rhs = np.array([np.sum(w * a * vals) for a in basis])
    if not np.all(np.isfinite(G)) or np.linalg.cond(G) > MAX_CONDITION:
        raise UnderResolvedError("cube under-resolved")
    sol = np.linalg.solve(G, rhs)
    sol[1:] /= win.cube.edge
    return sol


def minimal_polynomial(f: GridFunction, Q: Cube, s: int, tol: float = 1e-8) -> Polynomial:
    """The polynomial ``P`` of degree <= s with ``int_Q (f - P) x^g dx = 0`` for ``|g| <= s``.

    Moments are taken with the same cell quadrature as :func:`~campanato.grid.integrate`.
    """
    win = restrict(f, Q)
    P = Polynomial(s, project_window(win, s), Q)
    res = moment_residuals(f, Q, P, win=win)
    scale = float(np.sum(win.measure * np.abs(win.values)))
    if np.max(np.abs(res)) > tol * max(scale, Q.volume * np.finfo(float).eps):
        raise ComputationError(f"moment residual {np.max(np.abs(res)):.3e} above tolerance")
    return P


def moment_residuals(f: GridFunction, Q: Cube, P: Polynomial, win: Window | None = None) -> np.ndarray:
    """``int_Q (f - P)(x) x^g dx`` for every ``|g| <= P.degree_bound`` (raw monomials)."""
    win = win or restrict(f, Q)
    diff = win.values - P.on_window(win)
    w = win.measure
    out = [np.sum(w * diff)]
    if P.degree_bound == 1:
        if win.dim == 1:
            coords = [win.coords[0]]
        else:
            coords = list(win.mesh())
        out.extend(np.sum(w * diff * x) for x in coords)
    return np.array(out)


def projection_bound_ratio(f: GridFunction, Q: Cube, s: int) -> float:
    """``max |P_Q^s f| / avg_Q |f|`` over the lattice points in ``Q``."""
    win = restrict(f, Q)
    P = Polynomial(s, project_window(win, s), Q)
    mean_abs = float(np.sum(win.measure * np.abs(win.values))) / Q.volume
    pv = np.abs(P.on_window(win))
    peak = float(np.max(pv)) if pv.size else 0.0
    if mean_abs == 0.0:
        if peak > 0.0:
            raise ComputationError("nonzero projection of a function vanishing on the cube")
        return 0.0
    return peak / mean_abs
