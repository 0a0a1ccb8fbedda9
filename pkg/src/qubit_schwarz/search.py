"""Deterministic sphere grids and derivative-free refinement used by the oracles."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.special import ndtri

from ._config import SamplingPlan


@lru_cache(maxsize=32)
def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` near-uniform points on the unit 2-sphere (golden-angle spiral)."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    rho = np.sqrt(1.0 - z * z)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    pts = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    pts.setflags(write=False)
    return pts


def _generalized_golden(dim: int) -> float:
    # unique positive root of x^(dim+1) = x + 1
    x = 2.0
    for _ in range(64):
        x = (1.0 + x) ** (1.0 / (dim + 1))
    return x


@lru_cache(maxsize=32)
def kronecker_sphere(n: int, dim: int) -> np.ndarray:
    """``n`` low-discrepancy points on the unit sphere in ``R^dim``.

    An additive recurrence (generalised golden ratio) in the unit cube is
    pushed through the inverse normal CDF and normalised.
    """
    phi = _generalized_golden(dim)
    alpha = (1.0 / phi) ** np.arange(1, dim + 1)
    u = (0.5 + np.outer(np.arange(1, n + 1), alpha)) % 1.0
    g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    pts = g / np.linalg.norm(g, axis=1, keepdims=True)
    pts.setflags(write=False)
    return pts


def sphere_grid(n: int, dim: int) -> np.ndarray:
    if dim == 3:
        return fibonacci_sphere(n)
    return kronecker_sphere(n, dim)


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


# Structured directions appended to every grid: the Pauli matrices and the
# raising/lowering operators of each Pauli axis, where boundary cases live.
_TRACELESS_ANCHORS = np.array([
    _unit(v) for v in (
        [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
        # (s_i +/- i s_j)/2 for cyclic (i, j): coefficients (Re c | Im c)
        [0.5, 0, 0, 0, 0.5, 0], [0.5, 0, 0, 0, -0.5, 0],
        [0, 0.5, 0, 0, 0, 0.5], [0, 0.5, 0, 0, 0, -0.5],
        [0, 0, 0.5, 0.5, 0, 0], [0, 0, 0.5, -0.5, 0, 0],
    )
])
_TRACELESS_ANCHORS.setflags(write=False)


def _full_anchors():
    rows = []
    for k in range(4):  # matrix units
        v = np.zeros(8)
        v[k] = 1.0
        rows.append(v)
    # sigma_x, sigma_y, sigma_z and the identity, row-major (Re | Im)
    rows.append(_unit([0, 1, 1, 0, 0, 0, 0, 0]))
    rows.append(_unit([0, 0, 0, 0, 0, -1, 1, 0]))
    rows.append(_unit([1, 0, 0, -1, 0, 0, 0, 0]))
    rows.append(_unit([1, 0, 0, 1, 0, 0, 0, 0]))
    # raising/lowering along x and y: (s_y +/- i s_z)/2, (s_z +/- i s_x)/2
    for sign in (1, -1):
        # (s_y + i*sign*s_z)/2 = [[i sign, -i],[i, -i sign]]/2
        rows.append(_unit([0, 0, 0, 0, sign, -1, 1, -sign]))
        # (s_z + i*sign*s_x)/2 = [[1, i sign],[i sign, -1]]/2
        rows.append(_unit([1, 0, 0, -1, 0, sign, sign, 0]))
    return np.array(rows)


_FULL_ANCHORS = _full_anchors()
_FULL_ANCHORS.setflags(write=False)


@lru_cache(maxsize=32)
def oracle_grid(n: int, kind: str) -> np.ndarray:
    """Base grid plus structured anchors. ``kind`` is bloch, traceless or full."""
    if kind == "bloch":
        anchors = np.vstack([np.eye(3), -np.eye(3)])
        pts = np.vstack([sphere_grid(n, 3), anchors])
    elif kind == "traceless":
        pts = np.vstack([sphere_grid(n, 6), _TRACELESS_ANCHORS])
    elif kind == "full":
        pts = np.vstack([sphere_grid(n, 8), _FULL_ANCHORS])
    else:
        raise ValueError(f"unknown grid kind {kind!r}")
    pts.setflags(write=False)
    return pts


@dataclass(frozen=True)
class SearchResult:
    value: float
    point: np.ndarray
    grid_value: float
    evaluations: int


def minimize_on_sphere(objective, grid, values, plan: SamplingPlan) -> SearchResult:
    """Polish the best grid point(s) with a bounded Nelder-Mead descent.

    ``values`` are the objective values already evaluated on ``grid``.
    Ties on the grid resolve to the lowest index (``argmin``), so the result
    does not depend on evaluation order.
    """
    best_idx = int(np.argmin(values))
    best_val = float(values[best_idx])
    best_pt = np.array(grid[best_idx])
    grid_val = best_val
    evals = len(values)
    if plan.refine_iters == 0:
        return SearchResult(best_val, best_pt, grid_val, evals)

    starts = [best_pt]
    if plan.restarts:
        order = np.argsort(values, kind="stable")
        rng = np.random.default_rng(plan.seed)
        for k in range(plan.restarts):
            base = np.array(grid[order[min(k + 1, len(order) - 1)]])
            starts.append(_unit(base + 0.05 * rng.standard_normal(base.shape)))

    for start in starts:
        res = minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={
                "maxiter": plan.refine_iters,
                "xatol": 1e-11,
                "fatol": 1e-14,
                "initial_simplex": _simplex(start),
            },
        )
        evals += int(res.nfev)
        if res.fun < best_val:
            best_val = float(res.fun)
            best_pt = _unit(res.x)
    return SearchResult(best_val, best_pt, grid_val, evals)


def _simplex(start, step=0.05):
    n = len(start)
    pts = np.tile(start, (n + 1, 1))
    pts[1:] += step * np.eye(n)
    return pts


def minimize_on_circle(fn, n_grid=720):
    """Minimum of a pi-periodic function of an angle: dense grid + bounded polish."""
    thetas = np.linspace(0.0, np.pi, n_grid, endpoint=False)
    vals = np.array([fn(t) for t in thetas])
    k = int(np.argmin(vals))
    h = np.pi / n_grid
    res = minimize_scalar(fn, bounds=(thetas[k] - h, thetas[k] + h), method="bounded",
                          options={"xatol": 1e-12})
    if res.fun < vals[k]:
        return float(res.fun), float(res.x)
    return float(vals[k]), float(thetas[k])
