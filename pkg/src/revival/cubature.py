"""Adaptive tensor-product Gauss-Legendre cubature on rectangles.

Each cell is integrated with an ``n x n`` and a ``2n x 2n`` Gauss-Legendre
rule; their difference is the cell's error estimate and the finer value is
kept. Cells carrying the largest errors are quartered until the summed
estimate falls below the tolerance, which concentrates work on cells that
straddle kinks such as the zero set of a clipped integrand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Tuple

import numpy as np

from .errors import QuadratureNonConvergence

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class CubatureResult:
    value: float
    error: float
    cells: int
    evaluations: int


@lru_cache(maxsize=8)
def _rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _apply(f: Integrand, cells: np.ndarray, order: int) -> np.ndarray:
    """Integrate ``f`` over each row ``(x0, x1, y0, y1)`` of ``cells``."""
    x, w = _rule(order)
    x0, x1, y0, y1 = cells.T
    hx, hy = 0.5 * (x1 - x0), 0.5 * (y1 - y0)
    cx, cy = 0.5 * (x1 + x0), 0.5 * (y1 + y0)
    xs = cx[:, None, None] + hx[:, None, None] * x[None, :, None]
    ys = cy[:, None, None] + hy[:, None, None] * x[None, None, :]
    vals = f(np.broadcast_to(xs, (len(cells), order, order)), np.broadcast_to(ys, (len(cells), order, order)))
    return np.einsum("kij,i,j->k", vals, w, w) * hx * hy


def _evaluate(f, cells, order):
    coarse = _apply(f, cells, order)
    fine = _apply(f, cells, 2 * order)
    return fine, np.abs(fine - coarse)


def _quarter(cells: np.ndarray) -> np.ndarray:
    x0, x1, y0, y1 = cells.T
    xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    return np.concatenate([
        np.stack([x0, xm, y0, ym], axis=1),
        np.stack([xm, x1, y0, ym], axis=1),
        np.stack([x0, xm, ym, y1], axis=1),
        np.stack([xm, x1, ym, y1], axis=1),
    ])


def initial_cells(x_edges: Sequence[float], y_edges: Sequence[float]) -> np.ndarray:
    xe, ye = np.asarray(x_edges, dtype=float), np.asarray(y_edges, dtype=float)
    gx0, gy0 = np.meshgrid(xe[:-1], ye[:-1], indexing="ij")
    gx1, gy1 = np.meshgrid(xe[1:], ye[1:], indexing="ij")
    return np.stack([gx0.ravel(), gx1.ravel(), gy0.ravel(), gy1.ravel()], axis=1)


def uniform_edges(lo: float, hi: float, pieces: int) -> np.ndarray:
    return np.linspace(lo, hi, pieces + 1)


def integrate(
    f: Integrand,
    cells: np.ndarray,
    tol: float,
    order: int = 6,
    max_cells: int = 400_000,
) -> CubatureResult:
    """Integrate vectorized ``f(x, y)`` over the union of ``cells``.

    Args:
        f: integrand accepting broadcast arrays of x and y.
        cells: array of rows ``(x0, x1, y0, y1)``; must not overlap.
        tol: target for the summed absolute error estimate.
        order: points per axis of the coarse rule (the fine rule uses twice that).
        max_cells: refinement budget.

    Raises:
        QuadratureNonConvergence: the budget ran out before reaching ``tol``.
    """
    cells = np.asarray(cells, dtype=float).reshape(-1, 4)
    if len(cells) == 0:
        return CubatureResult(0.0, 0.0, 0, 0)
    vals, errs = _evaluate(f, cells, order)
    done_val = 0.0
    done_err = 0.0
    evaluations = len(cells) * (order**2 + (2 * order) ** 2)
    total_cells = len(cells)
    while True:
        total_err = done_err + errs.sum()
        if total_err <= tol:
            return CubatureResult(float(done_val + vals.sum()), float(total_err), total_cells, evaluations)
        # refine the worst cells until what stays behind fits in half the budget
        ranked = np.argsort(errs)[::-1]
        remaining = total_err - np.cumsum(errs[ranked])
        n_split = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        n_split = min(max(n_split, 1), len(ranked))
        split, keep = ranked[:n_split], ranked[n_split:]
        done_val += vals[keep].sum()
        done_err += errs[keep].sum()
        children = _quarter(cells[split])
        total_cells += len(children) - n_split
        if total_cells > max_cells:
            raise QuadratureNonConvergence(
                f"error estimate {total_err:.3e} above tolerance {tol:.3e} after {total_cells} cells"
            )
        cells = children
        vals, errs = _evaluate(f, cells, order)
        evaluations += len(cells) * (order**2 + (2 * order) ** 2)
