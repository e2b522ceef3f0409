"""Self-contained numerical kernels.

Four small tools used throughout the package, written against plain numpy
so there is no solver or quadrature dependency:

* quad2d              adaptive 2-D quadrature on a rectangle using a nested
                      tensor Gauss(7)/Kronrod(15) pair per cell,
* appell_f2_restricted  the double integral behind the closed-form box
                      energy, reduced to a smooth integrand by substitution,
* minimize_1d         coarse scan plus golden-section refinement,
* lp_solve            dense simplex in exact rational arithmetic for
                      difference-constrained linear programs.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AccuracyError, DomainError, InfeasibleError, UnboundedError

__all__ = [
    "QuadratureResult",
    "MinimizeResult",
    "quad2d",
    "appell_f2_restricted",
    "minimize_1d",
    "lp_solve",
]


@dataclass(frozen=True)
class QuadratureResult:
    """An integral estimate with an error estimate and evaluation count."""

    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class MinimizeResult:
    """Outcome of a 1-D minimization over a closed interval."""

    argmin: float
    min_value: float
    at_boundary: bool
    bracket: Tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "argmin": self.argmin,
            "min_value": self.min_value,
            "at_boundary": self.at_boundary,
            "bracket": list(self.bracket),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MinimizeResult":
        return cls(
            argmin=float(data["argmin"]),
            min_value=float(data["min_value"]),
            at_boundary=bool(data["at_boundary"]),
            bracket=(float(data["bracket"][0]), float(data["bracket"][1])),
        )


# ======================================================================
# Nested Gauss-Kronrod 7/15 pair (standard abscissae on [-1, 1])
# ======================================================================

# 15 Kronrod nodes in ascending order; the odd-index entries (1, 3, ..., 13)
# are the embedded 7 Gauss nodes.
_XK = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
_GAUSS_IDX = np.arange(1, 15, 2)
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
])

# Tensor weight grids, built once.
_WKK = np.outer(_WK, _WK)
_WGG = np.outer(_WG, _WG)


def _rate_cells(f, cells: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Apply the nested tensor rule to a batch of cells.

    ``cells`` has shape (m, 4) with rows (x0, x1, y0, y1).  Returns the
    Kronrod values, the |K15 - G7| error estimates, the preferred split axis
    per cell (0 for x, 1 for y), and the evaluation count.  All integrand
    calls receive flat coordinate arrays.

    The split axis follows the larger total variation of the sampled values
    (ridge features aligned with one axis are then bisected across the
    ridge, not along it); near-ties fall back to the longer side.
    """
    m = cells.shape[0]
    cx = 0.5 * (cells[:, 0] + cells[:, 1])
    hx = 0.5 * (cells[:, 1] - cells[:, 0])
    cy = 0.5 * (cells[:, 2] + cells[:, 3])
    hy = 0.5 * (cells[:, 3] - cells[:, 2])

    # Points: shape (m, 15, 15), x varying along axis 1, y along axis 2.
    xs = cx[:, None] + hx[:, None] * _XK[None, :]
    ys = cy[:, None] + hy[:, None] * _XK[None, :]
    X = np.broadcast_to(xs[:, :, None], (m, 15, 15))
    Y = np.broadcast_to(ys[:, None, :], (m, 15, 15))
    vals = np.asarray(f(X.reshape(-1), Y.reshape(-1)), dtype=float).reshape(m, 15, 15)

    jac = hx * hy
    kron = jac * np.einsum("mij,ij->m", vals, _WKK)
    sub = vals[:, _GAUSS_IDX][:, :, _GAUSS_IDX]
    gauss = jac * np.einsum("mij,ij->m", sub, _WGG)

    tvx = np.abs(np.diff(vals, axis=1)).sum(axis=(1, 2))
    tvy = np.abs(np.diff(vals, axis=2)).sum(axis=(1, 2))
    longer = (hy > hx).astype(int)
    axis = np.where(tvx > 1.5 * tvy, 0, np.where(tvy > 1.5 * tvx, 1, longer))
    return kron, np.abs(kron - gauss), axis, m * 225


def _segment(lo: float, hi: float, cuts: Optional[Sequence[float]]) -> List[float]:
    """Breakpoints lo..hi with interior cuts deduplicated and clipped."""
    eps = 1e-12 * (hi - lo)
    inner = sorted({float(v) for v in (cuts or ()) if lo + eps < float(v) < hi - eps})
    out = [lo]
    for c in inner:
        if c - out[-1] > eps:
            out.append(c)
    out.append(hi)
    return out


def quad2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    domain: Tuple[float, float, float, float],
    tol: float = 1e-9,
    max_evals: int = 1_000_000,
    initial_splits: Optional[Tuple[Sequence[float], Sequence[float]]] = None,
) -> QuadratureResult:
    """Adaptively integrate ``f`` over the rectangle (x0, x1) x (y0, y1).

    Each cell is rated by a tensor Kronrod-15 rule against its embedded
    Gauss-7 rule; the cell with the largest error estimate is bisected
    (across the dominant variation of its sampled values) until the summed
    error estimate drops below ``tol`` (absolute).  Refinement order and the
    final summation order are deterministic for fixed inputs.

    ``initial_splits`` places cell boundaries at known feature locations
    (two sequences of x and y cuts).  A narrow integrand bump lying between
    the nodes of a large cell is invisible to the error estimate; a cut
    through the bump puts clustered near-edge nodes right on top of it.

    Raises AccuracyError (carrying the best estimate) if more than
    ``max_evals`` integrand evaluations would be needed.
    """
    x0, x1, y0, y1 = map(float, domain)
    if not (x1 > x0 and y1 > y0):
        raise DomainError(f"empty integration domain {domain!r}")
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")

    sx, sy = (None, None) if initial_splits is None else initial_splits
    xs = _segment(x0, x1, sx)
    ys = _segment(y0, y1, sy)
    root = np.array(
        [
            [xs[i], xs[i + 1], ys[j], ys[j + 1]]
            for i in range(len(xs) - 1)
            for j in range(len(ys) - 1)
        ]
    )
    vals, errs, axes, evals = _rate_cells(f, root)

    # Heap of (-error, insertion order, cell bounds, split axis).
    heap: List[Tuple[float, int, Tuple[float, float, float, float], int]] = [
        (-float(errs[k]), k, tuple(root[k]), int(axes[k]))
        for k in range(root.shape[0])
    ]
    heapq.heapify(heap)
    values = {k: float(vals[k]) for k in range(root.shape[0])}
    counter = root.shape[0] - 1
    total_err = float(errs.sum())
    since_resync = 0

    while total_err > tol:
        if evals + 450 > max_evals:
            value = math.fsum(values.values())
            error = math.fsum(-neg for neg, _, _, _ in heap)
            raise AccuracyError(
                f"quadrature budget of {max_evals} evaluations exhausted "
                f"(error estimate {error:.3e} > tol {tol:.3e})",
                float(value),
                float(error),
                evals,
            )
        neg_err, order, cell, axis = heapq.heappop(heap)
        cx0, cx1, cy0, cy1 = cell
        if axis == 0:
            mid = 0.5 * (cx0 + cx1)
            children = np.array([[cx0, mid, cy0, cy1], [mid, cx1, cy0, cy1]])
        else:
            mid = 0.5 * (cy0 + cy1)
            children = np.array([[cx0, cx1, cy0, mid], [cx0, cx1, mid, cy1]])
        cvals, cerrs, caxes, used = _rate_cells(f, children)
        evals += used

        del values[order]
        total_err += float(cerrs.sum()) - (-neg_err)
        for k in range(2):
            counter += 1
            values[counter] = float(cvals[k])
            heapq.heappush(
                heap, (-float(cerrs[k]), counter, tuple(children[k]), int(caxes[k]))
            )

        # Incremental error tracking drifts; resync periodically so the
        # stopping test stays honest at tight tolerances.
        since_resync += 1
        if since_resync >= 512:
            total_err = math.fsum(-neg for neg, _, _, _ in heap)
            since_resync = 0

    # Deterministic final sums in cell insertion order.
    order_sorted = sorted(values)
    value = math.fsum(values[k] for k in order_sorted)
    errors = {order: -neg for neg, order, _, _ in heap}
    error = math.fsum(errors[k] for k in order_sorted)
    return QuadratureResult(float(value), float(error), evals)


# ======================================================================
# Restricted Appell double integral
# ======================================================================

def appell_f2_restricted(p: float, q: float, tol: float = 1e-10) -> float:
    """F2(1, 1/2, 1/2; 3/2, 3/2; -p, -q) for p, q >= 0.

    Equals (1/4) * int_0^1 int_0^1 u^(-1/2) v^(-1/2) / (1 + p u + q v) du dv.
    The substitution u = a^2, v = b^2 removes the endpoint singularities
    exactly, leaving int_0^1 int_0^1 da db / (1 + p a^2 + q b^2), which is
    evaluated with quad2d.  F2(0, 0) = 1.
    """
    p = float(p)
    q = float(q)
    if p < 0 or q < 0:
        raise DomainError(f"arguments must be nonnegative, got p={p!r}, q={q!r}")

    def integrand(a, b):
        return 1.0 / (1.0 + p * a * a + q * b * b)

    return quad2d(integrand, (0.0, 1.0, 0.0, 1.0), tol=tol).value


# ======================================================================
# 1-D minimization
# ======================================================================

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...


def minimize_1d(
    f: Callable[[float], float],
    interval: Tuple[float, float],
    tol: float = 1e-8,
    coarse: int = 101,
) -> MinimizeResult:
    """Minimize a scalar function on [a, b].

    A uniform scan of ``coarse`` samples (endpoints included) locates the
    best bracket, which golden-section search then shrinks below ``tol``.
    The returned value is never worse than the best coarse sample, and the
    endpoints always compete: ``at_boundary`` is set when the minimum sits
    within ``tol`` of an endpoint.
    """
    a, b = float(interval[0]), float(interval[1])
    if not (b > a):
        raise DomainError(f"interval must satisfy a < b, got {interval!r}")
    if coarse < 3:
        raise DomainError(f"coarse sample count must be >= 3, got {coarse}")

    grid = np.linspace(a, b, coarse)
    samples = [float(f(float(x))) for x in grid]
    best = int(np.argmin(samples))

    lo = float(grid[max(best - 1, 0)])
    hi = float(grid[min(best + 1, coarse - 1)])
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1 = float(f(x1))
    f2 = float(f(x2))
    while (hi - lo) > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = float(f(x1))
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = float(f(x2))

    candidates = [
        (samples[best], float(grid[best])),
        (f1, float(x1)),
        (f2, float(x2)),
        (samples[0], a),
        (samples[-1], b),
    ]
    min_value, argmin = min(candidates, key=lambda t: (t[0], t[1]))
    at_boundary = (argmin - a) <= tol or (b - argmin) <= tol
    return MinimizeResult(argmin, min_value, at_boundary, (lo, hi))


# ======================================================================
# Dense simplex for difference-constrained LPs, exact arithmetic
# ======================================================================

def _lex_negative(col: Sequence[Fraction]) -> bool:
    for z in col:
        if z != 0:
            return z < 0
    return False


def lp_solve(
    costs: Sequence[float],
    constraints: Sequence[Tuple[int, int, float]],
) -> Tuple[List[float], float]:
    """Maximize costs . x subject to |x_a - x_b| <= d and x >= 0.

    ``constraints`` lists (a, b, d) triples.  The solve runs a dense tableau
    simplex in exact Fraction arithmetic with a stacked objective: the true
    objective first, then -x_0, -x_1, ... in order, so the result is the
    lexicographically smallest optimal vertex.  The leaving row is picked by
    the lexicographic ratio test (rhs, then slack block, then structural
    block), which rules out cycling.

    Returns the optimal vector and the objective value.  Raises
    InfeasibleError for a negative bound and UnboundedError when the
    objective grows without limit.
    """
    n = len(costs)
    if n == 0:
        raise DomainError("at least one variable is required")
    c = [Fraction(v) for v in costs]
    bounds: List[Tuple[int, int, Fraction]] = []
    for a, b, d in constraints:
        a, b = int(a), int(b)
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise DomainError(f"constraint indices ({a}, {b}) invalid for {n} variables")
        dd = Fraction(d)
        if dd < 0:
            raise InfeasibleError(f"negative difference bound {d!r} for pair ({a}, {b})")
        bounds.append((a, b, dd))

    m = 2 * len(bounds)
    width = n + m  # structural + slack columns
    # Tableau [A | I | rhs]; the slack basis is feasible because all bounds
    # are nonnegative, so no phase-1 is needed.
    T: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for a, b, d in bounds:
        for sgn in (1, -1):
            row = [Fraction(0)] * width
            row[a] = Fraction(sgn)
            row[b] = Fraction(-sgn)
            row[n + len(T)] = Fraction(1)
            T.append(row)
            rhs.append(d)
    basis = list(range(n, n + m))

    # Stacked objective rows, stored in z-row form (negated objective).
    Z: List[List[Fraction]] = [[-ci for ci in c] + [Fraction(0)] * m]
    for i in range(n):
        row = [Fraction(0)] * width
        row[i] = Fraction(1)
        Z.append(row)

    for _ in range(100_000):
        enter = -1
        for j in range(width):
            if _lex_negative([Z[k][j] for k in range(len(Z))]):
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best_key = None
        for i in range(m):
            piv = T[i][enter]
            if piv > 0:
                key = [rhs[i] / piv]
                key.extend(T[i][n + k] / piv for k in range(m))
                key.extend(T[i][k] / piv for k in range(n))
                if best_key is None or key < best_key:
                    best_key = key
                    leave = i
        if leave < 0:
            raise UnboundedError("objective is unbounded along a feasible ray")
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        rhs[leave] = rhs[leave] / piv
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                factor = T[i][enter]
                T[i] = [vi - factor * vl for vi, vl in zip(T[i], T[leave])]
                rhs[i] = rhs[i] - factor * rhs[leave]
        for k in range(len(Z)):
            if Z[k][enter] != 0:
                factor = Z[k][enter]
                Z[k] = [vi - factor * vl for vi, vl in zip(Z[k], T[leave])]
        basis[leave] = enter
    else:
        raise RuntimeError("simplex iteration cap exceeded")

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rhs[i]
    objective = sum(ci * xi for ci, xi in zip(c, x))
    return [float(v) for v in x], float(objective)
