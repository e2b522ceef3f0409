"""Elastic energy of a tangent configuration: bounds and exact values.

With a one-constant elastic density K (grad n)^2 and a radially constant
conformal (or anticonformal) configuration, the energy over the whole box
is an exact flux integral

    E = 16 K * sum over interior octant faces of  integral r (D . nhat) dA,

because (grad n)^2 = 2 |D| pointwise for these fields and D is radial; the
exterior faces (the coordinate planes through the vertex) carry no flux.
Bounds need only the trapped solid angle omega0:

    lower = 8 K L_z |omega0|,   upper = 8 K sqrt(Lx^2+Ly^2+Lz^2) |omega0|,

so upper/lower = sqrt(a_xz^2 + a_yz^2 + 1) depends on shape alone.  A
sharper certificate comes from the small linear program over per-vertex
potentials with difference bounds given by vertex distances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .conformal import (
    RationalMapSpec,
    _area_density_arrays,
    _project_points,
    bracket_offsets,
    factor_scales,
)
from .errors import AccuracyError, DomainError, SumRuleError
from .geometry import Prism
from .invariants import trapped_area
from .numerics import QuadratureResult, appell_f2_restricted, lp_solve, quad2d

__all__ = [
    "ElasticConstants",
    "EnergyReport",
    "LowerBoundCertificate",
    "lower_bound_prism",
    "upper_bound_prism",
    "bound_ratio",
    "lower_bound_lp",
    "prism_lp_certificate",
    "conformal_energy",
    "face_flux",
    "unwrapped_energy",
    "scaled_energy",
    "energy_report",
]

_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class ElasticConstants:
    """One-constant modulus K, with optional splay/twist/bend values.

    When all three anisotropic constants are present, min_constant() gives
    the modulus that keeps the lower bounds valid for the full energy.
    """

    K: float = 1.0
    K1: Optional[float] = None
    K2: Optional[float] = None
    K3: Optional[float] = None

    def __post_init__(self):
        for name in ("K", "K1", "K2", "K3"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive and finite, got {v!r}")

    def min_constant(self) -> float:
        ks = [k for k in (self.K1, self.K2, self.K3) if k is not None]
        if len(ks) == 3:
            return min(ks)
        return self.K


@dataclass(frozen=True)
class EnergyReport:
    """Bounds and, when computed, the exact energy of one configuration."""

    lower: float
    upper: float
    ratio: float
    exact: Optional[float] = None
    exact_err: Optional[float] = None
    scaled: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "exact_err": self.exact_err,
            "scaled": self.scaled,
            "ratio": self.ratio,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EnergyReport":
        return cls(
            lower=float(data["lower"]),
            upper=float(data["upper"]),
            ratio=float(data["ratio"]),
            exact=None if data.get("exact") is None else float(data["exact"]),
            exact_err=None if data.get("exact_err") is None else float(data["exact_err"]),
            scaled=None if data.get("scaled") is None else float(data["scaled"]),
        )


@dataclass(frozen=True)
class LowerBoundCertificate:
    """Feasible potentials certifying the LP lower bound 2K sum xi_a Omega_a."""

    objective: float
    xi: Tuple[float, ...]
    points: Tuple[Tuple[float, float, float], ...]
    feasible: bool

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "xi": list(self.xi),
            "points": [list(p) for p in self.points],
            "feasible": self.feasible,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LowerBoundCertificate":
        return cls(
            objective=float(data["objective"]),
            xi=tuple(float(v) for v in data["xi"]),
            points=tuple(tuple(float(c) for c in p) for p in data["points"]),
            feasible=bool(data["feasible"]),
        )


def lower_bound_prism(prism: Prism, omega0: float, K: float = 1.0) -> float:
    """Shape-aware topological lower bound 8 K L_z |omega0|."""
    return 8.0 * K * prism.Lz * abs(omega0)


def upper_bound_prism(prism: Prism, omega0: float, K: float = 1.0) -> float:
    """Closed-form upper bound 8 K sqrt(Lx^2 + Ly^2 + Lz^2) |omega0|."""
    return 8.0 * K * prism.diagonal * abs(omega0)


def bound_ratio(prism: Prism) -> float:
    """upper/lower = sqrt(a_xz^2 + a_yz^2 + 1); sqrt(3) for a cube."""
    axz = prism.aspect("x", "z")
    ayz = prism.aspect("y", "z")
    return math.sqrt(axz * axz + ayz * ayz + 1.0)


# ----------------------------------------------------------------------
# Linear-program lower bound
# ----------------------------------------------------------------------

def lower_bound_lp(
    vertex_data: Sequence[Tuple[Sequence[float], float]],
    K: float = 1.0,
    pairs: Union[str, Sequence[Tuple[int, int]]] = "all",
) -> LowerBoundCertificate:
    """Best potential-based lower bound 2 K max sum xi_a Omega_a.

    ``vertex_data`` holds (point, solid angle) pairs; the potentials obey
    |xi_a - xi_b| <= |point_a - point_b| for every selected pair ("all", the
    default, constrains every pair; otherwise pass explicit index pairs).
    The solid angles must sum to zero within 1e-9 (they are centred exactly
    before solving) and the gauge min xi = 0 holds on output.
    """
    if len(vertex_data) < 2:
        raise DomainError("at least two vertices are required")
    points = [tuple(float(v) for v in p) for p, _ in vertex_data]
    omegas = [float(o) for _, o in vertex_data]
    total = math.fsum(omegas)
    if abs(total) > 1e-9:
        raise SumRuleError(
            f"vertex solid angles must sum to zero (got {total!r}); "
            f"the configuration cannot satisfy the boundary conditions"
        )
    exact = [Fraction(o) for o in omegas]
    mean = sum(exact) / len(exact)
    costs = [o - mean for o in exact]

    if isinstance(pairs, str):
        if pairs != "all":
            raise DomainError(f"pairs must be 'all' or explicit index pairs, got {pairs!r}")
        index_pairs = [
            (i, j) for i in range(len(points)) for j in range(i + 1, len(points))
        ]
    else:
        index_pairs = [(int(i), int(j)) for i, j in pairs]

    constraints = []
    for i, j in index_pairs:
        d = math.dist(points[i], points[j])
        constraints.append((i, j, d))

    xi, raw = lp_solve(costs, constraints)
    if min(xi) != 0.0:
        raise AssertionError(f"gauge min xi = 0 violated: {xi!r}")
    feasible = all(
        abs(xi[i] - xi[j]) <= d * (1.0 + 1e-12) + 1e-12 for i, j, d in constraints
    )
    return LowerBoundCertificate(
        objective=2.0 * K * raw,
        xi=tuple(xi),
        points=tuple(points),
        feasible=feasible,
    )


def prism_lp_certificate(
    prism: Prism,
    omega0: float,
    K: float = 1.0,
    constraints: str = "all-pairs",
) -> LowerBoundCertificate:
    """LP certificate for a box with parity-alternating vertex angles.

    ``constraints`` selects "all-pairs" (every vertex pair, the default) or
    "edges" (box edges only).
    """
    vertices = prism.vertices
    data = [(v.coords, v.parity * omega0) for v in vertices]
    if constraints == "all-pairs":
        pairs: Union[str, List[Tuple[int, int]]] = "all"
    elif constraints == "edges":
        pairs = []
        for i in range(8):
            for j in range(i + 1, 8):
                differing = sum(
                    1 for k in range(3) if vertices[i].coords[k] != vertices[j].coords[k]
                )
                if differing == 1:
                    pairs.append((i, j))
    else:
        raise DomainError(
            f"constraints must be 'all-pairs' or 'edges', got {constraints!r}"
        )
    return lower_bound_lp(data, K=K, pairs=pairs)


# ----------------------------------------------------------------------
# Exact energy by face quadrature
# ----------------------------------------------------------------------

def _face_cuts(
    spec: RationalMapSpec, k: int, value: float, free, limits
) -> Tuple[List[float], List[float]]:
    """Face coordinates of the rays through the factor directions.

    The sphere density peaks around the factor positions; where such a ray
    pierces the face, the integrand carries a bump that can be narrower than
    the node spacing of a large quadrature cell, so cell boundaries are
    seeded there.
    """
    cuts_u: List[float] = []
    cuts_v: List[float] = []
    for w0, delta in factor_scales(spec):
        a = abs(w0) ** 2
        d = (2.0 * w0.real / (1.0 + a), 2.0 * w0.imag / (1.0 + a), (1.0 - a) / (1.0 + a))
        if d[k] <= 1e-12:
            continue
        t = value / d[k]
        u0, v0 = t * d[free[0]], t * d[free[1]]
        if 0.0 < u0 < limits[0] and 0.0 < v0 < limits[1]:
            # the spot subtends an angle ~delta seen from the vertex, so
            # its footprint at distance t has radius ~delta * t
            cuts_u.append(u0)
            cuts_v.append(v0)
            for off in bracket_offsets(delta * t, max(limits)):
                cuts_u.extend((u0 - off, u0 + off))
                cuts_v.extend((v0 - off, v0 + off))
    return cuts_u, cuts_v


def _face_integral(
    prism: Prism,
    spec: RationalMapSpec,
    axis: str,
    value: float,
    weight: str,
    tol: float,
    max_evals: int,
) -> QuadratureResult:
    """Quadrature of a flux integrand over one octant face.

    ``axis``/``value`` fix the face plane; the free coordinates range over
    the other two half-sides.  weight "energy" integrates 16 K-less
    r (D . nhat) = 16 value * density / r^2; weight "flux" integrates
    D . nhat = value * density / r^3 (signed).
    """
    k = _AXES.index(axis)
    free = [m for m in range(3) if m != k]
    half = (prism.Lx / 2.0, prism.Ly / 2.0, prism.Lz / 2.0)
    sign = -1.0 if spec.is_anticonformal else 1.0

    def integrand(u, v):
        pts = np.empty(u.shape + (3,))
        pts[..., k] = value
        pts[..., free[0]] = u
        pts[..., free[1]] = v
        r2 = np.sum(pts * pts, axis=-1)
        r = np.sqrt(r2)
        w = _project_points(pts)
        dens = _area_density_arrays(spec, w) * (1.0 + np.abs(w) ** 2) ** 2 / 4.0
        if weight == "energy":
            return 16.0 * value * dens / r2
        return sign * value * dens / (r2 * r)

    limits = (half[free[0]], half[free[1]])
    splits = _face_cuts(spec, k, value, free, limits) if value > 0.0 else None
    return quad2d(
        integrand,
        (0.0, limits[0], 0.0, limits[1]),
        tol=tol,
        max_evals=max_evals,
        initial_splits=splits,
    )


def conformal_energy(
    prism: Prism,
    spec: RationalMapSpec,
    K: float = 1.0,
    tol: float = 1e-6,
    max_evals_per_face: int = 1_000_000,
) -> QuadratureResult:
    """Exact elastic energy of the configuration over the whole box.

    Sums 16 K r (D . nhat) over the three interior octant faces by adaptive
    quadrature (tolerance split evenly between faces).  The exterior faces
    contribute nothing: D is radial, so its normal component vanishes on any
    plane through the vertex.  Raises AccuracyError if a face cannot reach
    its share of the tolerance within the evaluation budget.
    """
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    total = 0.0
    err = 0.0
    evals = 0
    failed = False
    scaled_tol = tol / (3.0 * max(K, 1e-300))
    for axis, value in (("x", prism.Lx / 2), ("y", prism.Ly / 2), ("z", prism.Lz / 2)):
        try:
            res = _face_integral(prism, spec, axis, value, "energy", scaled_tol, max_evals_per_face)
        except AccuracyError as exc:
            # finish the other faces so the best estimate covers the box
            failed = True
            res = QuadratureResult(exc.value, exc.error_estimate, exc.evaluations)
        total += res.value
        err += res.error_estimate
        evals += res.evaluations
    if failed:
        raise AccuracyError(
            "face quadrature budget of "
            f"{max_evals_per_face} evaluations exhausted "
            f"(error estimate {K * err:.3e} > tol {tol:.3e})",
            K * total,
            K * err,
            evals,
        )
    return QuadratureResult(K * total, K * err, evals)


def face_flux(
    prism: Prism,
    spec: RationalMapSpec,
    which: str = "interior",
    tol: float = 1e-8,
    max_evals_per_face: int = 1_000_000,
) -> QuadratureResult:
    """Signed flux of D through the interior (or exterior) octant faces.

    Over the interior faces the total equals the trapped solid angle; over
    an exterior face the integrand vanishes identically.
    """
    total = 0.0
    err = 0.0
    evals = 0
    half = {"x": prism.Lx / 2, "y": prism.Ly / 2, "z": prism.Lz / 2}
    for axis in _AXES:
        value = half[axis] if which == "interior" else 0.0
        res = _face_integral(prism, spec, axis, value, "flux", tol / 3.0, max_evals_per_face)
        total += res.value
        err += res.error_estimate
        evals += res.evaluations
    return QuadratureResult(total, err, evals)


# ----------------------------------------------------------------------
# Closed-form energy of the identity-map configuration
# ----------------------------------------------------------------------

def unwrapped_energy(prism: Prism, K: float = 1.0, tol: float = 1e-10) -> float:
    """Exact energy of the identity-map configuration on a box.

    Cyclic sum of 8 a_ji a_ki K L_i F2(1,1/2,1/2;3/2,3/2; -a_ji^2, -a_ki^2)
    over i in (x, y, z); about 15.35 K on the unit cube, a fifth above the
    4 pi K lower bound.
    """
    L = {"x": prism.Lx, "y": prism.Ly, "z": prism.Lz}
    total = 0.0
    for i, j, k in (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y")):
        aji = L[j] / L[i]
        aki = L[k] / L[i]
        f2 = appell_f2_restricted(aji * aji, aki * aki, tol=tol)
        total += 8.0 * aji * aki * K * L[i] * f2
    return total


def scaled_energy(energy: float, prism: Prism) -> float:
    """Energy per unit cube-root volume, the shape-comparison normalization."""
    return energy / prism.volume ** (1.0 / 3.0)


def energy_report(
    prism: Prism,
    spec: RationalMapSpec,
    K: float = 1.0,
    tol: float = 1e-6,
) -> EnergyReport:
    """Bounds plus the exact quadrature energy for one configuration."""
    omega0 = trapped_area(spec)
    lower = lower_bound_prism(prism, omega0, K)
    upper = upper_bound_prism(prism, omega0, K)
    exact = conformal_energy(prism, spec, K, tol)
    return EnergyReport(
        lower=lower,
        upper=upper,
        ratio=bound_ratio(prism),
        exact=exact.value,
        exact_err=exact.error_estimate,
        scaled=scaled_energy(exact.value, prism),
    )
