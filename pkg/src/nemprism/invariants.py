"""Topological invariants of a tangent map: closed forms and numeric oracles.

The closed forms read the invariants straight off the factor data of the
rational map.  Each has an independent numeric counterpart: the trapped
solid angle is recovered by adaptive quadrature of the area density over
the quarter disc, and the kink numbers by tracking the director angle along
the three boundary paths of the projected octant (the arc |w| = 1 between
the x and y edge directions, the imaginary segment between the z and y
edges, and the real segment between the z and x edges).

Winding sign convention: every oracle returns

    -(total angle change - shortest endpoint-to-endpoint change) / 2 pi,

the one sign choice consistent with the closed forms on the anchor cases
(the identity map, all kinks zero, and the single-imaginary-zero map with
k_z = -1, whose boundary phase runs 3 pi / 2 against a shortest path of
-pi / 2).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .conformal import (
    RationalMapSpec,
    _area_density_arrays,
    _config_parts,
    bracket_offsets,
    factor_scales,
)
from .errors import PathResolutionError
from .numerics import QuadratureResult, quad2d

__all__ = [
    "TopologicalInvariants",
    "trapped_area",
    "edge_orientations",
    "kink_numbers",
    "omega_min",
    "invariants_of",
    "invariants_report",
    "numeric_trapped_area",
    "numeric_kink_x",
    "numeric_kink_y",
    "numeric_kink_z",
]


@dataclass(frozen=True)
class TopologicalInvariants:
    """Edge orientations, kink numbers, and trapped solid angle data."""

    e_x: int
    e_y: int
    e_z: int
    k_x: int
    k_y: int
    k_z: int
    omega0: float
    omega_min: float

    def to_dict(self) -> dict:
        return {
            "ex": self.e_x,
            "ey": self.e_y,
            "ez": self.e_z,
            "kx": self.k_x,
            "ky": self.k_y,
            "kz": self.k_z,
            "omega0": self.omega0,
            "omega_min": self.omega_min,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TopologicalInvariants":
        return cls(
            int(data["ex"]), int(data["ey"]), int(data["ez"]),
            int(data["kx"]), int(data["ky"]), int(data["kz"]),
            float(data["omega0"]), float(data["omega_min"]),
        )


def _parity(m: int) -> int:
    return 1 if m % 2 == 0 else -1


def trapped_area(spec: RationalMapSpec) -> float:
    """Trapped solid angle at the origin vertex: (degree / 2) * pi, signed.

    Anticonformal orientation reverses the sphere map and negates the value.
    """
    omega = 0.5 * spec.degree * math.pi
    return -omega if spec.is_anticonformal else omega


def edge_orientations(spec: RationalMapSpec) -> Tuple[int, int, int]:
    """Director signs on the x, y, z edges.

    For conformal orientation these are eps*(-1)^a, eps*(-1)^b*(-1)^((n-1)/2)
    and sgn n.  The anticonformal configuration is the conformal one with
    n_y reflected pointwise, so only e_y flips.
    """
    e_x = spec.epsilon * _parity(spec.a)
    e_y = spec.epsilon * _parity(spec.b) * _parity((spec.n - 1) // 2)
    e_z = 1 if spec.n > 0 else -1
    if spec.is_anticonformal:
        e_y = -e_y
    return (e_x, e_y, e_z)


def kink_numbers(spec: RationalMapSpec) -> Tuple[int, int, int]:
    """Winding counts of the director along the three face paths.

    Factor sums run over the factors sorted by distance from the origin,
    nearest first; the alternating signs below depend on that order.  The
    n_y reflection of the anticonformal configuration negates k_x and k_z
    and leaves k_y alone.
    """
    e_x = spec.epsilon * _parity(spec.a)
    e_y = spec.epsilon * _parity(spec.b) * _parity((spec.n - 1) // 2)
    e_z = 1 if spec.n > 0 else -1

    rhos = [sign for _, sign in sorted(spec.real_factors, key=lambda f: f[0])]
    sigmas = [sign for _, sign in sorted(spec.imag_factors, key=lambda f: f[0])]
    taus = [sign for _, sign in spec.complex_factors]

    # k_x, doubled to stay in integers: the odd-count correction adds e_z.
    alt_sig = sum(_parity(k) * s for k, s in enumerate(sigmas, start=1))
    two_kx = -_parity(spec.b) * e_y * (alt_sig + (0 if spec.b % 2 == 0 else e_z))
    alt_rho = sum(_parity(j) * s for j, s in enumerate(rhos, start=1))
    two_ky = -_parity(spec.a) * e_x * (alt_rho + (0 if spec.a % 2 == 0 else e_z))
    four_kz = (e_x * e_y - spec.n) - 2 * sum(rhos) - 2 * sum(sigmas) - 4 * sum(taus)
    if two_kx % 2 or two_ky % 2 or four_kz % 4:
        raise AssertionError(
            f"non-integer kink numbers for {spec!r}: {two_kx}/2 {two_ky}/2 {four_kz}/4"
        )
    k_x, k_y, k_z = two_kx // 2, two_ky // 2, four_kz // 4
    if spec.is_anticonformal:
        k_x, k_z = -k_x, -k_z
    return (k_x, k_y, k_z)


def omega_min(kinks: Tuple[int, int, int]) -> float:
    """Homotopy lower bound 2 pi (|k_x| + |k_y| + |k_z| + 1/4) on |omega0|."""
    k_x, k_y, k_z = kinks
    return 2.0 * math.pi * (abs(k_x) + abs(k_y) + abs(k_z) + 0.25)


def invariants_of(spec: RationalMapSpec) -> TopologicalInvariants:
    """All closed-form invariants bundled together."""
    e = edge_orientations(spec)
    k = kink_numbers(spec)
    return TopologicalInvariants(
        e[0], e[1], e[2], k[0], k[1], k[2], trapped_area(spec), omega_min(k)
    )


def invariants_report(spec: RationalMapSpec, tol: float = 1e-6) -> dict:
    """Closed-form invariants plus numeric cross-checks, as a flat dict.

    The numeric fields recompute omega0 by quadrature and the kink numbers
    by phase tracking, so disagreement with the closed forms is visible in
    the serialized output.
    """
    data = invariants_of(spec).to_dict()
    data["omega0_numeric"] = numeric_trapped_area(spec, tol=tol).value
    data["kx_numeric"] = numeric_kink_x(spec)
    data["ky_numeric"] = numeric_kink_y(spec)
    data["kz_numeric"] = numeric_kink_z(spec)
    return data


# ----------------------------------------------------------------------
# Quadrature oracle for the trapped solid angle
# ----------------------------------------------------------------------

def numeric_trapped_area(
    spec: RationalMapSpec, tol: float = 1e-6, max_evals: int = 1_000_000
) -> QuadratureResult:
    """Trapped solid angle by quadrature of the area density.

    Integrates the pulled-back density over the quarter disc in polar
    coordinates (Jacobian rho); the orientation sign is structural (the
    anticonformal map reverses the sphere orientation).  Cell boundaries are
    seeded at the factor radii and angles: a close zero/pole pair carries
    its covering mass in a bump narrow enough to slip between the nodes of
    an unseeded cell.
    """

    def integrand(rho, theta):
        w = rho * np.exp(1j * theta)
        return _area_density_arrays(spec, w) * rho

    rho_cuts = (
        [r for r, _ in spec.real_factors]
        + [s for s, _ in spec.imag_factors]
        + [abs(t) for t, _ in spec.complex_factors]
    )
    theta_cuts = [abs(cmath.phase(t)) for t, _ in spec.complex_factors]
    # bracket each bump with a geometric ladder so the tail is resolved
    for w0, delta in factor_scales(spec):
        m, th = abs(w0), abs(cmath.phase(w0))
        for off in bracket_offsets(delta, 0.5 * math.pi):
            rho_cuts.extend((m * (1.0 - off), m * (1.0 + off)))
            theta_cuts.extend((th - off, th + off))
    res = quad2d(
        integrand,
        (0.0, 1.0, 0.0, 0.5 * math.pi),
        tol=tol,
        max_evals=max_evals,
        initial_splits=(rho_cuts, theta_cuts),
    )
    sign = -1.0 if spec.is_anticonformal else 1.0
    return QuadratureResult(sign * res.value, res.error_estimate, res.evaluations)


# ----------------------------------------------------------------------
# Winding oracles for the kink numbers
# ----------------------------------------------------------------------

_INITIAL_SAMPLES = 2048
_MAX_PATH_SAMPLES = 1 << 21
_LADDER_DECADES = 48


def _wrap(delta):
    """Wrap angle differences to (-pi, pi]."""
    return np.angle(np.exp(1j * np.asarray(delta)))


def _ladder(center: float, t0: float, t1: float, span: float):
    """Geometric sample ladder closing in on one parameter value."""
    out = [center]
    for k in range(1, _LADDER_DECADES + 1):
        d = span * 2.0 ** (-k)
        out.append(center - d)
        out.append(center + d)
    return [t for t in out if t0 <= t <= t1]


def _track_winding(
    spec: RationalMapSpec, path, t0: float, t1: float, comps, foci=()
) -> int:
    """Count extra full turns of the director along a parametrized path.

    ``path`` maps parameter arrays to w values; ``comps`` picks the two
    director components spanning the face plane, angle = atan2(first,
    second).  Sampling starts uniform (plus geometric ladders around the
    ``foci`` parameter values, where factors touch or approach the path) and
    midpoint-refines any interval whose wrapped angle step reaches pi/2.

    A wrapped step alone can hide a full turn: a near-cancelling zero/pole
    pair sweeps the angle by almost 2 pi inside an arbitrarily narrow
    window.  The director moves along a great circle, so its angular speed
    is exactly sqrt(area density) |dw/dt|; intervals whose estimated swept
    arc reaches pi/2 are refined as well, which makes such sweeps visible.
    """
    i, j = comps
    params = np.linspace(t0, t1, _INITIAL_SAMPLES + 1)
    seeds = [t for c in foci for t in _ladder(c, t0, t1, t1 - t0)]
    if seeds:
        params = np.unique(np.concatenate([params, seeds]))

    def sample(ts):
        w = path(ts)
        P, Q, dP, dQ = _config_parts(spec, w)
        scale = np.maximum(np.abs(P), np.abs(Q))
        p = P / scale
        q = Q / scale
        denom = np.abs(p) ** 2 + np.abs(q) ** 2
        cross = 2.0 * p * np.conj(q)
        comp = {
            0: cross.real / denom,
            1: cross.imag / denom,
            2: (np.abs(q) ** 2 - np.abs(p) ** 2) / denom,
        }
        alpha = np.arctan2(comp[i], comp[j])
        speed = 2.0 * np.abs((dP / scale) * q - p * (dQ / scale)) / denom
        return alpha, speed, w

    alpha, speed, w = sample(params)
    while True:
        steps = _wrap(np.diff(alpha))
        arc = 0.5 * (speed[:-1] + speed[1:]) * np.abs(np.diff(w))
        bad = (np.abs(steps) >= 0.5 * math.pi) | (arc >= 0.5 * math.pi)
        if not bad.any():
            break
        if params.size * 2 > _MAX_PATH_SAMPLES:
            raise PathResolutionError(
                f"could not resolve the winding path within "
                f"{_MAX_PATH_SAMPLES} samples (step or arc >= pi/2 persists)"
            )
        mids = 0.5 * (params[:-1][bad] + params[1:][bad])
        params = np.sort(np.concatenate([params, mids]))
        alpha, speed, w = sample(params)

    total = float(steps.sum())
    shortest = float(_wrap(alpha[-1] - alpha[0]))
    raw = (total - shortest) / (2.0 * math.pi)
    if abs(raw - round(raw)) > 0.05:
        raise PathResolutionError(
            f"winding count did not settle on an integer (got {raw!r})"
        )
    return -int(round(raw))


def _axis_start(spec: RationalMapSpec, positions) -> float:
    """Path start offset: small, and below every on-path factor position."""
    lo = 1e-6
    if positions:
        lo = min(lo, 0.5 * min(positions))
    return lo


def numeric_kink_x(spec: RationalMapSpec) -> int:
    """k_x from the director winding along the imaginary segment [0, i].

    On the x = 0 face the director lies in the (y, z) plane; the path runs
    from just off the z edge to the y edge, starting 1e-6 (or half the
    nearest on-path factor position) away from the vertex direction.
    """
    positions = [s for s, _ in spec.imag_factors]
    t0 = _axis_start(spec, positions)
    foci = positions + [abs(t) for t, _ in spec.complex_factors]
    return _track_winding(spec, lambda t: 1j * t, t0, 1.0, (1, 2), foci)


def numeric_kink_y(spec: RationalMapSpec) -> int:
    """k_y from the director winding along the real segment [0, 1]."""
    positions = [r for r, _ in spec.real_factors]
    t0 = _axis_start(spec, positions)
    foci = positions + [abs(t) for t, _ in spec.complex_factors]
    return _track_winding(spec, lambda t: t + 0.0j, t0, 1.0, (0, 2), foci)


def numeric_kink_z(spec: RationalMapSpec) -> int:
    """k_z from the director winding along the arc w = exp(i theta).

    Factors approaching the unit circle pinch the arc; their angular
    positions (0 for real, pi/2 for imaginary, arg t for complex) seed the
    sampling ladders.
    """
    foci = [0.0] * spec.a + [0.5 * math.pi] * spec.b
    foci += [abs(cmath.phase(t)) for t, _ in spec.complex_factors]
    return _track_winding(
        spec, lambda t: np.exp(1j * t), 0.0, 0.5 * math.pi, (1, 0), foci
    )
