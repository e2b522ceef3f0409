"""Rational maps of the unit disc and the tangent director fields they induce.

A configuration is described by an odd power w^n times quadratic factors
whose zeros sit on the open unit interval (real factors), on the open
imaginary unit interval (imaginary factors), or strictly inside the open
quarter disc off both axes (complex factors, entering together with their
mirror):

    f(w) = eps * w^n * prod_j ((w^2 - r_j^2) / (r_j^2 w^2 - 1))^rho_j
                     * prod_k ((w^2 + s_k^2) / (s_k^2 w^2 + 1))^sigma_k
                     * prod_l (((w^2 - t_l^2)(w^2 - conj(t_l)^2))
                               / ((t_l^2 w^2 - 1)(conj(t_l)^2 w^2 - 1)))^tau_l

with eps = +-1, n odd, and every exponent +-1.  Such maps have real
coefficients, are odd, and satisfy f(w) f(1/w) = 1, which makes the lifted
unit vector field

    n(r) = stereo_lift(f(w)),  w = (x + i y) / (|r| + z)

tangent on the coordinate planes and on the unit sphere directions of the
box faces.  Anticonformal variants evaluate f at conj(w) instead, which
reflects n_y pointwise and reverses the orientation of the induced sphere
map.

Evaluation is projective: numerator, denominator, and their derivatives are
accumulated factor by factor, so poles need no special casing and the area
density stays finite everywhere.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidSpecError, NormalizationError, UndefinedAtVertexError

__all__ = [
    "RationalMapSpec",
    "HomogeneousValue",
    "DirectorSample",
    "eval_f",
    "stereo_lift",
    "stereo_project",
    "director",
    "director_sample",
    "area_density",
    "sphere_density",
    "flux_field",
]

_BOUNDARY_TOL = 1e-12

ComplexLike = Union[complex, float]


def _is_inf(w: ComplexLike) -> bool:
    w = complex(w)
    return math.isinf(w.real) or math.isinf(w.imag)


@dataclass(frozen=True)
class RationalMapSpec:
    """Validated parameters of one rational tangent map.

    real_factors and imag_factors hold (position, sign) pairs with position
    in the open interval (0, 1); complex_factors holds (position, sign)
    pairs with a truly complex position strictly inside the unit disc.
    Signs are +1 for a zero factor and -1 for its reciprocal (pole) factor.
    orientation is "conformal" or "anticonformal".
    """

    epsilon: int
    n: int
    real_factors: Tuple[Tuple[float, int], ...] = ()
    imag_factors: Tuple[Tuple[float, int], ...] = ()
    complex_factors: Tuple[Tuple[complex, int], ...] = ()
    orientation: str = "conformal"

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise InvalidSpecError(f"epsilon must be +1 or -1, got {self.epsilon!r}")
        if not isinstance(self.n, int) or self.n % 2 == 0:
            raise InvalidSpecError(f"n must be an odd integer, got {self.n!r}")
        if self.orientation not in ("conformal", "anticonformal"):
            raise InvalidSpecError(
                f"orientation must be 'conformal' or 'anticonformal', "
                f"got {self.orientation!r}"
            )
        object.__setattr__(self, "real_factors", _norm_axis(self.real_factors, "real"))
        object.__setattr__(self, "imag_factors", _norm_axis(self.imag_factors, "imag"))
        object.__setattr__(self, "complex_factors", _norm_complex(self.complex_factors))

    @property
    def a(self) -> int:
        return len(self.real_factors)

    @property
    def b(self) -> int:
        return len(self.imag_factors)

    @property
    def c(self) -> int:
        return len(self.complex_factors)

    @property
    def degree(self) -> int:
        """Topological degree |n| + 2(a + b) + 4c of the extended map."""
        return abs(self.n) + 2 * (self.a + self.b) + 4 * self.c

    @property
    def is_anticonformal(self) -> bool:
        return self.orientation == "anticonformal"

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "n": self.n,
            "real": [[pos, sign] for pos, sign in self.real_factors],
            "imag": [[pos, sign] for pos, sign in self.imag_factors],
            "complex": [[t.real, t.imag, sign] for t, sign in self.complex_factors],
            "orientation": self.orientation,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RationalMapSpec":
        if not isinstance(data, dict):
            raise InvalidSpecError(f"spec must be a JSON object, got {type(data).__name__}")
        known = {"epsilon", "n", "real", "imag", "complex", "orientation"}
        unknown = set(data) - known
        if unknown:
            raise InvalidSpecError(f"unknown spec fields: {sorted(unknown)}")
        try:
            reals = tuple((float(p), int(s)) for p, s in data.get("real", []))
            imags = tuple((float(p), int(s)) for p, s in data.get("imag", []))
            cplx = tuple(
                (complex(float(re), float(im)), int(s))
                for re, im, s in data.get("complex", [])
            )
        except (TypeError, ValueError) as exc:
            raise InvalidSpecError(f"malformed factor list: {exc}") from exc
        if "epsilon" not in data or "n" not in data:
            raise InvalidSpecError("spec requires 'epsilon' and 'n' fields")
        return cls(
            epsilon=int(data["epsilon"]),
            n=int(data["n"]),
            real_factors=reals,
            imag_factors=imags,
            complex_factors=cplx,
            orientation=data.get("orientation", "conformal"),
        )


def _norm_axis(factors, label) -> Tuple[Tuple[float, int], ...]:
    out = []
    for item in factors:
        pos, sign = item
        pos = float(pos)
        sign = int(sign)
        if not (_BOUNDARY_TOL < pos < 1.0 - _BOUNDARY_TOL):
            raise InvalidSpecError(
                f"{label} factor position must lie strictly inside (0, 1) "
                f"(tolerance {_BOUNDARY_TOL}), got {pos!r}"
            )
        if sign not in (1, -1):
            raise InvalidSpecError(f"{label} factor sign must be +1 or -1, got {sign!r}")
        out.append((pos, sign))
    for i, (pos, sign) in enumerate(out):
        for pos2, sign2 in out[i + 1:]:
            if pos == pos2 and sign == -sign2:
                raise InvalidSpecError(
                    f"{label} factors at {pos!r} with opposite signs cancel and "
                    f"would silently lower the degree"
                )
    return tuple(out)


def _norm_complex(factors) -> Tuple[Tuple[complex, int], ...]:
    out = []
    for item in factors:
        t, sign = item
        t = complex(t)
        sign = int(sign)
        if abs(t.real) <= _BOUNDARY_TOL or abs(t.imag) <= _BOUNDARY_TOL:
            raise InvalidSpecError(
                f"complex factor position must sit off both axes, got {t!r}"
            )
        if not (_BOUNDARY_TOL < abs(t) < 1.0 - _BOUNDARY_TOL):
            raise InvalidSpecError(
                f"complex factor modulus must lie strictly inside (0, 1), got {t!r}"
            )
        if sign not in (1, -1):
            raise InvalidSpecError(f"complex factor sign must be +1 or -1, got {sign!r}")
        out.append((t, sign))
    canon = [(abs(t.real), abs(t.imag)) for t, _ in out]
    for i in range(len(out)):
        for j in range(i + 1, len(out)):
            if canon[i] == canon[j] and out[i][1] == -out[j][1]:
                raise InvalidSpecError(
                    f"complex factors at {out[i][0]!r} with opposite signs cancel "
                    f"and would silently lower the degree"
                )
    return tuple(out)


@dataclass(frozen=True)
class HomogeneousValue:
    """f(w) as a projective pair with derivatives: f = P/Q, f' = (dP Q - P dQ)/Q^2."""

    P: complex
    Q: complex
    dP: complex
    dQ: complex

    @property
    def is_pole(self) -> bool:
        return abs(self.Q) == 0.0 or abs(self.Q) < 1e-300 * abs(self.P)

    @property
    def value(self) -> complex:
        if self.is_pole:
            return complex(math.inf, 0.0)
        return self.P / self.Q

    @property
    def wronskian(self) -> complex:
        return self.dP * self.Q - self.P * self.dQ


# ----------------------------------------------------------------------
# Projective evaluation
# ----------------------------------------------------------------------

def _parts(spec: RationalMapSpec, w):
    """Projective evaluation of f at finite w (scalar or ndarray).

    Returns (P, Q, dP, dQ).  The anticonformal input conjugation is NOT
    applied here; callers that evaluate a configuration go through
    _config_parts.
    """
    w = np.asarray(w, dtype=complex)
    na = abs(spec.n)
    if spec.n > 0:
        P = spec.epsilon * w**na
        dP = spec.epsilon * na * w ** (na - 1)
        Q = np.ones_like(w)
        dQ = np.zeros_like(w)
    else:
        P = spec.epsilon * np.ones_like(w)
        dP = np.zeros_like(w)
        Q = w**na
        dQ = na * w ** (na - 1)

    w2 = w * w

    def push(num, dnum, den, dden, sign):
        nonlocal P, Q, dP, dQ
        if sign < 0:
            num, den = den, num
            dnum, dden = dden, dnum
        dP = dP * num + P * dnum
        P = P * num
        dQ = dQ * den + Q * dden
        Q = Q * den

    for r, sign in spec.real_factors:
        r2 = r * r
        push(w2 - r2, 2.0 * w, r2 * w2 - 1.0, 2.0 * r2 * w, sign)
    for s, sign in spec.imag_factors:
        s2 = s * s
        push(w2 + s2, 2.0 * w, s2 * w2 + 1.0, 2.0 * s2 * w, sign)
    for t, sign in spec.complex_factors:
        # (w^2 - t^2)(w^2 - conj(t)^2) has real coefficients u, v below.
        u = 2.0 * (t * t).real
        v = abs(t) ** 4
        num = w2 * w2 - u * w2 + v
        dnum = 4.0 * w2 * w - 2.0 * u * w
        den = v * w2 * w2 - u * w2 + 1.0
        dden = 4.0 * v * w2 * w - 2.0 * u * w
        push(num, dnum, den, dden, sign)
    return P, Q, dP, dQ


def _config_parts(spec: RationalMapSpec, w):
    """Projective parts of the configuration map at w (conjugates input
    first for anticonformal orientation)."""
    w = np.asarray(w, dtype=complex)
    if spec.is_anticonformal:
        w = np.conj(w)
    return _parts(spec, w)


def eval_f(spec: RationalMapSpec, w: ComplexLike) -> HomogeneousValue:
    """Evaluate f at a single point, the point at infinity included.

    For anticonformal orientation the input is conjugated first.  At
    infinity the reciprocal symmetry f(w) f(1/w) = 1 gives the projective
    value (Q(0), P(0)); the chart derivative degenerates there and the
    derivative slots are zero (consistent with the vanishing area density).
    """
    if _is_inf(w):
        P0, Q0, _, _ = _parts(spec, 0.0)
        return HomogeneousValue(complex(Q0), complex(P0), 0.0, 0.0)
    P, Q, dP, dQ = _config_parts(spec, complex(w))
    return HomogeneousValue(complex(P), complex(Q), complex(dP), complex(dQ))


# ----------------------------------------------------------------------
# Stereographic correspondence
# ----------------------------------------------------------------------

def _lift_projective(P, Q):
    """Unit vector with (e_x + i e_y)/(1 + e_z) = P/Q, stable at poles."""
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    scale = np.maximum(np.abs(P), np.abs(Q))
    p = P / scale
    q = Q / scale
    denom = np.abs(p) ** 2 + np.abs(q) ** 2
    cross = 2.0 * p * np.conj(q)
    ex = cross.real / denom
    ey = cross.imag / denom
    ez = (np.abs(q) ** 2 - np.abs(p) ** 2) / denom
    return np.stack(np.broadcast_arrays(ex, ey, ez), axis=-1)


def stereo_lift(w: ComplexLike) -> np.ndarray:
    """Inverse stereographic projection: complex plane (plus infinity) to S^2.

    Maps 0 to +z, the unit circle to the equator, infinity to -z.
    """
    if _is_inf(w):
        return np.array([0.0, 0.0, -1.0])
    return np.asarray(_lift_projective(complex(w), 1.0 + 0.0j), dtype=float)


def stereo_project(e: Sequence[float]) -> complex:
    """Stereographic projection (e_x + i e_y)/(1 + e_z) of a unit vector.

    Returns complex infinity at the south pole.  Raises NormalizationError
    when |e| deviates from 1 by more than 1e-9.
    """
    e = np.asarray(e, dtype=float)
    if e.shape != (3,):
        raise NormalizationError(f"expected a 3-vector, got shape {e.shape}")
    norm = float(np.linalg.norm(e))
    if abs(norm - 1.0) > 1e-9:
        raise NormalizationError(f"input must be a unit vector, |e| = {norm!r}")
    denom = 1.0 + e[2]
    if denom == 0.0:
        return complex(math.inf, 0.0)
    return complex(e[0], e[1]) / denom


# ----------------------------------------------------------------------
# Director field and derived quantities
# ----------------------------------------------------------------------

def _project_points(pts: np.ndarray) -> np.ndarray:
    """w = (x + i y)/(|r| + z) for an (N, 3) array of nonzero points."""
    r = np.sqrt(np.sum(pts * pts, axis=-1))
    return (pts[..., 0] + 1j * pts[..., 1]) / (r + pts[..., 2])


def _director_many(spec: RationalMapSpec, pts: np.ndarray) -> np.ndarray:
    w = _project_points(np.asarray(pts, dtype=float))
    P, Q, _, _ = _config_parts(spec, w)
    return _lift_projective(P, Q)


def director(spec: RationalMapSpec, r: Sequence[float]) -> np.ndarray:
    """Unit director at a point (radially constant; undefined at the origin)."""
    pt = np.asarray(r, dtype=float)
    if pt.shape != (3,):
        raise UndefinedAtVertexError(f"expected a 3-vector, got shape {pt.shape}")
    if float(np.dot(pt, pt)) == 0.0:
        raise UndefinedAtVertexError("the director has no limit at the box vertex")
    if float(np.linalg.norm(pt)) + pt[2] == 0.0:
        # Direction -z projects to infinity; take the projective value there.
        hv = eval_f(spec, complex(math.inf, 0.0))
        return np.asarray(_lift_projective(hv.P, hv.Q), dtype=float)
    return np.asarray(_director_many(spec, pt[None, :])[0], dtype=float)


def _area_density_arrays(spec: RationalMapSpec, w) -> np.ndarray:
    P, Q, dP, dQ = _config_parts(spec, w)
    scale = np.maximum(np.abs(P), np.abs(Q))
    p = P / scale
    q = Q / scale
    dp = dP / scale
    dq = dQ / scale
    wr = dp * q - p * dq
    denom = (np.abs(p) ** 2 + np.abs(q) ** 2) ** 2
    return 4.0 * np.abs(wr) ** 2 / denom


def area_density(spec: RationalMapSpec, w) -> Union[float, np.ndarray]:
    """Pulled-back sphere area density 4 |f'|^2 / (1 + |f|^2)^2 in the w chart.

    Computed projectively as 4 |dP Q - P dQ|^2 / (|P|^2 + |Q|^2)^2, which is
    finite everywhere, poles included.  Vanishes in the limit at infinity.
    Accepts a scalar or an ndarray of points.
    """
    if np.isscalar(w) or isinstance(w, complex):
        if _is_inf(w):
            return 0.0
        return float(_area_density_arrays(spec, complex(w)))
    return _area_density_arrays(spec, w)


def sphere_density(spec: RationalMapSpec, w) -> Union[float, np.ndarray]:
    """Unsigned Jacobian density of the sphere map at the direction with
    projection w: area_density(w) * (1 + |w|^2)^2 / 4.

    This is the factor that turns the radial flux field into
    density * rhat / r^2; for the identity map it is 1 everywhere.  At
    infinity it equals its value at 0 by the reciprocal symmetry.
    """
    if np.isscalar(w) or isinstance(w, complex):
        if _is_inf(w):
            w = 0.0
        w = complex(w)
        return float(area_density(spec, w) * (1.0 + abs(w) ** 2) ** 2 / 4.0)
    w = np.asarray(w, dtype=complex)
    return _area_density_arrays(spec, w) * (1.0 + np.abs(w) ** 2) ** 2 / 4.0


def factor_scales(spec: RationalMapSpec) -> List[Tuple[complex, float]]:
    """First-quadrant factor points with the relative width of their bump.

    Each factor concentrates its share of the covering mass near its
    position.  The concentration scale is the distance from the factor's
    zero to the nearest pole, relative to the modulus: its own inverse
    image as the modulus approaches 1, or an opposite-sign factor close by.
    Quadratures seed cell boundaries bracketing these spots; without the
    bracket a tight zero/pole pair hides its mass between the nodes of a
    large cell.
    """
    points: List[Tuple[complex, int]] = (
        [(complex(r, 0.0), sg) for r, sg in spec.real_factors]
        + [(complex(0.0, s), sg) for s, sg in spec.imag_factors]
        + [(complex(abs(t.real), abs(t.imag)), sg) for t, sg in spec.complex_factors]
    )
    out: List[Tuple[complex, float]] = []
    for i, (w0, sg) in enumerate(points):
        m = abs(w0)
        delta = (1.0 - m * m) / m
        for j, (w1, sg1) in enumerate(points):
            if j != i and sg1 == -sg:
                delta = min(delta, abs(w0 - w1) / m)
        out.append((w0, delta))
    return out


def bracket_offsets(delta: float, span: float) -> List[float]:
    """Geometric ladder of bracket distances from a bump of relative size
    delta out to a quarter of the cell span.

    The mass of a tight zero/pole pair decays like a fourth-power tail, so
    a single bracket at the bump scale leaves annuli wider than any node
    gap; the ladder keeps each annulus comparable to its inner radius.
    """
    out: List[float] = []
    d = 2.0 * delta
    while True:
        out.append(d)
        if d >= 0.25 * span:
            return out
        d *= 4.0


def flux_field(spec: RationalMapSpec, r: Sequence[float]) -> np.ndarray:
    """Divergence-free topological flux D at a point.

    D(r) = sign * density(rhat) * rhat / |r|^2 with the sign negative for
    anticonformal orientation (the sphere map reverses orientation).  For
    the identity map this is r / |r|^3.
    """
    pt = np.asarray(r, dtype=float)
    if pt.shape != (3,):
        raise UndefinedAtVertexError(f"expected a 3-vector, got shape {pt.shape}")
    rr = float(np.dot(pt, pt))
    if rr == 0.0:
        raise UndefinedAtVertexError("the flux field has no limit at the box vertex")
    norm = math.sqrt(rr)
    w = complex((pt[0] + 1j * pt[1]) / (norm + pt[2])) if norm + pt[2] != 0.0 else complex(math.inf, 0.0)
    dens = sphere_density(spec, w)
    sign = -1.0 if spec.is_anticonformal else 1.0
    return sign * dens * pt / norm**3


@dataclass(frozen=True)
class DirectorSample:
    """Director, flux, and chart density evaluated at one point."""

    position: Tuple[float, float, float]
    n: np.ndarray
    D: np.ndarray
    density: float


def director_sample(spec: RationalMapSpec, r: Sequence[float]) -> DirectorSample:
    pt = tuple(float(v) for v in np.asarray(r, dtype=float))
    n = director(spec, pt)
    D = flux_field(spec, pt)
    norm = math.sqrt(sum(v * v for v in pt))
    w = complex((pt[0] + 1j * pt[1]) / (norm + pt[2])) if norm + pt[2] != 0.0 else complex(math.inf, 0.0)
    return DirectorSample(pt, n, D, float(area_density(spec, w)))
