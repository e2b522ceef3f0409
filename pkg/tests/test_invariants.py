import math

import numpy as np
import pytest

from helpers import random_spec

from nemprism import (
    RationalMapSpec,
    TopologicalInvariants,
    director,
    edge_orientations,
    invariants_of,
    invariants_report,
    kink_numbers,
    numeric_kink_x,
    numeric_kink_y,
    numeric_kink_z,
    numeric_trapped_area,
    omega_min,
    trapped_area,
)


def test_unwrapped_invariants():
    inv = invariants_of(RationalMapSpec(1, 1))
    assert (inv.e_x, inv.e_y, inv.e_z) == (1, 1, 1)
    assert (inv.k_x, inv.k_y, inv.k_z) == (0, 0, 0)
    assert inv.omega0 == pytest.approx(math.pi / 2, abs=1e-15)
    assert inv.omega_min == pytest.approx(math.pi / 2, abs=1e-15)


def test_single_imag_factor_invariants():
    inv = invariants_of(RationalMapSpec(1, 1, imag_factors=((0.5, 1),)))
    assert (inv.e_x, inv.e_y, inv.e_z) == (1, -1, 1)
    assert (inv.k_x, inv.k_y, inv.k_z) == (0, 0, -1)
    assert inv.omega0 == pytest.approx(3 * math.pi / 2, abs=1e-15)
    assert inv.omega_min == pytest.approx(5 * math.pi / 2, abs=1e-15)


def test_trapped_area_is_half_degree():
    rng = np.random.default_rng(67)
    for _ in range(25):
        spec = random_spec(rng)
        a = len(spec.real_factors)
        b = len(spec.imag_factors)
        c = len(spec.complex_factors)
        degree = abs(spec.n) + 2 * (a + b) + 4 * c
        expected = 0.5 * degree * math.pi
        if spec.orientation == "anticonformal":
            expected = -expected
        assert trapped_area(spec) == pytest.approx(expected, abs=1e-12)


def test_anticonformal_flips():
    args = dict(
        real_factors=((0.4, 1),),
        imag_factors=((0.7, -1),),
        complex_factors=((complex(0.3, 0.5), 1),),
    )
    base = invariants_of(RationalMapSpec(1, 3, **args))
    anti = invariants_of(
        RationalMapSpec(1, 3, orientation="anticonformal", **args)
    )
    assert anti.e_x == base.e_x
    assert anti.e_y == -base.e_y
    assert anti.e_z == base.e_z
    assert anti.k_x == -base.k_x
    assert anti.k_y == base.k_y
    assert anti.k_z == -base.k_z
    assert anti.omega0 == -base.omega0
    assert anti.omega_min == base.omega_min


def test_omega_min_formula():
    assert omega_min((0, 0, 0)) == pytest.approx(math.pi / 2)
    assert omega_min((0, 0, -1)) == pytest.approx(2 * math.pi * 1.25)
    assert omega_min((1, -2, 3)) == pytest.approx(2 * math.pi * 6.25)


def test_edge_orientations_match_axis_directors():
    """The closed-form edge signs are visible in the field on the axes."""
    rng = np.random.default_rng(61)
    for _ in range(15):
        spec = random_spec(rng)
        ex, ey, ez = edge_orientations(spec)
        assert director(spec, (1.0, 0.0, 0.0)) == pytest.approx(
            [ex, 0, 0], abs=1e-10
        )
        assert director(spec, (0.0, 1.0, 0.0)) == pytest.approx(
            [0, ey, 0], abs=1e-10
        )
        assert director(spec, (0.0, 0.0, 1.0)) == pytest.approx(
            [0, 0, ez], abs=1e-10
        )


def test_numeric_trapped_area_agrees():
    rng = np.random.default_rng(71)
    for _ in range(10):
        spec = random_spec(rng)
        res = numeric_trapped_area(spec, tol=1e-7)
        assert res.value == pytest.approx(trapped_area(spec), abs=1e-6)
        assert res.error_estimate <= 1e-7


def test_numeric_kinks_agree():
    rng = np.random.default_rng(73)
    for _ in range(10):
        spec = random_spec(rng)
        kx, ky, kz = kink_numbers(spec)
        assert numeric_kink_x(spec) == kx
        assert numeric_kink_y(spec) == ky
        assert numeric_kink_z(spec) == kz


def test_winding_regression_close_factor_triple():
    # three imaginary factors with opposite-sign neighbors 2e-3 apart; the
    # full phase swing happens inside a 2e-4 window on the tracking path
    spec = RationalMapSpec(
        1,
        -1,
        imag_factors=(
            (0.5434296062461274, -1),
            (0.5645809004058299, -1),
            (0.5398921582411745, 1),
        ),
    )
    assert numeric_kink_x(spec) == kink_numbers(spec)[0] == -1


def test_quadrature_regression_near_pair_off_center():
    # the density bump of this near pair sits between the root-cell nodes
    spec = RationalMapSpec(
        -1,
        3,
        real_factors=(
            (0.10450658475464239, -1),
            (0.0912858067865561, 1),
            (0.49592173357773117, 1),
        ),
        orientation="anticonformal",
    )
    res = numeric_trapped_area(spec, tol=1e-6)
    assert res.value == pytest.approx(trapped_area(spec), abs=1e-5)


def test_close_factor_pairs_resolved():
    # same-position opposite-sign pairs are rejected; nearby ones must work
    for gap in (1e-3, 1e-4, 1e-5):
        spec = RationalMapSpec(
            1, 1, real_factors=((0.5, 1), (0.5 + gap, -1))
        )
        assert numeric_kink_y(spec) == kink_numbers(spec)[1]
        res = numeric_trapped_area(spec, tol=1e-6)
        assert res.value == pytest.approx(trapped_area(spec), abs=1e-5)


def test_invariants_dict_round_trip():
    inv = invariants_of(RationalMapSpec(1, 1, imag_factors=((0.5, 1),)))
    d = inv.to_dict()
    assert d["kz"] == -1 and d["ey"] == -1
    assert TopologicalInvariants.from_dict(d) == inv


def test_invariants_report_numeric_fields():
    spec = RationalMapSpec(1, 1, imag_factors=((0.5, 1),))
    rep = invariants_report(spec)
    inv = invariants_of(spec)
    for key in ("ex", "ey", "ez", "kx", "ky", "kz", "omega0", "omega_min"):
        assert key in rep
    assert rep["kx_numeric"] == inv.k_x
    assert rep["ky_numeric"] == inv.k_y
    assert rep["kz_numeric"] == inv.k_z
    assert rep["omega0_numeric"] == pytest.approx(inv.omega0, abs=1e-5)
