"""Shared random generators for property tests.

All randomness flows through an explicit numpy Generator so every test run
is reproducible from its seed.
"""

import math

import numpy as np

from nemprism import InvalidSpecError, RationalMapSpec, make_prism


def random_spec(rng, max_degree=9):
    """Draw a valid spec of degree <= max_degree.

    Factor positions stay away from 0 and 1 (constructions degenerate at
    both limits) and complex factors keep off the axes.  Rejection handles
    the rare cancelling-pair draw.
    """
    while True:
        n = int(rng.choice([-3, -1, 1, 3]))
        budget = (max_degree - abs(n)) // 2
        c = int(rng.integers(0, budget // 2 + 1))
        rem = budget - 2 * c
        a = int(rng.integers(0, rem + 1))
        b = int(rng.integers(0, rem - a + 1))
        eps = int(rng.choice([-1, 1]))
        real = tuple(
            (float(rng.uniform(0.08, 0.92)), int(rng.choice([-1, 1])))
            for _ in range(a)
        )
        imag = tuple(
            (float(rng.uniform(0.08, 0.92)), int(rng.choice([-1, 1])))
            for _ in range(b)
        )
        comp = []
        for _ in range(c):
            m = float(rng.uniform(0.15, 0.85))
            th = float(rng.uniform(0.15, math.pi / 2 - 0.15))
            comp.append(
                (complex(m * math.cos(th), m * math.sin(th)), int(rng.choice([-1, 1])))
            )
        orientation = "anticonformal" if rng.random() < 0.3 else "conformal"
        try:
            return RationalMapSpec(eps, n, real, imag, tuple(comp), orientation)
        except InvalidSpecError:
            continue


def random_prism(rng, lo=0.5, hi=4.0):
    d = np.sort(rng.uniform(lo, hi, size=3))[::-1]
    return make_prism(float(d[0]), float(d[1]), float(d[2]))
