"""Small named families used by tests, suites and the CLI."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .arrangement import ArrangementFamily, classify_fiber, enumerate_circuits

Q = Fraction


def triangle(weights: Sequence = (1, 1, 1)):
    """``t1, t2, 1 - t1 - t2``."""
    fam = ArrangementFamily.from_rows([[1, 0], [0, 1], [-1, -1]], weights)
    return fam, [Q(0), Q(0), Q(1)]


def pair(weights: Sequence = (2, 3), z: Sequence = (0, -1)):
    """Two points on a line: ``t + z1``, ``t + z2``."""
    fam = ArrangementFamily.from_rows([[1], [1]], weights)
    return fam, [Q(v) for v in z]


def four_lines(weights: Sequence = (1, 1, 1, 1)):
    """``y, y - x, y + x, x - 1`` at the bad fiber where the first three meet."""
    fam = ArrangementFamily.from_rows([[0, 1], [-1, 1], [1, 1], [1, 0]], weights)
    return fam, [Q(0), Q(0), Q(0), Q(-1)]


def four_generic_lines(weights: Sequence = (1, 1, 1, 1)):
    fam = ArrangementFamily.from_rows([[1, 0], [0, 1], [1, 1], [1, -1]], weights)
    return fam, [Q(0), Q(0), Q(-1), Q(-1, 3)]


def _random_rational(rng, lo=-4, hi=4, den=7):
    return Q(int(rng.integers(lo * den, hi * den + 1)), int(rng.integers(1, den + 1)))


def random_family(seed: int, n_max: int = 8, k_max: int = 3, k: int | None = None,
                  positive: bool = True, good: bool = True):
    """Seeded random real family with rational fiber point.

    Linear parts are small integer vectors; the family is redrawn until it is
    essential, and ``z`` is redrawn until the fiber is good (when requested).
    """
    rng = np.random.default_rng(seed)
    while True:
        kk = k if k is not None else int(rng.integers(1, k_max + 1))
        n = int(rng.integers(kk + 1, n_max + 1))
        rows = rng.integers(-3, 4, size=(n, kk)).tolist()
        if any(all(x == 0 for x in r) for r in rows):
            continue
        if positive:
            weights = [Q(int(rng.integers(1, 10)), int(rng.integers(1, 5))) for _ in range(n)]
        else:
            weights = [Q(int(rng.choice([-1, 1])) * int(rng.integers(1, 10)), int(rng.integers(1, 5))) for _ in range(n)]
        try:
            fam = ArrangementFamily.from_rows(rows, weights)
        except ValueError:
            continue
        circuits = enumerate_circuits(fam)
        for _ in range(50):
            z = [_random_rational(rng) for _ in range(n)]
            if not good or classify_fiber(fam, circuits, z).is_good:
                return fam, z
