"""Families of parallelly translated weighted hyperplanes.

A family is given by linear parts ``g_j(t) = b_j . t`` and nonzero weights
``a_j``; the hyperplane ``H_j(z)`` in the fiber over ``z`` is ``z_j + g_j = 0``.
Index order is the input order throughout, and every sign convention
(standard bases, relation signs) derives from it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import exact
from .exact import to_fraction

Subset = tuple[int, ...]


@dataclass(frozen=True)
class ArrangementFamily:
    """Linear parts, weights and labels of a parallel-translation family."""

    k: int
    n: int
    linear_parts: tuple[tuple[Fraction, ...], ...]
    weights: tuple[Fraction, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(to_fraction(x) for x in row) for row in self.linear_parts)
        weights = tuple(to_fraction(a) for a in self.weights)
        labels = tuple(self.labels) or tuple(f"H{j + 1}" for j in range(self.n))
        object.__setattr__(self, "linear_parts", rows)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "labels", labels)
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.n <= self.k:
            raise ValueError(f"need n > k, got n={self.n}, k={self.k}")
        if len(rows) != self.n or any(len(r) != self.k for r in rows):
            raise ValueError(f"linear_parts must be an {self.n}x{self.k} matrix")
        if len(weights) != self.n:
            raise ValueError(f"expected {self.n} weights, got {len(weights)}")
        if any(all(x == 0 for x in row) for row in rows):
            raise ValueError("every linear part must be nonzero")
        if any(a == 0 for a in weights):
            raise ValueError("every weight must be nonzero")
        if len(labels) != self.n:
            raise ValueError(f"expected {self.n} labels, got {len(labels)}")
        if exact.rank(self.matrix) != self.k:
            raise ValueError("linear parts must span a k-dimensional space (essential family)")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], weights: Sequence | None = None,
                  labels: Sequence[str] = ()) -> "ArrangementFamily":
        rows = [list(r) for r in rows]
        n, k = len(rows), len(rows[0])
        if weights is None:
            weights = [1] * n
        return cls(k=k, n=n, linear_parts=tuple(map(tuple, rows)),
                   weights=tuple(weights), labels=tuple(labels))

    @cached_property
    def matrix(self) -> np.ndarray:
        return exact.qmatrix(self.linear_parts)

    def with_weights(self, weights: Sequence) -> "ArrangementFamily":
        return ArrangementFamily(self.k, self.n, self.linear_parts, tuple(weights), self.labels)

    def rank_of(self, subset: Sequence[int]) -> int:
        if not subset:
            return 0
        return exact.rank(self.matrix[list(subset), :])

    def is_independent(self, subset: Sequence[int]) -> bool:
        return self.rank_of(subset) == len(subset)

    def subset_det(self, subset: Sequence[int]) -> Fraction:
        """Determinant of the k x k block of linear parts (rows in given order)."""
        return exact.det(self.matrix[list(subset), :])

    def f(self, z: Sequence, t: Sequence) -> list:
        """Values ``f_j(z, t) = z_j + b_j . t`` (exact if inputs are exact)."""
        return [z[j] + sum(b * ti for b, ti in zip(self.linear_parts[j], t)) for j in range(self.n)]


@dataclass(frozen=True)
class Circuit:
    """Minimal dependent subset with its normalized syzygy coefficients."""

    support: Subset
    syzygy: tuple[Fraction, ...]

    def coefficient(self, j: int) -> Fraction:
        try:
            return self.syzygy[self.support.index(j)]
        except ValueError:
            return Fraction(0)

    def evaluate(self, z: Sequence):
        """The discriminant covector ``f_C(z) = sum_i lambda_i z_i``."""
        return sum(lam * z[i] for i, lam in zip(self.support, self.syzygy))

    def covector(self, n: int) -> list[Fraction]:
        out = [Fraction(0)] * n
        for i, lam in zip(self.support, self.syzygy):
            out[i] = lam
        return out


def _minimal_dependent(family: ArrangementFamily, subset: Subset) -> Circuit:
    """The unique circuit inside a subset of nullity one."""
    ker = exact.nullspace(family.matrix[list(subset), :].T)
    assert ker.shape[1] == 1, "expected a one-dimensional syzygy space"
    lam = ker[:, 0]
    support = tuple(j for j, c in zip(subset, lam) if c != 0)
    coeffs = [c for c in lam if c != 0]
    lead = coeffs[0]
    return Circuit(support, tuple(c / lead for c in coeffs))


def enumerate_circuits(family: ArrangementFamily) -> list[Circuit]:
    """All circuits of the vector matroid of the rows, sorted by support."""
    found: dict[Subset, Circuit] = {}
    for size in range(0, family.k + 1):
        for basis in itertools.combinations(range(family.n), size):
            if not family.is_independent(basis):
                continue
            for j in range(family.n):
                if j in basis:
                    continue
                ext = tuple(sorted(basis + (j,)))
                if family.rank_of(ext) == size:
                    c = _minimal_dependent(family, ext)
                    found.setdefault(c.support, c)
    return [found[s] for s in sorted(found)]


@dataclass(frozen=True)
class FiberClassification:
    kind: str
    vanishing_circuits: tuple[Circuit, ...] = ()

    @property
    def is_good(self) -> bool:
        return self.kind == "good"


def _require_exact(z: Sequence) -> tuple[Fraction, ...]:
    if not exact.is_exact(z):
        raise TypeError("fiber classification needs exact rational z; got floating point values")
    return tuple(Fraction(v) for v in z)


def classify_fiber(family: ArrangementFamily, circuits: Sequence[Circuit], z: Sequence) -> FiberClassification:
    z = _require_exact(z)
    if len(z) != family.n:
        raise ValueError(f"fiber point must have {family.n} coordinates")
    vanishing = tuple(c for c in circuits if c.evaluate(z) == 0)
    return FiberClassification("bad" if vanishing else "good", vanishing)


def independent_subsets(family: ArrangementFamily, p: int) -> list[Subset]:
    if not 0 <= p <= family.k:
        raise ValueError(f"p must lie in [0, {family.k}], got {p}")
    return [s for s in itertools.combinations(range(family.n), p) if family.is_independent(s)]


def is_consistent(family: ArrangementFamily, z: Sequence, subset: Sequence[int]) -> bool:
    """Whether the hyperplanes indexed by ``subset`` have a common point."""
    subset = list(subset)
    if not subset:
        return True
    b = family.matrix[subset, :]
    aug = np.hstack([b, exact.qvector([z[j] for j in subset]).reshape(-1, 1)])
    return exact.rank(b) == exact.rank(aug)


@dataclass(frozen=True)
class IntersectionPoset:
    """Flats as closed index sets with their dimension and Möbius value."""

    edges: tuple[tuple[frozenset, int, int], ...] = field(default_factory=tuple)

    @property
    def euler_characteristic(self) -> int:
        return sum(mu for _, _, mu in self.edges)

    def characteristic_polynomial(self) -> dict[int, int]:
        coeffs: dict[int, int] = {}
        for _, dim, mu in self.edges:
            coeffs[dim] = coeffs.get(dim, 0) + mu
        return coeffs


def intersection_poset(family: ArrangementFamily, z: Sequence) -> IntersectionPoset:
    z = _require_exact(z)
    b = family.matrix
    aug_rows = np.hstack([b, exact.qvector(z).reshape(-1, 1)])

    def closure(subset: frozenset) -> frozenset | None:
        rows = sorted(subset)
        sys_aug = aug_rows[rows, :]
        r = exact.rank(b[rows, :])
        if exact.rank(sys_aug) != r:
            return None
        return frozenset(j for j in range(family.n)
                         if exact.rank(np.vstack([sys_aug, aug_rows[j:j + 1, :]])) == r)

    dims: dict[frozenset, int] = {frozenset(): family.k}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for flat in frontier:
            for j in range(family.n):
                if j in flat:
                    continue
                new = closure(flat | {j})
                if new is not None and new not in dims:
                    dims[new] = family.k - family.rank_of(sorted(new))
                    nxt.append(new)
        frontier = nxt

    order = sorted(dims, key=lambda s: (-dims[s], sorted(s)))
    mobius: dict[frozenset, int] = {}
    for flat in order:
        if not flat:
            mobius[flat] = 1
            continue
        # flats strictly containing this one (as subspaces) have index sets strictly inside
        mobius[flat] = -sum(mu for other, mu in mobius.items() if other < flat)
    return IntersectionPoset(tuple((s, dims[s], mobius[s]) for s in order))


def euler_characteristic(family: ArrangementFamily, z: Sequence) -> int:
    """Euler characteristic of the complement of the fiber arrangement."""
    return intersection_poset(family, z).euler_characteristic


def weight_at_infinity(family: ArrangementFamily) -> Fraction:
    return -sum(family.weights)


def unbalanced_status(family: ArrangementFamily) -> str:
    """``"unbalanced"`` when certified (positive weights), ``"balanced"`` when the
    hyperplane at infinity has weight zero, else ``"unknown"``."""
    if all(a > 0 for a in family.weights):
        return "unbalanced"
    if weight_at_infinity(family) == 0:
        return "balanced"
    return "unknown"
