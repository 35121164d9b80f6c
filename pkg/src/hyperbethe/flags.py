"""Top-degree flag space, Orlik-Solomon covectors and the contravariant form.

Everything here works in the standard basis of a good fiber: ``F(H_J)`` for
sorted independent ``k``-subsets ``J``.  Degenerate-fiber subspaces are
realized as subspaces of that same space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import exact
from .arrangement import (ArrangementFamily, Circuit, Subset, classify_fiber,
                          independent_subsets, is_consistent)


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i, j in itertools.combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class _Coordinates:
    coordinates: Mapping[Subset, object] = field(default_factory=dict)

    @classmethod
    def from_tuple(cls, indices: Sequence[int], coeff=Fraction(1)):
        """Element for an unsorted tuple, with the skew reindexing sign applied."""
        sign = permutation_sign(indices)
        if sign == 0:
            return cls({})
        return cls({tuple(sorted(indices)): sign * coeff})

    @classmethod
    def from_array(cls, basis: Sequence[Subset], values: Iterable):
        return cls({J: v for J, v in zip(basis, values) if v != 0})

    def as_array(self, basis: Sequence[Subset]) -> np.ndarray:
        unknown = set(self.coordinates) - set(basis)
        if unknown:
            raise KeyError(f"coordinates outside the basis: {sorted(unknown)}")
        zero = Fraction(0)
        return np.array([self.coordinates.get(J, zero) for J in basis], dtype=object)

    def __add__(self, other):
        out = dict(self.coordinates)
        for J, v in other.coordinates.items():
            out[J] = out.get(J, 0) + v
        return type(self)({J: v for J, v in out.items() if v != 0})

    def scale(self, c):
        return type(self)({J: c * v for J, v in self.coordinates.items()})


class FlagVector(_Coordinates):
    """Coordinates of an element of ``F^k`` in the standard flag basis."""


class CovectorForm(_Coordinates):
    """Coordinates of an element of ``OS^k`` in the basis ``(H_J)``."""


class FlagSpace:
    """Standard bases of ``OS^p`` / ``F^p`` of a family at a good fiber."""

    def __init__(self, family: ArrangementFamily):
        self.family = family
        self.k = family.k

    def basis(self, p: int | None = None) -> list[Subset]:
        return self._bases[self.k if p is None else p]

    @cached_property
    def _bases(self) -> dict[int, list[Subset]]:
        return {p: independent_subsets(self.family, p) for p in range(self.k + 1)}

    @cached_property
    def index(self) -> dict[Subset, int]:
        return {J: i for i, J in enumerate(self.basis())}

    @property
    def dim(self) -> int:
        return len(self.basis())

    def differential(self, p: int | None = None) -> np.ndarray:
        """Matrix of ``d^(a): OS^{p-1} -> OS^p`` (rows p-subsets, columns (p-1)-subsets)."""
        p = self.k if p is None else p
        if not 1 <= p <= self.k:
            raise ValueError(f"degree must lie in [1, {self.k}]")
        rows, cols = self.basis(p), self.basis(p - 1)
        row_index = {J: i for i, J in enumerate(rows)}
        d = exact.zeros(len(rows), len(cols))
        a = self.family.weights
        for c, lower in enumerate(cols):
            for j in range(self.family.n):
                if j in lower:
                    continue
                target = tuple(sorted(lower + (j,)))
                r = row_index.get(target)
                if r is None:
                    continue
                # (H_j, H_lower...) -> sorted: move j past the smaller entries
                sign = -1 if sum(1 for i in lower if i < j) % 2 else 1
                d[r, c] += sign * a[j]
        return d

    @cached_property
    def gram(self) -> "ContravariantGram":
        a = self.family.weights
        diag = []
        for J in self.basis():
            w = Fraction(1)
            for j in J:
                w *= a[j]
            diag.append(w)
        return ContravariantGram(tuple(self.basis()), tuple(diag))

    @cached_property
    def delta(self) -> np.ndarray:
        """Matrix of the dual differential ``F^k -> F^{k-1}``."""
        return self.differential().T

    @cached_property
    def sing_matrix(self) -> np.ndarray:
        return exact.nullspace(self.delta, n_cols=self.dim)

    def to_vector(self, values: Iterable) -> FlagVector:
        return FlagVector.from_array(self.basis(), values)


def weighted_differential(family: ArrangementFamily, p: int | None = None) -> np.ndarray:
    return FlagSpace(family).differential(p)


@dataclass(frozen=True)
class ContravariantGram:
    """Diagonal contravariant form in the standard basis."""

    basis: tuple[Subset, ...]
    diagonal: tuple

    @property
    def matrix(self) -> np.ndarray:
        m = exact.zeros(len(self.basis), len(self.basis))
        for i, w in enumerate(self.diagonal):
            m[i, i] = w
        return m

    def pair_arrays(self, u: Sequence, v: Sequence):
        if len(u) != len(self.basis) or len(v) != len(self.basis):
            raise ValueError(f"expected vectors of length {len(self.basis)}")
        return sum(w * x * y for w, x, y in zip(self.diagonal, u, v))

    def restricted(self, basis_matrix: np.ndarray) -> np.ndarray:
        """Gram matrix ``B^T S B`` of the form on a subspace."""
        d = np.array(self.diagonal, dtype=object).reshape(-1, 1)
        return basis_matrix.T @ (d * basis_matrix)


def contravariant_pair(gram: ContravariantGram, u, v):
    """``S^(a)(u, v)``; accepts FlagVectors or coordinate arrays."""
    if isinstance(u, _Coordinates):
        u = u.as_array(gram.basis)
    if isinstance(v, _Coordinates):
        v = v.as_array(gram.basis)
    return gram.pair_arrays(list(u), list(v))


@dataclass
class SingBasis:
    """Basis of a singular subspace, stored as columns in the standard basis."""

    basis: tuple[Subset, ...]
    matrix: np.ndarray
    ambient: str = "good"

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def vectors(self) -> list[FlagVector]:
        return [FlagVector.from_array(self.basis, self.matrix[:, i]) for i in range(self.dim)]

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "dim": self.dim,
            "basis": [
                [{"subset": [j + 1 for j in J], "coeff": exact.fraction_str(c)}
                 for J, c in sorted(v.coordinates.items())]
                for v in self.vectors
            ],
        }


def sing_basis(family: ArrangementFamily) -> SingBasis:
    space = FlagSpace(family)
    return SingBasis(tuple(space.basis()), space.sing_matrix, "good")


def relation_matrix(family: ArrangementFamily, z0: Sequence) -> np.ndarray:
    """Rows: new top-degree OS relations of the fiber over ``z0`` in the good-fiber basis."""
    space = FlagSpace(family)
    rows = []
    for sub in itertools.combinations(range(family.n), family.k + 1):
        if not is_consistent(family, z0, sub):
            continue
        row = exact.zeros(space.dim)
        for i in range(len(sub)):
            face = sub[:i] + sub[i + 1:]
            col = space.index.get(face)
            if col is not None:
                row[col] += (-1) ** (i + 1)
        rows.append(row)
    if not rows:
        return exact.zeros(0, space.dim)
    return np.vstack(rows)


@dataclass
class DegenerateSubspaces:
    flags: SingBasis
    sing: SingBasis
    relations: np.ndarray


def degenerate_subspaces(family: ArrangementFamily, circuits: Sequence[Circuit], z0: Sequence) -> DegenerateSubspaces:
    """``F^k(A(z0))`` and ``Sing F^k(A(z0))`` inside the good-fiber space."""
    if classify_fiber(family, circuits, z0).is_good:
        raise ValueError("z0 is a good fiber; use sing_basis instead")
    space = FlagSpace(family)
    rel = relation_matrix(family, z0)
    f_basis = exact.nullspace(rel, n_cols=space.dim)
    assert exact.is_zero(rel @ f_basis), "relation annihilator is inconsistent"
    ker = exact.nullspace(space.delta @ f_basis, n_cols=f_basis.shape[1])
    sing0 = f_basis @ ker
    basis = tuple(space.basis())
    return DegenerateSubspaces(SingBasis(basis, f_basis, "degenerate"),
                               SingBasis(basis, sing0, "degenerate"), rel)
