"""Circuit operators, geometric Hamiltonians and their bad-fiber regularizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import exact
from .arrangement import ArrangementFamily, Circuit, classify_fiber, enumerate_circuits
from .flags import FlagSpace, degenerate_subspaces, permutation_sign


class VerificationError(AssertionError):
    """A checked identity failed; ``tag`` names the statement that failed."""

    def __init__(self, tag: str, message: str):
        super().__init__(f"[{tag}] {message}")
        self.tag = tag


def circuit_operator(family: ArrangementFamily, circuit: Circuit, space: FlagSpace | None = None) -> np.ndarray:
    """Matrix of ``L_C`` on the standard basis of ``F^k``."""
    space = space or FlagSpace(family)
    if circuit.support not in {c.support for c in enumerate_circuits(family)}:
        raise ValueError(f"{circuit.support} is not a circuit of the family")
    return _circuit_matrix(space, circuit)


def _circuit_matrix(space: FlagSpace, circuit: Circuit) -> np.ndarray:
    a = space.family.weights
    C = circuit.support
    r = len(C)
    L = exact.zeros(space.dim, space.dim)
    for col, J in enumerate(space.basis()):
        common = [i for i in C if i in J]
        if len(common) < r - 1:
            continue
        m = next(pos for pos, i in enumerate(C, start=1) if i not in J)
        rest = tuple(j for j in J if j not in C)
        # F(J) = sign * F(C_m, rest)
        sign = permutation_sign(tuple(common) + rest)
        pref = sign * (-1) ** m
        for l, il in enumerate(C, start=1):
            face = tuple(i for i in C if i != il) + rest
            s = permutation_sign(face)
            row = space.index[tuple(sorted(face))]
            L[row, col] += pref * (-1) ** l * a[il] * s
    return L


def restrict(op: np.ndarray, basis: np.ndarray, tag: str = "invariance") -> np.ndarray:
    """Matrix of ``op`` on span(basis); raises if the span is not invariant."""
    try:
        return exact.restrict_to_span(op, basis)
    except ValueError as exc:
        raise VerificationError(tag, "operator does not preserve the subspace") from exc


@dataclass(frozen=True)
class TangentDirection:
    xi: tuple[Fraction, ...]


class HamiltonianFamily:
    """Circuit operators of a family and the Hamiltonians ``K_j(z)`` built from them.

    ``kappa`` is kept only as a label; the operators do not depend on it.
    """

    def __init__(self, family: ArrangementFamily, kappa: str = "kappa"):
        self.family = family
        self.space = FlagSpace(family)
        self.circuits = enumerate_circuits(family)
        self.kappa = kappa
        self._cache: dict = {}

    @cached_property
    def operators(self) -> dict[tuple[int, ...], np.ndarray]:
        return {c.support: _circuit_matrix(self.space, c) for c in self.circuits}

    @cached_property
    def _sparse(self) -> dict[tuple[int, ...], list]:
        return {s: [(r, c, m[r, c]) for r, c in zip(*np.nonzero(m != 0))] for s, m in self.operators.items()}

    @cached_property
    def sing_matrix(self) -> np.ndarray:
        return self.space.sing_matrix

    def _combination(self, coeffs: dict[tuple[int, ...], object]) -> np.ndarray:
        out = exact.zeros(self.space.dim, self.space.dim)
        for support, c in coeffs.items():
            if c != 0:
                for r, col, v in self._sparse[support]:
                    out[r, col] += c * v
        return out

    def _require_good(self, z):
        cls = classify_fiber(self.family, self.circuits, z)
        if not cls.is_good:
            raise ValueError("z lies on the discriminant; use split_at for bad fibers")

    def hamiltonian_at(self, z: Sequence, j: int) -> np.ndarray:
        """``K_j(z) = sum_C lambda^C_j / f_C(z) L_C`` at a good fiber (exact)."""
        key = ("K", tuple(z), j)
        if key not in self._cache:
            self._require_good(z)
            self._cache[key] = self._combination(
                {c.support: c.coefficient(j) / c.evaluate(z) for c in self.circuits})
        return self._cache[key]

    def _derivative_coeffs(self, z: Sequence, j: int, i: int) -> dict:
        return {c.support: -c.coefficient(j) * c.coefficient(i) / c.evaluate(z) ** 2 for c in self.circuits}

    def hamiltonian_derivative(self, z: Sequence, j: int, i: int) -> np.ndarray:
        """``dK_j/dz_i`` using ``d(lambda_j / f_C)/dz_i = -lambda_j lambda_i / f_C^2``."""
        return self._combination(self._derivative_coeffs(z, j, i))

    def on_sing(self, op: np.ndarray, tag: str = "L_C preserve Sing V") -> np.ndarray:
        return restrict(op, self.sing_matrix, tag)

    def verify_flatness(self, z: Sequence, i: int, j: int) -> dict:
        """Exact zero-curvature and commutativity check on ``Sing V``."""
        self._require_good(z)
        B = self.sing_matrix
        # both derivatives are combinations of the L_C; subtract coefficientwise first
        dji, dij = self._derivative_coeffs(z, j, i), self._derivative_coeffs(z, i, j)
        curv = self._combination({s: dji[s] - dij[s] for s in dji})
        curv_sing = exact.matmul(curv, B)
        ki = self.on_sing_at(z, i)
        kj = self.on_sing_at(z, j)
        report = {"i": i, "j": j, "curvature_zero": exact.is_zero(curv_sing),
                  "commutator_zero": exact.commutes(ki, kj)}
        if not report["curvature_zero"]:
            r, c = next(zip(*np.nonzero(curv_sing != 0)))
            raise VerificationError("zero curvature and commuting K_j on Sing V",
                                    f"curvature entry ({r},{c}) = {curv_sing[r, c]}")
        if not report["commutator_zero"]:
            comm = exact.commutator(ki, kj)
            r, c = next(zip(*np.nonzero(comm != 0)))
            raise VerificationError("zero curvature and commuting K_j on Sing V",
                                    f"[K_{i+1},K_{j+1}] entry ({r},{c}) = {comm[r, c]}")
        return report

    def on_sing_at(self, z: Sequence, j: int) -> np.ndarray:
        key = ("KS", tuple(z), j)
        if key not in self._cache:
            self._cache[key] = self.on_sing(self.hamiltonian_at(z, j))
        return self._cache[key]

    def is_symmetric(self, op: np.ndarray) -> bool:
        d = np.array(self.space.gram.diagonal, dtype=object).reshape(-1, 1)
        so = d * op
        return exact.is_zero(so - so.T)

    # bad fibers

    def vanishing_circuits(self, z0: Sequence) -> list[Circuit]:
        cls = classify_fiber(self.family, self.circuits, z0)
        if cls.is_good:
            raise ValueError("z0 is a good fiber")
        return list(cls.vanishing_circuits)

    def split_at(self, z0: Sequence, j: int) -> tuple[dict, np.ndarray]:
        """Polar part ``{C: lambda^C_j L_C}`` over vanishing circuits and ``K_j^1(z0)``."""
        vanish = {c.support for c in self.vanishing_circuits(z0)}
        polar = {c.support: c.coefficient(j) * self.operators[c.support]
                 for c in self.circuits if c.support in vanish and c.coefficient(j) != 0}
        regular = self._combination(
            {c.support: c.coefficient(j) / c.evaluate(z0) for c in self.circuits if c.support not in vanish})
        return polar, regular

    def regular_part(self, z0: Sequence, j: int) -> np.ndarray:
        key = ("K1", tuple(z0), j)
        if key not in self._cache:
            self._cache[key] = self.split_at(z0, j)[1]
        return self._cache[key]

    def tangent_directions(self, z0: Sequence) -> list[TangentDirection]:
        vanish = self.vanishing_circuits(z0)
        rows = exact.qmatrix([c.covector(self.family.n) for c in vanish])
        ker = exact.nullspace(rows)
        return [TangentDirection(tuple(ker[:, i])) for i in range(ker.shape[1])]

    def naive_hamiltonian(self, xi: Sequence, z0: Sequence) -> np.ndarray:
        xi = tuple(exact.to_fraction(x) for x in (xi.xi if isinstance(xi, TangentDirection) else xi))
        for c in self.vanishing_circuits(z0):
            if sum(x * lam for x, lam in zip(xi, c.covector(self.family.n))) != 0:
                raise ValueError("xi is not tangent to the discriminant stratum through z0")
        out = exact.zeros(self.space.dim, self.space.dim)
        for j, x in enumerate(xi):
            if x != 0:
                out = out + x * self.regular_part(z0, j)
        return out

    def regularized_hamiltonians(self, z0: Sequence, sing0: np.ndarray | None = None) -> "RegularizedHamiltonians":
        if sing0 is None:
            sing0 = degenerate_subspaces(self.family, self.circuits, z0).sing.matrix
        else:
            self.vanishing_circuits(z0)
        return RegularizedHamiltonians.build(self, z0, sing0)


@dataclass
class RegularizedHamiltonians:
    """``pr K_j^1(z0)`` restricted to ``Sing F^k(A(z0))`` in the coordinates of ``basis``."""

    basis: np.ndarray
    gram: np.ndarray
    operators: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def build(cls, hf: HamiltonianFamily, z0: Sequence, sing0: np.ndarray) -> "RegularizedHamiltonians":
        gram = hf.space.gram.restricted(sing0)
        d = sing0.shape[1]
        if d and exact.det(gram) == 0:
            raise VerificationError("S nondegenerate on Sing F^k(A(z0))",
                                    "contravariant form is degenerate on Sing F^k(A(z0))")
        ops = []
        if d:
            gram_inv = exact.inverse(gram)
            s = np.array(hf.space.gram.diagonal, dtype=object).reshape(-1, 1)
            projector = gram_inv @ (s * sing0).T
            for j in range(hf.family.n):
                ops.append(projector @ (hf.regular_part(z0, j) @ sing0))
        else:
            ops = [exact.zeros(0, 0) for _ in range(hf.family.n)]
        return cls(sing0, gram, ops)

    def commute(self) -> bool:
        return all(exact.is_zero(exact.commutator(a, b))
                   for idx, a in enumerate(self.operators) for b in self.operators[idx + 1:])

    def symmetric(self) -> bool:
        return all(exact.is_zero(self.gram @ m - (self.gram @ m).T) for m in self.operators)

    def commutator_norms(self) -> list[float]:
        out = []
        for idx, a in enumerate(self.operators):
            for b in self.operators[idx + 1:]:
                c = exact.to_float(exact.commutator(a, b))
                out.append(float(np.abs(c).max()) if c.size else 0.0)
        return out
