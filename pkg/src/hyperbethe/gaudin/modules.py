"""Tensor products of sl2 / gl2 highest-weight modules in the monomial basis ``F^i v``.

Factor ``b`` has highest weight label ``m_b``: the Dynkin label for sl2, the
first part of the partition ``(m_b, 0)`` for gl2.  A nonnegative integer label
gives the irreducible module with levels ``0..m_b``; any other label gives a
Verma module truncated at ``max_level``.  Operators that preserve the total
level are exact on every level up to the truncation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import exact
from ..hamiltonians import VerificationError


def _is_dominant(m: Fraction) -> bool:
    return m >= 0 and m.denominator == 1


class TensorModule:
    """``V_1 (x) ... (x) V_N`` with per-factor operators and the tensor Shapovalov form."""

    def __init__(self, algebra: str, highest: Sequence, max_level: int | None = None, alpha_sq=2):
        if algebra not in ("sl2", "gl2"):
            raise ValueError("algebra must be 'sl2' or 'gl2'")
        self.algebra = algebra
        self.highest = tuple(exact.to_fraction(m) for m in highest)
        self.alpha_sq = exact.to_fraction(alpha_sq)
        if algebra == "gl2" and any(not _is_dominant(m) for m in self.highest):
            raise ValueError("gl2 factors must be partitions (lambda, 0)")
        if max_level is None and not all(_is_dominant(m) for m in self.highest):
            raise ValueError("Verma factors need a truncation level")
        self.max_level = max_level
        self.tops = tuple(int(m) if _is_dominant(m) else max_level for m in self.highest)
        if max_level is not None:
            self.tops = tuple(min(t, max_level) for t in self.tops)

    @property
    def N(self) -> int:
        return len(self.highest)

    @property
    def is_finite(self) -> bool:
        return all(_is_dominant(m) for m in self.highest) and self.max_level is None

    def states(self, level: int | None = None) -> list[tuple[int, ...]]:
        """Basis states ``F^{i_1} v_1 (x) ... `` ordered by total level then lexicographically."""
        allst = itertools.product(*[range(t + 1) for t in self.tops])
        if level is not None:
            return [s for s in allst if sum(s) == level]
        out = list(allst)
        if self.max_level is not None:
            out = [s for s in out if sum(s) <= self.max_level]
        return sorted(out, key=lambda s: (sum(s), s))

    # single-factor actions: list of (coefficient, new level)

    def _raise(self, b, i):
        m = self.highest[b]
        return [] if i == 0 else [(Fraction(i) * (m - i + 1), i - 1)]

    def _lower(self, b, i):
        return [] if i + 1 > self.tops[b] else [(Fraction(1), i + 1)]

    def _cartan(self, b, i):
        return [(self.highest[b] - 2 * i, i)]

    def _e11(self, b, i):
        return [(self.highest[b] - i, i)]

    def _e22(self, b, i):
        return [(Fraction(i), i)]

    def factor_action(self, name: str):
        table = {"E": self._raise, "F": self._lower, "H": self._cartan,
                 "e12": self._raise, "e21": self._lower, "e11": self._e11, "e22": self._e22}
        if name not in table:
            raise KeyError(name)
        if self.algebra == "sl2" and name.startswith("e") or self.algebra == "gl2" and name in "EFH":
            raise KeyError(f"{name} is not a generator of {self.algebra}")
        return table[name]

    def operator(self, terms, rows=None, cols=None) -> np.ndarray:
        """Matrix of ``sum coeff * X^(b1) Y^(b2) ...``; ``terms`` is a list of (coeff, [(name, b), ...])."""
        cols = self.states() if cols is None else cols
        rows = cols if rows is None else rows
        row_index = {s: i for i, s in enumerate(rows)}
        m = exact.zeros(len(rows), len(cols))
        for c, state in enumerate(cols):
            for coeff, word in terms:
                vecs = [(Fraction(coeff), state)]
                for name, b in reversed(word):
                    act = self.factor_action(name)
                    nxt = []
                    for w, s in vecs:
                        for cc, lvl in act(b, s[b]):
                            if cc != 0:
                                nxt.append((w * cc, s[:b] + (lvl,) + s[b + 1:]))
                    vecs = nxt
                for w, s in vecs:
                    r = row_index.get(s)
                    if r is not None:
                        m[r, c] += w
        return m

    def factor(self, name: str, b: int, level: int | None = None) -> np.ndarray:
        return self.operator([(1, [(name, b)])], *self._domain(level, name))

    def total(self, name: str, level: int | None = None) -> np.ndarray:
        return self.operator([(1, [(name, b)]) for b in range(self.N)], *self._domain(level, name))

    def _domain(self, level, name):
        if level is None:
            return None, None
        shift = {"E": -1, "e12": -1, "F": 1, "e21": 1}.get(name, 0)
        return self.states(level + shift), self.states(level)

    def casimir_terms(self, b: int, c: int):
        """Tensor ``Omega^(b,c)`` of the invariant form, as operator terms."""
        if self.algebra == "sl2":
            a = self.alpha_sq
            return [(a / 2, [("E", b), ("F", c)]), (a / 2, [("F", b), ("E", c)]),
                    (a / 4, [("H", b), ("H", c)])]
        return [(1, [("e11", b), ("e11", c)]), (1, [("e22", b), ("e22", c)]),
                (1, [("e12", b), ("e21", c)]), (1, [("e21", b), ("e12", c)])]

    def factor_norm(self, b: int, i: int) -> Fraction:
        m, out = self.highest[b], Fraction(1)
        for s in range(1, i + 1):
            out *= s * (m - s + 1)
        return out

    def shapovalov(self, level: int | None = None) -> np.ndarray:
        """Diagonal Gram matrix of the tensor Shapovalov form (``S(v_b, v_b) = 1``)."""
        st = self.states(level)
        g = exact.zeros(len(st), len(st))
        for i, s in enumerate(st):
            w = Fraction(1)
            for b, lvl in enumerate(s):
                w *= self.factor_norm(b, lvl)
            g[i, i] = w
        return g

    def singular_basis(self, level: int) -> np.ndarray:
        """Columns spanning ``Sing`` of the weight space at total ``level``."""
        name = "E" if self.algebra == "sl2" else "e12"
        dim = len(self.states(level))
        if level == 0:
            return exact.identity(dim)
        return exact.nullspace(self.total(name, level), n_cols=dim)

    def check_relations(self) -> None:
        """Commutation relations on a finite module, as exact matrix identities."""
        if not self.is_finite:
            raise ValueError("relations are checked on finite-dimensional modules only")
        for b in range(self.N):
            if self.algebra == "sl2":
                E, F, H = (self.factor(n, b) for n in "EFH")
                for lhs, rhs, tag in ((exact.commutator(E, F), H, "[E,F]=H"),
                                      (exact.commutator(H, E), 2 * E, "[H,E]=2E"),
                                      (exact.commutator(H, F), -2 * F, "[H,F]=-2F")):
                    if not exact.is_zero(lhs - rhs):
                        raise VerificationError("module relations", f"{tag} fails on factor {b + 1}")
            else:
                e = {(i, j): self.factor(f"e{i}{j}", b) for i in (1, 2) for j in (1, 2)}
                for (i, j), (s, k) in itertools.product(e, e):
                    rhs = (e[i, k] if j == s else 0) - (e[s, j] if i == k else 0)
                    if not exact.is_zero(exact.commutator(e[i, j], e[s, k]) - rhs):
                        raise VerificationError("module relations", f"[e{i}{j},e{s}{k}] fails on factor {b + 1}")

    def check_shapovalov(self) -> None:
        """Raising and lowering are adjoint, Cartan elements self-adjoint."""
        S = self.shapovalov()
        pairs = [("E", "F"), ("H", "H")] if self.algebra == "sl2" else \
            [("e12", "e21"), ("e11", "e11"), ("e22", "e22")]
        for b in range(self.N):
            for x, y in pairs:
                X, Y = self.factor(x, b), self.factor(y, b)
                if not exact.is_zero(X.T @ S - S @ Y):
                    raise VerificationError("Shapovalov form", f"S({x}u,v) != S(u,{y}v) on factor {b + 1}")


def gaudin_hamiltonians(module: TensorModule, x: Sequence, level: int | None = None) -> list[np.ndarray]:
    """``K_b = sum_{c != b} Omega^(b,c) / (x_b - x_c)`` on the module or on one weight space."""
    x = [exact.to_fraction(v) for v in x]
    if len(x) != module.N:
        raise ValueError(f"need {module.N} marked points")
    if len(set(x)) != len(x):
        raise ValueError("marked points must be distinct")
    st = module.states(level)
    out = []
    for b in range(module.N):
        terms = []
        for c in range(module.N):
            if c != b:
                terms += [(w / (x[b] - x[c]), word) for w, word in module.casimir_terms(b, c)]
        out.append(module.operator(terms, st, st))
    return out


def check_gaudin(module: TensorModule, ops: Sequence[np.ndarray], level: int | None = None) -> dict:
    """Sum rule, commutativity, Shapovalov symmetry and (finite modules) global invariance."""
    S = module.shapovalov(level)
    total = sum(ops[1:], ops[0])
    if not exact.is_zero(total):
        raise VerificationError("sum_b K_b = 0", "Gaudin Hamiltonians do not sum to zero")
    for i, a in enumerate(ops):
        if not exact.is_zero(S @ a - (S @ a).T):
            raise VerificationError("Gaudin Hamiltonians are Shapovalov-symmetric", f"K_{i + 1}")
        for j in range(i + 1, len(ops)):
            if not exact.is_zero(exact.commutator(a, ops[j])):
                raise VerificationError("Gaudin Hamiltonians commute", f"[K_{i + 1},K_{j + 1}] != 0")
    if level is None and module.is_finite:
        gens = ("E", "F", "H") if module.algebra == "sl2" else ("e11", "e12", "e21", "e22")
        for g in gens:
            G = module.total(g)
            for i, a in enumerate(ops):
                if not exact.is_zero(exact.commutator(G, a)):
                    raise VerificationError("Gaudin Hamiltonians commute with the diagonal action",
                                            f"[{g}, K_{i + 1}] != 0")
    return {"n": len(ops), "dim": len(module.states(level))}


def module_for(data) -> TensorModule:
    """Tensor module matching ``GaudinData`` built by ``GaudinData.sl2`` / ``gl2``."""
    if data.algebra not in ("sl2", "gl2") or data.r != 1:
        raise ValueError("tensor modules are available for sl2 and gl2 data only")
    finite = all(_is_dominant(m) for m in data.highest)
    return TensorModule(data.algebra, data.highest, None if finite else data.k,
                        data.alpha_gram[0][0] if data.algebra == "sl2" else 2)
