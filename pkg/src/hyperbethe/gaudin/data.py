"""Lie-algebra input for the Gaudin model and its discriminantal arrangement."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .. import exact


@dataclass(frozen=True)
class GaudinData:
    """Gram data of simple roots and highest weights, occupation numbers and marked points.

    ``lambda_pairings[b][i]`` is ``(Lambda_b, alpha_i)``.  ``highest`` keeps the
    module labels the data was built from (Dynkin labels for sl2, first parts of
    partitions for gl2) so that a tensor module can be reconstructed.
    """

    alpha_gram: tuple[tuple[Fraction, ...], ...]
    lambda_pairings: tuple[tuple[Fraction, ...], ...]
    lambda_gram: tuple[tuple[Fraction, ...], ...]
    kvec: tuple[int, ...]
    x: tuple[Fraction, ...]
    algebra: str = "custom"
    highest: tuple[Fraction, ...] = ()

    def __post_init__(self):
        conv = lambda m: tuple(tuple(exact.to_fraction(v) for v in row) for row in m)
        object.__setattr__(self, "alpha_gram", conv(self.alpha_gram))
        object.__setattr__(self, "lambda_pairings", conv(self.lambda_pairings))
        object.__setattr__(self, "lambda_gram", conv(self.lambda_gram))
        object.__setattr__(self, "x", tuple(exact.to_fraction(v) for v in self.x))
        object.__setattr__(self, "kvec", tuple(int(k) for k in self.kvec))
        object.__setattr__(self, "highest", tuple(exact.to_fraction(v) for v in self.highest))
        r, N = self.r, self.N
        if any(len(row) != r for row in self.alpha_gram):
            raise ValueError("alpha_gram must be square")
        if any(self.alpha_gram[i][j] != self.alpha_gram[j][i] for i in range(r) for j in range(r)):
            raise ValueError("alpha_gram must be symmetric")
        if any(self.alpha_gram[i][i] == 0 for i in range(r)):
            raise ValueError("(alpha_i, alpha_i) must be nonzero")
        if len(self.lambda_pairings) != N or any(len(row) != r for row in self.lambda_pairings):
            raise ValueError(f"lambda_pairings must be {N}x{r}")
        if len(self.lambda_gram) != N or any(len(row) != N for row in self.lambda_gram):
            raise ValueError(f"lambda_gram must be {N}x{N}")
        if len(self.kvec) != r or any(k < 0 for k in self.kvec) or sum(self.kvec) == 0:
            raise ValueError("k must be r nonnegative integers with positive sum")
        if len(set(self.x)) != N:
            raise ValueError("marked points x must be distinct")
        for b in range(N):
            if not any(self.lambda_pairings[b][i] != 0 and self.kvec[i] > 0 for i in range(r)):
                raise ValueError(f"weight {b + 1} pairs trivially with every occupied root")

    @property
    def r(self) -> int:
        return len(self.alpha_gram)

    @property
    def N(self) -> int:
        return len(self.x)

    @property
    def k(self) -> int:
        return sum(self.kvec)

    def shift(self, b: int) -> Fraction:
        """``c_b = sum_{c != b} (Lambda_b, Lambda_c) / (x_b - x_c)``."""
        return sum((self.lambda_gram[b][c] / (self.x[b] - self.x[c]) for c in range(self.N) if c != b),
                   Fraction(0))

    def with_x(self, x: Sequence) -> "GaudinData":
        return GaudinData(self.alpha_gram, self.lambda_pairings, self.lambda_gram, self.kvec,
                          tuple(x), self.algebra, self.highest)

    @classmethod
    def sl2(cls, labels: Sequence, k: int | Sequence[int], x: Sequence, alpha_sq=2) -> "GaudinData":
        """sl2 data from Dynkin labels ``m_b = 2 (Lambda_b, alpha) / (alpha, alpha)``."""
        c = exact.to_fraction(alpha_sq)
        m = [exact.to_fraction(v) for v in labels]
        kvec = (k,) if isinstance(k, int) else tuple(k)
        return cls(((c,),), tuple((mb * c / 2,) for mb in m),
                   tuple(tuple(mb * mc * c / 4 for mc in m) for mb in m),
                   kvec, tuple(x), "sl2", tuple(m))

    @classmethod
    def gl2(cls, parts: Sequence, k: int | Sequence[int], x: Sequence) -> "GaudinData":
        """gl2 data for partitions ``(lambda_b, 0)``; ``parts`` lists ``lambda_b``."""
        lam = []
        for p in parts:
            if isinstance(p, (list, tuple)):
                if len(p) != 2 or exact.to_fraction(p[1]) != 0:
                    raise ValueError("gl2 weights must be partitions (lambda, 0)")
                p = p[0]
            lam.append(exact.to_fraction(p))
        if any(v < 0 or v.denominator != 1 for v in lam):
            raise ValueError("gl2 partitions need nonnegative integer parts")
        kvec = (k,) if isinstance(k, int) else tuple(k)
        return cls(((Fraction(2),),), tuple((v,) for v in lam),
                   tuple(tuple(a * b for b in lam) for a in lam), kvec, tuple(x), "gl2", tuple(lam))
