"""Discriminantal arrangements of Gaudin data and the symmetric-group action on them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import exact
from ..arrangement import ArrangementFamily
from ..flags import FlagSpace, permutation_sign
from ..hamiltonians import HamiltonianFamily, VerificationError
from .data import GaudinData


@dataclass(frozen=True)
class DiscriminantalIndex:
    """One hyperplane label: ``kind`` is 1, 2 or 3 for the three index blocks."""

    kind: int
    roots: tuple[int, ...]
    slots: tuple[int, ...]
    point: int = -1

    def label(self) -> str:
        roots = ",".join(str(i + 1) for i in self.roots)
        if self.kind == 3:
            return f"({roots},x{self.point + 1}),{self.slots[0] + 1}"
        return f"({roots})," + ",".join(str(s + 1) for s in self.slots)


@dataclass
class DiscriminantalArrangement:
    data: GaudinData
    family: ArrangementFamily
    indices: list[DiscriminantalIndex]
    z0: list[Fraction]
    t_slots: list[tuple[int, int]]

    def t_index(self, i: int, l: int) -> int:
        return self.t_slots.index((i, l))

    def point_indices(self, b: int) -> list[int]:
        return [j for j, idx in enumerate(self.indices) if idx.kind == 3 and idx.point == b]

    def x_direction(self, b: int) -> list[Fraction]:
        """Coordinate vector of ``d/dx_b`` along the stratum ``X``."""
        xi = [Fraction(0)] * self.family.n
        for j in self.point_indices(b):
            xi[j] = Fraction(1)
        return xi

    def fiber_at(self, x: Sequence) -> list[Fraction]:
        return [Fraction(0) if idx.kind != 3 else exact.to_fraction(x[idx.point]) for idx in self.indices]


def build_discriminantal(data: GaudinData, check_points: int = 10, seed: int = 0) -> DiscriminantalArrangement:
    """Hyperplanes ``t_l - t_l'``, ``t^(i)_l - t^(i')_l'`` and ``-t^(i)_l + x_b`` with their weights."""
    slots = [(i, l) for i in range(data.r) for l in range(data.kvec[i])]
    pos = {s: p for p, s in enumerate(slots)}
    k = len(slots)
    rows, weights, indices = [], [], []

    def row(plus=None, minus=None):
        v = [0] * k
        if plus is not None:
            v[pos[plus]] += 1
        if minus is not None:
            v[pos[minus]] -= 1
        return v

    for i in range(data.r):
        for l, lp in itertools.combinations(range(data.kvec[i]), 2):
            rows.append(row((i, l), (i, lp)))
            weights.append(data.alpha_gram[i][i])
            indices.append(DiscriminantalIndex(1, (i,), (l, lp)))
    for i, ip in itertools.combinations(range(data.r), 2):
        if data.alpha_gram[i][ip] == 0:
            continue
        for l in range(data.kvec[i]):
            for lp in range(data.kvec[ip]):
                rows.append(row((i, l), (ip, lp)))
                weights.append(data.alpha_gram[i][ip])
                indices.append(DiscriminantalIndex(2, (i, ip), (l, lp)))
    for i in range(data.r):
        for b in range(data.N):
            if data.lambda_pairings[b][i] == 0:
                continue
            for l in range(data.kvec[i]):
                rows.append(row(minus=(i, l)))
                weights.append(-data.lambda_pairings[b][i])
                indices.append(DiscriminantalIndex(3, (i,), (l,), b))
    family = ArrangementFamily.from_rows(rows, weights, [idx.label() for idx in indices])
    arr = DiscriminantalArrangement(data, family, indices, [], slots)
    arr.z0 = arr.fiber_at(data.x)
    if check_points:
        check_master_function(arr, check_points, seed)
    return arr


def gaudin_master_terms(data: GaudinData, t: Sequence):
    """``(coefficient, argument)`` pairs of the Gaudin master function, in the log-sum form."""
    slots = [(i, l) for i in range(data.r) for l in range(data.kvec[i])]
    tv = dict(zip(slots, t))
    terms = []
    for i in range(data.r):
        for j, jp in itertools.combinations(range(data.kvec[i]), 2):
            terms.append((data.alpha_gram[i][i], tv[i, j] - tv[i, jp]))
    for i, ip in itertools.combinations(range(data.r), 2):
        for j in range(data.kvec[i]):
            for jp in range(data.kvec[ip]):
                terms.append((data.alpha_gram[i][ip], tv[i, j] - tv[ip, jp]))
    for i in range(data.r):
        for j in range(data.kvec[i]):
            for b in range(data.N):
                terms.append((-data.lambda_pairings[b][i], tv[i, j] - data.x[b]))
    return [(c, h) for c, h in terms if c != 0]


def gaudin_master_gradient(data: GaudinData, t: Sequence) -> list:
    slots = [(i, l) for i in range(data.r) for l in range(data.kvec[i])]
    grad = []
    for s in slots:
        g = Fraction(0)
        tv = dict(zip(slots, t))
        i, l = s
        for (ii, ll) in slots:
            if (ii, ll) == s:
                continue
            c = data.alpha_gram[i][ii]
            if c != 0:
                g += c / (tv[s] - tv[ii, ll])
        for b in range(data.N):
            g -= data.lambda_pairings[b][i] / (tv[s] - data.x[b])
        grad.append(g)
    return grad


def check_master_function(arr: DiscriminantalArrangement, count: int = 10, seed: int = 0) -> None:
    """The fiber master function equals the Gaudin master function up to constants.

    Compared exactly at random rational points: the weighted multisets of
    ``|argument|`` agree and the t-gradients agree.
    """
    rng = np.random.default_rng(seed)
    fam, data = arr.family, arr.data
    done = 0
    while done < count:
        t = [Fraction(int(rng.integers(-500, 500)), int(rng.integers(1, 97))) for _ in range(fam.k)]
        f = fam.f(arr.z0, t)
        if any(v == 0 for v in f):
            continue
        terms = gaudin_master_terms(data, t)
        if any(h == 0 for _, h in terms):
            continue
        lhs = sorted((a, abs(v)) for a, v in zip(fam.weights, f))
        rhs = sorted((c, abs(h)) for c, h in terms)
        grad_arr = [sum(fam.weights[j] * fam.linear_parts[j][p] / f[j] for j in range(fam.n)) for p in range(fam.k)]
        if lhs != rhs or grad_arr != gaudin_master_gradient(data, t):
            raise VerificationError("discriminantal master function = Gaudin master function",
                                    f"mismatch at t={t}")
        done += 1


# symmetric group action


def sk_elements(kvec: Sequence[int]):
    """All ``sigma = (sigma_1, ..., sigma_r)`` as tuples of permutation tuples."""
    return list(itertools.product(*[itertools.permutations(range(k)) for k in kvec]))


def sk_sign(sigma) -> int:
    s = 1
    for perm in sigma:
        s *= permutation_sign(perm)
    return s


def index_permutation(arr: DiscriminantalArrangement, sigma) -> list[int]:
    """Image of each hyperplane index under ``sigma``."""
    if len(sigma) != arr.data.r or any(sorted(p) != list(range(k)) for p, k in zip(sigma, arr.data.kvec)):
        raise ValueError("sigma does not match the occupation numbers k")
    where = {idx: j for j, idx in enumerate(arr.indices)}
    out = []
    for idx in arr.indices:
        if idx.kind == 1:
            (i,) = idx.roots
            a, b = sigma[i][idx.slots[0]], sigma[i][idx.slots[1]]
            img = DiscriminantalIndex(1, idx.roots, (min(a, b), max(a, b)))
        elif idx.kind == 2:
            i, ip = idx.roots
            img = DiscriminantalIndex(2, idx.roots, (sigma[i][idx.slots[0]], sigma[ip][idx.slots[1]]))
        else:
            (i,) = idx.roots
            img = DiscriminantalIndex(3, idx.roots, (sigma[i][idx.slots[0]],), idx.point)
        out.append(where[img])
    return out


def action_matrix(arr: DiscriminantalArrangement, sigma, space: FlagSpace | None = None) -> np.ndarray:
    """Signed permutation matrix of ``F(H_J) -> F(H_sigma(J))`` on the standard basis."""
    space = space or FlagSpace(arr.family)
    perm = index_permutation(arr, sigma)
    m = exact.zeros(space.dim, space.dim)
    for col, J in enumerate(space.basis()):
        image = tuple(perm[j] for j in J)
        m[space.index[tuple(sorted(image))], col] = Fraction(permutation_sign(image))
    return m


def antisymmetrizer(arr: DiscriminantalArrangement, space: FlagSpace | None = None) -> np.ndarray:
    space = space or FlagSpace(arr.family)
    out = exact.zeros(space.dim, space.dim)
    for sigma in sk_elements(arr.data.kvec):
        out = out + sk_sign(sigma) * action_matrix(arr, sigma, space)
    return out


def sk_action(arr: DiscriminantalArrangement, sigma, hf: HamiltonianFamily | None = None) -> dict:
    """Index permutation and operator of ``sigma``, with the invariance checks."""
    hf = hf or HamiltonianFamily(arr.family)
    perm = index_permutation(arr, sigma)
    mat = action_matrix(arr, sigma, hf.space)
    a = arr.family.weights
    if any(a[perm[j]] != a[j] for j in range(len(perm))):
        raise VerificationError("sum a_j omega_j is invariant", "weights are not permutation invariant")
    gram = hf.space.gram.matrix
    if not exact.is_zero(mat.T @ gram @ mat - gram):
        raise VerificationError("S_k action preserves S", "S is not invariant")
    for b in range(arr.data.N):
        kx = hf.naive_hamiltonian(arr.x_direction(b), arr.z0) if not _is_good(hf, arr) else \
            _good_x_hamiltonian(hf, arr, b)
        if not exact.is_zero(exact.commutator(mat, kx)):
            raise VerificationError("K_{d/dx_b} is invariant", f"b={b + 1} does not commute with sigma")
    return {"permutation": perm, "matrix": mat, "sign": sk_sign(sigma)}


def _is_good(hf, arr) -> bool:
    from ..arrangement import classify_fiber
    return classify_fiber(arr.family, hf.circuits, arr.z0).is_good


def _good_x_hamiltonian(hf, arr, b):
    out = exact.zeros(hf.space.dim, hf.space.dim)
    for j in arr.point_indices(b):
        out = out + hf.hamiltonian_at(arr.z0, j)
    return out


def x_hamiltonian(arr: DiscriminantalArrangement, b: int, hf: HamiltonianFamily | None = None) -> np.ndarray:
    """``K_{d/dx_b}`` at the fiber of ``x``: the sum of ``K_j`` over the indices attached to ``x_b``.

    On a bad fiber this is the naive Hamiltonian of the tangent direction.
    """
    hf = hf or HamiltonianFamily(arr.family)
    if _is_good(hf, arr):
        return _good_x_hamiltonian(hf, arr, b)
    return hf.naive_hamiltonian(arr.x_direction(b), arr.z0)


def group_order(kvec: Sequence[int]) -> int:
    return math.prod(math.factorial(k) for k in kvec)
