"""Master function, bounded regions, critical points and special vectors.

Real fibers only for the region and Newton machinery.  Exact inputs give
exact gradients and Hessians; floats give floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from . import exact
from .arrangement import ArrangementFamily, euler_characteristic
from .flags import FlagSpace
from .hamiltonians import HamiltonianFamily, VerificationError

# refined critical points live on this dyadic grid
_GRID = 2 ** 110


@dataclass
class MasterEval:
    value: float
    gradient: list
    hessian: np.ndarray

    @property
    def hess_det(self):
        h = self.hessian
        if h.dtype == object:
            return exact.det(h)
        return float(np.linalg.det(h))


def master_eval(family: ArrangementFamily, z: Sequence, t: Sequence) -> MasterEval:
    """``Phi = sum a_j log f_j`` with its t-gradient and t-Hessian.

    The value uses ``log|f_j|`` (the real branch on a region).
    """
    f = family.f(z, t)
    if any(v == 0 for v in f):
        raise ValueError("t lies on a hyperplane")
    a, b, k = family.weights, family.linear_parts, family.k
    is_exact = exact.is_exact(list(z) + list(t))
    if is_exact:
        grad = [sum(a[j] * b[j][i] / f[j] for j in range(family.n)) for i in range(k)]
        hess = exact.zeros(k, k)
        for j in range(family.n):
            w = a[j] / f[j] ** 2
            for p in range(k):
                for q in range(k):
                    hess[p, q] -= w * b[j][p] * b[j][q]
    else:
        af = np.array([float(x) for x in a])
        bf = np.array([[float(x) for x in row] for row in b])
        ff = np.array([float(x) for x in f])
        grad = list(bf.T @ (af / ff))
        hess = -(bf.T * (af / ff ** 2)) @ bf
    value = sum(float(a[j]) * math.log(abs(float(f[j]))) for j in range(family.n))
    return MasterEval(value, grad, hess)


# regions


@dataclass(frozen=True)
class RegionCell:
    signs: tuple[int, ...]
    witness: tuple[float, ...]
    bounded: bool
    radius: float = 0.0


def _float_data(family: ArrangementFamily, z: Sequence):
    b = np.array([[float(x) for x in row] for row in family.linear_parts])
    zz = np.array([float(x) for x in z])
    return b, zz


def _chebyshev(b, zz, signs, cap=1.0):
    """Largest ball inside ``s_i f_i > 0`` (radius capped); None if empty."""
    m, k = len(signs), b.shape[1]
    s = np.array(signs, dtype=float)
    norms = np.linalg.norm(b[:m], axis=1)
    a_ub = np.hstack([-(s[:, None] * b[:m]), norms[:, None]])
    b_ub = s * zz[:m]
    c = np.zeros(k + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * k + [(0, cap)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0 or res.x[-1] <= 1e-9:
        return None
    return res.x[:k], res.x[-1]


def _is_bounded(b, signs) -> bool:
    """Recession cone ``{d : s_i b_i.d >= 0}`` is {0} iff max sum s_i b_i.d is 0."""
    k = b.shape[1]
    s = np.array(signs, dtype=float)
    sb = s[:, None] * b
    res = linprog(-sb.sum(axis=0), A_ub=-sb, b_ub=np.zeros(len(signs)),
                  bounds=[(-1, 1)] * k, method="highs")
    return res.status == 0 and -res.fun <= 1e-9


def enumerate_bounded_regions(family: ArrangementFamily, z: Sequence, check: bool = True) -> list[RegionCell]:
    """Bounded chambers of the real fiber, sorted by sign vector.

    Cells are found by an incremental sweep: each hyperplane splits the
    current cells, and each candidate side is tested by an LP.
    """
    b, zz = _float_data(family, z)
    cells: list[tuple[int, ...]] = [()]
    for j in range(family.n):
        nxt = []
        for cell in cells:
            for s in (1, -1):
                signs = cell + (s,)
                if _chebyshev(b, zz, signs) is not None:
                    nxt.append(signs)
        cells = nxt
    out = []
    for signs in sorted(cells, reverse=True):
        if not _is_bounded(b, signs):
            continue
        center, radius = _chebyshev(b, zz, signs, cap=np.inf)
        out.append(RegionCell(signs, tuple(float(x) for x in center), True, float(radius)))
    if check and exact.is_exact(z):
        chi = abs(euler_characteristic(family, z))
        if len(out) != chi:
            raise VerificationError("#bounded regions = |chi(U)|",
                                    f"found {len(out)} bounded regions, |chi| = {chi}")
    return out


# critical points


@dataclass
class CriticalPoint:
    t: tuple[float, ...]
    gradient_residual: float
    hess_det: float
    region: int
    nondegenerate: bool
    t_exact: tuple[Fraction, ...] | None = None
    is_rational: bool = False
    iterations: int = 0

    def to_json(self, eigenvalues: dict | None = None) -> dict:
        return {"t": list(self.t), "residual": self.gradient_residual, "hess_det": self.hess_det,
                "region": self.region, "eigenvalues": eigenvalues or {}}


class NewtonError(RuntimeError):
    pass


def _in_cell(family, z, signs, t) -> bool:
    b, zz = _float_data(family, z)
    f = zz + b @ t
    return bool(np.all(np.array(signs) * f > 0))


def _newton(family, z, signs, start, tol, max_iter):
    t = np.array(start, dtype=float)
    ev = master_eval(family, z, t)
    for it in range(1, max_iter + 1):
        g = np.array(ev.gradient)
        if np.max(np.abs(g)) <= tol:
            return t, it - 1
        step = -np.linalg.solve(ev.hessian, g)
        slope = float(g @ step)
        alpha = 1.0
        while alpha > 1e-12:
            cand = t + alpha * step
            if _in_cell(family, z, signs, cand):
                new = master_eval(family, z, cand)
                if new.value >= ev.value + 1e-4 * alpha * slope or alpha * np.max(np.abs(step)) < 1e-14:
                    break
            alpha /= 2
        else:
            return t, it
        t, ev = cand, new
        if alpha * np.max(np.abs(step)) < 1e-15 * max(1.0, np.max(np.abs(t))):
            return t, it
    return t, max_iter


def _grid(x: Fraction) -> Fraction:
    return Fraction(round(x * _GRID), _GRID)


def _refine_exact(family, z, t_float, steps=4):
    """A few exact Newton steps from the float solution, rounded to a fine grid."""
    zq = [exact.to_fraction(v) for v in z]
    t = [Fraction(float(v)) for v in t_float]
    for _ in range(steps):
        ev = master_eval(family, zq, t)
        if all(g == 0 for g in ev.gradient):
            break
        dt = exact.solve(ev.hessian, exact.qvector(ev.gradient))
        t = [_grid(ti - d) for ti, d in zip(t, dt)]
    return tuple(t), master_eval(family, zq, t)


def rationalize_critical_point(family, z, t, max_denominator: int = 10 ** 4):
    """Small-denominator rational point with exactly zero gradient, or None."""
    if not exact.is_exact(z):
        return None
    cand = [Fraction(float(v)).limit_denominator(max_denominator) for v in t]
    try:
        ev = master_eval(family, z, cand)
    except ValueError:
        return None
    return tuple(cand) if all(g == 0 for g in ev.gradient) else None


def solve_critical_points(family: ArrangementFamily, z: Sequence, tol: float = 1e-12,
                          max_iter: int = 60, regions: list[RegionCell] | None = None) -> list[CriticalPoint]:
    """One critical point per bounded region, by damped Newton from the region's center."""
    if any(a <= 0 for a in family.weights):
        raise ValueError("critical-point solver needs positive weights")
    if regions is None:
        regions = enumerate_bounded_regions(family, z)
    points = []
    for rid, cell in enumerate(regions):
        t, iters = _newton(family, z, cell.signs, cell.witness, tol / 100, max_iter)
        if not _in_cell(family, z, cell.signs, t):
            raise NewtonError(f"Newton left region {rid}")
        rational = rationalize_critical_point(family, z, t)
        if rational is not None:
            t_exact, ev = rational, master_eval(family, z, rational)
            residual = 0.0
        elif exact.is_exact(z):
            t_exact, ev = _refine_exact(family, z, t)
            residual = max(abs(float(g)) for g in ev.gradient)
        else:
            t_exact, ev = None, master_eval(family, z, t)
            residual = max(abs(float(g)) for g in ev.gradient)
        if residual > tol:
            raise NewtonError(f"Newton did not converge in region {rid}: residual {residual:.3e}")
        h = exact.to_float(ev.hessian) if ev.hessian.dtype == object else ev.hessian
        hdet = float(ev.hess_det)
        scale = max(1.0, float(np.abs(h).max())) ** family.k
        t_out = tuple(float(v) for v in (t_exact if t_exact is not None else t))
        points.append(CriticalPoint(t_out, residual, hdet, rid, abs(hdet) > 1e-8 * scale,
                                    t_exact, rational is not None, iters))
    return points


def special_vector(family: ArrangementFamily, z: Sequence, t: Sequence, space: FlagSpace | None = None) -> np.ndarray:
    """Coordinates ``det(b_J) / prod_{j in J} f_j(z, t)`` over the standard basis."""
    space = space or FlagSpace(family)
    f = family.f(z, t)
    if any(v == 0 for v in f):
        raise ValueError("t lies on a hyperplane")
    exact_mode = exact.is_exact(list(z) + list(t))
    out = []
    for J in space.basis():
        d = family.subset_det(J)
        prod = 1
        for j in J:
            prod = prod * f[j]
        out.append(d / prod if exact_mode else float(d) / float(prod))
    return np.array(out, dtype=object if exact_mode else float)


@dataclass
class ResiduePairing:
    """Residue forms ``f -> f(p) / Hess(p)`` at nondegenerate critical points."""

    hess: dict[int, object] = field(default_factory=dict)

    def pair(self, region: int, f_value, g_value=1):
        return f_value * g_value / self.hess[region]

    def unit(self, region: int):
        return self.pair(region, 1)

    def alpha_one(self, region: int, v: np.ndarray) -> np.ndarray:
        """Image of ``[1]`` in ``Sing V``: ``v(p) / Hess(p)``."""
        return v / self.hess[region]


def _point(cp: CriticalPoint):
    return cp.t_exact if cp.t_exact is not None else cp.t


def _pair(space: FlagSpace, u, v):
    d = space.gram.diagonal
    if getattr(u, "dtype", None) == object and getattr(v, "dtype", None) == object:
        return sum(w * x * y for w, x, y in zip(d, u, v))
    return float(sum(float(w) * float(x) * float(y) for w, x, y in zip(d, u, v)))


def _random_interior_t(family, z, rng, regions):
    """Rational t strictly inside a random bounded region (or near the origin)."""
    while True:
        if regions:
            cell = regions[int(rng.integers(len(regions)))]
            center = np.array(cell.witness) + rng.uniform(-0.5, 0.5, family.k) * cell.radius
        else:
            center = rng.uniform(-3, 3, family.k)
        t = [Fraction(float(c)).limit_denominator(997) for c in center]
        if all(v != 0 for v in family.f(z, t)):
            return t


def verify_hessian_norm_and_orthogonality(family: ArrangementFamily, z: Sequence, points: list[CriticalPoint],
                                          tol: float = 1e-8, seed: int = 0, n_random: int = 10,
                                          regions: list[RegionCell] | None = None) -> dict:
    space = FlagSpace(family)
    sign = (-1) ** family.k
    report = {"norms": [], "random": [], "orthogonality": []}
    vecs = []
    for cp in points:
        t = _point(cp)
        v = special_vector(family, z, t, space)
        vecs.append(v)
        lhs = _pair(space, v, v)
        rhs = sign * master_eval(family, z, t).hess_det
        ok = lhs == rhs if isinstance(lhs, Fraction) else abs(float(lhs) - float(rhs)) <= tol * max(1.0, abs(float(rhs)))
        report["norms"].append({"region": cp.region, "S(v,v)": float(lhs), "hess": float(rhs), "ok": bool(ok)})
        if not ok:
            raise VerificationError("S(v,v) = (-1)^k Hess at critical points",
                                    f"region {cp.region}: S(v,v)={float(lhs)!r}, (-1)^k Hess={float(rhs)!r}")
    rng = np.random.default_rng(seed)
    if exact.is_exact(z):
        for _ in range(n_random):
            t = _random_interior_t(family, z, rng, regions)
            v = special_vector(family, z, t, space)
            lhs, rhs = _pair(space, v, v), sign * master_eval(family, z, t).hess_det
            report["random"].append({"t": [exact.fraction_str(x) for x in t], "ok": lhs == rhs})
            if lhs != rhs:
                raise VerificationError("S(v(t),v(t)) = (-1)^k Hess(t) for all t in U",
                                        f"t={t}: {lhs} != {rhs}")
    for s in range(len(vecs)):
        for r in range(s + 1, len(vecs)):
            num = abs(float(_pair(space, vecs[s], vecs[r])))
            den = math.sqrt(abs(float(_pair(space, vecs[s], vecs[s])) * float(_pair(space, vecs[r], vecs[r]))))
            rel = num / den if den else num
            report["orthogonality"].append({"pair": [s, r], "relative": rel})
            if rel > tol:
                raise VerificationError("special vectors of distinct critical points are orthogonal",
                                        f"regions {s},{r}: relative inner product {rel:.3e}")
    return report


def generated_algebra_dimension(generators: Sequence[np.ndarray]) -> int:
    """Dimension of the unital algebra generated by square exact matrices.

    Rescaling a generator does not change the algebra, so everything runs on
    integer matrices; the span is kept in fraction-free echelon form.
    """
    if not generators:
        return 0
    d = generators[0].shape[0]
    if d == 0:
        return 0
    gens = [exact.to_integer(g)[0] for g in generators]
    echelon: list[tuple[int, list[int]]] = []

    def insert(mat) -> bool:
        vec = [int(x) for x in mat.flat]
        for piv, row in echelon:
            c = vec[piv]
            if c:
                p = row[piv]
                vec = [p * x - c * y for x, y in zip(vec, row)]
        nz = next((i for i, x in enumerate(vec) if x), None)
        if nz is None:
            return False
        g = 0
        for x in vec:
            g = math.gcd(g, x)
        echelon.append((nz, [x // g for x in vec]))
        return True

    def primitive(mat):
        g = 0
        for x in mat.flat:
            g = math.gcd(g, int(x))
        return mat // g if g > 1 else mat

    one = exact.to_integer(exact.identity(d))[0]
    insert(one)
    queue = [one]
    while queue:
        m = queue.pop(0)
        for g in gens:
            prod = primitive(g.dot(m))
            if insert(prod):
                queue.append(prod)
            if len(echelon) == d * d:
                return d * d
    return len(echelon)


def algebra_correspondence(family: ArrangementFamily, z: Sequence, points: list[CriticalPoint],
                           tol: float = 1e-8, hf: HamiltonianFamily | None = None) -> dict:
    """Residue pairing, eigenvalue map and regular-representation checks at a good fiber."""
    hf = hf or HamiltonianFamily(family)
    space = hf.space
    sign = (-1) ** family.k
    good = [cp for cp in points if cp.nondegenerate]
    flagged = [cp.region for cp in points if not cp.nondegenerate]
    pairing = ResiduePairing({cp.region: master_eval(family, z, _point(cp)).hess_det for cp in good})
    tuples = []
    report = {"points": [], "degenerate": flagged}
    for cp in good:
        t = _point(cp)
        v = special_vector(family, z, t, space)
        alpha = pairing.alpha_one(cp.region, v)
        lhs = _pair(space, alpha, alpha)
        rhs = sign * pairing.unit(cp.region)
        if abs(float(lhs) - float(rhs)) > tol * max(1.0, abs(float(rhs))):
            raise VerificationError("S(alpha(1), alpha(1)) = (-1)^k / Hess",
                                    f"region {cp.region}: {float(lhs)} vs {float(rhs)}")
        f = family.f(z, t)
        eig = [family.weights[j] / f[j] for j in range(family.n)]
        vf = np.array([float(x) for x in v])
        for j in range(family.n):
            kv = exact.to_float(hf.hamiltonian_at(z, j)) @ vf
            err = np.max(np.abs(kv - float(eig[j]) * vf))
            if err > tol * max(1.0, np.max(np.abs(kv))):
                raise VerificationError("special vectors are joint eigenvectors of K_j",
                                        f"region {cp.region}, j={j + 1}: residual {err:.3e}")
        tuples.append(tuple(float(e) for e in eig))
        report["points"].append({"region": cp.region, "eigenvalues": {str(j + 1): float(e) for j, e in enumerate(eig)}})
    for s in range(len(tuples)):
        for r in range(s + 1, len(tuples)):
            if np.max(np.abs(np.array(tuples[s]) - np.array(tuples[r]))) <= tol:
                raise VerificationError("eigenvalue tuples are distinct",
                                        f"regions {s} and {r} share an eigenvalue tuple")
    ops = [hf.on_sing_at(z, j) for j in range(family.n)]
    dim_alg = generated_algebra_dimension(ops)
    report.update({"algebra_dim": dim_alg, "sing_dim": hf.sing_matrix.shape[1], "n_points": len(good)})
    if not (dim_alg == len(good) == report["sing_dim"]):
        raise VerificationError("algebra dim = #critical points = dim Sing V",
                                f"algebra dim {dim_alg}, points {len(good)}, dim Sing V {report['sing_dim']}")
    return report


def critical_report(family: ArrangementFamily, z: Sequence, points: list[CriticalPoint]) -> list[dict]:
    out = []
    for cp in points:
        f = family.f(z, cp.t)
        eig = {str(j + 1): float(family.weights[j]) / float(f[j]) for j in range(family.n)}
        out.append(cp.to_json(eig))
    return out
