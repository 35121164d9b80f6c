"""Verification suites over arrangement files, built-in fixtures and Gaudin presets.

Every check returns a :class:`CheckResult`; a failing check carries the tag of
the statement it tests.  Results come back in a fixed order so that reports
are reproducible for a given seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import exact, fixtures
from .arrangement import ArrangementFamily, classify_fiber, euler_characteristic
from .critical import (NewtonError, algebra_correspondence, enumerate_bounded_regions, solve_critical_points,
                       special_vector, verify_hessian_norm_and_orthogonality)
from .flags import degenerate_subspaces
from .hamiltonians import HamiltonianFamily, VerificationError

SUITES = ("good", "bad", "gaudin", "all")


@dataclass
class Config:
    seed: int = 0
    tol_newton: float = 1e-12
    tol_verify: float = 1e-8

    def __post_init__(self):
        if self.tol_newton <= 0 or self.tol_verify <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class CheckResult:
    name: str
    passed: bool
    tag: str = ""
    message: str = ""
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail", "details": self.details}
        if not self.passed:
            out["tag"] = self.tag
            out["message"] = self.message
        return out


def run_check(name: str, fn: Callable[[], dict]) -> CheckResult:
    try:
        return CheckResult(name, True, details=fn() or {})
    except VerificationError as exc:
        return CheckResult(name, False, exc.tag, str(exc))
    except NewtonError as exc:
        return CheckResult(name, False, "one critical point per bounded region", str(exc))


def _is_real_positive(family: ArrangementFamily) -> bool:
    return all(a > 0 for a in family.weights)


# good fibers


def good_fiber_checks(name: str, family: ArrangementFamily, z, cfg: Config, census: bool = True) -> list[CheckResult]:
    hf = HamiltonianFamily(family)
    out = []

    def symmetry():
        for c in hf.circuits:
            if not hf.is_symmetric(hf.operators[c.support]):
                raise VerificationError("S L_C symmetric",
                                        f"circuit {[j + 1 for j in c.support]}")
        return {"circuits": len(hf.circuits)}

    def preserve():
        for j in range(family.n):
            hf.on_sing_at(z, j)
            if not hf.is_symmetric(hf.hamiltonian_at(z, j)):
                raise VerificationError("K_j symmetric with respect to S", f"j={j + 1}")
        return {"dim_sing": hf.sing_matrix.shape[1]}

    def flatness():
        for i, j in itertools.combinations(range(family.n), 2):
            hf.verify_flatness(z, i, j)
        return {"pairs": family.n * (family.n - 1) // 2}

    out.append(run_check(f"{name}: S L_C symmetric", symmetry))
    out.append(run_check(f"{name}: K_j preserve Sing V and are symmetric", preserve))
    out.append(run_check(f"{name}: flatness and commutativity", flatness))
    if census and _is_real_positive(family):
        out.extend(critical_checks(name, family, z, cfg, hf))
    return out


def critical_checks(name, family, z, cfg: Config, hf: HamiltonianFamily) -> list[CheckResult]:
    state: dict = {}

    def census():
        regions = enumerate_bounded_regions(family, z)
        points = solve_critical_points(family, z, cfg.tol_newton, regions=regions)
        chi = abs(euler_characteristic(family, z))
        state.update(regions=regions, points=points)
        if not len(points) == len(regions) == chi:
            raise VerificationError("#critical points = #bounded regions = |chi(U)|",
                                    f"{len(points)} points, {len(regions)} regions, |chi| = {chi}")
        if family.n > family.k and hf.sing_matrix.shape[1] != chi:
            raise VerificationError("dim Sing V = |chi(U)| for unbalanced weights",
                                    f"dim Sing V = {hf.sing_matrix.shape[1]}, |chi| = {chi}")
        details = {"points": len(points), "regions": len(regions), "chi": chi,
                   "max_residual": max([p.gradient_residual for p in points] + [0.0])}
        rational = [p for p in points if p.is_rational]
        if rational:
            v = special_vector(family, z, rational[0].t_exact)
            details["S(v,v)"] = exact.fraction_str(hf.space.gram.pair_arrays(list(v), list(v)))
            details["t"] = [exact.fraction_str(x) for x in rational[0].t_exact]
        return details

    def norms():
        rep = verify_hessian_norm_and_orthogonality(family, z, state["points"], cfg.tol_verify, cfg.seed,
                                                    regions=state["regions"])
        worst = max([o["relative"] for o in rep["orthogonality"]] + [0.0])
        return {"norms": len(rep["norms"]), "random": len(rep["random"]), "max_orthogonality": worst}

    def algebra():
        rep = algebra_correspondence(family, z, state["points"], cfg.tol_verify, hf)
        return {"algebra_dim": rep["algebra_dim"], "dim_sing": rep["sing_dim"]}

    out = [run_check(f"{name}: critical points = bounded regions = |chi|", census)]
    if out[0].passed:
        out.append(run_check(f"{name}: S(v,v) = (-1)^k Hess and orthogonality", norms))
        out.append(run_check(f"{name}: eigenvalues and regular representation", algebra))
    return out


# bad fibers


def bad_fiber_checks(name: str, family: ArrangementFamily, z0, cfg: Config) -> list[CheckResult]:
    hf = HamiltonianFamily(family)
    state: dict = {}

    def subspaces():
        deg = degenerate_subspaces(family, hf.circuits, z0)
        state["deg"] = deg
        vanishing = hf.vanishing_circuits(z0)
        for c in vanishing:
            if not exact.is_zero(hf.operators[c.support] @ deg.flags.matrix):
                raise VerificationError("F^k(A(z0)) lies in ker L_C for vanishing circuits",
                                        f"circuit {[j + 1 for j in c.support]}")
        # only the inclusion is asserted; both dimensions are reported
        stacked = np.vstack([hf.operators[c.support] for c in vanishing])
        return {"dim_F": deg.flags.dim, "dim_ker_L": hf.space.dim - exact.rank(stacked),
                "dim_sing": deg.sing.dim, "chi": abs(euler_characteristic(family, z0))}

    def naive():
        dirs = hf.tangent_directions(z0)
        for d in dirs:
            op = hf.naive_hamiltonian(d, z0)
            try:
                exact.column_space_solve(state["deg"].flags.matrix, op @ state["deg"].flags.matrix)
            except ValueError as exc:
                raise VerificationError("K_xi preserves F^k(A(z0))", f"xi={[str(x) for x in d.xi]}") from exc
        return {"tangent_dim": len(dirs)}

    def regularized():
        reg = hf.regularized_hamiltonians(z0, state["deg"].sing.matrix)
        state["reg"] = reg
        details = {"dim": reg.basis.shape[1]}
        if not reg.commute():
            if _is_real_positive(family):
                raise VerificationError("pr K_j^1(z0) commute and are S-symmetric",
                                        f"commutator norms {reg.commutator_norms()}")
            details["conjecture_evidence"] = {"commute": False, "norms": reg.commutator_norms()}
        if not reg.symmetric():
            raise VerificationError("pr K_j^1(z0) commute and are S-symmetric", "not S-symmetric")
        return details

    def eigenvectors():
        reg = state["reg"]
        regions = enumerate_bounded_regions(family, z0)
        points = solve_critical_points(family, z0, cfg.tol_newton, regions=regions)
        if len(points) != reg.basis.shape[1]:
            raise VerificationError("#critical points = dim Sing F^k(A(z0))",
                                    f"{len(points)} points vs dim {reg.basis.shape[1]}")
        worst = 0.0
        B = exact.to_float(reg.basis)
        for cp in points:
            t = cp.t_exact if cp.t_exact is not None else cp.t
            v = special_vector(family, z0, t)
            vf = np.array([float(x) for x in v])
            coords, *_ = np.linalg.lstsq(B, vf, rcond=None)
            if np.max(np.abs(B @ coords - vf)) > cfg.tol_verify * np.max(np.abs(vf)):
                raise VerificationError("special vectors lie in Sing F^k(A(z0))", f"region {cp.region}")
            f = family.f(z0, cp.t)
            for j, m in enumerate(reg.operators):
                lam = float(family.weights[j]) / float(f[j])
                err = np.max(np.abs(exact.to_float(m) @ coords - lam * coords))
                worst = max(worst, err / max(1.0, abs(lam)) / np.max(np.abs(coords)))
        if worst > cfg.tol_verify:
            raise VerificationError("special vectors are joint eigenvectors of pr K_j^1(z0)",
                                    f"max relative residual {worst:.3e}")
        return {"points": len(points), "max_residual": worst}

    out = [run_check(f"{name}: degenerate subspaces", subspaces)]
    if out[0].passed:
        out.append(run_check(f"{name}: naive Hamiltonians preserve F^k(A(z0))", naive))
        out.append(run_check(f"{name}: regularized Hamiltonians", regularized))
        if out[-1].passed and _is_real_positive(family):
            out.append(run_check(f"{name}: joint eigenvectors are special vectors", eigenvectors))
    return out


def family_checks(name: str, family: ArrangementFamily, z, cfg: Config, want: str = "all") -> list[CheckResult]:
    """Checks for one family at one fiber; ``want`` restricts to good or bad fibers."""
    from .arrangement import enumerate_circuits
    kind = classify_fiber(family, enumerate_circuits(family), z).kind
    if want in ("good", "bad") and kind != want:
        raise ValueError(f"{name}: fiber is {kind}, but suite '{want}' was requested")
    if kind == "good":
        return good_fiber_checks(name, family, z, cfg)
    return bad_fiber_checks(name, family, z, cfg)


# built-in corpora


def good_corpus(cfg: Config) -> list[CheckResult]:
    out = []
    for name, (fam, z) in (("triangle", fixtures.triangle()), ("pair", fixtures.pair()),
                           ("four generic lines", fixtures.four_generic_lines())):
        out.extend(good_fiber_checks(name, fam, z, cfg))
    for draw in range(20):
        fam, z = fixtures.random_family(cfg.seed * 1000 + draw, n_max=8, k_max=3)
        out.extend(good_fiber_checks(f"random good fiber {draw}", fam, z, cfg, census=False))
    for draw in range(10):
        fam, z = fixtures.random_family(cfg.seed * 1000 + 500 + draw, n_max=8, k=2)
        out.extend(critical_checks(f"census {draw}", fam, z, cfg, HamiltonianFamily(fam)))
    return out


def bad_corpus(cfg: Config) -> list[CheckResult]:
    fam, z0 = fixtures.four_lines()
    out = bad_fiber_checks("four lines", fam, z0, cfg)
    fam, z0 = fixtures.pair(weights=(2, 3), z=(1, 1))
    out.extend(bad_fiber_checks("pair at z1=z2", fam, z0, cfg))
    return out


def gaudin_corpus(cfg: Config, data=None) -> list[CheckResult]:
    from .gaudin import (GaudinData, antisymmetrizer, build_discriminantal, check_gaudin, dphi_and_gl2_bethe,
                         gaudin_hamiltonians, geometric_vs_gaudin_spectra, module_for, sk_action, sk_elements,
                         solve_discriminantal, weight_function_and_bethe)

    presets = [data] if data is not None else [
        GaudinData.sl2([1, 1], 1, [0, 1]),
        GaudinData.sl2([1, 1, 1], 1, [0, 1, 3]),
        GaudinData.sl2([-1, -1], 2, [0, 1]),
        GaudinData.gl2([1, 1], 1, [0, 1]),
    ]
    out = []
    for d in presets:
        label = f"{d.algebra} weights={[str(m) for m in d.highest]} k={list(d.kvec)} x={[str(v) for v in d.x]}"
        state: dict = {}

        def module_check(d=d):
            m = module_for(d)
            if m.is_finite:
                m.check_relations()
                m.check_shapovalov()
                ops = gaudin_hamiltonians(m, d.x)
                check_gaudin(m, ops)
            ops = gaudin_hamiltonians(m, d.x, d.k)
            return check_gaudin(m, ops, d.k)

        def discriminantal(d=d):
            arr = build_discriminantal(d, seed=cfg.seed)
            state["arr"] = arr
            group = sk_elements(d.kvec)
            for sigma in group:
                sk_action(arr, sigma)
            ant = antisymmetrizer(arr)
            order = len(group)
            if not exact.is_zero(ant @ ant - order * ant):
                raise VerificationError("Ant^2 = k_1!...k_r! Ant", "antisymmetrizer identity fails")
            return {"n": arr.family.n, "k": arr.family.k, "group_order": order}

        def bethe(d=d):
            arr = state["arr"]
            points = solve_discriminantal(arr)
            m = module_for(d)
            vecs = []
            for cp in points:
                t = cp.t_exact if cp.t_exact is not None else cp.t
                bv = weight_function_and_bethe(m, d, t, critical=True, tol=cfg.tol_verify, arr=arr)
                vecs.append(bv.to_json())
            return {"bethe_vectors": vecs}

        def spectra(d=d):
            return geometric_vs_gaudin_spectra(d, cfg.tol_verify)

        out.append(run_check(f"gaudin {label}: module and Hamiltonians", module_check))
        out.append(run_check(f"gaudin {label}: discriminantal arrangement and S_k action", discriminantal))
        if not out[-1].passed:
            continue
        try:
            solve_discriminantal(state["arr"])
            solvable = True
        except ValueError:
            solvable = False
        if solvable:
            out.append(run_check(f"gaudin {label}: Bethe vectors", bethe))
            if d.r == 1:
                out.append(run_check(f"gaudin {label}: geometric vs Gaudin spectra", spectra))
        if d.algebra == "gl2" and solvable:
            def rowdet(d=d):
                pts = solve_discriminantal(state["arr"])
                reps = []
                for cp in pts:
                    t = cp.t_exact if cp.t_exact is not None else cp.t
                    rep = dphi_and_gl2_bethe(d, t, tol=cfg.tol_verify)
                    reps.append({"t": [str(v) for v in t], "G": rep["G"], "samples": len(rep["samples"]),
                                 "b2_residues": rep["b2_residues"]})
                return {"points": reps}
            out.append(run_check(f"gaudin {label}: gl2 row determinant", rowdet))
    return out


def run_suite(suite: str, cfg: Config, family=None, z=None, gaudin_data=None) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if family is not None:
        if z is None:
            raise ValueError("the arrangement file needs a fiber point 'z' for verification")
        if suite == "gaudin":
            raise ValueError("the gaudin suite takes a preset file, not an arrangement")
        return family_checks("input", family, z, cfg, suite)
    if gaudin_data is not None:
        if suite not in ("gaudin", "all"):
            raise ValueError(f"suite '{suite}' does not apply to a Gaudin preset")
        return gaudin_corpus(cfg, gaudin_data)
    out = []
    if suite in ("good", "all"):
        out.extend(good_corpus(cfg))
    if suite in ("bad", "all"):
        out.extend(bad_corpus(cfg))
    if suite in ("gaudin", "all"):
        out.extend(gaudin_corpus(cfg))
    return out
