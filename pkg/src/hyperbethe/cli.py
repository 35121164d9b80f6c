"""Command-line front end.

    hyperbethe circuits FILE
    hyperbethe sing FILE
    hyperbethe hamiltonians FILE [--at Z] [--j J]
    hyperbethe critical FILE
    hyperbethe verify [FILE] [--suite all|good|bad|gaudin]
    hyperbethe gaudin PRESET

Exit status: 0 when every requested check passes, 1 on a failed check,
2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import exact
from .arrangement import classify_fiber, enumerate_circuits, euler_characteristic
from .critical import NewtonError, critical_report, enumerate_bounded_regions, solve_critical_points
from .flags import FlagSpace, degenerate_subspaces, sing_basis
from .hamiltonians import HamiltonianFamily, VerificationError
from .io import InputError, arrangement_from_dict, gaudin_from_dict, load_arrangement, load_gaudin
from .suites import SUITES, Config, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _q(v) -> str:
    return exact.fraction_str(v)


def _matrix_json(m) -> list[list[str]]:
    return [[_q(v) for v in row] for row in m]


def _subset(J) -> list[int]:
    return [j + 1 for j in J]


def parse_point(text: str, n: int) -> list:
    parts = [p for p in text.replace(",", " ").split() if p]
    try:
        z = [exact.to_fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--at: cannot parse {text!r} as rational numbers") from exc
    if len(z) != n:
        raise InputError(f"--at: expected {n} coordinates, got {len(z)}")
    return z


def _require_z(z, path):
    if z is None:
        raise InputError(f"{path}: a fiber point 'z' is required (in the file or via --at)")
    return z


# commands


def cmd_circuits(args, cfg) -> tuple[dict, int]:
    family, z = load_arrangement(args.file)
    circuits = enumerate_circuits(family)
    report = {"command": "circuits", "k": family.k, "n": family.n, "circuits": [
        {"support": _subset(c.support), "labels": [family.labels[j] for j in c.support],
         "syzygy": [_q(v) for v in c.syzygy]} for c in circuits]}
    if z is not None:
        cls = classify_fiber(family, circuits, z)
        report["fiber"] = {"kind": cls.kind, "vanishing": [_subset(c.support) for c in cls.vanishing_circuits],
                           "euler_characteristic": euler_characteristic(family, z)}
    return report, EXIT_OK


def cmd_sing(args, cfg) -> tuple[dict, int]:
    family, z = load_arrangement(args.file)
    sb = sing_basis(family)
    report = {"command": "sing", "dim_flags": FlagSpace(family).dim, "sing": sb.to_json()}
    if z is not None:
        circuits = enumerate_circuits(family)
        report["euler_characteristic"] = euler_characteristic(family, z)
        if not classify_fiber(family, circuits, z).is_good:
            deg = degenerate_subspaces(family, circuits, z)
            report["degenerate"] = {"dim_flags": deg.flags.dim, "sing": deg.sing.to_json()}
    return report, EXIT_OK


def cmd_hamiltonians(args, cfg) -> tuple[dict, int]:
    family, z = load_arrangement(args.file)
    if args.at is not None:
        z = parse_point(args.at, family.n)
    z = _require_z(z, args.file)
    if args.j is not None and not 1 <= args.j <= family.n:
        raise InputError(f"--j must lie in 1..{family.n}")
    hf = HamiltonianFamily(family)
    js = [args.j - 1] if args.j is not None else list(range(family.n))
    good = classify_fiber(family, hf.circuits, z).is_good
    report = {"command": "hamiltonians", "fiber": "good" if good else "bad", "z": [_q(v) for v in z],
              "kappa": hf.kappa, "basis": [_subset(J) for J in hf.space.basis()], "operators": []}
    if good:
        for j in js:
            report["operators"].append({"j": j + 1, "K": _matrix_json(hf.hamiltonian_at(z, j))})
    else:
        deg = degenerate_subspaces(family, hf.circuits, z)
        reg = hf.regularized_hamiltonians(z, deg.sing.matrix)
        report["degenerate_sing"] = deg.sing.to_json()
        report["tangent_directions"] = [[_q(v) for v in d.xi] for d in hf.tangent_directions(z)]
        for j in js:
            report["operators"].append({"j": j + 1, "K1": _matrix_json(hf.regular_part(z, j)),
                                        "regularized": _matrix_json(reg.operators[j])})
        report["regularized_commute"] = reg.commute()
        report["regularized_symmetric"] = reg.symmetric()
    return report, EXIT_OK


def cmd_critical(args, cfg) -> tuple[dict, int]:
    family, z = load_arrangement(args.file)
    z = _require_z(z, args.file)
    if any(a <= 0 for a in family.weights):
        raise InputError("the critical-point solver needs positive weights")
    regions = enumerate_bounded_regions(family, z)
    points = solve_critical_points(family, z, cfg.tol_newton, regions=regions)
    report = {"command": "critical", "regions": len(regions),
              "euler_characteristic": euler_characteristic(family, z),
              "points": critical_report(family, z, points)}
    worst = max([p.gradient_residual for p in points] + [0.0])
    return report, EXIT_OK if worst <= cfg.tol_newton else EXIT_FAIL


def _load_any(path):
    """An arrangement or a Gaudin preset, told apart by the ``algebra`` key."""
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if isinstance(obj, dict) and "algebra" in obj:
        return None, None, gaudin_from_dict(obj, str(path))
    if not isinstance(obj, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    family, z = arrangement_from_dict(obj, str(path))
    return family, z, None


def _suite_report(command, suite, results) -> tuple[dict, int]:
    failed = [r for r in results if not r.passed]
    report = {"command": command, "suite": suite, "passed": len(results) - len(failed), "failed": len(failed),
              "status": "pass" if not failed else "fail", "checks": [r.to_json() for r in results]}
    return report, EXIT_OK if not failed else EXIT_FAIL


def cmd_verify(args, cfg) -> tuple[dict, int]:
    family = z = data = None
    if args.file is not None:
        family, z, data = _load_any(args.file)
    try:
        results = run_suite(args.suite, cfg, family, z, data)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return _suite_report("verify", args.suite, results)


def cmd_gaudin(args, cfg) -> tuple[dict, int]:
    data = load_gaudin(args.preset)
    results = run_suite("gaudin", cfg, gaudin_data=data)
    report, code = _suite_report("gaudin", "gaudin", results)
    report["preset"] = {"algebra": data.algebra, "weights": [_q(m) for m in data.highest],
                        "k": list(data.kvec), "x": [_q(v) for v in data.x],
                        "shifts": [_q(data.shift(b)) for b in range(data.N)]}
    return report, code


# output


def _table(report: dict) -> str:
    cmd = report.get("command")
    lines = []
    if cmd == "circuits":
        for c in report["circuits"]:
            lines.append(f"{{{','.join(map(str, c['support']))}}}  lambda=({', '.join(c['syzygy'])})")
        if "fiber" in report:
            f = report["fiber"]
            lines.append(f"fiber: {f['kind']}  chi={f['euler_characteristic']}  vanishing={f['vanishing']}")
    elif cmd == "sing":
        lines.append(f"dim F^k = {report['dim_flags']}, dim Sing V = {report['sing']['dim']}")
        for v in report["sing"]["basis"]:
            lines.append("  " + " + ".join(f"{e['coeff']}*F{tuple(e['subset'])}" for e in v))
        if "degenerate" in report:
            d = report["degenerate"]
            lines.append(f"degenerate fiber: dim F^k(A(z0)) = {d['dim_flags']}, dim Sing = {d['sing']['dim']}")
    elif cmd == "hamiltonians":
        lines.append(f"fiber {report['fiber']} at z = ({', '.join(report['z'])})")
        lines.append("basis: " + " ".join("F" + str(tuple(J)) for J in report["basis"]))
        for op in report["operators"]:
            for key in ("K", "K1", "regularized"):
                if key in op:
                    lines.append(f"{key}_{op['j']}:")
                    lines.extend("  " + "  ".join(f"{v:>8}" for v in row) for row in op[key])
    elif cmd == "critical":
        lines.append(f"bounded regions: {report['regions']}  chi: {report['euler_characteristic']}")
        for p in report["points"]:
            t = ", ".join(f"{v:.15g}" for v in p["t"])
            lines.append(f"region {p['region']}: t=({t})  residual={p['residual']:.2e}  hess={p['hess_det']:.10g}")
    else:
        for c in report["checks"]:
            status = "PASS" if c["status"] == "pass" else "FAIL"
            extra = ", ".join(f"{k}={v}" for k, v in c["details"].items() if not isinstance(v, (list, dict)))
            lines.append(f"{status}  {c['name']}" + (f"  [{extra}]" if extra else ""))
            if c["status"] != "pass":
                lines.append(f"      {c['message']}")
        lines.append(f"{report['passed']} passed, {report['failed']} failed")
    return "\n".join(lines)


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, indent=2) + "\n")
    else:
        stream.write(_table(report) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for random draws (default 0)")
    common.add_argument("--tol-newton", type=float, default=1e-12, help="gradient residual bound")
    common.add_argument("--tol-verify", type=float, default=1e-8, help="tolerance for floating checks")
    common.add_argument("--format", choices=("table", "json"), default="table")

    parser = argparse.ArgumentParser(prog="hyperbethe", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("circuits", parents=[common], help="list circuits and their syzygies")
    p.add_argument("file")
    p = sub.add_parser("sing", parents=[common], help="basis of the singular subspace")
    p.add_argument("file")
    p = sub.add_parser("hamiltonians", parents=[common], help="geometric Hamiltonians at a fiber")
    p.add_argument("file")
    p.add_argument("--at", help="fiber point, e.g. '0,-1' or '0 1/2'")
    p.add_argument("--j", type=int, help="1-based index of a single Hamiltonian")
    p = sub.add_parser("critical", parents=[common], help="critical points of the master function")
    p.add_argument("file")
    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("file", nargs="?")
    p.add_argument("--suite", choices=SUITES, default="all")
    p = sub.add_parser("gaudin", parents=[common], help="Gaudin pipeline for a preset file")
    p.add_argument("preset")
    return parser


COMMANDS = {"circuits": cmd_circuits, "sing": cmd_sing, "hamiltonians": cmd_hamiltonians,
            "critical": cmd_critical, "verify": cmd_verify, "gaudin": cmd_gaudin}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = Config(args.seed, args.tol_newton, args.tol_verify)
        report, code = COMMANDS[args.command](args, cfg)
    except (InputError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (VerificationError, NewtonError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
