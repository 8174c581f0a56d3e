"""Command-line front end: determinants, verification suites, momentum maps and flows."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import verify
from .qlinalg import QMatrix, dieudonne_det, study_determinant
from .s4 import MIN_GRID, s4_volume
from .trimomentum import GrassmannPoint, Hypersimplex, grassmann_coords, hypersimplex_contains, mu_standard, nambu_flow, orbit_scan
from .trimomentum.polytope import CONTAIN_TOL

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SCAN_TOLERANCES = {"contain": CONTAIN_TOL}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    tolerances: dict[str, float] = field(default_factory=dict)
    out: str | None = None
    format: str = "json"


def _split_tolerances(argv: list[str]) -> tuple[list[str], dict[str, float]]:
    """Pull ``--tol.NAME VALUE`` / ``--tol.NAME=VALUE`` pairs out of argv."""
    rest, tol = [], {}
    it = iter(argv)
    for arg in it:
        if not arg.startswith("--tol."):
            rest.append(arg)
            continue
        name, sep, value = arg[len("--tol."):].partition("=")
        if not sep:
            value = next(it, None)
            if value is None:
                raise UsageError(f"--tol.{name} needs a value")
        try:
            tol[name] = float(value)
        except ValueError:
            raise UsageError(f"--tol.{name}: not a number: {value!r}") from None
    return rest, tol


def _load_matrix(path: str) -> QMatrix:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc.msg})") from None
    try:
        return QMatrix.from_json(obj)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {cfg.out}: {exc.strerror}") from None


def _fmt(v: float) -> str:
    return repr(float(v))


def _check_tol_names(cfg: RunConfig, allowed) -> None:
    bad = sorted(set(cfg.tolerances) - set(allowed))
    if bad:
        raise UsageError(f"unknown tolerance name(s): {', '.join(bad)}")


def cmd_det(args, cfg: RunConfig) -> int:
    _check_tol_names(cfg, ())
    a = _load_matrix(args.matrix)
    if a.rows != a.cols:
        raise UsageError("determinant needs a square matrix")
    d, s = dieudonne_det(a), study_determinant(a)
    gap = abs(d - s) / s if s > 0 else abs(d - s)
    if cfg.format == "json":
        _emit(json.dumps({"dieudonne": d, "study": s, "relative_gap": gap}, sort_keys=True) + "\n", cfg)
    else:
        _emit(f"{_fmt(d)}, {_fmt(s)}, gap {gap:g}\n", cfg)
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    try:
        report = verify.run(args.suite, cfg.seed, cfg.tolerances)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    _emit(verify.dumps(report), cfg)
    for name in report["failed"]:
        print(f"FAILED {name}", file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_CHECK


def _plane(args) -> GrassmannPoint:
    m = _load_matrix(args.matrix)
    if m.cols != args.p:
        raise UsageError(f"matrix has {m.cols} columns but p={args.p}")
    return GrassmannPoint(m)


def cmd_mumap(args, cfg: RunConfig) -> int:
    _check_tol_names(cfg, SCAN_TOLERANCES)
    tol = cfg.tolerances.get("contain", CONTAIN_TOL)
    try:
        plane = _plane(args)
        x = grassmann_coords(plane)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK
    inside = hypersimplex_contains(Hypersimplex(plane.n, plane.p), x, tol)
    if cfg.format == "json":
        out = {"x": [float(v) for v in x], "sum": float(x.sum()), "p": plane.p, "in_hypersimplex": inside, "tol": tol}
        _emit(json.dumps(out, sort_keys=True) + "\n", cfg)
    else:
        _emit(" ".join(_fmt(v) for v in x) + f"\nsum {_fmt(x.sum())}\nin_hypersimplex {str(inside).lower()}\n", cfg)
    return EXIT_OK if inside else EXIT_CHECK


def cmd_orbit_scan(args, cfg: RunConfig) -> int:
    _check_tol_names(cfg, SCAN_TOLERANCES)
    tol = cfg.tolerances.get("contain", CONTAIN_TOL)
    if args.samples < 0:
        raise UsageError("samples must be >= 0")
    try:
        plane = _plane(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK
    report = orbit_scan(plane, args.samples, np.random.default_rng(cfg.seed), tol)
    if cfg.format == "json":
        obj = report.to_json()
        obj["tol"] = tol
        _emit(json.dumps(obj, sort_keys=True) + "\n", cfg)
    else:
        _emit(report.to_csv(), cfg)
    print(f"containment failures: {report.containment_failures}", file=sys.stderr)
    return EXIT_OK if report.containment_failures == 0 else EXIT_CHECK


# --- built-in hamiltonians for the flow command -----------------------------------

def _catalog_fn(name: str, dim: int):
    if name == "const":
        return lambda x: 1.0
    if name.startswith("x") and name[1:].isdigit():
        i = int(name[1:])
        if 1 <= i <= dim:
            return lambda x: float(x[i - 1])
    if name.startswith("norm4_") and name[6:].isdigit():
        b = int(name[6:])
        if 1 <= b <= dim // 4:
            return lambda x: float(mu_standard(np.asarray(x).reshape(-1, 4))[b - 1])
    if name == "norm4_sum":
        return lambda x: float(mu_standard(np.asarray(x).reshape(-1, 4)).sum())
    raise UsageError(f"unknown function {name!r}")


def build_hamiltonian(spec, dim: int):
    """A catalog name, or ``[[coef, name], ...]`` for a linear combination."""
    if isinstance(spec, str):
        return _catalog_fn(spec, dim)
    if isinstance(spec, list) and spec and all(isinstance(t, list) and len(t) == 2 for t in spec):
        terms = [(float(c), _catalog_fn(n, dim)) for c, n in spec]
        return lambda x: sum(c * f(x) for c, f in terms)
    raise UsageError(f"cannot parse function spec {spec!r}")


def _load_flow_spec(path: str):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc.msg})") from None
    try:
        x0 = np.array(obj["x0"], dtype=float)
        names = obj["functions"]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: flow spec needs 'functions' and 'x0' ({exc})") from None
    if x0.ndim != 1 or x0.size == 0 or x0.size % 4:
        raise UsageError("x0 must have length 4m")
    if not isinstance(names, list) or len(names) != 3:
        raise UsageError("flow spec needs exactly three functions")
    return [build_hamiltonian(n, x0.size) for n in names], x0


def cmd_flow(args, cfg: RunConfig) -> int:
    _check_tol_names(cfg, ("drift",))
    tol = cfg.tolerances.get("drift", 1e-6)
    if args.dt <= 0 or args.steps < 0:
        raise UsageError("need dt > 0 and steps >= 0")
    fs, x0 = _load_flow_spec(args.spec)
    try:
        traj = nambu_flow(*fs, x0, args.dt, args.steps)
    except FloatingPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK
    vals = np.array([[f(x) for f in fs] for x in traj])
    drift = np.abs(vals - vals[0]) / np.maximum(1.0, np.abs(vals[0]))
    max_drift = float(drift.max())
    if cfg.format == "json":
        obj = {"dt": args.dt, "steps": args.steps, "trajectory": traj.tolist(), "conserved": vals.tolist(),
               "max_drift": max_drift, "tol": tol}
        _emit(json.dumps(obj, sort_keys=True) + "\n", cfg)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "t"] + [f"x_{i + 1}" for i in range(x0.size)] + ["f_1", "f_2", "f_3", "drift"])
        for s, (x, v, d) in enumerate(zip(traj, vals, drift)):
            w.writerow([s, _fmt(s * args.dt)] + [_fmt(c) for c in x] + [_fmt(c) for c in v] + [_fmt(d.max())])
        _emit(buf.getvalue(), cfg)
    print(f"max drift: {max_drift:.3e}", file=sys.stderr)
    return EXIT_OK if max_drift <= tol else EXIT_CHECK


def cmd_s4_volume(args, cfg: RunConfig) -> int:
    _check_tol_names(cfg, ())
    if args.grid < MIN_GRID:
        raise UsageError(f"grid must be >= {MIN_GRID}")
    r = s4_volume(args.grid)
    if cfg.format == "json":
        _emit(json.dumps(r, sort_keys=True) + "\n", cfg)
    else:
        _emit("".join(f"{k} {_fmt(v) if isinstance(v, float) else v}\n" for k, v in r.items()), cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), help="output format")

    p = argparse.ArgumentParser(
        prog="tetraplectic",
        description="Quaternionic linear algebra, orbit 4-forms and tri-momentum map checks.",
        epilog="Tolerances can be overridden with --tol.NAME VALUE.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("det", parents=[common], help="Dieudonne determinant with the Study oracle")
    s.add_argument("matrix", help="matrix JSON file")
    s.set_defaults(func=cmd_det, default_format="csv")

    s = sub.add_parser("verify", parents=[common], help="run invariant suites")
    s.add_argument("suite", choices=verify.SUITES + ("all",))
    s.set_defaults(func=cmd_verify, default_format="json")

    s = sub.add_parser("mumap", parents=[common], help="momentum image of a quaternionic p-plane")
    s.add_argument("matrix")
    s.add_argument("p", type=int)
    s.set_defaults(func=cmd_mumap, default_format="csv")

    s = sub.add_parser("orbit-scan", parents=[common], help="sample a spheroid orbit and its closure")
    s.add_argument("matrix")
    s.add_argument("p", type=int)
    s.add_argument("--samples", type=int, default=1000)
    s.set_defaults(func=cmd_orbit_scan, default_format="csv")

    s = sub.add_parser("flow", parents=[common], help="integrate a quaternary-bracket flow")
    s.add_argument("spec", help="JSON file with 'functions' (three names) and 'x0'")
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--steps", type=int, default=1000)
    s.set_defaults(func=cmd_flow, default_format="csv")

    s = sub.add_parser("s4-volume", parents=[common], help="integrate the S^4 density over H")
    s.add_argument("--grid", type=int, default=20)
    s.set_defaults(func=cmd_s4_volume, default_format="csv")
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv, tol = _split_tolerances(argv)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(seed=args.seed, tolerances=tol, out=args.out, format=args.format or args.default_format)
    try:
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
