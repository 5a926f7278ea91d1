"""Command-line front end.

Exit codes: 0 when the tested principle holds (or the command succeeded),
1 when it is violated or incompatible, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import algebra, certify, explore, models
from .errors import NCOUPError
from .symplectic import NCParams, standard_J, symplectic_spectrum

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT = 0, 1, 2


class CLIInputError(Exception):
    """Bad input file or flag; the message names the offending field."""


# ---------------------------------------------------------------- matrix files


def format_number(x: float) -> str:
    x = float(x)
    if not np.isfinite(x):
        raise CLIInputError(f"cannot serialise non-finite value {x!r}")
    if x == 0 and np.signbit(x):
        return "-0.0"  # "-0" would parse back as the integer 0
    return format(x, ".17g")


def matrix_document(M, **extra) -> str:
    """MatrixDocument text: ``{"rows", "cols", "data"}`` with 17 significant digits."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    rows = ",\n    ".join("[" + ", ".join(format_number(x) for x in row) + "]" for row in M)
    head = [f'"rows": {M.shape[0]}', f'"cols": {M.shape[1]}']
    for key, value in extra.items():
        head.append(f"{json.dumps(key)}: {_json_value(value)}")
    return "{\n  " + ",\n  ".join(head) + f',\n  "data": [\n    {rows}\n  ]\n}}\n'


def _json_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_number(value)
    if isinstance(value, np.ndarray):
        return matrix_document(value).strip().replace("\n", "\n  ")
    return json.dumps(value)


def parse_matrix(doc, label: str) -> np.ndarray:
    if not isinstance(doc, dict):
        raise CLIInputError(f"{label}: top level must be an object with rows, cols, data")
    for key in ("rows", "cols", "data"):
        if key not in doc:
            raise CLIInputError(f"{label}: missing field '{key}'")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    for key, v in (("rows", rows), ("cols", cols)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise CLIInputError(f"{label}: field '{key}' must be a positive integer")
    if not isinstance(data, list) or len(data) != rows:
        raise CLIInputError(f"{label}: field 'data' must hold {rows} rows")
    out = np.empty((rows, cols))
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise CLIInputError(f"{label}: field 'data[{i}]' must hold {cols} numbers")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not np.isfinite(x):
                raise CLIInputError(f"{label}: field 'data[{i}][{j}]' is not a finite number")
            out[i, j] = x
    if rows != cols:
        raise CLIInputError(f"{label}: fields 'rows' and 'cols' must agree (square matrix)")
    return out


def read_matrix(path: str, flag: str) -> np.ndarray:
    label = f"{flag} ({path})"
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CLIInputError(f"{label}: cannot read file: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CLIInputError(f"{label}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return parse_matrix(doc, label)


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _require_shape(M, shape, flag):
    if M.shape != shape:
        raise CLIInputError(f"{flag}: expected a {shape[0]}x{shape[1]} matrix, got {M.shape[0]}x{M.shape[1]}")


# ---------------------------------------------------------------- commands


def _params(args) -> NCParams:
    return NCParams(args.theta, args.eta, args.hbar)


def _emit(report: certify.CertReport, **extra) -> None:
    line = report.to_line()
    if extra:
        line += " " + " ".join(f"{k}={_scalar(v)}" for k, v in extra.items())
    print(line)


def _scalar(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _code(holds: bool) -> int:
    return EXIT_OK if holds else EXIT_VIOLATED


def cmd_spectrum(args) -> int:
    A = read_matrix(args.A, "--A")
    if args.xi:
        Xi = read_matrix(args.xi, "--xi")
    else:
        if A.shape[0] % 2:
            raise CLIInputError("--A: dimension must be even")
        Xi = args.hbar * standard_J(A.shape[0] // 2)
    spec = symplectic_spectrum(A, Xi)
    values = ",".join(repr(float(v)) for v in spec.values)
    print(f"values={values} lambda1={float(spec.values[0])!r} pairing_defect={spec.pairing_defect!r}")
    return EXIT_OK


def cmd_check(args) -> int:
    tol = args.tol
    if args.principle == "rsup":
        report = certify.rsup(read_matrix(args.sigma, "--sigma"), args.hbar, tol)
    elif args.principle == "form":
        report = certify.check_form(read_matrix(args.A, "--A"), read_matrix(args.xi, "--xi"), tol)
    else:
        K = read_matrix(args.K, "--K")
        G = read_matrix(args.G, "--G") if args.G else args.hbar * standard_J(2)
        Gamma = read_matrix(args.gamma, "--gamma") if args.gamma else np.zeros_like(K)
        T = None
        if args.principle == "ncoup":
            if not args.T:
                raise CLIInputError("--T: required for 'check ncoup'")
            T = read_matrix(args.T, "--T")
        report = certify.oup_matrix(K, G, Gamma, T, tol)
    _emit(report)
    return _code(report.holds)


def _model_lines(model: models.MeasurementModel) -> list[str]:
    out = []
    for name in ("Lambda", "Pi", "Gamma", "Tmat", "Xi_eff"):
        M = getattr(model, name)
        data = ";".join(",".join(format_number(x) for x in row) for row in M)
        out.append(f"{name}={data}")
    return out


def cmd_bae(args) -> int:
    p = _params(args)
    model = models.bae_model(p, args.gain)
    if args.action == "model":
        print(f"model=BAE gain={args.gain!r} det_Xi_eff={float(np.linalg.det(model.Xi_eff))!r}")
        for line in _model_lines(model):
            print(line)
        return EXIT_OK
    if not args.probe:
        raise CLIInputError("--probe: required for 'bae check'")
    W = read_matrix(args.probe, "--probe")
    _require_shape(W, (4, 4), "--probe")
    Z = None
    if args.object:
        Z = read_matrix(args.object, "--object")
        _require_shape(Z, (4, 4), "--object")
    K_C = models.noise_matrix(model, Z, W, commutative=True)
    hJ = p.hbar * standard_J(2)
    on_j = certify.check_form(K_C, hJ, args.tol, principle="OUP_MATRIX")
    on_x = certify.check_form(K_C, model.Xi_eff, args.tol, principle="NCOUP")
    physical = certify.check_form(W, model.Omega, args.tol).holds
    _emit(on_j, form="hbarJ")
    _emit(on_x, form="Xi_eff", probe_physical=physical)
    if on_x.holds and not on_j.holds:
        print("verdict=violates OUP, satisfies NCOUP")
    return _code(on_x.holds)


def cmd_nqt(args) -> int:
    p = _params(args)
    Z = read_matrix(args.object, "--object")
    W = read_matrix(args.probe, "--probe")
    _require_shape(Z, (4, 4), "--object")
    _require_shape(W, (4, 4), "--probe")
    report = certify.nqt_feasibility(Z, W, p, args.tol)
    _emit(report)
    return _code(report.holds)


def _terms(vec) -> str:
    parts = [f"{name}={format_number(c)}" for name, c in zip(algebra.BASIS, vec) if c != 0]
    return " ".join(parts) if parts else "0"


def cmd_evolve(args) -> int:
    p = _params(args)
    if args.model == "bae":
        stages = [algebra.bae_hamiltonian(args.gain / args.duration, args.duration)]
    else:
        stages = algebra.nqt_hamiltonians(args.t1, args.t2)
    if args.exact:
        W8 = algebra.composite_omega(p)
        print(f"model={args.model} mode=exact theta={p.theta!r} eta={p.eta!r} hbar={p.hbar!r}")
        for name in algebra.BASIS:
            out = algebra.evolve_piecewise(algebra.Observable.basis(name), stages, W8, p)
            print(f"{name}: {_terms(out.coeffs.c0)}")
        return EXIT_OK
    W8 = algebra.composite_omega_jet(p.hbar)
    print(f"model={args.model} mode=first_order hbar={p.hbar!r}")
    for name in algebra.BASIS:
        out = algebra.evolve_piecewise(algebra.Observable.basis(name), stages, W8, p)
        c = out.coeffs
        print(f"{name}: {_terms(c.c0)} | theta: {_terms(c.c_theta)} | eta: {_terms(c.c_eta)}")
    return EXIT_OK


def cmd_search(args) -> int:
    p = _params(args)
    start = read_matrix(args.start, "--start") if args.start else None
    if start is not None:
        _require_shape(start, (4, 4), "--start")
    cfg = explore.SearchConfig(p, args.gain, args.samples, args.seed, args.refine_steps, start)
    hit = explore.find_violation(cfg)
    meta = dict(theta=p.theta, eta=p.eta, hbar=p.hbar, gain=float(args.gain), seed=int(args.seed),
                samples=int(args.samples))
    if hit is None:
        write_text(args.out, json.dumps(dict(found=False, **meta), indent=2, sort_keys=True) + "\n")
        print("found=false")
        return EXIT_VIOLATED
    text = matrix_document(
        hit.W_cov, found=True, **meta, lambda1_J=hit.lambda1_J, lambda1_Xi=hit.lambda1_Xi,
        physical=hit.physical, source=hit.source, K=hit.K_cov,
    )
    write_text(args.out, text)
    print(f"found=true lambda1_J={hit.lambda1_J!r} lambda1_Xi={hit.lambda1_Xi!r} source={hit.source.replace(' ', '_')}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    p = _params(args)
    if args.probe:
        W = read_matrix(args.probe, "--probe")
        _require_shape(W, (4, 4), "--probe")
    elif args.seed is not None:
        W = explore.sample_probe_cov(explore.sample_rng(args.seed, 0), p)
    else:
        raise CLIInputError("--probe: give a probe matrix or --seed to sample one")
    rows = explore.gain_sweep(p, W, args.g_from, args.g_to, args.steps)
    explore.write_sweep_csv(rows, args.out)
    print(f"rows={len(rows)} out={args.out}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_params(sp, gain: bool = False):
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--eta", type=float, default=0.0)
    sp.add_argument("--hbar", type=float, default=1.0)
    if gain:
        sp.add_argument("--gain", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncoup", description="Uncertainty-principle certificates on phase-space covariance data.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="symplectic spectrum of A with respect to Xi")
    sp.add_argument("--A", required=True)
    sp.add_argument("--xi", help="skew form (default hbar J)")
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("check", help="positivity certificates")
    sp.add_argument("principle", choices=["rsup", "oup", "ncoup", "form"])
    sp.add_argument("--sigma")
    sp.add_argument("--A")
    sp.add_argument("--xi")
    sp.add_argument("--K")
    sp.add_argument("--G")
    sp.add_argument("--gamma")
    sp.add_argument("--T")
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=certify.DEFAULT_TOL)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("bae", help="backaction-evading amplifier")
    _add_params(sp, gain=True)
    sp.add_argument("--probe")
    sp.add_argument("--object")
    sp.add_argument("--tol", type=float, default=certify.DEFAULT_TOL)
    sp.add_argument("action", nargs="?", choices=["check", "model"], default="check")
    sp.set_defaults(func=cmd_bae)

    sp = sub.add_parser("nqt", help="noiseless quadrature transducer feasibility")
    _add_params(sp)
    sp.add_argument("--object", required=True)
    sp.add_argument("--probe", required=True)
    sp.add_argument("--tol", type=float, default=certify.DEFAULT_TOL)
    sp.set_defaults(func=cmd_nqt)

    sp = sub.add_parser("evolve", help="Heisenberg evolution coefficient tables")
    _add_params(sp, gain=True)
    sp.add_argument("--model", choices=["bae", "nqt"], required=True)
    sp.add_argument("--exact", action="store_true", help="all-orders evolution at the given theta, eta")
    sp.add_argument("--duration", type=float, default=1.0)
    sp.add_argument("--t1", type=float, default=1.0)
    sp.add_argument("--t2", type=float, default=2.0)
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("search", help="search for an OUP-violating, NCOUP-satisfying probe")
    _add_params(sp, gain=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--refine-steps", type=int, default=20)
    sp.add_argument("--start")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("sweep", help="gain sweep of both symplectic tests (CSV)")
    _add_params(sp)
    sp.add_argument("--probe")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--from", dest="g_from", type=float, default=0.5)
    sp.add_argument("--to", dest="g_to", type=float, default=5.0)
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sweep)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except CLIInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except NCOUPError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc.filename}: {exc.strerror}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
