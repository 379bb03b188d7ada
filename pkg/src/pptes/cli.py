"""Command-line front end.

Exit codes: 0 success, 1 parse error, 2 parameter error, 3 verification failure.
Reports go to stdout as JSON; ``--pretty`` also writes a short summary to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import stateio
from .classify import (
    DEFAULT_REL_TOL,
    StateType,
    classify,
    compare_reports,
    orbit_to_dict,
    verify_rank4_pptes,
)
from .constructors import (
    AlphaFormula,
    QpSpec,
    UpbSpec,
    example10_state,
    qp_state,
    type2_state,
    upb_state,
)
from .errors import PPTESError, VerificationError
from .lorentz import conjecture_state, lorentz_invariant
from .products import Partition, bipartite_products_in_subspace
from .qmat import kernel_basis, range_basis

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PARAM = 2
EXIT_VERIFY = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: error: {message}", EXIT_PARSE)


def parse_complex(text: str) -> complex:
    """Parse ``"re+imj"``; ``i`` is accepted in place of ``j``."""
    s = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r}") from None


# --------------------------------------------------------------------------- I/O helpers


def _emit(payload: dict, out: str | None = None) -> None:
    text = json.dumps(payload)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load(path: str):
    try:
        sf = stateio.load(path)
    except stateio.StateFileError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    if sf.dims != [2, 2, 2] and sf.dims != [2] * len(sf.dims):
        raise CliError(f"{path}: only qubit systems are supported, got dims {sf.dims}", EXIT_PARAM)
    return sf


def _three_qubits(sf, path: str):
    if sf.dims != [2, 2, 2]:
        raise CliError(f"{path}: expected dims [2, 2, 2], got {sf.dims}", EXIT_PARAM)
    return sf.matrix


def _note(args, text: str) -> None:
    if getattr(args, "pretty", False):
        print(text, file=sys.stderr)


# --------------------------------------------------------------------------- commands


def _construct(args) -> int:
    fam = args.family
    if fam == "upb":
        if args.theta is None:
            raise CliError("upb needs --theta with three angles", EXIT_PARAM)
        state = upb_state(UpbSpec(*args.theta))
        meta = {"family": "upb", "theta": list(args.theta)}
    elif fam == "type2":
        if args.t is None:
            raise CliError("type2 needs --t", EXIT_PARAM)
        state = type2_state(args.t, normalize=args.normalize)
        meta = {"family": "type2", "t": [args.t.real, args.t.imag], "normalized": args.normalize}
    elif fam == "qp":
        if args.p is None:
            raise CliError("qp needs --p with five weights", EXIT_PARAM)
        spec = QpSpec(tuple(args.p), AlphaFormula(args.alpha_formula))
        state = qp_state(spec)
        meta = {"family": "qp", "p": list(args.p), "alpha_formula": args.alpha_formula}
    elif fam == "example10":
        if args.t is None:
            raise CliError("example10 needs --t", EXIT_PARAM)
        state = example10_state(args.t)
        meta = {"family": "example10", "t": [args.t.real, args.t.imag]}
    else:
        state = conjecture_state(args.n, args.m, seed=args.seed)
        meta = {"family": "conjecture", "n": args.n, "m": args.m, "seed": args.seed}
    sf = stateio.from_state(state, meta=meta, tolerance=args.tol)
    _emit(sf.to_dict(), args.out)
    _note(args, f"constructed {fam} state on {len(sf.dims)} qubits, trace {np.trace(sf.matrix).real:.6g}")
    return EXIT_OK


def _classify_one(path: str, tol: float) -> tuple:
    try:
        sf = _load(path)
        rho = _three_qubits(sf, path)
        return EXIT_OK, classify(rho, tol=tol).to_dict()
    except VerificationError as exc:
        return EXIT_VERIFY, {"error": str(exc), "verification": exc.report.to_dict() if exc.report else None}
    except CliError as exc:
        return exc.code, {"error": str(exc)}
    except PPTESError as exc:
        return EXIT_PARAM, {"error": str(exc)}


def _summary(path: str, rep: dict) -> str:
    if "error" in rep:
        return f"{path}: {rep['error']}"
    line = f"{path}: {rep['type']}, {rep['upb_verdict']}, invariant {rep['invariant']:.6g}"
    orbit = rep["canonical_t_orbit"] or rep["characteristic_set"]
    re, im = orbit["canonical"]
    return line + f", orbit representative {complex(re, im):.6g}"


def _classify(args) -> int:
    if args.batch:
        files = sorted(str(p) for p in Path(args.batch).glob("*.json"))
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda f: _classify_one(f, args.tol), files))
        payload = {"results": [{"file": f, "report": rep} for f, (_, rep) in zip(files, results)]}
        _emit(payload, args.out)
        for f, (_, rep) in zip(files, results):
            _note(args, _summary(f, rep))
        return max([code for code, _ in results], default=EXIT_OK)
    if not args.input:
        raise CliError("classify needs an input file or --batch DIR", EXIT_PARSE)
    code, rep = _classify_one(args.input, args.tol)
    _emit(rep, args.out)
    _note(args, _summary(args.input, rep))
    return code


def _invariant(args) -> int:
    sf = _load(args.input)
    val = lorentz_invariant(sf.matrix)
    tr = float(np.trace(sf.matrix).real)
    payload = {"invariant": val.value, "imag_residual": val.imag_residual}
    if tr > 0:
        payload["normalized_invariant"] = val.value / tr**2
    _emit(payload, args.out)
    _note(args, f"I = {val.value:.12g} (imaginary residual {val.imag_residual:.1e})")
    return EXIT_OK


def _compare(args) -> int:
    reps = []
    for path in (args.a, args.b):
        rho = _three_qubits(_load(path), path)
        try:
            reps.append(classify(rho, tol=args.tol))
        except VerificationError as exc:
            _emit({"error": f"{path}: {exc}", "verification": exc.report.to_dict()}, args.out)
            return EXIT_VERIFY
    verdict = compare_reports(*reps)
    payload = {
        "verdict": verdict.value,
        "types": [r.type.value for r in reps],
        "orbits": [orbit_to_dict(r.characteristic_set) for r in reps],
    }
    _emit(payload, args.out)
    _note(args, f"{verdict.value} ({reps[0].type.value} vs {reps[1].type.value})")
    return EXIT_OK


def _verify(args) -> int:
    rho = _three_qubits(_load(args.input), args.input)
    rep = verify_rank4_pptes(rho, tol=args.tol)
    _emit(rep.to_dict(), args.out)
    for name, check in rep.checks.items():
        _note(args, f"{'ok  ' if check.passed else 'FAIL'} {name}: {check.detail}")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def _product_vectors(args) -> int:
    rho = _three_qubits(_load(args.input), args.input)
    basis = range_basis(rho, args.tol) if args.subspace == "range" else kernel_basis(rho, args.tol)
    if basis.shape[1] != 4:
        raise CliError(f"{args.subspace} has dimension {basis.shape[1]}, expected 4", EXIT_VERIFY)
    parts = list(Partition) if args.partition == "all" else [Partition.parse(args.partition)]
    payload = {"subspace": args.subspace, "partitions": {}}
    for part in parts:
        recs = bipartite_products_in_subspace(basis, part)
        payload["partitions"][part.label] = [r.to_dict() for r in recs]
        _note(args, f"{part.label}: {len(recs)} product vectors, {sum(r.is_tripartite for r in recs)} fully separable")
    _emit(payload, args.out)
    return EXIT_OK


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_REL_TOL, help="relative tolerance (default %(default)g)")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="also print a human-readable summary to stderr")

    parser = _Parser(prog="pptes", description="Three-qubit rank-four PPT entangled state toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[common], help="build a state file")
    p.add_argument("family", choices=["upb", "type2", "qp", "example10", "conjecture"])
    p.add_argument("--t", type=parse_complex, help='complex parameter, e.g. "0.3+0.4j"')
    p.add_argument("--theta", type=float, nargs=3, help="three UPB angles in (0, pi/2)")
    p.add_argument("--p", type=float, nargs=5, help="five positive weights summing to 1")
    p.add_argument("--alpha-formula", choices=[f.value for f in AlphaFormula], default=AlphaFormula.EX17.value)
    p.add_argument("--normalize", action="store_true", help="trace-normalize the type2 state")
    p.add_argument("--n", type=int, default=3, help="qubit count for the conjecture family")
    p.add_argument("--m", type=int, default=2, help="mixture size for the conjecture family")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_construct)

    p = sub.add_parser("classify", parents=[common], help="run the full classification")
    p.add_argument("input", nargs="?")
    p.add_argument("--batch", help="classify every *.json file in this directory")
    p.set_defaults(func=_classify)

    p = sub.add_parser("invariant", parents=[common], help="Lorentz invariant of a state")
    p.add_argument("input")
    p.set_defaults(func=_invariant)

    p = sub.add_parser("compare", parents=[common], help="SLOCC comparison of two states")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_compare)

    p = sub.add_parser("verify", parents=[common], help="structural checks only")
    p.add_argument("input")
    p.set_defaults(func=_verify)

    p = sub.add_parser("product-vectors", parents=[common], help="product vectors of range or kernel")
    p.add_argument("input")
    p.add_argument("--subspace", choices=["range", "kernel"], default="range")
    p.add_argument("--partition", choices=["all"] + [x.label for x in Partition], default="all")
    p.set_defaults(func=_product_vectors)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except argparse.ArgumentTypeError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    except VerificationError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VERIFY
    except (PPTESError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
