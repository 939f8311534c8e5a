"""Command-line front end: subcommand dispatch and report emission.

Exit codes: 0 success, 1 parse/usage error, 2 domain error, 3 oracle failure
or inconclusive verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import (
    DegenerateError,
    DomainError,
    NonUnitError,
    OracleError,
    ParseError,
    RingMismatchError,
)
from .exactpoly import ExactPolynomial
from .goze import decompose
from .matrices import (
    PerturbedMatrix,
    char_poly,
    conservative_residuals,
    eigenvalue_correction,
    hermitian_first_order,
    orbit_dimension,
    perturbation_poly,
)
from .oracle import (
    transfer_residual,
    verify_pgcd,
    verify_root_asymptotics,
)
from .parsing import (
    parse_matrix_json,
    parse_polynomial,
    parse_scalar,
    parse_series,
    ring_for,
)
from .ppoly import (
    BalanceQuadratic,
    PerturbedPolynomial,
    RootAsymptotics,
    dominant_balance,
    monic_shadow,
    pgcd,
    root_correction,
)
from .series import SeriesRing, univariate_ring
from .transfer import RationalFunction, simplify


def _emit(args, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
        return
    for key, value in payload.items():
        if isinstance(value, list):
            print(f"{key}:")
            for item in value:
                print(f"  {json.dumps(item) if isinstance(item, (dict, list)) else item}")
        elif isinstance(value, dict):
            print(f"{key}:")
            for inner_key, inner_value in value.items():
                print(f"  {inner_key}: {inner_value}")
        else:
            print(f"{key}: {value}")


def _exact_polynomial(text: str, truncation: int, var: str = "X") -> ExactPolynomial:
    ring = ring_for(text, truncation=truncation)
    poly = parse_polynomial(text, ring, var)
    for coeff in poly.coeffs:
        if len(coeff.terms) > (1 if coeff.standard_part() else 0):
            raise DomainError("base polynomial must have exact scalar coefficients")
    return poly.shadow()


def _trace_payload(trace) -> list:
    return [
        {
            "remainder": str(step.remainder),
            "wholly_infinitesimal": step.wholly_infinitesimal,
            "exact_zero": step.exact_zero,
            "stripped_degrees": list(step.divisor_stripped_degrees),
        }
        for step in trace
    ]


def _asym_payload(result) -> dict:
    if isinstance(result, BalanceQuadratic):
        return {
            "kind": "balance",
            "quad_coeff": str(result.quad_coeff),
            "linear": str(result.linear),
            "constant": str(result.constant),
        }
    payload = {
        "kind": "power",
        "order": result.order,
        "rhs": str(result.rhs),
    }
    if result.leading_level is not None:
        payload["leading_level"] = result.leading_level
    return payload


# -- subcommand handlers -------------------------------------------------------


def _cmd_pgcd(args) -> int:
    ring = ring_for(args.p1, args.p2, truncation=args.trunc)
    a = parse_polynomial(args.p1, ring, "X")
    b = parse_polynomial(args.p2, ring, "X")
    result, trace = pgcd(a, b)
    _emit(
        args,
        {
            "pgcd": str(result),
            "monic_shadow": str(monic_shadow(result)),
            "trace": _trace_payload(trace),
        },
    )
    return 0


def _cmd_roots(args) -> int:
    base = _exact_polynomial(args.base, args.trunc)
    ring = ring_for(args.pert, truncation=args.trunc)
    shift = parse_polynomial(args.pert, ring, "X")
    root = parse_scalar(args.root, args.trunc)
    try:
        results = [root_correction(base, shift, root, args.mult)]
    except DegenerateError:
        if base.multiplicity(root) != 2:
            raise
        results = dominant_balance(base, shift, root)
    _emit(
        args,
        {
            "base_root": str(root),
            "asymptotics": [_asym_payload(r) for r in results],
        },
    )
    return 0


def _cmd_goze(args) -> int:
    texts = [chunk.strip() for chunk in args.vector.split(",")]
    ring = ring_for(*texts, truncation=args.trunc)
    entries = [parse_series(text, ring) for text in texts]
    result = decompose(entries)
    payload = {
        "levels": [
            {"alpha": str(alpha), "U": [str(u) for u in direction]}
            for alpha, direction in result.levels
        ],
        "rank": result.rank(),
    }
    if result.truncation_limited:
        payload["truncation_limited"] = True
    _emit(args, payload)
    return 0


def _cmd_charpoly(args) -> int:
    matrix = parse_matrix_json(args.matrix, args.trunc)
    _emit(args, {"charpoly": str(char_poly(matrix))})
    return 0


def _cmd_eigshift(args) -> int:
    matrix = parse_matrix_json(args.matrix, args.trunc)
    if not isinstance(matrix, PerturbedMatrix):
        raise DomainError("eigshift needs a matrix with a 'pert' block")
    eigenvalue = parse_scalar(args.eigenvalue, args.trunc)
    result = eigenvalue_correction(matrix.base, matrix, eigenvalue, args.mult)
    _emit(
        args,
        {"eigenvalue": str(eigenvalue), **_asym_payload(result)},
    )
    return 0


def _cmd_conservative(args) -> int:
    matrix = parse_matrix_json(args.matrix, args.trunc)
    if not isinstance(matrix, PerturbedMatrix):
        raise DomainError("conservative needs a matrix with a 'pert' block")
    residuals = conservative_residuals(matrix.base, matrix)
    _emit(
        args,
        {
            "residuals": [str(r) for r in residuals],
            "conservative": all(r.is_zero() for r in residuals),
        },
    )
    return 0


def _cmd_orbitdim(args) -> int:
    matrix = parse_matrix_json(args.matrix, args.trunc)
    if isinstance(matrix, PerturbedMatrix):
        matrix = matrix.base
    _emit(args, {"dimension": orbit_dimension(matrix)})
    return 0


def _cmd_hermitian(args) -> int:
    matrix = parse_matrix_json(args.matrix, args.trunc)
    direction = parse_matrix_json(args.direction, args.trunc)
    if isinstance(matrix, PerturbedMatrix) or isinstance(direction, PerturbedMatrix):
        raise DomainError("hermitian takes exact base and direction matrices")
    ring = ring_for(args.alpha, truncation=args.trunc)
    alpha = parse_series(args.alpha, ring)
    eigenvalue = parse_scalar(args.eigenvalue, args.trunc)
    shift = hermitian_first_order(matrix, direction, alpha, eigenvalue)
    _emit(args, {"shift": str(shift)})
    return 0


def _cmd_simplify_tf(args) -> int:
    ring = ring_for(args.num, args.den, truncation=args.trunc)
    function = RationalFunction(
        parse_polynomial(args.num, ring, "p"), parse_polynomial(args.den, ring, "p")
    )
    report = simplify(function)
    _emit(
        args,
        {
            "reduced_shadow": str(report.reduced_shadow),
            "pgcd": str(report.pgcd),
            "num_residual": str(report.num_residual),
            "den_residual": str(report.den_residual),
            "first_order": {g: str(c) for g, c in report.first_order.items()},
        },
    )
    return 0


# -- verification cases ----------------------------------------------------------


def _case_simple(trunc, grid, seed, tolerance):
    ring = univariate_ring(trunc)
    base = ExactPolynomial([-1, 0, 1])
    shift = PerturbedPolynomial(ring, [ring.generator("t")])
    asym = root_correction(base, shift, 1)
    return verify_root_asymptotics(base, shift, asym, grid, tolerance, seed)


def _case_double(trunc, grid, seed, tolerance):
    ring = univariate_ring(trunc)
    base = ExactPolynomial([1, -2, 1])
    shift = PerturbedPolynomial(ring, [-ring.generator("t")])
    asym = root_correction(base, shift, 1)
    return verify_root_asymptotics(base, shift, asym, grid, tolerance, seed)


def _case_refute_half(trunc, grid, seed, tolerance):
    # deliberately asserts xi^2 ~ t/2; the oracle must reject it
    ring = univariate_ring(trunc)
    base = ExactPolynomial([1, -2, 1])
    shift = PerturbedPolynomial(ring, [-ring.generator("t")])
    wrong = RootAsymptotics(parse_scalar("1"), 2, ring.generator("t") * Fraction(1, 2))
    return verify_root_asymptotics(base, shift, wrong, grid, tolerance, seed)


def _case_jordan2(trunc, grid, seed, tolerance):
    matrix = parse_matrix_json(
        '{"n":2,"base":[["1","1"],["0","1"]],"pert":[["0","0"],["t","0"]]}', trunc
    )
    asym = eigenvalue_correction(matrix.base, matrix, 1)
    return verify_root_asymptotics(
        char_poly(matrix.base), perturbation_poly(matrix), asym, grid, tolerance, seed
    )


def _case_nilpotent3(trunc, grid, seed, tolerance):
    matrix = parse_matrix_json(
        '{"n":3,"base":[["0","1","0"],["0","0","1"],["0","0","0"]],'
        '"pert":[["0","0","0"],["0","0","0"],["t","0","0"]]}',
        trunc,
    )
    asym = eigenvalue_correction(matrix.base, matrix, 0)
    return verify_root_asymptotics(
        char_poly(matrix.base), perturbation_poly(matrix), asym, grid, tolerance, seed
    )


def _case_pgcd(trunc, grid, seed, tolerance):
    ring = SeriesRing(("e1", "e2", "e3"), trunc)
    a = parse_polynomial("X^3 - e1*X - 1 + e2", ring, "X")
    b = parse_polynomial("X^2 + e3*X - 1", ring, "X")
    result, _ = pgcd(a, b)
    return verify_pgcd(a, b, min(grid), result, seed=seed)


def _case_transfer(trunc, grid, seed, tolerance):
    from .oracle import ConvergenceReport, Sample, default_values

    ring = SeriesRing(("e1", "e2", "e3"), trunc)
    function = RationalFunction(
        parse_polynomial("p^3 - e1*p - 1 + e2", ring, "p"),
        parse_polynomial("p^2 + e3*p - 1", ring, "p"),
    )
    report = simplify(function)
    grid = sorted(grid, reverse=True)
    out = ConvergenceReport(tolerance=tolerance)
    residuals = []
    for t0 in grid:
        values = default_values(ring.generators, t0)
        residual = transfer_residual(function, report, 2.0, values)
        residuals.append(residual)
        out.samples.append(Sample(t0, residual, 0j, residual))
    # quadratic decay: each 10x shrink of t0 divides the residual by ~100
    out.verdict = all(
        50 <= earlier / later <= 200
        for earlier, later in zip(residuals, residuals[1:])
    )
    return out


_VERIFY_CASES = {
    "simple": _case_simple,
    "double": _case_double,
    "refute-half": _case_refute_half,
    "jordan2": _case_jordan2,
    "nilpotent3": _case_nilpotent3,
    "pgcd": _case_pgcd,
    "transfer": _case_transfer,
}


def _cmd_verify(args) -> int:
    case = _VERIFY_CASES.get(args.case)
    if case is None:
        known = ", ".join(sorted(_VERIFY_CASES))
        raise DomainError(f"unknown case {args.case!r}; known cases: {known}")
    grid = [float(chunk) for chunk in args.grid.split(",")]
    report = case(args.trunc, grid, args.seed, args.tolerance)
    print(json.dumps(report.to_dict(), indent=2))
    return 0 if report.verdict else 3


# -- argument plumbing --------------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="perturbalg")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trunc", type=int, default=8, help="truncation degree T")
    common.add_argument("--seed", type=int, default=0, help="oracle seed")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pgcd", parents=[common], help="perturbed GCD of two polynomials")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    p.set_defaults(handler=_cmd_pgcd)

    p = sub.add_parser("roots", parents=[common], help="root asymptotics of P + Xi")
    p.add_argument("--base", required=True, help="exact polynomial in X")
    p.add_argument("--pert", required=True, help="infinitesimal polynomial in X")
    p.add_argument("--root", required=True, help="exact root of the base polynomial")
    p.add_argument("--mult", type=int, default=None)
    p.set_defaults(handler=_cmd_roots)

    p = sub.add_parser("goze", parents=[common], help="nested-scale decomposition")
    p.add_argument("--vector", required=True, help="comma-separated series")
    p.set_defaults(handler=_cmd_goze)

    p = sub.add_parser("charpoly", parents=[common], help="characteristic polynomial")
    p.add_argument("--matrix", required=True, help="matrix JSON")
    p.set_defaults(handler=_cmd_charpoly)

    p = sub.add_parser("eigshift", parents=[common], help="eigenvalue correction")
    p.add_argument("--matrix", required=True, help="matrix JSON with a pert block")
    p.add_argument("--eigenvalue", required=True)
    p.add_argument("--mult", type=int, default=None)
    p.set_defaults(handler=_cmd_eigshift)

    p = sub.add_parser("conservative", parents=[common],
                       help="characteristic-polynomial residuals of A + E")
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=_cmd_conservative)

    p = sub.add_parser("orbitdim", parents=[common], help="conjugation orbit dimension")
    p.add_argument("--matrix", required=True)
    p.set_defaults(handler=_cmd_orbitdim)

    p = sub.add_parser("hermitian", parents=[common],
                       help="first-order Hermitian eigenvalue shift")
    p.add_argument("--matrix", required=True, help="Hermitian base matrix JSON")
    p.add_argument("--direction", required=True, help="Hermitian direction JSON")
    p.add_argument("--alpha", required=True, help="infinitesimal scale series")
    p.add_argument("--eigenvalue", required=True)
    p.set_defaults(handler=_cmd_hermitian)

    p = sub.add_parser("simplify-tf", parents=[common],
                       help="reduce an uncertain transfer function")
    p.add_argument("--num", required=True, help="numerator polynomial in p")
    p.add_argument("--den", required=True, help="denominator polynomial in p")
    p.set_defaults(handler=_cmd_simplify_tf)

    p = sub.add_parser("verify", parents=[common], help="run a named oracle check")
    p.add_argument("--case", required=True)
    p.add_argument("--grid", default="1e-2,1e-3,1e-4")
    p.add_argument("--tolerance", type=float, default=0.2)
    p.set_defaults(handler=_cmd_verify)
    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, NonUnitError, RingMismatchError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleError as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
