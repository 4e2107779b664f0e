"""Command-line front end emitting machine-readable JSON reports.

Subcommands: analyze, generate, nilpotent, solve-b, verify, and
word2 {classify, construct, verify}.  Exit code 0 means the analysis
completed (a negative mathematical verdict is still a success); nonzero
codes are reserved for operational errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .equation2x2 import (
    WordShape,
    classify,
    construct_solution,
    is_simultaneously_triangularizable,
    verify_word,
)
from .errors import NormalizationRequiredError
from .matrixcore import (
    ToleranceConfig,
    find_invertible_in_span,
    fit_polynomial_in,
    mat_int_pow,
    matrix_from_json,
    matrix_to_json,
    span_residual,
    sylvester_kernel,
)
from .scalar import ExponentPair, RootOfUnity, rou_pow, rou_to_complex
from .similarity import JordanSpec, matrix_from_spec, powers_similar_general, spec_from_matrix
from .solvers import (
    build_cycle_conjugator,
    build_cycle_instance,
    enumerate_valid_k1,
    nilpotent_from_blocks,
    realize_conjugate_c,
    solve_single_eigenvalue,
)
from .spectra import multiset_power


def _max_abs(m) -> float:
    return float(np.max(np.abs(m)))


class OperationalError(Exception):
    """User-facing errors: bad files, invalid parameters, violated preconditions."""


def _load_matrix_or_spec(path: str):
    """Returns (matrix or None, spec or None) from a JSON input file."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise OperationalError(f"cannot read {path}: {exc}") from exc
    if isinstance(data, dict) and "rows" in data:
        try:
            return matrix_from_json(data), None
        except (KeyError, ValueError, TypeError) as exc:
            raise OperationalError(f"bad matrix file {path}: {exc}") from exc
    if isinstance(data, list):
        try:
            return None, JordanSpec.from_json(data)
        except (KeyError, ValueError, TypeError, IndexError) as exc:
            raise OperationalError(f"bad spec file {path}: {exc}") from exc
    raise OperationalError(f"{path}: expected a matrix object or a spec list")


def _load_matrix(path: str) -> np.ndarray:
    matrix, spec = _load_matrix_or_spec(path)
    if matrix is None:
        matrix = matrix_from_spec(spec)
    return matrix


def _exponent_pair(args) -> ExponentPair:
    try:
        return ExponentPair(args.p, args.q)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc


def _tolerances(args) -> ToleranceConfig:
    try:
        return ToleranceConfig(rank_tol=args.rank_tol, verify_tol=args.verify_tol)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc


def _base_report(command: str, args, cfg: ToleranceConfig) -> dict:
    return {
        "command": command,
        "tool_version": __version__,
        "seed": getattr(args, "seed", None),
        "tolerances": {"rank_tol": cfg.rank_tol, "verify_tol": cfg.verify_tol},
    }


def _parse_rou(text: str, label: str) -> RootOfUnity:
    try:
        return RootOfUnity.from_str(text)
    except ValueError as exc:
        raise OperationalError(f"bad {label} {text!r}: expected 'k/m'") from exc


def _parse_complex_list(text: str, label: str) -> list[complex]:
    try:
        return [complex(part) for part in text.split(",") if part]
    except ValueError as exc:
        raise OperationalError(f"bad {label} {text!r}: expected comma-separated complex numbers") from exc


def cmd_analyze(args) -> dict:
    cfg = _tolerances(args)
    pq = _exponent_pair(args)
    matrix, spec = _load_matrix_or_spec(args.input)
    if spec is None:
        try:
            spec = spec_from_matrix(matrix, pq, cfg)
        except (ValueError, OverflowError) as exc:
            raise OperationalError(f"cannot recover structure: {exc}") from exc
    report = _base_report("analyze", args, cfg)
    report["inputs"] = {"path": args.input, "p": pq.p, "q": pq.q}
    report["spec"] = spec.to_json()

    normalized = pq
    swapped = False
    if spec.zero_entry() is not None and not (1 <= pq.p < pq.q):
        if 1 <= pq.q < pq.p:
            normalized, swapped = pq.swapped(), True
        else:
            raise OperationalError(
                f"singular input needs positive exponents (got p={pq.p}, q={pq.q}); "
                "similarity of negative powers of a singular matrix is undefined"
            )
    report["normalized"] = {"p": normalized.p, "q": normalized.q, "swapped": swapped}

    try:
        spectrum = spec.spectrum()
        report["spectrum"] = spectrum.to_json()
        report["power_spectra_equal"] = (
            multiset_power(spectrum, normalized.p) == multiset_power(spectrum, normalized.q)
        )
    except ValueError:
        report["spectrum"] = None
        report["power_spectra_equal"] = False
    try:
        verdict = powers_similar_general(spec, normalized)
    except NormalizationRequiredError as exc:
        raise OperationalError(str(exc)) from exc
    report["verdict"] = verdict.to_json()

    if args.find_b:
        if matrix is None:
            matrix = matrix_from_spec(spec)
        report["conjugator"] = _solve_conjugator(matrix, normalized, cfg, args.seed)
    return report


def _solve_conjugator(matrix: np.ndarray, pq: ExponentPair, cfg: ToleranceConfig, seed: int) -> dict:
    try:
        a_p = mat_int_pow(matrix, pq.p, cfg)
        a_q = mat_int_pow(matrix, pq.q, cfg)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    basis = sylvester_kernel(a_p, a_q, cfg)
    out: dict = {"kernel_dimension": len(basis)}
    candidate = find_invertible_in_span(basis, seed=seed, cfg=cfg) if basis else None
    if candidate is None:
        out["b"] = None
        out["residual"] = None
        return out
    residual = _max_abs(np.linalg.solve(candidate, a_p @ candidate) - a_q)
    out["b"] = matrix_to_json(candidate)
    out["residual"] = residual
    return out


def cmd_generate(args) -> dict:
    cfg = _tolerances(args)
    pq = _exponent_pair(args)
    if args.n < 1:
        raise OperationalError(f"n must be >= 1, got {args.n}")
    report = _base_report("generate", args, cfg)
    report["inputs"] = {"n": args.n, "p": pq.p, "q": pq.q, "k1": args.k1, "scale": args.scale}
    try:
        valid = enumerate_valid_k1(args.n, pq)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    report["valid_k1"] = [k.value for k in valid]
    report["modulus"] = valid[0].modulus if valid else abs(pq.q**args.n - pq.p**args.n)
    if args.k1 is None:
        return report
    try:
        inst = build_cycle_instance(args.n, pq, args.k1)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    scale = (
        _parse_complex_list(args.scale, "--scale") if args.scale else [1.0 + 0j] * args.n
    )
    try:
        b = build_cycle_conjugator(inst, scale)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    a = inst.diagonal_matrix()
    residual = _max_abs(np.linalg.solve(b, mat_int_pow(a, pq.p, cfg) @ b) - mat_int_pow(a, pq.q, cfg))
    report["instance"] = inst.to_json()
    report["a"] = matrix_to_json(a)
    report["b"] = matrix_to_json(b)
    report["residual"] = residual
    return report


def cmd_nilpotent(args) -> dict:
    cfg = _tolerances(args)
    pq = _exponent_pair(args)
    lam = _parse_rou(args.lam, "--lam")
    try:
        blocks = [int(part) for part in args.blocks.split(",") if part]
    except ValueError as exc:
        raise OperationalError(f"bad --blocks {args.blocks!r}: {exc}") from exc
    if not blocks or any(b < 1 for b in blocks):
        raise OperationalError(f"bad --blocks {args.blocks!r}: need positive sizes")
    report = _base_report("nilpotent", args, cfg)
    report["inputs"] = {"lambda": str(lam), "blocks": blocks, "p": pq.p, "q": pq.q}
    try:
        solution = solve_single_eigenvalue(lam, blocks, pq)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    n = solution.n
    lam_c = rou_to_complex(lam)
    nil = nilpotent_from_blocks(solution.block_sizes)
    a_mat = lam_c * np.eye(n) + nil
    c_mat = lam_c * np.eye(n) + solution.m_matrix
    power_residual = _max_abs(mat_int_pow(c_mat, pq.p, cfg) - mat_int_pow(a_mat, pq.q, cfg))
    conj_residual = _max_abs(np.linalg.solve(solution.b0, nil @ solution.b0) - solution.m_matrix)
    report["solution"] = solution.to_json()
    report["alpha_exact"] = [str(c) for c in solution.poly_coeffs] if lam.num == 0 else None
    report["alpha_factored"] = [
        {"rational": str(frac), "root": str(rou_pow(lam, 1 - j))}
        for j, frac in enumerate(solution.rational_coeffs, start=1)
    ]
    report["power_residual"] = power_residual
    report["conjugation_residual"] = conj_residual
    return report


def cmd_solve_b(args) -> dict:
    cfg = _tolerances(args)
    pq = _exponent_pair(args)
    matrix = _load_matrix(args.input)
    report = _base_report("solve-b", args, cfg)
    report["inputs"] = {"path": args.input, "p": pq.p, "q": pq.q}
    report["conjugator"] = _solve_conjugator(matrix, pq, cfg, args.seed)
    n = matrix.shape[0]
    try:
        a_q = mat_int_pow(matrix, pq.q, cfg)
        coeffs = fit_polynomial_in(a_q, matrix, max(n - 1, 0), cfg)
    except ValueError:
        coeffs = None
    report["polynomial_in_a_q"] = (
        [[c.real, c.imag] for c in coeffs] if coeffs is not None else None
    )
    return report


def cmd_verify(args) -> dict:
    cfg = _tolerances(args)
    pq = _exponent_pair(args)
    a = _load_matrix(args.a)
    b = _load_matrix(args.b)
    report = _base_report("verify", args, cfg)
    report["inputs"] = {"a": args.a, "b": args.b, "p": pq.p, "q": pq.q}
    try:
        conj = realize_conjugate_c(a, b, cfg)
        a_p = mat_int_pow(a, pq.p, cfg)
        a_q = mat_int_pow(a, pq.q, cfg)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    report["residual"] = _max_abs(np.linalg.solve(b, a_p @ b) - a_q)
    report["c"] = matrix_to_json(conj.c)
    report["commutation_residual"] = conj.commutation_residual
    report["c_commutes_with_a"] = conj.commutes
    return report


def _word_shape(args) -> WordShape:
    try:
        return WordShape(args.r, args.s, args.rp, args.sp, args.eps)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc


def cmd_word2_classify(args) -> dict:
    cfg = _tolerances(args)
    shape = _word_shape(args)
    report = _base_report("word2 classify", args, cfg)
    report["inputs"] = {
        "r": shape.r, "s": shape.s, "rp": shape.r_prime, "sp": shape.s_prime, "eps": shape.epsilon,
    }
    result = classify(shape, max_report=args.max_report)
    report["classification"] = result.to_json()
    return report


def cmd_word2_construct(args) -> dict:
    cfg = _tolerances(args)
    shape = _word_shape(args)
    u = _parse_rou(args.u, "--u")
    rho = _parse_rou(args.rho, "--rho")
    try:
        v = complex(args.v)
    except ValueError as exc:
        raise OperationalError(f"bad --v {args.v!r}") from exc
    report = _base_report("word2 construct", args, cfg)
    report["inputs"] = {
        "r": shape.r, "s": shape.s, "rp": shape.r_prime, "sp": shape.s_prime,
        "eps": shape.epsilon, "u": str(u), "rho": str(rho), "v": [v.real, v.imag],
    }
    try:
        a, b = construct_solution(shape, u, rho, v)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    report["a"] = matrix_to_json(a)
    report["b"] = matrix_to_json(b)
    report["sigma"] = [complex(b[1, 0]).real, complex(b[1, 0]).imag]
    report["residual"] = verify_word(a, b, shape, cfg)
    report["simultaneously_triangularizable"] = is_simultaneously_triangularizable(a, b, cfg)
    return report


def cmd_word2_verify(args) -> dict:
    cfg = _tolerances(args)
    shape = _word_shape(args)
    a = _load_matrix(args.a)
    b = _load_matrix(args.b)
    report = _base_report("word2 verify", args, cfg)
    report["inputs"] = {
        "a": args.a, "b": args.b, "r": shape.r, "s": shape.s,
        "rp": shape.r_prime, "sp": shape.s_prime, "eps": shape.epsilon,
    }
    try:
        report["residual"] = verify_word(a, b, shape, cfg)
    except ValueError as exc:
        raise OperationalError(str(exc)) from exc
    if a.shape == (2, 2) and b.shape == (2, 2):
        report["simultaneously_triangularizable"] = is_simultaneously_triangularizable(a, b, cfg)
    return report


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--rank-tol", type=float, default=1e-9, dest="rank_tol")
    parser.add_argument("--verify-tol", type=float, default=1e-9, dest="verify_tol")
    parser.add_argument("--seed", type=int, default=0)
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=True, help="JSON output (default)")
    fmt.add_argument("--pretty", action="store_true", help="human-readable summary")


def _add_pq(parser: argparse.ArgumentParser):
    parser.add_argument("-p", type=int, required=True)
    parser.add_argument("-q", type=int, required=True)


def _add_shape(parser: argparse.ArgumentParser):
    parser.add_argument("-r", type=int, required=True)
    parser.add_argument("--rp", type=int, required=True, help="exponent r'")
    parser.add_argument("-s", type=int, required=True)
    parser.add_argument("--sp", type=int, required=True, help="exponent s'")
    parser.add_argument("--eps", type=int, required=True, choices=(-1, 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simpow",
        description="Similarity of matrix powers and 2x2 matrix word equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="similarity verdict for A^p vs A^q")
    p_an.add_argument("input", help="matrix or spec JSON file")
    _add_pq(p_an)
    p_an.add_argument("--find-b", action="store_true", dest="find_b")
    _add_common(p_an)
    p_an.set_defaults(func=cmd_analyze)

    p_gen = sub.add_parser("generate", help="distinct-eigenvalue solutions from a seed residue")
    p_gen.add_argument("-n", type=int, required=True)
    _add_pq(p_gen)
    p_gen.add_argument("--k1", type=int, default=None)
    p_gen.add_argument("--scale", type=str, default=None, help="comma-separated complex scales")
    _add_common(p_gen)
    p_gen.set_defaults(func=cmd_generate)

    p_nil = sub.add_parser("nilpotent", help="single-eigenvalue solver")
    p_nil.add_argument("--lam", type=str, required=True, help="eigenvalue as 'k/m'")
    p_nil.add_argument("--blocks", type=str, required=True, help="comma-separated block sizes")
    _add_pq(p_nil)
    _add_common(p_nil)
    p_nil.set_defaults(func=cmd_nilpotent)

    p_sb = sub.add_parser("solve-b", help="conjugator via the intertwiner kernel")
    p_sb.add_argument("input", help="matrix or spec JSON file")
    _add_pq(p_sb)
    _add_common(p_sb)
    p_sb.set_defaults(func=cmd_solve_b)

    p_ver = sub.add_parser("verify", help="residual of B^-1 A^p B = A^q")
    p_ver.add_argument("a", help="matrix JSON file for A")
    p_ver.add_argument("b", help="matrix JSON file for B")
    _add_pq(p_ver)
    _add_common(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_w2 = sub.add_parser("word2", help="the 2x2 word equation A^r B^s A^r' B^s' = eps*I")
    w2 = p_w2.add_subparsers(dest="word2_command", required=True)

    w_cl = w2.add_parser("classify", help="enumerate non-ST solution families")
    _add_shape(w_cl)
    w_cl.add_argument("--max-report", type=int, default=100, dest="max_report")
    _add_common(w_cl)
    w_cl.set_defaults(func=cmd_word2_classify)

    w_co = w2.add_parser("construct", help="build a non-ST solution pair")
    _add_shape(w_co)
    w_co.add_argument("--u", type=str, required=True, help="root of unity 'k/m'")
    w_co.add_argument("--rho", type=str, required=True, help="root of unity 'k/m'")
    w_co.add_argument("--v", type=str, required=True, help="nonzero complex number")
    _add_common(w_co)
    w_co.set_defaults(func=cmd_word2_construct)

    w_ve = w2.add_parser("verify", help="word residual for explicit matrices")
    w_ve.add_argument("a", help="matrix JSON file for A")
    w_ve.add_argument("b", help="matrix JSON file for B")
    _add_shape(w_ve)
    _add_common(w_ve)
    w_ve.set_defaults(func=cmd_word2_verify)

    return parser


def _pretty_lines(report: dict, indent: int = 0) -> list[str]:
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_pretty_lines(value, indent + 1))
        elif isinstance(value, list) and len(value) > 8:
            lines.append(f"{pad}{key}: [{len(value)} items]")
        else:
            lines.append(f"{pad}{key}: {value}")
    return lines


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except OperationalError as exc:
        error_report = {"command": args.command, "error": str(exc), "tool_version": __version__}
        print(json.dumps(error_report, sort_keys=True))
        return 1
    if args.pretty:
        print("\n".join(_pretty_lines(report)))
    else:
        print(json.dumps(report, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
