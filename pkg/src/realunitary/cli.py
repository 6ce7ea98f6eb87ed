"""Command-line interface.

Exit codes: 0 success, 1 verification failed, 2 input or format error,
3 eigensolver non-convergence, 4 recovery accounting failure.
"""
import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import __version__
from .embedding import RealEmbedding, embed, extract
from .exceptions import (
    ConvergenceError,
    DimensionError,
    NotOrthogonalError,
    RecoveryError,
    StructureError,
)
from .fixtures import load_spectrum, planted_unitary
from .mmio import MatrixMarketError, read_matrix, read_vector, write_matrix, write_vector
from .realeig import EigenDecomposition, eig_residual, real_normal_eig
from .recover import BranchBoundaryWarning, DELTA_GROUP, check_decomposition, principal_log, recover

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3
EXIT_ACCOUNTING = 4

SEED_ENV = "REALUNITARY_SEED"


class InputError(Exception):
    pass


def _read(path):
    try:
        return read_matrix(path)
    except MatrixMarketError as exc:
        raise InputError(str(exc)) from None


def _read_vec(path):
    try:
        return read_vector(path)
    except MatrixMarketError as exc:
        raise InputError(str(exc)) from None


def _real(A, path):
    if np.iscomplexobj(A):
        if np.any(A.imag != 0):
            raise InputError(f"{path}: expected a real matrix")
        A = A.real
    return A


def _json_float(x):
    return None if x is None or not np.isfinite(x) else float(x)


def _write_report(path, doc):
    if path is None:
        return
    doc = {"version": __version__, **doc}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def recovery_document(report, inputs, passed, error=None):
    """JSON-serializable summary of a :class:`RecoveryReport`."""
    doc = {
        "command": "recover",
        "inputs": inputs,
        "tolerances": {
            "delta_group": report.delta_group if report else None,
            "tau_rank": "auto" if report is None or report.tau_rank is None else report.tau_rank,
        },
        "groups": [],
        "residuals": {},
        "pass": bool(passed),
    }
    if report is not None:
        doc["n"] = report.n
        doc["groups"] = [
            {
                "mu_re": g.mu.real,
                "mu_im": g.mu.imag,
                "raw_mu_re": g.raw_mu.real,
                "raw_mu_im": g.raw_mu.imag,
                "m_M": g.m_M,
                "rank": g.rank,
                "m_Ubar": g.m_Ubar,
                "tau": g.tau,
            }
            for g in report.groups
        ]
        doc["residuals"] = {
            "decomp": report.residual_decomp,
            "unitary": report.residual_unitary,
            "reconstruction": report.residual_reconstruction,
        }
        doc["min_group_gap"] = _json_float(report.min_group_gap)
    if error:
        doc["error"] = error
    return doc


def cmd_gen(args):
    try:
        spec = load_spectrum(args.spec, seed=args.seed)
        planted = planted_unitary(spec)
    except (OSError, ValueError) as exc:
        raise InputError(f"bad spectrum spec {args.spec}: {exc}") from None
    write_matrix(args.out_u, planted.U)
    if args.out_v:
        write_matrix(args.out_v, planted.V)
    if args.out_lambda:
        write_vector(args.out_lambda, planted.eigenvalues)
    print(f"planted n={spec.n} seed={spec.seed}")
    return EXIT_OK


def cmd_embed(args):
    U = _read(args.in_u)
    try:
        M = embed(U)
    except DimensionError as exc:
        raise InputError(str(exc)) from None
    write_matrix(args.out_m, M.matrix)
    return EXIT_OK


def cmd_extract(args):
    M = _real(_read(args.in_m), args.in_m)
    try:
        U = extract(M, tol=args.structure_tol)
    except (StructureError, DimensionError) as exc:
        raise InputError(str(exc)) from None
    write_matrix(args.out_u, U)
    return EXIT_OK


def cmd_eigen(args):
    M = _real(_read(args.in_m), args.in_m)
    try:
        emb = RealEmbedding.from_matrix(M, tol=args.structure_tol)
        E = real_normal_eig(emb)
    except (StructureError, DimensionError, NotOrthogonalError) as exc:
        raise InputError(str(exc)) from None
    write_matrix(args.out_z, E.Z)
    write_vector(args.out_sigma, E.sigma)
    print(f"eig_residual = {eig_residual(emb, E):.3e}")
    return EXIT_OK


def cmd_recover(args):
    Z = _read(args.in_z)
    sigma = _read_vec(args.in_sigma)
    try:
        E = EigenDecomposition(Z, sigma)
    except DimensionError as exc:
        raise InputError(str(exc)) from None
    M = None
    if args.in_m:
        try:
            M = RealEmbedding.from_matrix(_real(_read(args.in_m), args.in_m))
        except (StructureError, DimensionError) as exc:
            raise InputError(str(exc)) from None
        if M.matrix.shape != Z.shape:
            raise InputError(f"embedding {M.matrix.shape} and eigenbasis {Z.shape} do not match")
        res = eig_residual(M, E)
        if res > 1e-8:
            raise InputError(f"eigendecomposition does not match the embedding (residual {res:.2e})")
    inputs = {"z": args.in_z, "sigma": args.in_sigma, "m": args.in_m}
    tau = None if args.tau_rank == "auto" else float(args.tau_rank)
    try:
        report = recover(E, delta_group=args.delta_group, tau_rank=tau, M=M)
    except NotOrthogonalError as exc:
        doc = recovery_document(None, inputs, False, str(exc))
        doc["tolerances"]["delta_group"] = args.delta_group
        _write_report(args.report, doc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ACCOUNTING
    except RecoveryError as exc:
        _write_report(args.report, recovery_document(exc.report, inputs, False, str(exc)))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ACCOUNTING
    if args.out_v:
        write_matrix(args.out_v, report.V)
    if args.out_lambda:
        write_vector(args.out_lambda, report.eigenvalues)
    _write_report(args.report, recovery_document(report, inputs, True))
    if args.figure:
        from .plotting import plot_recovery

        plot_recovery(report, args.figure)
    for g in report.groups:
        print(f"mu = {g.mu.real:+.12f} {g.mu.imag:+.12f}i  m_M = {g.m_M}  rank = {g.rank}")
    return EXIT_OK


def cmd_verify(args):
    U = _read(args.in_u)
    V = _read(args.in_v)
    lam = _read_vec(args.in_lambda)
    try:
        rec = check_decomposition(U, V, lam, rtol=args.rtol)
    except DimensionError as exc:
        raise InputError(str(exc)) from None
    doc = {
        "command": "verify",
        "inputs": {"u": args.in_u, "v": args.in_v, "lambda": args.in_lambda},
        "tolerances": {"rtol": args.rtol, "threshold": rec.threshold},
        "groups": [],
        "residuals": {
            "decomp": rec.residual_decomp,
            "unitary": rec.residual_unitary,
            "reconstruction": rec.residual_reconstruction,
            "modulus": float(np.max(np.abs(rec.modulus_deviation))),
        },
        "checks": rec.checks,
        "pass": rec.passed,
    }
    _write_report(args.report, doc)
    print(f"{'PASS' if rec.passed else 'FAIL'} decomp={rec.residual_decomp:.3e} "
          f"unitary={rec.residual_unitary:.3e} reconstruction={rec.residual_reconstruction:.3e}")
    return EXIT_OK if rec.passed else EXIT_FAIL


def cmd_logm(args):
    V = _read(args.in_v)
    lam = _read_vec(args.in_lambda)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", BranchBoundaryWarning)
        try:
            log = principal_log(V, lam)
        except DimensionError as exc:
            raise InputError(str(exc)) from None
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    write_matrix(args.out_h, log.H)
    print(f"hermiticity_residual = {log.hermiticity_residual:.3e}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="realunitary",
        description="Unitary eigendecompositions recovered from real block embeddings.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="plant a unitary with a prescribed spectrum")
    p.add_argument("spec", help="file of 'theta_radians multiplicity' lines")
    p.add_argument("--seed", type=int, default=int(os.environ.get(SEED_ENV, 0)),
                   help=f"generator seed (default ${SEED_ENV} or 0)")
    p.add_argument("--out-u", required=True)
    p.add_argument("--out-v")
    p.add_argument("--out-lambda")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("embed", help="write M = [[A, -B], [B, A]] for U = A + iB")
    p.add_argument("--in-u", required=True)
    p.add_argument("--out-m", required=True)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover U from its embedding")
    p.add_argument("--in-m", required=True)
    p.add_argument("--out-u", required=True)
    p.add_argument("--structure-tol", type=float, default=1e-13)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("eigen", help="real-arithmetic eigendecomposition of M")
    p.add_argument("--in-m", required=True)
    p.add_argument("--out-z", required=True)
    p.add_argument("--out-sigma", required=True)
    p.add_argument("--structure-tol", type=float, default=1e-13)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("recover", help="unitary eigendecomposition of U from (Z, sigma) of M")
    p.add_argument("--in-z", required=True)
    p.add_argument("--in-sigma", required=True)
    p.add_argument("--in-m", help="embedding, used to validate Z and compute residuals")
    p.add_argument("--delta-group", type=float, default=DELTA_GROUP,
                   help="phase gap in radians separating distinct eigenvalues (default %(default)g)")
    p.add_argument("--tau-rank", default="auto",
                   help="absolute rank threshold, or 'auto' (default)")
    p.add_argument("--out-v")
    p.add_argument("--out-lambda")
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--figure", help="write a spectrum figure (png, pdf, svg)")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("verify", help="check U = V diag(lambda) V^H")
    p.add_argument("--in-u", required=True)
    p.add_argument("--in-v", required=True)
    p.add_argument("--in-lambda", required=True)
    p.add_argument("--rtol", type=float, default=1e-8,
                   help="per-dimension residual tolerance (default %(default)g)")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("logm", help="principal generator H with U = exp(iH)")
    p.add_argument("--in-v", required=True)
    p.add_argument("--in-lambda", required=True)
    p.add_argument("--out-h", required=True)
    p.set_defaults(func=cmd_logm)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
