"""Command line entry point: ``reslie <command> ...``.

Exit codes: 0 success, 1 a property failed, 2 the input did not parse or
validate (or was rejected by the command), 3 a size limit was hit.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .. import abelian, canonical, env, isotest, liealg
from ..errors import NotAbelian, NotPNilpotent, ParseError, SizeLimit, ValidationError
from . import fileformat
from .catalog import FIXTURE_DIR, catalog_paths
from .report import Report, input_entry
from .verify import DEFAULT_TRIALS, algebra_facts, run_catalog

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT, EXIT_SIZE = 0, 1, 2, 3


class InputRejected(Exception):
    """The command cannot handle this (valid) input."""


def _load(report: Report, path):
    path = Path(path)
    text = path.read_text()
    P = fileformat.parse(text, source=str(path))
    report.inputs.append(input_entry(path, text, P))
    return P


def _subspace(S) -> list:
    return [list(v) for v in S.basis]


def cmd_validate(args, report: Report) -> int:
    P = _load(report, args.path)
    report.body = {"valid": True, "dim": P.dim, "names": list(P.names)}
    return EXIT_OK


def cmd_invariants(args, report: Report) -> int:
    P = _load(report, args.path)
    with report.timed("invariants"):
        U = env.PBWAlgebra(P)
        facts = algebra_facts(P, U)
        if args.max_omega_power:
            facts["omega_dims"] = facts["omega_dims"][: args.max_omega_power]
        body = {
            "facts": facts,
            "gamma_series": [_subspace(g) for g in liealg.lower_central_series(P)],
            "dimension_series": [_subspace(d) for d in liealg.dimension_series(P)],
            "center": _subspace(liealg.center(P)),
            "derived_p": _subspace(liealg.derived_p(P)),
        }
        if liealg.is_p_nilpotent(P):
            gd = liealg.graded_data(P)
            body["graded"] = {"presentation": fileformat.serialize(gd.algebra),
                              "weights": list(gd.algebra.weights)}
            body["fingerprint"] = env.fingerprint(P, U).to_dict()
        else:
            body["fingerprint"] = None
            body["fingerprint_skipped"] = "not p-nilpotent"
    report.body = body
    return EXIT_OK


def cmd_decompose(args, report: Report) -> int:
    P = _load(report, args.path)
    if not P.is_abelian:
        raise InputRejected("decompose needs an abelian algebra (nonzero brackets found)")
    fd = abelian.fitting_decomposition(P)
    body = {
        "rank_profile": abelian.rank_profile(abelian.as_semilinear(P)),
        "fitting": {"invertible_part": _subspace(fd.invertible_part), "nil_part": _subspace(fd.nil_part),
                    "toral_spanned": fd.toral_spanned},
    }
    if liealg.is_p_nilpotent(P):
        dec = abelian.cyclic_decomposition(P)
        body["cyclic"] = {"generators": [list(g) for g in dec.generators],
                          "exponents": list(dec.exponents),
                          "summand_dims": list(dec.summand_dims)}
    else:
        body["cyclic"] = None
        body["cyclic_skipped"] = "p-map not nilpotent; only the Fitting split applies"
    report.body = body
    return EXIT_OK


def cmd_compare(args, report: Report) -> int:
    P = _load(report, args.a)
    Q = _load(report, args.b)
    body: dict = {}
    status = EXIT_OK
    with report.timed("compare"):
        fps = []
        for A in (P, Q):
            try:
                fps.append(env.fingerprint(A))
            except NotPNilpotent:
                fps.append(None)
        body["fingerprints"] = [f.to_dict() if f else None for f in fps]
        if all(fps):
            body["fingerprint_differences"] = fps[0].differences(fps[1])
        res = isotest.lie_iso_search(P, Q, args.iso_budget)
        body["lie_iso"] = {"status": res.status, "nodes": res.nodes, "reason": res.reason,
                           "witness": res.witness.matrix if res.witness else None}
        if res.witness is not None and not res.witness.verify():
            status = EXIT_PROPERTY
        if all(fps) and P.field == Q.field:
            rep = isotest.main_theorem_consistency(P, Q, args.iso_budget, fps[0], fps[1])
            body["consistency"] = rep.as_dict()
            if rep.outcome == isotest.CANDIDATE_VIOLATION:
                status = EXIT_PROPERTY
        body["class_ids"] = [canonical.canonical_id(P), canonical.canonical_id(Q)]
    isotest.EMITTED_WITNESSES.clear()
    report.body = body
    return status


def cmd_verify(args, report: Report) -> int:
    directory = Path(args.catalog) if args.catalog else FIXTURE_DIR
    paths = catalog_paths(directory)
    if not paths:
        raise InputRejected(f"no .alg files in {directory}")
    algebras = {}
    for path in paths:
        algebras[path.stem] = _load(report, path)
    with report.timed("verify"):
        out = run_catalog(algebras, jobs=args.jobs, trials=args.trials, budget=args.iso_budget,
                          omega_cap=args.max_omega_power, seed=args.seed)
    report.body = out.to_dict()
    return EXIT_OK if out.ok else EXIT_PROPERTY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-omega-power", type=int, default=None,
                        help="cap on the powers of the augmentation ideal that are reported or compared")
    common.add_argument("--iso-budget", type=int, default=isotest.DEFAULT_BUDGET,
                        help="node budget for isomorphism searches")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for catalog sweeps")
    common.add_argument("--report-out", default=None, help="also write the report to this file")
    common.add_argument("--format", choices=("text", "structured"), default="text",
                        help="text for reading, structured for a JSON document")
    parser = argparse.ArgumentParser(prog="reslie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", parents=[common], help="parse and validate an algebra file")
    p.add_argument("path")
    p = sub.add_parser("invariants", parents=[common], help="series, graded algebra and fingerprint")
    p.add_argument("path")
    p = sub.add_parser("decompose", parents=[common], help="cyclic decomposition and Fitting split")
    p.add_argument("path")
    p = sub.add_parser("compare", parents=[common], help="fingerprints, isomorphism search, consistency")
    p.add_argument("a")
    p.add_argument("b")
    p = sub.add_parser("verify", parents=[common], help="run every property over a catalog")
    p.add_argument("catalog", nargs="?", default=None, help="directory of .alg files (default: shipped)")
    p.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                   help="random basis changes per abelian algebra")
    p.add_argument("--seed", type=int, default=0)
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "decompose": cmd_decompose,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = Report(args.command)
    try:
        code = COMMANDS[args.command](args, report)
    except (ParseError, ValidationError) as exc:
        code = EXIT_INPUT
        report.body = {"error": str(exc), "kind": type(exc).__name__}
        if isinstance(exc, ParseError):
            report.body.update(line=exc.line, column=exc.column)
        else:
            report.body["violations"] = exc.report.violations if exc.report else []
    except (InputRejected, NotAbelian, OSError) as exc:
        code = EXIT_INPUT
        report.body = {"error": str(exc), "kind": type(exc).__name__}
    except SizeLimit as exc:
        code = EXIT_SIZE
        report.body = {"error": str(exc), "kind": "SizeLimit"}
    report.body["exit_code"] = code
    text = report.render(args.format)
    sys.stdout.write(text)
    if args.report_out:
        report.write(args.report_out, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
