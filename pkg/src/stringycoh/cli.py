"""``stringycoh`` command line: compute, zigzag and verify.

Exit codes: 0 success, 1 a verify check failed, 2 bad input, 3 internal
inconsistency.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Callable, Optional

from . import __version__
from .documents import MODES, fixture_path, guess_mode, list_fixtures, load_json, package_from_document
from .errors import ConsistencyError, InputError
from .qlinalg import RationalMatrix
from .randomdata import random_rank_document
from .stratified import CohomologyPackage
from .stringy import CohomologyReport, build_report, compute_SH, multinode_from_document, multinode_obstruction
from .zigzag import check_zigzag_exact, dualize, duality_mismatch, find_duality_witness, make_theta0

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Input:
    """Resolved command input: a parsed document plus the mode to read it in."""

    def __init__(self, doc: dict, mode: str, label: str):
        self.doc, self.mode, self.label = doc, mode, label

    @property
    def has_package(self) -> bool:
        return self.mode == "simplicial" or "maps" in self.doc

    @property
    def has_multinode(self) -> bool:
        return self.mode == "ranks" and "multinode" in self.doc

    def package(self) -> CohomologyPackage:
        if not self.has_package:
            raise InputError(f"{self.label}: no single-node sequence data ('maps' missing)")
        return package_from_document(self.doc, self.mode)


def _resolve(args) -> _Input:
    if args.random_seed is not None:
        doc = random_rank_document(random.Random(args.random_seed))
        return _Input(doc, "ranks", f"random seed {args.random_seed}")
    if args.input and args.fixture:
        raise InputError("give --input or --fixture, not both")
    if args.fixture:
        path = fixture_path(args.fixture)
    elif args.input:
        path = args.input
    else:
        raise InputError("one of --input, --fixture or --random-seed is required")
    mode = args.mode or guess_mode(path)
    if mode is None:
        raise InputError(f"cannot tell the format of {path}; pass --mode {'|'.join(MODES)}")
    return _Input(load_json(path), mode, str(path))


# -- rendering ---------------------------------------------------------------


def _fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_matrix(m: RationalMatrix, indent: str = "    ") -> list[str]:
    if m.rows == 0 or m.cols == 0:
        return [f"{indent}({m.rows}x{m.cols})"]
    cells = [[_fmt_q(x) for x in m.row(i)] for i in range(m.rows)]
    w = max(len(c) for r in cells for c in r)
    return [indent + "[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells]


def render_report(r: CohomologyReport) -> str:
    cols = [("S0", r.table_S0), ("IC", r.table_IC), ("Q", r.table_Q), ("Yo", r.table_Yo), ("Yo_c", r.table_Yo_c)]
    width = max(6, *(len(str(v)) + 1 for _, t in cols for v in t))
    lines = [f"n = {r.n}   ({r.provenance})", "", "deg" + "".join(name.rjust(width) for name, _ in cols)]
    for d in range(2 * r.n + 1):
        mark = "*" if d == r.n else " "
        lines.append(f"{d:>2}{mark}" + "".join(str(t[d]).rjust(width) for _, t in cols))
    sh = compute_SH(r)
    lines += [
        "",
        f"K0 = {r.K0_dim}   C0 = {r.C0_dim}",
        f"middle: {r.table_S0[r.n]} = {r.K0_dim} (K0) + {r.table_Yo[r.n]} (Yo) = "
        f"{r.table_Yo_c[r.n]} (Yo_c) + {r.C0_dim} (C0)",
        f"SH middle {sh.dims[r.n]} from H_n(Y) = {sh.middle_from_Y} and H_n(Y-y) = {sh.middle_from_Yo}",
        "",
        "notes:",
    ]
    lines += [f"  - {note}" for note in r.notes + r.support_report.notes]
    return "\n".join(lines)


def _emit(args, payload: dict, text: str) -> None:
    if args.out == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


# -- subcommands -------------------------------------------------------------


def cmd_compute(args) -> int:
    src = _resolve(args)
    payload: dict = {"format_version": "1", "input": src.label}
    parts = []
    if src.has_package:
        report = build_report(src.package())
        payload["report"] = report.to_dict()
        payload["stringy_homology"] = compute_SH(report).to_dict()
        parts.append(render_report(report))
    if src.has_multinode:
        obs = multinode_obstruction(multinode_from_document(src.doc))
        payload["multinode"] = obs.to_dict()
        parts.append(
            "multi-node diagnostic:\n"
            f"  alpha2 zero: {obs.alpha2_is_zero} (rank {obs.alpha2_rank}) -> c injective: {obs.c_injective}\n"
            f"  gamma1 zero: {obs.gamma1_is_zero} (rank {obs.gamma1_rank}) -> d surjective: {obs.d_surjective}"
        )
    if not parts:
        raise InputError(f"{src.label}: nothing to compute (no 'maps' and no 'multinode' block)")
    _emit(args, payload, "\n\n".join(parts))
    return EXIT_OK


def cmd_zigzag(args) -> int:
    src = _resolve(args)
    z = make_theta0(src.package())
    dz = dualize(z)
    mismatch = duality_mismatch(z)
    w = None if mismatch else find_duality_witness(z)
    status = "found" if w else f"no witness (dims mismatch at {', '.join(mismatch)})"
    payload = {
        "format_version": "1",
        "input": src.label,
        "theta0": z.to_dict(),
        "dual": dz.to_dict(),
        "theta0_exact": check_zigzag_exact(z),
        "dual_exact": check_zigzag_exact(dz),
        "witness": w.to_dict() if w else None,
        "witness_status": status,
    }
    lines = [f"theta0 dims (left, K, C, right) = {z.dims}"]
    for name, m in (("alpha", z.alpha), ("beta", z.beta), ("gamma", z.gamma)):
        lines.append(f"  {name}:")
        lines += _fmt_matrix(m)
    lines += [
        f"dual dims = {dz.dims}",
        f"theta0 exact: {payload['theta0_exact']}",
        f"dual exact: {payload['dual_exact']}",
        f"witness: {status}",
    ]
    if w:
        lines[-1] += f" ({w.method})"
        for name, m in (("kappa", w.kappa), ("lambda", w.lam), ("nu", w.nu), ("xi", w.xi)):
            lines.append(f"  {name}:")
            lines += _fmt_matrix(m)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _verify_checks(src: _Input) -> list[tuple[str, bool, bool]]:
    """(name, passed, informational) for every check that applies."""
    checks: list[tuple[str, bool, bool]] = []
    if src.has_package:
        pkg = src.package()
        r = build_report(pkg)
        checks += [
            ("exactness", r.exact_ok, False),
            ("ses(a) K0 sequence", r.ses_a_ok, False),
            ("ses(b) C0 sequence", r.ses_b_ok, False),
            ("middle injection", r.middle_injection_ok, False),
            ("middle surjection", r.middle_surjection_ok, False),
            ("poincare(S0-table)", r.poincare_ok_S0, False),
            ("poincare(IC-table)", r.poincare_ok_IC, False),
            ("off-middle S0 = IC", r.off_middle_agree(), False),
            ("support", all(r.support_report.support_ok), False),
            ("cosupport", all(r.support_report.cosupport_ok), False),
        ]
        z = make_theta0(pkg)
        w = None if duality_mismatch(z) else find_duality_witness(z)
        checks += [
            ("theta0 exact", check_zigzag_exact(z), False),
            ("dual theta0 exact", check_zigzag_exact(dualize(z)), False),
            ("theta0 self-dual", w is not None, False),
            ("poincare(Q-table)", r.poincare_ok_Q, True),
        ]
    if src.has_multinode:
        obs = multinode_obstruction(multinode_from_document(src.doc))
        checks += [
            ("multinode c injective", obs.c_injective, False),
            ("multinode d surjective", obs.d_surjective, False),
        ]
    if not checks:
        raise InputError(f"{src.label}: nothing to verify")
    return checks


def cmd_verify(args) -> int:
    src = _resolve(args)
    checks = _verify_checks(src)
    ok = all(passed for _, passed, info in checks if not info)
    payload = {
        "format_version": "1",
        "input": src.label,
        "checks": [{"name": n, "passed": p, "informational": i} for n, p, i in checks],
        "ok": ok,
    }
    width = max(len(n) for n, _, _ in checks)
    lines = []
    for name, passed, info in checks:
        verdict = ("INFO " if info else "") + ("PASS" if passed else "FAIL")
        lines.append(f"{name.ljust(width)}  {verdict}")
    lines.append("all checks passed" if ok else "some checks FAILED")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stringycoh",
        description="Stringy, intersection and ordinary cohomology of spaces with one isolated singular point.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    commands: dict[str, tuple[Callable, str]] = {
        "compute": (cmd_compute, "print the S0 / IC / Q cohomology tables"),
        "zigzag": (cmd_zigzag, "print the zig-zag object, its dual and a self-duality witness"),
        "verify": (cmd_verify, "run every structural check and report PASS/FAIL"),
    }
    for name, (fn, help_text) in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", help="path to a simplicial or rank-mode JSON document")
        p.add_argument("--fixture", help=f"name of a shipped fixture ({', '.join(list_fixtures())})")
        p.add_argument("--mode", choices=MODES, help="input format (guessed from .simp.json / .ranks.json)")
        p.add_argument("--out", choices=("table", "json"), default="table")
        p.add_argument("--random-seed", type=int, help="use a generated exact rank document instead of a file")
        p.set_defaults(func=fn)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"stringycoh: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"stringycoh: internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
