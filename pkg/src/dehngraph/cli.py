"""Command-line front end.

Exit codes: 0 ok, 1 domain error (or a failed certificate), 2 usage error or
malformed input.  ``--format json`` prints the whole result object.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import distance as dist
from . import floer, gluing, presentations, sfs
from .abelian import homology, p_rank
from .surgery import SurgeryDescription, presentation_matrix

OK, ERROR = "ok", "error"


class UsageError(Exception):
    pass


class InputError(Exception):
    """Malformed input file; message carries the position."""


class DomainError(Exception):
    pass


@dataclass
class CommandResult:
    status: str
    payload: Any = None
    diagnostics: list[str] = field(default_factory=list)
    exit_code: int = 0
    text: str = ""

    def __post_init__(self):
        if self.status == ERROR and not self.diagnostics:
            raise ValueError("error results need a diagnostic")

    def to_json(self) -> dict:
        return {"status": self.status, "payload": self.payload, "diagnostics": self.diagnostics}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        out = self.text
        if out and not out.endswith("\n"):
            out += "\n"
        return out + "".join(f"{self.status}: {d}\n" for d in self.diagnostics)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or f"{self.prog}: exit {status}")
        raise SystemExit(status)


# ---------------------------------------------------------------------------
# input helpers

def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _read_json(path: str) -> Any:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def _load(path: str, loader):
    data = _read_json(path)
    try:
        return loader(data)
    except (ValueError, TypeError) as e:
        raise InputError(f"{path}: {e}") from None


def _load_presentation(args) -> presentations.GroupPresentation:
    if args.kanenobu is not None:
        return presentations.kanenobu_presentation(args.kanenobu)
    if args.file is None:
        raise UsageError("give a presentation file or --kanenobu N")
    text = _read_text(args.file)
    try:
        return presentations.parse_presentation(text)
    except presentations.PresentationParseError as e:
        raise InputError(f"{args.file}:{e.line}:{e.column}: {e}" if e.line else f"{args.file}: {e}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(x.strip()) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated fractions, got {text!r}") from None


def _group_json(G) -> dict:
    return {**G.to_json(), "text": str(G), "primary": G.primary_decomposition()}


# ---------------------------------------------------------------------------
# commands

def cmd_homology(args):
    d = _load(args.infile, SurgeryDescription.from_json)
    G = homology(d)
    payload = {"group": _group_json(G), "presentation_matrix": presentation_matrix(d),
               "p_ranks": {str(p): p_rank(G, p) for p in G.primes()}}
    text = f"H_1 = {G}\ninvariant factors: {list(G.torsion)}  free rank: {G.free_rank}"
    return payload, text


def _table_from_args(args):
    primes = _int_list(args.primes)
    blocksize = args.blocksize if args.blocksize is not None else args.N
    return dist.grid_distance_table(args.k, blocksize, primes, args.N,
                                    myers_qprime=args.myers, threads=args.threads)


def _table_payload(table):
    return [{"point1": str(a), "point2": str(b), "lower": lo, "upper": up}
            for a, b, lo, up in table.rows()]


def cmd_distance(args):
    if args.infile:
        if len(args.infile) != 2:
            raise UsageError("distance needs exactly two --in files")
        d1, d2 = (_load(p, SurgeryDescription.from_json) for p in args.infile)
        b = dist.distance_bound(d1, d2)
        payload = {"lower": b.lower, "upper": b.upper, "exact": b.exact,
                   "witnesses": [w.__dict__ for w in b.witnesses]}
        up = "unknown" if b.upper is None else b.upper
        return payload, f"lower {b.lower}  upper {up}" + ("  (exact)" if b.exact else "")
    if args.k is None or args.N is None or args.primes is None:
        raise UsageError("distance needs two --in files or --k, --N and --primes")
    table = _table_from_args(args)
    return _table_payload(table), table.to_csv()


def cmd_quasiflat(args):
    table = _table_from_args(args)
    report = dist.certify_quasiflat(table)
    if args.csv:
        Path(args.csv).write_text(table.to_csv(), encoding="utf-8")
    if not report.passed:
        raise DomainError("certification failed", report.to_json(), report.summary())
    return report.to_json(), report.summary()


def cmd_sfs(args):
    if args.action in ("iso", "related"):
        s1, s2 = (_load(p, sfs.SeifertData.from_json) for p in args.files)
        if args.action == "iso":
            val = sfs.homeomorphic_fibrations(s1, s2)
            return {"homeomorphic_fibrations": val}, f"{s1} ~ {s2}: {val}"
        rel = sfs.fiber_surgery_relation(s1, s2)
        return {"related": bool(rel), "relation": rel.value}, f"{s1} -- {s2}: {rel.value}"
    if args.action == "kinfty":
        family = sfs.kinfty_family(_fractions(args.a), args.J)
        report = sfs.certify_complete(family)
        payload = {
            "spaces": {f"{i},{j}": str(s) for (i, j), s in family.items()},
            "count": report.count,
            "related_pairs": report.related_pairs,
            "unverified_pairs": len(report.unverified_pairs),
            "unrelated_pairs": len(report.unrelated_pairs),
            "homeomorphic_pairs": len(report.homeomorphic_pairs),
            "passed": report.passed,
        }
        text = "\n".join([f"M_{{{i},{j}}} = {s}" for (i, j), s in family.items()] + [
            f"{report.count} spaces; related pairs {report.related_pairs}, "
            f"unverified {len(report.unverified_pairs)}, unrelated {len(report.unrelated_pairs)}, "
            f"homeomorphic {len(report.homeomorphic_pairs)}: {'PASS' if report.passed else 'FAIL'}"])
        if not report.passed:
            raise DomainError("K-infinity certificate failed", payload, text)
        return payload, text
    if args.action == "montesinos":
        s = _load(args.files[0], sfs.SeifertData.from_json)
        b = dist.montesinos_upper_bound(s)
        return {"upper": b}, f"p_L({s}, S3) <= {b}"
    if args.action == "solv":
        b = dist.solv_upper_bound(args.kind)
        return {"upper": b}, f"p_L(M, S3) <= {b} for a solv {args.kind}"
    raise UsageError(f"unknown sfs action {args.action!r}")


def _system(args) -> gluing.GluingSystem:
    if args.sys:
        return _load(args.sys, gluing.GluingSystem.from_json)
    return gluing.load_t12060_system()


def _shapes(path: str | None, t: int):
    if path is None or path == "t12060":
        return gluing.load_t12060_shapes()
    if path == "regular":
        return gluing.regular_shapes(t)
    return _load(path, gluing.shapes_from_json)


def cmd_gluing(args):
    if args.action == "verify":
        system = _system(args)
        z = _shapes(args.shapes, system.ntet)
        r = gluing.residual(system, z)
        geometric = bool(np.all(z.imag > 0))
        ok = r.max_reduced < args.tol
        payload = {"max_raw": r.max_raw, "max_reduced": r.max_reduced,
                   "windings": [int(k) for k in r.windings], "geometric": geometric,
                   "tol": args.tol, "solution": ok}
        text = (f"max |residual| raw {r.max_raw:.3e}, mod 2 pi i {r.max_reduced:.3e}\n"
                f"windings {[int(k) for k in r.windings]}\n"
                f"all Im z > 0: {geometric}\nsolution within {args.tol:g}: {ok}")
        if not ok:
            raise DomainError("shapes do not solve the system", payload, text)
        return payload, text
    if args.action == "solve":
        system = _system(args)
        z0 = _shapes(args.start, system.ntet)
        try:
            res = gluing.newton_solve(system, z0, tol=args.tol, max_iter=args.max_iter)
        except gluing.NewtonFailure as e:
            payload = {"residual_trace": e.trace, "condition": e.condition}
            raise DomainError(str(e), payload, "\n".join(f"{k}: {v:.3e}" for k, v in enumerate(e.trace)))
        payload = res.to_json()
        payload["volume"] = gluing.volume(res.z)
        lines = [f"converged in {res.iterations} iterations; geometric: {res.geometric}"]
        lines += [f"  z_{k + 1} = {w.real:.15g} {w.imag:+.15g}i" for k, w in enumerate(res.z)]
        lines.append(f"volume {payload['volume']:.12f}")
        return payload, "\n".join(lines)
    if args.action == "volume":
        z = _shapes(args.shapes, 0)
        v = gluing.volume(z)
        return {"volume": v, "per_tetrahedron": [gluing.bloch_wigner(w) for w in z]}, f"volume {v:.12f}"
    raise UsageError(f"unknown gluing action {args.action!r}")


def cmd_group(args):
    P = _load_presentation(args)
    if args.action == "abel":
        G = presentations.abelianization(P)
        return _group_json(G), f"H_1 = {G}"
    if args.action == "quotient":
        if not args.word:
            raise UsageError("group quotient needs -w WORD")
        try:
            Q = presentations.quotient_by_normal_closure(P, args.word)
        except presentations.PresentationParseError as e:
            raise UsageError(f"-w: {e}") from None
        G = presentations.abelianization(Q)
        return {"presentation": Q.format(), "abelianization": _group_json(G)}, Q.format()
    if args.action == "enumerate":
        try:
            t = presentations.coset_enumerate(P, args.subgroup or (), args.cap)
        except presentations.PresentationParseError as e:
            raise UsageError(f"--subgroup: {e}") from None
        text = (f"index {t.index}" if t.complete else "coset cap exceeded (no conclusion)") + \
            f"; peak live cosets {t.peak_live}, defined {t.total_defined}"
        return t.to_json(), text
    if args.action == "weight":
        try:
            r = presentations.certify_weight_one(P, args.candidate or None, args.cap)
        except presentations.PresentationParseError as e:
            raise UsageError(f"--candidate: {e}") from None
        return r.to_json(), "\n".join([r.verdict] + r.notes)
    raise UsageError(f"unknown group action {args.action!r}")


def cmd_obstruct(args):
    if args.action == "test":
        coeffs = _int_list(args.coeffs)
        val = floer.lspace_alternating_test(coeffs)
        return {"coefficients": coeffs, "alternating": val}, f"alternating: {val}"
    if args.action == "delta":
        coeffs = _int_list(args.coeffs)
        val = floer.correction_delta(coeffs, args.p, args.q, args.i)
        return {"delta": val}, f"delta = {val}"
    if args.action == "budget":
        r = floer.obstruction_budget(args.p, args.q)
        return r.to_json(), r.summary()
    raise UsageError(f"unknown obstruct action {args.action!r}")


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=int, default=1)

    parser = _Parser(prog="dehngraph", parents=[common], description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("homology", parents=[common], help="H_1 of a surgery description")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_homology)

    def grid_args(p):
        p.add_argument("--k", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--primes")
        p.add_argument("--blocksize", type=int)
        p.add_argument("--myers", type=int, metavar="QPRIME",
                       help="append a zero-linking component filled 1/QPRIME")

    p = sub.add_parser("distance", parents=[common], help="surgery distance bounds")
    p.add_argument("--in", dest="infile", action="append")
    grid_args(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("quasiflat", parents=[common], help="certify a flat family")
    grid_args(p)
    p.add_argument("--csv", help="also write the table to this file")
    p.set_defaults(func=cmd_quasiflat)

    p = sub.add_parser("sfs", parents=[common], help="Seifert fibered spaces")
    p.add_argument("action", choices=("iso", "related", "kinfty", "montesinos", "solv"))
    p.add_argument("files", nargs="*")
    p.add_argument("--J", type=int, default=0)
    p.add_argument("--a", default="1/5,2/7,3/8,4/9")
    p.add_argument("--kind", default="torus-bundle")
    p.set_defaults(func=cmd_sfs)

    p = sub.add_parser("gluing", parents=[common], help="gluing equations")
    p.add_argument("action", choices=("verify", "solve", "volume"))
    p.add_argument("--sys")
    p.add_argument("--shapes")
    p.add_argument("--start", default="regular")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=100)
    p.set_defaults(func=cmd_gluing)

    p = sub.add_parser("group", parents=[common], help="group presentations")
    p.add_argument("action", choices=("abel", "quotient", "enumerate", "weight"))
    p.add_argument("file", nargs="?")
    p.add_argument("--kanenobu", type=int, metavar="N")
    p.add_argument("-w", "--word")
    p.add_argument("--subgroup", action="append")
    p.add_argument("--candidate", action="append")
    p.add_argument("--cap", type=int, default=presentations.DEFAULT_CAP)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("obstruct", parents=[common], help="correction-term arithmetic")
    p.add_argument("action", choices=("test", "delta", "budget"))
    p.add_argument("--coeffs")
    p.add_argument("--p", type=int, default=25)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--i", type=int, default=0)
    p.set_defaults(func=cmd_obstruct)
    return parser


def _usage_checks(args):
    if args.command in ("quasiflat",) and (args.k is None or args.N is None or args.primes is None):
        raise UsageError("quasiflat needs --k, --N and --primes")
    if args.command == "sfs":
        need = {"iso": 2, "related": 2, "montesinos": 1}.get(args.action, 0)
        if len(args.files) != need:
            raise UsageError(f"sfs {args.action} takes {need} file(s)")
    if args.command == "obstruct" and args.action in ("test", "delta") and args.coeffs is None:
        raise UsageError(f"obstruct {args.action} needs --coeffs")
    if args.command == "gluing" and args.tol is None:
        args.tol = 1e-9 if args.action == "verify" else 1e-10
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")


def _format_of(argv: Sequence[str]) -> str:
    for k, a in enumerate(argv):
        if a == "--format" and k + 1 < len(argv):
            return argv[k + 1]
        if a.startswith("--format="):
            return a.split("=", 1)[1]
    return "text"


def run(argv: Sequence[str] | None = None) -> CommandResult:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        _usage_checks(args)
        payload, text = args.func(args)
        return CommandResult(OK, payload, [], 0, text)
    except UsageError as e:
        return CommandResult(ERROR, None, [str(e).strip()], 2)
    except InputError as e:
        return CommandResult(ERROR, None, [str(e)], 2)
    except DomainError as e:
        msg, payload, text = (list(e.args) + [None, ""])[:3]
        return CommandResult(ERROR, payload, [msg], 1, text)
    except (ValueError, ArithmeticError) as e:
        return CommandResult(ERROR, None, [str(e)], 1)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        result = run(argv)
    except SystemExit as e:           # --help
        return int(e.code or 0)
    stream = sys.stdout if result.exit_code == 0 else sys.stderr
    fmt = _format_of(argv)
    if fmt == "json":
        stream = sys.stdout
    stream.write(result.render(fmt if fmt in ("json", "text") else "text"))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
