"""Command-line front end.

Every command prints one document.  JSON documents carry
``"schema": "descent0/v1"``; square classes are decimal strings and the
real place is ``"inf"``.  Exit codes: 0 ok, 1 mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .descent import (
    Curve,
    SelmerGroup,
    Side,
    bad_places,
    curve_from_full_torsion,
    fundamental_bound,
    point_search,
    selmer,
    twist,
)
from .errors import DescentError, EngineDefect, NotFound
from .localsolve import DEFAULT_ORACLE_PRIMES, oracle_campaign
from .search import (
    T2Family,
    T3Family,
    T4Family,
    TwistSearchSpec,
    admissible_residues,
    density_report,
    find_twist_primes,
    simultaneous_twists,
    thm1_demo,
)
from .theorems import ConditionReport, Rank0Certificate, check_thm2, check_thm3, check_thm4, verify_rank0

SCHEMA = "descent0/v1"
EXIT_CODES = {"ok": 0, "mismatch": 1, "usage_error": 2}
FORMATS = ("json", "csv", "text")


@dataclass
class CommandResult:
    command: str
    status: str
    payload: dict
    fmt: str = "json"

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def document(self) -> dict:
        return {"schema": SCHEMA, "command": self.command, "status": self.status, "payload": self.payload}

    def render(self) -> str:
        if self.fmt == "csv":
            return _render_csv(self)
        if self.fmt == "text":
            return _render_text(self)
        return json.dumps(self.document(), sort_keys=True, indent=2)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- serialization helpers ----------------------------------------------------


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _curve_doc(C: Curve) -> dict:
    doc = {"a": C.a, "b": C.b, "twist_by": C.twist_by}
    if C.provenance:
        doc["A"], doc["B"] = C.provenance
    return doc


def _classes(group: SelmerGroup) -> list[str]:
    return [str(d) for d in group.classes]


def _report_doc(report: ConditionReport) -> dict:
    return {
        "theorem": report.theorem,
        "variant": report.variant,
        "params": report.params,
        "overall": report.overall,
        "items": [
            {
                "condition_id": it.condition_id,
                "description": it.description,
                "holds": it.holds,
                "mandatory": it.mandatory,
                "evidence": it.evidence,
            }
            for it in report.items
        ],
    }


def _certificate_doc(cert: Rank0Certificate) -> dict:
    return {
        "curve": _curve_doc(cert.curve),
        "r": cert.r,
        "selmer_phi": _classes(cert.selmer_phi),
        "selmer_phihat": _classes(cert.selmer_phihat),
        "dims": list(cert.dims),
        "expected_dims": list(cert.expected_dims),
        "rank_upper_bound": cert.bound,
        "pass": cert.passed,
    }


# -- argument handling --------------------------------------------------------


def _add_curve_args(p: argparse.ArgumentParser, batch: bool = True) -> None:
    p.add_argument("--A", type=int)
    p.add_argument("--B", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    if batch:
        p.add_argument("--r", type=int, default=1, help="squarefree twist parameter")
        p.add_argument("--input", help="file with one JSON curve object per line")


def _curve_from_obj(obj: dict) -> Curve:
    if "A" in obj and "B" in obj:
        return curve_from_full_torsion(int(obj["A"]), int(obj["B"]))
    if "a" in obj and "b" in obj:
        return Curve(int(obj["a"]), int(obj["b"]))
    raise UsageError(f"curve object needs keys A,B or a,b: {obj}")


def _curves(args) -> list[Curve]:
    if args.input:
        with open(args.input) as fh:
            return [_curve_from_obj(json.loads(line)) for line in fh if line.strip()]
    full = args.A is not None or args.B is not None
    short = args.a is not None or args.b is not None
    if full == short:
        raise UsageError("give exactly one of --A/--B or --a/--b")
    if full:
        if args.A is None or args.B is None:
            raise UsageError("--A and --B go together")
        return [curve_from_full_torsion(args.A, args.B)]
    if args.a is None or args.b is None:
        raise UsageError("--a and --b go together")
    return [Curve(args.a, args.b)]


def _family(args):
    if args.family == "T2":
        return T2Family(_need(args, "A"), _need(args, "B"), args.variant or "literal")
    if args.family == "T3":
        return T3Family(_need(args, "A"), _need(args, "B"))
    return T4Family(_need(args, "a"), _need(args, "b"), args.variant or "derived")


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for family {args.family}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="descent0", description="Two-isogeny descent on prime twists.")
    parser.add_argument("--format", choices=FORMATS, default="json")
    # also accepted after the subcommand name
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name):
        return sub.add_parser(name, parents=[common])

    for name in ("selmer", "rank-bound"):
        p = add(name)
        _add_curve_args(p)

    p = add("check-thm2")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--variant", choices=("literal", "proof"), default="literal")

    p = add("check-thm3")
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    p = add("check-thm4")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--branch2", choices=("literal", "derived"), default="derived")

    for name in ("search", "density"):
        p = add(name)
        p.add_argument("--family", choices=("T2", "T3", "T4"), required=True)
        _add_curve_args(p, batch=False)
        p.add_argument("--variant", choices=("literal", "proof", "derived"))
        p.add_argument("--X", type=int, default=1000 if name == "search" else 10**6)
        if name == "search":
            p.add_argument("--certify", action="store_true", help="run the descent on every prime found")

    p = add("simultaneous")
    p.add_argument("--input", required=True, help="JSON lines: {A,B} for T2/T3 families, {a,b} for T4")
    p.add_argument("--family", choices=("T2", "T3"), default="T2", help="family used for {A,B} lines")
    p.add_argument("--variant", choices=("literal", "proof"), default="literal")
    p.add_argument("--X", type=int, default=10**6)

    p = add("thm1-demo")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x-max", type=int, default=10**7)
    p.add_argument("--variant", choices=("literal", "proof"), default="literal")

    p = add("oracle-validate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--primes", default=",".join(map(str, DEFAULT_ORACLE_PRIMES)))
    p.add_argument("--max-k", type=int)

    p = add("point-search")
    _add_curve_args(p)
    p.add_argument("--H", type=int, default=20)
    return parser


# -- commands -----------------------------------------------------------------


def _selmer_row(C: Curve) -> dict:
    phi, hat = selmer(C, Side.PHI), selmer(C, Side.PHIHAT)
    return {
        "curve": _curve_doc(C),
        "selmer_phi": _classes(phi),
        "selmer_phihat": _classes(hat),
        "dim_phi": phi.dim2,
        "dim_phihat": hat.dim2,
        "rank_upper_bound": fundamental_bound(phi.dim2, hat.dim2),
        "bad_places": [pl.to_json() for pl in bad_places(C)],
    }


def _cmd_selmer(args):
    rows = [_selmer_row(twist(C, args.r)) for C in _curves(args)]
    if args.input:
        return "ok", {"rows": rows}
    return "ok", rows[0]


def _cmd_rank_bound(args):
    keys = ("curve", "dim_phi", "dim_phihat", "rank_upper_bound")
    rows = [{k: row[k] for k in keys} for row in (_selmer_row(twist(C, args.r)) for C in _curves(args))]
    if args.input:
        return "ok", {"rows": rows}
    return "ok", rows[0]


def _cmd_check_thm2(args):
    return "ok", _report_doc(check_thm2(args.A, args.B, args.r, args.variant))


def _cmd_check_thm3(args):
    return "ok", _report_doc(check_thm3(args.A, args.B, args.r))


def _cmd_check_thm4(args):
    return "ok", _report_doc(check_thm4(args.a, args.b, args.r, args.branch2))


def _cmd_search(args):
    family = _family(args)
    spec = TwistSearchSpec(family, args.X)
    residues = admissible_residues(spec)
    primes = find_twist_primes(spec)
    payload = {
        "family": family.describe(),
        "limit": args.X,
        "modulus": residues.modulus,
        "predicted_density": _frac(residues.predicted_density),
        "primes": primes,
    }
    status = "ok"
    if args.certify:
        certs = [verify_rank0(family.curve(), r, family.expected_dims) for r in primes]
        payload["certificates"] = [_certificate_doc(c) for c in certs]
        if not all(c.passed for c in certs):
            status = "mismatch"
    return status, payload


def _cmd_density(args):
    family = _family(args)
    if args.X < 1000:
        raise UsageError("density needs --X >= 1000")
    rep = density_report(TwistSearchSpec(family, args.X))
    return "ok", {
        "family": family.describe(),
        "limit": args.X,
        "count": rep.count,
        "prime_count": rep.prime_count,
        "empirical": _frac(rep.empirical),
        "predicted": _frac(rep.predicted),
        "relative_error": rep.relative_error,
    }


def _cmd_simultaneous(args):
    families = []
    with open(args.input) as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            if "A" in obj:
                A, B = int(obj["A"]), int(obj["B"])
                families.append(T2Family(A, B, args.variant) if args.family == "T2" else T3Family(A, B))
            elif "a" in obj:
                families.append(T4Family(int(obj["a"]), int(obj["b"])))
            else:
                raise UsageError(f"curve object needs keys A,B or a,b: {obj}")
    result = simultaneous_twists(families, args.X)
    payload = {
        "families": [f.describe() for f in families],
        "limit": args.X,
        "joint_density": _frac(result.joint_density),
        "found": result.found,
        "r": result.r,
        "certificates": [_certificate_doc(c) for c in result.certificates],
    }
    status = "mismatch" if result.found and not result.all_certified else "ok"
    return status, payload


def _cmd_thm1_demo(args):
    try:
        rep = thm1_demo(args.k, args.x_max, args.variant)
    except NotFound as exc:
        return "ok", {"k": args.k, "variant": args.variant, "found": False, "message": str(exc),
                      "limit": args.x_max}
    return "ok", {
        "k": rep.k,
        "variant": rep.variant,
        "found": True,
        "q": rep.q,
        "ps": list(rep.ps),
        "r": rep.result.r,
        "joint_density": _frac(rep.result.joint_density),
        "attempts": [{"limit": lim, "found": f} for lim, f in rep.attempts],
        "certificates": [_certificate_doc(c) for c in rep.result.certificates],
    }


def _cmd_oracle_validate(args):
    try:
        primes = tuple(int(p) for p in args.primes.split(","))
    except ValueError:
        raise UsageError(f"bad --primes list {args.primes!r}")
    rep = oracle_campaign(args.seed, args.count, primes, args.max_k)
    payload = {
        "seed": args.seed,
        "count": rep.count,
        "sound_disagreements": rep.sound_disagreements,
        "decided_at_max_k": rep.decided_at_max_k,
        "decided_fraction": rep.decided_fraction,
        "by_prime": {str(p): {"cases": c, "decided": dec} for p, (c, dec) in rep.by_prime.items()},
    }
    return ("mismatch" if rep.sound_disagreements else "ok"), payload


def _cmd_point_search(args):
    rows = []
    for C in _curves(args):
        C = twist(C, args.r)
        pts = point_search(C, args.H)
        rows.append({
            "curve": _curve_doc(C),
            "H": args.H,
            "points": [{"x": _frac(p.x), "y": _frac(p.y), "torsion": p.torsion} for p in pts],
        })
    if args.input:
        return "ok", {"rows": rows}
    return "ok", rows[0]


COMMANDS = {
    "selmer": _cmd_selmer,
    "rank-bound": _cmd_rank_bound,
    "check-thm2": _cmd_check_thm2,
    "check-thm3": _cmd_check_thm3,
    "check-thm4": _cmd_check_thm4,
    "search": _cmd_search,
    "density": _cmd_density,
    "simultaneous": _cmd_simultaneous,
    "thm1-demo": _cmd_thm1_demo,
    "oracle-validate": _cmd_oracle_validate,
    "point-search": _cmd_point_search,
}

# list-valued payload field shown as the table in csv output
TABLE_FIELDS = {
    "check-thm2": "items",
    "check-thm3": "items",
    "check-thm4": "items",
    "point-search": "points",
    "simultaneous": "certificates",
    "thm1-demo": "certificates",
    "oracle-validate": "sound_disagreements",
}


def run(argv: Sequence[str]) -> CommandResult:
    argv = list(argv)
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        status, payload = COMMANDS[args.command](args)
    except (UsageError, DescentError, OSError, json.JSONDecodeError) as exc:
        command = next((a for a in argv if a in COMMANDS), "")
        return CommandResult(command, "usage_error", {"error": str(exc)}, fmt)
    except EngineDefect as exc:
        return CommandResult(args.command, "mismatch", {"error": str(exc)}, fmt)
    return CommandResult(args.command, status, payload, fmt)


def _scalar(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    return "" if value is None else str(value)


def _render_csv(result: CommandResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    payload = result.payload
    key = TABLE_FIELDS.get(result.command, "rows" if "rows" in payload else None)
    rows = payload.get(key) if key else None
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        columns = list(dict.fromkeys(c for r in rows for c in r))
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_scalar(r.get(c)) for c in columns])
    else:
        writer.writerow(["key", "value"])
        for k in sorted(payload):
            writer.writerow([k, _scalar(payload[k])])
    return buf.getvalue().rstrip("\n")


def _render_text(result: CommandResult) -> str:
    lines = [f"{result.command}: {result.status}"]
    for k in sorted(result.payload):
        lines.append(f"  {k}: {_scalar(result.payload[k])}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    print(result.render())
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
