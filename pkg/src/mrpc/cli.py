"""Command-line interface: ``mrpc classify|correspond|lift|check|verify|regress``.

Exit codes: 2 for usage or input errors, 1 for a disagreement or a failed
regression, 0 otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import kripke as kr
from . import mv
from . import polarity as pl
from .correspondence import correspondent, lift
from .errors import MrpcError, NotAnMrp
from .frames import load_frame
from .syntax import alba_output, classify, parse_inequality
from .verifier import SEMANTICS, SUITES, Sweep, run_regressions, run_sweep

NOT_AN_MRP_NOTE = ("note: inequalities with ∨/∧ such as ◇(p∨q) ≤ ◇(p∧q) can be Sahlqvist without "
                   "being MRPs; their Kripke correspondent need not lift to polarity-based frames "
                   "(run `mrpc regress` for a witness frame)")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 already; keep its message format
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _emit(obj, as_json: bool, text: str) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False) if as_json else text)


def cmd_classify(args) -> int:
    try:
        m = parse_inequality(args.ineq)
    except NotAnMrp as exc:
        _emit({"shape": "NotAnMrp", "reason": str(exc)}, args.json,
              f"NotAnMrp: {exc}\n{NOT_AN_MRP_NOTE}")
        return 0
    d = classify(m)
    if args.json:
        print(json.dumps(d.to_json(), indent=2, ensure_ascii=False))
        return 0
    lines = [f"{m}: {d.tag}"]
    for s in d.shapes:
        part = d.a if s == "a" else d.b
        fields = ", ".join(f"{k}={' '.join(v) or 'ε'}" for k, v in part.to_json().items())
        lines.append(f"  ({s}) {fields}")
        lines.append(f"      ALBA: ∀{alba_output(d, s).var}({alba_output(d, s)})")
    print("\n".join(lines))
    return 0


def cmd_correspond(args) -> int:
    d = classify(parse_inequality(args.ineq))
    k = correspondent(d, args.target, args.shape, args.simplify_analytic)
    _emit(k.to_json(), args.json, k.unicode() if args.unicode else str(k))
    return 0


def cmd_lift(args) -> int:
    d = classify(parse_inequality(args.ineq))
    k = correspondent(d, "krel", args.shape)
    lifted = lift(k)
    direct = correspondent(d, "prel", args.shape)
    same = lifted == direct
    out = {"krel": str(k), "lifted": str(lifted), "prel": str(direct), "identical": same}
    _emit(out, args.json, f"krel   {k}\nlifted {lifted}\nprel   {direct}\n"
                          f"lifting {'matches' if same else 'DIFFERS FROM'} the polarity correspondent")
    return 0 if same else 1


def cmd_check(args) -> int:
    f = load_frame(args.frame)
    m = parse_inequality(args.formula)
    d = classify(m)
    mode = args.mode or "both"
    oracle = term = None
    if isinstance(f, kr.KripkeFrame):
        k = correspondent(d, "krel", args.shape)
        if mode in ("oracle", "both"):
            oracle = kr.mrp_valid_oracle(f, m)
        if mode in ("term", "both"):
            term = kr.holds_krel(f, k)
    elif isinstance(f, pl.PolarityFrame):
        k = correspondent(d, "prel", args.shape)
        if mode in ("oracle", "both"):
            oracle = pl.mrp_valid_oracle(f, m)
        if mode in ("term", "both"):
            term = pl.holds_prel(f, k)
    else:
        k = correspondent(d, "prel", args.shape)
        if mode in ("oracle", "both"):
            oracle = mv.mv_mrp_valid_oracle(f, m)
        if mode in ("term", "both"):
            term = mv.mv_holds_prel(f, k)
    out = {"formula": str(m), "correspondent": str(k), "oracle": oracle, "term": term}
    lines = [f"formula       {m}", f"correspondent {k}"]
    if oracle is not None:
        lines.append(f"oracle        {'valid' if oracle else 'not valid'}")
    if term is not None:
        lines.append(f"term          {'holds' if term else 'fails'}")
    disagree = oracle is not None and term is not None and oracle != term
    if disagree:
        lines.append("DISAGREEMENT")
    _emit(out, args.json, "\n".join(lines))
    return 1 if disagree else 0


def cmd_verify(args) -> int:
    s = Sweep(args.suite, args.semantics, args.max_size, args.samples, args.seed,
              args.sample_size, args.algebra, not args.no_exhaustive)
    report = run_sweep(s, args.dump)
    _emit(report.to_json(), args.json, report.render())
    return 0 if report.ok else 1


def cmd_regress(args) -> int:
    report = run_regressions()
    _emit(report.to_json(), args.json, report.render())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mrpc", description="Correspondents of modal reduction principles on "
                                         "Kripke, polarity and many-valued polarity frames.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="shape decomposition and ALBA output")
    c.add_argument("ineq")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_classify)

    c = sub.add_parser("correspond", help="emit the KRel or PRel correspondent")
    c.add_argument("ineq")
    c.add_argument("--target", choices=("krel", "prel"), required=True)
    c.add_argument("--shape", choices=("a", "b"))
    c.add_argument("--simplify-analytic", action="store_true")
    c.add_argument("--unicode", action="store_true")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_correspond)

    c = sub.add_parser("lift", help="KRel correspondent, its lifting, and the PRel correspondent")
    c.add_argument("ineq")
    c.add_argument("--shape", choices=("a", "b"))
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_lift)

    c = sub.add_parser("check", help="evaluate one formula on one frame file")
    c.add_argument("--frame", required=True)
    c.add_argument("--formula", required=True)
    c.add_argument("--shape", choices=("a", "b"))
    g = c.add_mutually_exclusive_group()
    g.add_argument("--oracle", dest="mode", action="store_const", const="oracle")
    g.add_argument("--term", dest="mode", action="store_const", const="term")
    g.add_argument("--both", dest="mode", action="store_const", const="both")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_check)

    c = sub.add_parser("verify", help="oracle-versus-correspondent sweep")
    c.add_argument("--suite", choices=SUITES, required=True)
    c.add_argument("--semantics", choices=SEMANTICS, required=True)
    c.add_argument("--max-size", type=int, default=2)
    c.add_argument("--samples", type=int, default=0)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--sample-size", type=int)
    c.add_argument("--algebra", default="chain3")
    c.add_argument("--no-exhaustive", action="store_true")
    c.add_argument("--dump", help="directory for counterexample frame files")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("regress", help="reproduce the documented counterexamples")
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_regress)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NotAnMrp as exc:
        print(f"NotAnMrp: {exc}", file=sys.stderr)
        return 2
    except MrpcError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
