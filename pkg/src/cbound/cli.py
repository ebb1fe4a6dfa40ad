"""Command line front end.

One subcommand per pipeline stage.  Exit codes: 0 success, 1 bad input,
2 computation budget exceeded, 3 fixture or certificate mismatch.
Diagnostics go to stderr; the report stream stays machine-friendly under
--machine (one key=value per line).
"""

from __future__ import annotations

import argparse
import sys

from .braids import BraidError, BraidWord
from .classify import (
    ClassifyError,
    LinkRecord,
    apply_rules,
    axiom_audit,
    describe_ledger,
    parse_certificate,
    parse_kb,
    table1_report,
)
from .diagrams import Diagram, DiagramError, from_braid, linking_matrix
from .embed import EmbedError, auto_geometry, oval_link_lk, oval_link_pd, render_svg
from .homfly import BudgetExceeded, homfly, homfly_braid
from .notation import ParseError, parse_braid, parse_ovals, parse_pd, render_braid, render_pd, render_poly
from .splice import (
    OvalError,
    cabling_program,
    linking_from_splice,
    realizable,
    render_splice,
    simplify_splice,
    splice_diagram,
)


def _load_text(arg: str) -> str:
    """Inline literal or path to a file holding one."""
    if arg.lstrip().startswith(("BR[", "PD[")):
        return arg
    with open(arg) as fh:
        return fh.read()


def _load_diagram(arg: str, unknots: int | None) -> tuple[Diagram, BraidWord | None]:
    text = _load_text(arg).strip()
    if text.startswith("BR"):
        b = parse_braid(text)
        return from_braid(b), b
    return parse_pd(text, unknots), None


def _emit_matrix(args, mat: list[list[int]], labels=None):
    if args.machine:
        for i, row in enumerate(mat):
            key = labels[i] if labels else i
            print("lk.%s=%s" % (key, ",".join(str(v) for v in row)))
    else:
        if labels:
            print("components: %s" % " ".join(str(x) for x in labels))
        width = max((len(str(v)) for row in mat for v in row), default=1)
        for row in mat:
            print(" ".join(str(v).rjust(width) for v in row))


def cmd_homfly(args) -> int:
    diag, _ = _load_diagram(args.input, args.unknots)
    p = homfly(diag, args.skein_budget)
    if args.machine:
        print("poly=%s" % render_poly(p))
        print("ord_v=%d" % p.ord_v)
    else:
        print("P = %s" % render_poly(p))
        print("ord_v = %d" % p.ord_v)
    return 0


def cmd_lk(args) -> int:
    diag, _ = _load_diagram(args.input, args.unknots)
    _emit_matrix(args, linking_matrix(diag))
    return 0


def cmd_chi(args) -> int:
    b = parse_braid(_load_text(args.input).strip())
    rec = LinkRecord("input", b)
    ledger = apply_rules([rec], skein_budget=args.skein_budget, search_budget=args.search_budget)
    row = ledger.rows["input"]
    (slo, shi), (mlo, mhi) = row.chi.chi_s, row.chi.chi_s_minus
    if args.machine:
        print("chi_s.lo=%d" % slo)
        print("chi_s.hi=%d" % shi)
        print("chi_s_minus.lo=%d" % mlo)
        print("chi_s_minus.hi=%d" % mhi)
        for i, (move, word) in enumerate(row.search_witness):
            print("witness.%d=%s %s" % (i, move, render_braid(word)))
        print("search.truncated=%s" % ("yes" if row.search_truncated else "no"))
    else:
        print("chi_s in [%d, %d]" % (slo, shi))
        print("chi_s^- in [%d, %d]" % (mlo, mhi))
        for label, key in (("chi_s", "chi_s"), ("chi_s^-", "chi_s_minus")):
            for side, cmp_ in (("lo", ">="), ("hi", "<=")):
                for tags, (v, why) in sorted(row.chi_sources["%s.%s" % (key, side)].items(), key=lambda t: sorted(t[0])):
                    print("  %s %s %d  (%s)" % (label, cmp_, v, why))
        if row.search_witness:
            print("witness path:")
            print("  start %s" % render_braid(b))
            for move, word in row.search_witness:
                print("  %s -> %s" % (move, render_braid(word)))
    if row.search_truncated:
        print("warning: search budget hit, lower bound may be slack", file=sys.stderr)
    return 0


def cmd_qp_verify(args) -> int:
    """Certificate file: a ``braid BR[...]`` line and a ``factors ...`` line."""
    braid = None
    factors_text = None
    for raw in _load_text(args.input).splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "braid":
            braid = parse_braid(rest.strip())
        elif key == "factors":
            factors_text = rest.strip()
        else:
            raise ParseError("unknown certificate key %r" % key)
    if braid is None or factors_text is None:
        raise ParseError("certificate needs both a braid and a factors line")
    fac = parse_certificate(braid.strands, factors_text)
    from .braids import braid_equal, expand_qp, qp_chi

    ok = braid_equal(expand_qp(fac), braid)
    chi = qp_chi(fac)
    if args.machine:
        print("verified=%s" % ("yes" if ok else "no"))
        print("chi=%d" % chi)
    elif ok:
        print("certificate verified: %d factors on %d strands, characteristic %d"
              % (len(fac.factors), braid.strands, chi))
    else:
        print("certificate mismatch: factors do not multiply to the declared word")
    return 0 if ok else 3


def cmd_qp_obstruct(args) -> int:
    b = parse_braid(_load_text(args.input).strip())
    rec = LinkRecord("input", b)
    ledger = apply_rules([rec], skein_budget=args.skein_budget, search_budget=args.search_budget)
    hi = ledger.rows["input"].chi.chi_s[1]
    p = homfly_braid(b, args.skein_budget)
    from .homfly import fwm_obstruction

    ob = fwm_obstruction(p, hi)
    verdict = "refuted" if ob["refuted"] else "consistent"
    if args.machine:
        print("ord_v=%d" % ob["ord_v"])
        print("chi_s.hi=%d" % hi)
        print("required_at_least=%d" % ob["required_at_least"])
        print("verdict=%s" % verdict)
    else:
        print("ord_v = %d, quasipositivity needs >= %d (from chi_s <= %d)"
              % (ob["ord_v"], ob["required_at_least"], hi))
        print("verdict: %s" % verdict)
    return 0


def _load_forest(path: str):
    with open(path) as fh:
        return parse_ovals(fh.read())


def cmd_ovals(args) -> int:
    forest = _load_forest(args.file)
    if args.stage == "realize":
        ok, bad = realizable(forest)
        if args.machine:
            print("realizable=%s" % ("yes" if ok else "no"))
            if bad:
                print("violated=%s" % ",".join(str(i) for i in bad))
        elif ok:
            print("realizable")
        else:
            print("not realizable: winding balance fails at ovals %s"
                  % ", ".join(str(i) for i in bad))
        return 0
    if args.stage == "cable":
        for i, op in enumerate(cabling_program(forest)):
            print("op.%d=%s" % (i, op) if args.machine else str(op))
        return 0
    if args.stage == "splice":
        sd = simplify_splice(splice_diagram(forest))
        labels, mat = linking_from_splice(sd)
        if args.machine:
            for i, line in enumerate(render_splice(sd).splitlines()):
                print("edge.%d=%s" % (i, line))
        else:
            print(render_splice(sd))
        _emit_matrix(args, mat, labels)
        return 0
    # embed
    diag, ids = oval_link_pd(forest, args.orientation, args.seed, args.samples_scale)
    labels, mat = oval_link_lk(forest, args.orientation, args.seed, args.samples_scale)
    p = homfly(diag, args.skein_budget)
    if args.machine:
        print("pd=%s" % render_pd(diag))
        print("components=%s" % ",".join(str(i) for i in ids))
        _emit_matrix(args, mat, labels)
        print("poly=%s" % render_poly(p))
        print("ord_v=%d" % p.ord_v)
    else:
        print(render_pd(diag))
        print("component order: %s" % " ".join(str(i) for i in ids))
        _emit_matrix(args, mat, labels)
        print("P = %s" % render_poly(p))
        print("ord_v = %d" % p.ord_v)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(forest, args.orientation, args.seed, args.samples_scale))
        print("svg written to %s" % args.svg, file=sys.stderr)
    return 0


def cmd_classify(args) -> int:
    records = parse_kb(_load_text(args.kb))
    ledger = apply_rules(
        records, skein_budget=args.skein_budget, search_budget=args.search_budget, jobs=args.jobs
    )
    print(describe_ledger(records, ledger, machine=args.machine))
    return 0


def cmd_table1(args) -> int:
    records = parse_kb(_load_text(args.kb))
    ledger = apply_rules(
        records, skein_budget=args.skein_budget, search_budget=args.search_budget, jobs=args.jobs
    )
    audit = axiom_audit(
        records, ledger, skein_budget=args.skein_budget, search_budget=args.search_budget, jobs=args.jobs
    )
    text, mismatches = table1_report(records, ledger, audit, machine=args.machine)
    print(text)
    return 3 if mismatches else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="projection chart seed")
    common.add_argument("--skein-budget", type=int, default=1 << 20, dest="skein_budget",
                        help="node cap for skein recursion")
    common.add_argument("--search-budget", type=int, default=100000, dest="search_budget",
                        help="node cap for the chi search")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for per-link invariants")
    common.add_argument("--machine", action="store_true", help="key=value output")

    ap = argparse.ArgumentParser(prog="cbound", description="link invariants and boundary classification")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homfly", parents=[common], help="skein polynomial of a braid closure or PD code")
    p.add_argument("input", help="BR[...] or PD[...] literal, or a file holding one")
    p.add_argument("--unknots", type=int, default=None, help="free loop count for crossingless PD input")
    p.set_defaults(func=cmd_homfly)

    p = sub.add_parser("lk", parents=[common], help="linking matrix")
    p.add_argument("input")
    p.add_argument("--unknots", type=int, default=None)
    p.set_defaults(func=cmd_lk)

    p = sub.add_parser("chi", parents=[common], help="two-sided slice characteristic bounds")
    p.add_argument("input", help="BR[...] literal or file")
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("qp-verify", parents=[common], help="check a quasipositive factorization file")
    p.add_argument("input")
    p.set_defaults(func=cmd_qp_verify)

    p = sub.add_parser("qp-obstruct", parents=[common], help="polynomial order obstruction")
    p.add_argument("input")
    p.set_defaults(func=cmd_qp_obstruct)

    p = sub.add_parser("ovals", parents=[common], help="oval forest pipeline")
    p.add_argument("stage", choices=["realize", "cable", "splice", "embed"])
    p.add_argument("file")
    p.add_argument("--orientation", choices=["ccw", "induced"], default="ccw")
    p.add_argument("--samples-scale", type=int, default=1, dest="samples_scale")
    p.add_argument("--svg", default=None, metavar="OUT.SVG")
    p.set_defaults(func=cmd_ovals)

    p = sub.add_parser("classify", parents=[common], help="run the rule engine on a knowledge base")
    p.add_argument("kb")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table1", parents=[common], help="reproduce the classification table")
    p.add_argument("kb")
    p.set_defaults(func=cmd_table1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print("budget exceeded: %s" % e, file=sys.stderr)
        return 2
    except (ParseError, ClassifyError, OvalError, EmbedError, BraidError, DiagramError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except BrokenPipeError:
        import os

        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
