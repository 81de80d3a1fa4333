"""Command-line front end: ``conglat <verb> [options]``.

Exit status is 0 on success, 1 when ``verify`` finds a disagreement, and 2
on usage errors or exceeded limits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from conglat.congruence import act, congruence_lattice
from conglat.errors import ConglatError
from conglat.families import FAMILIES, build
from conglat.groups import DEFAULT_MAX_GROUP_ORDER
from conglat.heights import (
    SIDES,
    TABLE3_FAMILIES,
    acts_heights,
    brute_heights,
    formula_heights,
)
from conglat.semigroup import from_cayley_table, green, is_h_separable, parse_cayley_text

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2
CSV_HEADER = ["family", "n", "side", "height", "mode"]


class UsageError(Exception):
    pass


def parse_n(text):
    """``"3"`` or an inclusive range ``"0-4"``."""
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree {text!r}; use N or LO-HI") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or negative range {text!r}")
    return list(range(lo, hi + 1))


def make_parser():
    p = argparse.ArgumentParser(prog="conglat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, family=True):
        if family:
            sp.add_argument("--family", choices=FAMILIES, required=True)
            sp.add_argument("--n", type=parse_n, required=True, help="degree N or range LO-HI")
            sp.add_argument("--q", type=int, help="field order, for mnq")
        sp.add_argument("--side", choices=SIDES + ("all",), default="all")
        sp.add_argument("--format", choices=("text", "json", "csv", "dot"), default="text")
        sp.add_argument("--max-group-order", type=int, default=DEFAULT_MAX_GROUP_ORDER)
        sp.add_argument("--max-lattice", type=int, default=None,
                        help="congruence-count limit (default: $CONGLAT_MAX_LATTICE or 100000)")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker processes for grids (default: CPU count)")

    for verb, help_ in [("formula", "heights from D-class data"),
                        ("acts", "heights via principal factors of the acts"),
                        ("brute", "enumerate the whole congruence lattices"),
                        ("verify", "run all tiers and compare"),
                        ("green", "Green's structure report")]:
        common(sub.add_parser(verb, help=help_))
    t3 = sub.add_parser("table3", help="formula-tier grid for n = 0..10 as CSV")
    t3.add_argument("--format", choices=("csv", "text", "json"), default="csv")
    t3.add_argument("--threads", type=int, default=None)
    cay = sub.add_parser("cayley", help="read a Cayley table, then run another verb on it")
    cay.add_argument("input", help="path to the table, or - for stdin")
    cay.add_argument("--then", dest="then", choices=("acts", "brute", "verify", "green"),
                     default="brute")
    common(cay, family=False)
    return p


def sides_of(args):
    return SIDES if args.side == "all" else (args.side,)


# --- cell computations (top-level so worker processes can import them) --------

def _cell(job):
    verb, family, n, q, sides, max_lattice, max_group_order = job
    if verb == "formula":
        return formula_heights(family, n, q, max_group_order)
    S = build(family, n, q)
    if verb == "acts":
        return acts_heights(S, sides, max_lattice, family, n, q)
    if verb == "brute":
        return brute_heights(S, sides, max_lattice, family, n, q)
    raise ValueError(verb)


def _run_cells(jobs, threads):
    threads = threads or os.cpu_count() or 1
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_cell, jobs))
    return [_cell(j) for j in jobs]


# --- output ------------------------------------------------------------------

def _name(report):
    if report.family is None:
        return "input"
    return f"{report.family}({report.n})" if report.q is None else f"{report.family}({report.n},{report.q})"


def render_reports(reports, sides, fmt):
    if fmt == "json":
        docs = [r.to_dict(sides) for r in reports]
        return json.dumps(docs[0] if len(docs) == 1 else docs, ensure_ascii=False, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in reports:
            for side in sides:
                w.writerow([r.family or "input", r.n if r.n is not None else "", side, r.value(side), r.mode])
        return buf.getvalue()
    lines = []
    for r in reports:
        for side in sides:
            if r.mode == "brute":
                lines.append(f"{_name(r)} {side}: congruences: {r.counts[side]}, height: {r.value(side)}")
            else:
                lines.append(f"{_name(r)} {side}: height: {r.value(side)}")
    return "\n".join(lines) + "\n"


def green_report(S):
    gs = green(S)
    out = []
    for d in gs.d_classes:
        l_sep = all(is_h_separable(S, gs, c, "left") for c in d.l_ids)
        r_sep = all(is_h_separable(S, gs, c, "right") for c in d.r_ids)
        out.append({
            "class": d.id,
            "rank": str(d.rank) if d.rank is not None else None,
            "size": len(d.elements),
            "num_L": d.num_L,
            "num_R": d.num_R,
            "h_size": d.h_size,
            "group_order": d.schutz.right_translations.order,
            "regular": d.is_regular,
            "minimal": d.is_minimal,
            "L_separable": l_sep,
            "R_separable": r_sep,
            "idempotent_matrix": [list(row) for row in d.idempotent_matrix],
        })
    return out


def render_green(name, rows, fmt):
    if fmt == "json":
        return json.dumps({"semigroup": name, "d_classes": rows}, indent=2) + "\n"
    keys = ["class", "rank", "size", "num_L", "num_R", "h_size", "group_order", "regular",
            "minimal", "L_separable", "R_separable"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["semigroup"] + keys)
        for row in rows:
            w.writerow([name] + [row[k] for k in keys])
        return buf.getvalue()
    lines = [f"{name}: {len(rows)} D-classes"]
    for row in rows:
        lines.append("  " + ", ".join(f"{k}={row[k]}" for k in keys))
        for m in row["idempotent_matrix"]:
            lines.append("    " + " ".join(map(str, m)))
    return "\n".join(lines) + "\n"


def render_verify(results, fmt):
    """``results`` holds ``(name, side, {tier: value})`` triples."""
    if fmt == "json":
        docs = [{"semigroup": name, "side": side, "values": {k: v if isinstance(v, int) else str(v)
                                                             for k, v in vals.items()},
                 "agree": len(set(map(str, vals.values()))) == 1}
                for name, side, vals in results]
        return json.dumps(docs, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["semigroup", "side", "tier", "height"])
        for name, side, vals in results:
            for tier, v in vals.items():
                w.writerow([name, side, tier, v])
        return buf.getvalue()
    lines = []
    for name, side, vals in results:
        agree = len(set(map(str, vals.values()))) == 1
        shown = ", ".join(f"{k}={v}" for k, v in vals.items())
        lines.append(f"{name} {side}: {shown} [{'ok' if agree else 'MISMATCH'}]")
    return "\n".join(lines) + "\n"


# --- verbs -------------------------------------------------------------------

def _jobs(verb, args):
    return [(verb, args.family, n, args.q, sides_of(args), args.max_lattice, args.max_group_order)
            for n in args.n]


def cmd_heights(args):
    if args.format == "dot":
        return cmd_dot(args)
    reports = _run_cells(_jobs(args.verb, args), args.threads)
    return EXIT_OK, render_reports(reports, sides_of(args), args.format)


def _single_lattice(S, args):
    if args.side == "all":
        raise UsageError("--format dot needs a single --side")
    return congruence_lattice(act(S, args.side, use_generators=True), args.max_lattice)


def cmd_dot(args):
    if args.verb != "brute":
        raise UsageError("--format dot is only available for brute")
    if len(args.n) != 1:
        raise UsageError("--format dot needs a single --n")
    L = _single_lattice(build(args.family, args.n[0], args.q), args)
    return EXIT_OK, L.to_dot()


def _verify_semigroup(S, name, sides, args, formula=None):
    acts = acts_heights(S, sides, args.max_lattice)
    brute = brute_heights(S, sides, args.max_lattice)
    results = []
    for side in sides:
        vals = {}
        if formula is not None:
            vals["formula"] = formula.value(side)
        vals["acts"] = acts.value(side)
        vals["brute"] = brute.value(side)
        results.append((name, side, vals))
    return results


def cmd_verify(args):
    if args.format == "dot":
        raise UsageError("--format dot is only available for brute")
    sides = sides_of(args)
    results = []
    for n in args.n:
        S = build(args.family, n, args.q)
        F = formula_heights(args.family, n, args.q, args.max_group_order)
        name = f"{args.family}({n})" if args.q is None else f"{args.family}({n},{args.q})"
        results += _verify_semigroup(S, name, sides, args, F)
    ok = all(len(set(map(str, vals.values()))) == 1 for _, _, vals in results)
    return (EXIT_OK if ok else EXIT_MISMATCH), render_verify(results, args.format)


def cmd_green(args):
    out = []
    for n in args.n:
        S = build(args.family, n, args.q)
        out.append(render_green(S.name, green_report(S), args.format))
    return EXIT_OK, "".join(out)


def cmd_table3(args):
    jobs = [("formula", f, n, None, SIDES, None, DEFAULT_MAX_GROUP_ORDER)
            for f in TABLE3_FAMILIES for n in range(11)]
    reports = _run_cells(jobs, args.threads)
    return EXIT_OK, render_reports(reports, SIDES, args.format)


def cmd_cayley(args):
    text = sys.stdin.read() if args.input == "-" else open(args.input).read()
    S = from_cayley_table(parse_cayley_text(text), name="input")
    sides = sides_of(args)
    if args.then == "green":
        return EXIT_OK, render_green("input", green_report(S), args.format)
    if args.then == "verify":
        results = _verify_semigroup(S, "input", sides, args)
        ok = all(len(set(map(str, v.values()))) == 1 for _, _, v in results)
        return (EXIT_OK if ok else EXIT_MISMATCH), render_verify(results, args.format)
    if args.format == "dot":
        if args.then != "brute":
            raise UsageError("--format dot is only available for brute")
        return EXIT_OK, _single_lattice(S, args).to_dot()
    runner = acts_heights if args.then == "acts" else brute_heights
    return EXIT_OK, render_reports([runner(S, sides, args.max_lattice)], sides, args.format)


VERBS = {"formula": cmd_heights, "acts": cmd_heights, "brute": cmd_heights,
         "verify": cmd_verify, "green": cmd_green, "table3": cmd_table3, "cayley": cmd_cayley}


def execute(argv):
    """Run one command; returns ``(exit status, document)``."""
    args = make_parser().parse_args(argv)
    if getattr(args, "family", None) == "mnq" and args.q is None:
        raise UsageError("--family mnq needs --q")
    return VERBS[args.verb](args)


def main(argv=None):
    try:
        status, doc = execute(sys.argv[1:] if argv is None else argv)
    except (UsageError, ConglatError, OSError, ValueError) as e:
        print(f"conglat: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(doc)
    return status


if __name__ == "__main__":
    sys.exit(main())
