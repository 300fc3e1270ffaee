"""The ``hcf`` command-line workbench."""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .enclosures import DEFAULT_MAX_BITS, parse_oracle
from .enumeration import GammaSpec, count_lattice_annulus, enumerate_gamma, measure_sum_bounded_words
from .errors import DomainError, GeometryInconsistency, InsufficientPrecision, Undecidable
from .gaussian import parse_gaussian_rational
from .geometry import canonical_text, classify, cylinder_area, prototype_set, region_area
from .hcf import PartialQuotientSeq, dd, evaluate, format_word, hcf_expand_rational, hcf_expand_stream, qpair
from .search import PsiSpec, distance_interval, search_approx
from .verify import ANCHORS, run_suite

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def record(self, rec: dict, text: str | None = None):
        if self.fmt == "jsonl":
            self.stream.write(json.dumps(rec, sort_keys=True) + "\n")
        else:
            self.stream.write((text if text is not None else _kv(rec)) + "\n")

    def text(self, line: str):
        # prose only appears in text mode
        if self.fmt == "text":
            self.stream.write(line + "\n")


def _kv(rec: dict) -> str:
    return "  ".join(f"{k}={v}" for k, v in rec.items())


def _word(text: str) -> PartialQuotientSeq:
    return PartialQuotientSeq.parse(text)


def _sci(x: Fraction) -> str:
    return f"{float(x):.9e}"


# subcommands


def cmd_expand(args, out: Output) -> int:
    if args.oracle is None and args.value is None:
        raise DomainError("give a number literal or --oracle")
    z = parse_oracle(args.oracle if args.oracle is not None else args.value)
    e = hcf_expand_stream(z, args.n, max_bits=args.max_bits)
    rec = e.to_record()
    if e.shift:
        rec["integer_part"] = str(e.shift)
    if not e.terminated and e.certified_prefix_len < args.n:
        out.record(rec, f"{e} (certified {e.certified_prefix_len} of {args.n})")
        return EXIT_PRECISION
    out.record(rec, str(e))
    return EXIT_OK


def cmd_eval(args, out: Output) -> int:
    w = _word(args.word)
    v = evaluate(w)
    re, im = float(v.real), float(v.imag)
    out.record({"word": format_word(w), "value": str(v), "approx": f"{re:.12g}{im:+.12g}i"}, str(v))
    return EXIT_OK


def cmd_qpair(args, out: Output) -> int:
    pr = qpair(_word(args.word))
    rec = pr.to_record()
    rec["det"] = str(pr.det())
    out.record(rec)
    return EXIT_OK


def cmd_dd(args, out: Output) -> int:
    z = parse_oracle(args.z)
    approx = parse_gaussian_rational(args.approx)
    if z.exact is not None and z.exact == approx:
        raise DomainError("dd needs z different from the approximant")
    need = len(hcf_expand_rational(approx).quotients)
    e = hcf_expand_stream(z, need + 1, max_bits=args.max_bits)
    d = dd(e, approx)
    sq, dist = distance_interval(z, approx, args.bits)
    inv_q2 = Fraction(1, approx.den.norm())
    psi = PsiSpec(Fraction(args.c), Fraction(args.lam))
    sign_hi = psi.compare_sq(sq.hi, approx.den.norm())
    sign_lo = psi.compare_sq(sq.lo, approx.den.norm())
    check = "hit" if sign_hi <= 0 else ("miss" if sign_lo > 0 else "undecided")
    rec = {
        "z": args.z,
        "approx": str(approx),
        "dd": d,
        "dist_lo": _sci(dist.lo),
        "dist_hi": _sci(dist.hi),
        "inv_q_sq": _sci(inv_q2),
        "psi": str(psi),
        "psi_check": check,
    }
    out.record(rec)
    return EXIT_OK


def cmd_prototype(args, out: Output) -> int:
    region = prototype_set(args.word)
    rec = region.to_record()
    rec["word"] = args.word
    out.record(rec, canonical_text(region))
    if out.fmt == "text":
        for c in rec["constraints"]:
            out.text("  " + _kv(c))
    return EXIT_OK


def cmd_classify(args, out: Output) -> int:
    region = prototype_set(args.word)
    cls = classify(region)
    rec = cls.to_record()
    rec["word"] = args.word
    rec["text"] = canonical_text(region)
    out.record(rec, f"{cls.label}: {rec['text']}")
    return EXIT_OK


def cmd_area(args, out: Output) -> int:
    if args.prototype:
        res = region_area(prototype_set(args.word), args.method, args.samples, args.seed)
    else:
        res = cylinder_area(args.word, args.method, args.samples, args.seed)
    rec = res.to_record()
    rec["word"] = args.word
    rec["of"] = "prototype" if args.prototype else "cylinder"
    out.record(rec)
    return EXIT_OK


def cmd_gamma(args, out: Output) -> int:
    spec = GammaSpec.from_bounds(Fraction(args.M), Fraction(args.Q))
    if args.measure:
        est = measure_sum_bounded_words(Fraction(args.M), args.measure, args.samples, args.seed)
        out.record(est.to_record())
        return EXIT_OK
    res = enumerate_gamma(spec, budget=args.budget)
    if args.words:
        for rec in res.records():
            out.record(rec, f"{rec['word']}  N(q)={rec['q_norm_sq']}")
    out.record({"M": args.M, "Q": args.Q, "count": len(res), "complete": res.complete, "nodes": res.nodes, "states": res.states})
    return EXIT_OK if res.complete else EXIT_PRECISION


def cmd_annulus(args, out: Output) -> int:
    r = Fraction(args.r)
    c = count_lattice_annulus(r)
    out.record({"r": args.r, "count": c, "r2_count": f"{float(r * r * c):.6f}"})
    return EXIT_OK


def cmd_search(args, out: Output) -> int:
    z = parse_oracle(args.z)
    psi = PsiSpec(Fraction(args.c), Fraction(args.lam))
    lattice = {"auto": None, "on": True, "off": False}[args.lattice]
    cands, expansion = search_approx(z, psi, args.limit, max_bits=args.max_bits, lattice=lattice)
    hits = [c for c in cands if c.status != "miss" or args.all]
    out.text(f"z = {expansion.quotients[:12]}{'...' if len(expansion.quotients) > 12 else ''}; psi = {psi}; N(q) <= {args.limit}")
    if not hits:
        out.text("(no approximants)")
    for c in hits:
        rec = c.to_record()
        out.record(rec, f"{rec['approx']:>28}  N(q)={rec['q_norm_sq']:<7} |z-p/q| in [{rec['dist_lo']}, {rec['dist_hi']}]  dd={rec['dd']}  {rec['status']}  ({rec['source']})")
    return EXIT_PRECISION if any(c.status == "undecided" for c in cands) else EXIT_OK


def cmd_verify(args, out: Output) -> int:
    report = run_suite(args.suite, seed=args.seed, timings=args.timings)
    for c in report.checks:
        rec = c.to_record(report.suite)
        out.record(rec, f"{c.status.upper():7} {c.id}  [{c.anchor}]  {c.detail}")
    counts = report.counts
    summary = {"suite": report.suite, "seed": report.seed, **counts, "ok": report.ok}
    if report.runtime_ms is not None:
        summary["runtime_ms"] = round(report.runtime_ms, 1)
    out.record({"summary": summary}, f"\n{report.suite}: {counts['pass']} passed, {counts['fail']} failed, {counts['skipped']} skipped (seed {report.seed})")
    cov = report.coverage()
    if args.suite == "all":
        out.text("\ncoverage:")
        for anchor, n in cov.items():
            out.record({"coverage": anchor, "checks": n}, f"  {n:3d}  {anchor}  ({ANCHORS[anchor]})")
        if any(n == 0 for n in cov.values()):
            return EXIT_CHECK
    return EXIT_OK if report.ok else EXIT_CHECK


_GLOBAL_DEFAULTS = {"seed": 0, "max_bits": DEFAULT_MAX_BITS, "format": "text", "timings": False}


def _global_flags(parser: argparse.ArgumentParser, defaults: bool):
    # subcommands repeat the global flags without defaults so that
    # "hcf --seed 7 verify" and "hcf verify --seed 7" agree
    d = (lambda k: _GLOBAL_DEFAULTS[k]) if defaults else (lambda k: argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=d("seed"), help="RNG seed (default 0)")
    parser.add_argument("--max-bits", type=int, default=d("max_bits"), help="precision cap for enclosures")
    parser.add_argument("--format", choices=("text", "jsonl"), default=d("format"))
    parser.add_argument("--timings", action="store_true", default=d("timings"), help="attach wall-clock timings")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, defaults=False)

    p = argparse.ArgumentParser(prog="hcf", description="Hurwitz continued fractions over the Gaussian integers.")
    _global_flags(p, defaults=True)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("expand", parents=[common], help="HCF expansion of a number or oracle")
    s.add_argument("value", nargs="?", help="literal such as '(37+6i)/(129+24i)' or an expression with sqrt()")
    s.add_argument("--oracle", help="built-in oracle name or expression")
    s.add_argument("-n", type=int, default=20, help="number of quotients for irrational input")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("eval", parents=[common], help="value [0; a1, ..., an] of a word")
    s.add_argument("word")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("qpair", parents=[common], help="Q-pair of a word")
    s.add_argument("word")
    s.set_defaults(func=cmd_qpair)

    s = sub.add_parser("dd", parents=[common], help="expansion discrepancy between z and an approximant")
    s.add_argument("z", help="oracle name, expression or literal")
    s.add_argument("approx")
    s.add_argument("--bits", type=int, default=256, help="precision of the distance interval")
    s.add_argument("--c", default="1")
    s.add_argument("--lam", default="2")
    s.set_defaults(func=cmd_dd)

    for name, fn, helptext in (("prototype", cmd_prototype, "prototype set of a word"), ("classify", cmd_classify, "full / regular class / irregular")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("word")
        s.set_defaults(func=fn)

    s = sub.add_parser("area", parents=[common], help="area of a cylinder or prototype set")
    s.add_argument("word")
    s.add_argument("--method", choices=("exact", "montecarlo"), default="exact")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--prototype", action="store_true", help="area of the prototype set instead of the cylinder")
    s.set_defaults(func=cmd_area)

    s = sub.add_parser("gamma", parents=[common], help="full words crossing |q| = Q over the alphabet |a| <= M")
    s.add_argument("--M", default="3")
    s.add_argument("--Q", default="30")
    s.add_argument("--words", action="store_true", help="list the words")
    s.add_argument("--budget", type=int, default=5_000_000)
    s.add_argument("--measure", type=int, metavar="N", help="instead estimate the measure of level-N cylinders with |a| <= M")
    s.add_argument("--samples", type=int, default=1_000_000)
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("annulus", parents=[common], help="lattice points b with Im b > 0 and 1/r <= |b| <= 2/r")
    s.add_argument("r")
    s.set_defaults(func=cmd_annulus)

    s = sub.add_parser("search", parents=[common], help="approximants with |z - p/q| <= c |q|^-lam")
    s.add_argument("z")
    s.add_argument("--c", default="1")
    s.add_argument("--lam", default="2")
    s.add_argument("--limit", type=int, default=20000, help="bound on N(q)")
    s.add_argument("--lattice", choices=("auto", "on", "off"), default="auto", help="also scan every denominator up to the limit")
    s.add_argument("--all", action="store_true", help="show misses too")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("suite", nargs="?", default="all", choices=("props", "cylinders", "vk", "gamma", "annulus", "rcf", "all"))
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    t0 = time.perf_counter()
    try:
        code = args.func(args, out)
    except InsufficientPrecision as exc:
        print(f"hcf: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except Undecidable as exc:
        print(f"hcf: undecidable: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"hcf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryInconsistency as exc:
        print(f"hcf: geometry check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    if args.timings and args.cmd != "verify":
        print(f"hcf: {1000 * (time.perf_counter() - t0):.1f} ms", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
