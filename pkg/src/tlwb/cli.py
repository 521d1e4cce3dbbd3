"""Batch front door: parse, evaluate, translate, decide and model-check.

Machine-readable verdicts go to stdout, diagnostics to stderr.  Exit codes:
0 success or verdict, 1 input error, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import sys

from . import atnext as atnext_mod
from . import counting, oracle, rankers, uitl2xy
from .evaluate import eval_formula
from .formulas import recursion_depth, size, us_depth
from .syntax import (
    EmptyWordError, FragmentError, ParseError, parse_formula, parse_kripke,
    parse_word, print_formula,
)

LOGICS = ("xy", "uitl", "ltl", "atnext", "blintl",
          "invtl", "binvtl", "bthtl", "invmodtl")


def _read_formula(text: str) -> str:
    if text == "-":
        return sys.stdin.read()
    return text


def _dump(phi, logic: str) -> None:
    print(print_formula(phi))
    print(f"size={size(phi)}")
    if logic == "atnext":
        print(f"recursion_depth={recursion_depth(phi)}")
    if logic == "ltl":
        print(f"us_depth={us_depth(phi)}")


def cmd_parse(args) -> int:
    phi = parse_formula(_read_formula(args.formula), args.logic)
    if args.full_parens:
        print(print_formula(phi, parenthesize=True))
        print(f"size={size(phi)}")
    else:
        _dump(phi, args.logic)
    return 0


def cmd_eval(args) -> int:
    phi = parse_formula(_read_formula(args.formula), args.logic)
    word = parse_word(args.word)
    if args.logic == "uitl":
        point = tuple(args.interval) if args.interval else (1, len(word))
    else:
        point = args.pos if args.pos is not None else 1
    print("true" if eval_formula(word, phi, args.logic, point) else "false")
    return 0


def cmd_sat(args) -> int:
    phi = parse_formula(_read_formula(args.formula), args.logic)
    method = args.method
    if method is None:
        if args.logic == "xy":
            method = "small-model"
        elif args.logic in ("blintl", "invtl", "binvtl", "bthtl", "invmodtl"):
            method = "automaton"
        else:
            method = "bruteforce"
    if method == "small-model":
        if args.logic != "xy":
            print("small-model search applies to the xy logic", file=sys.stderr)
            return 2
        w = rankers.sat_xy(phi)
        print(f"SAT {w}" if w is not None else "UNSAT")
        return 0
    if method == "automaton":
        w = counting.sat_automaton(phi, alphabet=args.alphabet, budget=args.budget)
        print(f"SAT {w}" if w is not None else "UNSAT")
        return 0
    if args.max_len is None:
        print("bruteforce search needs --max-len", file=sys.stderr)
        return 2
    sigma = args.alphabet or rankers.search_alphabet(phi)
    verdict = oracle.brute_sat(phi, args.logic, sigma, args.max_len)
    if isinstance(verdict, oracle.Sat):
        print(f"SAT {verdict.word}")
    else:
        print(f"NONE-FOUND {verdict.bound}")
    return 0


_TRANSLATIONS = {
    ("uitl", "xy"): ("uitl", lambda phi, a: uitl2xy.trans_uitl(phi, a)),
    ("ltl", "atnext"): ("ltl", lambda phi, a: atnext_mod.ltl_to_atnext(phi)),
    ("atnext", "ltl"): ("atnext", lambda phi, a: atnext_mod.atnext_to_ltl(phi)),
    ("tlplus", "fp"): ("atnext", lambda phi, a: atnext_mod.tlplus_to_fp(phi)),
    ("bthtl", "invtl"): ("bthtl", lambda phi, a: counting.bthtl_to_invtl(phi)),
    ("blintl", "invmodtl"): ("blintl", lambda phi, a: counting.blintl_to_invmodtl(phi)),
}


def cmd_translate(args) -> int:
    key = (args.source, args.target)
    if key not in _TRANSLATIONS:
        pairs = ", ".join(f"{f}->{t}" for f, t in _TRANSLATIONS)
        print(f"unsupported pair; supported: {pairs}", file=sys.stderr)
        return 2
    logic, fn = _TRANSLATIONS[key]
    phi = parse_formula(_read_formula(args.formula), logic)
    print(print_formula(fn(phi, args.alphabet)))
    return 0


def cmd_equiv(args) -> int:
    f1 = parse_formula(_read_formula(args.formula1), args.logic)
    f2 = parse_formula(_read_formula(args.formula2), args.logic2)
    verdict = oracle.check_equiv(f1, args.logic, f2, args.logic2,
                                 args.alphabet, args.max_len)
    if isinstance(verdict, oracle.Equal):
        print(f"EQUAL {verdict.checked}")
    else:
        print(f"COUNTEREXAMPLE {verdict.word} lhs={verdict.lhs} rhs={verdict.rhs}")
    return 0


def cmd_mc(args) -> int:
    with open(args.kripke, encoding="utf-8") as fh:
        kripke = parse_kripke(fh.read())
    phi = parse_formula(_read_formula(args.formula), args.logic)
    ce = counting.mc_kripke(kripke, phi, budget=args.budget)
    print("HOLDS" if ce is None else ce)
    return 0


def cmd_automaton(args) -> int:
    phi = parse_formula(_read_formula(args.formula), args.logic)
    stats: list[counting.AutomatonStats] = []
    counting.sat_automaton(phi, alphabet=args.alphabet, budget=args.budget,
                           stats_out=stats)
    print(stats[0].csv_row())
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tlwb",
        description="deterministic and counting-guarded temporal logic workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a formula and print metrics")
    p.add_argument("--logic", required=True, choices=LOGICS)
    p.add_argument("--full-parens", action="store_true")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("eval", help="evaluate a formula on a word")
    p.add_argument("--logic", required=True, choices=LOGICS)
    p.add_argument("--word", required=True)
    p.add_argument("--pos", type=int)
    p.add_argument("--interval", type=int, nargs=2, metavar=("I", "J"))
    p.add_argument("formula")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("sat", help="decide satisfiability")
    p.add_argument("--logic", required=True, choices=LOGICS)
    p.add_argument("--method", choices=("small-model", "automaton", "bruteforce"))
    p.add_argument("--max-len", type=int)
    p.add_argument("--budget", type=int, default=2 ** 20)
    p.add_argument("--alphabet")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_sat)

    p = sub.add_parser("translate", help="compile between fragments")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--alphabet")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("equiv", help="bounded language-equivalence check")
    p.add_argument("--logic", required=True, choices=LOGICS)
    p.add_argument("--logic2", required=True, choices=LOGICS)
    p.add_argument("--alphabet", required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("formula1")
    p.add_argument("formula2")
    p.set_defaults(fn=cmd_equiv)

    p = sub.add_parser("mc", help="model-check a Kripke structure")
    p.add_argument("--kripke", required=True)
    p.add_argument("--logic", default="blintl", choices=LOGICS)
    p.add_argument("--budget", type=int, default=2 ** 20)
    p.add_argument("formula")
    p.set_defaults(fn=cmd_mc)

    p = sub.add_parser("automaton", help="formula automaton statistics")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--logic", default="blintl", choices=LOGICS)
    p.add_argument("--alphabet")
    p.add_argument("--budget", type=int, default=2 ** 20)
    p.add_argument("formula")
    p.set_defaults(fn=cmd_automaton)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, FragmentError, EmptyWordError,
            counting.SublogicError, atnext_mod.NotTlPlusError,
            rankers.NotAModelError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except counting.ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
