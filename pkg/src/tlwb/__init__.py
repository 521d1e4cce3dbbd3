"""Workbench for deterministic and counting-guarded temporal logics over
finite words: parse, evaluate, translate between fragments, decide
satisfiability, and model-check Kripke structures."""

from . import atnext, counting, evaluate, formulas, oracle, rankers, syntax, uitl2xy

__all__ = [
    "atnext", "counting", "evaluate", "formulas", "oracle", "rankers",
    "syntax", "uitl2xy",
]
