"""Ground truth by exhaustion: bounded word enumeration, brute-force
satisfiability and equivalence checking, and seeded random formula
generation for the property suites.

This module depends only on the formula types and the evaluators; the
engines under test never back an oracle verdict.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator

from .evaluate import member
from .formulas import (
    Alo, Always, And, Atom, BUntil, ChopF, ChopFp, ChopL, ChopLm, Ep, Formula,
    Future, GAnd, GNot, GOr, GSince, GUntil, Guard, Histor, Modulo, Next,
    NextPos, Not, NowG, OMinus, OMinusBar, OPlus, OPlusBar, Or, Past, Prev,
    PrevPos, Pt, Simple, Since, Sp, Threshold, Top, Unit, Until, WXa, WYa,
    Word, XGuard, Xa, YGuard, Ya, normalize_alphabet,
)


@dataclass(frozen=True)
class Equal:
    checked: int


@dataclass(frozen=True)
class Counterexample:
    word: Word
    point: object
    lhs: bool
    rhs: bool


@dataclass(frozen=True)
class Sat:
    word: Word


@dataclass(frozen=True)
class NoneFound:
    bound: int


def enumerate_words(alphabet: str, max_len: int) -> Iterator[Word]:
    """All nonempty words up to max_len in length-lexicographic order."""
    sigma = normalize_alphabet(alphabet)
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    for length in range(1, max_len + 1):
        for tup in itertools.product(sigma, repeat=length):
            yield "".join(tup)


def brute_sat(phi: Formula, logic: str, alphabet: str, max_len: int):
    """First satisfying word in enumeration order, by evaluation only."""
    for w in enumerate_words(alphabet, max_len):
        if member(w, phi, logic):
            return Sat(w)
    return NoneFound(max_len)


def check_equiv(f1: Formula, logic1: str, f2: Formula, logic2: str,
                alphabet: str, max_len: int):
    """Compare language membership on every enumerated word."""
    checked = 0
    for w in enumerate_words(alphabet, max_len):
        m1 = member(w, f1, logic1)
        m2 = member(w, f2, logic2)
        checked += 1
        if m1 != m2:
            point = (1, len(w)) if "uitl" in (logic1, logic2) else 1
            return Counterexample(w, point, m1, m2)
    return Equal(checked)


# ---------------------------------------------------------------------------
# random formulas
# ---------------------------------------------------------------------------

def random_formula(logic: str, size: int, seed: int, alphabet: str = "abc",
                   max_const: int = 4, max_mod: int = 4) -> Formula:
    """Deterministic fragment-respecting random formula of roughly the
    requested size."""
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = random.Random(seed)
    sigma = normalize_alphabet(alphabet)
    gen = _GENERATORS.get(logic)
    if gen is None:
        raise ValueError(f"no generator for logic {logic!r}")
    return gen(rng, size, sigma, max_const, max_mod)


def _letter(rng, sigma):
    return rng.choice(sigma)


def _subset(rng, sigma, allow_empty=False):
    k = rng.randint(0 if allow_empty else 1, len(sigma))
    return frozenset(rng.sample(sigma, k))


def _split(rng, budget):
    left = rng.randint(1, max(budget - 1, 1))
    return left, max(budget - left, 1)


def _gen_xy(rng, budget, sigma, mc, mm) -> Formula:
    if budget <= 1:
        return Atom(_letter(rng, sigma)) if rng.random() < 0.7 else Top()
    r = rng.random()
    if r < 0.45:
        cls = rng.choice((Xa, Ya, WXa, WYa))
        return cls(_letter(rng, sigma), _gen_xy(rng, budget - 1, sigma, mc, mm))
    if r < 0.60:
        cls = rng.choice((NextPos, PrevPos, Sp, Ep))
        return cls(_gen_xy(rng, budget - 1, sigma, mc, mm))
    if r < 0.75:
        return Not(_gen_xy(rng, budget - 1, sigma, mc, mm))
    lb, rb = _split(rng, budget - 1)
    cls = rng.choice((Or, Or, And))
    return cls(_gen_xy(rng, lb, sigma, mc, mm), _gen_xy(rng, rb, sigma, mc, mm))


def _gen_ranker(rng, budget, sigma, mc, mm) -> Formula:
    out: Formula = Top()
    for depth in range(max(budget - 1, 1)):
        r = rng.random()
        if r < 0.6:
            cls = rng.choice((Xa, Ya, WXa, WYa))
            out = cls(_letter(rng, sigma), out)
        elif r < 0.85:
            out = rng.choice((NextPos, PrevPos))(out)
        else:
            out = rng.choice((Sp, Ep))(out)
    return out


def _gen_uitl(rng, budget, sigma, mc, mm) -> Formula:
    if budget <= 1:
        r = rng.random()
        if r < 0.35:
            return Atom(_letter(rng, sigma))
        if r < 0.5:
            return Pt()
        if r < 0.6:
            return Unit()
        if r < 0.8:
            return Alo(_subset(rng, sigma, allow_empty=True))
        return Top()
    r = rng.random()
    if r < 0.35:
        cls = rng.choice((ChopF, ChopL, ChopFp, ChopLm))
        lb, rb = _split(rng, budget - 1)
        return cls(_gen_uitl(rng, lb, sigma, mc, mm), _letter(rng, sigma),
                   _gen_uitl(rng, rb, sigma, mc, mm))
    if r < 0.55:
        cls = rng.choice((OPlus, OMinus, OPlusBar, OMinusBar, Sp, Ep))
        return cls(_gen_uitl(rng, budget - 1, sigma, mc, mm))
    if r < 0.7:
        return Not(_gen_uitl(rng, budget - 1, sigma, mc, mm))
    lb, rb = _split(rng, budget - 1)
    cls = rng.choice((Or, And))
    return cls(_gen_uitl(rng, lb, sigma, mc, mm), _gen_uitl(rng, rb, sigma, mc, mm))


def _gen_ltl(rng, budget, sigma, mc, mm) -> Formula:
    if budget <= 1:
        return Atom(_letter(rng, sigma)) if rng.random() < 0.8 else Top()
    r = rng.random()
    if r < 0.3:
        cls = rng.choice((Until, Since))
        lb, rb = _split(rng, budget - 1)
        return cls(_gen_ltl(rng, lb, sigma, mc, mm), _gen_ltl(rng, rb, sigma, mc, mm))
    if r < 0.55:
        cls = rng.choice((Next, Prev, Future, Past, Always, Histor))
        return cls(_gen_ltl(rng, budget - 1, sigma, mc, mm))
    if r < 0.7:
        return Not(_gen_ltl(rng, budget - 1, sigma, mc, mm))
    lb, rb = _split(rng, budget - 1)
    cls = rng.choice((Or, And))
    return cls(_gen_ltl(rng, lb, sigma, mc, mm), _gen_ltl(rng, rb, sigma, mc, mm))


def _gen_atnext(rng, budget, sigma, mc, mm) -> Formula:
    if budget <= 1:
        return Atom(_letter(rng, sigma)) if rng.random() < 0.8 else Top()
    r = rng.random()
    if r < 0.45:
        gb, ab = _split(rng, budget - 1)
        cls = rng.choice((XGuard, YGuard))
        return cls(_gen_atnext(rng, gb, sigma, mc, mm),
                   _gen_atnext(rng, ab, sigma, mc, mm))
    if r < 0.55:
        cls = rng.choice((Sp, Ep))
        return cls(_gen_atnext(rng, budget - 1, sigma, mc, mm))
    if r < 0.7:
        return Not(_gen_atnext(rng, budget - 1, sigma, mc, mm))
    lb, rb = _split(rng, budget - 1)
    cls = rng.choice((Or, And))
    return cls(_gen_atnext(rng, lb, sigma, mc, mm), _gen_atnext(rng, rb, sigma, mc, mm))


def _gen_tlplus_guard(rng, budget, sigma) -> Formula:
    if budget <= 1:
        return Atom(_letter(rng, sigma)) if rng.random() < 0.8 else Top()
    r = rng.random()
    if r < 0.3:
        return Not(_gen_tlplus_guard(rng, budget - 1, sigma))
    if r < 0.55:
        lb, rb = _split(rng, budget - 1)
        return And(_gen_tlplus_guard(rng, lb, sigma),
                   _gen_tlplus_guard(rng, rb, sigma))
    return _gen_qchain(rng, budget, sigma)


def _gen_qchain(rng, budget, sigma) -> Formula:
    if budget <= 1:
        return Top()
    r = rng.random()
    if r < 0.15:
        return rng.choice((Sp, Ep))(_gen_qchain(rng, budget - 1, sigma))
    gb, bb = _split(rng, budget - 1)
    guard = _gen_tlplus_guard(rng, gb, sigma)
    if rng.random() < 0.25:
        inner = rng.choice((XGuard, YGuard))(
            _gen_tlplus_guard(rng, max(bb - 1, 1), sigma), Top())
        body: Formula = Not(inner)
    else:
        body = _gen_qchain(rng, bb, sigma)
    return rng.choice((XGuard, YGuard))(guard, body)


def _gen_tlplus_ranker(rng, budget, sigma, mc=None, mm=None) -> Formula:
    out: Formula = Top()
    steps = rng.randint(1, max(budget // 2, 1))
    for _ in range(steps):
        r = rng.random()
        if r < 0.2:
            out = rng.choice((Sp, Ep))(out)
        else:
            guard = _gen_tlplus_guard(rng, max(budget // (steps + 1), 1), sigma)
            out = rng.choice((XGuard, YGuard))(guard, out)
    return out


def _gen_tlplus(rng, budget, sigma, mc, mm) -> Formula:
    if budget <= 1:
        return Atom(_letter(rng, sigma))
    r = rng.random()
    if r < 0.25:
        return Not(_gen_tlplus(rng, budget - 1, sigma, mc, mm))
    if r < 0.5:
        lb, rb = _split(rng, budget - 1)
        cls = rng.choice((Or, And))
        return cls(_gen_tlplus(rng, lb, sigma, mc, mm),
                   _gen_tlplus(rng, rb, sigma, mc, mm))
    return _gen_tlplus_ranker(rng, budget, sigma)


def _gen_guard(rng, budget, sigma, mc, mm, kinds) -> Guard:
    if budget <= 1 or rng.random() < 0.6:
        kind = rng.choice(kinds)
        if kind == "simple":
            return Simple(_subset(rng, sigma, allow_empty=True))
        if kind == "threshold":
            shape = rng.random()
            b = _subset(rng, sigma)
            if shape < 0.3:
                c = rng.randint(0, mc)
                return Threshold(b, c, c + 1)
            if shape < 0.6:
                return Threshold(b, 0, rng.randint(1, mc))
            if shape < 0.8:
                return Threshold(b, rng.randint(1, mc), None)
            lo = rng.randint(0, mc - 1)
            return Threshold(b, lo, rng.randint(lo + 1, mc + 1))
        q = rng.randint(2, mm)
        nterms = rng.randint(1, 2)
        terms = tuple((rng.choice((1, 1, 2, -1)), _subset(rng, sigma))
                      for _ in range(nterms))
        k = rng.randint(1, q - 1)
        residues = frozenset(rng.sample(range(q), k))
        return Modulo(terms, residues, q)
    r = rng.random()
    if r < 0.35:
        return GNot(_gen_guard(rng, budget - 1, sigma, mc, mm, kinds))
    lb, rb = _split(rng, budget - 1)
    cls = GAnd if r < 0.7 else GOr
    return cls(_gen_guard(rng, lb, sigma, mc, mm, kinds),
               _gen_guard(rng, rb, sigma, mc, mm, kinds))


def _counting_gen(kinds, boolean_guards):
    def gen(rng, budget, sigma, mc, mm) -> Formula:
        if budget <= 1:
            return Atom(_letter(rng, sigma))
        r = rng.random()
        if r < 0.4:
            gb = max(rng.randint(1, max(budget // 2, 1)), 1)
            guard = _gen_guard(rng, gb if boolean_guards else 1,
                               sigma, mc, mm, kinds)
            cls = GUntil if rng.random() < 0.6 else GSince
            return cls(guard, gen(rng, budget - gb, sigma, mc, mm))
        if r < 0.5:
            cls = rng.choice((Future, Next, Prev, Past))
            return cls(gen(rng, budget - 1, sigma, mc, mm))
        if r < 0.55:
            return BUntil(_subset(rng, sigma, allow_empty=True),
                          gen(rng, budget - 1, sigma, mc, mm))
        if r < 0.75:
            return Not(gen(rng, budget - 1, sigma, mc, mm))
        lb, rb = _split(rng, budget - 1)
        cls = rng.choice((Or, And))
        return cls(gen(rng, lb, sigma, mc, mm), gen(rng, rb, sigma, mc, mm))

    return gen


_GENERATORS = {
    "xy": _gen_xy,
    "ranker": _gen_ranker,
    "uitl": _gen_uitl,
    "ltl": _gen_ltl,
    "atnext": _gen_atnext,
    "tlplus": _gen_tlplus,
    "tlplus_ranker": _gen_tlplus_ranker,
    "invtl": _counting_gen(("simple",), boolean_guards=False),
    "binvtl": _counting_gen(("simple",), boolean_guards=True),
    "bthtl": _counting_gen(("simple", "threshold"), boolean_guards=True),
    "invmodtl": _counting_gen(("simple", "modulo"), boolean_guards=False),
    "blintl": _counting_gen(("simple", "threshold", "modulo"), boolean_guards=True),
}
