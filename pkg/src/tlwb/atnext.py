"""Translations around the guarded-jump logic: to and from LTL, the
TL+ sub-grammar and its unary translation, convexity checking, and the
stair-language fixtures."""

from __future__ import annotations

from .evaluate import eval_atnext
from .formulas import (
    And, Atom, Ep, Formula, Future, Implies, Next, Not, Or, Past, Prev,
    Since, Sp, Top, Until, Word, XGuard, YGuard, desugar,
)


class NotTlPlusError(Exception):
    pass


# ---------------------------------------------------------------------------
# LTL <-> guarded jumps
# ---------------------------------------------------------------------------

def ltl_to_atnext(phi: Formula) -> Formula:
    """The guard translation: an until becomes a jump to the first position
    falsifying its invariant or witnessing its target."""
    phi = desugar(phi)
    return _alpha(phi)


def _alpha(phi: Formula) -> Formula:
    if isinstance(phi, (Atom, Top)):
        return phi
    if isinstance(phi, Not):
        return Not(_alpha(phi.arg))
    if isinstance(phi, Or):
        return Or(_alpha(phi.left), _alpha(phi.right))
    if isinstance(phi, And):
        return And(_alpha(phi.left), _alpha(phi.right))
    if isinstance(phi, Implies):
        return Implies(_alpha(phi.left), _alpha(phi.right))
    if isinstance(phi, Until):
        guard = Or(Not(_alpha(phi.left)), _alpha(phi.right))
        return XGuard(guard, _alpha(phi.right))
    if isinstance(phi, Since):
        guard = Or(Not(_alpha(phi.left)), _alpha(phi.right))
        return YGuard(guard, _alpha(phi.right))
    raise TypeError(f"desugared LTL expected, got {phi!r}")


def atnext_to_ltl(phi: Formula) -> Formula:
    """The inverse translation: a guarded jump becomes an until whose
    invariant is the negated guard."""
    if isinstance(phi, (Atom, Top)):
        return phi
    if isinstance(phi, Not):
        return Not(atnext_to_ltl(phi.arg))
    if isinstance(phi, Or):
        return Or(atnext_to_ltl(phi.left), atnext_to_ltl(phi.right))
    if isinstance(phi, And):
        return And(atnext_to_ltl(phi.left), atnext_to_ltl(phi.right))
    if isinstance(phi, Implies):
        return Implies(atnext_to_ltl(phi.left), atnext_to_ltl(phi.right))
    if isinstance(phi, XGuard):
        g = atnext_to_ltl(phi.guard)
        return Until(Not(g), And(g, atnext_to_ltl(phi.arg)))
    if isinstance(phi, YGuard):
        g = atnext_to_ltl(phi.guard)
        return Since(Not(g), And(g, atnext_to_ltl(phi.arg)))
    if isinstance(phi, Sp):
        # evaluate the body at position 1
        body = atnext_to_ltl(phi.arg)
        return Past(And(Not(Prev(Top())), body))
    if isinstance(phi, Ep):
        body = atnext_to_ltl(phi.arg)
        target = And(Not(Next(Top())), body)
        return Or(target, Future(target))
    raise TypeError(f"not a guarded-jump formula: {phi!r}")


# ---------------------------------------------------------------------------
# the TL+ sub-grammar
# ---------------------------------------------------------------------------

def is_recursive_ranker(phi: Formula) -> bool:
    """Jump chains ending in TOP whose guards obey the guard grammar."""
    if isinstance(phi, Top):
        return True
    if isinstance(phi, (Sp, Ep)):
        return is_recursive_ranker(phi.arg)
    if isinstance(phi, (XGuard, YGuard)):
        return _is_guard(phi.guard) and is_recursive_ranker(phi.arg)
    return False


def _is_guard(z: Formula) -> bool:
    # negation-and-conjunction combinations of letters and jump chains;
    # disjunctions of bare guards are rejected
    if isinstance(z, (Atom, Top)):
        return True
    if isinstance(z, Not):
        return _is_guard(z.arg)
    if isinstance(z, And):
        return _is_guard(z.left) and _is_guard(z.right)
    if isinstance(z, (XGuard, YGuard, Sp, Ep)):
        return _is_qchain(z)
    return False


def _is_qchain(z: Formula) -> bool:
    if isinstance(z, Top):
        return True
    if isinstance(z, (Sp, Ep)):
        return _is_qchain(z.arg)
    if isinstance(z, (XGuard, YGuard)):
        return _is_guard(z.guard) and _is_qbody(z.arg)
    return False


def _is_qbody(z: Formula) -> bool:
    if _is_qchain(z):
        return True
    # a negated single jump keeps the satisfaction set one-sided
    return (isinstance(z, Not)
            and isinstance(z.arg, (XGuard, YGuard))
            and _is_guard(z.arg.guard)
            and isinstance(z.arg.arg, Top))


def is_tlplus(phi: Formula) -> bool:
    """Boolean combinations of letters and recursive rankers."""
    if isinstance(phi, Atom):
        return True
    if isinstance(phi, Not):
        return is_tlplus(phi.arg)
    if isinstance(phi, (Or, And, Implies)):
        return is_tlplus(phi.left) and is_tlplus(phi.right)
    return is_recursive_ranker(phi)


def convexity_check(word: Word, phi: Formula):
    """None when the satisfaction set is contiguous, else the first gap
    (i, k, j) with the formula true at i and j but not at k."""
    if not is_recursive_ranker(phi):
        raise NotTlPlusError("convexity is stated for recursive rankers")
    sat = [i for i in range(1, len(word) + 1) if eval_atnext(word, i, phi)]
    if not sat:
        return None
    lo, hi = sat[0], sat[-1]
    holes = [k for k in range(lo + 1, hi) if k not in set(sat)]
    if not holes:
        return None
    k = holes[0]
    j = next(p for p in sat if p > k)
    return (lo, k, j)


# ---------------------------------------------------------------------------
# TL+ into the unary future/past fragment
# ---------------------------------------------------------------------------

def _strict_past(phi: Formula) -> Formula:
    # the reflexive past operator shifted one step back
    return Prev(Past(phi))


def tlplus_to_fp(phi: Formula) -> Formula:
    """Pointwise-equivalent unary formula for a TL+ formula.

    The future direction uses the strict F; the past direction composes the
    reflexive P with a single backward step to regain strictness.
    """
    if not is_tlplus(phi):
        raise NotTlPlusError("the formula is outside the TL+ grammar")
    return _at(phi)


def _at(phi: Formula) -> Formula:
    if isinstance(phi, (Atom, Top)):
        return phi
    if isinstance(phi, Not):
        return Not(_at(phi.arg))
    if isinstance(phi, (Or, And, Implies)):
        return type(phi)(_at(phi.left), _at(phi.right))
    if isinstance(phi, Sp):
        body = _at(phi.arg)
        return Past(And(Not(_strict_past(Top())), body))
    if isinstance(phi, Ep):
        body = _at(phi.arg)
        target = And(Not(Future(Top())), body)
        return Or(target, Future(target))
    if isinstance(phi, XGuard):
        t, b = _at(phi.guard), _at(phi.arg)
        return And(Future(And(t, b)),
                   Not(Future(And(t, And(Not(b), Future(b))))))
    if isinstance(phi, YGuard):
        t, b = _at(phi.guard), _at(phi.arg)
        return And(_strict_past(And(t, b)),
                   Not(_strict_past(And(t, And(Not(b), _strict_past(b))))))
    raise TypeError(f"not a TL+ node: {phi!r}")


# ---------------------------------------------------------------------------
# stair languages
# ---------------------------------------------------------------------------

def stair_formula(k: int) -> Formula:
    """Guarded-jump formula for k `a`-occurrences separated by pure-`c` gaps.

    The jump guard catches a and b, so a landing on `a` certifies a b-free
    (hence all-c) gap; the top-level disjunct covers patterns starting at
    position 1.  Recursion depth is exactly 2.
    """
    if k < 2:
        raise ValueError("stair languages are indexed from 2")
    jump_guard = Or(Atom("a"), Atom("b"))
    body: Formula = Atom("a")
    for _ in range(k - 1):
        body = And(Atom("a"), XGuard(jump_guard, body))
    start_here = body
    return Or(start_here, XGuard(start_here, Top()))


def stair_language(word: Word, k: int) -> bool:
    """Direct pattern scan for k a's with only c's between consecutive ones."""
    if k < 2:
        raise ValueError("stair languages are indexed from 2")
    n = len(word)
    for s in range(1, n + 1):
        if word[s - 1] != "a":
            continue
        cur = s
        ok = True
        for _ in range(k - 1):
            j = cur + 1
            while j <= n and word[j - 1] == "c":
                j += 1
            if j <= n and word[j - 1] == "a":
                cur = j
            else:
                ok = False
                break
        if ok:
            return True
    return False
