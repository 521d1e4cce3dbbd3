"""Interval-logic compilation: ranker directionality formulas, ranker
composition, the interval rankers of every subterm, and the quadratic
translation into the letter-jump logic."""

from __future__ import annotations

from .formulas import (
    Alo, And, Atom, ChopF, ChopFp, ChopL, ChopLm, Ep, Formula, Implies,
    NextPos, Not, OMinus, OMinusBar, OPlus, OPlusBar, Or, Path, PrevPos, Pt,
    Sp, Top, Unit, WXa, WYa, Xa, Ya, desugar, letters as formula_letters,
    normalize_alphabet, subterms,
)
from .rankers import is_ranker

ATFIRST = Not(PrevPos(Top()))
ATLAST = Not(NextPos(Top()))


def _habar(a: str) -> Formula:
    return Not(Ya(a, Top()))


def _gabar(a: str) -> Formula:
    return Not(Xa(a, Top()))


def compose(ranker: Formula, phi: Formula) -> Formula:
    """Substitute `phi` for the terminal TOP of a ranker chain."""
    if isinstance(ranker, Top):
        return phi
    if isinstance(ranker, (Xa, Ya, WXa, WYa)):
        return type(ranker)(ranker.letter, compose(ranker.arg, phi))
    if isinstance(ranker, (NextPos, PrevPos, Sp, Ep)):
        return type(ranker)(compose(ranker.arg, phi))
    raise TypeError(f"not a ranker: {ranker!r}")


def _unzip(ranker: Formula) -> list[Formula]:
    ops = []
    while not isinstance(ranker, Top):
        ops.append(ranker)
        ranker = ranker.arg
    return ops


def _zip(ops: list[Formula]) -> Formula:
    out: Formula = Top()
    for op in reversed(ops):
        if isinstance(op, (Xa, Ya, WXa, WYa)):
            out = type(op)(op.letter, out)
        else:
            out = type(op)(out)
    return out


def directionality(ranker: Formula, rel: str) -> Formula:
    """Formula true exactly at positions standing in `rel` to the ranker's
    landing position (when that position is defined); rel is one of
    '<', '<=', '>', '>='.  Size stays linear in the ranker."""
    if rel not in ("<", "<=", ">", ">="):
        raise ValueError(f"unknown relation {rel!r}")
    if not is_ranker(ranker):
        raise TypeError(f"not a ranker: {ranker!r}")
    ops = _unzip(ranker)
    return _dir(ops, rel)


def _dir(ops: list[Formula], rel: str) -> Formula:
    if not ops or isinstance(ops[-1], Sp):
        # the scan ends at position 1 (the empty ranker also starts there)
        return {"<": Not(Top()), "<=": ATFIRST,
                ">": Not(ATFIRST), ">=": Top()}[rel]
    last = ops[-1]
    prefix = ops[:-1]
    if isinstance(last, Ep):
        return {"<": Not(ATLAST), "<=": Top(),
                ">": Not(Top()), ">=": ATLAST}[rel]
    if isinstance(last, WXa):
        a = last.letter
        if rel == "<":
            return Xa(a, _dir(ops, "<="))
        if rel == "<=":
            return Or(_habar(a), Ya(a, _dir(prefix, "<")))
        if rel == ">":
            return Ya(a, _dir(prefix, ">="))
        return Or(_gabar(a), Xa(a, _dir(ops, ">")))
    if isinstance(last, Xa):
        a = last.letter
        if rel == "<":
            return Xa(a, _dir(ops, "<="))
        if rel == "<=":
            return Or(_habar(a), Ya(a, _dir(prefix, "<=")))
        if rel == ">":
            return Ya(a, _dir(prefix, ">"))
        return Or(_gabar(a), Xa(a, _dir(ops, ">")))
    if isinstance(last, WYa):
        a = last.letter
        if rel == "<":
            return Xa(a, _dir(prefix, "<="))
        if rel == "<=":
            return Or(_habar(a), Ya(a, _dir(ops, "<")))
        if rel == ">":
            return Ya(a, _dir(ops, ">="))
        return Or(_gabar(a), Xa(a, _dir(prefix, ">")))
    if isinstance(last, Ya):
        a = last.letter
        if rel == "<":
            return Xa(a, _dir(prefix, "<"))
        if rel == "<=":
            return Or(_habar(a), Ya(a, _dir(ops, "<")))
        if rel == ">":
            return Ya(a, _dir(ops, ">="))
        return Or(_gabar(a), Xa(a, _dir(prefix, ">=")))
    if isinstance(last, NextPos):
        if rel == "<":
            return _dir(prefix, "<=")
        if rel == "<=":
            return Or(ATFIRST, PrevPos(_dir(prefix, "<=")))
        if rel == ">":
            return PrevPos(_dir(prefix, ">"))
        return _dir(prefix, ">")
    if isinstance(last, PrevPos):
        if rel == "<":
            return NextPos(_dir(prefix, "<"))
        if rel == "<=":
            return _dir(prefix, "<")
        if rel == ">":
            return _dir(prefix, ">=")
        return Or(ATLAST, NextPos(_dir(prefix, ">=")))
    raise TypeError(f"not a ranker operator: {last!r}")


# ---------------------------------------------------------------------------
# interval rankers
# ---------------------------------------------------------------------------

_BOOLS = (Not, Or, And, Implies)


def interval_rankers(phi: Formula) -> dict[Path, tuple[Formula, Formula]]:
    """Left and right interval rankers for every subterm occurrence."""
    out: dict[Path, tuple[Formula, Formula]] = {}

    def go(node: Formula, path: Path, l: Formula, r: Formula) -> None:
        out[path] = (l, r)
        if isinstance(node, _BOOLS):
            kids = (node.arg,) if isinstance(node, Not) else (node.left, node.right)
            for idx, c in enumerate(kids):
                go(c, path + ((node, idx),), l, r)
            return
        if isinstance(node, Sp):
            go(node.arg, path + ((node, 0),), l, l)
            return
        if isinstance(node, Ep):
            go(node.arg, path + ((node, 0),), r, r)
            return
        if isinstance(node, ChopF):
            cpos = compose(l, WXa(node.letter, Top()))
            go(node.left, path + ((node, 0),), l, cpos)
            go(node.right, path + ((node, 1),), cpos, r)
            return
        if isinstance(node, ChopFp):
            cpos = compose(r, WXa(node.letter, Top()))
            go(node.left, path + ((node, 0),), l, cpos)
            go(node.right, path + ((node, 1),), r, cpos)
            return
        if isinstance(node, ChopL):
            cpos = compose(r, WYa(node.letter, Top()))
            go(node.left, path + ((node, 0),), l, cpos)
            go(node.right, path + ((node, 1),), cpos, r)
            return
        if isinstance(node, ChopLm):
            cpos = compose(l, WYa(node.letter, Top()))
            go(node.left, path + ((node, 0),), cpos, l)
            go(node.right, path + ((node, 1),), cpos, r)
            return
        if isinstance(node, OPlus):
            go(node.arg, path + ((node, 0),), compose(l, NextPos(Top())), r)
            return
        if isinstance(node, OPlusBar):
            go(node.arg, path + ((node, 0),), l, compose(r, NextPos(Top())))
            return
        if isinstance(node, OMinus):
            go(node.arg, path + ((node, 0),), l, compose(r, PrevPos(Top())))
            return
        if isinstance(node, OMinusBar):
            go(node.arg, path + ((node, 0),), compose(l, PrevPos(Top())), r)
            return
        # leaves: Top, Atom, Pt, Unit, Alo
        return

    go(phi, (), Sp(Top()), Ep(Top()))
    return out


# ---------------------------------------------------------------------------
# the translation
# ---------------------------------------------------------------------------

def trans_uitl(phi: Formula, alphabet: str | None = None) -> Formula:
    """Language-equivalent letter-jump formula; size O(|phi|^2).

    The interior-letters atom expands against `alphabet` (default: the
    letters occurring in the formula), so pass the ambient alphabet when
    the complement matters.
    """
    if alphabet is None:
        alphabet = normalize_alphabet(formula_letters(phi) or {"a"})
    phi = desugar(phi, alphabet)
    rankers = interval_rankers(phi)

    def at_point(path: Path, body: Formula) -> Formula:
        return compose(rankers[path][0], body)

    def point_interval(path: Path) -> Formula:
        l, r = rankers[path]
        return And(compose(l, directionality(r, ">=")),
                   compose(l, directionality(r, "<=")))

    def go(node: Formula, path: Path) -> Formula:
        l, r = rankers[path]
        if isinstance(node, Top):
            return Top()
        if isinstance(node, Atom):
            return And(compose(l, Atom(node.letter)), point_interval(path))
        if isinstance(node, Pt):
            return point_interval(path)
        if isinstance(node, Unit):
            return compose(l, NextPos(And(directionality(r, "<="),
                                          directionality(r, ">="))))
        if isinstance(node, Alo):
            raise AssertionError("interior-letters atoms are desugared first")
        if isinstance(node, Not):
            return Not(go(node.arg, path + ((node, 0),)))
        if isinstance(node, (Or, And, Implies)):
            return type(node)(go(node.left, path + ((node, 0),)),
                              go(node.right, path + ((node, 1),)))
        if isinstance(node, (Sp, Ep)):
            child = path + ((node, 0),)
            return compose(rankers[child][0], go(node.arg, child))
        if isinstance(node, ChopF):
            guard = compose(compose(l, WXa(node.letter, Top())),
                            directionality(r, "<="))
            return And(guard, And(go(node.left, path + ((node, 0),)),
                                  go(node.right, path + ((node, 1),))))
        if isinstance(node, ChopL):
            guard = compose(compose(r, WYa(node.letter, Top())),
                            directionality(l, ">="))
            return And(guard, And(go(node.left, path + ((node, 0),)),
                                  go(node.right, path + ((node, 1),))))
        if isinstance(node, ChopFp):
            guard = compose(compose(l, WXa(node.letter, Top())),
                            directionality(r, ">="))
            return And(guard, And(go(node.left, path + ((node, 0),)),
                                  go(node.right, path + ((node, 1),))))
        if isinstance(node, ChopLm):
            guard = compose(compose(r, WYa(node.letter, Top())),
                            directionality(l, "<="))
            return And(guard, And(go(node.left, path + ((node, 0),)),
                                  go(node.right, path + ((node, 1),))))
        if isinstance(node, OPlus):
            guard = compose(compose(l, NextPos(Top())), directionality(r, "<="))
            return And(guard, go(node.arg, path + ((node, 0),)))
        if isinstance(node, OMinus):
            guard = compose(compose(r, PrevPos(Top())), directionality(l, ">="))
            return And(guard, go(node.arg, path + ((node, 0),)))
        if isinstance(node, OPlusBar):
            return And(compose(r, NextPos(Top())), go(node.arg, path + ((node, 0),)))
        if isinstance(node, OMinusBar):
            return And(compose(l, PrevPos(Top())), go(node.arg, path + ((node, 0),)))
        raise TypeError(f"not an interval-logic node: {node!r}")

    return go(phi, ())
