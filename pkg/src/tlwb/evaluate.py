"""Direct denotational semantics for every fragment.

Two independent implementations live here: the naive recursive evaluators
(`eval_xy`, `eval_ltl`, `eval_uitl`, `eval_atnext`, `eval_blintl`,
`eval_guard`) transcribe the satisfaction clauses one to one, and the
set-based evaluators (`sat_positions`, `sat_intervals`) compute satisfaction
sets bottom-up.  The two families cross-check each other and the set-based
one backs the exhaustive oracle.
"""

from __future__ import annotations

from .formulas import (
    Alo, Always, And, Atom, BSince, BUntil, ChopF, ChopFp, ChopL, ChopLm, Ep, Formula,
    Future, GAnd, GNot, GOr, GSince, GUntil, Guard, Histor, Implies, Interval,
    Modulo, Next, NextPos, Not, NowG, OMinus, OMinusBar, OPlus, OPlusBar, Or,
    Past, Position, Prev, PrevPos, Pt, Simple, Since, Sp, Threshold, Top,
    Unit, Until, Word, WXa, WYa, XGuard, Xa, YGuard, Ya, children, letter_at,
)


# ---------------------------------------------------------------------------
# counting helpers
# ---------------------------------------------------------------------------

def count_letters(word: Word, letters: frozenset[str], lo: int, hi: int) -> int:
    """Occurrences of letters from the set in positions lo..hi inclusive (0 if hi < lo)."""
    if hi < lo:
        return 0
    return sum(1 for k in range(max(lo, 1), min(hi, len(word)) + 1)
               if word[k - 1] in letters)


def guard_value(g: Guard, count) -> bool:
    """Evaluate a guard given a counting function over letter sets."""
    if isinstance(g, Simple):
        return count(g.letters) == 0
    if isinstance(g, Threshold):
        v = count(g.letters)
        return g.lo <= v and (g.hi is None or v < g.hi)
    if isinstance(g, Modulo):
        total = sum(c * count(b) for c, b in g.terms)
        return total % g.modulus in g.residues
    if isinstance(g, GNot):
        return not guard_value(g.arg, count)
    if isinstance(g, GAnd):
        return guard_value(g.left, count) and guard_value(g.right, count)
    if isinstance(g, GOr):
        return guard_value(g.left, count) or guard_value(g.right, count)
    raise TypeError(f"unknown guard {g!r}")


def eval_guard(word: Word, interval: Interval, g: Guard) -> bool:
    """Guard truth over the open interior of [x, y]."""
    x, y = interval
    return guard_value(g, lambda b: count_letters(word, b, x + 1, y - 1))


def eval_now(word: Word, i: Position, g: Guard) -> bool:
    """Global counter test: guard predicate over the inclusive prefix 1..i."""
    return guard_value(g, lambda b: count_letters(word, b, 1, i))


# ---------------------------------------------------------------------------
# naive recursive evaluators
# ---------------------------------------------------------------------------

def _bool_case(word, i, phi, rec):
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Atom):
        return letter_at(word, i) == phi.letter
    if isinstance(phi, Not):
        return not rec(word, i, phi.arg)
    if isinstance(phi, Or):
        return rec(word, i, phi.left) or rec(word, i, phi.right)
    if isinstance(phi, And):
        return rec(word, i, phi.left) and rec(word, i, phi.right)
    if isinstance(phi, Implies):
        return (not rec(word, i, phi.left)) or rec(word, i, phi.right)
    return None


def eval_ltl(word: Word, i: Position, phi: Formula) -> bool:
    b = _bool_case(word, i, phi, eval_ltl)
    if b is not None:
        return b
    n = len(word)
    if isinstance(phi, Next):
        return i + 1 <= n and eval_ltl(word, i + 1, phi.arg)
    if isinstance(phi, Prev):
        return i - 1 >= 1 and eval_ltl(word, i - 1, phi.arg)
    if isinstance(phi, Future):
        return any(eval_ltl(word, m, phi.arg) for m in range(i + 1, n + 1))
    if isinstance(phi, Past):
        return any(eval_ltl(word, m, phi.arg) for m in range(1, i + 1))
    if isinstance(phi, Always):
        return all(eval_ltl(word, m, phi.arg) for m in range(i + 1, n + 1))
    if isinstance(phi, Histor):
        return all(eval_ltl(word, m, phi.arg) for m in range(1, i + 1))
    if isinstance(phi, Until):
        return any(eval_ltl(word, m, phi.right)
                   and all(eval_ltl(word, l, phi.left) for l in range(i + 1, m))
                   for m in range(i + 1, n + 1))
    if isinstance(phi, Since):
        return any(eval_ltl(word, m, phi.right)
                   and all(eval_ltl(word, l, phi.left) for l in range(m + 1, i))
                   for m in range(1, i))
    raise TypeError(f"not an LTL operator: {phi!r}")


def eval_xy(word: Word, i: Position, phi: Formula) -> bool:
    b = _bool_case(word, i, phi, eval_xy)
    if b is not None:
        return b
    n = len(word)
    if isinstance(phi, Xa):
        for j in range(i + 1, n + 1):
            if letter_at(word, j) == phi.letter:
                return eval_xy(word, j, phi.arg)
        return False
    if isinstance(phi, Ya):
        for j in range(i - 1, 0, -1):
            if letter_at(word, j) == phi.letter:
                return eval_xy(word, j, phi.arg)
        return False
    if isinstance(phi, WXa):
        for j in range(i, n + 1):
            if letter_at(word, j) == phi.letter:
                return eval_xy(word, j, phi.arg)
        return False
    if isinstance(phi, WYa):
        for j in range(i, 0, -1):
            if letter_at(word, j) == phi.letter:
                return eval_xy(word, j, phi.arg)
        return False
    if isinstance(phi, NextPos):
        return i + 1 <= n and eval_xy(word, i + 1, phi.arg)
    if isinstance(phi, PrevPos):
        return i - 1 >= 1 and eval_xy(word, i - 1, phi.arg)
    if isinstance(phi, Sp):
        return eval_xy(word, 1, phi.arg)
    if isinstance(phi, Ep):
        return eval_xy(word, n, phi.arg)
    raise TypeError(f"not a TL[X_a,Y_a] operator: {phi!r}")


def eval_uitl(word: Word, interval: Interval, phi: Formula) -> bool:
    i, j = interval
    n = len(word)
    if not (1 <= i <= j <= n):
        raise ValueError(f"interval {interval} outside the word domain")
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Atom):
        return i == j and letter_at(word, i) == phi.letter
    if isinstance(phi, Pt):
        return i == j
    if isinstance(phi, Unit):
        return j == i + 1
    if isinstance(phi, Alo):
        return all(letter_at(word, k) in phi.letters for k in range(i + 1, j))
    if isinstance(phi, Not):
        return not eval_uitl(word, interval, phi.arg)
    if isinstance(phi, Or):
        return eval_uitl(word, interval, phi.left) or eval_uitl(word, interval, phi.right)
    if isinstance(phi, And):
        return eval_uitl(word, interval, phi.left) and eval_uitl(word, interval, phi.right)
    if isinstance(phi, Implies):
        return (not eval_uitl(word, interval, phi.left)) or eval_uitl(word, interval, phi.right)
    if isinstance(phi, Sp):
        return eval_uitl(word, (i, i), phi.arg)
    if isinstance(phi, Ep):
        return eval_uitl(word, (j, j), phi.arg)
    if isinstance(phi, ChopF):
        a = phi.letter
        for k in range(i, j + 1):
            if letter_at(word, k) == a:
                return (eval_uitl(word, (i, k), phi.left)
                        and eval_uitl(word, (k, j), phi.right))
        return False
    if isinstance(phi, ChopL):
        a = phi.letter
        for k in range(j, i - 1, -1):
            if letter_at(word, k) == a:
                return (eval_uitl(word, (i, k), phi.left)
                        and eval_uitl(word, (k, j), phi.right))
        return False
    if isinstance(phi, ChopFp):
        a = phi.letter
        for k in range(i, n + 1):
            if letter_at(word, k) == a:
                return (k >= j
                        and eval_uitl(word, (i, k), phi.left)
                        and eval_uitl(word, (j, k), phi.right))
        return False
    if isinstance(phi, ChopLm):
        a = phi.letter
        for k in range(j, 0, -1):
            if letter_at(word, k) == a:
                return (k <= i
                        and eval_uitl(word, (k, i), phi.left)
                        and eval_uitl(word, (k, j), phi.right))
        return False
    if isinstance(phi, OPlus):
        return i < j and eval_uitl(word, (i + 1, j), phi.arg)
    if isinstance(phi, OMinus):
        return i < j and eval_uitl(word, (i, j - 1), phi.arg)
    if isinstance(phi, OPlusBar):
        return j < n and eval_uitl(word, (i, j + 1), phi.arg)
    if isinstance(phi, OMinusBar):
        return i > 1 and eval_uitl(word, (i - 1, j), phi.arg)
    raise TypeError(f"not an interval-logic operator: {phi!r}")


def eval_atnext(word: Word, i: Position, phi: Formula) -> bool:
    b = _bool_case(word, i, phi, eval_atnext)
    if b is not None:
        return b
    n = len(word)
    if isinstance(phi, XGuard):
        for j in range(i + 1, n + 1):
            if eval_atnext(word, j, phi.guard):
                return eval_atnext(word, j, phi.arg)
        return False
    if isinstance(phi, YGuard):
        for j in range(i - 1, 0, -1):
            if eval_atnext(word, j, phi.guard):
                return eval_atnext(word, j, phi.arg)
        return False
    if isinstance(phi, Sp):
        return eval_atnext(word, 1, phi.arg)
    if isinstance(phi, Ep):
        return eval_atnext(word, n, phi.arg)
    raise TypeError(f"not an at-next operator: {phi!r}")


def eval_blintl(word: Word, i: Position, phi: Formula) -> bool:
    b = _bool_case(word, i, phi, eval_blintl)
    if b is not None:
        return b
    n = len(word)
    if isinstance(phi, GUntil):
        return any(eval_guard(word, (i, j), phi.guard)
                   and eval_blintl(word, j, phi.arg)
                   for j in range(i + 1, n + 1))
    if isinstance(phi, GSince):
        return any(eval_guard(word, (j, i), phi.guard)
                   and eval_blintl(word, j, phi.arg)
                   for j in range(1, i))
    if isinstance(phi, NowG):
        return eval_now(word, i, phi.guard)
    if isinstance(phi, BUntil):
        return any(all(letter_at(word, k) in phi.letters for k in range(i + 1, j))
                   and eval_blintl(word, j, phi.arg)
                   for j in range(i + 1, n + 1))
    if isinstance(phi, BSince):
        return any(all(letter_at(word, k) in phi.letters for k in range(j + 1, i))
                   and eval_blintl(word, j, phi.arg)
                   for j in range(1, i))
    if isinstance(phi, Until):
        return any(eval_blintl(word, m, phi.right)
                   and all(eval_blintl(word, l, phi.left) for l in range(i + 1, m))
                   for m in range(i + 1, n + 1))
    if isinstance(phi, Since):
        return any(eval_blintl(word, m, phi.right)
                   and all(eval_blintl(word, l, phi.left) for l in range(m + 1, i))
                   for m in range(1, i))
    if isinstance(phi, Next):
        return i + 1 <= n and eval_blintl(word, i + 1, phi.arg)
    if isinstance(phi, Prev):
        return i - 1 >= 1 and eval_blintl(word, i - 1, phi.arg)
    if isinstance(phi, Future):
        return any(eval_blintl(word, m, phi.arg) for m in range(i + 1, n + 1))
    if isinstance(phi, Past):
        return any(eval_blintl(word, m, phi.arg) for m in range(1, i + 1))
    if isinstance(phi, Always):
        return all(eval_blintl(word, m, phi.arg) for m in range(i + 1, n + 1))
    if isinstance(phi, Histor):
        return all(eval_blintl(word, m, phi.arg) for m in range(1, i + 1))
    raise TypeError(f"not a counting-logic operator: {phi!r}")


_POINT_EVAL = {
    "xy": eval_xy,
    "ltl": eval_ltl,
    "atnext": eval_atnext,
    "blintl": eval_blintl,
    "invtl": eval_blintl,
    "binvtl": eval_blintl,
    "bthtl": eval_blintl,
    "invmodtl": eval_blintl,
}


def eval_formula(word: Word, phi: Formula, logic: str, point) -> bool:
    """Evaluate at a position (point logics) or an interval pair (uitl)."""
    if logic == "uitl":
        return eval_uitl(word, point, phi)
    return _POINT_EVAL[logic](word, point, phi)


# ---------------------------------------------------------------------------
# set-based evaluators (independent bottom-up computation)
# ---------------------------------------------------------------------------

def _prefix_counts(word: Word) -> dict[str, list[int]]:
    pref: dict[str, list[int]] = {}
    for a in set(word):
        row = [0] * (len(word) + 1)
        for i, c in enumerate(word, start=1):
            row[i] = row[i - 1] + (1 if c == a else 0)
        pref[a] = row
    return pref


class _Counter:
    """O(1) interval counts per letter set, from prefix sums."""

    def __init__(self, word: Word):
        self.n = len(word)
        self.pref = _prefix_counts(word)

    def count(self, letters: frozenset[str], lo: int, hi: int) -> int:
        if hi < lo:
            return 0
        lo = max(lo, 1)
        hi = min(hi, self.n)
        if hi < lo:
            return 0
        total = 0
        for a in letters:
            row = self.pref.get(a)
            if row is not None:
                total += row[hi] - row[lo - 1]
        return total


def sat_positions(word: Word, phi: Formula, logic: str) -> frozenset[int]:
    """All positions where `phi` holds, computed bottom-up per subformula."""
    n = len(word)
    full = frozenset(range(1, n + 1))
    counter = _Counter(word)
    memo: dict[int, frozenset[int]] = {}
    keep: list[Formula] = []

    def interior_ok(letters: frozenset[str], lo: int, hi: int) -> bool:
        span = hi - lo + 1
        if span <= 0:
            return True
        return counter.count(letters, lo, hi) == span

    def go(node: Formula) -> frozenset[int]:
        got = memo.get(id(node))
        if got is not None:
            return got
        keep.append(node)
        s = _node_positions(node)
        memo[id(node)] = s
        return s

    def _node_positions(node: Formula) -> frozenset[int]:
        if isinstance(node, Top):
            return full
        if isinstance(node, Atom):
            return frozenset(i for i in full if word[i - 1] == node.letter)
        if isinstance(node, Not):
            return full - go(node.arg)
        if isinstance(node, Or):
            return go(node.left) | go(node.right)
        if isinstance(node, And):
            return go(node.left) & go(node.right)
        if isinstance(node, Implies):
            return (full - go(node.left)) | go(node.right)
        if isinstance(node, (Xa, WXa)):
            s = go(node.arg)
            strict = isinstance(node, Xa)
            out = set()
            for i in full:
                j = _next_letter(word, node.letter, i, strict)
                if j is not None and j in s:
                    out.add(i)
            return frozenset(out)
        if isinstance(node, (Ya, WYa)):
            s = go(node.arg)
            strict = isinstance(node, Ya)
            out = set()
            for i in full:
                j = _prev_letter(word, node.letter, i, strict)
                if j is not None and j in s:
                    out.add(i)
            return frozenset(out)
        if isinstance(node, (NextPos, Next)):
            s = go(node.arg)
            return frozenset(i for i in full if i + 1 in s)
        if isinstance(node, (PrevPos, Prev)):
            s = go(node.arg)
            return frozenset(i for i in full if i - 1 in s)
        if isinstance(node, Sp):
            return full if 1 in go(node.arg) else frozenset()
        if isinstance(node, Ep):
            return full if n in go(node.arg) else frozenset()
        if isinstance(node, Future):
            s = go(node.arg)
            last = max(s, default=0)
            return frozenset(i for i in full if i < last)
        if isinstance(node, Past):
            s = go(node.arg)
            first = min(s, default=n + 1)
            return frozenset(i for i in full if i >= first)
        if isinstance(node, Always):
            bad = full - go(node.arg)
            last_bad = max(bad, default=0)
            return frozenset(i for i in full if i >= last_bad)
        if isinstance(node, Histor):
            bad = full - go(node.arg)
            first_bad = min(bad, default=n + 1)
            return frozenset(i for i in full if i < first_bad)
        if isinstance(node, Until):
            sl, sr = go(node.left), go(node.right)
            out = set()
            for i in range(n, 0, -1):
                for m in range(i + 1, n + 1):
                    if m in sr:
                        out.add(i)
                        break
                    if m not in sl:
                        break
            return frozenset(out)
        if isinstance(node, Since):
            sl, sr = go(node.left), go(node.right)
            out = set()
            for i in full:
                for m in range(i - 1, 0, -1):
                    if m in sr:
                        out.add(i)
                        break
                    if m not in sl:
                        break
            return frozenset(out)
        if isinstance(node, XGuard):
            sg, sa = go(node.guard), go(node.arg)
            out = set()
            for i in full:
                j = min((m for m in sg if m > i), default=None)
                if j is not None and j in sa:
                    out.add(i)
            return frozenset(out)
        if isinstance(node, YGuard):
            sg, sa = go(node.guard), go(node.arg)
            out = set()
            for i in full:
                j = max((m for m in sg if m < i), default=None)
                if j is not None and j in sa:
                    out.add(i)
            return frozenset(out)
        if isinstance(node, GUntil):
            sa = go(node.arg)
            out = set()
            for i in full:
                for j in range(i + 1, n + 1):
                    if j in sa and guard_value(
                            node.guard,
                            lambda b, lo=i + 1, hi=j - 1: counter.count(b, lo, hi)):
                        out.add(i)
                        break
            return frozenset(out)
        if isinstance(node, GSince):
            sa = go(node.arg)
            out = set()
            for i in full:
                for j in range(1, i):
                    if j in sa and guard_value(
                            node.guard,
                            lambda b, lo=j + 1, hi=i - 1: counter.count(b, lo, hi)):
                        out.add(i)
                        break
            return frozenset(out)
        if isinstance(node, NowG):
            return frozenset(
                i for i in full
                if guard_value(node.guard, lambda b, hi=i: counter.count(b, 1, hi)))
        if isinstance(node, BUntil):
            sa = go(node.arg)
            out = set()
            for i in full:
                if any(j in sa and interior_ok(node.letters, i + 1, j - 1)
                       for j in range(i + 1, n + 1)):
                    out.add(i)
            return frozenset(out)
        if isinstance(node, BSince):
            sa = go(node.arg)
            out = set()
            for i in full:
                if any(j in sa and interior_ok(node.letters, j + 1, i - 1)
                       for j in range(1, i)):
                    out.add(i)
            return frozenset(out)
        raise TypeError(f"sat_positions cannot handle {type(node).__name__} in {logic}")

    return go(phi)


def _next_letter(word: Word, a: str, i: int, strict: bool) -> int | None:
    start = i + 1 if strict else i
    for j in range(start, len(word) + 1):
        if word[j - 1] == a:
            return j
    return None


def _prev_letter(word: Word, a: str, i: int, strict: bool) -> int | None:
    start = i - 1 if strict else i
    for j in range(start, 0, -1):
        if word[j - 1] == a:
            return j
    return None


def sat_intervals(word: Word, phi: Formula) -> frozenset[Interval]:
    """All intervals where an interval-logic formula holds, bottom-up."""
    n = len(word)
    all_iv = frozenset((i, j) for i in range(1, n + 1) for j in range(i, n + 1))
    memo: dict[int, frozenset[Interval]] = {}
    keep: list[Formula] = []

    first_from = {}
    last_upto = {}
    for a in set(word):
        ff = [None] * (n + 2)
        for i in range(n, 0, -1):
            ff[i] = i if word[i - 1] == a else ff[i + 1]
        first_from[a] = ff
        lu = [None] * (n + 1)
        for j in range(1, n + 1):
            lu[j] = j if word[j - 1] == a else lu[j - 1]
        last_upto[a] = lu

    def go(node: Formula) -> frozenset[Interval]:
        got = memo.get(id(node))
        if got is not None:
            return got
        keep.append(node)
        s = _node_intervals(node)
        memo[id(node)] = s
        return s

    def _node_intervals(node: Formula) -> frozenset[Interval]:
        if isinstance(node, Top):
            return all_iv
        if isinstance(node, Atom):
            return frozenset((i, i) for i in range(1, n + 1) if word[i - 1] == node.letter)
        if isinstance(node, Pt):
            return frozenset((i, i) for i in range(1, n + 1))
        if isinstance(node, Unit):
            return frozenset((i, i + 1) for i in range(1, n))
        if isinstance(node, Alo):
            return frozenset((i, j) for (i, j) in all_iv
                             if all(word[k - 1] in node.letters for k in range(i + 1, j)))
        if isinstance(node, Not):
            return all_iv - go(node.arg)
        if isinstance(node, Or):
            return go(node.left) | go(node.right)
        if isinstance(node, And):
            return go(node.left) & go(node.right)
        if isinstance(node, Implies):
            return (all_iv - go(node.left)) | go(node.right)
        if isinstance(node, Sp):
            s = go(node.arg)
            return frozenset((i, j) for (i, j) in all_iv if (i, i) in s)
        if isinstance(node, Ep):
            s = go(node.arg)
            return frozenset((i, j) for (i, j) in all_iv if (j, j) in s)
        if isinstance(node, ChopF):
            s1, s2 = go(node.left), go(node.right)
            ff = first_from.get(node.letter)
            out = set()
            for (i, j) in all_iv:
                k = ff[i] if ff else None
                if k is not None and k <= j and (i, k) in s1 and (k, j) in s2:
                    out.add((i, j))
            return frozenset(out)
        if isinstance(node, ChopL):
            s1, s2 = go(node.left), go(node.right)
            lu = last_upto.get(node.letter)
            out = set()
            for (i, j) in all_iv:
                k = lu[j] if lu else None
                if k is not None and k >= i and (i, k) in s1 and (k, j) in s2:
                    out.add((i, j))
            return frozenset(out)
        if isinstance(node, ChopFp):
            s1, s2 = go(node.left), go(node.right)
            ff = first_from.get(node.letter)
            out = set()
            for (i, j) in all_iv:
                k = ff[i] if ff else None
                if k is not None and k >= j and (i, k) in s1 and (j, k) in s2:
                    out.add((i, j))
            return frozenset(out)
        if isinstance(node, ChopLm):
            s1, s2 = go(node.left), go(node.right)
            lu = last_upto.get(node.letter)
            out = set()
            for (i, j) in all_iv:
                k = lu[j] if lu else None
                if k is not None and k <= i and (k, i) in s1 and (k, j) in s2:
                    out.add((i, j))
            return frozenset(out)
        if isinstance(node, OPlus):
            s = go(node.arg)
            return frozenset((i, j) for (i, j) in all_iv if i < j and (i + 1, j) in s)
        if isinstance(node, OMinus):
            s = go(node.arg)
            return frozenset((i, j) for (i, j) in all_iv if i < j and (i, j - 1) in s)
        if isinstance(node, OPlusBar):
            s = go(node.arg)
            return frozenset((i, j) for (i, j) in all_iv if j < n and (i, j + 1) in s)
        if isinstance(node, OMinusBar):
            s = go(node.arg)
            return frozenset((i, j) for (i, j) in all_iv if i > 1 and (i - 1, j) in s)
        raise TypeError(f"sat_intervals cannot handle {type(node).__name__}")

    return go(phi)


def member(word: Word, phi: Formula, logic: str) -> bool:
    """Language membership: position 1 for point logics, [1,|w|] for uitl."""
    if logic == "uitl":
        return (1, len(word)) in sat_intervals(word, phi)
    return 1 in sat_positions(word, phi, logic)
