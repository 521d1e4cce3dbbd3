"""Formula ASTs for the five logic fragments, guards, metrics and desugaring.

Words are plain Python strings over an alphabet of single-character letters;
positions are 1-based.  All AST nodes are frozen dataclasses, so formulas are
immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


Word = str
Position = int
Interval = tuple[int, int]


def normalize_alphabet(letters) -> str:
    """Deterministic alphabet: sorted string of distinct single characters."""
    out = sorted(set(letters))
    for c in out:
        if len(c) != 1:
            raise ValueError(f"letters must be single characters, got {c!r}")
    return "".join(out)


def domain(word: Word) -> range:
    """1-based positions of a word."""
    return range(1, len(word) + 1)


def letter_at(word: Word, i: Position) -> str:
    return word[i - 1]


# ---------------------------------------------------------------------------
# formula nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    pass


# boolean skeleton, shared by every fragment
@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    letter: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


# TL[X_a,Y_a]: letter jumps, single steps, endpoint restarts
@dataclass(frozen=True)
class Xa(Formula):
    letter: str
    arg: Formula


@dataclass(frozen=True)
class Ya(Formula):
    letter: str
    arg: Formula


@dataclass(frozen=True)
class WXa(Formula):
    letter: str
    arg: Formula


@dataclass(frozen=True)
class WYa(Formula):
    letter: str
    arg: Formula


@dataclass(frozen=True)
class NextPos(Formula):
    arg: Formula


@dataclass(frozen=True)
class PrevPos(Formula):
    arg: Formula


@dataclass(frozen=True)
class Sp(Formula):
    arg: Formula


@dataclass(frozen=True)
class Ep(Formula):
    arg: Formula


# interval logic
@dataclass(frozen=True)
class Pt(Formula):
    pass


@dataclass(frozen=True)
class Unit(Formula):
    pass


@dataclass(frozen=True)
class Alo(Formula):
    """Interior-letters restriction: every strictly inner position is in `letters`."""

    letters: frozenset[str]


@dataclass(frozen=True)
class ChopF(Formula):
    left: Formula
    letter: str
    right: Formula


@dataclass(frozen=True)
class ChopL(Formula):
    left: Formula
    letter: str
    right: Formula


@dataclass(frozen=True)
class ChopFp(Formula):
    left: Formula
    letter: str
    right: Formula


@dataclass(frozen=True)
class ChopLm(Formula):
    left: Formula
    letter: str
    right: Formula


@dataclass(frozen=True)
class OPlus(Formula):
    arg: Formula


@dataclass(frozen=True)
class OMinus(Formula):
    arg: Formula


@dataclass(frozen=True)
class OPlusBar(Formula):
    arg: Formula


@dataclass(frozen=True)
class OMinusBar(Formula):
    arg: Formula


# LTL
@dataclass(frozen=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True)
class Prev(Formula):
    arg: Formula


@dataclass(frozen=True)
class Future(Formula):
    arg: Formula


@dataclass(frozen=True)
class Past(Formula):
    arg: Formula


@dataclass(frozen=True)
class Always(Formula):
    arg: Formula


@dataclass(frozen=True)
class Histor(Formula):
    arg: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Since(Formula):
    left: Formula
    right: Formula


# guarded-jump logic (at-next / at-prev)
@dataclass(frozen=True)
class XGuard(Formula):
    guard: Formula
    arg: Formula


@dataclass(frozen=True)
class YGuard(Formula):
    guard: Formula
    arg: Formula


# ---------------------------------------------------------------------------
# counting guards
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Guard:
    pass


@dataclass(frozen=True)
class Simple(Guard):
    """#B = 0 over the open interior of the connecting interval."""

    letters: frozenset[str]


@dataclass(frozen=True)
class Threshold(Guard):
    """lo <= #B < hi (hi None means unbounded)."""

    letters: frozenset[str]
    lo: int
    hi: int | None

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError("threshold lower bound must be >= 0")
        if self.hi is not None and self.hi < 0:
            raise ValueError("threshold upper bound must be >= 0")


@dataclass(frozen=True)
class Modulo(Guard):
    """sum_i c_i * #B_i lies in `residues` mod `modulus`."""

    terms: tuple[tuple[int, frozenset[str]], ...]
    residues: frozenset[int]
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if not all(0 <= r < self.modulus for r in self.residues):
            raise ValueError("residues must lie in [0, modulus)")


@dataclass(frozen=True)
class GNot(Guard):
    arg: Guard


@dataclass(frozen=True)
class GAnd(Guard):
    left: Guard
    right: Guard


@dataclass(frozen=True)
class GOr(Guard):
    left: Guard
    right: Guard


GUARD_TRUE = Simple(frozenset())


# counting formulas
@dataclass(frozen=True)
class GUntil(Formula):
    guard: Guard
    arg: Formula


@dataclass(frozen=True)
class GSince(Formula):
    guard: Guard
    arg: Formula


@dataclass(frozen=True)
class NowG(Formula):
    """Global counter test: the guard predicate applied to counts over w[1..i]."""

    guard: Guard


@dataclass(frozen=True)
class BUntil(Formula):
    """Derived B-until: interior letters all drawn from `letters`."""

    letters: frozenset[str]
    arg: Formula


@dataclass(frozen=True)
class BSince(Formula):
    letters: frozenset[str]
    arg: Formula


FALSE = Not(Top())


def big_or(parts: list[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def big_and(parts: list[Formula]) -> Formula:
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# ---------------------------------------------------------------------------
# generic traversal
# ---------------------------------------------------------------------------

_LETTER_UNARY = (Xa, Ya, WXa, WYa)
_PLAIN_UNARY = (Not, NextPos, PrevPos, Sp, Ep, OPlus, OMinus, OPlusBar,
                OMinusBar, Next, Prev, Future, Past, Always, Histor)
_BINARY = (Or, And, Implies, Until, Since)
_CHOPS = (ChopF, ChopL, ChopFp, ChopLm)
_LEAVES = (Top, Atom, Pt, Unit, Alo, NowG)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, _LEAVES):
        return ()
    if isinstance(phi, _LETTER_UNARY):
        return (phi.arg,)
    if isinstance(phi, _PLAIN_UNARY):
        return (phi.arg,)
    if isinstance(phi, _BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, _CHOPS):
        return (phi.left, phi.right)
    if isinstance(phi, (XGuard, YGuard)):
        return (phi.guard, phi.arg)
    if isinstance(phi, (GUntil, GSince, BUntil, BSince)):
        return (phi.arg,)
    raise TypeError(f"unknown formula node {phi!r}")


def rebuild(phi: Formula, new_children: tuple[Formula, ...]) -> Formula:
    """Copy of `phi` with its children replaced (same arity)."""
    if isinstance(phi, _LEAVES):
        return phi
    if isinstance(phi, _LETTER_UNARY):
        return type(phi)(phi.letter, new_children[0])
    if isinstance(phi, _PLAIN_UNARY):
        return type(phi)(new_children[0])
    if isinstance(phi, _BINARY):
        return type(phi)(new_children[0], new_children[1])
    if isinstance(phi, _CHOPS):
        return type(phi)(new_children[0], phi.letter, new_children[1])
    if isinstance(phi, (XGuard, YGuard)):
        return type(phi)(new_children[0], new_children[1])
    if isinstance(phi, (GUntil, GSince)):
        return type(phi)(phi.guard, new_children[0])
    if isinstance(phi, (BUntil, BSince)):
        return type(phi)(phi.letters, new_children[0])
    raise TypeError(f"unknown formula node {phi!r}")


def walk(phi: Formula) -> Iterator[Formula]:
    yield phi
    for c in children(phi):
        yield from walk(c)


Path = tuple[tuple[Formula, int], ...]


def subterms(phi: Formula) -> list[tuple[Path, Formula]]:
    """Every node occurrence, paired with its root-to-hole context path.

    A path step is (parent node, child index); the empty path is the root.
    """
    out: list[tuple[Path, Formula]] = []

    def go(node: Formula, path: Path) -> None:
        out.append((path, node))
        for idx, c in enumerate(children(node)):
            go(c, path + ((node, idx),))

    go(phi, ())
    return out


def guard_subguards(g: Guard) -> Iterator[Guard]:
    yield g
    if isinstance(g, GNot):
        yield from guard_subguards(g.arg)
    elif isinstance(g, (GAnd, GOr)):
        yield from guard_subguards(g.left)
        yield from guard_subguards(g.right)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def _ceil_log2(c: int) -> int:
    n = 0
    v = 1
    while v < c:
        v *= 2
        n += 1
    return n


def bits(c: int) -> int:
    """Binary size of a constant: ceil(log2 c) for c >= 2, else 1."""
    c = abs(c)
    return _ceil_log2(c) if c >= 2 else 1


def guard_size(g: Guard) -> int:
    """Max over guard component sizes: |B| per letter set, bits per constant."""
    if isinstance(g, Simple):
        return max(len(g.letters), 1)
    if isinstance(g, Threshold):
        parts = [len(g.letters), 1, bits(g.lo)]
        if g.hi is not None:
            parts.append(bits(g.hi))
        return max(parts)
    if isinstance(g, Modulo):
        parts = [bits(g.modulus)]
        for c, b in g.terms:
            parts.append(len(b))
            parts.append(bits(c))
        return max(parts)
    if isinstance(g, GNot):
        return guard_size(g.arg)
    if isinstance(g, (GAnd, GOr)):
        return max(guard_size(g.left), guard_size(g.right))
    raise TypeError(f"unknown guard {g!r}")


def size(phi: Formula) -> int:
    """Operator-and-atom count; a guarded modality costs its guard size."""
    if isinstance(phi, (GUntil, GSince)):
        return guard_size(phi.guard) + size(phi.arg)
    if isinstance(phi, (BUntil, BSince)):
        return max(len(phi.letters), 1) + size(phi.arg)
    if isinstance(phi, NowG):
        return guard_size(phi.guard) + 1
    return 1 + sum(size(c) for c in children(phi))


def letters(phi: Formula) -> set[str]:
    """All letters mentioned in atoms, modal subscripts and guard letter sets."""
    out: set[str] = set()
    for node in walk(phi):
        if isinstance(node, Atom):
            out.add(node.letter)
        elif isinstance(node, _LETTER_UNARY) or isinstance(node, _CHOPS):
            out.add(node.letter)
        elif isinstance(node, Alo):
            out.update(node.letters)
        elif isinstance(node, (BUntil, BSince)):
            out.update(node.letters)
        elif isinstance(node, (GUntil, GSince, NowG)):
            out.update(guard_letters(node.guard))
    return out


def guard_letters(g: Guard) -> set[str]:
    out: set[str] = set()
    for sub in guard_subguards(g):
        if isinstance(sub, (Simple, Threshold)):
            out.update(sub.letters)
        elif isinstance(sub, Modulo):
            for _, b in sub.terms:
                out.update(b)
    return out


def recursion_depth(phi: Formula) -> int:
    """Guard-nesting depth of at-next formulas; booleans are transparent."""
    if isinstance(phi, (Atom, Top)):
        return 0
    if isinstance(phi, (Or, And, Implies)):
        return max(recursion_depth(phi.left), recursion_depth(phi.right))
    if isinstance(phi, Not):
        return recursion_depth(phi.arg)
    if isinstance(phi, (Sp, Ep)):
        return recursion_depth(phi.arg)
    if isinstance(phi, (XGuard, YGuard)):
        return max(recursion_depth(phi.guard) + 1, recursion_depth(phi.arg))
    raise TypeError(f"recursion_depth undefined for {phi!r}")


def us_depth(phi: Formula) -> int:
    """Until/Since nesting depth of an LTL formula."""
    if isinstance(phi, (Until, Since)):
        return 1 + max(us_depth(phi.left), us_depth(phi.right))
    kids = children(phi)
    return max((us_depth(c) for c in kids), default=0)


# ---------------------------------------------------------------------------
# desugaring
# ---------------------------------------------------------------------------

def desugar(phi: Formula, alphabet: str | None = None) -> Formula:
    """Expand derived operators over core connectives.

    And/Implies normalize to Not/Or; LTL F/P/G/H/X/Y become Until/Since forms
    (P stays reflexive: P phi = phi or TOP S phi); B-untils become
    formula-untils whose invariant is the disjunction of B's letters; the
    interior-letters atom needs `alphabet` to build its complement.  NowG and
    the guarded modalities are core and stay.
    """
    kids = tuple(desugar(c, alphabet) for c in children(phi))

    if isinstance(phi, And):
        return Not(Or(Not(kids[0]), Not(kids[1])))
    if isinstance(phi, Implies):
        return Or(Not(kids[0]), kids[1])
    if isinstance(phi, Future):
        return Until(Top(), kids[0])
    if isinstance(phi, Always):
        return Not(Until(Top(), Not(kids[0])))
    if isinstance(phi, Past):
        return Or(kids[0], Since(Top(), kids[0]))
    if isinstance(phi, Histor):
        inner = Or(Not(kids[0]), Since(Top(), Not(kids[0])))
        return Not(inner)
    if isinstance(phi, Next):
        return Until(Not(Top()), kids[0])
    if isinstance(phi, Prev):
        return Since(Not(Top()), kids[0])
    if isinstance(phi, BUntil):
        return Until(big_or([Atom(a) for a in sorted(phi.letters)]), kids[0])
    if isinstance(phi, BSince):
        return Since(big_or([Atom(a) for a in sorted(phi.letters)]), kids[0])
    if isinstance(phi, Alo):
        if alphabet is None:
            raise ValueError("desugaring an interior-letters atom needs the alphabet")
        outside = [b for b in normalize_alphabet(alphabet) if b not in phi.letters]
        bad = big_or([OPlus(OMinus(ChopF(Top(), b, Top()))) for b in outside])
        return Or(Pt(), Or(Unit(), Not(bad)))
    return rebuild(phi, kids)


# ---------------------------------------------------------------------------
# fragment membership
# ---------------------------------------------------------------------------

_BOOLEANS = (Top, Atom, Not, Or, And, Implies)

_FRAGMENT_NODES = {
    "xy": _BOOLEANS + (Xa, Ya, WXa, WYa, NextPos, PrevPos, Sp, Ep),
    "uitl": _BOOLEANS + (Pt, Unit, Alo, ChopF, ChopL, ChopFp, ChopLm,
                         OPlus, OMinus, OPlusBar, OMinusBar, Sp, Ep),
    "ltl": _BOOLEANS + (Next, Prev, Future, Past, Always, Histor, Until, Since),
    "atnext": _BOOLEANS + (XGuard, YGuard, Sp, Ep),
    "blintl": _BOOLEANS + (GUntil, GSince, NowG, BUntil, BSince,
                           Next, Prev, Future, Past, Always, Histor),
}

SUBLOGICS = ("invtl", "binvtl", "bthtl", "invmodtl")
FRAGMENTS = tuple(_FRAGMENT_NODES) + SUBLOGICS


def fragment_violation(phi: Formula, logic: str) -> str | None:
    """None if `phi` belongs to the named fragment, else a reason string."""
    base = "blintl" if logic in SUBLOGICS else logic
    if base not in _FRAGMENT_NODES:
        raise ValueError(f"unknown logic {logic!r}")
    allowed = _FRAGMENT_NODES[base]
    for node in walk(phi):
        if not isinstance(node, allowed):
            return f"operator {type(node).__name__} is not in the {logic} fragment"
    if base != "blintl":
        return None
    for node in walk(phi):
        if isinstance(node, (GUntil, GSince)):
            reason = _guard_violation(node.guard, logic)
            if reason:
                return reason
        if isinstance(node, NowG) and logic in ("invtl", "binvtl", "bthtl"):
            return f"global counter tests are not in the {logic} fragment"
    return None


def _guard_violation(g: Guard, logic: str) -> str | None:
    if logic == "blintl":
        return None
    atoms = [s for s in guard_subguards(g) if isinstance(s, (Simple, Threshold, Modulo))]
    has_bool = any(isinstance(s, (GNot, GAnd, GOr)) for s in guard_subguards(g))
    if logic == "invtl":
        if has_bool or not all(isinstance(s, Simple) for s in atoms):
            return "invtl modalities take a single #B=0 guard"
    elif logic == "binvtl":
        if not all(isinstance(s, Simple) for s in atoms):
            return "binvtl guards are booleans of #B=0 constraints"
    elif logic == "bthtl":
        if any(isinstance(s, Modulo) for s in atoms):
            return "bthtl guards cannot contain modulo constraints"
    elif logic == "invmodtl":
        if has_bool or not all(isinstance(s, (Simple, Modulo)) for s in atoms):
            return "invmodtl modalities take a single simple or modulo guard"
    return None


def in_fragment(phi: Formula, logic: str) -> bool:
    return fragment_violation(phi, logic) is None
