"""Counting-guarded logic engine.

Guard normalization, the threshold-eliminating compiler (to invariant
guards), the mixed compiler (to simple+modulo guards plus global-counter
tests), the Fischer-Ladner closure with residue markers, the lazily
materialized formula automaton, bounded satisfiability search, and Kripke
model checking over finite generated words.

Global counters are anchored inclusively: the counter value at position i
covers w[1..i].  The guarded-modality unfoldings below are stated against
that anchoring and are validated by the exhaustive oracle suite.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

from .evaluate import eval_blintl
from .formulas import (
    Always, And, Atom, BSince, BUntil, FALSE, Formula, Future, GAnd, GNot, GOr,
    GSince, GUntil, Guard, Histor, Implies, Modulo, Next, Not, NowG, Or,
    Past, Prev, Simple, Since, Threshold, Top, Until, big_or, children,
    guard_letters, letters as formula_letters, normalize_alphabet, rebuild,
    size as formula_size, walk,
)


class SublogicError(Exception):
    pass


class ResourceLimitError(Exception):
    pass


@dataclass
class KripkeStructure:
    """Letter-labeled transition system; initial-to-final paths generate words."""

    states: tuple[str, ...]
    labels: dict[str, str]
    edges: frozenset[tuple[str, str]]
    initial: frozenset[str]
    final: frozenset[str]

    def __post_init__(self):
        if not self.initial or not self.final:
            raise ValueError("Kripke structures need initial and final states")
        for s in self.states:
            if s not in self.labels:
                raise ValueError(f"state {s} has no letter label")

    def alphabet(self) -> str:
        return normalize_alphabet(self.labels.values())

    def generated_words(self, max_len: int):
        """All words of initial-to-final paths with length <= max_len."""
        out = []
        frontier = [(s, self.labels[s]) for s in self.states if s in self.initial]
        for _ in range(max_len):
            nxt = []
            for state, word in frontier:
                if state in self.final:
                    out.append(word)
                for (u, v) in self.edges:
                    if u == state:
                        nxt.append((v, word + self.labels[v]))
            frontier = nxt
        return sorted(set(out), key=lambda w: (len(w), w))


# ---------------------------------------------------------------------------
# guard normalization
# ---------------------------------------------------------------------------

ThrItem = tuple[frozenset[str], int, int | None]  # B, lo, hi  (lo <= #B < hi)
ModItem = tuple[tuple[tuple[int, frozenset[str]], ...], frozenset[int], int]


def canon_modulo(terms, residues, q) -> ModItem:
    """Reduce coefficients mod q, merge duplicate letter sets, sort terms."""
    acc: dict[frozenset[str], int] = {}
    for c, b in terms:
        acc[b] = (acc.get(b, 0) + c) % q
    out = tuple(sorted(((c, b) for b, c in acc.items() if c != 0 and b),
                       key=lambda t: ("".join(sorted(t[1])), t[0])))
    return (out, frozenset(r % q for r in residues), q)


def _modulo_of(item: ModItem) -> Modulo:
    terms, residues, q = item
    if not terms:
        terms = ((1, frozenset()),)
    return Modulo(terms, residues, q)


def _lift_residues(residues: frozenset[int], q: int, lcm: int) -> frozenset[int]:
    return frozenset(r for r in range(lcm) if r % q in residues)


@dataclass
class Conj:
    """One DNF disjunct: same-set threshold bounds merged, modulos merged by form."""

    thr: dict[frozenset[str], tuple[int, int | None]]
    mods: list[ModItem]

    def key(self):
        return (tuple(sorted(self.thr.items(), key=lambda kv: "".join(sorted(kv[0])))),
                tuple(sorted(self.mods)))


def _literal_disjuncts(g: Guard, positive: bool) -> list[list]:
    """DNF over primitive literals with negations pushed inward."""
    if isinstance(g, GNot):
        return _literal_disjuncts(g.arg, not positive)
    if isinstance(g, (GAnd, GOr)):
        conjunctive = isinstance(g, GAnd) == positive
        left = _literal_disjuncts(g.left, positive)
        right = _literal_disjuncts(g.right, positive)
        if conjunctive:
            return [l + r for l in left for r in right]
        return left + right
    if isinstance(g, Simple):
        if positive:
            return [[("thr", g.letters, 0, 1)]]
        return [[("thr", g.letters, 1, None)]]
    if isinstance(g, Threshold):
        if positive:
            return [[("thr", g.letters, g.lo, g.hi)]]
        out = []
        if g.lo > 0:
            out.append([("thr", g.letters, 0, g.lo)])
        if g.hi is not None:
            out.append([("thr", g.letters, g.hi, None)])
        return out
    if isinstance(g, Modulo):
        item = canon_modulo(g.terms, g.residues, g.modulus)
        if not positive:
            terms, residues, q = item
            item = (terms, frozenset(range(q)) - residues, q)
        return [[("mod", item)]]
    raise TypeError(f"unknown guard {g!r}")


def _merge_conj(lits) -> Conj | None:
    """Merge a literal list; None when contradictory."""
    thr: dict[frozenset[str], tuple[int, int | None]] = {}
    mods: dict[tuple, ModItem] = {}
    for lit in lits:
        if lit[0] == "thr":
            _, b, lo, hi = lit
            old = thr.get(b)
            if old is not None:
                olo, ohi = old
                lo = max(lo, olo)
                if hi is None:
                    hi = ohi
                elif ohi is not None:
                    hi = min(hi, ohi)
            if hi is not None and lo >= hi:
                return None
            thr[b] = (lo, hi)
        else:
            terms, residues, q = lit[1]
            prev = mods.get(terms)
            if prev is None:
                mods[terms] = (terms, residues, q)
            else:
                _, r0, q0 = prev
                l = math.lcm(q0, q)
                merged = _lift_residues(r0, q0, l) & _lift_residues(residues, q, l)
                mods[terms] = canon_modulo(terms, merged, l) if l >= 2 else prev
    out_thr = {b: (lo, hi) for b, (lo, hi) in thr.items()
               if not (lo == 0 and hi is None)}
    out_mods = []
    for terms, residues, q in mods.values():
        if not residues:
            return None
        if len(residues) == q:
            continue
        if not terms:
            if 0 in residues:
                continue
            return None
        out_mods.append((terms, residues, q))
    return Conj(out_thr, sorted(out_mods))


def guard_dnf(g: Guard) -> list[Conj]:
    out = []
    seen = set()
    for lits in _literal_disjuncts(g, True):
        conj = _merge_conj(lits)
        if conj is None:
            continue
        k = conj.key()
        if k not in seen:
            seen.add(k)
            out.append(conj)
    return out


def _thr_guard(b: frozenset[str], lo: int, hi: int | None) -> Guard:
    if lo == 0 and hi == 1:
        return Simple(b)
    return Threshold(b, lo, hi)


def normalize_guard(g: Guard) -> Guard:
    """DNF with only simple, equality and lower-bound threshold literals.

    Accepts boolean threshold guards; tautologies drop, bounds on the same
    letter set merge, negations push inward, finite upper bounds expand into
    equality disjunctions.
    """
    for part in _iter_guard(g):
        if isinstance(part, Modulo):
            raise SublogicError("normalize_guard takes boolean threshold guards")
    disjuncts: list[Guard] = []
    for conj in guard_dnf(g):
        choices: list[list[Guard]] = []
        for b, (lo, hi) in sorted(conj.thr.items(),
                                  key=lambda kv: "".join(sorted(kv[0]))):
            if hi is None:
                choices.append([_thr_guard(b, lo, None)])
            else:
                choices.append([_thr_guard(b, c, c + 1) for c in range(lo, hi)])
        for combo in itertools.product(*choices) if choices else [()]:
            if combo:
                out = combo[0]
                for lit in combo[1:]:
                    out = GAnd(out, lit)
            else:
                out = Simple(frozenset())
            disjuncts.append(out)
    if not disjuncts:
        return Threshold(frozenset(), 1, None)
    out = disjuncts[0]
    for d in disjuncts[1:]:
        out = GOr(out, d)
    return out


def _iter_guard(g: Guard):
    yield g
    if isinstance(g, GNot):
        yield from _iter_guard(g.arg)
    elif isinstance(g, (GAnd, GOr)):
        yield from _iter_guard(g.left)
        yield from _iter_guard(g.right)


# ---------------------------------------------------------------------------
# guard-eliminating compilers
# ---------------------------------------------------------------------------

def _unfold_thresholds(thr: dict[frozenset[str], tuple[int, int | None]],
                       arg: Formula, since: bool,
                       memo: dict) -> Formula:
    """Threshold conjunction under one modality, reduced to simple guards.

    Peels the connecting interval at its first (or, mirrored, last)
    constrained letter, decrementing the bounds that letter feeds, until
    only zero-equalities remain; those collapse into one simple guard.
    """
    active = {b: (lo, hi) for b, (lo, hi) in thr.items()
              if not (lo == 0 and hi is None)}
    key = tuple(sorted(active.items(), key=lambda kv: "".join(sorted(kv[0]))))
    got = memo.get(key)
    if got is not None:
        return got
    mod_cls = GSince if since else GUntil
    if all(lo == 0 and hi == 1 for lo, hi in active.values()):
        union = frozenset().union(*active.keys()) if active else frozenset()
        out = mod_cls(Simple(union), arg)
        memo[key] = out
        return out
    scope = sorted(set().union(*active.keys()))
    parts: list[Formula] = []
    if all(lo == 0 for lo, hi in active.values()):
        parts.append(mod_cls(Simple(frozenset(scope)), arg))
    for a in scope:
        decremented = {}
        dead = False
        for b, (lo, hi) in active.items():
            if a in b:
                hi2 = None if hi is None else hi - 1
                if hi2 is not None and hi2 <= 0:
                    dead = True
                    break
                decremented[b] = (max(lo - 1, 0), hi2)
            else:
                decremented[b] = (lo, hi)
        if dead:
            continue
        inner = And(Atom(a), _unfold_thresholds(decremented, arg, since, memo))
        parts.append(mod_cls(Simple(frozenset(scope)), inner))
    out = big_or(parts)
    memo[key] = out
    return out


def _extract_modulos(conj: Conj, arg: Formula, since: bool) -> Formula:
    """Move every modulo constraint of a mixed conjunction into global-counter
    tests, leaving a threshold-only modality.

    Until direction:  (m & T) U phi  ==  OR over r0 of
        Now(m = r0)  &  T-U (phi & Y Now(m in r0 + R))
    Since direction mirrors with the outer test shifted one step back.
    """
    mods = conj.mods
    parts: list[Formula] = []
    memo: dict = {}
    ranges = [range(q) for (_, _, q) in mods]
    for r0s in itertools.product(*ranges):
        pre_tests = []
        post_tests = []
        for (terms, residues, q), r0 in zip(mods, r0s):
            pre_tests.append(NowG(_modulo_of((terms, frozenset({r0}), q))))
            target = frozenset((r0 + r) % q if not since else (r0 - r) % q
                               for r in residues)
            post_tests.append(NowG(_modulo_of((terms, target, q))))
        pre = _and_fold(pre_tests)
        post = _and_fold(post_tests)
        if since:
            inner = And(arg, post)
            rest = _unfold_thresholds(conj.thr, inner, True, memo)
            parts.append(And(Prev(pre), rest))
        else:
            inner = And(arg, Prev(post))
            rest = _unfold_thresholds(conj.thr, inner, False, memo)
            parts.append(And(pre, rest))
        memo = {}
    return big_or(parts)


def _and_fold(parts: list[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def _compile_modality(guard: Guard, arg: Formula, since: bool,
                      allow_modulo: bool) -> Formula:
    mod_cls = GSince if since else GUntil
    parts: list[Formula] = []
    for conj in guard_dnf(guard):
        if conj.mods and not allow_modulo:
            raise SublogicError("modulo constraint in a threshold-only compiler")
        if not conj.mods:
            parts.append(_unfold_thresholds(conj.thr, arg, since, {}))
        elif len(conj.mods) == 1 and not conj.thr:
            parts.append(mod_cls(_modulo_of(conj.mods[0]), arg))
        else:
            parts.append(_extract_modulos(conj, arg, since))
    return big_or(parts)


def _compile(phi: Formula, allow_modulo: bool) -> Formula:
    if isinstance(phi, (Until, Since)):
        raise SublogicError("formula-guarded modalities are outside the input logic")
    if isinstance(phi, (GUntil, GSince)):
        arg = _compile(phi.arg, allow_modulo)
        return _compile_modality(phi.guard, arg, isinstance(phi, GSince), allow_modulo)
    if isinstance(phi, NowG):
        if not allow_modulo:
            raise SublogicError("global counter tests are outside the input logic")
        return phi
    kids = tuple(_compile(c, allow_modulo) for c in children(phi))
    return rebuild(phi, kids)


def bthtl_to_invtl(phi: Formula) -> Formula:
    """Eliminate boolean threshold guards; output modalities use #B=0 only."""
    return _compile(phi, allow_modulo=False)


def blintl_to_invmodtl(phi: Formula) -> Formula:
    """Reduce to simple and single-modulo guards plus global-counter tests."""
    return _compile(phi, allow_modulo=True)


# ---------------------------------------------------------------------------
# normal form for the automaton
# ---------------------------------------------------------------------------

def automaton_form(phi: Formula, alphabet: str) -> Formula:
    """Core connectives only: atoms, Top, Not, Or, guarded U/S, NowG,
    and formula-guarded U/S; the derived operators expand against `alphabet`."""
    kids = tuple(automaton_form(c, alphabet) for c in children(phi))
    full = frozenset(alphabet)
    if isinstance(phi, And):
        return Not(Or(Not(kids[0]), Not(kids[1])))
    if isinstance(phi, Implies):
        return Or(Not(kids[0]), kids[1])
    if isinstance(phi, Future):
        return GUntil(Simple(frozenset()), kids[0])
    if isinstance(phi, Always):
        return Not(GUntil(Simple(frozenset()), Not(kids[0])))
    if isinstance(phi, Next):
        return GUntil(Simple(full), kids[0])
    if isinstance(phi, Prev):
        return GSince(Simple(full), kids[0])
    if isinstance(phi, Past):
        return Or(kids[0], GSince(Simple(frozenset()), kids[0]))
    if isinstance(phi, Histor):
        neg = Not(kids[0])
        return Not(Or(neg, GSince(Simple(frozenset()), neg)))
    if isinstance(phi, BUntil):
        return GUntil(Simple(full - phi.letters), kids[0])
    if isinstance(phi, BSince):
        return GSince(Simple(full - phi.letters), kids[0])
    if isinstance(phi, (GUntil, GSince)):
        g = phi.guard
        if isinstance(g, Modulo):
            g = _modulo_of(canon_modulo(g.terms, g.residues, g.modulus))
        elif not isinstance(g, (Simple, Threshold)):
            raise SublogicError(
                "boolean guards must be eliminated before the automaton; "
                "run the guard compilers first")
        return rebuild(phi, kids) if g is phi.guard else type(phi)(g, kids[0])
    if isinstance(phi, NowG):
        g = phi.guard
        if isinstance(g, Modulo):
            item = canon_modulo(g.terms, g.residues, g.modulus)
            return NowG(_modulo_of(item))
        if isinstance(g, Simple):
            seen = big_or([Atom(a) for a in sorted(g.letters)])
            return Not(Or(seen, GSince(Simple(frozenset()), seen)))
        raise SublogicError(
            "only simple and modulo global counter tests reach the automaton")
    return rebuild(phi, kids)


def _neg(phi: Formula) -> Formula:
    return phi.arg if isinstance(phi, Not) else Not(phi)


def _mod_item(g: Modulo) -> ModItem:
    return canon_modulo(g.terms, g.residues, g.modulus)


def _delta(item_terms, letter: str, q: int) -> int:
    return sum(c for c, b in item_terms if letter in b) % q


def closure(phi: Formula, alphabet: str | None = None) -> frozenset[Formula]:
    """Fischer-Ladner closure, closed under single negation.

    Modulo-guarded modalities contribute their residue-shifted variants plus
    exactly q singleton global-counter markers; threshold-guarded modalities
    contribute the marker/unfolding formulas used by the direct-threshold
    mode.
    """
    if alphabet is None:
        alphabet = normalize_alphabet(formula_letters(phi) or {"a"})
    else:
        alphabet = normalize_alphabet(alphabet)
    root = automaton_form(phi, alphabet)
    pos: set[Formula] = set()

    def add(psi: Formula) -> None:
        if isinstance(psi, Not):
            add(psi.arg)
            return
        if psi in pos:
            return
        pos.add(psi)
        for c in children(psi):
            add(c)
        if isinstance(psi, (GUntil, GSince)) and isinstance(psi.guard, Modulo):
            terms, residues, q = _mod_item(psi.guard)
            for r in range(q):
                add(NowG(_modulo_of((terms, frozenset({r}), q))))
            seen = {residues}
            frontier = [residues]
            while frontier:
                cur = frontier.pop()
                for a in alphabet:
                    d = _delta(terms, a, q)
                    shifted = frozenset((r - d) % q for r in cur)
                    if shifted not in seen:
                        seen.add(shifted)
                        frontier.append(shifted)
            for rs in seen:
                add(type(psi)(_modulo_of((terms, rs, q)), psi.arg))
        if isinstance(psi, (GUntil, GSince)) and isinstance(psi.guard, Threshold):
            add_threshold_members(psi)

    def add_threshold_members(psi) -> None:
        g = psi.guard
        q = g.hi if g.hi is not None else max(g.lo + 1, 2)
        if q < 2:
            q = 2
        terms = ((1, g.letters),)
        until = isinstance(psi, GUntil)
        markers = [NowG(_modulo_of((terms, frozenset({r}), q))) for r in range(q)]
        for m in markers:
            add(m)
        for s in range(q):
            reach = GUntil(Simple(frozenset()), And(psi.arg, markers[s])) if until \
                else GSince(Simple(frozenset()), And(psi.arg, markers[s]))
            add(reach)
            for r in range(q):
                cls = Until if until else Since
                add(cls(Not(markers[r]), And(markers[r], reach)))

    add(root)
    return frozenset(pos) | frozenset(Not(p) for p in pos)


# ---------------------------------------------------------------------------
# the formula automaton
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AutomatonAtom:
    """One state: position letter, residue vector, modal truth bits."""

    letter: str
    residues: tuple[int, ...]
    bits: tuple[bool, ...]


class FormulaAutomaton:
    """Lazily materialized atom graph for a guard-normal counting formula."""

    def __init__(self, phi: Formula, alphabet: str, budget: int = 2 ** 20):
        self.alphabet = normalize_alphabet(alphabet)
        self.root = automaton_form(phi, self.alphabet)
        self.budget = budget
        self.closure = closure(phi, self.alphabet)
        pos = sorted((f for f in self.closure if not isinstance(f, Not)),
                     key=lambda f: (formula_size(f), repr(f)))
        self.modals = [f for f in pos
                       if isinstance(f, (GUntil, GSince, Until, Since))]
        self.modal_index = {f: i for i, f in enumerate(self.modals)}
        tracked: dict = {}
        for f in pos:
            for node in walk(f):
                if isinstance(node, NowG) and isinstance(node.guard, Modulo):
                    item = _mod_item(node.guard)
                    tracked.setdefault((item[0], item[2]), None)
                if isinstance(node, (GUntil, GSince)) and isinstance(node.guard, Modulo):
                    item = _mod_item(node.guard)
                    tracked.setdefault((item[0], item[2]), None)
        self.constraints = sorted(tracked.keys(),
                                  key=lambda tq: (repr(tq[0]), tq[1]))
        self.atoms_materialized = 0
        self._store: set[AutomatonAtom] = set()
        self._succ_cache: dict[tuple[AutomatonAtom, str], tuple[AutomatonAtom, ...]] = {}

    # residue bookkeeping ----------------------------------------------

    def _init_residues(self, letter: str) -> tuple[int, ...]:
        return tuple(_delta(terms, letter, q) for (terms, q) in self.constraints)

    def _step_residues(self, residues: tuple[int, ...], letter: str) -> tuple[int, ...]:
        return tuple((r + _delta(terms, letter, q)) % q
                     for r, (terms, q) in zip(residues, self.constraints))

    def _now_value(self, g: Modulo, residues: tuple[int, ...]) -> bool:
        terms, rset, q = _mod_item(g)
        idx = self.constraints.index((terms, q))
        return residues[idx] % q in rset

    # atom valuation ----------------------------------------------------

    def value(self, psi: Formula, atom: AutomatonAtom) -> bool:
        if isinstance(psi, Top):
            return True
        if isinstance(psi, Atom):
            return atom.letter == psi.letter
        if isinstance(psi, Not):
            return not self.value(psi.arg, atom)
        if isinstance(psi, Or):
            return self.value(psi.left, atom) or self.value(psi.right, atom)
        if isinstance(psi, NowG):
            if isinstance(psi.guard, Modulo):
                return self._now_value(psi.guard, atom.residues)
            raise SublogicError(
                "non-modulo global counter test survived normalization")
        idx = self.modal_index.get(psi)
        if idx is None:
            raise KeyError(f"formula outside the closure: {psi!r}")
        return atom.bits[idx]

    def formulas(self, atom: AutomatonAtom) -> frozenset[Formula]:
        """The Hintikka set: closure members true in the atom."""
        return frozenset(f for f in self.closure if self.value(f, atom))

    # atom generation ---------------------------------------------------

    def _count_atom(self) -> None:
        self.atoms_materialized += 1
        if self.atoms_materialized > self.budget:
            raise ResourceLimitError(
                f"atom budget {self.budget} exceeded")

    def _value_partial(self, psi: Formula, partial: dict[int, bool],
                       letter: str, residues: tuple[int, ...]):
        """Truth of `psi` under a partial bit assignment; branches on
        undecided modal bits.  Yields (value, extended partial) pairs."""
        if isinstance(psi, Top):
            return [(True, partial)]
        if isinstance(psi, Atom):
            return [(psi.letter == letter, partial)]
        if isinstance(psi, NowG):
            if not isinstance(psi.guard, Modulo):
                raise SublogicError(
                    "non-modulo global counter test survived normalization")
            return [(self._now_value(psi.guard, residues), partial)]
        if isinstance(psi, Not):
            return [(not v, p)
                    for v, p in self._value_partial(psi.arg, partial, letter, residues)]
        if isinstance(psi, Or):
            out = []
            for v, p in self._value_partial(psi.left, partial, letter, residues):
                if v:
                    out.append((True, p))
                else:
                    out.extend(self._value_partial(psi.right, p, letter, residues))
            return out
        idx = self.modal_index.get(psi)
        if idx is None:
            raise KeyError(f"formula outside the closure: {psi!r}")
        if idx in partial:
            return [(partial[idx], partial)]
        return [(False, {**partial, idx: False}),
                (True, {**partial, idx: True})]

    def _until_parts(self, f: Formula, letter: str):
        """Decompose the transition biconditional of an until-family member:
        bit_here = A or (B and bit_next[tau]); returns (A, B, tau-index)."""
        if isinstance(f, GUntil):
            g = f.guard
            if isinstance(g, Simple):
                return (f.arg, Top() if letter not in g.letters else Not(Top()),
                        self.modal_index[f])
            terms, rset, q = _mod_item(g)
            d = _delta(terms, letter, q)
            shifted = GUntil(
                _modulo_of((terms, frozenset((r - d) % q for r in rset), q)), f.arg)
            arg = f.arg if 0 in rset else Not(Top())
            return (arg, Top(), self.modal_index[shifted])
        return (f.right, f.left, self.modal_index[f])

    def _since_formula(self, f: Formula, prev: AutomatonAtom) -> bool:
        """Truth of a since-family formula here, determined by the previous atom."""
        if isinstance(f, GSince):
            g = f.guard
            if isinstance(g, Simple):
                return (self.value(f.arg, prev)
                        or (prev.letter not in g.letters and self.value(f, prev)))
            terms, rset, q = _mod_item(g)
            d = _delta(terms, prev.letter, q)
            shifted = GSince(_modulo_of((terms, frozenset((r - d) % q for r in rset), q)),
                             f.arg)
            return ((0 in rset and self.value(f.arg, prev)) or self.value(shifted, prev))
        return (self.value(f.right, prev)
                or (self.value(f.left, prev) and self.value(f, prev)))

    def _finish_atoms(self, partials, letter: str,
                      residues: tuple[int, ...]) -> list[AutomatonAtom]:
        out = []
        seen = set()
        n = len(self.modals)
        for partial in partials:
            free = [i for i in range(n) if i not in partial]
            for combo in itertools.product((False, True), repeat=len(free)):
                bits = [False] * n
                for i, v in partial.items():
                    bits[i] = v
                for i, v in zip(free, combo):
                    bits[i] = v
                atom = AutomatonAtom(letter, residues, tuple(bits))
                if atom not in seen:
                    seen.add(atom)
                    if atom not in self._store:
                        self._store.add(atom)
                        self._count_atom()
                    out.append(atom)
        return out

    def initial_atoms(self, require_root: bool = True) -> list[AutomatonAtom]:
        """Atoms valid at position 1 (since-modalities false), per letter."""
        out = []
        for letter in self.alphabet:
            residues = self._init_residues(letter)
            partial = {i: False for i, f in enumerate(self.modals)
                       if isinstance(f, (GSince, Since))}
            partials = [partial]
            if require_root:
                partials = [p for v, p in self._value_partial(
                    self.root, partial, letter, residues) if v]
            out.extend(self._finish_atoms(partials, letter, residues))
        return out

    def accepting(self, atom: AutomatonAtom) -> bool:
        """Final-position consistency: every until-family bit is false."""
        return not any(bit and isinstance(f, (GUntil, Until))
                       for bit, f in zip(atom.bits, self.modals))

    def successors(self, atom: AutomatonAtom, letter: str) -> tuple[AutomatonAtom, ...]:
        """All atoms that can follow `atom` when the next position reads
        `letter`; since-bits are forced by `atom`, until-bits are solved
        against the transition biconditionals."""
        key = (atom, letter)
        got = self._succ_cache.get(key)
        if got is not None:
            return got
        residues = self._step_residues(atom.residues, letter)
        base = {i: self._since_formula(f, atom) for i, f in enumerate(self.modals)
                if isinstance(f, (GSince, Since))}
        partials = [base]
        for i, f in enumerate(self.modals):
            if not isinstance(f, (GUntil, Until)):
                continue
            target = atom.bits[i]
            a_form, b_form, tau = self._until_parts(f, letter)
            nxt_partials = []
            for p in partials:
                for a_val, p2 in self._value_partial(a_form, p, letter, residues):
                    if a_val:
                        if target:
                            nxt_partials.append(p2)
                        continue
                    for b_val, p3 in self._value_partial(b_form, p2, letter, residues):
                        if target:
                            if b_val and p3.get(tau, True):
                                nxt_partials.append({**p3, tau: True})
                        else:
                            if not b_val:
                                nxt_partials.append(p3)
                            elif not p3.get(tau, False):
                                nxt_partials.append({**p3, tau: False})
            partials = nxt_partials
            if not partials:
                break
        result = tuple(self._finish_atoms(partials, letter, residues))
        self._succ_cache[key] = result
        return result


def automaton_accepts(aut: FormulaAutomaton, word: str) -> bool:
    """Whether the atom graph has a run over `word` with the automaton's
    formula in its first atom."""
    frontier = {a for a in aut.initial_atoms(require_root=True)
                if a.letter == word[0]}
    for c in word[1:]:
        nxt: set[AutomatonAtom] = set()
        for atom in frontier:
            nxt.update(aut.successors(atom, c))
        frontier = nxt
        if not frontier:
            return False
    return any(aut.accepting(a) for a in frontier)


def run_exists(phi: Formula, word: str, alphabet: str | None = None,
               budget: int = 2 ** 20) -> bool:
    """Whether the formula automaton has a run over `word` with the formula
    in its first atom, decided through the atom graph."""
    if alphabet is None:
        alphabet = normalize_alphabet(set(word) | formula_letters(phi) or {"a"})
    return automaton_accepts(FormulaAutomaton(phi, alphabet, budget), word)


# ---------------------------------------------------------------------------
# decision procedures
# ---------------------------------------------------------------------------

@dataclass
class AutomatonStats:
    formula_size: int
    closure_size: int
    atoms: int
    verdict: str
    witness_length: int | None
    wall_time: float

    def csv_row(self) -> str:
        wl = "" if self.witness_length is None else str(self.witness_length)
        return (f"{self.formula_size},{self.closure_size},{self.atoms},"
                f"{self.verdict},{wl},{self.wall_time:.4f}")


def _fresh_letter(used) -> str:
    for c in "abcdefghijklmnopqrstuvwxyz":
        if c not in used:
            return c
    raise ValueError("alphabet exhausted")


def sat_automaton(phi: Formula, alphabet: str | None = None,
                  budget: int = 2 ** 20,
                  stats_out: list | None = None) -> str | None:
    """Shortest satisfying word via breadth-first atom-graph search, or None.

    The guard compilers run internally, so any BLinTL formula is accepted.
    """
    t0 = time.monotonic()
    used = formula_letters(phi)
    if alphabet is None:
        alphabet = normalize_alphabet(used | {_fresh_letter(used)})
    else:
        alphabet = normalize_alphabet(alphabet)
    reduced = blintl_to_invmodtl(phi)
    aut = FormulaAutomaton(reduced, alphabet, budget)
    seen: set[AutomatonAtom] = set()
    frontier: list[tuple[AutomatonAtom, str]] = []
    for a in aut.initial_atoms(require_root=True):
        if a not in seen:
            seen.add(a)
            frontier.append((a, a.letter))
    witness = None
    while frontier and witness is None:
        for atom, word in frontier:
            if aut.accepting(atom):
                witness = word
                break
        if witness is not None:
            break
        nxt: list[tuple[AutomatonAtom, str]] = []
        for atom, word in frontier:
            for c in alphabet:
                for succ in aut.successors(atom, c):
                    if succ not in seen:
                        seen.add(succ)
                        nxt.append((succ, word + c))
        frontier = nxt
    elapsed = time.monotonic() - t0
    if witness is not None and not eval_blintl(witness, 1, phi):
        raise RuntimeError(f"internal error: witness {witness!r} failed replay")
    if stats_out is not None:
        stats_out.append(AutomatonStats(
            formula_size=formula_size(phi),
            closure_size=len(aut.closure),
            atoms=aut.atoms_materialized,
            verdict="SAT" if witness is not None else "UNSAT",
            witness_length=len(witness) if witness is not None else None,
            wall_time=elapsed))
    return witness


def mc_kripke(kripke: KripkeStructure, phi: Formula,
              budget: int = 2 ** 20) -> str | None:
    """None when the formula holds on every generated word, else a shortest
    counterexample word (verified to violate the formula)."""
    alphabet = normalize_alphabet(set(kripke.alphabet()) | formula_letters(phi))
    reduced = blintl_to_invmodtl(Not(phi))
    aut = FormulaAutomaton(reduced, alphabet, budget)
    seen: set[tuple[str, AutomatonAtom]] = set()
    frontier: list[tuple[str, AutomatonAtom, str]] = []
    for s in kripke.states:
        if s not in kripke.initial:
            continue
        for a in aut.initial_atoms(require_root=True):
            if a.letter == kripke.labels[s] and (s, a) not in seen:
                seen.add((s, a))
                frontier.append((s, a, kripke.labels[s]))
    while frontier:
        for s, a, word in frontier:
            if s in kripke.final and aut.accepting(a):
                if eval_blintl(word, 1, phi):
                    raise RuntimeError(
                        f"internal error: counterexample {word!r} failed replay")
                return word
        nxt = []
        for s, a, word in frontier:
            for (u, v) in kripke.edges:
                if u != s:
                    continue
                for succ in aut.successors(a, kripke.labels[v]):
                    if (v, succ) not in seen:
                        seen.add((v, succ))
                        nxt.append((v, succ, word + kripke.labels[v]))
        frontier = nxt
    return None
