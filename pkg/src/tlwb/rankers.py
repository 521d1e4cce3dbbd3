"""Rankers: navigation programs, context rankers, the witness system,
fast model checking, model shrinking and small-model satisfiability
for the letter-jump logic."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .formulas import (
    And, Atom, Ep, Formula, Implies, NextPos, Not, Or, Path, PrevPos, Sp,
    Top, WXa, WYa, Word, Xa, Ya, letters as formula_letters, size, subterms,
)


class NotAModelError(Exception):
    pass


_JUMPS = (Xa, Ya, WXa, WYa, NextPos, PrevPos, Sp, Ep)
_BOOLS = (Not, Or, And, Implies)


def is_ranker(phi: Formula) -> bool:
    """Boolean-free jump chain ending in TOP."""
    while isinstance(phi, _JUMPS):
        phi = phi.arg
    return isinstance(phi, Top)


def ranker_pos(word: Word, start: int, ranker: Formula) -> int | None:
    """The scan outcome from `start`; None is the failed scan."""
    n = len(word)
    i: int | None = start
    phi = ranker
    while True:
        if isinstance(phi, Top):
            return i
        if isinstance(phi, Sp):
            i = 1
        elif isinstance(phi, Ep):
            i = n
        elif isinstance(phi, Xa):
            i = _scan(word, phi.letter, i + 1, n + 1, 1)
        elif isinstance(phi, WXa):
            i = _scan(word, phi.letter, i, n + 1, 1)
        elif isinstance(phi, Ya):
            i = _scan(word, phi.letter, i - 1, 0, -1)
        elif isinstance(phi, WYa):
            i = _scan(word, phi.letter, i, 0, -1)
        elif isinstance(phi, NextPos):
            i = i + 1 if i + 1 <= n else None
        elif isinstance(phi, PrevPos):
            i = i - 1 if i - 1 >= 1 else None
        else:
            raise TypeError(f"not a ranker operator: {phi!r}")
        if i is None:
            return None
        phi = phi.arg


def _scan(word: Word, a: str, start: int, stop: int, step: int) -> int | None:
    for j in range(start, stop, step):
        if word[j - 1] == a:
            return j
    return None


def lpos(word: Word, ranker: Formula) -> int | None:
    """Ranker scans always start at position 1."""
    return ranker_pos(word, 1, ranker)


def context_ranker(path: Path) -> Formula:
    """The ranker fixing the evaluation position of a subterm occurrence.

    Boolean steps are transparent; modal steps append to the scan.  The
    leading start-point restart is dropped when the chain itself begins
    with an absolute restart.
    """
    ops = []
    for node, _idx in path:
        if isinstance(node, _BOOLS):
            continue
        if isinstance(node, _JUMPS):
            ops.append(node)
            continue
        raise TypeError(f"context step {type(node).__name__} is not a jump or boolean")
    chain: Formula = Top()
    for op in reversed(ops):
        if isinstance(op, (Xa, Ya, WXa, WYa)):
            chain = type(op)(op.letter, chain)
        else:
            chain = type(op)(chain)
    if ops and isinstance(ops[0], (Sp, Ep)):
        return chain
    return Sp(chain)


def rankerset(phi: Formula) -> set[Formula]:
    """Rankers of all subterm occurrences."""
    return {context_ranker(path) for path, _ in subterms(phi)}


@dataclass(frozen=True)
class PropVar:
    index: int


@dataclass(frozen=True)
class WitnessSystem:
    """Propositional skeleton plus one (ranker, atomic formula) binding per
    atomic subterm occurrence."""

    witness: object
    bindings: tuple[tuple[int, Formula, Formula], ...]


def witness_system(phi: Formula) -> WitnessSystem:
    bindings: list[tuple[int, Formula, Formula]] = []

    def build(node: Formula, path: Path):
        if isinstance(node, (Atom, Top)):
            idx = len(bindings) + 1
            bindings.append((idx, context_ranker(path), node))
            return PropVar(idx)
        if isinstance(node, Not):
            return Not(build(node.arg, path + ((node, 0),)))
        if isinstance(node, (Or, And, Implies)):
            return type(node)(build(node.left, path + ((node, 0),)),
                              build(node.right, path + ((node, 1),)))
        if isinstance(node, _JUMPS):
            return build(node.arg, path + ((node, 0),))
        raise TypeError(f"not a letter-jump formula: {node!r}")

    w = build(phi, ())
    return WitnessSystem(w, tuple(bindings))


def eval_witness(w, mu: dict[int, bool]) -> bool:
    if isinstance(w, PropVar):
        return mu[w.index]
    if isinstance(w, Not):
        return not eval_witness(w.arg, mu)
    if isinstance(w, Or):
        return eval_witness(w.left, mu) or eval_witness(w.right, mu)
    if isinstance(w, And):
        return eval_witness(w.left, mu) and eval_witness(w.right, mu)
    if isinstance(w, Implies):
        return (not eval_witness(w.left, mu)) or eval_witness(w.right, mu)
    raise TypeError(f"not a witness node: {w!r}")


def witness_valuation(word: Word, system: WitnessSystem) -> dict[int, bool]:
    """p_i is true iff the binding's ranker lands on a defined position whose
    letter propositionally satisfies the bound atomic formula."""
    mu = {}
    for idx, rk, beta in system.bindings:
        j = lpos(word, rk)
        if j is None:
            mu[idx] = False
        elif isinstance(beta, Top):
            mu[idx] = True
        else:
            mu[idx] = word[j - 1] == beta.letter
    return mu


def fast_check(word: Word, phi: Formula, system: WitnessSystem | None = None) -> bool:
    """Truth at position 1 via ranker positions; O(|w| * |phi|^3)."""
    if system is None:
        system = witness_system(phi)
    return eval_witness(system.witness, witness_valuation(word, system))


def shrink_model(word: Word, phi: Formula) -> Word:
    """Project the model onto its ranker positions; length <= Size(phi)."""
    if not fast_check(word, phi):
        raise NotAModelError(f"{word!r} does not satisfy the formula at position 1")
    positions = {lpos(word, rk) for rk in rankerset(phi)}
    positions.discard(None)
    positions.add(1)
    return "".join(word[p - 1] for p in sorted(positions))


def search_alphabet(phi: Formula) -> str:
    """Letters of the formula plus one fresh representative letter."""
    used = formula_letters(phi)
    for c in "abcdefghijklmnopqrstuvwxyz":
        if c not in used:
            return "".join(sorted(used | {c}))
    return "".join(sorted(used))


def sat_xy(phi: Formula, randomized: bool = False, seed: int = 0,
           samples: int = 2000) -> Word | None:
    """Satisfiability by small-model search: words of length 1..Size(phi)
    over the search alphabet, in length-lex order; None means unsatisfiable.

    With `randomized`, each length is sampled instead of enumerated, which
    trades completeness for speed on large sizes.
    """
    bound = size(phi)
    sigma = search_alphabet(phi)
    system = witness_system(phi)
    if randomized:
        rng = random.Random(seed)
        for length in range(1, bound + 1):
            for _ in range(samples):
                w = "".join(rng.choice(sigma) for _ in range(length))
                if fast_check(w, phi, system):
                    return w
        return None
    for length in range(1, bound + 1):
        for tup in itertools.product(sigma, repeat=length):
            w = "".join(tup)
            if fast_check(w, phi, system):
                return w
    return None
