"""Concrete ASCII grammar: tokenizer, recursive-descent parser and printer.

The grammar is the repository's wire format; the EBNF appendix in README.md
documents it.  One union grammar covers all fragments; `parse_formula` then
validates the AST against the requested fragment.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import counting
from .formulas import (
    Alo, Always, And, Atom, BSince, BUntil, ChopF, ChopFp, ChopL, ChopLm, Ep,
    Formula, Future, GAnd, GNot, GOr, GSince, GUntil, Guard, Histor, Implies, Modulo,
    Next, NextPos, Not, NowG, OMinus, OMinusBar, OPlus, OPlusBar, Or, Past,
    Prev, PrevPos, Pt, Simple, Since, Sp, Threshold, Top, Unit, Until, WXa,
    WYa, XGuard, Xa, YGuard, Ya, fragment_violation,
)


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected, found: str):
        self.line = line
        self.col = col
        self.expected = tuple(expected) if not isinstance(expected, str) else (expected,)
        self.found = found
        super().__init__(
            f"{line}:{col}: expected {' or '.join(self.expected)}, found {found}")


class FragmentError(Exception):
    pass


class EmptyWordError(Exception):
    pass


KEYWORDS = {
    "TOP", "PT", "UNIT", "ALO", "NEXT", "PREV", "SP", "EP",
    "OPLUS", "OMINUS", "OPLUSB", "OMINUSB", "NOW",
    "X", "Y", "F", "P", "G", "H", "U", "S", "XW", "YW", "FP", "LM", "L",
}


@dataclass
class Token:
    kind: str  # KW WORD NUM PUNCT EOF
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if c.isupper():
            j = i
            while j < n and text[j].isupper():
                j += 1
            word = text[i:j]
            if word not in KEYWORDS:
                raise ParseError(line, start_col, "a known operator", word)
            toks.append(Token("KW", word, line, start_col))
            col += j - i
            i = j
            continue
        if c.islower():
            j = i
            while j < n and text[j].islower():
                j += 1
            toks.append(Token("WORD", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("NUM", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c == "-" and i + 1 < n and text[i + 1] == ">":
            toks.append(Token("PUNCT", "->", line, start_col))
            i += 2
            col += 2
            continue
        if c == "<" and i + 1 < n and text[i + 1] == "=":
            toks.append(Token("PUNCT", "<=", line, start_col))
            i += 2
            col += 2
            continue
        if c in "()!&|{}[]<>=,#-":
            toks.append(Token("PUNCT", c, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(line, start_col, "a token", repr(c))
    toks.append(Token("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> Token:
        return self.toks[self.pos]

    def peek2(self) -> Token:
        return self.toks[min(self.pos + 1, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, expected) -> ParseError:
        t = self.peek()
        found = t.value if t.kind != "EOF" else "end of input"
        return ParseError(t.line, t.col, expected, found)

    def expect(self, kind: str, value: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind or (value is not None and t.value != value):
            raise self.fail(value if value is not None else kind)
        return self.next()

    def at(self, kind: str, value: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (value is None or t.value == value)

    # formulas ---------------------------------------------------------

    def formula(self) -> Formula:
        left = self.or_()
        if self.at("PUNCT", "->"):
            self.next()
            return Implies(left, self.formula())
        return left

    def or_(self) -> Formula:
        out = self.and_()
        while self.at("PUNCT", "|"):
            self.next()
            out = Or(out, self.and_())
        return out

    def and_(self) -> Formula:
        out = self.bin()
        while self.at("PUNCT", "&"):
            self.next()
            out = And(out, self.bin())
        return out

    _CHOPS = {"F": ChopF, "L": ChopL, "FP": ChopFp, "LM": ChopLm}

    def bin(self) -> Formula:
        left = self.unary()
        t = self.peek()
        if t.kind == "KW" and t.value in ("U", "S"):
            self.next()
            right = self.bin()
            return Until(left, right) if t.value == "U" else Since(left, right)
        if (t.kind == "KW" and t.value in self._CHOPS
                and self.peek2().kind == "PUNCT" and self.peek2().value == "{"):
            self.next()
            a = self.letter_set(single=True)
            right = self.bin()
            return self._CHOPS[t.value](left, a, right)
        return left

    def letter_set(self, single: bool = False, bracket: str = "{"):
        close = "}" if bracket == "{" else "]"
        self.expect("PUNCT", bracket)
        letters = ""
        if self.at("WORD"):
            letters = self.next().value
        self.expect("PUNCT", close)
        if single:
            if len(letters) != 1:
                raise self.fail("a single letter")
            return letters
        return frozenset(letters)

    def unary(self) -> Formula:
        t = self.peek()
        if t.kind == "PUNCT" and t.value == "!":
            self.next()
            return Not(self.unary())
        if t.kind == "PUNCT" and t.value == "<":
            self.next()
            g = self.guard()
            self.expect("PUNCT", ">")
            op = self.expect("KW")
            if op.value == "U":
                return GUntil(g, self.unary())
            if op.value == "S":
                return GSince(g, self.unary())
            raise ParseError(op.line, op.col, ("U", "S"), op.value)
        if t.kind == "PUNCT" and t.value == "[":
            letters = self.letter_set(bracket="[")
            op = self.expect("KW")
            if op.value == "U":
                return BUntil(letters, self.unary())
            if op.value == "S":
                return BSince(letters, self.unary())
            raise ParseError(op.line, op.col, ("U", "S"), op.value)
        if t.kind == "KW":
            kw = t.value
            if kw in ("X", "Y"):
                nxt = self.peek2()
                if nxt.kind == "PUNCT" and nxt.value == "{":
                    self.next()
                    a = self.letter_set(single=True)
                    node = Xa if kw == "X" else Ya
                    return node(a, self.unary())
                if nxt.kind == "PUNCT" and nxt.value == "[":
                    self.next()
                    self.expect("PUNCT", "[")
                    g = self.formula()
                    self.expect("PUNCT", "]")
                    node = XGuard if kw == "X" else YGuard
                    return node(g, self.unary())
                self.next()
                return Next(self.unary()) if kw == "X" else Prev(self.unary())
            if kw in ("XW", "YW"):
                self.next()
                a = self.letter_set(single=True)
                return (WXa if kw == "XW" else WYa)(a, self.unary())
            simple = {
                "F": Future, "P": Past, "G": Always, "H": Histor,
                "NEXT": NextPos, "PREV": PrevPos, "OPLUS": OPlus,
                "OMINUS": OMinus, "OPLUSB": OPlusBar, "OMINUSB": OMinusBar,
            }
            if kw in simple:
                self.next()
                return simple[kw](self.unary())
            if kw in ("SP", "EP"):
                self.next()
                return (Sp if kw == "SP" else Ep)(self.unary())
            if kw == "NOW":
                self.next()
                self.expect("PUNCT", "(")
                g = self.guard()
                self.expect("PUNCT", ")")
                return NowG(g)
        return self.atomic()

    def atomic(self) -> Formula:
        t = self.peek()
        if t.kind == "KW":
            if t.value == "TOP":
                self.next()
                return Top()
            if t.value == "PT":
                self.next()
                return Pt()
            if t.value == "UNIT":
                self.next()
                return Unit()
            if t.value == "ALO":
                self.next()
                return Alo(self.letter_set())
        if t.kind == "WORD":
            if len(t.value) != 1:
                raise ParseError(t.line, t.col, "a single-letter atom", t.value)
            self.next()
            return Atom(t.value)
        if t.kind == "PUNCT" and t.value == "(":
            self.next()
            out = self.formula()
            self.expect("PUNCT", ")")
            return out
        raise self.fail("a formula")

    # guards -----------------------------------------------------------

    def guard(self) -> Guard:
        out = self.gand()
        while self.at("PUNCT", "|"):
            self.next()
            out = GOr(out, self.gand())
        return out

    def gand(self) -> Guard:
        out = self.gnot()
        while self.at("PUNCT", "&"):
            self.next()
            out = GAnd(out, self.gnot())
        return out

    def gnot(self) -> Guard:
        if self.at("PUNCT", "!"):
            self.next()
            return GNot(self.gnot())
        return self.gatom()

    def gatom(self) -> Guard:
        t = self.peek()
        if t.kind == "PUNCT" and t.value == "(":
            self.next()
            out = self.guard()
            self.expect("PUNCT", ")")
            return out
        if t.kind == "WORD" and t.value == "sum":
            return self.modulo()
        if t.kind == "PUNCT" and t.value == "#":
            self.next()
            letters = self.letter_set(bracket="[")
            op = self.peek()
            if op.kind == "PUNCT" and op.value == "=":
                self.next()
                c = int(self.expect("NUM").value)
                if c == 0:
                    return Simple(letters)
                return Threshold(letters, c, c + 1)
            if op.kind == "PUNCT" and op.value in ("<", "<="):
                self.next()
                u = int(self.expect("NUM").value)
                hi = u if op.value == "<" else u + 1
                return Threshold(letters, 0, hi)
            raise self.fail(("=", "<", "<="))
        if t.kind == "NUM":
            tval = int(self.next().value)
            op = self.expect("PUNCT")
            if op.value not in ("<", "<="):
                raise ParseError(op.line, op.col, ("<", "<="), op.value)
            lo = tval if op.value == "<=" else tval + 1
            self.expect("PUNCT", "#")
            letters = self.letter_set(bracket="[")
            nxt = self.peek()
            if nxt.kind == "PUNCT" and nxt.value in ("<", "<="):
                self.next()
                u = int(self.expect("NUM").value)
                hi = u if nxt.value == "<" else u + 1
                return Threshold(letters, lo, hi)
            return Threshold(letters, lo, None)
        raise self.fail("a guard")

    def modulo(self) -> Guard:
        self.expect("WORD", "sum")
        self.expect("PUNCT", "(")
        terms = [self.modterm()]
        while self.at("PUNCT", ","):
            self.next()
            terms.append(self.modterm())
        self.expect("PUNCT", ")")
        self.expect("WORD", "in")
        self.expect("PUNCT", "{")
        residues = [int(self.expect("NUM").value)]
        while self.at("PUNCT", ","):
            self.next()
            residues.append(int(self.expect("NUM").value))
        self.expect("PUNCT", "}")
        self.expect("WORD", "mod")
        q = int(self.expect("NUM").value)
        t = self.peek()
        try:
            return Modulo(tuple(terms), frozenset(residues), q)
        except ValueError as e:
            raise ParseError(t.line, t.col, "a well-formed modulo guard", str(e))

    def modterm(self) -> tuple[int, frozenset[str]]:
        sign = 1
        if self.at("PUNCT", "-"):
            self.next()
            sign = -1
        coeff = 1
        if self.at("NUM"):
            coeff = int(self.next().value)
        self.expect("PUNCT", "#")
        return (sign * coeff, self.letter_set(bracket="["))


def parse_formula(text: str, logic: str) -> Formula:
    """Parse against the union grammar, then check fragment membership."""
    p = _Parser(tokenize(text))
    phi = p.formula()
    if not p.at("EOF"):
        raise p.fail("end of input")
    reason = fragment_violation(phi, logic)
    if reason is not None:
        raise FragmentError(reason)
    return phi


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_LEVEL_IMP, _LEVEL_OR, _LEVEL_AND, _LEVEL_BIN, _LEVEL_UNARY, _LEVEL_ATOM = range(1, 7)


def _letters_str(letters: frozenset[str]) -> str:
    return "".join(sorted(letters))


def print_guard(g: Guard) -> str:
    return _pg(g, 0)


def _pg(g: Guard, level: int) -> str:
    if isinstance(g, Simple):
        return f"#[{_letters_str(g.letters)}]=0"
    if isinstance(g, Threshold):
        b = _letters_str(g.letters)
        if g.hi is None:
            return f"{g.lo}<=#[{b}]"
        if g.hi == g.lo + 1 and g.lo >= 1:
            return f"#[{b}]={g.lo}"
        if g.lo == 0:
            return f"#[{b}]<{g.hi}"
        return f"{g.lo}<=#[{b}]<{g.hi}"
    if isinstance(g, Modulo):
        terms = ",".join(f"{c}#[{_letters_str(b)}]" for c, b in g.terms)
        rs = ",".join(str(r) for r in sorted(g.residues))
        return f"sum({terms}) in {{{rs}}} mod {g.modulus}"
    if isinstance(g, GNot):
        return "!" + _pg(g.arg, 3)
    if isinstance(g, GAnd):
        s = f"{_pg(g.left, 2)} & {_pg(g.right, 3)}"
        return f"({s})" if level > 2 else s
    if isinstance(g, GOr):
        s = f"{_pg(g.left, 1)} | {_pg(g.right, 2)}"
        return f"({s})" if level > 1 else s
    raise TypeError(f"unknown guard {g!r}")


def print_formula(phi: Formula, parenthesize: bool = False) -> str:
    """Canonical text; `parenthesize` wraps every compound node."""
    return _pf(phi, _LEVEL_IMP, parenthesize)


def _wrap(s: str, lvl: int, minlvl: int, always: bool) -> str:
    if always or lvl < minlvl:
        return f"({s})"
    return s


def _pf(phi: Formula, minlvl: int, full: bool) -> str:
    if isinstance(phi, Top):
        return "TOP"
    if isinstance(phi, Atom):
        return phi.letter
    if isinstance(phi, Pt):
        return "PT"
    if isinstance(phi, Unit):
        return "UNIT"
    if isinstance(phi, Alo):
        return f"ALO{{{_letters_str(phi.letters)}}}"
    if isinstance(phi, NowG):
        return f"NOW({print_guard(phi.guard)})"
    if isinstance(phi, Implies):
        s = f"{_pf(phi.left, _LEVEL_OR, full)} -> {_pf(phi.right, _LEVEL_IMP, full)}"
        return _wrap(s, _LEVEL_IMP, minlvl, full)
    if isinstance(phi, Or):
        s = f"{_pf(phi.left, _LEVEL_OR, full)} | {_pf(phi.right, _LEVEL_AND, full)}"
        return _wrap(s, _LEVEL_OR, minlvl, full)
    if isinstance(phi, And):
        s = f"{_pf(phi.left, _LEVEL_AND, full)} & {_pf(phi.right, _LEVEL_BIN, full)}"
        return _wrap(s, _LEVEL_AND, minlvl, full)
    if isinstance(phi, (Until, Since)):
        op = "U" if isinstance(phi, Until) else "S"
        s = f"{_pf(phi.left, _LEVEL_UNARY, full)} {op} {_pf(phi.right, _LEVEL_BIN, full)}"
        return _wrap(s, _LEVEL_BIN, minlvl, full)
    if isinstance(phi, (ChopF, ChopL, ChopFp, ChopLm)):
        op = {ChopF: "F", ChopL: "L", ChopFp: "FP", ChopLm: "LM"}[type(phi)]
        s = (f"{_pf(phi.left, _LEVEL_UNARY, full)} {op}{{{phi.letter}}} "
             f"{_pf(phi.right, _LEVEL_BIN, full)}")
        return _wrap(s, _LEVEL_BIN, minlvl, full)
    if isinstance(phi, (GUntil, GSince)):
        op = "U" if isinstance(phi, GUntil) else "S"
        s = f"<{print_guard(phi.guard)}> {op} {_pf(phi.arg, _LEVEL_UNARY, full)}"
        return _wrap(s, _LEVEL_BIN, minlvl, full)
    if isinstance(phi, (BUntil, BSince)):
        op = "U" if isinstance(phi, BUntil) else "S"
        s = f"[{_letters_str(phi.letters)}] {op} {_pf(phi.arg, _LEVEL_UNARY, full)}"
        return _wrap(s, _LEVEL_BIN, minlvl, full)
    if isinstance(phi, Not):
        s = f"!{_pf(phi.arg, _LEVEL_UNARY, full)}"
        return _wrap(s, _LEVEL_UNARY, minlvl, full)
    if isinstance(phi, (Xa, Ya, WXa, WYa)):
        op = {Xa: "X", Ya: "Y", WXa: "XW", WYa: "YW"}[type(phi)]
        s = f"{op}{{{phi.letter}}} {_pf(phi.arg, _LEVEL_UNARY, full)}"
        return _wrap(s, _LEVEL_UNARY, minlvl, full)
    if isinstance(phi, (XGuard, YGuard)):
        op = "X" if isinstance(phi, XGuard) else "Y"
        s = f"{op}[{_pf(phi.guard, _LEVEL_IMP, False)}] {_pf(phi.arg, _LEVEL_UNARY, full)}"
        return _wrap(s, _LEVEL_UNARY, minlvl, full)
    if isinstance(phi, (Sp, Ep)):
        op = "SP" if isinstance(phi, Sp) else "EP"
        return f"{op}({_pf(phi.arg, _LEVEL_IMP, full)})"
    prefix = {
        NextPos: "NEXT", PrevPos: "PREV", OPlus: "OPLUS", OMinus: "OMINUS",
        OPlusBar: "OPLUSB", OMinusBar: "OMINUSB", Next: "X", Prev: "Y",
        Future: "F", Past: "P", Always: "G", Histor: "H",
    }
    op = prefix.get(type(phi))
    if op is not None:
        s = f"{op} {_pf(phi.arg, _LEVEL_UNARY, full)}"
        return _wrap(s, _LEVEL_UNARY, minlvl, full)
    raise TypeError(f"cannot print {phi!r}")


# ---------------------------------------------------------------------------
# words and Kripke structures
# ---------------------------------------------------------------------------

def parse_word(text: str) -> str:
    """A word is one line of letters; must be nonempty."""
    w = text.strip()
    if not w:
        raise EmptyWordError("words must be nonempty")
    if any(c.isspace() for c in w):
        raise ParseError(1, 1, "a single word without spaces", w)
    return w


def parse_words(text: str) -> list[str]:
    """Word file: one word per line, blank lines and # comments skipped."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_word(line))
    return out


def parse_kripke(text: str) -> counting.KripkeStructure:
    """Line-oriented sections: states, label, edge, initial, final."""
    states: list[str] = []
    labels: dict[str, str] = {}
    edges: set[tuple[str, str]] = set()
    initial: set[str] = set()
    final: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw, args = parts[0], parts[1:]
        if kw == "states":
            states.extend(args)
        elif kw == "label":
            if len(args) != 2 or len(args[1]) != 1:
                raise ParseError(lineno, 1, "label STATE LETTER", line)
            labels[args[0]] = args[1]
        elif kw == "edge":
            if len(args) != 2:
                raise ParseError(lineno, 1, "edge FROM TO", line)
            edges.add((args[0], args[1]))
        elif kw == "initial":
            initial.update(args)
        elif kw == "final":
            final.update(args)
        else:
            raise ParseError(lineno, 1,
                             ("states", "label", "edge", "initial", "final"), kw)
    declared = set(states)
    for s in labels:
        if s not in declared:
            raise ParseError(1, 1, "a declared state in label", s)
    for (u, v) in edges:
        if u not in declared or v not in declared:
            raise ParseError(1, 1, "declared states in edge", f"{u}->{v}")
    missing = declared - set(labels)
    if missing:
        raise ParseError(1, 1, "a label for every state", ",".join(sorted(missing)))
    if not initial <= declared or not final <= declared:
        raise ParseError(1, 1, "declared initial/final states", line)
    if not initial or not final:
        raise ParseError(1, 1, "at least one initial and one final state", "none")
    return counting.KripkeStructure(
        states=tuple(states), labels=dict(labels),
        edges=frozenset(edges), initial=frozenset(initial), final=frozenset(final))
