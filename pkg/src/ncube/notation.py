"""Move-word grammar, printer and the catalog of named moves.

Grammar (ASCII, whitespace ignored between terms)::

    word   := term+
    term   := atom suffix*
    atom   := FACE | 'C' FACE DIGITS? | '(' word ')' | '[' word ',' word ']'
    suffix := "'" | INT (>= 2)

``CF`` is the innermost slice next to F, ``CF2`` the one on circle 2.
Digits right after a slice name always bind to the circle index, so a power
of a slice move needs parentheses: ``(CF)2``, ``(CF2)2``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotApplicable, NotationError, UnknownName, UnknownToken

FACE_LETTERS = "UDLRFB"


@dataclass(frozen=True)
class Generator:
    face: str
    k: int = 0  # 0 = outer face turn


@dataclass(frozen=True)
class Inverse:
    word: object


@dataclass(frozen=True)
class Power:
    word: object
    exponent: int


@dataclass(frozen=True)
class Sequence:
    items: tuple = ()


@dataclass(frozen=True)
class Commutator:
    left: object
    right: object


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def offset(self):
        return len(self.text[: self.pos].encode("utf-8"))

    def word(self, closers):
        items = []
        while True:
            ch = self.peek()
            if ch == "" or ch in closers:
                break
            items.append(self.term())
        if not items:
            raise NotationError("expected a move", self.offset())
        return items[0] if len(items) == 1 else Sequence(tuple(items))

    def digits(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return self.text[start : self.pos]

    def atom(self):
        ch = self.peek()
        if ch in FACE_LETTERS and ch:
            self.pos += 1
            return Generator(ch, 0)
        if ch == "C":
            self.pos += 1
            face = self.text[self.pos] if self.pos < len(self.text) else ""
            if not face or face not in FACE_LETTERS:
                raise UnknownToken(f"expected a face letter after 'C', got {face!r}", self.offset())
            self.pos += 1
            digits = self.digits()
            k = int(digits) if digits else 1
            if k < 1:
                raise NotationError("slice circle index must be >= 1", self.offset())
            return Generator(face, k)
        if ch == "(":
            self.pos += 1
            inner = self.word(")")
            self.expect(")")
            return inner
        if ch == "[":
            self.pos += 1
            left = self.word(",]")
            self.expect(",")
            right = self.word(",]")
            self.expect("]")
            return Commutator(left, right)
        if ch == "":
            raise NotationError("unexpected end of input", self.offset())
        raise UnknownToken(f"unexpected character {ch!r}", self.offset())

    def expect(self, ch):
        if self.peek() != ch:
            raise NotationError(f"expected {ch!r}", self.offset())
        self.pos += 1

    def term(self):
        node = self.atom()
        while True:
            # suffixes attach without intervening whitespace
            if self.pos >= len(self.text):
                break
            ch = self.text[self.pos]
            if ch == "'":
                self.pos += 1
                node = Inverse(node)
            elif ch.isdigit():
                at = self.offset()
                m = int(self.digits())
                if m < 2:
                    raise NotationError("power exponent must be >= 2", at)
                node = Power(node, m)
            else:
                break
        return node


def parse(text: str):
    """Parse a move word into its expression tree."""
    p = _Parser(text)
    if p.peek() == "":
        return Sequence(())
    node = p.word("")
    if p.peek() != "":
        raise NotationError(f"unexpected {p.peek()!r}", p.offset())
    return node


def _gen_text(g: Generator) -> str:
    if g.k == 0:
        return g.face
    return f"C{g.face}" if g.k == 1 else f"C{g.face}{g.k}"


def _term_text(node) -> str:
    # text safe to use as a term inside a sequence
    if isinstance(node, Sequence):
        return "(" + render(node) + ")"
    return render(node)


def render(word) -> str:
    """Canonical text for a move word; ``parse(render(w)) == w``."""
    if isinstance(word, Generator):
        return _gen_text(word)
    if isinstance(word, Inverse):
        return _term_text(word.word) + "'"
    if isinstance(word, Power):
        inner = word.word
        text = _term_text(inner)
        if (isinstance(inner, Generator) and inner.k > 0) or text[-1].isdigit():
            text = "(" + render(inner) + ")"
        return f"{text}{word.exponent}"
    if isinstance(word, Sequence):
        return " ".join(_term_text(i) for i in word.items)
    if isinstance(word, Commutator):
        return f"[{render(word.left)},{render(word.right)}]"
    raise TypeError(f"not a move word: {word!r}")


def generators_in(word):
    """Yield every generator leaf of a word."""
    if isinstance(word, Generator):
        yield word
    elif isinstance(word, (Inverse, Power)):
        yield from generators_in(word.word)
    elif isinstance(word, Sequence):
        for item in word.items:
            yield from generators_in(item)
    elif isinstance(word, Commutator):
        yield from generators_in(word.left)
        yield from generators_in(word.right)


def inverse_word(word):
    return Inverse(word)


_PARITY = "(CR{k})2 B2 D2 CL{k}' D2 CR{k} D2 CR{k}' D2 F2 CR{k}' F2 CL{k} B2 (CR{k})2"

# Families parameterised by circle index; ``{k}`` is blank for circle 1.
FAMILIES = {
    "z": "[[CF{k},CD{k}],U']",
    "e": "[CL{k}',[L,U']]",
    "w": "[[CR{k}',CD{k}'],U]",
    "parity": _PARITY,
}

CATALOG = {
    "z": FAMILIES["z"].format(k=""),
    "e": FAMILIES["e"].format(k=""),
    "w": FAMILIES["w"].format(k=""),
    "z1": "[[CF,CD],U']",
    "z2": "[[CF2,CD2],U']",
    "p": "[[CF,CD2],U']",
    "e1": "[CL',[L,U']]",
    "e2": "[CL2',[L,U']]",
    "m": _PARITY.format(k=""),
    "n2": _PARITY.format(k="2"),
}


def _k_text(k: int) -> str:
    return "" if k == 1 else str(k)


def _check_circles(word, n: int, label: str):
    K = (n - 3) // 2 if n % 2 else n // 2 - 1
    need = max((g.k for g in generators_in(word)), default=0)
    if need > K:
        raise NotApplicable(f"{label} needs circle {need}, the {n}-cube has {K}")
    return word


def named_move(name: str, n: int):
    """A named move from the catalog, checked against the n-cube's circles."""
    if name not in CATALOG:
        raise UnknownName(name)
    return _check_circles(parse(CATALOG[name]), n, name)


def family_move(family: str, k: int, n: int):
    """Member ``k`` of a parameterised family (``z``, ``e``, ``w``, ``parity``)."""
    if family not in FAMILIES:
        raise UnknownName(family)
    return _check_circles(parse(FAMILIES[family].format(k=_k_text(k))), n, f"{family}({k})")


def cross_move(i: int, j: int, n: int):
    """``[[C_{F,i}, C_{D,j}], U']``; for i != j it targets center edges."""
    return _check_circles(parse(f"[[CF{_k_text(i)},CD{_k_text(j)}],U']"), n, f"p({i},{j})")
