"""Concrete syntax.

Term grammar (ASCII; lambda/mu/bottom/arrow have unicode aliases)::

    term    := "\\" IDENT "." term
             | "#" IDENT "." term
             | "[" IDENT "]" term
             | "(" term ")" term        -- Krivine application, left-nested
             | "(" term ")"
             | IDENT

    type    := tatom ("->" type)?       -- right-associative
    tatom   := ATOM | "_|_" | "(" type ")"

Lambda-variable and mu-variable names live in disjoint tables: a name after
``\\`` (or at a variable occurrence) is a lambda variable, a name after ``#``
or inside ``[ ]`` is a mu variable.  ATOM is an uppercase-initial identifier.

Judgments for the CLI are written ``x:A, y:B |- M : C ; a:D`` with either
context possibly empty.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    App,
    Arrow,
    Atom,
    BOT,
    Bracket,
    Lam,
    LamVar,
    Mu,
    MuVar,
    Term,
    Type,
    Var,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected=()):
        self.line = line
        self.col = col
        self.expected = frozenset(expected)
        super().__init__(f"{line}:{col}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_PUNCT = {
    "\\": "LAMBDA",
    "λ": "LAMBDA",
    "#": "HASH",
    "µ": "HASH",
    "μ": "HASH",
    ".": "DOT",
    "[": "LBRACK",
    "]": "RBRACK",
    "(": "LPAREN",
    ")": "RPAREN",
    ":": "COLON",
    ",": "COMMA",
    ";": "SEMI",
    "⊥": "BOT",
    "→": "ARROW",
    "⊢": "TURNSTILE",
}


def _is_ident_start(c: str) -> bool:
    return c.isalpha() and c not in _PUNCT or c == "_"


def _is_ident_char(c: str) -> bool:
    return (c.isalnum() and c not in _PUNCT) or c in "_'"


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if text.startswith("_|_", i):
            toks.append(Token("BOT", "_|_", line, col))
            i, col = i + 3, col + 3
            continue
        if text.startswith("->", i):
            toks.append(Token("ARROW", "->", line, col))
            i, col = i + 2, col + 2
            continue
        if text.startswith("|-", i):
            toks.append(Token("TURNSTILE", "|-", line, col))
            i, col = i + 2, col + 2
            continue
        if c in _PUNCT:
            toks.append(Token(_PUNCT[c], c, line, col))
            i, col = i + 1, col + 1
            continue
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            toks.append(Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("EOF", "", line, col))
    return toks


_TERM_START = ("LAMBDA", "HASH", "LBRACK", "LPAREN", "IDENT")


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.tok
        if t.kind != kind:
            raise ParseError(
                f"expected {kind}, found {t.text or 'end of input'!r}",
                t.line, t.col, expected={kind},
            )
        return self.advance()

    def at_end(self) -> bool:
        return self.tok.kind == "EOF"

    # -- terms --------------------------------------------------------------

    def term(self) -> Term:
        t = self.tok
        if t.kind == "LAMBDA":
            self.advance()
            name = self.expect("IDENT").text
            self.expect("DOT")
            return Lam(LamVar(name), self.term())
        if t.kind == "HASH":
            self.advance()
            name = self.expect("IDENT").text
            self.expect("DOT")
            return Mu(MuVar(name), self.term())
        if t.kind == "LBRACK":
            self.advance()
            name = self.expect("IDENT").text
            self.expect("RBRACK")
            return Bracket(MuVar(name), self.term())
        if t.kind == "IDENT":
            self.advance()
            return Var(LamVar(t.text))
        if t.kind == "LPAREN":
            self.advance()
            inner = self.term()
            self.expect("RPAREN")
            if self.tok.kind in _TERM_START:
                # Krivine application: the argument extends maximally
                return App(inner, self.term())
            return inner
        raise ParseError(
            f"expected a term, found {t.text or 'end of input'!r}",
            t.line, t.col, expected=set(_TERM_START),
        )

    # -- types --------------------------------------------------------------

    def type_(self) -> Type:
        left = self.type_atom()
        if self.tok.kind == "ARROW":
            self.advance()
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> Type:
        t = self.tok
        if t.kind == "BOT":
            self.advance()
            return BOT
        if t.kind == "IDENT":
            if not t.text[0].isupper():
                raise ParseError(
                    f"type atoms start uppercase, found {t.text!r}",
                    t.line, t.col, expected={"ATOM"},
                )
            self.advance()
            return Atom(t.text)
        if t.kind == "LPAREN":
            self.advance()
            inner = self.type_()
            self.expect("RPAREN")
            return inner
        raise ParseError(
            f"expected a type, found {t.text or 'end of input'!r}",
            t.line, t.col, expected={"ATOM", "BOT", "LPAREN"},
        )

    # -- contexts and judgments ----------------------------------------------

    def bindings(self) -> list[tuple[str, Type]]:
        out = [self.binding()]
        while self.tok.kind == "COMMA":
            self.advance()
            out.append(self.binding())
        return out

    def binding(self) -> tuple[str, Type]:
        name = self.expect("IDENT").text
        self.expect("COLON")
        return name, self.type_()

    def finish(self):
        if not self.at_end():
            t = self.tok
            raise ParseError(
                f"trailing input starting at {t.text!r}", t.line, t.col,
                expected={"EOF"},
            )


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


def parse_type(text: str) -> Type:
    p = _Parser(text)
    ty = p.type_()
    p.finish()
    return ty


def parse_term_seq(text: str) -> tuple[Term, ...]:
    """Semicolon-separated term sequence; the empty string is the empty
    sequence."""
    if not text.strip():
        return ()
    p = _Parser(text)
    out = [p.term()]
    while p.tok.kind == "SEMI":
        p.advance()
        out.append(p.term())
    p.finish()
    return tuple(out)


def parse_judgment(text: str):
    """Parse ``gamma |- term : type ; theta`` into
    (gamma: dict[LamVar, Type], theta: dict[MuVar, Type], term, type)."""
    p = _Parser(text)
    gamma: dict[LamVar, Type] = {}
    theta: dict[MuVar, Type] = {}
    if p.tok.kind != "TURNSTILE":
        for name, ty in p.bindings():
            v = LamVar(name)
            if v in gamma:
                t = p.tok
                raise ParseError(f"variable {name!r} declared twice", t.line, t.col)
            gamma[v] = ty
    p.expect("TURNSTILE")
    term = p.term()
    p.expect("COLON")
    ty = p.type_()
    if p.tok.kind == "SEMI":
        p.advance()
        for name, mty in p.bindings():
            v = MuVar(name)
            if v in theta:
                t = p.tok
                raise ParseError(f"mu variable {name!r} declared twice", t.line, t.col)
            theta[v] = mty
    p.finish()
    return gamma, theta, term, ty


_RULE_LETTERS = {
    "b": "beta",
    "m": "mu",
    "M": "mu_prime",
    "r": "rho",
    "t": "theta",
    "e": "epsilon",
}


def parse_ruleset(spec: str) -> frozenset[str]:
    """Rule-set letters: b=beta m=mu M=mu' r=rho t=theta e=epsilon."""
    rules = set()
    for c in spec:
        if c not in _RULE_LETTERS:
            raise ValueError(f"unknown rule letter {c!r} (use letters from 'bmMrte')")
        rules.add(_RULE_LETTERS[c])
    if not rules:
        raise ValueError("empty rule set")
    return frozenset(rules)
