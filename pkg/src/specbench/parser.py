"""Concrete syntax for LTL formulas.

Tokens: ``!  &  |  ->  U  F  G  X  true  false  ( )`` plus lowercase
proposition names.  Precedence, tightest first: unary (``!``/``F``/``G``/``X``)
then ``U`` then ``&`` then ``|`` then ``->``; binary operators associate to
the right.  ``X`` is only accepted when ``allow_next=True`` (it is an
internal operator, not part of the user-facing specification language).

Spec files are UTF-8 text with one ``<id> <TAB> <formula>`` record per line;
``#`` starts a comment line.
"""

from __future__ import annotations

import re
from typing import Iterable

from .ltl import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    LtlError,
    Next,
    Not,
    Or,
    Until,
    UnknownProposition,
    check_prop_name,
)

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<punct>[!&|()])|(?P<kw>[UFGX])(?![a-zA-Z0-9_])"
    r"|(?P<name>[a-z][a-z0-9_]*)|(?P<bad>\S))"
)


class FormulaSyntaxError(LtlError):
    """Raised on malformed formula text; carries position and expectation."""

    def __init__(self, position: int, expected: str, found: str = ""):
        detail = f"at position {position}: expected {expected}"
        if found:
            detail += f", found {found!r}"
        super().__init__(detail)
        self.position = position
        self.expected = expected


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group("bad"):
            raise FormulaSyntaxError(m.start("bad"), "a token", m.group("bad"))
        if m.group("arrow"):
            tokens.append(_Token("->", "->", m.start("arrow")))
        elif m.group("punct"):
            tokens.append(_Token(m.group("punct"), m.group("punct"), m.start("punct")))
        elif m.group("kw"):
            tokens.append(_Token(m.group("kw"), m.group("kw"), m.start("kw")))
        else:
            name = m.group("name")
            kind = name if name in ("true", "false") else "name"
            tokens.append(_Token(kind, name, m.start("name")))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], alphabet: frozenset[str] | None, allow_next: bool):
        self.tokens = tokens
        self.i = 0
        self.alphabet = alphabet
        self.allow_next = allow_next

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise FormulaSyntaxError(tok.pos, kind, tok.text or "end of input")
        return self.take()

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek().kind == "->":
            self.take()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        if self.peek().kind == "|":
            self.take()
            return Or(left, self.parse_or())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_until()
        if self.peek().kind == "&":
            self.take()
            return And(left, self.parse_and())
        return left

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        if self.peek().kind == "U":
            self.take()
            return Until(left, self.parse_until())
        return left

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "!":
            self.take()
            return Not(self.parse_unary())
        if tok.kind == "F":
            self.take()
            return Eventually(self.parse_unary())
        if tok.kind == "G":
            self.take()
            return Always(self.parse_unary())
        if tok.kind == "X":
            if not self.allow_next:
                raise FormulaSyntaxError(tok.pos, "a formula (X is not enabled)", "X")
            self.take()
            return Next(self.parse_unary())
        if tok.kind == "true":
            self.take()
            return TRUE
        if tok.kind == "false":
            self.take()
            return FALSE
        if tok.kind == "name":
            self.take()
            name = check_prop_name(tok.text)
            if self.alphabet is not None and name not in self.alphabet:
                raise UnknownProposition(name)
            return Atom(name)
        if tok.kind == "(":
            self.take()
            inner = self.parse_implies()
            self.expect(")")
            return inner
        raise FormulaSyntaxError(tok.pos, "a formula", tok.text or "end of input")


def parse(
    text: str,
    alphabet: Iterable[str] | None = None,
    *,
    allow_next: bool = False,
) -> Formula:
    """Parse formula text.  ``alphabet=None`` leaves the alphabet open;
    otherwise every atom must belong to it."""
    closed = frozenset(alphabet) if alphabet is not None else None
    parser = _Parser(_tokenize(text), closed, allow_next)
    phi = parser.parse_implies()
    end = parser.peek()
    if end.kind != "end":
        raise FormulaSyntaxError(end.pos, "end of input", end.text)
    return phi


def read_spec_file(path) -> list[tuple[str, str]]:
    """Read ``<id> TAB <formula>`` records, skipping comments and blanks."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" not in line:
                raise LtlError(f"{path}:{lineno}: expected '<id><TAB><formula>'")
            fields = line.split("\t")
            # extra columns (family/params metadata) are tolerated and ignored
            records.append((fields[0].strip(), fields[1].strip()))
    return records


def write_spec_file(path, records: Iterable[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for spec_id, text in records:
            fh.write(f"{spec_id}\t{text}\n")
