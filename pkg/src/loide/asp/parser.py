"""Recursive-descent parser for the engine's ASP subset.

Grammar, roughly::

    program    : statement* EOF
    statement  : rule "."
    rule       : head ( ":-" body )?  |  ":-" body
    head       : atom ( "|" atom )*
    body       : literal ( "," literal )*
    literal    : "not" atom | atom | term CMP term
    atom       : IDENT ( "(" term ( "," term )* ")" )?
    term       : INTEGER | VARIABLE | IDENT

`%` starts a comment running to end of line.  `not` is a reserved word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .syntax import Atom, AtomLiteral, Comparison, Constant, Integer, Literal, Rule, Term, Variable

_PUNCT = (":-", "!=", "<=", ">=", ".", ",", "|", "(", ")", "=", "<", ">")
_COMPARISON = {"=", "!=", "<", "<=", ">", ">="}


@dataclass(frozen=True)
class Token:
    kind: str  # ident | variable | integer | punct | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch.islower() and ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("ident", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isupper() and ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("variable", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("integer", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(Token("punct", punct, start_line, start_col))
                col += len(punct)
                i += len(punct)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    def expect_punct(self, text: str) -> Token:
        tok = self.tok
        if tok.kind != "punct" or tok.text != text:
            shown = tok.text if tok.kind != "eof" else "end of input"
            self.error(f"expected {text!r}, found {shown!r}")
        return self.advance()

    def program(self) -> list[Rule]:
        rules = []
        while self.tok.kind != "eof":
            rules.append(self.rule())
        return rules

    def rule(self) -> Rule:
        head: list[Atom] = []
        if self.tok.kind == "punct" and self.tok.text == ":-":
            self.advance()
            body = self.body()
        else:
            head.append(self.atom())
            while self.tok.kind == "punct" and self.tok.text == "|":
                self.advance()
                head.append(self.atom())
            body = ()
            if self.tok.kind == "punct" and self.tok.text == ":-":
                self.advance()
                body = self.body()
        self.expect_punct(".")
        return Rule(tuple(head), tuple(body))

    def body(self) -> tuple[Literal, ...]:
        literals = [self.literal()]
        while self.tok.kind == "punct" and self.tok.text == ",":
            self.advance()
            literals.append(self.literal())
        return tuple(literals)

    def literal(self) -> Literal:
        tok = self.tok
        if tok.kind == "ident" and tok.text == "not":
            self.advance()
            return AtomLiteral(self.atom(), negated=True)
        if tok.kind in ("integer", "variable"):
            left = self.term()
            return self.comparison(left)
        if tok.kind == "ident":
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text in _COMPARISON:
                left = Constant(self.advance().text)
                return self.comparison(left)
            atom = self.atom()
            if self.tok.kind == "punct" and self.tok.text in _COMPARISON:
                self.error("comparison operands must be plain terms, not atoms")
            return AtomLiteral(atom)
        self.error("expected a literal")

    def comparison(self, left: Term) -> Comparison:
        tok = self.tok
        if tok.kind != "punct" or tok.text not in _COMPARISON:
            self.error("expected a comparison operator")
        op = self.advance().text
        return Comparison(op, left, self.term())

    def atom(self) -> Atom:
        tok = self.tok
        if tok.kind != "ident":
            shown = tok.text if tok.kind != "eof" else "end of input"
            self.error(f"expected a predicate name, found {shown!r}")
        if tok.text == "not":
            self.error("'not' is a reserved word")
        name = self.advance().text
        args: list[Term] = []
        if self.tok.kind == "punct" and self.tok.text == "(":
            self.advance()
            args.append(self.term())
            while self.tok.kind == "punct" and self.tok.text == ",":
                self.advance()
                args.append(self.term())
            self.expect_punct(")")
        return Atom(name, tuple(args))

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "integer":
            self.advance()
            return Integer(int(tok.text))
        if tok.kind == "variable":
            self.advance()
            return Variable(tok.text)
        if tok.kind == "ident":
            if tok.text == "not":
                self.error("'not' is a reserved word")
            self.advance()
            return Constant(tok.text)
        shown = tok.text if tok.kind != "eof" else "end of input"
        self.error(f"expected a term, found {shown!r}")


def parse(text: str) -> list[Rule]:
    """Parse program text into rules in source order.

    Raises ParseError with the line and column of the first failure.
    """
    return _Parser(tokenize(text)).program()
