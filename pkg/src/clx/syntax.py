"""Tokenizer and the concrete term syntax shared by all source formats."""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    APPLY, DYCASE, LET, PAIRCASE, PAIR_T, S1, S2, SELF, VAR, ZERO_T,
    Apply, DyCase, Let, PairCase, PairT, SelfApply, Succ1, Succ2, Term, Var,
    ZERO_TERM, lit, literal_value,
)

_SYMBOLS = [
    "<->", "->", "/\\", "\\/", "<=", ">=", "!=", "=:", ":=", "-.", "^2",
    "<-", "(", ")", "{", "}", "[", "]", ",", ";", ".", "=", "<", ">",
    "!", "?", "~", "+", "*", "|", ":", "/",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class Token:
    kind: str        # name | num | sym | end
    text: str
    pos: int


def tokenize(text: str, line: int | None = None) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            break
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("num", text[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            toks.append(Token("name", text[i:j], i))
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, i))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r} at column {i}", line)
    toks.append(Token("end", "", n))
    return toks


class TokenStream:
    def __init__(self, tokens: list[Token], line: int | None = None):
        self.tokens = tokens
        self.i = 0
        self.line = line

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def at_sym(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "sym" and t.text == text

    def at_name(self, text: str | None = None) -> bool:
        t = self.peek()
        return t.kind == "name" and (text is None or t.text == text)

    def eat_sym(self, text: str) -> None:
        if not self.at_sym(text):
            raise ParseError(f"expected {text!r}, found {self.peek().text!r}", self.line)
        self.next()

    def eat_name(self, text: str | None = None) -> str:
        t = self.peek()
        if t.kind != "name" or (text is not None and t.text != text):
            want = text or "a name"
            raise ParseError(f"expected {want}, found {t.text!r}", self.line)
        self.next()
        return t.text

    def done(self) -> bool:
        return self.peek().kind == "end"

    def expect_done(self) -> None:
        if not self.done():
            raise ParseError(f"trailing input at {self.peek().text!r}", self.line)


# --- term parsing -----------------------------------------------------------
#
# let x = t in u
# case t of { 0 -> a; s1 v -> b; s2 v -> c }
# case t of { 0 -> a; (v,w) -> b }
# additive: + and -. (monus); multiplicative: *; postfix ^2; atoms.
# Arithmetic operators are sugar for the prelude symbols add, monus, mul, sq.

def parse_term(ts: TokenStream) -> Term:
    if ts.at_name("let"):
        ts.next()
        name = ts.eat_name()
        ts.eat_sym("=")
        scr = parse_term(ts)
        ts.eat_name("in")
        body = parse_term(ts)
        return Let(name, scr, body)
    if ts.at_name("case"):
        return _parse_case(ts)
    return _parse_additive(ts)


def _parse_case(ts: TokenStream) -> Term:
    ts.eat_name("case")
    scr = parse_term(ts)
    ts.eat_name("of")
    ts.eat_sym("{")
    if not (ts.peek().kind == "num" and ts.peek().text == "0"):
        raise ParseError("case must start with the 0 branch", ts.line)
    ts.next()
    ts.eat_sym("->")
    zero = parse_term(ts)
    ts.eat_sym(";")
    if ts.at_sym("("):
        ts.next()
        lv = ts.eat_name()
        ts.eat_sym(",")
        rv = ts.eat_name()
        ts.eat_sym(")")
        ts.eat_sym("->")
        pb = parse_term(ts)
        ts.eat_sym("}")
        return PairCase(scr, zero, lv, rv, pb)
    ts.eat_name("s1")
    v1 = ts.eat_name()
    ts.eat_sym("->")
    b1 = parse_term(ts)
    ts.eat_sym(";")
    ts.eat_name("s2")
    v2 = ts.eat_name()
    ts.eat_sym("->")
    b2 = parse_term(ts)
    ts.eat_sym("}")
    return DyCase(scr, zero, v1, b1, v2, b2)


def _parse_additive(ts: TokenStream) -> Term:
    t = _parse_multiplicative(ts)
    while ts.at_sym("+") or ts.at_sym("-."):
        op = ts.next().text
        rhs = _parse_multiplicative(ts)
        t = Apply("add" if op == "+" else "monus", (t, rhs))
    return t


def _parse_multiplicative(ts: TokenStream) -> Term:
    t = _parse_postfix(ts)
    while ts.at_sym("*"):
        ts.next()
        t = Apply("mul", (t, _parse_postfix(ts)))
    return t


def _parse_postfix(ts: TokenStream) -> Term:
    t = _parse_atom(ts)
    while ts.at_sym("^2"):
        ts.next()
        t = Apply("sq", (t,))
    return t


def _parse_atom(ts: TokenStream) -> Term:
    tok = ts.peek()
    if tok.kind == "num":
        ts.next()
        return lit(int(tok.text))
    if tok.kind == "name":
        name = ts.next().text
        if name in ("s1", "s2"):
            inner = _parse_atom(ts)
            return Succ1(inner) if name == "s1" else Succ2(inner)
        if ts.at_sym("("):
            args = _parse_args(ts)
            if name == "self":
                return SelfApply(args)
            return Apply(name, args)
        return Var(name)
    if tok.kind == "sym" and tok.text == "(":
        ts.next()
        first = parse_term(ts)
        if ts.at_sym(","):
            parts = [first]
            while ts.at_sym(","):
                ts.next()
                parts.append(parse_term(ts))
            ts.eat_sym(")")
            t = parts[-1]
            for p in reversed(parts[:-1]):   # (a,b,c) reads as (a,(b,c))
                t = PairT(p, t)
            return t
        ts.eat_sym(")")
        return first
    raise ParseError(f"cannot parse term at {tok.text!r}", ts.line)


def _parse_args(ts: TokenStream) -> tuple[Term, ...]:
    ts.eat_sym("(")
    if ts.at_sym(")"):
        ts.next()
        return ()
    args = [parse_term(ts)]
    while ts.at_sym(","):
        ts.next()
        args.append(parse_term(ts))
    ts.eat_sym(")")
    return tuple(args)


def parse_term_str(text: str, line: int | None = None) -> Term:
    ts = TokenStream(tokenize(text, line), line)
    t = parse_term(ts)
    ts.expect_done()
    return t


# --- term printing ----------------------------------------------------------

_OPS = {"add": ("+", 10), "monus": ("-.", 10), "mul": ("*", 20)}


def show_term(t: Term, self_name: str = "self") -> str:
    return _show(t, 0, self_name)


def _show(t: Term, prec: int, self_name: str) -> str:
    v = literal_value(t)
    if v is not None:
        return str(v)
    tag = t.tag
    if tag == VAR:
        return t.name
    if tag in (S1, S2):
        s = f"s{1 if tag == S1 else 2} {_show(t.inner, 40, self_name)}"
        return f"({s})" if prec >= 40 else s
    if tag == PAIR_T:
        return f"({_show(t.left, 0, self_name)},{_show(t.right, 0, self_name)})"
    if tag == LET:
        s = (f"let {t.bound} = {_show(t.scrutinee, 0, self_name)} "
             f"in {_show(t.body, 0, self_name)}")
        return f"({s})" if prec > 0 else s
    if tag == DYCASE:
        s = (f"case {_show(t.scrutinee, 0, self_name)} of {{0 -> "
             f"{_show(t.zero_branch, 0, self_name)}; s1 {t.one_var} -> "
             f"{_show(t.one_branch, 0, self_name)}; s2 {t.two_var} -> "
             f"{_show(t.two_branch, 0, self_name)}}}")
        return f"({s})" if prec > 0 else s
    if tag == PAIRCASE:
        s = (f"case {_show(t.scrutinee, 0, self_name)} of {{0 -> "
             f"{_show(t.zero_branch, 0, self_name)}; ({t.left_var},{t.right_var}) -> "
             f"{_show(t.pair_branch, 0, self_name)}}}")
        return f"({s})" if prec > 0 else s
    if tag == APPLY:
        if t.symbol in _OPS and len(t.args) == 2:
            sym, level = _OPS[t.symbol]
            left = _show(t.args[0], level - 1, self_name)
            right = _show(t.args[1], level, self_name)
            s = f"{left} {sym} {right}"
            return f"({s})" if prec >= level else s
        if t.symbol == "sq" and len(t.args) == 1:
            return f"{_show(t.args[0], 30, self_name)}^2"
        if not t.args:
            return t.symbol
        inner = ",".join(_show(a, 0, self_name) for a in t.args)
        return f"{t.symbol}({inner})"
    # SELF
    inner = ",".join(_show(a, 0, self_name) for a in t.args)
    return f"{self_name}({inner})"
