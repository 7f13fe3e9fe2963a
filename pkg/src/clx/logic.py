"""Arithmetic formulas, quantifier-complexity classification, and
specifications with their witnessing formulas."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import ParseError, TokenStream, parse_term, show_term, tokenize
from .terms import (
    APPLY, SELF, Apply, Term, Var, free_vars as term_free_vars, literal_value,
    substitute as term_substitute, subterms,
)

_CMP_SYMS = {"<=": "le", ">=": "ge", "!=": "ne", "<": "lt", ">": "gt", "=": "eq"}
_CMP_SHOW = {"le": "<=", "lt": "<", "eq": "=", "ne": "!=", "ge": ">=", "gt": ">"}


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class CmpAtom(Formula):
    op: str          # lt | le | eq | ne | gt | ge
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class PredAtom(Formula):
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class GraphAtom(Formula):
    """t ~ y: the term denotes and its value is y."""
    term: Term
    var: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]


@dataclass(frozen=True)
class Implies(Formula):
    premise: Formula
    conclusion: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class BForall(Formula):
    var: str
    bound: Term
    body: Formula


@dataclass(frozen=True)
class BExists(Formula):
    var: str
    bound: Term
    body: Formula


TRUE = TrueF()
FALSE = FalseF()


def conj(parts: list[Formula]) -> Formula:
    parts = [p for p in parts if not isinstance(p, TrueF)]
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))


def formula_free_vars(f: Formula) -> set[str]:
    if isinstance(f, (TrueF, FalseF)):
        return set()
    if isinstance(f, CmpAtom):
        return term_free_vars(f.lhs) | term_free_vars(f.rhs)
    if isinstance(f, PredAtom):
        out: set[str] = set()
        for a in f.args:
            out |= term_free_vars(a)
        return out
    if isinstance(f, GraphAtom):
        return term_free_vars(f.term) | {f.var}
    if isinstance(f, Not):
        return formula_free_vars(f.body)
    if isinstance(f, (And, Or)):
        out = set()
        for p in f.parts:
            out |= formula_free_vars(p)
        return out
    if isinstance(f, Implies):
        return formula_free_vars(f.premise) | formula_free_vars(f.conclusion)
    if isinstance(f, Iff):
        return formula_free_vars(f.lhs) | formula_free_vars(f.rhs)
    if isinstance(f, (Forall, Exists)):
        return formula_free_vars(f.body) - {f.var}
    # bounded quantifier: the bound is outside the binder
    return term_free_vars(f.bound) | (formula_free_vars(f.body) - {f.var})


def formula_substitute(f: Formula, sub: dict[str, Term]) -> Formula:
    if not sub:
        return f
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, CmpAtom):
        return CmpAtom(f.op, term_substitute(f.lhs, sub), term_substitute(f.rhs, sub))
    if isinstance(f, PredAtom):
        return PredAtom(f.name, tuple(term_substitute(a, sub) for a in f.args))
    if isinstance(f, GraphAtom):
        if f.var in sub:
            repl = sub[f.var]
            if not isinstance(repl, Var):
                raise ValueError("graph atom target must stay a variable")
            return GraphAtom(term_substitute(f.term, sub), repl.name)
        return GraphAtom(term_substitute(f.term, sub), f.var)
    if isinstance(f, Not):
        return Not(formula_substitute(f.body, sub))
    if isinstance(f, And):
        return And(tuple(formula_substitute(p, sub) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(formula_substitute(p, sub) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(formula_substitute(f.premise, sub),
                       formula_substitute(f.conclusion, sub))
    if isinstance(f, Iff):
        return Iff(formula_substitute(f.lhs, sub), formula_substitute(f.rhs, sub))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in sub.items() if k != f.var}
        body = formula_substitute(f.body, inner)
        return Forall(f.var, body) if isinstance(f, Forall) else Exists(f.var, body)
    bound = term_substitute(f.bound, sub)
    inner = {k: v for k, v in sub.items() if k != f.var}
    body = formula_substitute(f.body, inner)
    if isinstance(f, BForall):
        return BForall(f.var, bound, body)
    return BExists(f.var, bound, body)


def replace_term_in_formula(f: Formula, old: Term, new: Term) -> Formula:
    """Literal replacement of a subterm everywhere in the formula's terms."""
    from .terms import replace_subterm

    def rt(t: Term) -> Term:
        return replace_subterm(t, old, new)

    if isinstance(f, CmpAtom):
        return CmpAtom(f.op, rt(f.lhs), rt(f.rhs))
    if isinstance(f, PredAtom):
        return PredAtom(f.name, tuple(rt(a) for a in f.args))
    if isinstance(f, GraphAtom):
        return GraphAtom(rt(f.term), f.var)
    if isinstance(f, Not):
        return Not(replace_term_in_formula(f.body, old, new))
    if isinstance(f, And):
        return And(tuple(replace_term_in_formula(p, old, new) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(replace_term_in_formula(p, old, new) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(replace_term_in_formula(f.premise, old, new),
                       replace_term_in_formula(f.conclusion, old, new))
    if isinstance(f, Iff):
        return Iff(replace_term_in_formula(f.lhs, old, new),
                   replace_term_in_formula(f.rhs, old, new))
    if isinstance(f, Forall):
        return Forall(f.var, replace_term_in_formula(f.body, old, new))
    if isinstance(f, Exists):
        return Exists(f.var, replace_term_in_formula(f.body, old, new))
    if isinstance(f, BForall):
        return BForall(f.var, rt(f.bound), replace_term_in_formula(f.body, old, new))
    if isinstance(f, BExists):
        return BExists(f.var, rt(f.bound), replace_term_in_formula(f.body, old, new))
    return f


def formula_apply_terms(f: Formula) -> list[Term]:
    """All terms appearing in atoms, preorder."""
    out: list[Term] = []

    def walk(g: Formula) -> None:
        if isinstance(g, CmpAtom):
            out.extend((g.lhs, g.rhs))
        elif isinstance(g, PredAtom):
            out.extend(g.args)
        elif isinstance(g, GraphAtom):
            out.append(g.term)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for p in g.parts:
                walk(p)
        elif isinstance(g, Implies):
            walk(g.premise)
            walk(g.conclusion)
        elif isinstance(g, Iff):
            walk(g.lhs)
            walk(g.rhs)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)
        elif isinstance(g, (BForall, BExists)):
            out.append(g.bound)
            walk(g.body)

    walk(f)
    return out


# --- complexity classification -------------------------------------------------

DELTA0, SIGMA1, PI1, PI2, HIGHER = "delta0", "sigma1", "pi1", "pi2", "higher"

_ORDER = {DELTA0: 0, SIGMA1: 1, PI1: 1, PI2: 2, HIGHER: 3}


def _join(a: str, b: str) -> str:
    if a == b:
        return a
    if a == DELTA0:
        return b
    if b == DELTA0:
        return a
    if HIGHER in (a, b):
        return HIGHER
    # sigma1/pi1/pi2 mixtures live in pi2
    return PI2


def _neg_class(c: str) -> str:
    if c == DELTA0:
        return DELTA0
    if c == SIGMA1:
        return PI1
    if c == PI1:
        return SIGMA1
    return HIGHER


def classify(f: Formula, partial: frozenset[str] | set[str] = frozenset()) -> str:
    """Minimal quantifier class; bounded quantifiers are transparent.

    Atoms applying a symbol from `partial` (unknowns, partial functions) count
    as sigma1 since they abbreviate the graph relation.
    """
    if isinstance(f, (TrueF, FalseF)):
        return DELTA0
    if isinstance(f, (CmpAtom, PredAtom)):
        terms = (f.lhs, f.rhs) if isinstance(f, CmpAtom) else f.args
        for t in terms:
            for s in subterms(t):
                if s.tag in (APPLY, SELF) and (s.tag == SELF or s.symbol in partial):
                    return SIGMA1
        return DELTA0
    if isinstance(f, GraphAtom):
        return SIGMA1
    if isinstance(f, Not):
        return _neg_class(classify(f.body, partial))
    if isinstance(f, (And, Or)):
        c = DELTA0
        for p in f.parts:
            c = _join(c, classify(p, partial))
        return c
    if isinstance(f, Implies):
        return _join(_neg_class(classify(f.premise, partial)),
                     classify(f.conclusion, partial))
    if isinstance(f, Iff):
        a, b = classify(f.lhs, partial), classify(f.rhs, partial)
        return _join(_join(_neg_class(a), b), _join(_neg_class(b), a))
    if isinstance(f, Exists):
        c = classify(f.body, partial)
        if c in (DELTA0, SIGMA1):
            return SIGMA1
        return HIGHER
    if isinstance(f, Forall):
        c = classify(f.body, partial)
        if c in (DELTA0, PI1):
            return PI1
        if c in (SIGMA1, PI2):
            return PI2
        return HIGHER
    # bounded quantifiers do not raise the class
    return classify(f.body, partial)


# --- specifications -------------------------------------------------------------


@dataclass(frozen=True)
class Specification:
    """Pi2 specification: forall params (assume -> exists y matrix)."""
    unknown: str
    params: tuple[str, ...]
    kind: str                     # function | predicate
    assume: Formula
    matrix: Formula               # may start with the witnessed exists

    def full_formula(self) -> Formula:
        body: Formula = self.matrix
        if not isinstance(self.assume, TrueF):
            body = Implies(self.assume, body)
        for v in reversed(self.params):
            body = Forall(v, body)
        return body


def witnessing_formula(spec: Specification) -> Formula:
    """Replace the witnessed exists by an application of the unknown."""
    matrix = spec.matrix
    if isinstance(matrix, Exists):
        call = Apply(spec.unknown, tuple(Var(p) for p in spec.params))
        matrix = formula_substitute(matrix.body, {matrix.var: call})
    if isinstance(spec.assume, TrueF):
        return matrix
    return Implies(spec.assume, matrix)


# --- three-valued bounded evaluation ---------------------------------------------

TRUE_V, FALSE_V, UNKNOWN_V = "true", "false", "unknown"


def eval_formula(f: Formula, env: dict[str, int], interp,
                 budget: int = 512) -> str:
    """Bounded model check; 'unknown' when a search budget or call budget
    runs out or a term diverges."""
    from .clausal import BudgetExceeded, ClausalError, Diverged

    def ev_term(t: Term, e: dict[str, int]) -> int | None:
        try:
            return interp.eval(t, e, None)
        except (Diverged, BudgetExceeded):
            return None
        except ClausalError:
            raise

    def ev(g: Formula, e: dict[str, int]) -> str:
        if isinstance(g, TrueF):
            return TRUE_V
        if isinstance(g, FalseF):
            return FALSE_V
        if isinstance(g, CmpAtom):
            a = ev_term(g.lhs, e)
            b = ev_term(g.rhs, e)
            if a is None or b is None:
                return UNKNOWN_V
            ok = {"lt": a < b, "le": a <= b, "eq": a == b, "ne": a != b,
                  "gt": a > b, "ge": a >= b}[g.op]
            return TRUE_V if ok else FALSE_V
        if isinstance(g, PredAtom):
            vals = [ev_term(a, e) for a in g.args]
            if any(v is None for v in vals):
                return UNKNOWN_V
            try:
                return TRUE_V if interp.call(g.name, tuple(vals)) != 0 else FALSE_V
            except (Diverged, BudgetExceeded):
                return UNKNOWN_V
        if isinstance(g, GraphAtom):
            v = ev_term(g.term, e)
            if v is None:
                return UNKNOWN_V
            return TRUE_V if v == e[g.var] else FALSE_V
        if isinstance(g, Not):
            v = ev(g.body, e)
            return {TRUE_V: FALSE_V, FALSE_V: TRUE_V, UNKNOWN_V: UNKNOWN_V}[v]
        if isinstance(g, And):
            saw_unknown = False
            for p in g.parts:
                v = ev(p, e)
                if v == FALSE_V:
                    return FALSE_V
                if v == UNKNOWN_V:
                    saw_unknown = True
            return UNKNOWN_V if saw_unknown else TRUE_V
        if isinstance(g, Or):
            saw_unknown = False
            for p in g.parts:
                v = ev(p, e)
                if v == TRUE_V:
                    return TRUE_V
                if v == UNKNOWN_V:
                    saw_unknown = True
            return UNKNOWN_V if saw_unknown else FALSE_V
        if isinstance(g, Implies):
            return ev(Or((Not(g.premise), g.conclusion)), e)
        if isinstance(g, Iff):
            a, b = ev(g.lhs, e), ev(g.rhs, e)
            if UNKNOWN_V in (a, b):
                return UNKNOWN_V
            return TRUE_V if a == b else FALSE_V
        if isinstance(g, (BForall, BExists)):
            bound = ev_term(g.bound, e)
            if bound is None:
                return UNKNOWN_V
            saw_unknown = False
            for v in range(bound + 1):
                e2 = dict(e)
                e2[g.var] = v
                r = ev(g.body, e2)
                if isinstance(g, BForall) and r == FALSE_V:
                    return FALSE_V
                if isinstance(g, BExists) and r == TRUE_V:
                    return TRUE_V
                if r == UNKNOWN_V:
                    saw_unknown = True
            if saw_unknown:
                return UNKNOWN_V
            return TRUE_V if isinstance(g, BForall) else FALSE_V
        if isinstance(g, Exists):
            for v in range(budget):
                e2 = dict(e)
                e2[g.var] = v
                if ev(g.body, e2) == TRUE_V:
                    return TRUE_V
            return UNKNOWN_V
        if isinstance(g, Forall):
            for v in range(budget):
                e2 = dict(e)
                e2[g.var] = v
                if ev(g.body, e2) == FALSE_V:
                    return FALSE_V
            return UNKNOWN_V
        raise TypeError(f"cannot evaluate formula {g!r}")

    return ev(f, env)


# --- formula syntax --------------------------------------------------------------
#
# !x . phi          universal          ?y . phi        existential
# !x <= t . phi     bounded forms      ~phi            negation
# /\  \/  ->  <->   connectives        f(x) ~ y        graph atom
# comparisons: = != < <= > >=          true false


def parse_formula(ts: TokenStream) -> Formula:
    return _parse_iff(ts)


def parse_formula_str(text: str, line: int | None = None) -> Formula:
    ts = TokenStream(tokenize(text, line), line)
    f = parse_formula(ts)
    ts.expect_done()
    return f


def _parse_iff(ts: TokenStream) -> Formula:
    f = _parse_implies(ts)
    while ts.at_sym("<->"):
        ts.next()
        f = Iff(f, _parse_implies(ts))
    return f


def _parse_implies(ts: TokenStream) -> Formula:
    f = _parse_or(ts)
    if ts.at_sym("->"):
        ts.next()
        return Implies(f, _parse_implies(ts))
    return f


def _parse_or(ts: TokenStream) -> Formula:
    parts = [_parse_and(ts)]
    while ts.at_sym("\\/"):
        ts.next()
        parts.append(_parse_and(ts))
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def _parse_and(ts: TokenStream) -> Formula:
    parts = [_parse_unary(ts)]
    while ts.at_sym("/\\"):
        ts.next()
        parts.append(_parse_unary(ts))
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def _parse_unary(ts: TokenStream) -> Formula:
    if ts.at_sym("~"):
        ts.next()
        return Not(_parse_unary(ts))
    if ts.at_sym("!") or ts.at_sym("?"):
        forall = ts.at_sym("!")
        ts.next()
        var = ts.eat_name()
        bound = None
        if ts.at_sym("<="):
            ts.next()
            bound = parse_term(ts)
        ts.eat_sym(".")
        body = _parse_iff(ts)       # quantifiers scope as far right as possible
        if bound is not None:
            return BForall(var, bound, body) if forall else BExists(var, bound, body)
        return Forall(var, body) if forall else Exists(var, body)
    if ts.at_name("true"):
        ts.next()
        return TRUE
    if ts.at_name("false"):
        ts.next()
        return FALSE
    if ts.at_sym("("):
        saved = ts.i
        ts.next()
        try:
            f = parse_formula(ts)
            ts.eat_sym(")")
            return f
        except ParseError:
            ts.i = saved
    return _parse_atom_formula(ts)


def _parse_atom_formula(ts: TokenStream) -> Formula:
    t = parse_term(ts)
    for sym, op in _CMP_SYMS.items():
        if ts.at_sym(sym):
            ts.next()
            return CmpAtom(op, t, parse_term(ts))
    if ts.at_sym("~"):
        ts.next()
        var = ts.eat_name()
        return GraphAtom(t, var)
    if t.tag == APPLY:
        return PredAtom(t.symbol, t.args)
    raise ParseError(f"expected a comparison or predicate, got term {show_term(t)}",
                     ts.line)


def show_formula(f: Formula) -> str:
    return _show_f(f, 0)


# precedence levels: iff 1, implies 2, or 3, and 4, unary 5
def _show_f(f: Formula, prec: int) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, CmpAtom):
        return f"{show_term(f.lhs)} {_CMP_SHOW[f.op]} {show_term(f.rhs)}"
    if isinstance(f, PredAtom):
        return f"{f.name}({','.join(show_term(a) for a in f.args)})"
    if isinstance(f, GraphAtom):
        return f"{show_term(f.term)} ~ {f.var}"
    if isinstance(f, Not):
        return f"~{_show_f(f.body, 5)}"
    if isinstance(f, And):
        s = " /\\ ".join(_show_f(p, 4) for p in f.parts)
        return f"({s})" if prec >= 4 else s
    if isinstance(f, Or):
        s = " \\/ ".join(_show_f(p, 3) for p in f.parts)
        return f"({s})" if prec >= 3 else s
    if isinstance(f, Implies):
        s = f"{_show_f(f.premise, 2)} -> {_show_f(f.conclusion, 1)}"
        return f"({s})" if prec >= 2 else s
    if isinstance(f, Iff):
        s = f"{_show_f(f.lhs, 1)} <-> {_show_f(f.rhs, 1)}"
        return f"({s})" if prec >= 1 else s
    if isinstance(f, Forall):
        s = f"!{f.var} . {_show_f(f.body, 0)}"
        return f"({s})" if prec >= 1 else s
    if isinstance(f, Exists):
        s = f"?{f.var} . {_show_f(f.body, 0)}"
        return f"({s})" if prec >= 1 else s
    if isinstance(f, BForall):
        s = f"!{f.var} <= {show_term(f.bound)} . {_show_f(f.body, 0)}"
        return f"({s})" if prec >= 1 else s
    s = f"?{f.var} <= {show_term(f.bound)} . {_show_f(f.body, 0)}"
    return f"({s})" if prec >= 1 else s
