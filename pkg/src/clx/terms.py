"""Recursive terms: the object language the reduction machine runs.

A term is a variable, 0, a dyadic successor or pair application, one of the
three binders (let, dyadic discrimination, pair discrimination), an
application of a defined function symbol, or a self-application of the
enclosing recursive definition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

# node tags, also used by the reduction machine for dispatch
VAR, ZERO_T, S1, S2, PAIR_T, LET, DYCASE, PAIRCASE, APPLY, SELF = range(10)

_TAG_ARITY_ERROR = "self-application arity {} does not match declared arity {}"


class Term:
    __slots__ = ()
    tag: int


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    tag: int = field(default=VAR, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class Zero(Term):
    tag: int = field(default=ZERO_T, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class Succ1(Term):
    inner: Term
    tag: int = field(default=S1, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class Succ2(Term):
    inner: Term
    tag: int = field(default=S2, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class PairT(Term):
    left: Term
    right: Term
    tag: int = field(default=PAIR_T, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class Let(Term):
    bound: str
    scrutinee: Term
    body: Term
    tag: int = field(default=LET, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class DyCase(Term):
    """D_v(x, zero, t1[v], t2[v]): discriminate on the dyadic head of x."""
    scrutinee: Term
    zero_branch: Term
    one_var: str
    one_branch: Term
    two_var: str
    two_branch: Term
    tag: int = field(default=DYCASE, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class PairCase(Term):
    """P_{v,w}(x, zero, t[v,w]): discriminate on the pair head of x."""
    scrutinee: Term
    zero_branch: Term
    left_var: str
    right_var: str
    pair_branch: Term
    tag: int = field(default=PAIRCASE, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class Apply(Term):
    symbol: str
    args: tuple[Term, ...]
    tag: int = field(default=APPLY, repr=False, compare=False)


@dataclass(frozen=True, slots=True)
class SelfApply(Term):
    """Application of the recursive symbol of the enclosing definition."""
    args: tuple[Term, ...]
    tag: int = field(default=SELF, repr=False, compare=False)


ZERO_TERM = Zero()


def lit(v: int) -> Term:
    """Dyadic numeral term of a constant."""
    if v == 0:
        return ZERO_TERM
    d = 1 if v % 2 == 1 else 2
    inner = lit((v - d) // 2)
    return Succ1(inner) if d == 1 else Succ2(inner)


def literal_value(t: Term) -> int | None:
    """Value of a pure dyadic numeral term, or None."""
    if t.tag == ZERO_T:
        return 0
    if t.tag == S1:
        v = literal_value(t.inner)
        return None if v is None else 2 * v + 1
    if t.tag == S2:
        v = literal_value(t.inner)
        return None if v is None else 2 * v + 2
    return None


@dataclass(frozen=True)
class FuncDef:
    """One recursive definition f(x1..xn) ~ body; body may self-apply."""
    name: str
    params: tuple[str, ...]
    body: Term
    origin: str = "handwritten"   # handwritten | extracted

    @property
    def arity(self) -> int:
        return len(self.params)


class DefinitionTable:
    """Named function definitions; frozen by convention after loading."""

    def __init__(self) -> None:
        self.defs: dict[str, FuncDef] = {}

    def add(self, d: FuncDef) -> None:
        if d.name in self.defs:
            raise ValueError(f"duplicate definition of {d.name}")
        bad = free_vars(d.body) - set(d.params)
        if bad:
            raise ValueError(f"{d.name}: unbound variables {sorted(bad)}")
        _check_self_arity(d.body, d.arity)
        self.defs[d.name] = d

    def lookup(self, name: str) -> FuncDef:
        try:
            return self.defs[name]
        except KeyError:
            raise KeyError(f"unbound function symbol {name}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.defs


def _check_self_arity(t: Term, arity: int) -> None:
    for sub in subterms(t):
        if sub.tag == SELF and len(sub.args) != arity:
            raise ValueError(_TAG_ARITY_ERROR.format(len(sub.args), arity))


def subterms(t: Term):
    """All subterms, preorder."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        tag = s.tag
        if tag in (S1, S2):
            stack.append(s.inner)
        elif tag == PAIR_T:
            stack.append(s.right)
            stack.append(s.left)
        elif tag == LET:
            stack.append(s.body)
            stack.append(s.scrutinee)
        elif tag == DYCASE:
            stack.extend((s.two_branch, s.one_branch, s.zero_branch, s.scrutinee))
        elif tag == PAIRCASE:
            stack.extend((s.pair_branch, s.zero_branch, s.scrutinee))
        elif tag in (APPLY, SELF):
            stack.extend(reversed(s.args))


def free_vars(t: Term) -> set[str]:
    """Free variables under the standard binding rules of the three binders."""
    tag = t.tag
    if tag == VAR:
        return {t.name}
    if tag == ZERO_T:
        return set()
    if tag in (S1, S2):
        return free_vars(t.inner)
    if tag == PAIR_T:
        return free_vars(t.left) | free_vars(t.right)
    if tag == LET:
        return free_vars(t.scrutinee) | (free_vars(t.body) - {t.bound})
    if tag == DYCASE:
        return (free_vars(t.scrutinee) | free_vars(t.zero_branch)
                | (free_vars(t.one_branch) - {t.one_var})
                | (free_vars(t.two_branch) - {t.two_var}))
    if tag == PAIRCASE:
        return (free_vars(t.scrutinee) | free_vars(t.zero_branch)
                | (free_vars(t.pair_branch) - {t.left_var, t.right_var}))
    out: set[str] = set()
    for a in t.args:
        out |= free_vars(a)
    return out


def has_self_apply(t: Term) -> bool:
    return any(s.tag == SELF for s in subterms(t))


def is_closed(t: Term) -> bool:
    """Closed: no free variables and no self-application outside a definition."""
    return not free_vars(t) and not has_self_apply(t)


_fresh_counter = itertools.count(1)


def fresh_name(base: str) -> str:
    return f"{base}'{next(_fresh_counter)}"


def substitute(t: Term, binding: dict[str, Term],
               self_symbol: str | None = None,
               self_arity: int | None = None) -> Term:
    """Capture-avoiding substitution of terms for free variables.

    With self_symbol set, self-applications are replaced by applications of
    that named symbol (arity checked against self_arity when given).
    """
    if not binding and self_symbol is None:
        return t
    fvs: set[str] = set()
    for repl in binding.values():
        fvs |= free_vars(repl)
    return _subst(t, binding, fvs, self_symbol, self_arity)


def _subst(t: Term, b: dict[str, Term], avoid: set[str],
           self_symbol: str | None, self_arity: int | None) -> Term:
    tag = t.tag
    if tag == VAR:
        return b.get(t.name, t)
    if tag == ZERO_T:
        return t
    if tag in (S1, S2):
        inner = _subst(t.inner, b, avoid, self_symbol, self_arity)
        return Succ1(inner) if tag == S1 else Succ2(inner)
    if tag == PAIR_T:
        return PairT(_subst(t.left, b, avoid, self_symbol, self_arity),
                     _subst(t.right, b, avoid, self_symbol, self_arity))
    if tag == LET:
        scr = _subst(t.scrutinee, b, avoid, self_symbol, self_arity)
        name, body = _rename_if_needed(t.bound, t.body, b, avoid)
        b2 = {k: v for k, v in b.items() if k != name}
        return Let(name, scr, _subst(body, b2, avoid, self_symbol, self_arity))
    if tag == DYCASE:
        scr = _subst(t.scrutinee, b, avoid, self_symbol, self_arity)
        zb = _subst(t.zero_branch, b, avoid, self_symbol, self_arity)
        n1, b1 = _rename_if_needed(t.one_var, t.one_branch, b, avoid)
        n2, b2t = _rename_if_needed(t.two_var, t.two_branch, b, avoid)
        d1 = {k: v for k, v in b.items() if k != n1}
        d2 = {k: v for k, v in b.items() if k != n2}
        return DyCase(scr, zb,
                      n1, _subst(b1, d1, avoid, self_symbol, self_arity),
                      n2, _subst(b2t, d2, avoid, self_symbol, self_arity))
    if tag == PAIRCASE:
        scr = _subst(t.scrutinee, b, avoid, self_symbol, self_arity)
        zb = _subst(t.zero_branch, b, avoid, self_symbol, self_arity)
        pb = t.pair_branch
        lv, rv = t.left_var, t.right_var
        if lv in avoid or (lv in b):
            new = fresh_name(lv)
            pb = _subst(pb, {lv: Var(new)}, set(), None, None)
            lv = new
        if rv in avoid or (rv in b):
            new = fresh_name(rv)
            pb = _subst(pb, {rv: Var(new)}, set(), None, None)
            rv = new
        d = {k: v for k, v in b.items() if k not in (lv, rv)}
        return PairCase(scr, zb, lv, rv, _subst(pb, d, avoid, self_symbol, self_arity))
    if tag == APPLY:
        return Apply(t.symbol, tuple(_subst(a, b, avoid, self_symbol, self_arity)
                                     for a in t.args))
    # SELF
    args = tuple(_subst(a, b, avoid, self_symbol, self_arity) for a in t.args)
    if self_symbol is not None:
        if self_arity is not None and len(args) != self_arity:
            raise ValueError(_TAG_ARITY_ERROR.format(len(args), self_arity))
        return Apply(self_symbol, args)
    return SelfApply(args)


def _rename_if_needed(name: str, body: Term, b: dict[str, Term],
                      avoid: set[str]) -> tuple[str, Term]:
    if name in avoid or name in b:
        new = fresh_name(name)
        return new, _subst(body, {name: Var(new)}, set(), None, None)
    return name, body


def replace_subterm(t: Term, old: Term, new: Term) -> Term:
    """Replace every occurrence of a (closed-context) subterm, literally."""
    if t == old:
        return new
    tag = t.tag
    if tag in (VAR, ZERO_T):
        return t
    if tag in (S1, S2):
        inner = replace_subterm(t.inner, old, new)
        return Succ1(inner) if tag == S1 else Succ2(inner)
    if tag == PAIR_T:
        return PairT(replace_subterm(t.left, old, new),
                     replace_subterm(t.right, old, new))
    if tag == LET:
        return Let(t.bound, replace_subterm(t.scrutinee, old, new),
                   replace_subterm(t.body, old, new))
    if tag == DYCASE:
        return DyCase(replace_subterm(t.scrutinee, old, new),
                      replace_subterm(t.zero_branch, old, new),
                      t.one_var, replace_subterm(t.one_branch, old, new),
                      t.two_var, replace_subterm(t.two_branch, old, new))
    if tag == PAIRCASE:
        return PairCase(replace_subterm(t.scrutinee, old, new),
                        replace_subterm(t.zero_branch, old, new),
                        t.left_var, t.right_var,
                        replace_subterm(t.pair_branch, old, new))
    args = tuple(replace_subterm(a, old, new) for a in t.args)
    return Apply(t.symbol, args) if tag == APPLY else SelfApply(args)


def alpha_equal(s: Term, t: Term, env: dict[str, str] | None = None) -> bool:
    """Equality up to renaming of bound variables and a free-variable map."""
    if env is None:
        env = {}
    if s.tag != t.tag:
        return False
    tag = s.tag
    if tag == VAR:
        if s.name in env:
            return env[s.name] == t.name
        env[s.name] = t.name
        return True
    if tag == ZERO_T:
        return True
    if tag in (S1, S2):
        return alpha_equal(s.inner, t.inner, env)
    if tag == PAIR_T:
        return alpha_equal(s.left, t.left, env) and alpha_equal(s.right, t.right, env)
    if tag == LET:
        if not alpha_equal(s.scrutinee, t.scrutinee, env):
            return False
        return _alpha_under(s.body, t.body, [(s.bound, t.bound)], env)
    if tag == DYCASE:
        return (alpha_equal(s.scrutinee, t.scrutinee, env)
                and alpha_equal(s.zero_branch, t.zero_branch, env)
                and _alpha_under(s.one_branch, t.one_branch, [(s.one_var, t.one_var)], env)
                and _alpha_under(s.two_branch, t.two_branch, [(s.two_var, t.two_var)], env))
    if tag == PAIRCASE:
        return (alpha_equal(s.scrutinee, t.scrutinee, env)
                and alpha_equal(s.zero_branch, t.zero_branch, env)
                and _alpha_under(s.pair_branch, t.pair_branch,
                                 [(s.left_var, t.left_var), (s.right_var, t.right_var)], env))
    if tag == APPLY and s.symbol != t.symbol:
        return False
    if len(s.args) != len(t.args):
        return False
    return all(alpha_equal(a, b, env) for a, b in zip(s.args, t.args))


def _alpha_under(s: Term, t: Term, binders: list[tuple[str, str]],
                 env: dict[str, str]) -> bool:
    saved = {}
    for sn, tn in binders:
        saved[sn] = env.get(sn)
        env[sn] = tn
    ok = alpha_equal(s, t, env)
    for sn, _ in binders:
        if saved[sn] is None:
            env.pop(sn, None)
        else:
            env[sn] = saved[sn]
    return ok
