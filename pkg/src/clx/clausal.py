"""Clausal definitions: guarded pattern clauses over mixed numerals.

A clausal program is an ordered list of disjoint guarded clauses plus the
implicit default clause yielding 0.  Programs are both interpreted directly
(the reference semantics used by oracles and the bounded checker) and
unfolded into a single recursive definition run by the reduction machine.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import numerals
from .syntax import ParseError, TokenStream, parse_term, show_term, tokenize
from .terms import (
    APPLY, DYCASE, LET, PAIRCASE, PAIR_T, S1, S2, SELF, VAR,
    Apply, DefinitionTable, FuncDef, Let, DyCase, PairCase,
    SelfApply, Succ1, Succ2, PairT, Term, Var, ZERO_TERM, fresh_name, lit,
    literal_value, free_vars, replace_subterm, subterms, substitute,
)

# --- patterns ----------------------------------------------------------------


class Pattern:
    __slots__ = ()


@dataclass(frozen=True)
class PVar(Pattern):
    name: str


@dataclass(frozen=True)
class PLit(Pattern):
    value: int


@dataclass(frozen=True)
class PSucc(Pattern):
    """Monadic successor pattern v+1."""
    name: str


@dataclass(frozen=True)
class PDy1(Pattern):
    inner: Pattern


@dataclass(frozen=True)
class PDy2(Pattern):
    inner: Pattern


@dataclass(frozen=True)
class PPair(Pattern):
    left: Pattern
    right: Pattern


@dataclass(frozen=True)
class PAdic(Pattern):
    """Pattern p*x+i with i ranging over [lo, lo+p); executable only for
    p a power of two with lo = p-1, which is the nested dyadic form."""
    base: int
    core: str
    digit: str
    lo: int


@dataclass(frozen=True)
class PCons(Pattern):
    """Registered constructor pattern, e.g. Nd(x,l,r)."""
    name: str
    args: tuple[Pattern, ...]


def pattern_vars(p: Pattern) -> list[str]:
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PSucc):
        return [p.name]
    if isinstance(p, (PDy1, PDy2)):
        return pattern_vars(p.inner)
    if isinstance(p, PPair):
        return pattern_vars(p.left) + pattern_vars(p.right)
    if isinstance(p, PAdic):
        return [p.core, p.digit]
    if isinstance(p, PCons):
        out: list[str] = []
        for a in p.args:
            out.extend(pattern_vars(a))
        return out
    return []


# --- guard conditions --------------------------------------------------------

# comparison ops are stored normalized: only lt, le, eq, ne
_NORMALIZE_OP = {"<": ("lt", False), "<=": ("le", False), "=": ("eq", False),
                 "!=": ("ne", False), ">": ("lt", True), ">=": ("le", True)}
_SHOW_OP = {"lt": "<", "le": "<=", "eq": "=", "ne": "!="}


class Condition:
    __slots__ = ()


@dataclass(frozen=True)
class Cmp(Condition):
    op: str              # lt | le | eq | ne
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class PredCond(Condition):
    name: str
    args: tuple[Term, ...]
    negated: bool = False


@dataclass(frozen=True)
class Assign(Condition):
    """Guard `term = var` introducing var for the rest of the clause."""
    term: Term
    var: str


@dataclass(frozen=True)
class Clause:
    patterns: tuple[Pattern, ...]
    guards: tuple[Condition, ...]
    body: Term


@dataclass
class ClausalProgram:
    name: str
    arity: int
    kind: str                     # function | predicate
    clauses: list[Clause] = field(default_factory=list)
    origin: str = "handwritten"


@dataclass(frozen=True)
class Constructor:
    name: str
    params: tuple[str, ...]
    template: Term                # built from params with pairing and literals


class ClausalError(ValueError):
    pass


# --- program space -----------------------------------------------------------


class ProgramSpace:
    """All registered clausal programs, constructors, and their unfoldings."""

    def __init__(self) -> None:
        self.programs: dict[str, ClausalProgram] = {}
        self.constructors: dict[str, Constructor] = {}
        self.defs = DefinitionTable()

    def add_constructor(self, c: Constructor) -> None:
        if c.name in self.constructors or c.name in self.programs:
            raise ClausalError(f"duplicate name {c.name}")
        self.constructors[c.name] = c
        self.defs.add(FuncDef(c.name, c.params, c.template))

    def add_program(self, p: ClausalProgram, *, require_disjoint: bool = True) -> list[str]:
        """Register a program; returns disjointness warnings (undecided pairs)."""
        if p.name in self.programs or p.name in self.constructors:
            raise ClausalError(f"duplicate name {p.name}")
        _validate_scoping(p, self)
        warnings: list[str] = []
        if require_disjoint:
            report = check_disjoint(p, self)
            for entry in report:
                if entry.status == "overlap":
                    raise ClausalError(
                        f"{p.name}: clauses {entry.i + 1} and {entry.j + 1} overlap "
                        f"at {entry.witness}")
                if entry.status == "undecided":
                    warnings.append(
                        f"{p.name}: disjointness of clauses {entry.i + 1} and "
                        f"{entry.j + 1} is undecided; declare a lemma")
        self.programs[p.name] = p
        self.defs.add(unfold(p, self))
        return warnings

    def arity_of(self, name: str) -> int | None:
        if name in self.programs:
            return self.programs[name].arity
        if name in self.constructors:
            return len(self.constructors[name].params)
        if name in self.defs:
            return self.defs.lookup(name).arity
        return None


def _validate_scoping(p: ClausalProgram, space: ProgramSpace) -> None:
    for idx, c in enumerate(p.clauses, 1):
        bound: set[str] = set()
        for pat in c.patterns:
            for v in pattern_vars(pat):
                if v in bound:
                    raise ClausalError(f"{p.name} clause {idx}: variable {v} bound twice")
                bound.add(v)
        for g in c.guards:
            if isinstance(g, Assign):
                if free_vars(g.term) - bound:
                    raise ClausalError(
                        f"{p.name} clause {idx}: assignment uses unbound variables")
                if g.var in bound:
                    raise ClausalError(
                        f"{p.name} clause {idx}: assignment rebinds {g.var}")
                bound.add(g.var)
            else:
                for t in _condition_terms(g):
                    if free_vars(t) - bound:
                        missing = sorted(free_vars(t) - bound)
                        raise ClausalError(
                            f"{p.name} clause {idx}: unbound variables {missing} in guard")
        if free_vars(c.body) - bound:
            missing = sorted(free_vars(c.body) - bound)
            raise ClausalError(f"{p.name} clause {idx}: unbound variables {missing} in body")


def _condition_terms(g: Condition) -> tuple[Term, ...]:
    if isinstance(g, Cmp):
        return (g.lhs, g.rhs)
    if isinstance(g, PredCond):
        return g.args
    return (g.term,)


def _substitute_condition(g: Condition, sub: dict[str, Term]) -> Condition:
    if isinstance(g, Cmp):
        return Cmp(g.op, substitute(g.lhs, sub), substitute(g.rhs, sub))
    if isinstance(g, PredCond):
        return PredCond(g.name, tuple(substitute(a, sub) for a in g.args), g.negated)
    return Assign(substitute(g.term, sub), g.var)


# --- direct clause interpretation (reference semantics over int) -------------


class Diverged(Exception):
    pass


class BudgetExceeded(Exception):
    pass


def _native_table() -> dict:
    return {
        "add": lambda a, b: a + b,
        "mul": lambda a, b: a * b,
        "monus": lambda a, b: a - b if a > b else 0,
        "sq": lambda a: a * a,
        "dbl": lambda a: 2 * a,
        "pred": lambda a: a - 1 if a > 0 else 0,
        "succ": lambda a: a + 1,
        "le": lambda a, b: 1 if a <= b else 0,
        "lt": lambda a, b: 1 if a < b else 0,
        "eq": lambda a, b: 1 if a == b else 0,
        "fst": lambda a: numerals.unpair(a)[0] if a > 0 else 0,
        "snd": lambda a: numerals.unpair(a)[1] if a > 0 else 0,
        "dyarg": lambda a: (a - 1) // 2 if a % 2 == 1 else (a - 2) // 2 if a > 0 else 0,
        "isdy1": lambda a: 1 if a % 2 == 1 else 0,
        "isdy2": lambda a: 1 if a > 0 and a % 2 == 0 else 0,
    }


class Interpreter:
    """Clause-by-clause evaluator over plain integers, with memoization.

    Divergence shows up as re-entry on identical arguments or as budget
    exhaustion; both raise.  Prelude symbols run native by default, which is
    the reference semantics the clausal prelude is tested against.
    """

    def __init__(self, space: ProgramSpace, budget: int = 10_000_000,
                 use_native: bool = True):
        self.space = space
        self.budget = budget
        self.calls = 0
        self.memo: dict[tuple, int] = {}
        self.active: set[tuple] = set()
        self.native = _native_table() if use_native else {}

    def call(self, name: str, args: tuple[int, ...]) -> int:
        self.calls += 1
        if self.calls > self.budget:
            raise BudgetExceeded(name)
        fn = self.native.get(name)
        if fn is not None:
            return fn(*args)
        cons = self.space.constructors.get(name)
        if cons is not None:
            return self.eval(cons.template, dict(zip(cons.params, args)), None)
        prog = self.space.programs.get(name)
        if prog is None:
            raise ClausalError(f"unknown function {name}")
        return self._self_call(prog, args)

    def _run(self, prog: ClausalProgram, args: tuple[int, ...]) -> int:
        clause = self.match_clause(prog, args)
        if clause is None:
            return 0
        c, env = clause
        return self.eval(c.body, env, prog)

    def match_clause(self, prog: ClausalProgram,
                     args: tuple[int, ...]) -> tuple[Clause, dict[str, int]] | None:
        """First clause whose patterns and guards accept args, with bindings."""
        for c in prog.clauses:
            env: dict[str, int] = {}
            if not all(self._match(p, v, env) for p, v in zip(c.patterns, args)):
                continue
            ok = True
            for g in c.guards:
                if not self._guard(g, env, prog):
                    ok = False
                    break
            if ok:
                return c, env
        return None

    def _match(self, p: Pattern, v: int, env: dict[str, int]) -> bool:
        if isinstance(p, PVar):
            env[p.name] = v
            return True
        if isinstance(p, PLit):
            return v == p.value
        if isinstance(p, PSucc):
            if v == 0:
                return False
            env[p.name] = v - 1
            return True
        if isinstance(p, PDy1):
            if v % 2 == 1:
                return self._match(p.inner, (v - 1) // 2, env)
            return False
        if isinstance(p, PDy2):
            if v > 0 and v % 2 == 0:
                return self._match(p.inner, (v - 2) // 2, env)
            return False
        if isinstance(p, PPair):
            if v == 0:
                return False
            a, b = numerals.unpair(v)
            return self._match(p.left, a, env) and self._match(p.right, b, env)
        if isinstance(p, PAdic):
            if v < p.lo:
                return False
            x = (v - p.lo) // p.base
            env[p.core] = x
            env[p.digit] = v - p.base * x
            return True
        if isinstance(p, PCons):
            cons = self.space.constructors[p.name]
            expanded = _expand_constructor(cons, p.args)
            return self._match(expanded, v, env)
        raise ClausalError(f"unknown pattern {p!r}")

    def _guard(self, g: Condition, env: dict[str, int], prog: ClausalProgram) -> bool:
        if isinstance(g, Cmp):
            a = self.eval(g.lhs, env, prog)
            b = self.eval(g.rhs, env, prog)
            if g.op == "lt":
                return a < b
            if g.op == "le":
                return a <= b
            if g.op == "eq":
                return a == b
            return a != b
        if isinstance(g, PredCond):
            args = tuple(self.eval(t, env, prog) for t in g.args)
            if prog is not None and g.name == prog.name and g.name not in self.space.programs:
                v = self._self_call(prog, args)
            else:
                v = self.call(g.name, args)
            return (v == 0) if g.negated else (v != 0)
        env[g.var] = self.eval(g.term, env, prog)
        return True

    def eval(self, t: Term, env: dict[str, int], prog: ClausalProgram | None) -> int:
        tag = t.tag
        if tag == APPLY:
            args = tuple(self.eval(a, env, prog) for a in t.args)
            if prog is not None and t.symbol == prog.name and t.symbol not in self.space.programs:
                return self._self_call(prog, args)
            return self.call(t.symbol, args)
        if tag == SELF:
            args = tuple(self.eval(a, env, prog) for a in t.args)
            return self._self_call(prog, args)
        if tag == VAR:
            try:
                return env[t.name]
            except KeyError:
                raise ClausalError(f"unbound variable {t.name}") from None
        v = literal_value(t)
        if v is not None:
            return v
        if tag == S1:
            return 2 * self.eval(t.inner, env, prog) + 1
        if tag == S2:
            return 2 * self.eval(t.inner, env, prog) + 2
        if tag == PAIR_T:
            return numerals.pair(self.eval(t.left, env, prog),
                                 self.eval(t.right, env, prog))
        if tag == LET:
            v = self.eval(t.scrutinee, env, prog)
            env2 = dict(env)
            env2[t.bound] = v
            return self.eval(t.body, env2, prog)
        if tag == DYCASE:
            v = self.eval(t.scrutinee, env, prog)
            if v == 0:
                return self.eval(t.zero_branch, env, prog)
            env2 = dict(env)
            if v % 2 == 1:
                env2[t.one_var] = (v - 1) // 2
                return self.eval(t.one_branch, env2, prog)
            env2[t.two_var] = (v - 2) // 2
            return self.eval(t.two_branch, env2, prog)
        if tag == PAIRCASE:
            v = self.eval(t.scrutinee, env, prog)
            if v == 0:
                return self.eval(t.zero_branch, env, prog)
            a, b = numerals.unpair(v)
            env2 = dict(env)
            env2[t.left_var] = a
            env2[t.right_var] = b
            return self.eval(t.pair_branch, env2, prog)
        raise ClausalError(f"cannot evaluate term {t!r}")

    def _self_call(self, prog: ClausalProgram, args: tuple[int, ...]) -> int:
        self.calls += 1
        if self.calls > self.budget:
            raise BudgetExceeded(prog.name)
        key = (prog.name, args)
        if key in self.memo:
            return self.memo[key]
        if key in self.active:
            raise Diverged(f"{prog.name}{args}")
        self.active.add(key)
        try:
            result = self._run(prog, args)
        finally:
            self.active.discard(key)
        self.memo[key] = result
        return result


def _expand_constructor(cons: Constructor, args: tuple[Pattern, ...]) -> Pattern:
    """Constructor pattern as a structural pattern over pairs and literals."""
    if len(args) != len(cons.params):
        raise ClausalError(f"constructor {cons.name} expects {len(cons.params)} arguments")
    sub = dict(zip(cons.params, args))
    return _term_to_pattern_template(cons.template, sub)


def _term_to_pattern_template(t: Term, sub: dict[str, Pattern]) -> Pattern:
    v = literal_value(t)
    if v is not None:
        return PLit(v)
    if isinstance(t, Var):
        return sub[t.name]
    if isinstance(t, PairT):
        return PPair(_term_to_pattern_template(t.left, sub),
                     _term_to_pattern_template(t.right, sub))
    if isinstance(t, Succ1):
        return PDy1(_term_to_pattern_template(t.inner, sub))
    if isinstance(t, Succ2):
        return PDy2(_term_to_pattern_template(t.inner, sub))
    raise ClausalError("constructor templates may use only pairing, successors, "
                       "literals, and parameters")


# --- unfolding into one recursive definition ----------------------------------
#
# Clauses compile to a decision tree of DyCase/PairCase nodes for structural
# patterns and an if-then-else discriminator (a dyadic case on a 0/1
# characteristic value) for guards.  Adjacent clauses sharing their leading
# pattern tests or assignment guards share the compiled prefix, so an
# assignment hoists into a single let, which is what makes the assignment
# variants of a program cheap at run time.

_ROW = tuple  # (items, body) with items a list of ("pat", var, Pattern) | ("guard", Condition)


def unfold(p: ClausalProgram, space: ProgramSpace) -> FuncDef:
    """Compile the clause list into a single recursive definition."""
    params = _param_names(p)
    rows = []
    for c in p.clauses:
        items: list[tuple] = []
        for var, pat in zip(params, c.patterns):
            items.append(("pat", var, _resolve_cons(pat, space)))
        for g in c.guards:
            items.append(("guard", g))
        rows.append((items, c.body))
    body = _compile_rows(rows, ZERO_TERM, space)
    body = _selfify(body, p.name)
    return FuncDef(p.name, tuple(params), body, origin=p.origin)


def _param_names(p: ClausalProgram) -> list[str]:
    names = []
    for i in range(p.arity):
        column = {c.patterns[i] for c in p.clauses}
        only = next(iter(column)) if len(column) == 1 else None
        if isinstance(only, PVar):
            names.append(only.name)
        else:
            names.append(f"arg{i + 1}")
    return names


def _resolve_cons(p: Pattern, space: ProgramSpace) -> Pattern:
    if isinstance(p, PCons):
        cons = space.constructors.get(p.name)
        if cons is None:
            raise ClausalError(f"unknown constructor {p.name}")
        return _expand_constructor(cons, tuple(_resolve_cons(a, space) for a in p.args))
    if isinstance(p, PPair):
        return PPair(_resolve_cons(p.left, space), _resolve_cons(p.right, space))
    if isinstance(p, PDy1):
        return PDy1(_resolve_cons(p.inner, space))
    if isinstance(p, PDy2):
        return PDy2(_resolve_cons(p.inner, space))
    return p


def _selfify(t: Term, name: str) -> Term:
    if t.tag == APPLY and t.symbol == name:
        return SelfApply(tuple(_selfify(a, name) for a in t.args))
    if t.tag in (VAR,) or literal_value(t) is not None:
        return t
    if t.tag == S1:
        return Succ1(_selfify(t.inner, name))
    if t.tag == S2:
        return Succ2(_selfify(t.inner, name))
    if t.tag == PAIR_T:
        return PairT(_selfify(t.left, name), _selfify(t.right, name))
    if t.tag == LET:
        return Let(t.bound, _selfify(t.scrutinee, name), _selfify(t.body, name))
    if t.tag == DYCASE:
        return DyCase(_selfify(t.scrutinee, name), _selfify(t.zero_branch, name),
                      t.one_var, _selfify(t.one_branch, name),
                      t.two_var, _selfify(t.two_branch, name))
    if t.tag == PAIRCASE:
        return PairCase(_selfify(t.scrutinee, name), _selfify(t.zero_branch, name),
                        t.left_var, t.right_var, _selfify(t.pair_branch, name))
    if t.tag == APPLY:
        return Apply(t.symbol, tuple(_selfify(a, name) for a in t.args))
    if t.tag == SELF:
        return SelfApply(tuple(_selfify(a, name) for a in t.args))
    return t


def _row_subst(row: _ROW, sub: dict[str, Term]) -> _ROW:
    items, body = row
    out = []
    for it in items:
        if it[0] == "pat":
            out.append(it)
        else:
            out.append(("guard", _substitute_condition(it[1], sub)))
    return (out, substitute(body, sub))


def _compile_rows(rows: list[_ROW], fail: Term, space: ProgramSpace) -> Term:
    if not rows:
        return fail
    items, body = rows[0]
    if not items:
        return body
    head = items[0]
    if head[0] == "pat" and isinstance(head[2], PVar):
        group, rest = _take_equal(rows, head)
        fail2 = _compile_rows(rest, fail, space)
        var, name = head[1], head[2].name
        stripped = []
        for items_i, body_i in group:
            row = (items_i[1:], body_i)
            if name != var:
                row = _row_subst(row, {name: Var(var)})
            stripped.append(row)
        return _compile_rows(stripped, fail2, space)
    if head[0] == "guard":
        g = head[1]
        group, rest = _take_equal(rows, head)
        fail2 = _compile_rows(rest, fail, space)
        stripped = [(items_i[1:], body_i) for items_i, body_i in group]
        then = _compile_rows(stripped, fail2, space)
        return _compile_guard(g, then, fail2)
    # structural pattern column: gather the leading run testing the same variable
    var = head[1]
    run: list[_ROW] = []
    i = 0
    while i < len(rows):
        it = rows[i][0]
        if it and it[0][0] == "pat" and it[0][1] == var and not isinstance(it[0][2], PVar):
            run.append(rows[i])
            i += 1
        else:
            break
    rest = rows[i:]
    fail2 = _compile_rows(rest, fail, space)
    return _compile_column(var, run, fail2, space)


def _take_equal(rows: list[_ROW], head: tuple) -> tuple[list[_ROW], list[_ROW]]:
    group = []
    i = 0
    while i < len(rows) and rows[i][0] and rows[i][0][0] == head:
        group.append(rows[i])
        i += 1
    return group, rows[i:]


def _compile_guard(g: Condition, then: Term, fail: Term) -> Term:
    if isinstance(g, Assign):
        return Let(g.var, g.term, then)
    if isinstance(g, Cmp):
        v = _fold_ground(g)
        if v is True:
            return then
        if v is False:
            return fail
        char = {"lt": "lt", "le": "le", "eq": "eq", "ne": "eq"}[g.op]
        cond = Apply(char, (g.lhs, g.rhs))
        if g.op == "ne":
            then, fail = fail, then
        u1, u2 = fresh_name("c"), fresh_name("c")
        return DyCase(cond, fail, u1, then, u2, then)
    args = g.args
    cond = Apply(g.name, args)
    if g.negated:
        then, fail = fail, then
    u1, u2 = fresh_name("c"), fresh_name("c")
    return DyCase(cond, fail, u1, then, u2, then)


def _fold_ground(g: Cmp) -> bool | None:
    a, b = literal_value(g.lhs), literal_value(g.rhs)
    if a is None or b is None:
        return None
    return {"lt": a < b, "le": a <= b, "eq": a == b, "ne": a != b}[g.op]


def _compile_column(var: str, run: list[_ROW], fail: Term,
                    space: ProgramSpace) -> Term:
    pats = [row[0][0][2] for row in run]
    mode = _column_mode(pats)
    if mode == "pair":
        return _compile_pair_column(var, run, fail, space)
    return _compile_dyadic_column(var, run, fail, space)


def _column_mode(pats: list[Pattern]) -> str:
    for p in pats:
        if isinstance(p, PPair):
            return "pair"
    return "dyadic"


def _compile_pair_column(var: str, run: list[_ROW], fail: Term,
                         space: ProgramSpace) -> Term:
    zero_rows: list[_ROW] = []
    pair_rows: list[tuple[Pattern, Pattern, _ROW]] = []
    for (items, body) in run:
        pat = items[0][2]
        rest = (items[1:], body)
        if isinstance(pat, PLit) and pat.value == 0:
            zero_rows.append(rest)
        elif isinstance(pat, PPair):
            pair_rows.append((pat.left, pat.right, rest))
        elif isinstance(pat, PLit):
            # a positive literal among pair patterns: test by equality guard
            guarded = ([("guard", Cmp("eq", Var(var), lit(pat.value)))] + rest[0], rest[1])
            pair_rows.append((PVar(fresh_name("u")), PVar(fresh_name("u")), _lift(guarded)))
        else:
            raise ClausalError(f"pattern {pat!r} does not fit a pair discrimination")
    lv, rv = _pick_binders(pair_rows)
    branch_rows = []
    for pl, pr, (items, body) in pair_rows:
        pre: list[tuple] = []
        sub: dict[str, Term] = {}
        for binder, sp in ((lv, pl), (rv, pr)):
            if isinstance(sp, PVar):
                if sp.name != binder:
                    sub[sp.name] = Var(binder)
            else:
                pre.append(("pat", binder, sp))
        row = (pre + items, body)
        if sub:
            row = _row_subst(row, sub)
        branch_rows.append(row)
    zero = _compile_rows(zero_rows, fail, space)
    pairb = _compile_rows(branch_rows, fail, space)
    return PairCase(Var(var), zero, lv, rv, pairb)


def _lift(row):
    return row


def _pick_binders(pair_rows) -> tuple[str, str]:
    for pl, pr, _ in pair_rows:
        if isinstance(pl, PVar) and isinstance(pr, PVar):
            return pl.name, pr.name
    lv = pair_rows[0][0].name if isinstance(pair_rows[0][0], PVar) else fresh_name("v")
    rv = pair_rows[0][1].name if isinstance(pair_rows[0][1], PVar) else fresh_name("w")
    return lv, rv


def _compile_dyadic_column(var: str, run: list[_ROW], fail: Term,
                           space: ProgramSpace) -> Term:
    zero_rows: list[_ROW] = []
    one_rows: list[tuple[Pattern | None, _ROW]] = []   # (subpattern or None=succ, row)
    two_rows: list[tuple[Pattern | None, _ROW]] = []
    succ_vars_one: list[tuple[str, _ROW]] = []
    for (items, body) in run:
        pat = items[0][2]
        rest = (items[1:], body)
        for branch_pat, target in _dyadic_split(pat):
            if branch_pat == "zero":
                zero_rows.append(rest)
            elif branch_pat == "succ":
                one_rows.append((("succ", target), rest))
                two_rows.append((("succ", target), rest))
            elif branch_pat[0] == "one":
                one_rows.append((("sub", branch_pat[1]), _apply_adic(rest, target)))
            else:
                two_rows.append((("sub", branch_pat[1]), _apply_adic(rest, target)))
    u1 = _binder_for(one_rows, "u")
    u2 = _binder_for(two_rows, "u")
    zero = _compile_rows(zero_rows, fail, space)
    one = _compile_dyadic_branch(var, u1, one_rows, fail, space)
    two = _compile_dyadic_branch(var, u2, two_rows, fail, space)
    return DyCase(Var(var), zero, u1, one, u2, two)


def _dyadic_split(pat: Pattern):
    """Split a dyadic-mode pattern into branch contributions.

    Yields (key, payload): key is "zero", "succ" (payload: bound name), or
    ("one"|"two", subpattern) with payload an optional substitution from the
    p-adic digit expansion.
    """
    if isinstance(pat, PLit):
        if pat.value == 0:
            yield "zero", None
        else:
            v = pat.value
            d = 1 if v % 2 == 1 else 2
            inner = PLit((v - d) // 2)
            yield ("one" if d == 1 else "two", inner), None
    elif isinstance(pat, PSucc):
        yield "succ", pat.name
    elif isinstance(pat, PDy1):
        yield ("one", pat.inner), None
    elif isinstance(pat, PDy2):
        yield ("two", pat.inner), None
    elif isinstance(pat, PAdic):
        p, lo = pat.base, pat.lo
        if p < 2 or (p & (p - 1)) != 0 or lo != p - 1:
            raise ClausalError(
                f"p-adic pattern {p}*x+i is executable only for a power-of-two "
                f"base with offset base-1")
        levels = p.bit_length() - 1
        for digits in itertools.product((1, 2), repeat=levels):
            # value = s_{d1}( s_{d2}( ... (core) )) read outermost first
            i_val = 0
            for d in reversed(digits):
                i_val = 2 * i_val + d
            sub = PVar(pat.core)
            for d in reversed(digits[1:]):
                sub = PDy1(sub) if d == 1 else PDy2(sub)
            key = "one" if digits[0] == 1 else "two"
            yield (key, sub), (pat.digit, i_val)
    else:
        raise ClausalError(f"pattern {pat!r} does not fit a dyadic discrimination")


def _apply_adic(row: _ROW, target) -> _ROW:
    if target is None:
        return row
    digit_var, i_val = target
    items, body = _row_subst(row, {digit_var: lit(i_val)})
    folded = []
    for it in items:
        if it[0] == "guard" and isinstance(it[1], Cmp):
            v = _fold_ground(it[1])
            if v is True:
                continue
        folded.append(it)
    return (folded, body)


def _binder_for(branch_rows, base: str) -> str:
    for kind, _row in branch_rows:
        if kind[0] == "sub" and isinstance(kind[1], PVar):
            return kind[1].name
    return fresh_name(base)


def _compile_dyadic_branch(var: str, binder: str, branch_rows, fail: Term,
                           space: ProgramSpace) -> Term:
    rows = []
    for kind, (items, body) in branch_rows:
        if kind[0] == "succ":
            name = kind[1]
            pre_items = list(items)
            row = (pre_items, body)
            if name is not None:
                row = _row_subst(row, {name: Var("@pred")})
            rows.append(("succ", row))
        else:
            sub = kind[1]
            if isinstance(sub, PVar):
                row = (items, body)
                if sub.name != binder:
                    row = _row_subst(row, {sub.name: Var(binder)})
                rows.append(("plain", row))
            else:
                rows.append(("plain", ([("pat", binder, sub)] + items, body)))
    plain = [r for k, r in rows if k == "plain"]
    succs = [r for k, r in rows if k == "succ"]
    if succs and plain:
        raise ClausalError("v+1 patterns cannot be mixed with dyadic patterns "
                           "on one argument")
    if succs:
        pred_var = fresh_name("p")
        fixed = [_row_subst(r, {"@pred": Var(pred_var)}) for r in succs]
        return Let(pred_var, Apply("pred", (Var(var),)),
                   _compile_rows(fixed, fail, space))
    return _compile_rows(plain, fail, space)


# --- disjointness -------------------------------------------------------------


@dataclass
class DisjointEntry:
    i: int
    j: int
    status: str                  # disjoint | overlap | undecided
    reason: str = ""
    witness: tuple[int, ...] | None = None


def check_disjoint(p: ClausalProgram, space: ProgramSpace,
                   search: int = 60, seed: int = 0) -> list[DisjointEntry]:
    """Pairwise disjointness report for the clauses of a program."""
    report = []
    for i in range(len(p.clauses)):
        for j in range(i + 1, len(p.clauses)):
            report.append(_disjoint_pair(p, i, j, space, search, seed))
    return report


def _disjoint_pair(p: ClausalProgram, i: int, j: int, space: ProgramSpace,
                   search: int, seed: int) -> DisjointEntry:
    ci, cj = p.clauses[i], p.clauses[j]
    for pi, pj in zip(ci.patterns, cj.patterns):
        if _patterns_disjoint(_resolve_cons(pi, space), _resolve_cons(pj, space)):
            return DisjointEntry(i, j, "disjoint", "patterns")
    gi = _canonical_guards(ci, space)
    gj = _canonical_guards(cj, space)
    if gi is not None and gj is not None:
        for a in gi:
            for b in gj:
                if _complementary(a, b):
                    return DisjointEntry(i, j, "disjoint", "complementary guards")
    witness = _overlap_witness(p, i, j, space, search, seed)
    if witness is not None:
        return DisjointEntry(i, j, "overlap", "witness found", witness)
    return DisjointEntry(i, j, "undecided", "no witness within search bound")


def _patterns_disjoint(a: Pattern, b: Pattern) -> bool:
    if isinstance(a, PVar) or isinstance(b, PVar):
        return False
    if isinstance(a, PLit) and isinstance(b, PLit):
        return a.value != b.value
    if isinstance(a, PLit):
        return not _literal_matches(b, a.value)
    if isinstance(b, PLit):
        return not _literal_matches(a, b.value)
    if isinstance(a, PSucc) or isinstance(b, PSucc):
        return False               # v+1 overlaps every positive shape
    if isinstance(a, PAdic) or isinstance(b, PAdic):
        aa, bb = a, b
        if isinstance(aa, PAdic) and isinstance(bb, PAdic):
            return False
        return False               # conservative: digits can realize any head
    if isinstance(a, PPair) and isinstance(b, PPair):
        return (_patterns_disjoint(a.left, b.left)
                or _patterns_disjoint(a.right, b.right))
    if isinstance(a, PPair) != isinstance(b, PPair):
        return True                # pair head vs dyadic head never collapses
    if isinstance(a, PDy1) and isinstance(b, PDy1):
        return _patterns_disjoint(a.inner, b.inner)
    if isinstance(a, PDy2) and isinstance(b, PDy2):
        return _patterns_disjoint(a.inner, b.inner)
    if isinstance(a, (PDy1, PDy2)) and isinstance(b, (PDy1, PDy2)):
        return True
    return False


def _literal_matches(p: Pattern, v: int) -> bool:
    if isinstance(p, PLit):
        return p.value == v
    if isinstance(p, PSucc):
        return v > 0
    if isinstance(p, PDy1):
        return v % 2 == 1 and _literal_matches(p.inner, (v - 1) // 2)
    if isinstance(p, PDy2):
        return v > 0 and v % 2 == 0 and _literal_matches(p.inner, (v - 2) // 2)
    if isinstance(p, PPair):
        if v == 0:
            return False
        a, b = numerals.unpair(v)
        return _literal_matches(p.left, a) and _literal_matches(p.right, b)
    if isinstance(p, PAdic):
        return v >= p.lo
    return True


def _canonical_guards(c: Clause, space: ProgramSpace) -> list[Cmp] | None:
    """Guards with pattern and assignment variables renamed positionally."""
    sub: dict[str, Term] = {}
    counter = 0
    for k, pat in enumerate(c.patterns):
        for n, v in enumerate(pattern_vars(pat)):
            sub[v] = Var(f"@p{k}_{n}")
    out: list[Cmp] = []
    assign_keys: dict[str, str] = {}
    for g in c.guards:
        if isinstance(g, Assign):
            key = show_term(substitute(g.term, sub))
            sub[g.var] = Var(f"@a[{key}]")
            continue
        if isinstance(g, Cmp):
            out.append(Cmp(g.op, substitute(g.lhs, sub), substitute(g.rhs, sub)))
        elif isinstance(g, PredCond):
            out.append(g if not g.args else
                       PredCond(g.name, tuple(substitute(a, sub) for a in g.args),
                                g.negated))
    return out


_DISJOINT_OPS = {("lt", "eq"), ("eq", "lt"), ("eq", "ne"), ("ne", "eq")}


def _complementary(a: Condition, b: Condition) -> bool:
    if isinstance(a, PredCond) and isinstance(b, PredCond):
        return a.name == b.name and a.args == b.args and a.negated != b.negated
    if not (isinstance(a, Cmp) and isinstance(b, Cmp)):
        return False
    if a.lhs == b.lhs and a.rhs == b.rhs:
        if (a.op, b.op) in _DISJOINT_OPS:
            return True
    if a.lhs == b.rhs and a.rhs == b.lhs:
        # x ? y  against  y ? x
        if a.op == "lt" and b.op in ("lt", "le", "eq"):
            return b.op != "eq" or False
        if a.op == "lt" and b.op == "lt":
            return True
        if (a.op, b.op) in (("lt", "le"), ("le", "lt")):
            return True
        if (a.op, b.op) in (("lt", "eq"), ("eq", "lt")):
            return True
    return False


def _overlap_witness(p: ClausalProgram, i: int, j: int, space: ProgramSpace,
                     search: int, seed: int) -> tuple[int, ...] | None:
    pool = list(range(min(search, 50)))
    for a in range(5):
        for b in range(5):
            pool.append(numerals.pair(a, b))
    pool.append(numerals.pair(0, numerals.pair(0, 0)))
    pool = sorted(set(pool))
    rng = random.Random(seed)
    combos = list(itertools.product(pool, repeat=p.arity)) if p.arity <= 2 else None
    if combos is None:
        combos = [tuple(rng.choice(pool) for _ in range(p.arity)) for _ in range(4000)]
    interp = Interpreter(space, budget=200_000)
    ci, cj = p.clauses[i], p.clauses[j]
    for args in combos:
        try:
            mi = _clause_accepts(interp, p, ci, args)
            mj = _clause_accepts(interp, p, cj, args)
        except (Diverged, BudgetExceeded, ClausalError, numerals.NotAPair):
            continue
        if mi and mj:
            return args
    return None


def _clause_accepts(interp: Interpreter, prog: ClausalProgram, c: Clause,
                    args: tuple[int, ...]) -> bool:
    env: dict[str, int] = {}
    if not all(interp._match(pat, v, env) for pat, v in zip(c.patterns, args)):
        return False
    return all(interp._guard(g, env, prog) for g in c.guards)


# --- positivity ----------------------------------------------------------------


def positivity_check(p: ClausalProgram) -> tuple[str, str | None]:
    """'inductive' iff every recursive application occurs positively."""
    if p.kind != "predicate":
        raise ClausalError("positivity applies to predicates")
    for c in p.clauses:
        for g in c.guards:
            if isinstance(g, PredCond) and g.name == p.name:
                if g.negated:
                    return ("not-inductive",
                            "~" + _show_pred(g.name, g.args))
            else:
                for t in _condition_terms(g):
                    if _mentions(t, p.name):
                        return ("not-inductive",
                                f"recursive application inside a term: {show_term(t)}")
        if _mentions(c.body, p.name):
            return ("not-inductive", f"recursive application in body: {show_term(c.body)}")
    return ("inductive", None)


def _mentions(t: Term, name: str) -> bool:
    return any(s.tag == APPLY and s.symbol == name for s in subterms(t))


def _show_pred(name: str, args: tuple[Term, ...]) -> str:
    return f"{name}({','.join(show_term(a) for a in args)})"


# --- pattern-variable elimination (normal form with literal guards) ------------


def eliminate_pattern_vars(p: ClausalProgram, space: ProgramSpace) -> ClausalProgram:
    """Equivalent program whose clause heads are plain variables.

    Non-variable patterns become guard literals plus destructor terms
    substituted for the pattern variables; assignments are substituted away.
    The result is the normal form used by the positivity analysis.
    """
    params = _param_names(p)
    out = ClausalProgram(p.name, p.arity, p.kind, origin=p.origin)
    for c in p.clauses:
        conds: list[Condition] = []
        sub: dict[str, Term] = {}
        for var, pat in zip(params, c.patterns):
            _eliminate(_resolve_cons(pat, space), Var(var), conds, sub)
        for g in c.guards:
            if isinstance(g, Assign):
                sub[g.var] = substitute(g.term, sub)
            else:
                conds.append(_substitute_condition(g, sub))
        body = substitute(c.body, sub)
        out.clauses.append(Clause(tuple(PVar(v) for v in params), tuple(conds), body))
    return out


def _eliminate(pat: Pattern, access: Term, conds: list[Condition],
               sub: dict[str, Term]) -> None:
    if isinstance(pat, PVar):
        if isinstance(access, Var) and access.name == pat.name:
            return
        sub[pat.name] = access
        return
    if isinstance(pat, PLit):
        conds.append(Cmp("eq", access, lit(pat.value)))
        return
    if isinstance(pat, PSucc):
        conds.append(Cmp("lt", ZERO_TERM, access))
        sub[pat.name] = Apply("monus", (access, lit(1)))
        return
    if isinstance(pat, PDy1):
        conds.append(PredCond("isdy1", (access,)))
        _eliminate(pat.inner, Apply("dyarg", (access,)), conds, sub)
        return
    if isinstance(pat, PDy2):
        conds.append(PredCond("isdy2", (access,)))
        _eliminate(pat.inner, Apply("dyarg", (access,)), conds, sub)
        return
    if isinstance(pat, PPair):
        conds.append(Cmp("lt", ZERO_TERM, access))
        _eliminate(pat.left, Apply("fst", (access,)), conds, sub)
        _eliminate(pat.right, Apply("snd", (access,)), conds, sub)
        return
    if isinstance(pat, PAdic):
        conds.append(Cmp("le", lit(pat.lo), access))
        levels = pat.base.bit_length() - 1
        core: Term = access
        for _ in range(levels):
            core = Apply("dyarg", (core,))
        sub[pat.core] = core
        sub[pat.digit] = Apply("monus", (access, Apply("mul", (lit(pat.base), core))))
        return
    raise ClausalError(f"cannot eliminate pattern {pat!r}")


# --- structural totality (enables defining-equation lemmas) --------------------


def structurally_total(p: ClausalProgram) -> bool:
    """Conservative check: some argument position strictly decreases
    structurally at every recursive call."""
    calls: list[tuple[Clause, tuple[Term, ...]]] = []
    for c in p.clauses:
        for t in [c.body] + [x for g in c.guards for x in _condition_terms(g)]:
            for s in subterms(t):
                if s.tag == APPLY and s.symbol == p.name:
                    calls.append((c, s.args))
                elif s.tag == SELF:
                    calls.append((c, s.args))
    if not calls:
        return True
    for k in range(p.arity):
        if all(_call_decreases(c, args, k) for c, args in calls):
            return True
    return False


def _call_decreases(c: Clause, args: tuple[Term, ...], k: int) -> bool:
    if k >= len(args) or not isinstance(args[k], Var):
        return False
    name = args[k].name
    pat = c.patterns[k]
    return name in _proper_pattern_vars(pat)


def _proper_pattern_vars(pat: Pattern) -> set[str]:
    """Variables bound strictly below the root of a pattern."""
    if isinstance(pat, (PVar,)):
        return set()
    if isinstance(pat, PSucc):
        return {pat.name}
    if isinstance(pat, PAdic):
        return {pat.core}
    if isinstance(pat, (PDy1, PDy2)):
        return set(pattern_vars(pat.inner))
    if isinstance(pat, PPair):
        return set(pattern_vars(pat.left)) | set(pattern_vars(pat.right))
    if isinstance(pat, PCons):
        out: set[str] = set()
        for a in pat.args:
            out |= set(pattern_vars(a))
        return out
    return set()


# --- surface syntax -------------------------------------------------------------


def resolve_constants(t: Term, space: ProgramSpace) -> Term:
    """Rewrite variables naming 0-ary constructors into applications."""
    if isinstance(t, Var):
        c = space.constructors.get(t.name)
        if c is not None and not c.params:
            return Apply(t.name, ())
        return t
    if isinstance(t, Succ1):
        return Succ1(resolve_constants(t.inner, space))
    if isinstance(t, Succ2):
        return Succ2(resolve_constants(t.inner, space))
    if isinstance(t, PairT):
        return PairT(resolve_constants(t.left, space),
                     resolve_constants(t.right, space))
    if isinstance(t, Let):
        return Let(t.bound, resolve_constants(t.scrutinee, space),
                   resolve_constants(t.body, space))
    if isinstance(t, DyCase):
        return DyCase(resolve_constants(t.scrutinee, space),
                      resolve_constants(t.zero_branch, space),
                      t.one_var, resolve_constants(t.one_branch, space),
                      t.two_var, resolve_constants(t.two_branch, space))
    if isinstance(t, PairCase):
        return PairCase(resolve_constants(t.scrutinee, space),
                        resolve_constants(t.zero_branch, space),
                        t.left_var, t.right_var,
                        resolve_constants(t.pair_branch, space))
    if isinstance(t, Apply):
        return Apply(t.symbol, tuple(resolve_constants(a, space) for a in t.args))
    if isinstance(t, SelfApply):
        return SelfApply(tuple(resolve_constants(a, space) for a in t.args))
    return t


def _resolve_condition_constants(g: Condition, space: ProgramSpace) -> Condition:
    if isinstance(g, Cmp):
        return Cmp(g.op, resolve_constants(g.lhs, space),
                   resolve_constants(g.rhs, space))
    if isinstance(g, PredCond):
        return PredCond(g.name, tuple(resolve_constants(a, space)
                                      for a in g.args), g.negated)
    return Assign(resolve_constants(g.term, space), g.var)


def parse_clause(line: str, kind: str, space: ProgramSpace,
                 lineno: int | None = None) -> tuple[str, Clause]:
    """Parse one clause line; returns (program name, clause).

    Functions:   f(p1,...,pn) = body [<- g1 /\\ g2 ...]
    Predicates:  R(p1,...,pn) [<- g1 /\\ g2 ...]
    """
    ts = TokenStream(tokenize(line, lineno), lineno)
    name = ts.eat_name()
    head = _parse_head_patterns(ts, space)
    body: Term = lit(1)
    if kind == "function":
        ts.eat_sym("=")
        body = resolve_constants(parse_term(ts), space)
    guards: list[Condition] = []
    if ts.at_sym("<-"):
        ts.next()
        guards.append(_resolve_condition_constants(_parse_condition(ts), space))
        while ts.at_sym("/\\"):
            ts.next()
            guards.append(_resolve_condition_constants(_parse_condition(ts), space))
    ts.expect_done()
    bound = set()
    for p in head:
        bound.update(free_vars(p) - {c for c, cc in space.constructors.items()
                                     if not cc.params})
    guards = _resolve_assignments(guards, bound, lineno)
    patterns = tuple(_term_pattern(p, space, guards, lineno) if isinstance(p, Term) else p
                     for p in head)
    return name, Clause(patterns, tuple(guards), body)


def _parse_head_patterns(ts: TokenStream, space: ProgramSpace) -> list[Term]:
    ts.eat_sym("(")
    args = [parse_term(ts)]
    while ts.at_sym(","):
        ts.next()
        args.append(parse_term(ts))
    ts.eat_sym(")")
    return args


def _parse_condition(ts: TokenStream) -> Condition:
    negated = False
    if ts.at_sym("~"):
        ts.next()
        negated = True
    t = parse_term(ts)
    for sym in ("<=", ">=", "!=", "<", ">", "="):
        if ts.at_sym(sym):
            ts.next()
            if negated:
                raise ParseError("negation applies to predicate applications only",
                                 ts.line)
            rhs = parse_term(ts)
            op, swap = _NORMALIZE_OP[sym]
            return Cmp(op, rhs, t) if swap else Cmp(op, t, rhs)
    if t.tag != APPLY:
        raise ParseError("a bare guard must be a predicate application", ts.line)
    return PredCond(t.symbol, t.args, negated)


def _resolve_assignments(guards: list[Condition], bound: set[str],
                         lineno: int | None) -> list[Condition]:
    out: list[Condition] = []
    for g in guards:
        if isinstance(g, Cmp) and g.op == "eq" and isinstance(g.rhs, Var) \
                and g.rhs.name not in bound:
            out.append(Assign(g.lhs, g.rhs.name))
            bound.add(g.rhs.name)
        else:
            out.append(g)
    return out


def _term_pattern(t: Term, space: ProgramSpace, guards: list[Condition],
                  lineno: int | None) -> Pattern:
    v = literal_value(t)
    if v is not None:
        return PLit(v)
    if isinstance(t, Var):
        cons = space.constructors.get(t.name)
        if cons is not None and not cons.params:
            return PCons(t.name, ())
        return PVar(t.name)
    if isinstance(t, Succ1):
        return PDy1(_term_pattern(t.inner, space, guards, lineno))
    if isinstance(t, Succ2):
        return PDy2(_term_pattern(t.inner, space, guards, lineno))
    if isinstance(t, PairT):
        return PPair(_term_pattern(t.left, space, guards, lineno),
                     _term_pattern(t.right, space, guards, lineno))
    if isinstance(t, Apply):
        if t.symbol == "add" and len(t.args) == 2:
            core, inc = t.args
            if literal_value(inc) == 1 and isinstance(core, Var):
                return PSucc(core.name)
            if (isinstance(core, Apply) and core.symbol == "mul"
                    and isinstance(inc, Var)):
                base = literal_value(core.args[0])
                if base is not None and isinstance(core.args[1], Var):
                    return _padic_pattern(base, core.args[1].name, inc.name,
                                          guards, lineno)
        if t.symbol in space.constructors:
            return PCons(t.symbol, tuple(
                _term_pattern(a, space, guards, lineno) for a in t.args))
    raise ParseError(f"unsupported pattern {show_term(t)}", lineno)


def _padic_pattern(base: int, core: str, digit: str, guards: list[Condition],
                   lineno: int | None) -> PAdic:
    lo = hi = None
    for g in guards:
        if isinstance(g, Cmp) and g.op == "le" and isinstance(g.rhs, Var) \
                and g.rhs.name == digit:
            lo = literal_value(g.lhs)
        if isinstance(g, Cmp) and g.op == "lt" and isinstance(g.lhs, Var) \
                and g.lhs.name == digit:
            hi = literal_value(g.rhs)
    if lo is None or hi is None or hi - lo != base:
        raise ParseError(
            f"p-adic pattern {base}*{core}+{digit} needs range guards "
            f"lo <= {digit} and {digit} < lo+{base}", lineno)
    if base < 2 or (base & (base - 1)) != 0 or lo != base - 1:
        raise ParseError(
            f"executable p-adic patterns need a power-of-two base with offset "
            f"base-1; got base {base}, offset {lo}", lineno)
    return PAdic(base, core, digit, lo)


def show_pattern(p: Pattern) -> str:
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PLit):
        return str(p.value)
    if isinstance(p, PSucc):
        return f"{p.name}+1"
    if isinstance(p, PDy1):
        return f"s1 {show_pattern(p.inner)}"
    if isinstance(p, PDy2):
        return f"s2 {show_pattern(p.inner)}"
    if isinstance(p, PPair):
        return f"({show_pattern(p.left)},{show_pattern(p.right)})"
    if isinstance(p, PAdic):
        return f"{p.base}*{p.core}+{p.digit}"
    if isinstance(p, PCons):
        inner = ",".join(show_pattern(a) for a in p.args)
        return f"{p.name}({inner})"
    raise ClausalError(f"unknown pattern {p!r}")


def show_condition(g: Condition) -> str:
    if isinstance(g, Cmp):
        return f"{show_term(g.lhs)} {_SHOW_OP[g.op]} {show_term(g.rhs)}"
    if isinstance(g, PredCond):
        s = _show_pred(g.name, g.args)
        return f"~{s}" if g.negated else s
    return f"{show_term(g.term)} = {g.var}"


def show_clause(name: str, c: Clause, kind: str) -> str:
    head = f"{name}({','.join(show_pattern(p) for p in c.patterns)})"
    parts = [head]
    if kind == "function":
        parts.append(f"= {show_term(c.body, self_name=name)}")
    if c.guards:
        parts.append("<- " + " /\\ ".join(show_condition(g) for g in c.guards))
    return " ".join(parts)


def show_program(p: ClausalProgram) -> str:
    lines = [f"{'pred' if p.kind == 'predicate' else 'fun'} {p.name}/{p.arity}"]
    for c in p.clauses:
        lines.append("  " + show_clause(p.name, c, p.kind))
    return "\n".join(lines)

