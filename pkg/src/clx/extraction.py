"""Program extraction from accepted proofs.

Every root-to-define path of the proof tree contributes one clause: the
clause head comes from the define's argument tuple with the path's pattern
equations applied, the guards are the path's discrimination cases and
assignments in order, and the body is the define's right-hand side.
Branches that close without a definition contribute nothing; the default-0
convention of clausal programs covers them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clausal import (
    Assign, Clause, ClausalProgram, Cmp, Condition, PAdic, PCons, PLit, PPair,
    PSucc, PVar, Pattern, PredCond, ProgramSpace, pattern_vars, show_clause,
)
from .logic import CmpAtom, FalseF, Formula, Not, PredAtom, TrueF
from .proofchecker import CheckReport, DefineRecord
from .syntax import show_term
from .terms import (
    Apply, PairT, Succ1, Succ2, Term, Var, lit, literal_value, substitute,
)


class ExtractionError(ValueError):
    pass


@dataclass
class ExtractionResult:
    programs: dict[str, ClausalProgram]
    omitted_branches: list[str]
    obligations: list


def extract(report: CheckReport, spec, space: ProgramSpace) -> ExtractionResult:
    """Turn the defines of an accepted check into clausal programs."""
    if report.errors:
        raise ExtractionError(f"proof {report.proof} was rejected")
    programs: dict[str, ClausalProgram] = {}
    for rec in report.defines:
        prog = programs.get(rec.unknown)
        if prog is None:
            kind = "predicate" if spec.kind == "predicate" else "function"
            prog = ClausalProgram(rec.unknown, len(rec.args), kind,
                                  origin="extracted")
            programs[rec.unknown] = prog
        clause = _clause_of_define(rec, spec, space)
        if clause is not None:
            prog.clauses.append(clause)
    omitted = _omitted_branches(report)
    return ExtractionResult(programs, omitted, list(report.obligations))


def extract_predicate(report: CheckReport, spec, space: ProgramSpace) -> ClausalProgram:
    """Extraction entry point for predicate unknowns (characteristic functions)."""
    if spec.kind != "predicate":
        raise ExtractionError("extract_predicate needs a predicate specification")
    result = extract(report, spec, space)
    return result.programs[spec.unknown]


def _omitted_branches(report: CheckReport) -> list[str]:
    defined = {rec.branch for rec in report.defines}
    leaves = {o.branch for o in report.obligations if o.kind == "leaf"}
    out = []
    for leaf in sorted(leaves):
        if not any(leaf == d or leaf.startswith(d + ".") for d in defined):
            out.append(leaf)
    return out


def _clause_of_define(rec: DefineRecord, spec, space: ProgramSpace) -> Clause | None:
    pattern_subst: dict[str, Term] = {}
    guards: list[Condition] = []
    for item in rec.path:
        if item[0] == "pattern":
            _kind, var, shape = item
            pattern_subst[var] = substitute(shape, pattern_subst)
        elif item[0] == "case":
            guards.append(_formula_condition(substitute_formula_terms(item[1],
                                                                      pattern_subst)))
        elif item[0] == "assign":
            _kind, term, var = item
            guards.append(Assign(substitute(term, pattern_subst), var))
    head = tuple(_term_to_pattern(substitute(a, pattern_subst), space)
                 for a in rec.args)
    if rec.pred_body is not None:
        body_formula = rec.pred_body
        if isinstance(body_formula, FalseF):
            return None                      # negative clause, omitted by default
        if isinstance(body_formula, PredAtom):
            guards.append(PredCond(body_formula.name, body_formula.args))
        elif not isinstance(body_formula, TrueF):
            raise ExtractionError(
                f"predicate define body must be a truth value or predicate "
                f"application, got {body_formula!r}")
        return Clause(head, tuple(guards), lit(1))
    body = substitute(rec.body, pattern_subst)
    return Clause(head, tuple(guards), body)


def substitute_formula_terms(f: Formula, sub: dict[str, Term]) -> Formula:
    from .logic import formula_substitute
    return formula_substitute(f, sub) if sub else f


def _formula_condition(f: Formula) -> Condition:
    if isinstance(f, CmpAtom):
        op, lhs, rhs = f.op, f.lhs, f.rhs
        if op == "gt":
            op, lhs, rhs = "lt", rhs, lhs
        elif op == "ge":
            op, lhs, rhs = "le", rhs, lhs
        return Cmp(op, lhs, rhs)
    if isinstance(f, PredAtom):
        return PredCond(f.name, f.args)
    if isinstance(f, Not) and isinstance(f.body, PredAtom):
        return PredCond(f.body.name, f.body.args, negated=True)
    raise ExtractionError(
        f"discrimination case is not a guard literal: {f!r}")


def _term_to_pattern(t: Term, space: ProgramSpace) -> Pattern:
    v = literal_value(t)
    if v is not None:
        return PLit(v)
    if isinstance(t, Var):
        return PVar(t.name)
    if isinstance(t, PairT):
        return PPair(_term_to_pattern(t.left, space), _term_to_pattern(t.right, space))
    if isinstance(t, Succ1):
        return _succ_pattern(t, space, 1)
    if isinstance(t, Succ2):
        return _succ_pattern(t, space, 2)
    if isinstance(t, Apply):
        if t.symbol == "add" and len(t.args) == 2:
            core, inc = t.args
            if literal_value(inc) == 1 and isinstance(core, Var):
                return PSucc(core.name)
            if (isinstance(core, Apply) and core.symbol == "mul"
                    and isinstance(inc, Var)):
                base = literal_value(core.args[0])
                if base is not None and isinstance(core.args[1], Var):
                    return PAdic(base, core.args[1].name, inc.name, base - 1)
        if t.symbol in space.constructors:
            return PCons(t.symbol, tuple(_term_to_pattern(a, space) for a in t.args))
    raise ExtractionError(f"cannot read {show_term(t)} as a clause head pattern")


def _succ_pattern(t: Term, space: ProgramSpace, digit: int) -> Pattern:
    from .clausal import PDy1, PDy2
    inner = _term_to_pattern(t.inner, space)
    return PDy1(inner) if digit == 1 else PDy2(inner)


# --- explicit completion ----------------------------------------------------------


def completion(total_name: str, params: tuple[str, ...], call: Term,
               guard: Condition | None) -> ClausalProgram:
    """Wrap a (possibly partial) function into an explicitly guarded total one."""
    prog = ClausalProgram(total_name, len(params), "function", origin="extracted")
    guards = () if guard is None else (guard,)
    prog.clauses.append(Clause(tuple(PVar(p) for p in params), guards, call))
    return prog


# --- comparison up to renaming ------------------------------------------------------


def compare_programs(actual: ClausalProgram, expected: ClausalProgram) -> list[str]:
    """Differences between two programs up to variable renaming and guard
    order within a clause; empty means they match."""
    diffs: list[str] = []
    if actual.name != expected.name:
        diffs.append(f"name {actual.name} != {expected.name}")
    if actual.arity != expected.arity:
        diffs.append(f"arity {actual.arity} != {expected.arity}")
    if actual.kind != expected.kind:
        diffs.append(f"kind {actual.kind} != {expected.kind}")
    if len(actual.clauses) != len(expected.clauses):
        diffs.append(f"clause count {len(actual.clauses)} != {len(expected.clauses)}")
    if diffs:
        return diffs
    for i, (a, b) in enumerate(zip(actual.clauses, expected.clauses), 1):
        if not _clause_alpha_eq(a, b):
            diffs.append(
                f"clause {i} differs:\n  extracted: "
                f"{show_clause(actual.name, a, actual.kind)}\n  expected:  "
                f"{show_clause(expected.name, b, expected.kind)}")
    return diffs


def _clause_alpha_eq(a: Clause, b: Clause) -> bool:
    if len(a.patterns) != len(b.patterns) or len(a.guards) != len(b.guards):
        return False
    env: dict[str, str] = {}
    for pa, pb in zip(a.patterns, b.patterns):
        if not _pattern_alpha(pa, pb, env):
            return False
    return _guards_alpha(list(a.guards), list(b.guards), a.body, b.body, env)


def _guards_alpha(ga: list, gb: list, body_a: Term, body_b: Term,
                  env: dict[str, str]) -> bool:
    if not ga:
        from .terms import alpha_equal
        return alpha_equal(body_a, body_b, env)
    head, rest = ga[0], ga[1:]
    for k, cand in enumerate(gb):
        trial = dict(env)
        if _condition_alpha(head, cand, trial):
            if _guards_alpha(rest, gb[:k] + gb[k + 1:], body_a, body_b, trial):
                env.clear()
                env.update(trial)
                return True
    return False


def _condition_alpha(a: Condition, b: Condition, env: dict[str, str]) -> bool:
    from .terms import alpha_equal
    if isinstance(a, Cmp) and isinstance(b, Cmp):
        return (a.op == b.op and alpha_equal(a.lhs, b.lhs, env)
                and alpha_equal(a.rhs, b.rhs, env))
    if isinstance(a, PredCond) and isinstance(b, PredCond):
        return (a.name == b.name and a.negated == b.negated
                and len(a.args) == len(b.args)
                and all(alpha_equal(x, y, env) for x, y in zip(a.args, b.args)))
    if isinstance(a, Assign) and isinstance(b, Assign):
        if not alpha_equal(a.term, b.term, env):
            return False
        if a.var in env:
            return env[a.var] == b.var
        env[a.var] = b.var
        return True
    return False


def _pattern_alpha(a: Pattern, b: Pattern, env: dict[str, str]) -> bool:
    from .clausal import PDy1, PDy2
    if isinstance(a, PVar) and isinstance(b, PVar):
        if a.name in env:
            return env[a.name] == b.name
        env[a.name] = b.name
        return True
    if isinstance(a, PLit) and isinstance(b, PLit):
        return a.value == b.value
    if isinstance(a, PSucc) and isinstance(b, PSucc):
        if a.name in env:
            return env[a.name] == b.name
        env[a.name] = b.name
        return True
    if isinstance(a, PPair) and isinstance(b, PPair):
        return (_pattern_alpha(a.left, b.left, env)
                and _pattern_alpha(a.right, b.right, env))
    if isinstance(a, PDy1) and isinstance(b, PDy1):
        return _pattern_alpha(a.inner, b.inner, env)
    if isinstance(a, PDy2) and isinstance(b, PDy2):
        return _pattern_alpha(a.inner, b.inner, env)
    if isinstance(a, PAdic) and isinstance(b, PAdic):
        if a.base != b.base or a.lo != b.lo:
            return False
        for x, y in ((a.core, b.core), (a.digit, b.digit)):
            if x in env:
                if env[x] != y:
                    return False
            else:
                env[x] = y
        return True
    if isinstance(a, PCons) and isinstance(b, PCons):
        return (a.name == b.name and len(a.args) == len(b.args)
                and all(_pattern_alpha(x, y, env) for x, y in zip(a.args, b.args)))
    return False
