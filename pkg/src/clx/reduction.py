"""Deterministic leftmost-redex reduction with step accounting.

The machine reduces a closed term to a mixed numeral by repeatedly rewriting
the leftmost redex.  On this first-order language the leftmost redex is always
the one an environment machine reaches by left-to-right evaluation, so the
machine below performs exactly the same contractions in the same order while
paying O(1) bookkeeping per contraction instead of re-scanning the term.

steps counts contractions (let, dyadic/pair discrimination, lambda); head
conversions between dyadic and pair form are tallied separately in conv_steps
and never consume fuel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .numerals import (
    D1, D2, PR, Z, MixedNumeral, ZERO, dy1, dy2, mkpair, numeral_of, unpair,
    value,
)
from .terms import (
    APPLY, DYCASE, LET, PAIR_T, PAIRCASE, S1, S2, SELF, VAR, ZERO_T,
    Apply, DefinitionTable, FuncDef, PairT, Succ1, Succ2, Term, ZERO_TERM,
)


class ReductionError(ValueError):
    """Open term or unbound symbol reached during reduction."""


@dataclass(frozen=True)
class Value:
    numeral: MixedNumeral
    steps: int
    conv_steps: int


@dataclass(frozen=True)
class FuelExhausted:
    steps: int
    conv_steps: int


ReductionOutcome = Value | FuelExhausted

# frame tags
_FS1, _FS2, _FPAIRL, _FPAIRR, _FLET, _FDY, _FPC, _FARG = range(8)


def _to_dyadic_head(n: MixedNumeral) -> MixedNumeral:
    # caller guarantees n.tag == PR
    v = value(n)
    d = 1 if v % 2 == 1 else 2
    inner = numeral_of((v - d) // 2, "dyadic")
    return MixedNumeral(D1 if d == 1 else D2, inner)


def _to_pair_head(n: MixedNumeral) -> MixedNumeral:
    # caller guarantees n.tag in (D1, D2); such values are positive
    a, b = unpair(value(n))
    return mkpair(numeral_of(a, "dyadic"), numeral_of(b, "dyadic"))


def reduce(t: Term, env: DefinitionTable, fuel: int,
           trace: Callable[[int, str, str, str], None] | None = None) -> ReductionOutcome:
    """Reduce a closed term; returns Value or FuelExhausted.

    trace, when given, receives (step_index, redex_kind, position, head) per
    contraction, where position is the path of the redex in the current term.
    """
    steps = 0
    conv = 0
    stack: list = []
    # control is either a term in an environment or a finished value
    ctrl_term: Term | None = t
    ctrl_env: tuple | None = None
    ctrl_self: FuncDef | None = None
    val: MixedNumeral | None = None

    def path() -> str:
        out = []
        for fr in stack:
            ftag = fr[0]
            if ftag in (_FS1, _FS2, _FPAIRL):
                out.append("0")
            elif ftag == _FPAIRR:
                out.append("1")
            elif ftag in (_FLET, _FDY, _FPC):
                out.append("0")
            elif ftag == _FARG:
                out.append(str(len(fr[4])))
        return ".".join(out) if out else "e"

    def head_name(n: MixedNumeral) -> str:
        return ("0", "s1", "s2", "pair")[n.tag]

    while True:
        if ctrl_term is not None:
            term = ctrl_term
            tag = term.tag
            if tag == ZERO_T:
                ctrl_term, val = None, ZERO
                continue
            if tag == VAR:
                e = ctrl_env
                name = term.name
                while e is not None:
                    if e[0] == name:
                        break
                    e = e[2]
                if e is None:
                    raise ReductionError(f"unbound variable {term.name}")
                ctrl_term, val = None, e[1]
                continue
            if tag == S1:
                stack.append((_FS1,))
                ctrl_term = term.inner
                continue
            if tag == S2:
                stack.append((_FS2,))
                ctrl_term = term.inner
                continue
            if tag == PAIR_T:
                stack.append((_FPAIRL, term.right, ctrl_env, ctrl_self))
                ctrl_term = term.left
                continue
            if tag == LET:
                stack.append((_FLET, term.bound, term.body, ctrl_env, ctrl_self))
                ctrl_term = term.scrutinee
                continue
            if tag == DYCASE:
                stack.append((_FDY, term, ctrl_env, ctrl_self))
                ctrl_term = term.scrutinee
                continue
            if tag == PAIRCASE:
                stack.append((_FPC, term, ctrl_env, ctrl_self))
                ctrl_term = term.scrutinee
                continue
            if tag == APPLY:
                fdef = env.defs.get(term.symbol)
                if fdef is None:
                    raise ReductionError(f"unbound function symbol {term.symbol}")
            else:  # SELF
                fdef = ctrl_self
                if fdef is None:
                    raise ReductionError("self-application outside a definition")
            if len(term.args) != fdef.arity:
                raise ReductionError(
                    f"{fdef.name} expects {fdef.arity} arguments, got {len(term.args)}")
            if term.args:
                stack.append((_FARG, fdef, term.args, ctrl_env, [], ctrl_self))
                ctrl_term = term.args[0]
                continue
            # zero-arity application is itself the lambda redex
            if steps >= fuel:
                return FuelExhausted(steps, conv)
            steps += 1
            if trace:
                trace(steps, "apply", path(), fdef.name)
            ctrl_term, ctrl_env, ctrl_self = fdef.body, None, fdef
            continue

        # a value is ready: feed the top frame
        if not stack:
            return Value(val, steps, conv)
        fr = stack.pop()
        ftag = fr[0]
        if ftag == _FS1:
            val = dy1(val)
            continue
        if ftag == _FS2:
            val = dy2(val)
            continue
        if ftag == _FPAIRL:
            stack.append((_FPAIRR, val))
            ctrl_term, ctrl_env, ctrl_self = fr[1], fr[2], fr[3]
            val = None
            continue
        if ftag == _FPAIRR:
            val = mkpair(fr[1], val)
            continue
        if ftag == _FLET:
            if steps >= fuel:
                return FuelExhausted(steps, conv)
            steps += 1
            if trace:
                trace(steps, "let", path(), head_name(val))
            ctrl_term = fr[2]
            ctrl_env = (fr[1], val, fr[3])
            ctrl_self = fr[4]
            val = None
            continue
        if ftag == _FDY:
            if steps >= fuel:
                return FuelExhausted(steps, conv)
            steps += 1
            term, fenv, fself = fr[1], fr[2], fr[3]
            n = val
            if n.tag == PR:
                n = _to_dyadic_head(n)
                conv += 1
            if trace:
                trace(steps, "dycase", path(), head_name(n))
            if n.tag == Z:
                ctrl_term, ctrl_env = term.zero_branch, fenv
            elif n.tag == D1:
                ctrl_term, ctrl_env = term.one_branch, (term.one_var, n.a, fenv)
            else:
                ctrl_term, ctrl_env = term.two_branch, (term.two_var, n.a, fenv)
            ctrl_self = fself
            val = None
            continue
        if ftag == _FPC:
            if steps >= fuel:
                return FuelExhausted(steps, conv)
            steps += 1
            term, fenv, fself = fr[1], fr[2], fr[3]
            n = val
            if n.tag in (D1, D2):
                n = _to_pair_head(n)
                conv += 1
            if trace:
                trace(steps, "paircase", path(), head_name(n))
            if n.tag == Z:
                ctrl_term, ctrl_env = term.zero_branch, fenv
            else:
                ctrl_env = (term.left_var, n.a,
                            (term.right_var, n.b, fenv))
                ctrl_term = term.pair_branch
            ctrl_self = fself
            val = None
            continue
        # _FARG
        fdef, args, fenv, done, fself = fr[1], fr[2], fr[3], fr[4], fr[5]
        done.append(val)
        val = None
        if len(done) < len(args):
            stack.append(fr)
            ctrl_term, ctrl_env, ctrl_self = args[len(done)], fenv, fself
            continue
        if steps >= fuel:
            return FuelExhausted(steps, conv)
        steps += 1
        if trace:
            trace(steps, "apply", path(), fdef.name)
        e = None
        for pname, pval in zip(fdef.params, done):
            e = (pname, pval, e)
        ctrl_term, ctrl_env, ctrl_self = fdef.body, e, fdef


def run_function(name: str, args: list[int], env: DefinitionTable,
                 fuel: int) -> ReductionOutcome:
    """Reduce name(args) with dyadic argument numerals."""
    call = Apply(name, tuple(_embed(numeral_of(a, "dyadic")) for a in args))
    return reduce(call, env, fuel)


def run_on_numerals(name: str, args: list[MixedNumeral], env: DefinitionTable,
                    fuel: int) -> ReductionOutcome:
    call = Apply(name, tuple(_embed(a) for a in args))
    return reduce(call, env, fuel)


def _embed(n: MixedNumeral) -> Term:
    if n.tag == Z:
        return ZERO_TERM
    if n.tag == D1:
        return Succ1(_embed(n.a))
    if n.tag == D2:
        return Succ2(_embed(n.a))
    return PairT(_embed(n.a), _embed(n.b))


def graph_holds(f: FuncDef | str, args: list[int], y: int,
                env: DefinitionTable, fuel: int) -> str:
    """Operational graph relation: 'yes', 'no', or 'unknown' (fuel ran out)."""
    name = f if isinstance(f, str) else f.name
    out = run_function(name, args, env, fuel)
    if isinstance(out, FuelExhausted):
        return "unknown"
    return "yes" if value(out.numeral) == y else "no"
