"""Bounded arithmetic prover for leaf obligations.

Comparisons are normalized into polynomials over "atoms": variables and
applications treated as opaque values, with products kept as monomials.
Monus terms are eliminated by case splits, equations with a unit-coefficient
linear atom are substituted away (so an assignment z = 2*s reaches into
occurrences of z^2), and the rest goes to an integer-tightened
Fourier-Motzkin elimination.  Everything is refutation-based: a goal is
proved when every disjunctive branch of assumptions + negated goal is
arithmetically or propositionally unsatisfiable.

This is a bounded decision procedure, deliberately incomplete: an undecided
branch just means "not proved here".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .logic import (
    And, BExists, BForall, CmpAtom, Exists, FalseF, Forall, Formula, GraphAtom,
    Iff, Implies, Not, Or, PredAtom, TrueF, formula_free_vars,
)
from .terms import APPLY, PAIR_T, S1, S2, SELF, VAR, Apply, Term, Var, literal_value

# monomial: tuple of (atom_key, power), sorted; poly: dict monomial -> int
_ONE = ()


def _mono_mul(a: tuple, b: tuple) -> tuple:
    powers: dict = {}
    for k, p in a:
        powers[k] = powers.get(k, 0) + p
    for k, p in b:
        powers[k] = powers.get(k, 0) + p
    return tuple(sorted(powers.items()))


def p_const(c: int) -> dict:
    return {_ONE: c} if c else {}


def p_atom(key) -> dict:
    return {((key, 1),): 1}


def p_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def p_scale(a: dict, k: int) -> dict:
    if k == 0:
        return {}
    return {m: c * k for m, c in a.items()}


def p_sub(a: dict, b: dict) -> dict:
    return p_add(a, p_scale(b, -1))


def p_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def p_canon(a: dict) -> tuple:
    return tuple(sorted(a.items()))


@dataclass
class AtomInfo:
    kind: str                    # var | app | monus | opaque
    monus_parts: tuple[dict, dict] | None = None


class PolyContext:
    """Interns atoms and normalizes terms to polynomials."""

    def __init__(self) -> None:
        self.atoms: dict = {}

    def term_poly(self, t: Term) -> dict:
        v = literal_value(t)
        if v is not None:
            return p_const(v)
        tag = t.tag
        if tag == VAR:
            key = ("var", t.name)
            self.atoms.setdefault(key, AtomInfo("var"))
            return p_atom(key)
        if tag == S1:
            return p_add(p_scale(self.term_poly(t.inner), 2), p_const(1))
        if tag == S2:
            return p_add(p_scale(self.term_poly(t.inner), 2), p_const(2))
        if tag in (APPLY, SELF):
            name = t.symbol if tag == APPLY else "@self"
            if name == "add" and len(t.args) == 2:
                return p_add(self.term_poly(t.args[0]), self.term_poly(t.args[1]))
            if name == "mul" and len(t.args) == 2:
                return p_mul(self.term_poly(t.args[0]), self.term_poly(t.args[1]))
            if name == "sq" and len(t.args) == 1:
                inner = self.term_poly(t.args[0])
                return p_mul(inner, inner)
            if name == "succ" and len(t.args) == 1:
                return p_add(self.term_poly(t.args[0]), p_const(1))
            if name == "dbl" and len(t.args) == 1:
                return p_scale(self.term_poly(t.args[0]), 2)
            if name == "monus" and len(t.args) == 2:
                lp = self.term_poly(t.args[0])
                rp = self.term_poly(t.args[1])
                key = ("monus", p_canon(lp), p_canon(rp))
                self.atoms.setdefault(key, AtomInfo("monus", (lp, rp)))
                return p_atom(key)
            args = tuple(p_canon(self.term_poly(a)) for a in t.args)
            key = ("app", name, args)
            self.atoms.setdefault(key, AtomInfo("app"))
            return p_atom(key)
        if tag == PAIR_T:
            lp = p_canon(self.term_poly(t.left))
            rp = p_canon(self.term_poly(t.right))
            key = ("pair", lp, rp)
            self.atoms.setdefault(key, AtomInfo("opaque"))
            return p_atom(key)
        key = ("term", repr(t))
        self.atoms.setdefault(key, AtomInfo("opaque"))
        return p_atom(key)


# --- literal layer ------------------------------------------------------------

# cmp literal ops are only le / eq / ne after negation-normalization
_NEG_CMP = {"lt": ("le", True), "le": ("lt", True), "eq": ("ne", False),
            "ne": ("eq", False), "gt": ("le", False), "ge": ("lt", False)}
_POS_NORM = {"gt": ("lt", True), "ge": ("le", True)}


@dataclass(frozen=True)
class Lit:
    kind: str      # cmp | pred | graph | opaque | false | true
    data: tuple


def _cmp_lit(op: str, lhs: Term, rhs: Term) -> Lit:
    if op in _POS_NORM:
        op, swap = _POS_NORM[op]
        lhs, rhs = rhs, lhs
    return Lit("cmp", (op, lhs, rhs))


def _negate_cmp(op: str, lhs: Term, rhs: Term) -> Lit:
    if op in ("gt", "ge"):
        op2, swap = _POS_NORM[op]
        return _negate_cmp(op2, rhs, lhs)
    new_op, swap = _NEG_CMP[op]
    return _cmp_lit(new_op, rhs, lhs) if swap else _cmp_lit(new_op, lhs, rhs)


class _Blowup(Exception):
    pass


class DnfContext:
    def __init__(self, cap: int):
        self.cap = cap
        self.fresh = itertools.count(1)

    def convert(self, f: Formula, positive: bool) -> list[list[Lit]]:
        out = self._go(f, positive)
        if len(out) > self.cap:
            raise _Blowup()
        return out

    def _go(self, f: Formula, pos: bool) -> list[list[Lit]]:
        if isinstance(f, TrueF):
            return [[]] if pos else [[Lit("false", ())]]
        if isinstance(f, FalseF):
            return [[Lit("false", ())]] if pos else [[]]
        if isinstance(f, CmpAtom):
            if pos:
                return [[_cmp_lit(f.op, f.lhs, f.rhs)]]
            return [[_negate_cmp(f.op, f.lhs, f.rhs)]]
        if isinstance(f, PredAtom):
            return [[Lit("pred", (f.name, f.args, pos))]]
        if isinstance(f, GraphAtom):
            return [[Lit("graph", (f.term, f.var, pos))]]
        if isinstance(f, Not):
            return self._go(f.body, not pos)
        if isinstance(f, And):
            return self._combine(f.parts, pos, conj=pos)
        if isinstance(f, Or):
            return self._combine(f.parts, pos, conj=not pos)
        if isinstance(f, Implies):
            return self._go(Or((Not(f.premise), f.conclusion)), pos)
        if isinstance(f, Iff):
            both = And((Implies(f.lhs, f.rhs), Implies(f.rhs, f.lhs)))
            return self._go(both, pos)
        # quantified formulas stay opaque literals; complementary occurrences
        # of the same quantified formula still refute each other
        from .logic import show_formula
        return [[Lit("opaque", (show_formula(f), pos))]]

    def _combine(self, parts: tuple[Formula, ...], pos: bool, conj: bool) -> list[list[Lit]]:
        if conj:
            branches: list[list[Lit]] = [[]]
            for p in parts:
                sub = self._go(p, pos)
                branches = [a + b for a in branches for b in sub]
                if len(branches) > self.cap:
                    raise _Blowup()
            return branches
        out: list[list[Lit]] = []
        for p in parts:
            out.extend(self._go(p, pos))
            if len(out) > self.cap:
                raise _Blowup()
        return out


def _rename_formula_var(f: Formula, old: str, new: str) -> Formula:
    from .logic import formula_substitute
    return formula_substitute(f, {old: Var(new)})


# --- branch refutation ----------------------------------------------------------


class Prover:
    """Refutation prover: entails(assumptions, goal)."""

    def __init__(self, interp=None, dnf_cap: int = 2048, fm_constraints: int = 600,
                 monus_splits: int = 7):
        self.interp = interp
        self.dnf_cap = dnf_cap
        self.fm_constraints = fm_constraints
        self.monus_splits = monus_splits

    def entails(self, assumptions: list[Formula], goal: Formula) -> bool:
        return self._refute(list(assumptions), goal)

    def unsat(self, formulas: list[Formula]) -> bool:
        """True when the conjunction is refuted on every DNF branch."""
        return self._refute(list(formulas), None)

    def _refute(self, positives: list[Formula], neg_goal: Formula | None) -> bool:
        ctx = DnfContext(self.dnf_cap)
        try:
            branches: list[list[Lit]] = [[]]
            for a in positives:
                branches = self._fold(branches, ctx.convert(a, True))
                if branches is None:
                    return False
            if neg_goal is not None:
                branches = self._fold(branches, ctx.convert(neg_goal, False))
                if branches is None:
                    return False
        except _Blowup:
            return False
        return all(self._branch_unsat(br) for br in branches)

    def _fold(self, branches: list[list[Lit]],
              sub: list[list[Lit]]) -> list[list[Lit]] | None:
        """Distribute; branches refuted by cheap literal clashes are dropped."""
        out: list[list[Lit]] = []
        for x in branches:
            for y in sub:
                combined = x + y
                if _cheaply_unsat(combined, len(x)):
                    continue
                out.append(combined)
                if len(out) > self.dnf_cap:
                    return None
        return out

    # -- one conjunctive branch --

    @staticmethod
    def _quick_clash(a: Lit, b: Lit) -> bool:
        return _lits_clash(a, b)

    def _branch_unsat(self, lits: list[Lit]) -> bool:
        pred_state: dict = {}
        graph_state: dict = {}
        opaque_state: dict = {}
        cmps: list[tuple[str, Term, Term]] = []
        for l in lits:
            if l.kind == "false":
                return True
            if l.kind == "cmp":
                cmps.append(l.data)
            elif l.kind == "pred":
                name, args, pos = l.data
                val = self._ground_pred(name, args)
                if val is not None:
                    if val != pos:
                        return True
                    continue
                key = (name, tuple(repr(a) for a in args))
                if key in pred_state and pred_state[key] != pos:
                    return True
                pred_state[key] = pos
            elif l.kind == "graph":
                term, var, pos = l.data
                key = (repr(term), var)
                if key in graph_state and graph_state[key] != pos:
                    return True
                graph_state[key] = pos
            elif l.kind == "opaque":
                key, pos = l.data
                if key in opaque_state and opaque_state[key] != pos:
                    return True
                opaque_state[key] = pos
        return self._cmps_unsat(cmps)

    def _ground_pred(self, name: str, args: tuple[Term, ...]) -> bool | None:
        if self.interp is None:
            return None
        vals = []
        for a in args:
            v = literal_value(a)
            if v is None:
                return None
            vals.append(v)
        from .clausal import BudgetExceeded, ClausalError, Diverged
        try:
            return self.interp.call(name, tuple(vals)) != 0
        except (Diverged, BudgetExceeded, ClausalError):
            return None

    def _cmps_unsat(self, cmps: list[tuple[str, Term, Term]]) -> bool:
        ctx = PolyContext()
        return self._cmps_unsat_from(ctx, [], cmps, 0)

    def _cmps_unsat_from(self, ctx: PolyContext, constraints: list[dict],
                         cmps: list[tuple[str, Term, Term]], i: int) -> bool:
        while i < len(cmps):
            op, lhs, rhs = cmps[i]
            i += 1
            lp = ctx.term_poly(lhs)
            rp = ctx.term_poly(rhs)
            if op == "le":
                constraints = constraints + [p_sub(rp, lp)]
            elif op == "lt":
                constraints = constraints + [p_add(p_sub(rp, lp), p_const(-1))]
            elif op == "eq":
                constraints = constraints + [p_sub(rp, lp), p_sub(lp, rp)]
            elif op == "ne":
                # disequality splits into the two strict orders
                a = self._cmps_unsat_from(
                    ctx, constraints + [p_add(p_sub(rp, lp), p_const(-1))], cmps, i)
                if not a:
                    return False
                return self._cmps_unsat_from(
                    ctx, constraints + [p_add(p_sub(lp, rp), p_const(-1))], cmps, i)
            else:
                raise ValueError(f"unexpected comparison op {op}")
        return self._poly_unsat(ctx, constraints)

    # -- polynomial constraint core --

    def _poly_unsat(self, ctx: PolyContext, constraints: list[dict]) -> bool:
        # split monus atoms first
        monus = [k for k, info in ctx.atoms.items() if info.kind == "monus"]
        return self._split_monus(ctx, constraints, monus, 0)

    def _split_monus(self, ctx: PolyContext, constraints: list[dict],
                     monus: list, depth: int) -> bool:
        live = [k for k in monus if any(self._poly_mentions(c, k) for c in constraints)]
        if not live or depth >= self.monus_splits:
            return self._fm_unsat(ctx, constraints)
        key = live[0]
        lp, rp = ctx.atoms[key].monus_parts
        # case l >= r: atom = l - r
        case1 = [self._poly_subst(c, key, p_sub(lp, rp)) for c in constraints]
        case1.append(p_sub(lp, rp))
        # case l < r: atom = 0
        case2 = [self._poly_subst(c, key, {}) for c in constraints]
        case2.append(p_add(p_sub(rp, lp), p_const(-1)))
        rest = [k for k in live if k != key]
        return (self._split_monus(ctx, case1, rest, depth + 1)
                and self._split_monus(ctx, case2, rest, depth + 1))

    @staticmethod
    def _poly_mentions(p: dict, key) -> bool:
        return any(k == key for m in p for k, _pow in m)

    @staticmethod
    def _poly_subst(p: dict, key, repl: dict) -> dict:
        out: dict = {}
        for m, c in p.items():
            deg = 0
            powers = []
            for k, pw in m:
                if k == key:
                    deg = pw
                else:
                    powers.append((k, pw))
            term = {tuple(powers): c}
            for _ in range(deg):
                term = p_mul(term, repl)
            for mm, cc in term.items():
                v = out.get(mm, 0) + cc
                if v:
                    out[mm] = v
                else:
                    out.pop(mm, None)
        return out

    def _fm_unsat(self, ctx: PolyContext, constraints: list[dict]) -> bool:
        constraints = [dict(c) for c in constraints]
        constraints = self._eliminate_equalities(constraints)
        # naturals: every atom and every monomial is >= 0
        monos = set()
        for c in constraints:
            monos.update(m for m in c if m != _ONE)
        for m in monos:
            constraints.append({m: 1})
        # drop duplicates
        seen = set()
        uniq = []
        for c in constraints:
            key = p_canon(c)
            if key not in seen:
                seen.add(key)
                uniq.append(c)
        return self._fm(uniq)

    def _eliminate_equalities(self, constraints: list[dict]) -> list[dict]:
        # find p>=0 and -p>=0 pairs, solve for a unit linear monomial
        for _ in range(24):
            index = {p_canon(c): i for i, c in enumerate(constraints)}
            done = True
            for i, c in enumerate(constraints):
                neg = p_canon(p_scale(c, -1))
                j = index.get(neg)
                if j is None or j == i or not c:
                    continue
                target = None
                for m, coeff in c.items():
                    if m == _ONE or len(m) != 1 or m[0][1] != 1:
                        continue
                    if coeff in (1, -1):
                        key = m[0][0]
                        rest = {mm: cc for mm, cc in c.items() if mm != m}
                        if any(any(k == key for k, _ in mm) for mm in rest):
                            continue
                        target = (m, coeff, key, rest)
                        break
                if target is None:
                    continue
                m, coeff, key, rest = target
                # coeff*x + rest = 0  =>  x = -rest/coeff
                repl = p_scale(rest, -1 if coeff == 1 else 1)
                new = []
                for k2, c2 in enumerate(constraints):
                    if k2 in (i, j):
                        continue
                    new.append(self._poly_subst(c2, key, repl))
                # record x >= 0, i.e. repl >= 0
                new.append(dict(repl))
                constraints = new
                done = False
                break
            if done:
                break
        return constraints

    def _fm(self, constraints: list[dict]) -> bool:
        rounds = 0
        while True:
            for c in constraints:
                if len(c) == 0:
                    continue
                if set(c) == {_ONE} and c[_ONE] < 0:
                    return True
            variables = sorted({m for c in constraints for m in c if m != _ONE})
            if not variables or rounds > 40:
                return False
            # pick the variable with the smallest pos*neg fan-out
            best, best_cost = None, None
            for v in variables:
                pos = sum(1 for c in constraints if c.get(v, 0) > 0)
                neg = sum(1 for c in constraints if c.get(v, 0) < 0)
                cost = pos * neg
                if neg == 0 or pos == 0:
                    cost = 0
                if best_cost is None or cost < best_cost:
                    best, best_cost = v, cost
            v = best
            keep, pos, neg = [], [], []
            for c in constraints:
                cv = c.get(v, 0)
                if cv > 0:
                    pos.append(c)
                elif cv < 0:
                    neg.append(c)
                else:
                    keep.append(c)
            new = keep
            for cp in pos:
                for cn in neg:
                    a, b = cp[v], -cn[v]
                    combined = p_add(p_scale(cp, b), p_scale(cn, a))
                    combined.pop(v, None)
                    new.append(combined)
                    if len(new) > self.fm_constraints:
                        return False
            constraints = new
            rounds += 1


# --- cheap syntactic clash detection used while distributing ------------------------

_CMP_CLASH = {
    ("lt", "eq"), ("eq", "lt"), ("eq", "ne"), ("ne", "eq"),
}


def _lits_clash(a: Lit, b: Lit) -> bool:
    if a.kind == "false" or b.kind == "false":
        return True
    if a.kind != b.kind:
        return False
    if a.kind in ("pred", "graph", "opaque"):
        return a.data[:-1] == b.data[:-1] and a.data[-1] != b.data[-1]
    if a.kind == "cmp":
        op1, l1, r1 = a.data
        op2, l2, r2 = b.data
        if (l1, r1) == (l2, r2) and (op1, op2) in _CMP_CLASH:
            return True
        if (l1, r1) == (r2, l2):
            # x op y against y op x
            if op1 == "lt" and op2 in ("lt", "le", "eq"):
                return True
            if op2 == "lt" and op1 in ("lt", "le", "eq"):
                return True
    return False


def _cheaply_unsat(lits: list[Lit], new_from: int) -> bool:
    for i in range(new_from, len(lits)):
        li = lits[i]
        if li.kind == "false":
            return True
        for j in range(i):
            if _lits_clash(li, lits[j]):
                return True
    return False
