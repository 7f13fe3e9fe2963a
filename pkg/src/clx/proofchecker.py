"""Tableau proof-script checking.

Scripts are explicit trees: one rule per line, indentation giving the tree,
`case` blocks under branching rules (discriminations and the structural
inductions), straight-line chains elsewhere.  The checker walks the tree
keeping per-branch assumptions, the current goal, the set of variables a
definition may consume, and the active induction frames; every leaf must be
closed by `qed`.

No proof search happens anywhere: quantifier instantiations, lemma instances,
and case splits are all written in the script.  Leaf goals are discharged by
the bounded arithmetic prover, and anything it cannot settle becomes an
obligation in the report (with a sampled counterexample when one is found).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace

from .arith import Prover
from .clausal import (
    BudgetExceeded, ClausalError, ClausalProgram, Diverged, Interpreter,
    PAdic, PCons, PLit, PPair, PSucc, PVar, Pattern, ProgramSpace,
    pattern_vars, positivity_check, structurally_total,
)
from .logic import (
    And, BExists, BForall, CmpAtom, DELTA0, Exists, FalseF, Forall, Formula,
    GraphAtom, HIGHER, Iff, Implies, Not, Or, PI1, PI2, PredAtom, SIGMA1,
    TRUE, TrueF, classify, conj, eval_formula, formula_free_vars,
    formula_substitute, parse_formula, replace_term_in_formula, show_formula,
)
from .syntax import ParseError, TokenStream, parse_term, show_term, tokenize
from .terms import (
    APPLY, SELF, Apply, PairT, Term, Var, free_vars, lit, literal_value,
    subterms,
)

# --- lemma ledger ---------------------------------------------------------------


@dataclass
class Lemma:
    name: str
    formula: Formula
    status: str = "declared"          # builtin | declared | bounded-verified
    samples: int = 0


class LemmaLedger:
    def __init__(self) -> None:
        self.entries: dict[str, Lemma] = {}

    def add(self, lemma: Lemma) -> None:
        if lemma.name in self.entries:
            raise ValueError(f"duplicate lemma {lemma.name}")
        self.entries[lemma.name] = lemma

    def get(self, name: str) -> Lemma:
        try:
            return self.entries[name]
        except KeyError:
            raise KeyError(f"unknown lemma {name}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def register_defining_equations(self, prog: ClausalProgram,
                                    space: ProgramSpace) -> None:
        """Clause equations of structurally terminating programs are open
        theorems of the defining axioms; guarded clauses become implications."""
        from .clausal import Assign as CAssign, Cmp as CCmp, PredCond
        if not structurally_total(prog):
            return
        for idx, c in enumerate(prog.clauses, 1):
            name = f"{prog.name}.{idx}"
            if name in self.entries:
                continue
            head_args = []
            binds: dict[str, Term] = {}
            ok = True
            for p in c.patterns:
                t = _pattern_term(p)
                if t is None:
                    ok = False
                    break
                head_args.append(t)
            if not ok:
                continue
            premises: list[Formula] = []
            for g in c.guards:
                if isinstance(g, CAssign):
                    premises.append(CmpAtom("eq", g.term, Var(g.var)))
                elif isinstance(g, CCmp):
                    premises.append(CmpAtom(g.op, g.lhs, g.rhs))
                elif isinstance(g, PredCond):
                    atom = PredAtom(g.name, g.args)
                    premises.append(Not(atom) if g.negated else atom)
            head = Apply(prog.name, tuple(head_args))
            if prog.kind == "predicate":
                concl: Formula = PredAtom(prog.name, tuple(head_args))
            else:
                concl = CmpAtom("eq", head, c.body)
            f: Formula = concl if not premises else Implies(conj(premises), concl)
            self.add(Lemma(name, f, status="builtin"))


def _pattern_term(p: Pattern) -> Term | None:
    if isinstance(p, PVar):
        return Var(p.name)
    if isinstance(p, PLit):
        return lit(p.value)
    if isinstance(p, PSucc):
        return Apply("add", (Var(p.name), lit(1)))
    if isinstance(p, PPair):
        a, b = _pattern_term(p.left), _pattern_term(p.right)
        return None if a is None or b is None else PairT(a, b)
    if isinstance(p, PAdic):
        return Apply("add", (Apply("mul", (lit(p.base), Var(p.core))), Var(p.digit)))
    if isinstance(p, PCons):
        args = [_pattern_term(a) for a in p.args]
        if any(a is None for a in args):
            return None
        return Apply(p.name, tuple(args))
    return None


# --- rules ------------------------------------------------------------------------


class Rule:
    __slots__ = ()


@dataclass
class Assume(Rule):
    pass


@dataclass
class Split(Rule):
    pass


@dataclass
class Intro(Rule):
    var: str


@dataclass
class Generalize(Rule):
    var: str


@dataclass
class Strengthen(Rule):
    formula: Formula


@dataclass
class WitnessR(Rule):
    var: str
    term: Term


@dataclass
class Obtain(Rule):
    var: str
    source: str
    name: str


@dataclass
class Instantiate(Rule):
    source: str
    inst: tuple[tuple[str, Term], ...]
    name: str


@dataclass
class Mp(Rule):
    source: str
    name: str


@dataclass
class Destruct(Rule):
    source: str
    names: tuple[str, ...]


@dataclass
class Simplify(Rule):
    lemma: str
    inst: tuple[tuple[str, Term], ...]
    name: str


@dataclass
class Rewrite(Rule):
    source: str                      # assumption name or ledger lemma name
    inst: tuple[tuple[str, Term], ...] | None    # None: assumption reference
    reverse: bool = False


@dataclass
class DiscrPredicates(Rule):
    cases: tuple[Formula, ...]
    lemma: str | None = None


@dataclass
class DiscrPatterns(Rule):
    var: str
    patterns: tuple[Term, ...]       # pattern shapes as terms (0, y+1, (v,w), s1 v)


@dataclass
class AssignR(Rule):
    term: Term
    var: str


@dataclass
class Define(Rule):
    unknown: str
    args: tuple[Term, ...]
    body: Term | None                # term body for function unknowns
    pred_body: Formula | None = None  # true/false/atom for predicate unknowns


@dataclass
class Induction(Rule):
    kind: str                        # monadic | pair | complete | measure | padic | pred
    var: str | None = None
    measure_vars: tuple[str, ...] = ()
    measure: Term | None = None
    base: int = 0                    # padic p
    offset: int = 0                  # padic m
    predicate: str | None = None


@dataclass
class UseIH(Rule):
    inst: tuple[tuple[str, Term], ...]
    name: str


@dataclass
class Qed(Rule):
    pass


@dataclass
class Case(Rule):
    label: str                       # raw label text, validated per schema


@dataclass
class ProofNode:
    rule: Rule
    children: list["ProofNode"] = field(default_factory=list)
    line: int | None = None


@dataclass
class ProofScript:
    name: str
    spec_name: str
    root: ProofNode


# --- script parsing ------------------------------------------------------------


def parse_proof(name: str, spec_name: str,
                lines: list[tuple[int, int, str]]) -> ProofScript:
    """lines: (lineno, indent, text), already stripped of blanks/comments."""
    nodes, rest = _parse_chain(lines, 0)
    if rest:
        raise ParseError("unreachable lines after the proof tree", rest[0][0])
    if nodes is None:
        raise ParseError("empty proof body")
    return ProofScript(name, spec_name, nodes)


def _parse_chain(lines: list[tuple[int, int, str]], depth: int):
    if not lines or lines[0][1] < depth:
        return None, lines
    lineno, indent, text = lines[0]
    if indent != depth:
        raise ParseError(f"unexpected indentation (expected {depth}, got {indent})",
                         lineno)
    rule = _parse_rule_line(text, lineno)
    rest = lines[1:]
    node = ProofNode(rule, line=lineno)
    if isinstance(rule, (DiscrPredicates, DiscrPatterns, Split)) or (
            isinstance(rule, Induction)
            and rule.kind in ("monadic", "pair", "padic", "pred")):
        cases = []
        while rest and rest[0][1] == depth + 1:
            clineno, _, ctext = rest[0]
            ts = TokenStream(tokenize(ctext, clineno), clineno)
            ts.eat_name("case")
            label = ctext.split("case", 1)[1].strip()
            child, rest = _parse_chain(rest[1:], depth + 2)
            if child is None:
                raise ParseError("empty case block", clineno)
            case_node = ProofNode(Case(label), [child], line=clineno)
            cases.append(case_node)
        if not cases:
            raise ParseError(f"{type(rule).__name__} needs case blocks", lineno)
        node.children = cases
        if rest and rest[0][1] >= depth and rest[0][1] > depth:
            raise ParseError("stray indentation after case blocks", rest[0][0])
        if rest and rest[0][1] == depth:
            raise ParseError("a branching rule ends its chain", rest[0][0])
        return node, rest
    if isinstance(rule, Qed):
        return node, rest
    child, rest = _parse_chain(rest, depth)
    if child is None:
        raise ParseError(f"missing continuation after {text!r}", lineno)
    node.children = [child]
    return node, rest


def _parse_inst(ts: TokenStream) -> tuple[tuple[str, Term], ...]:
    ts.eat_sym("[")
    out = []
    if not ts.at_sym("]"):
        while True:
            v = ts.eat_name()
            ts.eat_sym(":=")
            out.append((v, parse_term(ts)))
            if ts.at_sym(","):
                ts.next()
                continue
            break
    ts.eat_sym("]")
    return tuple(out)


def _parse_lemma_ref(ts: TokenStream) -> str:
    name = ts.eat_name()
    if ts.at_sym("."):
        ts.next()
        n = ts.peek()
        if n.kind != "num":
            raise ParseError("clause-lemma reference needs a number", ts.line)
        ts.next()
        name = f"{name}.{n.text}"
    return name


def _parse_rule_line(text: str, lineno: int) -> Rule:
    ts = TokenStream(tokenize(text, lineno), lineno)
    word = ts.eat_name()
    if word == "assume":
        ts.expect_done()
        return Assume()
    if word == "split":
        ts.expect_done()
        return Split()
    if word == "qed":
        ts.expect_done()
        return Qed()
    if word == "intro":
        v = ts.eat_name()
        ts.expect_done()
        return Intro(v)
    if word == "generalize":
        v = ts.eat_name()
        ts.expect_done()
        return Generalize(v)
    if word == "strengthen":
        f = parse_formula(ts)
        ts.expect_done()
        return Strengthen(f)
    if word == "witness":
        v = ts.eat_name()
        ts.eat_sym(":=")
        t = parse_term(ts)
        ts.expect_done()
        return WitnessR(v, t)
    if word == "obtain":
        v = ts.eat_name()
        ts.eat_name("from")
        src = ts.eat_name()
        ts.eat_name("as")
        nm = ts.eat_name()
        ts.expect_done()
        return Obtain(v, src, nm)
    if word == "instantiate":
        src = ts.eat_name()
        inst = _parse_inst(ts)
        ts.eat_name("as")
        nm = ts.eat_name()
        ts.expect_done()
        return Instantiate(src, inst, nm)
    if word == "mp":
        src = ts.eat_name()
        ts.eat_name("as")
        nm = ts.eat_name()
        ts.expect_done()
        return Mp(src, nm)
    if word == "destruct":
        src = ts.eat_name()
        ts.eat_name("as")
        ts.eat_sym("(")
        names = [ts.eat_name()]
        while ts.at_sym(","):
            ts.next()
            names.append(ts.eat_name())
        ts.eat_sym(")")
        ts.expect_done()
        return Destruct(src, tuple(names))
    if word == "simplify":
        lemma = _parse_lemma_ref(ts)
        inst = _parse_inst(ts) if ts.at_sym("[") else ()
        ts.eat_name("as")
        nm = ts.eat_name()
        ts.expect_done()
        return Simplify(lemma, inst, nm)
    if word == "rewrite":
        reverse = False
        if ts.at_sym("<-"):
            ts.next()
            reverse = True
        src = _parse_lemma_ref(ts)
        inst = _parse_inst(ts) if ts.at_sym("[") else None
        ts.expect_done()
        return Rewrite(src, inst, reverse)
    if word == "discriminate":
        cases = [parse_formula(ts)]
        while ts.at_sym("|"):
            ts.next()
            cases.append(parse_formula(ts))
        lemma = None
        if ts.at_name("using"):
            ts.next()
            lemma = ts.eat_name()
        ts.expect_done()
        return DiscrPredicates(tuple(cases), lemma)
    if word == "patterns":
        v = ts.eat_name()
        ts.eat_sym(":")
        pats = [parse_term(ts)]
        while ts.at_sym("|"):
            ts.next()
            pats.append(parse_term(ts))
        ts.expect_done()
        return DiscrPatterns(v, tuple(pats))
    if word == "assign":
        t = parse_term(ts)
        ts.eat_sym("=:")
        v = ts.eat_name()
        ts.expect_done()
        return AssignR(t, v)
    if word == "define":
        name = ts.eat_name()
        ts.eat_sym("(")
        args = [parse_term(ts)]
        while ts.at_sym(","):
            ts.next()
            args.append(parse_term(ts))
        ts.eat_sym(")")
        ts.eat_sym(":=")
        if ts.at_name("true") or ts.at_name("false"):
            pb: Formula = TRUE if ts.next().text == "true" else FalseF()
            ts.expect_done()
            return Define(name, tuple(args), None, pb)
        saved = ts.i
        t = parse_term(ts)
        if ts.done():
            return Define(name, tuple(args), t, None)
        ts.i = saved
        f = parse_formula(ts)
        ts.expect_done()
        return Define(name, tuple(args), None, f)
    if word == "induction":
        kind = ts.eat_name()
        if kind == "monadic" or kind == "pair" or kind == "complete":
            v = ts.eat_name()
            ts.expect_done()
            return Induction(kind, var=v)
        if kind == "padic":
            p = int(ts.next().text)
            m = int(ts.next().text)
            v = ts.eat_name()
            ts.expect_done()
            return Induction("padic", var=v, base=p, offset=m)
        if kind == "measure":
            ts.eat_sym("[")
            mvars = [ts.eat_name()]
            while ts.at_sym(","):
                ts.next()
                mvars.append(ts.eat_name())
            ts.eat_sym("]")
            m = parse_term(ts)
            ts.expect_done()
            return Induction("measure", measure_vars=tuple(mvars), measure=m)
        if kind == "pred":
            r = ts.eat_name()
            v = ts.eat_name()
            ts.expect_done()
            return Induction("pred", var=v, predicate=r)
        raise ParseError(f"unknown induction kind {kind}", lineno)
    if word == "useih":
        inst = _parse_inst(ts)
        ts.eat_name("as")
        nm = ts.eat_name()
        ts.expect_done()
        return UseIH(inst, nm)
    raise ParseError(f"unknown proof rule {word!r}", lineno)


# --- checking ---------------------------------------------------------------------


class CheckFailure(Exception):
    """Hard shape violation; the report carries the message."""


@dataclass
class Obligation:
    branch: str
    kind: str                 # leaf | measure | mp-premise | exhaustiveness | disjointness
    formula: str
    status: str               # closed | closed-arith | bounded-verified | open
    line: int | None = None
    witness: dict | None = None
    samples: int = 0
    detail: str = ""


@dataclass
class DefineRecord:
    unknown: str
    args: tuple[Term, ...]
    body: Term | None
    pred_body: Formula | None
    path: list[tuple]
    branch: str
    line: int | None = None


@dataclass
class CheckReport:
    proof: str
    accepted: bool = True
    errors: list[str] = field(default_factory=list)
    obligations: list[Obligation] = field(default_factory=list)
    defines: list[DefineRecord] = field(default_factory=list)
    cited_lemmas: list[str] = field(default_factory=list)
    branches: int = 0

    @property
    def bounded_used(self) -> bool:
        return any(o.status == "bounded-verified" for o in self.obligations)

    @property
    def open_obligations(self) -> list[Obligation]:
        return [o for o in self.obligations if o.status == "open"]

    def verdict(self) -> str:
        if self.errors or self.open_obligations:
            return "rejected"
        if self.bounded_used:
            return "accepted-bounded"
        return "accepted"


@dataclass
class _Frame:
    kind: str                          # monadic | pair | padic | measure | pred
    unknown: str
    template: tuple[Term, ...]
    var_positions: tuple[int, ...]
    allowed: tuple[Term, ...]
    pi2: bool
    phi: Formula | None = None
    measure_vars: tuple[str, ...] = ()
    measure: Term | None = None
    measure_positions: tuple[int, ...] = ()
    justified: list = field(default_factory=list)


@dataclass
class _State:
    assumptions: list[tuple[str, Formula, frozenset]]
    goal: Formula
    defvars: set[str]
    used: set[str]
    frames: list[_Frame]
    path: list[tuple]
    branch: str
    defined: bool

    def copy(self) -> "_State":
        return _State(list(self.assumptions), self.goal, set(self.defvars),
                      set(self.used), list(self.frames), list(self.path),
                      self.branch, self.defined)

    def formulas(self, computational_only: bool = False) -> list[Formula]:
        if computational_only:
            return [f for _n, f, tags in self.assumptions if "computational" in tags]
        return [f for _n, f, _t in self.assumptions]

    def lookup(self, name: str, line: int | None) -> Formula:
        for n, f, _t in self.assumptions:
            if n == name:
                return f
        raise CheckFailure(f"line {line}: unknown assumption {name}")


class CheckEnv:
    """Frozen context a proof is checked against."""

    def __init__(self, space: ProgramSpace, ledger: LemmaLedger,
                 specs: dict[str, "object"], budget: int = 512, seed: int = 0):
        self.space = space
        self.ledger = ledger
        self.specs = specs
        self.budget = budget
        self.seed = seed
        self.interp = Interpreter(space, budget=500_000)
        self.prover = Prover(interp=self.interp)

    def partial_symbols(self, unknown: str) -> frozenset[str]:
        out = {unknown}
        for name, prog in self.space.programs.items():
            if not structurally_total(prog):
                out.add(name)
        return frozenset(out)


def check_proof(script: ProofScript, spec, env: CheckEnv) -> CheckReport:
    """Validate a proof script against its specification."""
    report = CheckReport(proof=script.name)
    goal = _witnessing(spec)
    state = _State(assumptions=[], goal=goal, defvars=set(spec.params),
                   used=set(spec.params), frames=[], path=[], branch="1",
                   defined=False)
    checker = _Checker(env, spec, report)
    try:
        checker.walk(script.root, state)
    except CheckFailure as e:
        report.errors.append(str(e))
    report.accepted = report.verdict() == "accepted"
    report.branches = checker.branches
    report.cited_lemmas = sorted(set(checker.cited))
    return report


def _witnessing(spec) -> Formula:
    from .logic import witnessing_formula
    return witnessing_formula(spec)


def _spec_conjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, And):
        out = []
        for p in f.parts:
            out.extend(_spec_conjuncts(p))
        return out
    return [f]


class _Checker:
    def __init__(self, env: CheckEnv, spec, report: CheckReport):
        self.env = env
        self.spec = spec
        self.report = report
        self.branches = 0
        self.cited: list[str] = []
        self.partial = env.partial_symbols(spec.unknown)
        self.names = itertools.count(1)

    # -- helpers --

    def _auto_name(self, base: str) -> str:
        return f"{base}@{next(self.names)}"

    def _add_assumption(self, state: _State, name: str | None, f: Formula,
                        tags: frozenset, line: int | None) -> None:
        if name is None:
            name = self._auto_name("H")
        elif any(n == name for n, _f, _t in state.assumptions):
            raise CheckFailure(f"line {line}: assumption name {name} already used")
        state.assumptions.append((name, f, tags))

    def _fresh_eigen(self, state: _State, v: str, line: int | None) -> None:
        if v in state.used:
            raise CheckFailure(f"line {line}: eigenvariable {v} is not fresh")
        state.used.add(v)

    def _check_calls(self, state: _State, t: Term, line: int | None) -> None:
        """Frame-legality of every application of the unknown inside t."""
        for s in subterms(t):
            if s.tag == APPLY and s.symbol == self.spec.unknown:
                self._check_one_call(state, s.args, line)

    def _check_calls_formula(self, state: _State, f: Formula,
                             line: int | None) -> None:
        from .logic import formula_apply_terms
        for t in formula_apply_terms(f):
            self._check_calls(state, t, line)
        # predicate unknowns occur as atoms
        for atom_args in _pred_atom_args(f, self.spec.unknown):
            self._check_one_call(state, atom_args, line)

    def _check_one_call(self, state: _State, args: tuple[Term, ...],
                        line: int | None) -> None:
        if not state.frames:
            raise CheckFailure(
                f"line {line}: recursive application of {self.spec.unknown} "
                f"outside an induction frame")
        frame = state.frames[-1]
        if len(args) != len(frame.template):
            raise CheckFailure(f"line {line}: wrong arity in recursive application")
        if frame.kind == "measure":
            for j in frame.justified:
                if tuple(j) == tuple(args):
                    return
            sub = {v: args[p] for v, p in zip(frame.measure_vars,
                                              frame.measure_positions)}
            from .terms import substitute as term_substitute
            ob = CmpAtom("lt", term_substitute(frame.measure, sub), frame.measure)
            self._discharge_measure(state, ob, line)
            frame.justified.append(tuple(args))
            return
        # structural kinds: the induction positions take an allowed component,
        # the parameter positions are fixed unless the formula is Pi2
        for repl in frame.allowed:
            ok = True
            for i, a in enumerate(args):
                if i in frame.var_positions:
                    if a != repl:
                        ok = False
                        break
                elif not frame.pi2 and a != frame.template[i]:
                    ok = False
                    break
            if ok:
                return
        raise CheckFailure(
            f"line {line}: recursive application "
            f"{self.spec.unknown}({','.join(show_term(a) for a in args)}) "
            f"is not justified by the {frame.kind} induction")

    def _discharge_measure(self, state: _State, ob: Formula,
                           line: int | None) -> None:
        comp = state.formulas(computational_only=True)
        if self.env.prover.entails(comp, ob):
            self.report.obligations.append(Obligation(
                state.branch, "measure", show_formula(ob), "closed-arith", line))
            return
        witness = self._counterexample(comp, ob)
        self.report.obligations.append(Obligation(
            state.branch, "measure", show_formula(ob), "open", line,
            witness=witness,
            detail="measure decrease not derivable from computational facts"))

    def _evaluable(self, f: Formula) -> bool:
        from .logic import formula_apply_terms
        if _pred_atom_args(f, self.spec.unknown):
            return False
        for t in formula_apply_terms(f):
            for s in subterms(t):
                if s.tag == SELF:
                    return False
                if s.tag == APPLY:
                    name = s.symbol
                    if name == self.spec.unknown:
                        return False
                    if (name not in self.env.space.programs
                            and name not in self.env.space.constructors
                            and name not in ("add", "mul", "monus", "sq", "dbl",
                                             "pred", "succ", "le", "lt", "eq",
                                             "fst", "snd", "dyarg", "isdy1", "isdy2")):
                        return False
        for atom in _collect_pred_atoms(f):
            if (atom.name != self.spec.unknown
                    and atom.name not in self.env.space.programs):
                return False
        return True

    def _sample_pool(self) -> list[int]:
        from . import numerals
        pool = list(range(9))
        for a in range(3):
            for b in range(3):
                pool.append(numerals.pair(a, b))
        ground: list[int] = []
        for c in self.env.space.constructors.values():
            if not c.params:
                try:
                    ground.append(self.env.interp.call(c.name, ()))
                except ClausalError:
                    pass
        for c in self.env.space.constructors.values():
            if c.params and len(c.params) <= 3 and ground:
                for combo in itertools.product([0, 1, 2] + ground[:1],
                                               repeat=len(c.params)):
                    try:
                        pool.append(self.env.interp.call(c.name, combo))
                    except ClausalError:
                        pass
        seen = set()
        out = []
        for v in pool:
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out[:48]

    def _counterexample(self, holds: list[Formula], fails: Formula) -> dict | None:
        self.env.interp.calls = 0
        holds = [h for h in holds if self._evaluable(h)]
        if not self._evaluable(fails):
            return None
        fv = sorted(set().union(*[formula_free_vars(h) for h in holds], set())
                    | formula_free_vars(fails))
        if len(fv) > 4:
            return None
        pool = self._sample_pool()
        rng = random.Random(self.env.seed)
        combos = list(itertools.product(pool[:12], repeat=len(fv)))
        if len(combos) > 2500:
            rng.shuffle(combos)
            combos = combos[:2500]
        for combo in combos:
            envmap = dict(zip(fv, combo))
            try:
                if any(eval_formula(h, envmap, self.env.interp,
                                    self.env.budget) != "true" for h in holds):
                    continue
                if eval_formula(fails, envmap, self.env.interp,
                                self.env.budget) == "false":
                    return envmap
            except ClausalError:
                continue
        return None

    # -- the walk --

    def walk(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        line = node.line
        handler = getattr(self, f"_rule_{type(rule).__name__.lower()}", None)
        if handler is None:
            raise CheckFailure(f"line {line}: no handler for {type(rule).__name__}")
        handler(node, state)

    def _continue(self, node: ProofNode, state: _State) -> None:
        if len(node.children) != 1:
            raise CheckFailure(f"line {node.line}: expected a single continuation")
        self.walk(node.children[0], state)

    def _rule_qed(self, node: ProofNode, state: _State) -> None:
        self.branches += 1
        self._discharge_leaf(state, node.line)

    def _discharge_leaf(self, state: _State, line: int | None) -> None:
        goal = state.goal
        # tier a: the goal is literally among the assumptions
        for _n, f, _t in state.assumptions:
            if f == goal:
                self.report.obligations.append(Obligation(
                    state.branch, "leaf", show_formula(goal), "closed", line))
                return
        if isinstance(goal, TrueF):
            self.report.obligations.append(Obligation(
                state.branch, "leaf", show_formula(goal), "closed", line))
            return
        # tier b: refutation prover
        if self.env.prover.entails(state.formulas(), goal):
            self.report.obligations.append(Obligation(
                state.branch, "leaf", show_formula(goal), "closed-arith", line))
            return
        # tier d: bounded evaluation, explicitly labelled
        holds = [f for f in state.formulas() if self._evaluable(f)]
        if self._evaluable(goal):
            witness = self._counterexample(state.formulas(), goal)
            if witness is not None:
                self.report.obligations.append(Obligation(
                    state.branch, "leaf", show_formula(goal), "open", line,
                    witness=witness, detail="counterexample found by sampling"))
                return
            n = self._bounded_verify(holds, goal)
            if n > 0:
                self.report.obligations.append(Obligation(
                    state.branch, "leaf", show_formula(goal), "bounded-verified",
                    line, samples=n))
                return
        self.report.obligations.append(Obligation(
            state.branch, "leaf", show_formula(goal), "open", line,
            detail="not derivable by the bounded checker"))

    def _bounded_verify(self, holds: list[Formula], goal: Formula) -> int:
        self.env.interp.calls = 0
        fv = sorted(set().union(set(), *[formula_free_vars(h) for h in holds])
                    | formula_free_vars(goal))
        if len(fv) > 4:
            return 0
        pool = self._sample_pool()
        combos = list(itertools.product(pool[:10], repeat=len(fv)))[:2000]
        count = 0
        for combo in combos:
            envmap = dict(zip(fv, combo))
            try:
                if any(eval_formula(h, envmap, self.env.interp, self.env.budget)
                       != "true" for h in holds):
                    continue
                if eval_formula(goal, envmap, self.env.interp,
                                self.env.budget) != "true":
                    return 0
                count += 1
            except ClausalError:
                return 0
        return count

    def _rule_assume(self, node: ProofNode, state: _State) -> None:
        if not isinstance(state.goal, Implies):
            raise CheckFailure(f"line {node.line}: assume needs an implication goal")
        premise, state.goal = state.goal.premise, state.goal.conclusion
        spec_parts = {show_formula(p) for p in _spec_conjuncts(self.spec.assume)}
        for part in _spec_conjuncts(premise):
            if show_formula(part) in spec_parts:
                tags = frozenset({"computational", "spec"})
            else:
                tags = frozenset()
            self._add_assumption(state, None, part, tags, node.line)
        self._continue(node, state)

    def _rule_split(self, node: ProofNode, state: _State) -> None:
        if not isinstance(state.goal, And):
            raise CheckFailure(f"line {node.line}: split needs a conjunctive goal")
        parts = state.goal.parts
        if len(node.children) != len(parts):
            raise CheckFailure(
                f"line {node.line}: split needs {len(parts)} case blocks")
        for i, (part, case_node) in enumerate(zip(parts, node.children), 1):
            sub = state.copy()
            sub.goal = part
            sub.branch = f"{state.branch}.{i}"
            self.walk(case_node.children[0], sub)

    def _rule_intro(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        goal = state.goal
        if isinstance(goal, Forall):
            self._fresh_eigen(state, rule.var, node.line)
            state.goal = formula_substitute(goal.body, {goal.var: Var(rule.var)})
            state.defvars.add(rule.var)
        elif isinstance(goal, BForall):
            self._fresh_eigen(state, rule.var, node.line)
            state.goal = formula_substitute(goal.body, {goal.var: Var(rule.var)})
            state.defvars.add(rule.var)
            self._add_assumption(state, None,
                                 CmpAtom("le", Var(rule.var), goal.bound),
                                 frozenset({"computational"}), node.line)
        else:
            raise CheckFailure(f"line {node.line}: intro needs a universal goal")
        self._continue(node, state)

    def _rule_generalize(self, node: ProofNode, state: _State) -> None:
        v = node.rule.var
        if v not in formula_free_vars(state.goal):
            raise CheckFailure(f"line {node.line}: {v} is not free in the goal")
        for _n, f, _t in state.assumptions:
            if v in formula_free_vars(f):
                raise CheckFailure(
                    f"line {node.line}: cannot generalize {v}; it occurs in an assumption")
        state.goal = Forall(v, state.goal)
        # the name leaves scope and may be re-introduced below
        state.used.discard(v)
        state.defvars.discard(v)
        self._continue(node, state)

    def _rule_strengthen(self, node: ProofNode, state: _State) -> None:
        new = node.rule.formula
        if not self.env.prover.entails([new], state.goal):
            raise CheckFailure(
                f"line {node.line}: strengthened goal does not imply the old goal")
        state.goal = new
        self._continue(node, state)

    def _rule_witnessr(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        goal = state.goal
        if isinstance(goal, Exists):
            state.goal = formula_substitute(goal.body, {goal.var: rule.term})
        else:
            raise CheckFailure(f"line {node.line}: witness needs an existential goal")
        self._continue(node, state)

    def _rule_obtain(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        src = state.lookup(rule.source, node.line)
        if not isinstance(src, Exists):
            raise CheckFailure(
                f"line {node.line}: obtain needs an existential assumption")
        self._fresh_eigen(state, rule.var, node.line)
        inst = formula_substitute(src.body, {src.var: Var(rule.var)})
        self._add_assumption(state, rule.name, inst, frozenset(), node.line)
        self._continue(node, state)

    def _rule_instantiate(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        f = state.lookup(rule.source, node.line)
        sub = dict(rule.inst)
        premises: list[Formula] = []
        while sub:
            if isinstance(f, Forall) and f.var in sub:
                f = formula_substitute(f.body, {f.var: sub.pop(f.var)})
            elif isinstance(f, BForall) and f.var in sub:
                t = sub.pop(f.var)
                premises.append(CmpAtom("le", t, f.bound))
                f = formula_substitute(f.body, {f.var: t})
            else:
                raise CheckFailure(
                    f"line {node.line}: {rule.source} does not bind "
                    f"{sorted(sub)} universally")
        for p in premises:
            f = Implies(p, f)
        self._add_assumption(state, rule.name, f, frozenset(), node.line)
        self._continue(node, state)

    def _rule_mp(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        f = state.lookup(rule.source, node.line)
        if not isinstance(f, Implies):
            raise CheckFailure(f"line {node.line}: mp needs an implication")
        if self.env.prover.entails(state.formulas(), f.premise):
            self.report.obligations.append(Obligation(
                state.branch, "mp-premise", show_formula(f.premise),
                "closed-arith", node.line))
        else:
            witness = self._counterexample(state.formulas(), f.premise)
            self.report.obligations.append(Obligation(
                state.branch, "mp-premise", show_formula(f.premise), "open",
                node.line, witness=witness))
        self._add_assumption(state, rule.name, f.conclusion, frozenset(), node.line)
        self._continue(node, state)

    def _rule_destruct(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        f = state.lookup(rule.source, node.line)
        if isinstance(f, And):
            parts = list(f.parts)
        elif isinstance(f, Iff) and len(rule.names) == 2:
            parts = [Implies(f.lhs, f.rhs), Implies(f.rhs, f.lhs)]
        else:
            raise CheckFailure(f"line {node.line}: destruct needs a conjunction")
        if len(parts) != len(rule.names):
            raise CheckFailure(
                f"line {node.line}: destruct expects {len(parts)} names")
        for name, part in zip(rule.names, parts):
            self._add_assumption(state, name, part, frozenset(), node.line)
        self._continue(node, state)

    def _rule_simplify(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        lemma = self.env.ledger.get(rule.lemma)
        self.cited.append(rule.lemma)
        inst = formula_substitute(lemma.formula, dict(rule.inst))
        missing = formula_free_vars(lemma.formula) - {k for k, _v in rule.inst}
        if missing:
            raise CheckFailure(
                f"line {node.line}: lemma {rule.lemma} needs [{', '.join(sorted(missing))}]")
        self._add_assumption(state, rule.name, inst,
                             frozenset({"computational", "lemma"}), node.line)
        self._continue(node, state)

    def _rule_rewrite(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        inst = rule.inst
        if inst is None and not any(n == rule.source
                                    for n, _f, _t in state.assumptions):
            if rule.source in self.env.ledger:
                inst = ()
        if inst is not None:
            lemma = self.env.ledger.get(rule.source)
            self.cited.append(rule.source)
            f = formula_substitute(lemma.formula, dict(inst))
            missing = formula_free_vars(lemma.formula) - {k for k, _v in inst}
            if missing:
                raise CheckFailure(
                    f"line {node.line}: lemma {rule.source} needs "
                    f"[{', '.join(sorted(missing))}]")
        else:
            f = state.lookup(rule.source, node.line)
        if not (isinstance(f, CmpAtom) and f.op == "eq"):
            raise CheckFailure(f"line {node.line}: rewrite needs an equation")
        l, r = (f.rhs, f.lhs) if rule.reverse else (f.lhs, f.rhs)
        new_goal = replace_term_in_formula(state.goal, l, r)
        if new_goal == state.goal:
            raise CheckFailure(
                f"line {node.line}: rewrite found no occurrence of {show_term(l)}")
        state.goal = new_goal
        self._continue(node, state)

    # -- discriminations --

    def _rule_discrpredicates(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        result = check_discrimination(rule, self.env, state.formulas())
        for kind, formula_s, status, detail in result:
            if status != "builtin":
                self.report.obligations.append(Obligation(
                    state.branch, kind, formula_s, status, node.line, detail=detail))
        if rule.lemma is not None:
            self.cited.append(rule.lemma)
        if len(node.children) != len(rule.cases):
            raise CheckFailure(
                f"line {node.line}: discrimination needs {len(rule.cases)} cases")
        for i, (case_f, case_node) in enumerate(zip(rule.cases, node.children), 1):
            self._check_calls_formula(state, case_f, node.line)
            sub = state.copy()
            sub.branch = f"{state.branch}.{i}"
            self._add_assumption(sub, None, case_f,
                                 frozenset({"computational", "case"}), node.line)
            sub.path.append(("case", case_f))
            self.walk(case_node.children[0], sub)

    def _rule_discrpatterns(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        if rule.var not in state.used:
            raise CheckFailure(
                f"line {node.line}: pattern discrimination needs a known variable")
        shapes = [_pattern_shape(t, node.line) for t in rule.patterns]
        _check_pattern_coverage(shapes, node.line)
        if len(node.children) != len(rule.patterns):
            raise CheckFailure(
                f"line {node.line}: pattern discrimination needs "
                f"{len(rule.patterns)} cases")
        for i, (pat_term, case_node) in enumerate(zip(rule.patterns, node.children), 1):
            sub = state.copy()
            sub.branch = f"{state.branch}.{i}"
            for v in sorted(free_vars(pat_term)):
                self._fresh_eigen(sub, v, node.line)
                sub.defvars.add(v)
            eqn = CmpAtom("eq", Var(rule.var), pat_term)
            self._add_assumption(sub, None, eqn,
                                 frozenset({"computational", "pattern"}), node.line)
            sub.path.append(("pattern", rule.var, pat_term))
            self.walk(case_node.children[0], sub)

    def _rule_assignr(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        self._check_calls(state, rule.term, node.line)
        bad = free_vars(rule.term) - state.used
        if bad:
            raise CheckFailure(
                f"line {node.line}: assignment uses unknown variables {sorted(bad)}")
        self._fresh_eigen(state, rule.var, node.line)
        state.defvars.add(rule.var)
        self._add_assumption(state, None, CmpAtom("eq", rule.term, Var(rule.var)),
                             frozenset({"computational", "assign"}), node.line)
        state.path.append(("assign", rule.term, rule.var))
        self._continue(node, state)

    # -- definition --

    def _rule_define(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        if rule.unknown != self.spec.unknown:
            raise CheckFailure(
                f"line {node.line}: {rule.unknown} is not the unknown of this spec")
        if state.defined:
            raise CheckFailure(
                f"line {node.line}: the branch already carries a definition")
        used_vars = set()
        for a in rule.args:
            used_vars |= free_vars(a)
        if rule.body is not None:
            used_vars |= free_vars(rule.body)
            self._check_calls(state, rule.body, node.line)
        if rule.pred_body is not None:
            used_vars |= formula_free_vars(rule.pred_body)
            self._check_calls_formula(state, rule.pred_body, node.line)
        bad = used_vars - state.defvars
        if bad:
            raise CheckFailure(
                f"line {node.line}: definition consumes forbidden variables "
                f"{sorted(bad)} (only spec arguments, pattern and assignment "
                f"eigenvariables, and introduced goal variables are allowed)")
        if self.spec.kind == "predicate":
            if rule.pred_body is None and rule.body is not None \
                    and rule.body.tag == APPLY:
                rule = Define(rule.unknown, rule.args, None,
                              PredAtom(rule.body.symbol, rule.body.args))
                self._check_calls_formula(state, rule.pred_body, node.line)
            if rule.pred_body is None:
                raise CheckFailure(
                    f"line {node.line}: a predicate unknown needs a truth-value body")
            target_atoms = [a for a in _collect_pred_atoms(state.goal)
                            if a.name == rule.unknown and a.args == rule.args]
            if not target_atoms:
                raise CheckFailure(
                    f"line {node.line}: the goal contains no occurrence of "
                    f"{rule.unknown}({','.join(show_term(a) for a in rule.args)})")
            state.goal = _replace_pred_atom(state.goal, rule.unknown, rule.args,
                                            rule.pred_body)
        else:
            if rule.body is None:
                raise CheckFailure(
                    f"line {node.line}: a function unknown needs a term body")
            target = Apply(rule.unknown, rule.args)
            if not _formula_mentions_term(state.goal, target):
                raise CheckFailure(
                    f"line {node.line}: the goal contains no occurrence of "
                    f"{show_term(target)}")
            state.goal = replace_term_in_formula(state.goal, target, rule.body)
        state.defined = True
        self.report.defines.append(DefineRecord(
            rule.unknown, rule.args, rule.body, rule.pred_body,
            list(state.path), state.branch, node.line))
        self._continue(node, state)

    # -- induction --

    def _rule_induction(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        check_induction(rule, state.goal, state.formulas(), self.env, self.partial,
                        self.spec.unknown, node.line)
        if rule.kind in ("complete", "measure"):
            self._induction_measure(node, state)
        elif rule.kind == "monadic":
            self._induction_monadic(node, state)
        elif rule.kind == "pair":
            self._induction_pair(node, state)
        elif rule.kind == "padic":
            self._induction_padic(node, state)
        elif rule.kind == "pred":
            self._induction_pred(node, state)
        else:
            raise CheckFailure(f"line {node.line}: unknown induction {rule.kind}")

    def _unknown_template(self, goal: Formula, line: int | None) -> tuple[Term, ...]:
        tuples = set()
        from .logic import formula_apply_terms
        for t in formula_apply_terms(goal):
            for s in subterms(t):
                if s.tag == APPLY and s.symbol == self.spec.unknown:
                    tuples.add(s.args)
        for args in _pred_atom_args(goal, self.spec.unknown):
            tuples.add(args)
        if len(tuples) != 1:
            raise CheckFailure(
                f"line {line}: the induction goal must apply the unknown at "
                f"exactly one argument tuple (found {len(tuples)})")
        return next(iter(tuples))

    def _frame_for(self, rule: Induction, goal: Formula, allowed: tuple[Term, ...],
                   line: int | None) -> _Frame:
        template = self._unknown_template(goal, line)
        positions = tuple(i for i, a in enumerate(template)
                          if isinstance(a, Var) and a.name == rule.var)
        if not positions:
            raise CheckFailure(
                f"line {line}: induction variable {rule.var} does not occur in "
                f"the unknown's arguments")
        pi2 = classify(goal, self.partial) == PI2
        return _Frame("structural", self.spec.unknown, template, positions,
                      allowed, pi2)

    def _induction_monadic(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        labels = _case_labels(node, node.line)
        if len(labels) != 2:
            raise CheckFailure(f"line {node.line}: monadic induction has two cases")
        _expect_label(labels[0], "0", node.line)
        _expect_label(labels[1], f"{rule.var}+1", node.line)
        phi = state.goal
        base = state.copy()
        base.branch = f"{state.branch}.1"
        base.goal = formula_substitute(phi, {rule.var: lit(0)})
        self.walk(node.children[0].children[0], base)
        step = state.copy()
        step.branch = f"{state.branch}.2"
        frame = self._frame_for(rule, phi, (Var(rule.var),), node.line)
        frame.kind = "monadic"
        step.frames = step.frames + [frame]
        self._add_assumption(step, "IH", phi, frozenset({"ih"}), node.line)
        succ = Apply("add", (Var(rule.var), lit(1)))
        step.goal = formula_substitute(phi, {rule.var: succ})
        self.walk(node.children[1].children[0], step)

    def _induction_pair(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        labels = _case_labels(node, node.line)
        if len(labels) != 2:
            raise CheckFailure(f"line {node.line}: pair induction has two cases")
        _expect_label(labels[0], "0", node.line)
        v, w = _pair_label_vars(labels[1], node.line)
        phi = state.goal
        base = state.copy()
        base.branch = f"{state.branch}.1"
        base.goal = formula_substitute(phi, {rule.var: lit(0)})
        self.walk(node.children[0].children[0], base)
        step = state.copy()
        step.branch = f"{state.branch}.2"
        for nm in (v, w):
            self._fresh_eigen(step, nm, node.line)
            step.defvars.add(nm)
        frame = self._frame_for(rule, phi, (Var(v), Var(w)), node.line)
        frame.kind = "pair"
        step.frames = step.frames + [frame]
        self._add_assumption(step, "IH1", formula_substitute(phi, {rule.var: Var(v)}),
                             frozenset({"ih"}), node.line)
        self._add_assumption(step, "IH2", formula_substitute(phi, {rule.var: Var(w)}),
                             frozenset({"ih"}), node.line)
        step.goal = formula_substitute(phi, {rule.var: PairT(Var(v), Var(w))})
        self.walk(node.children[1].children[0], step)

    def _induction_padic(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        p, m = rule.base, rule.offset
        if p < 2 or m < 1:
            raise CheckFailure(f"line {node.line}: p-adic induction needs p > 1, m > 0")
        labels = _case_labels(node, node.line)
        if len(labels) != m + 1:
            raise CheckFailure(
                f"line {node.line}: p-adic induction with offset {m} has {m + 1} cases")
        phi = state.goal
        for k in range(m):
            _expect_label(labels[k], str(k), node.line)
            base = state.copy()
            base.branch = f"{state.branch}.{k + 1}"
            base.goal = formula_substitute(phi, {rule.var: lit(k)})
            self.walk(node.children[k].children[0], base)
        digit = _padic_label_digit(labels[m], p, rule.var, node.line)
        step = state.copy()
        step.branch = f"{state.branch}.{m + 1}"
        self._fresh_eigen(step, digit, node.line)
        step.defvars.add(digit)
        lo_fact = CmpAtom("le", lit(m), Var(digit))
        hi_fact = CmpAtom("lt", Var(digit), lit(m + p))
        self._add_assumption(step, None, lo_fact,
                             frozenset({"computational", "case"}), node.line)
        self._add_assumption(step, None, hi_fact,
                             frozenset({"computational", "case"}), node.line)
        step.path.append(("case", lo_fact))
        step.path.append(("case", hi_fact))
        frame = self._frame_for(rule, phi, (Var(rule.var),), node.line)
        frame.kind = "padic"
        step.frames = step.frames + [frame]
        self._add_assumption(step, "IH", phi, frozenset({"ih"}), node.line)
        stepterm = Apply("add", (Apply("mul", (lit(p), Var(rule.var))), Var(digit)))
        step.goal = formula_substitute(phi, {rule.var: stepterm})
        self.walk(node.children[m].children[0], step)

    def _induction_measure(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        phi = state.goal
        if rule.kind == "complete":
            mvars: tuple[str, ...] = (rule.var,)
            measure: Term = Var(rule.var)
        else:
            mvars = rule.measure_vars
            measure = rule.measure
        template = self._unknown_template(phi, node.line)
        positions = []
        for v in mvars:
            found = [i for i, a in enumerate(template)
                     if isinstance(a, Var) and a.name == v]
            if len(found) != 1:
                raise CheckFailure(
                    f"line {node.line}: measure variable {v} must name exactly one "
                    f"argument of the unknown")
            positions.append(found[0])
        frame = _Frame("measure", self.spec.unknown, template, tuple(positions),
                       (), classify(phi, self.partial) == PI2, phi=phi,
                       measure_vars=mvars, measure=measure,
                       measure_positions=tuple(positions))
        state.frames = state.frames + [frame]
        self._continue(node, state)

    def _induction_pred(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        goal = state.goal
        if not (isinstance(goal, Implies) and isinstance(goal.premise, PredAtom)
                and goal.premise.name == rule.predicate
                and goal.premise.args == (Var(rule.var),)):
            raise CheckFailure(
                f"line {node.line}: the goal must be {rule.predicate}({rule.var}) -> ...")
        prog = self.env.space.programs.get(rule.predicate)
        phi = goal.conclusion
        labels = _case_labels(node, node.line)
        if len(labels) != len(prog.clauses):
            raise CheckFailure(
                f"line {node.line}: {rule.predicate}-induction has one case per clause")
        from .clausal import Assign as CAssign, Cmp as CCmp, PredCond
        for k, (clause, label) in enumerate(zip(prog.clauses, labels), 1):
            sub = state.copy()
            sub.branch = f"{state.branch}.{k}"
            renaming = _match_rind_label(label, clause.patterns[0],
                                         self.env.space, node.line)
            for nm in renaming.values():
                self._fresh_eigen(sub, nm, node.line)
                sub.defvars.add(nm)
            rename_terms = {old: Var(new) for old, new in renaming.items()}
            instance = _pattern_term(_rename_pattern(clause.patterns[0], renaming))
            ih_count = 0
            for g in clause.guards:
                if isinstance(g, PredCond) and g.name == rule.predicate:
                    if g.negated:
                        raise CheckFailure(
                            f"line {node.line}: {rule.predicate} is not inductive")
                    from .terms import substitute as term_substitute
                    occ = term_substitute(g.args[0], rename_terms)
                    ih_count += 1
                    self._add_assumption(
                        sub, f"IH{ih_count}",
                        formula_substitute(phi, {rule.var: occ}),
                        frozenset({"ih"}), node.line)
                elif isinstance(g, PredCond):
                    from .terms import substitute as term_substitute
                    atom = PredAtom(g.name, tuple(term_substitute(a, rename_terms)
                                                  for a in g.args))
                    fact: Formula = Not(atom) if g.negated else atom
                    self._add_assumption(sub, None, fact,
                                         frozenset({"computational", "rind"}),
                                         node.line)
                elif isinstance(g, CCmp):
                    from .terms import substitute as term_substitute
                    fact = CmpAtom(g.op, term_substitute(g.lhs, rename_terms),
                                   term_substitute(g.rhs, rename_terms))
                    self._add_assumption(sub, None, fact,
                                         frozenset({"computational", "rind"}),
                                         node.line)
                else:
                    raise CheckFailure(
                        f"line {node.line}: assignments are not supported in "
                        f"inductive predicate clauses")
            allowed = []
            for g in clause.guards:
                if isinstance(g, PredCond) and g.name == rule.predicate:
                    from .terms import substitute as term_substitute
                    allowed.append(term_substitute(g.args[0], rename_terms))
            frame = self._frame_for(
                Induction("pred", var=rule.var), phi, tuple(allowed), node.line)
            frame.kind = "pred"
            sub.frames = sub.frames + [frame]
            sub.goal = formula_substitute(phi, {rule.var: instance})
            sub.path.append(("pattern", rule.var, instance))
            self.walk(node.children[k - 1].children[0], sub)

    def _rule_useih(self, node: ProofNode, state: _State) -> None:
        rule = node.rule
        frame = None
        for fr in reversed(state.frames):
            if fr.kind == "measure":
                frame = fr
                break
        if frame is None:
            raise CheckFailure(f"line {node.line}: useih needs a measure or "
                               f"complete induction frame")
        sub = dict(rule.inst)
        if set(sub) != set(frame.measure_vars):
            raise CheckFailure(
                f"line {node.line}: useih must instantiate exactly "
                f"[{', '.join(frame.measure_vars)}]")
        from .terms import substitute as term_substitute
        ob = CmpAtom("lt", term_substitute(frame.measure, sub), frame.measure)
        self._discharge_measure(state, ob, node.line)
        inst_phi = formula_substitute(frame.phi, sub)
        self._add_assumption(state, rule.name, inst_phi, frozenset({"ih"}), node.line)
        justified = list(frame.template)
        for v, pos in zip(frame.measure_vars, frame.measure_positions):
            justified[pos] = sub[v]
        frame.justified.append(tuple(justified))
        self._continue(node, state)


# --- schema helpers -----------------------------------------------------------------


def _pred_atom_args(f: Formula, name: str) -> list[tuple[Term, ...]]:
    return [a.args for a in _collect_pred_atoms(f) if a.name == name]


def _collect_pred_atoms(f: Formula) -> list[PredAtom]:
    out: list[PredAtom] = []

    def walk(g: Formula) -> None:
        if isinstance(g, PredAtom):
            out.append(g)
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
        elif isinstance(g, (Forall, Exists, BForall, BExists)):
            walk(g.body)

    walk(f)
    return out


def _replace_pred_atom(f: Formula, name: str, args: tuple[Term, ...],
                       repl: Formula) -> Formula:
    if isinstance(f, PredAtom) and f.name == name and f.args == args:
        return repl
    if isinstance(f, Not):
        return Not(_replace_pred_atom(f.body, name, args, repl))
    if isinstance(f, And):
        return And(tuple(_replace_pred_atom(p, name, args, repl) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_replace_pred_atom(p, name, args, repl) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(_replace_pred_atom(f.premise, name, args, repl),
                       _replace_pred_atom(f.conclusion, name, args, repl))
    if isinstance(f, Iff):
        return Iff(_replace_pred_atom(f.lhs, name, args, repl),
                   _replace_pred_atom(f.rhs, name, args, repl))
    if isinstance(f, Forall):
        return Forall(f.var, _replace_pred_atom(f.body, name, args, repl))
    if isinstance(f, Exists):
        return Exists(f.var, _replace_pred_atom(f.body, name, args, repl))
    if isinstance(f, BForall):
        return BForall(f.var, f.bound, _replace_pred_atom(f.body, name, args, repl))
    if isinstance(f, BExists):
        return BExists(f.var, f.bound, _replace_pred_atom(f.body, name, args, repl))
    return f


def _formula_mentions_term(f: Formula, target: Term) -> bool:
    from .logic import formula_apply_terms
    for t in formula_apply_terms(f):
        for s in subterms(t):
            if s == target:
                return True
    return False


def _case_labels(node: ProofNode, line: int | None) -> list[str]:
    labels = []
    for child in node.children:
        if not isinstance(child.rule, Case):
            raise CheckFailure(f"line {line}: expected case blocks")
        labels.append(child.rule.label)
    return labels


def _expect_label(label: str, expected: str, line: int | None) -> None:
    norm = label.replace(" ", "")
    if norm != expected.replace(" ", ""):
        raise CheckFailure(f"line {line}: expected case {expected}, found {label}")


def _pair_label_vars(label: str, line: int | None) -> tuple[str, str]:
    from .syntax import parse_term_str
    t = parse_term_str(label, line)
    if isinstance(t, PairT) and isinstance(t.left, Var) and isinstance(t.right, Var):
        if t.left.name == t.right.name:
            raise CheckFailure(f"line {line}: pair case needs two distinct variables")
        return t.left.name, t.right.name
    raise CheckFailure(f"line {line}: pair induction case must look like (v,w)")


def _padic_label_digit(label: str, p: int, var: str, line: int | None) -> str:
    from .syntax import parse_term_str
    t = parse_term_str(label, line)
    if (isinstance(t, Apply) and t.symbol == "add" and len(t.args) == 2
            and isinstance(t.args[0], Apply) and t.args[0].symbol == "mul"
            and literal_value(t.args[0].args[0]) == p
            and isinstance(t.args[0].args[1], Var)
            and t.args[0].args[1].name == var
            and isinstance(t.args[1], Var)):
        return t.args[1].name
    raise CheckFailure(f"line {line}: p-adic step case must look like {p}*{var}+i")


def _match_rind_label(label: str, pattern: Pattern, space: ProgramSpace,
                      line: int | None) -> dict[str, str]:
    """Map the clause's pattern variables to the script's eigenvariables."""
    from .syntax import parse_term_str
    t = parse_term_str(label, line)
    if isinstance(pattern, PCons):
        if isinstance(t, Var) and not pattern.args and t.name == pattern.name:
            return {}
        if (isinstance(t, Apply) and t.symbol == pattern.name
                and len(t.args) == len(pattern.args)):
            renaming: dict[str, str] = {}
            for sub_p, sub_t in zip(pattern.args, t.args):
                if isinstance(sub_p, PVar) and isinstance(sub_t, Var):
                    renaming[sub_p.name] = sub_t.name
                else:
                    raise CheckFailure(
                        f"line {line}: constructor case arguments must be variables")
            return renaming
    if isinstance(pattern, PLit) and literal_value(t) == pattern.value:
        return {}
    if (isinstance(pattern, PPair) and isinstance(t, PairT)
            and isinstance(pattern.left, PVar) and isinstance(pattern.right, PVar)
            and isinstance(t.left, Var) and isinstance(t.right, Var)):
        return {pattern.left.name: t.left.name, pattern.right.name: t.right.name}
    raise CheckFailure(f"line {line}: case {label} does not match the "
                       f"clause pattern")


def _rename_pattern(p: Pattern, renaming: dict[str, str]) -> Pattern:
    if isinstance(p, PVar):
        return PVar(renaming.get(p.name, p.name))
    if isinstance(p, PCons):
        return PCons(p.name, tuple(_rename_pattern(a, renaming) for a in p.args))
    if isinstance(p, PPair):
        return PPair(_rename_pattern(p.left, renaming),
                     _rename_pattern(p.right, renaming))
    return p


def _pattern_shape(t: Term, line: int | None) -> str:
    if literal_value(t) == 0:
        return "zero"
    if (isinstance(t, Apply) and t.symbol == "add" and len(t.args) == 2
            and isinstance(t.args[0], Var) and literal_value(t.args[1]) == 1):
        return "succ"
    if isinstance(t, PairT) and isinstance(t.left, Var) and isinstance(t.right, Var):
        return "pair"
    from .terms import Succ1, Succ2
    if isinstance(t, Succ1) and isinstance(t.inner, Var):
        return "s1"
    if isinstance(t, Succ2) and isinstance(t.inner, Var):
        return "s2"
    raise CheckFailure(f"line {line}: unsupported discrimination pattern "
                       f"{show_term(t)}")


_COVERAGE_FAMILIES = [
    ["zero", "succ"],
    ["zero", "pair"],
    ["zero", "s1", "s2"],
]


def _check_pattern_coverage(shapes: list[str], line: int | None) -> None:
    if shapes in _COVERAGE_FAMILIES:
        return
    raise CheckFailure(
        f"line {line}: pattern family {shapes} is not a built-in coverage family")


# --- discrimination and induction checks (module-level operations) -------------------


def check_discrimination(rule: DiscrPredicates, env: CheckEnv,
                         context: list[Formula]) -> list[tuple[str, str, str, str]]:
    """Validate exhaustiveness and pairwise disjointness of a case split.

    Returns (kind, formula, status, detail) tuples; builtin families come back
    with status 'builtin', anything else carries obligations.
    """
    cases = rule.cases
    if rule.lemma is None:
        if _builtin_family(cases):
            return [("exhaustiveness", " | ".join(show_formula(c) for c in cases),
                     "builtin", "")]
        return [("exhaustiveness", " | ".join(show_formula(c) for c in cases),
                 "open", "case split needs a coverage lemma")]
    lemma = env.ledger.get(rule.lemma)
    expected = Or(tuple(cases)) if len(cases) > 1 else cases[0]
    out: list[tuple[str, str, str, str]] = []
    if lemma.formula != expected:
        out.append(("exhaustiveness", show_formula(expected), "open",
                    f"lemma {rule.lemma} does not state this disjunction"))
    else:
        out.append(("exhaustiveness", show_formula(expected), "closed",
                    f"by lemma {rule.lemma}"))
    for i in range(len(cases)):
        for j in range(i + 1, len(cases)):
            if env.prover.unsat(context + [cases[i], cases[j]]):
                continue
            out.append(("disjointness",
                        f"{show_formula(cases[i])} & {show_formula(cases[j])}",
                        "open", "cases not provably disjoint"))
    return out


def _builtin_family(cases: tuple[Formula, ...]) -> bool:
    norm = []
    for c in cases:
        if not isinstance(c, CmpAtom):
            return False
        op, lhs, rhs = c.op, c.lhs, c.rhs
        if op == "gt":
            op, lhs, rhs = "lt", rhs, lhs
        elif op == "ge":
            op, lhs, rhs = "le", rhs, lhs
        norm.append((op, lhs, rhs))
    if len(norm) == 2:
        (o1, l1, r1), (o2, l2, r2) = norm
        # dichotomies t <= u | t > u and t < u | t >= u, either order
        if {o1, o2} == {"le", "lt"} and (l1, r1) == (r2, l2):
            return True
        # negation discrimination t = u | t != u
        if {o1, o2} == {"eq", "ne"} and ((l1, r1) == (l2, r2) or (l1, r1) == (r2, l2)):
            return True
        return False
    if len(norm) == 3:
        # trichotomy t < u | t = u | t > u (the > arrives as lt with swapped sides)
        lt_fwd = [x for x in norm if x[0] == "lt"]
        eqs = [x for x in norm if x[0] == "eq"]
        if len(eqs) == 1 and len(lt_fwd) == 2:
            (el, er) = eqs[0][1], eqs[0][2]
            pair = {(x[1], x[2]) for x in lt_fwd}
            return pair == {(el, er), (er, el)}
    return False


def check_induction(rule: Induction, goal: Formula, side: list[Formula],
                    env: CheckEnv, partial: frozenset[str], unknown: str,
                    line: int | None = None) -> None:
    """Shape and side-formula class restrictions for an induction rule."""
    cls = classify(goal, partial)
    if cls == HIGHER:
        raise CheckFailure(
            f"line {line}: induction formula is beyond Pi2 ({show_formula(goal)})")
    weak_required = (cls == PI2) or (rule.kind in ("complete", "measure")
                                     and cls in (SIGMA1, PI2))
    if weak_required:
        for f in side:
            c = classify(f, partial)
            if c not in (DELTA0, PI1):
                raise CheckFailure(
                    f"line {line}: side formula must be weak (Pi1 as assumption); "
                    f"offending formula: {show_formula(f)}")
    if rule.kind == "pred":
        prog = env.space.programs.get(rule.predicate)
        if prog is None or prog.kind != "predicate":
            raise CheckFailure(f"line {line}: {rule.predicate} is not a known predicate")
        verdict, witness = positivity_check(prog)
        if verdict != "inductive":
            raise CheckFailure(
                f"line {line}: {rule.predicate} is not inductive ({witness})")
        if prog.arity != 1:
            raise CheckFailure(
                f"line {line}: predicate induction supports unary predicates")
