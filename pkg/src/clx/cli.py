"""Bundle loading and the command-line front end.

A source bundle is one or more plain-text files holding constructors,
clausal programs, lemma declarations, specifications, proof scripts,
completions, and expected-program blocks.  Loading processes blocks in
order: programs register as they appear, proofs are checked and their
extracted programs registered, declared lemmas are verified by seeded
bounded sampling as soon as all their symbols exist.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import bench as bench_mod
from . import numerals
from .clausal import (
    ClausalError, ClausalProgram, Clause, Cmp, Constructor, Interpreter,
    ProgramSpace, parse_clause, show_clause, show_program,
)
from .extraction import (
    ExtractionResult, compare_programs, completion, extract,
)
from .logic import (
    Formula, HIGHER, Specification, TrueF, classify, eval_formula,
    formula_free_vars, parse_formula, parse_formula_str, show_formula,
)
from .proofchecker import (
    AssignR, CheckEnv, CheckFailure, CheckReport, Define, DiscrPatterns,
    DiscrPredicates, Induction, Instantiate, Lemma, LemmaLedger, ProofNode,
    ProofScript, Rewrite, Simplify, Strengthen, WitnessR, check_proof,
    parse_proof,
)
from .reduction import FuelExhausted, Value, reduce as machine_reduce
from .syntax import ParseError, TokenStream, parse_term, tokenize
from .terms import Apply, Term, Var, literal_value


class LoadError(ValueError):
    pass


@dataclass
class SourceBundle:
    space: ProgramSpace
    ledger: LemmaLedger
    specs: dict[str, Specification] = field(default_factory=dict)
    proofs: dict[str, ProofScript] = field(default_factory=dict)
    reports: dict[str, CheckReport] = field(default_factory=dict)
    extractions: dict[str, ExtractionResult] = field(default_factory=dict)
    expectations: dict[str, list[ClausalProgram]] = field(default_factory=dict)
    completions: dict[str, str] = field(default_factory=dict)   # total -> proof owner
    proof_order: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.rstrip()


def _indent_of(line: str, lineno: int) -> int:
    n = len(line) - len(line.lstrip(" "))
    if n % 2 != 0:
        raise LoadError(f"line {lineno}: indentation must step by two spaces")
    return n // 2


def _read_blocks(path: Path, seen: set[Path]) -> list[tuple[int, str, list]]:
    """Top-level blocks as (lineno, header, [(lineno, level, text), ...])."""
    real = path.resolve()
    if real in seen:
        raise LoadError(f"cyclic include of {path}")
    seen.add(real)
    try:
        text = real.read_text()
    except OSError as e:
        raise LoadError(f"cannot read {path}: {e}") from None
    blocks: list[tuple[int, str, list]] = []
    current: tuple[int, str, list] | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        level = _indent_of(line, lineno)
        if level == 0:
            if line.startswith("include"):
                ts = TokenStream(tokenize(line.replace('"', " "), lineno), lineno)
                ts.eat_name("include")
                rest = line.split(None, 1)[1].strip().strip('"')
                sub = (real.parent / rest)
                blocks.extend(_read_blocks(sub, seen))
                current = None
                continue
            current = (lineno, line.strip(), [])
            blocks.append(current)
        else:
            if current is None:
                raise LoadError(f"line {lineno}: indented line outside a block")
            current[2].append((lineno, level - 1, line.strip()))
    return blocks


def load(paths: list[str | Path], seed: int = 0, budget: int = 512) -> SourceBundle:
    """Load, check, and extract a source bundle; deterministic given the seed."""
    space = ProgramSpace()
    ledger = LemmaLedger()
    bundle = SourceBundle(space, ledger)
    pending_lemmas: list[str] = []
    blocks: list[tuple[int, str, list]] = []
    seen: set[Path] = set()
    for p in paths:
        blocks.extend(_read_blocks(Path(p), seen))
    for lineno, header, body in blocks:
        try:
            _process_block(bundle, header, body, lineno, seed, budget,
                           pending_lemmas)
        except (ParseError, ClausalError, CheckFailure, ValueError) as e:
            raise LoadError(f"line {lineno} [{header}]: {e}") from e
    _verify_lemmas(bundle, pending_lemmas, seed, budget, final=True)
    return bundle


def _process_block(bundle: SourceBundle, header: str, body, lineno: int,
                   seed: int, budget: int, pending: list[str]) -> None:
    ts = TokenStream(tokenize(header, lineno), lineno)
    word = ts.eat_name()
    if word == "constructor":
        name = ts.eat_name()
        params: tuple[str, ...] = ()
        if ts.at_sym("("):
            ts.next()
            ps = [ts.eat_name()]
            while ts.at_sym(","):
                ts.next()
                ps.append(ts.eat_name())
            ts.eat_sym(")")
            params = tuple(ps)
        ts.eat_sym("=")
        template = parse_term(ts)
        ts.expect_done()
        bundle.space.add_constructor(Constructor(name, params, template))
        return
    if word in ("fun", "pred"):
        kind = "function" if word == "fun" else "predicate"
        name = ts.eat_name()
        ts.eat_sym("/")if ts.at_sym("/") else None
        prog = _parse_program_block(name, kind, body, bundle.space, header, lineno)
        warnings = bundle.space.add_program(prog)
        bundle.warnings.extend(warnings)
        bundle.ledger.register_defining_equations(prog, bundle.space)
        _verify_lemmas(bundle, pending, seed, budget)
        return
    if word == "lemma":
        name = ts.eat_name()
        ts.eat_sym(":")
        formula = parse_formula(ts)
        ts.expect_done()
        formula = _resolve_formula(formula, bundle.space)
        bundle.ledger.add(Lemma(name, formula, status="declared"))
        pending.append(name)
        _verify_lemmas(bundle, pending, seed, budget)
        return
    if word == "spec":
        name = ts.eat_name()
        ts.expect_done()
        bundle.specs[name] = _parse_spec_block(name, body, bundle.space)
        return
    if word == "proof":
        name = ts.eat_name()
        ts.eat_sym(":")
        spec_name = ts.eat_name()
        ts.expect_done()
        if spec_name not in bundle.specs:
            raise LoadError(f"line {lineno}: unknown spec {spec_name}")
        script = parse_proof(name, spec_name, body)
        script = _resolve_script(script, bundle.space)
        bundle.proofs[name] = script
        bundle.proof_order.append(name)
        spec = bundle.specs[spec_name]
        env = CheckEnv(bundle.space, bundle.ledger, bundle.specs,
                       budget=budget, seed=seed)
        report = check_proof(script, spec, env)
        bundle.reports[name] = report
        if report.verdict() in ("accepted", "accepted-bounded"):
            result = extract(report, spec, bundle.space)
            bundle.extractions[name] = result
            for prog in result.programs.values():
                warnings = bundle.space.add_program(prog)
                bundle.warnings.extend(warnings)
                bundle.ledger.register_defining_equations(prog, bundle.space)
            _verify_lemmas(bundle, pending, seed, budget)
        return
    if word == "complete":
        # complete NAME(p1,...) = TERM [when CONDITION]
        total = ts.eat_name()
        ts.eat_sym("(")
        params = [ts.eat_name()]
        while ts.at_sym(","):
            ts.next()
            params.append(ts.eat_name())
        ts.eat_sym(")")
        ts.eat_sym("=")
        call = parse_term(ts)
        guard = None
        if ts.at_name("when"):
            ts.next()
            from .clausal import _parse_condition
            guard = _parse_condition(ts)
        ts.expect_done()
        call = _resolve_term(call, bundle.space)
        prog = completion(total, tuple(params), call, guard)
        w = bundle.space.add_program(prog)
        bundle.warnings.extend(w)
        bundle.ledger.register_defining_equations(prog, bundle.space)
        _verify_lemmas(bundle, pending, seed, budget)
        return
    if word == "expect":
        proof_name = ts.eat_name()
        ts.expect_done()
        bundle.expectations[proof_name] = _parse_expect_block(
            body, bundle.space, lineno)
        return
    raise LoadError(f"line {lineno}: unknown block {word!r}")


def _parse_program_block(name: str, kind: str, body, space: ProgramSpace,
                         header: str, lineno: int) -> ClausalProgram:
    arity = None
    if "/" in header:
        arity = int(header.split("/")[1].split()[0])
    clauses = []
    for clineno, level, text in body:
        if level != 0:
            raise LoadError(f"line {clineno}: clause lines sit directly under "
                            f"the program header")
        cname, clause = parse_clause(text, kind, space, clineno)
        if cname != name:
            raise LoadError(f"line {clineno}: clause for {cname} inside {name}")
        clauses.append(clause)
    if not clauses:
        raise LoadError(f"line {lineno}: empty program {name}")
    if arity is None:
        arity = len(clauses[0].patterns)
    prog = ClausalProgram(name, arity, kind)
    for c in clauses:
        if len(c.patterns) != arity:
            raise LoadError(f"line {lineno}: arity mismatch in {name}")
        prog.clauses.append(c)
    return prog


def _parse_spec_block(name: str, body, space: ProgramSpace) -> Specification:
    unknown = None
    params: tuple[str, ...] = ()
    kind = "function"
    assume: Formula = TrueF()
    matrix: Formula | None = None
    for lineno, level, text in body:
        ts = TokenStream(tokenize(text, lineno), lineno)
        word = ts.eat_name()
        if word == "unknown":
            unknown = ts.eat_name()
            if ts.at_sym("/"):
                ts.next()
                ts.next()          # declared arity; the parameter list fixes it
            ts.eat_sym("(")
            ps = [ts.eat_name()]
            while ts.at_sym(","):
                ts.next()
                ps.append(ts.eat_name())
            ts.eat_sym(")")
            if ts.at_name("predicate"):
                ts.next()
                kind = "predicate"
            ts.expect_done()
            params = tuple(ps)
        elif word == "assume":
            assume = _resolve_formula(parse_formula(ts), space)
            ts.expect_done()
        elif word == "matrix":
            matrix = _resolve_formula(parse_formula(ts), space)
            ts.expect_done()
        else:
            raise LoadError(f"line {lineno}: unknown spec field {word}")
    if unknown is None or matrix is None:
        raise LoadError(f"spec {name} needs an unknown and a matrix")
    spec = Specification(unknown, params, kind, assume, matrix)
    cls = classify(spec.full_formula(), frozenset({unknown}))
    if cls == HIGHER:
        raise LoadError(f"spec {name} is not a Pi2 specification (class {cls})")
    return spec


def _parse_expect_block(body, space: ProgramSpace, lineno: int) -> list[ClausalProgram]:
    programs: list[ClausalProgram] = []
    current: ClausalProgram | None = None
    for clineno, level, text in body:
        if level == 0:
            ts = TokenStream(tokenize(text, clineno), clineno)
            word = ts.eat_name()
            if word not in ("fun", "pred"):
                raise LoadError(f"line {clineno}: expect blocks hold fun/pred programs")
            name = ts.eat_name()
            arity = None
            if ts.at_sym("/"):
                ts.next()
                arity = int(ts.next().text)
            current = ClausalProgram(name, arity or 0,
                                     "function" if word == "fun" else "predicate")
            programs.append(current)
        else:
            if current is None:
                raise LoadError(f"line {clineno}: clause before a program header")
            cname, clause = parse_clause(text, current.kind, space, clineno)
            if cname != current.name:
                raise LoadError(f"line {clineno}: clause for {cname} inside "
                                f"{current.name}")
            current.clauses.append(clause)
    for prog in programs:
        if not prog.clauses:
            raise LoadError(f"line {lineno}: empty expected program {prog.name}")
        prog.arity = prog.arity or len(prog.clauses[0].patterns)
    return programs


# --- constructor-constant resolution ------------------------------------------------


def _resolve_term(t: Term, space: ProgramSpace) -> Term:
    from .terms import (DYCASE, LET, PAIRCASE, PAIR_T, S1, S2, APPLY, SELF, VAR,
                        DyCase, Let, PairCase, PairT, SelfApply, Succ1, Succ2)
    tag = t.tag
    if tag == VAR:
        c = space.constructors.get(t.name)
        if c is not None and not c.params:
            return Apply(t.name, ())
        return t
    if tag == S1:
        return Succ1(_resolve_term(t.inner, space))
    if tag == S2:
        return Succ2(_resolve_term(t.inner, space))
    if tag == PAIR_T:
        return PairT(_resolve_term(t.left, space), _resolve_term(t.right, space))
    if tag == LET:
        return Let(t.bound, _resolve_term(t.scrutinee, space),
                   _resolve_term(t.body, space))
    if tag == DYCASE:
        return DyCase(_resolve_term(t.scrutinee, space),
                      _resolve_term(t.zero_branch, space),
                      t.one_var, _resolve_term(t.one_branch, space),
                      t.two_var, _resolve_term(t.two_branch, space))
    if tag == PAIRCASE:
        return PairCase(_resolve_term(t.scrutinee, space),
                        _resolve_term(t.zero_branch, space),
                        t.left_var, t.right_var,
                        _resolve_term(t.pair_branch, space))
    if tag == APPLY:
        return Apply(t.symbol, tuple(_resolve_term(a, space) for a in t.args))
    if tag == SELF:
        return SelfApply(tuple(_resolve_term(a, space) for a in t.args))
    return t


def _resolve_formula(f: Formula, space: ProgramSpace) -> Formula:
    from .logic import (And, BExists, BForall, CmpAtom, Exists, Forall,
                        GraphAtom, Iff, Implies, Not, Or, PredAtom)
    if isinstance(f, CmpAtom):
        return CmpAtom(f.op, _resolve_term(f.lhs, space), _resolve_term(f.rhs, space))
    if isinstance(f, PredAtom):
        return PredAtom(f.name, tuple(_resolve_term(a, space) for a in f.args))
    if isinstance(f, GraphAtom):
        return GraphAtom(_resolve_term(f.term, space), f.var)
    if isinstance(f, Not):
        return Not(_resolve_formula(f.body, space))
    if isinstance(f, And):
        return And(tuple(_resolve_formula(p, space) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_resolve_formula(p, space) for p in f.parts))
    if isinstance(f, Implies):
        return Implies(_resolve_formula(f.premise, space),
                       _resolve_formula(f.conclusion, space))
    if isinstance(f, Iff):
        return Iff(_resolve_formula(f.lhs, space), _resolve_formula(f.rhs, space))
    if isinstance(f, Forall):
        return Forall(f.var, _resolve_formula(f.body, space))
    if isinstance(f, Exists):
        return Exists(f.var, _resolve_formula(f.body, space))
    if isinstance(f, BForall):
        return BForall(f.var, _resolve_term(f.bound, space),
                       _resolve_formula(f.body, space))
    if isinstance(f, BExists):
        return BExists(f.var, _resolve_term(f.bound, space),
                       _resolve_formula(f.body, space))
    return f


def _resolve_script(script: ProofScript, space: ProgramSpace) -> ProofScript:
    def fix_inst(inst):
        if inst is None:
            return None
        return tuple((k, _resolve_term(v, space)) for k, v in inst)

    def fix_node(node: ProofNode) -> ProofNode:
        r = node.rule
        if isinstance(r, Strengthen):
            r = Strengthen(_resolve_formula(r.formula, space))
        elif isinstance(r, WitnessR):
            r = WitnessR(r.var, _resolve_term(r.term, space))
        elif isinstance(r, Instantiate):
            r = Instantiate(r.source, fix_inst(r.inst), r.name)
        elif isinstance(r, Simplify):
            r = Simplify(r.lemma, fix_inst(r.inst), r.name)
        elif isinstance(r, Rewrite):
            r = Rewrite(r.source, fix_inst(r.inst), r.reverse)
        elif isinstance(r, DiscrPredicates):
            r = DiscrPredicates(tuple(_resolve_formula(c, space) for c in r.cases),
                                r.lemma)
        elif isinstance(r, DiscrPatterns):
            r = DiscrPatterns(r.var, tuple(_resolve_term(p, space)
                                           for p in r.patterns))
        elif isinstance(r, AssignR):
            r = AssignR(_resolve_term(r.term, space), r.var)
        elif isinstance(r, Define):
            r = Define(r.unknown, tuple(_resolve_term(a, space) for a in r.args),
                       None if r.body is None else _resolve_term(r.body, space),
                       None if r.pred_body is None
                       else _resolve_formula(r.pred_body, space))
        elif isinstance(r, Induction) and r.measure is not None:
            r = Induction(r.kind, var=r.var, measure_vars=r.measure_vars,
                          measure=_resolve_term(r.measure, space), base=r.base,
                          offset=r.offset, predicate=r.predicate)
        from .proofchecker import UseIH
        if isinstance(r, UseIH):
            r = UseIH(fix_inst(r.inst), r.name)
        node = ProofNode(r, [fix_node(c) for c in node.children], node.line)
        return node

    return ProofScript(script.name, script.spec_name, fix_node(script.root))


# --- lemma verification ----------------------------------------------------------


def _lemma_symbols_defined(f: Formula, space: ProgramSpace) -> bool:
    from .logic import formula_apply_terms
    from .terms import subterms, APPLY, SELF
    native = {"add", "mul", "monus", "sq", "dbl", "pred", "succ", "le", "lt",
              "eq", "fst", "snd", "dyarg", "isdy1", "isdy2"}
    names = set()
    for t in formula_apply_terms(f):
        for s in subterms(t):
            if s.tag in (APPLY, SELF):
                names.add(s.symbol if s.tag == APPLY else "@self")
    from .proofchecker import _collect_pred_atoms
    for a in _collect_pred_atoms(f):
        names.add(a.name)
    for n in names:
        if n == "@self":
            return False
        if n not in space.programs and n not in space.constructors and n not in native:
            return False
    return True


def _verify_lemmas(bundle: SourceBundle, pending: list[str], seed: int,
                   budget: int, final: bool = False) -> None:
    still: list[str] = []
    for name in pending:
        lemma = bundle.ledger.get(name)
        if not _lemma_symbols_defined(lemma.formula, bundle.space):
            still.append(name)
            continue
        n = _verify_one_lemma(lemma, bundle.space, seed, budget)
        lemma.status = "bounded-verified"
        lemma.samples = n
    pending[:] = still
    if final and still:
        bundle.warnings.extend(
            f"lemma {n} could not be verified (undefined symbols)" for n in still)


def _verify_one_lemma(lemma: Lemma, space: ProgramSpace, seed: int,
                      budget: int) -> int:
    import itertools as it
    interp = Interpreter(space, budget=400_000)
    fv = sorted(formula_free_vars(lemma.formula))
    pool = _lemma_pool(space, interp)
    if not fv:
        v = eval_formula(lemma.formula, {}, interp, budget)
        if v == "false":
            raise LoadError(f"lemma {lemma.name} is false")
        return 1 if v == "true" else 0
    if len(fv) > 5:
        return 0
    rng = random.Random(seed)
    combos = list(it.product(pool[:10], repeat=len(fv)))
    if len(combos) > 1500:
        rng.shuffle(combos)
        combos = combos[:1500]
    count = 0
    for combo in combos:
        envmap = dict(zip(fv, combo))
        interp.calls = 0
        v = eval_formula(lemma.formula, envmap, interp, budget)
        if v == "false":
            raise LoadError(f"lemma {lemma.name} fails at {envmap}")
        if v == "true":
            count += 1
    return count


def _lemma_pool(space: ProgramSpace, interp: Interpreter) -> list[int]:
    pool = list(range(7))
    for a in range(3):
        for b in range(3):
            pool.append(numerals.pair(a, b))
    ground = []
    for c in space.constructors.values():
        if not c.params:
            ground.append(interp.call(c.name, ()))
    import itertools as it
    for c in space.constructors.values():
        if c.params and len(c.params) <= 3 and ground:
            for combo in it.product([0, 1, 2, ground[0]], repeat=len(c.params)):
                pool.append(interp.call(c.name, combo))
    seen: set[int] = set()
    out = []
    for v in pool:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


# --- reports --------------------------------------------------------------------


def report_dict(report: CheckReport) -> dict:
    return {
        "schema_version": 1,
        "proof": report.proof,
        "verdict": report.verdict(),
        "branches": report.branches,
        "errors": list(report.errors),
        "cited_lemmas": list(report.cited_lemmas),
        "obligations": [
            {
                "branch": o.branch,
                "kind": o.kind,
                "formula": o.formula,
                "status": o.status,
                "line": o.line,
                "witness": o.witness,
                "samples": o.samples,
                "detail": o.detail,
            }
            for o in report.obligations
        ],
    }


def _print_report_text(report: CheckReport, out) -> None:
    print(f"proof {report.proof}: {report.verdict()} "
          f"({report.branches} branches)", file=out)
    for e in report.errors:
        print(f"  error: {e}", file=out)
    for o in report.obligations:
        if o.status in ("open", "bounded-verified"):
            line = f"  [{o.status}] {o.kind} at branch {o.branch}: {o.formula}"
            if o.witness:
                line += f" (counterexample {o.witness})"
            if o.samples:
                line += f" ({o.samples} samples)"
            if o.detail:
                line += f" -- {o.detail}"
            print(line, file=out)


# --- CLI ------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def corpus_paths() -> list[Path]:
    root = resources.files("clx") / "corpus"
    return [Path(str(root / "corpus.cl"))]


def _seed_from_env() -> int:
    try:
        return int(os.environ.get("CLX_SEED", "0"))
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="clx", description="clausal proof checking and extraction")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--budget", type=int, default=512)
        sp.add_argument("--fuel", type=int, default=1_000_000)
        sp.add_argument("--report", choices=["text", "json"], default="text")
        sp.add_argument("--allow-bounded", action="store_true")
        sp.add_argument("--only", default=None)

    sp = sub.add_parser("check", help="check proof scripts in a bundle")
    sp.add_argument("bundle")
    common(sp)

    sp = sub.add_parser("extract", help="check and print extracted programs")
    sp.add_argument("bundle")
    sp.add_argument("--compare", action="store_true",
                    help="diff against the bundle's expect blocks")
    common(sp)

    sp = sub.add_parser("run", help="reduce a function application")
    sp.add_argument("bundle")
    sp.add_argument("function")
    sp.add_argument("args", nargs="*")
    sp.add_argument("--fuel", type=int, default=1_000_000)
    sp.add_argument("--trace", action="store_true")

    sp = sub.add_parser("bench", help="profile and compare two variants")
    sp.add_argument("bundle")
    sp.add_argument("--pair", required=True, help="A,B variant names")
    sp.add_argument("--generator", required=True,
                    choices=sorted(bench_mod.GENERATORS))
    sp.add_argument("--sizes", required=True, help="comma-separated sizes")
    sp.add_argument("--fuel", type=int, default=10_000_000)
    sp.add_argument("--format", choices=["text", "csv", "json"], default="text")

    sp = sub.add_parser("corpus", help="run the bundled corpus pipeline")
    common(sp)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 64
    except SystemExit:
        return 0
    seed = _seed_from_env()
    try:
        if ns.command == "check":
            return _cmd_check(ns, [ns.bundle], seed)
        if ns.command == "extract":
            return _cmd_extract(ns, [ns.bundle], seed)
        if ns.command == "run":
            return _cmd_run(ns, seed)
        if ns.command == "bench":
            return _cmd_bench(ns, seed)
        if ns.command == "corpus":
            return _cmd_corpus(ns, seed)
    except LoadError as e:
        print(f"load error: {e}", file=sys.stderr)
        return 1
    return 64


def _selected_reports(bundle: SourceBundle, only: str | None):
    names = bundle.proof_order if only is None else [only]
    for n in names:
        if n not in bundle.reports:
            raise LoadError(f"no proof named {n}")
        yield n, bundle.reports[n]


def _exit_code(reports: list[CheckReport], allow_bounded: bool) -> int:
    worst = 0
    for r in reports:
        v = r.verdict()
        if v == "rejected":
            return 1
        if v == "accepted-bounded":
            worst = max(worst, 2 if allow_bounded else 1)
    return worst


def _cmd_check(ns, paths, seed) -> int:
    bundle = load(paths, seed=seed, budget=ns.budget)
    chosen = list(_selected_reports(bundle, ns.only))
    if ns.report == "json":
        payload = {"schema_version": 1,
                   "proofs": [report_dict(r) for _n, r in chosen]}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for _n, r in chosen:
            _print_report_text(r, sys.stdout)
    return _exit_code([r for _n, r in chosen], ns.allow_bounded)


def _cmd_extract(ns, paths, seed) -> int:
    bundle = load(paths, seed=seed, budget=ns.budget)
    chosen = list(_selected_reports(bundle, ns.only))
    failures = 0
    for name, report in chosen:
        if name not in bundle.extractions:
            print(f"proof {name}: {report.verdict()}, nothing extracted")
            failures += 1
            continue
        result = bundle.extractions[name]
        for prog in result.programs.values():
            print(f"# extracted from {name}")
            print(show_program(prog))
        if result.omitted_branches:
            print(f"# omitted branches: {', '.join(result.omitted_branches)}")
        if ns.compare:
            expected = bundle.expectations.get(name)
            if expected is None:
                print(f"# no expect block for {name}")
                failures += 1
                continue
            for exp in expected:
                actual = (result.programs.get(exp.name)
                          or bundle.space.programs.get(exp.name))
                if actual is None:
                    print(f"# missing program {exp.name}")
                    failures += 1
                    continue
                diffs = compare_programs(actual, exp)
                if diffs:
                    failures += 1
                    print(f"# MISMATCH for {exp.name}:")
                    for d in diffs:
                        print(f"#   {d}")
                else:
                    print(f"# {exp.name} matches the expected program")
    if failures:
        return 1
    return _exit_code([r for _n, r in chosen], ns.allow_bounded)


def _cmd_run(ns, seed) -> int:
    bundle = load([ns.bundle], seed=seed)
    args = [numerals.parse_numeral(a) for a in ns.args]
    fn = ns.function
    arity = bundle.space.arity_of(fn)
    if arity is None:
        print(f"unknown function {fn}", file=sys.stderr)
        return 1
    if arity != len(args):
        print(f"{fn} expects {arity} arguments", file=sys.stderr)
        return 64
    trace = None
    if ns.trace:
        def trace(step, kind, pos, head):
            print(f"{step} {kind} @{pos} -> {head}")
    from .reduction import _embed
    out = machine_reduce(Apply(fn, tuple(_embed(a) for a in args)),
                         bundle.space.defs, ns.fuel, trace=trace)
    if isinstance(out, FuelExhausted):
        print(f"fuel exhausted after {out.steps} steps "
              f"({out.conv_steps} conversions)", file=sys.stderr)
        return 1
    print(numerals.show_numeral(out.numeral))
    print(f"steps={out.steps} conversions={out.conv_steps}", file=sys.stderr)
    return 0


def _cmd_bench(ns, seed) -> int:
    bundle = load([ns.bundle], seed=seed)
    a, b = ns.pair.split(",")
    sizes = [int(s) for s in ns.sizes.split(",")]
    rep = bench_mod.scaling_report((a.strip(), b.strip()), ns.generator, sizes,
                                   bundle.space, fuel=ns.fuel)
    if ns.format == "csv":
        rows = [p for ps in rep.profiles.values() for p in ps]
        sys.stdout.write(bench_mod.profiles_csv(rows))
        return 0
    if ns.format == "json":
        payload = {
            "schema_version": 1,
            "generator": rep.generator,
            "sizes": rep.sizes,
            "fits": rep.fits,
            "winners": {k: {"model": v[0], "ratio": v[1]}
                        for k, v in rep.winners.items()},
            "ratio_divergent": rep.ratio_divergent,
            "profiles": {k: [{"input": p.input_desc, "size": p.size,
                              "steps": p.steps, "conv_steps": p.conv_steps,
                              "exhausted": p.exhausted}
                             for p in ps] for k, ps in rep.profiles.items()},
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    for name, profs in rep.profiles.items():
        for p in profs:
            print(f"{name} {p.input_desc}: steps={p.steps} conv={p.conv_steps}"
                  + (" (fuel exhausted)" if p.exhausted else ""))
    for name, (model, ratio) in rep.winners.items():
        print(f"{name}: best fit {model} (residual ratio {ratio:.3f})")
    print(f"ratio divergent: {rep.ratio_divergent}")
    return 0


def _cmd_corpus(ns, seed) -> int:
    bundle = load(corpus_paths(), seed=seed, budget=ns.budget)
    reports = [bundle.reports[n] for n in bundle.proof_order]
    accepted = sum(1 for r in reports if r.verdict() == "accepted")
    matched = 0
    mismatched = []
    for name, expected in bundle.expectations.items():
        result = bundle.extractions.get(name)
        for exp in expected:
            actual = None
            if result is not None:
                actual = result.programs.get(exp.name)
            if actual is None:
                actual = bundle.space.programs.get(exp.name)
            if actual is not None and not compare_programs(actual, exp):
                matched += 1
            else:
                mismatched.append(exp.name)
    suites = _oracle_suites(bundle, seed)
    passed = sum(1 for _n, ok in suites if ok)
    if ns.report == "json":
        print(json.dumps({
            "schema_version": 1,
            "proofs_accepted": accepted,
            "proofs_total": len(reports),
            "programs_matched": matched,
            "programs_mismatched": mismatched,
            "oracle_suites": {n: ok for n, ok in suites},
            "warnings": bundle.warnings,
        }, indent=2, sort_keys=True))
    else:
        print(f"{accepted}/{len(reports)} proofs accepted, "
              f"{matched} programs matched the expected clauses, "
              f"{passed}/{len(suites)} oracle suites passed")
        for n, ok in suites:
            print(f"  oracle {n}: {'pass' if ok else 'FAIL'}")
        for w in bundle.warnings:
            print(f"  warning: {w}")
    ok = (accepted == len(reports) and not mismatched
          and passed == len(suites))
    return 0 if ok else 1


def _oracle_suites(bundle: SourceBundle, seed: int) -> list[tuple[str, bool]]:
    interp = Interpreter(bundle.space, budget=5_000_000)
    out = []

    def suite(name, fn):
        try:
            out.append((name, bool(fn())))
        except Exception:
            out.append((name, False))

    def sqrt_suite():
        for x in range(400):
            want = math.isqrt(x)
            for f in ("sqrt1", "sqrt2", "sqrt3", "sqrt4"):
                if interp.call(f, (x,)) != want:
                    return False
        return True

    def div_suite():
        for x in range(0, 120):
            for y in range(0, 12):
                want = x // y if y else 0
                if interp.call("divc", (x, y)) != want:
                    return False
                if interp.call("div", (x, y)) != want:
                    return False
        return True

    def flat_suite():
        rng = random.Random(seed)
        for _ in range(30):
            v = _random_tree_value(rng, 12)
            flat = interp.call("FlatA", (v,))
            if flat != interp.call("Flat", (v,)):
                return False
            size = numerals.pair_size(v)
            for _i in range(size):
                a, b = numerals.unpair(flat) if flat else (None, None)
                if a != 0:
                    return False
                flat = b
            if flat != 0:
                return False
        return True

    def tree_suite():
        rng = random.Random(seed + 1)
        for _ in range(30):
            keys = sorted(rng.sample(range(40), rng.randint(0, 8)))
            t = _bst_value(interp, keys)
            for z in range(0, 42, 3):
                if (interp.call("inS", (z, t)) != 0) != (z in keys):
                    return False
            z = rng.randrange(40)
            t2 = interp.call("Ins", (z, t))
            if interp.call("Bst", (t2,)) != 1:
                return False
        return True

    suite("sqrt-vs-isqrt", sqrt_suite)
    suite("div-vs-floordiv", div_suite)
    suite("flat-zero-list", flat_suite)
    suite("bst-membership-insert", tree_suite)
    return out


def _random_tree_value(rng: random.Random, size: int) -> int:
    if size <= 0:
        return 0
    left = rng.randrange(size)
    l = _random_tree_value(rng, left)
    r = _random_tree_value(rng, size - 1 - left)
    return numerals.pair(l, r)


def _bst_value(interp: Interpreter, keys: list[int]) -> int:
    t = interp.call("E", ())
    order = list(keys)
    random.Random(7).shuffle(order)
    for k in order:
        t = interp.call("Ins", (k, t))
    return t


if __name__ == "__main__":
    raise SystemExit(main())
