"""Step-count profiling and growth-class comparison of program variants.

Counts come from the reduction machine, so they measure contractions of the
object program, not wall-clock time.  Growth classes are decided by a coarse
two-parameter least-squares comparison (linear, quadratic, logarithmic,
exponential); the winning model must beat the runner-up by a factor of two
in residual before a claim is made.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import numerals
from .clausal import ProgramSpace
from .numerals import MixedNumeral, ZERO, mkpair, numeral_of, value
from .reduction import FuelExhausted, Value, run_on_numerals


@dataclass(frozen=True)
class CostProfile:
    function: str
    input_desc: str
    size: int
    steps: int
    conv_steps: int
    fuel_used: int
    exhausted: bool
    result: int | None


def profile(name: str, inputs: list[tuple[str, int, list[MixedNumeral]]],
            space: ProgramSpace, fuel: int = 1_000_000) -> list[CostProfile]:
    """One profile per input; inputs are (descriptor, size, argument numerals)."""
    out = []
    for desc, size, args in inputs:
        r = run_on_numerals(name, args, space.defs, fuel)
        if isinstance(r, Value):
            out.append(CostProfile(name, desc, size, r.steps, r.conv_steps,
                                   r.steps, False, value(r.numeral)))
        else:
            out.append(CostProfile(name, desc, size, r.steps, r.conv_steps,
                                   r.steps, True, None))
    return out


# --- input generators ----------------------------------------------------------


def right_nested_list(n: int) -> list[MixedNumeral]:
    t = ZERO
    for _ in range(n):
        t = mkpair(ZERO, t)
    return [t]


def left_nested_list(n: int) -> list[MixedNumeral]:
    """Spine under the first pair component; the costly case for a
    flatten that concatenates its left recursion."""
    t = ZERO
    for _ in range(n):
        t = mkpair(t, ZERO)
    return [t]


def power_of_4(k: int) -> list[MixedNumeral]:
    return [numeral_of(4 ** k, "dyadic")]


def plain_number(n: int) -> list[MixedNumeral]:
    return [numeral_of(n, "dyadic")]


def balanced_tree(depth: int) -> list[MixedNumeral]:
    def build(lo: int, hi: int) -> MixedNumeral:
        if lo > hi:
            return numeral_of(1, "pair")            # E = (0,0)
        mid = (lo + hi) // 2
        node = mkpair(numeral_of(1, "dyadic"),
                      mkpair(numeral_of(mid, "dyadic"),
                             mkpair(build(lo, mid - 1), build(mid + 1, hi))))
        return node
    return [numeral_of(3, "dyadic"), build(0, 2 ** depth - 2)]


GENERATORS = {
    "right-nested-list": right_nested_list,
    "left-nested-list": left_nested_list,
    "power-of-4": power_of_4,
    "plain-number": plain_number,
    "balanced-tree": balanced_tree,
}


def generator_size(gen: str, n: int) -> int:
    """The x-axis value a generated input represents."""
    if gen == "power-of-4":
        return 4 ** n
    return n


# --- model fitting ----------------------------------------------------------------


def _least_squares(xs: list[float], ys: list[float]) -> tuple[float, float, float]:
    """Fit y = a*x + b; returns (a, b, rss)."""
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        return 0.0, my, sum((y - my) ** 2 for y in ys)
    a = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    b = my - a * mx
    rss = sum((y - (a * x + b)) ** 2 for x, y in zip(xs, ys))
    return a, b, rss


def fit_models(sizes: list[int], steps: list[int]) -> dict[str, float]:
    """Relative residual per growth model, lower is better."""
    ys = [float(s) for s in steps]
    scale = sum(abs(y) for y in ys) / len(ys)
    if scale == 0:
        scale = 1.0
    out: dict[str, float] = {}
    transforms = {
        "linear": lambda x: float(x),
        "quadratic": lambda x: float(x) ** 2,
        "logarithmic": lambda x: math.log(x) if x > 0 else 0.0,
    }
    for name, tf in transforms.items():
        xs = [tf(x) for x in sizes]
        _a, _b, rss = _least_squares(xs, ys)
        out[name] = math.sqrt(rss / len(ys)) / scale
    # exponential: fit in semi-log space, measure residual back in y-space
    lys = [math.log(y) if y > 0 else 0.0 for y in ys]
    a, b, _ = _least_squares([float(x) for x in sizes], lys)
    preds = [math.exp(a * x + b) for x in sizes]
    rss = sum((y - p) ** 2 for y, p in zip(ys, preds))
    out["exponential"] = math.sqrt(rss / len(ys)) / scale
    return out


def winning_model(fits: dict[str, float]) -> tuple[str, float]:
    """Best model and its residual ratio against the runner-up."""
    ranked = sorted(fits.items(), key=lambda kv: kv[1])
    best, second = ranked[0], ranked[1]
    ratio = best[1] / second[1] if second[1] > 0 else 0.0
    return best[0], ratio


@dataclass
class ScalingReport:
    generator: str
    sizes: list[int]
    profiles: dict[str, list[CostProfile]]
    fits: dict[str, dict[str, float]]
    winners: dict[str, tuple[str, float]]
    ratio_divergent: bool


def scaling_report(pair: tuple[str, str], generator: str, sizes: list[int],
                   space: ProgramSpace, fuel: int = 10_000_000) -> ScalingReport:
    """Profile two variants on the same generated inputs and fit growth models.

    Variants must agree semantically on every generated input; disagreement
    aborts with the witness.
    """
    gen = GENERATORS[generator]
    inputs = []
    for n in sorted(sizes):
        args = gen(n)
        inputs.append((f"{generator}({n})", generator_size(generator, n), args))
    profiles: dict[str, list[CostProfile]] = {}
    for name in pair:
        profiles[name] = profile(name, inputs, space, fuel)
    a, b = pair
    for pa, pb in zip(profiles[a], profiles[b]):
        if pa.exhausted or pb.exhausted:
            continue
        if pa.result != pb.result:
            raise ValueError(
                f"variants disagree at {pa.input_desc}: "
                f"{a} gives {pa.result}, {b} gives {pb.result}")
    fits = {}
    winners = {}
    for name in pair:
        xs = [p.size for p in profiles[name] if not p.exhausted]
        ys = [p.steps for p in profiles[name] if not p.exhausted]
        fits[name] = fit_models(xs, ys)
        winners[name] = winning_model(fits[name])
    ra = [p.steps for p in profiles[a]]
    rb = [p.steps for p in profiles[b]]
    ratios = [x / y if y else 0.0 for x, y in zip(ra, rb)]
    divergent = bool(ratios and ratios[-1] >= 2.0 * max(ratios[0], 1e-9))
    return ScalingReport(generator, sorted(sizes), profiles, fits, winners, divergent)


def profiles_csv(profiles: list[CostProfile]) -> str:
    lines = ["function,input,size,steps,conv_steps,exhausted,result"]
    for p in sorted(profiles, key=lambda q: (q.function, q.input_desc)):
        lines.append(f"{p.function},{p.input_desc},{p.size},{p.steps},"
                     f"{p.conv_steps},{int(p.exhausted)},"
                     f"{'' if p.result is None else p.result}")
    return "\n".join(lines) + "\n"
