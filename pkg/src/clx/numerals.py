"""Mixed representation of natural numbers.

Naturals are written either dyadically (bijective base 2, digits built by the
successors s1(x) = 2x+1 and s2(x) = 2x+2) or as pairs under a fixed bijection
``pair : N x N -> N+``.  Mixed numerals freely combine both; one number may
have several numeral forms, all with the same ``value``.

The pairing function ranks binary trees: number 0 is the leaf, and positive n
is the n-th proper tree when trees are ordered by size (internal node count)
first and lexicographically inside a size class.  Size classes have Catalan
many members, which yields all four pairing axioms at once: injectivity,
positivity, strict monotonicity in both arguments, and the additive pair-size
law with pair_size(x) = Theta(log x).
"""

from __future__ import annotations


class NotAPair(ValueError):
    """Raised when unpair is applied to 0, the only non-pair."""


# --- pairing over plain integers -------------------------------------------

_catalan: list[int] = [1]          # catalan[n] = #trees with n internal nodes
_offset: list[int] = [0, 1]        # offset[n] = least value of pair size n


def _grow_tables(n: int) -> None:
    while len(_catalan) <= n:
        k = len(_catalan) - 1
        _catalan.append(_catalan[k] * 2 * (2 * k + 1) // (k + 2))
    while len(_offset) <= n + 1:
        k = len(_offset) - 1
        _offset.append(_offset[k] + _catalan[k])


def pair_size(x: int) -> int:
    """Number of pairing applications in the pair form of x."""
    if x < 0:
        raise ValueError("pair_size needs a natural number")
    n = 0
    _grow_tables(1)
    while True:
        _grow_tables(n + 1)
        if x < _offset[n + 1]:
            return n
        n += 1


def _size_and_local_rank(x: int) -> tuple[int, int]:
    n = pair_size(x)
    return n, x - _offset[n]


def pair(x: int, y: int) -> int:
    """The pairing bijection; always positive, strictly above both arguments."""
    if x < 0 or y < 0:
        raise ValueError("pair needs natural numbers")
    sa, la = _size_and_local_rank(x)
    sb, lb = _size_and_local_rank(y)
    n = sa + sb + 1
    _grow_tables(n)
    local = 0
    for a in range(sa):
        local += _catalan[a] * _catalan[n - 1 - a]
    local += la * _catalan[sb] + lb
    return _offset[n] + local


def unpair(z: int) -> tuple[int, int]:
    """Inverse of pair on the positive naturals."""
    if z <= 0:
        raise NotAPair("0 is not a pair")
    n = pair_size(z)
    local = z - _offset[n]
    sa = 0
    while True:
        block = _catalan[sa] * _catalan[n - 1 - sa]
        if local < block:
            break
        local -= block
        sa += 1
    sb = n - 1 - sa
    la, lb = divmod(local, _catalan[sb])
    x = _offset[sa] + la
    y = _offset[sb] + lb
    return x, y


# --- mixed numerals ---------------------------------------------------------

Z, D1, D2, PR = 0, 1, 2, 3


class MixedNumeral:
    """Irreducible value: 0, a dyadic successor application, or a pair."""

    __slots__ = ("tag", "a", "b")

    def __init__(self, tag: int, a: "MixedNumeral | None" = None,
                 b: "MixedNumeral | None" = None):
        self.tag = tag
        self.a = a
        self.b = b

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedNumeral):
            return NotImplemented
        if self.tag != other.tag:
            return False
        if self.tag == Z:
            return True
        if self.tag == PR:
            return self.a == other.a and self.b == other.b
        return self.a == other.a

    def __hash__(self) -> int:
        if self.tag == Z:
            return 0
        if self.tag == PR:
            return hash((PR, self.a, self.b))
        return hash((self.tag, self.a))

    def __repr__(self) -> str:
        return f"MixedNumeral({show_numeral(self)!r})"


ZERO = MixedNumeral(Z)


def dy1(inner: MixedNumeral) -> MixedNumeral:
    return MixedNumeral(D1, inner)


def dy2(inner: MixedNumeral) -> MixedNumeral:
    return MixedNumeral(D2, inner)


def mkpair(left: MixedNumeral, right: MixedNumeral) -> MixedNumeral:
    return MixedNumeral(PR, left, right)


def value(n: MixedNumeral) -> int:
    """Semantic value of a mixed numeral."""
    tag = n.tag
    if tag == Z:
        return 0
    if tag == D1:
        return 2 * value(n.a) + 1
    if tag == D2:
        return 2 * value(n.a) + 2
    return pair(value(n.a), value(n.b))


def numeral_of(v: int, mode: str = "dyadic") -> MixedNumeral:
    """Canonical numeral of a value; mode is 'dyadic' or 'pair'."""
    if v < 0:
        raise ValueError("numerals denote naturals")
    if mode == "dyadic":
        digits = []
        while v > 0:
            d = 1 if v % 2 == 1 else 2
            digits.append(d)
            v = (v - d) // 2
        n = ZERO
        for d in reversed(digits):
            n = MixedNumeral(D1 if d == 1 else D2, n)
        return n
    if mode == "pair":
        if v == 0:
            return ZERO
        a, b = unpair(v)
        return mkpair(numeral_of(a, "pair"), numeral_of(b, "pair"))
    raise ValueError(f"unknown numeral mode {mode!r}")


def to_pair_form(n: MixedNumeral) -> MixedNumeral:
    """Convert the head to Zero or Pair; the rest of the numeral is untouched
    where possible (dyadic heads must be decoded through the bijection)."""
    if n.tag in (Z, PR):
        return n
    v = value(n)
    a, b = unpair(v)
    return mkpair(numeral_of(a, "dyadic"), numeral_of(b, "dyadic"))


def to_dyadic_form(n: MixedNumeral) -> MixedNumeral:
    """Convert the head to Zero, Dy1, or Dy2."""
    if n.tag in (Z, D1, D2):
        return n
    return numeral_of(value(n), "dyadic")


def is_dyadic(n: MixedNumeral) -> bool:
    while n.tag in (D1, D2):
        n = n.a
    return n.tag == Z


# --- textual form -----------------------------------------------------------

def show_numeral(n: MixedNumeral) -> str:
    """Print a numeral: pure dyadic parts as decimals, pairs as (a,b)."""
    if is_dyadic(n):
        return str(value(n))
    if n.tag == PR:
        return f"({show_numeral(n.a)},{show_numeral(n.b)})"
    # dyadic head over a pair somewhere below
    return f"s{n.tag} {show_numeral(n.a)}"


def parse_numeral(text: str) -> MixedNumeral:
    """Parse the textual numeral syntax: decimals, (a,b), s1 t, s2 t."""
    n, rest = _parse_numeral(text.strip())
    if rest.strip():
        raise ValueError(f"trailing input in numeral: {rest!r}")
    return n


def _parse_numeral(s: str) -> tuple[MixedNumeral, str]:
    s = s.lstrip()
    if not s:
        raise ValueError("empty numeral")
    if s[0].isdigit():
        i = 0
        while i < len(s) and s[i].isdigit():
            i += 1
        return numeral_of(int(s[:i]), "dyadic"), s[i:]
    if s.startswith("s1") or s.startswith("s2"):
        tag = D1 if s[1] == "1" else D2
        inner, rest = _parse_numeral(s[2:])
        return MixedNumeral(tag, inner), rest
    if s[0] == "(":
        left, rest = _parse_numeral(s[1:])
        rest = rest.lstrip()
        if not rest.startswith(","):
            raise ValueError("pair numeral needs a comma")
        right, rest = _parse_numeral(rest[1:])
        rest = rest.lstrip()
        if not rest.startswith(")"):
            raise ValueError("unclosed pair numeral")
        return mkpair(left, right), rest[1:]
    raise ValueError(f"cannot parse numeral at {s[:20]!r}")
