"""Sparse multivariate polynomials over QQ in arrow-matrix variables.

A variable is an entry ``(arrow, row, col)`` of a generic arrow matrix,
1-based, rows indexed by the head vertex.  A monomial is a sorted tuple of
variables with repetition; a polynomial maps monomials to nonzero
:class:`~fractions.Fraction` coefficients.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple

from .exactla import Field


class VariableId(NamedTuple):
    arrow: str
    row: int
    col: int

    @property
    def name(self) -> str:
        return f"x_{self.arrow}_{self.row}_{self.col}"


Monomial = tuple  # tuple[VariableId, ...], sorted


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(sorted(m1 + m2))


class Polynomial:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(sorted(m))] = clean.get(tuple(sorted(m)), 0) + c
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def var(cls, v: VariableId) -> "Polynomial":
        return cls({(v,): Fraction(1)})

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls({(): Fraction(c)})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(m) for m in self.terms}) <= 1

    def variables(self) -> set[VariableId]:
        return {v for m in self.terms for v in m}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (-len(t[0]), t[0]))

    def sort_key(self):
        return (self.degree(), tuple((m, c) for m, c in self.sorted_terms()))

    def normalized(self) -> "Polynomial":
        """Scaled so that the leading coefficient is 1."""
        if not self.terms:
            return self
        return self * (1 / self.sorted_terms()[0][1])

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            return Polynomial({m: c * v for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def derivative(self, v: VariableId) -> "Polynomial":
        out: dict = {}
        for m, c in self.terms.items():
            k = m.count(v)
            if k:
                i = m.index(v)
                rest = m[:i] + m[i + 1:]
                out[rest] = out.get(rest, 0) + c * k
        return Polynomial(out)

    def substitute(self, images: Callable[[VariableId], "Polynomial"]) -> "Polynomial":
        cache: dict[VariableId, Polynomial] = {}
        total = Polynomial()
        for m, c in self.terms.items():
            term = Polynomial.const(c)
            for v in m:
                if v not in cache:
                    cache[v] = images(v)
                term = term * cache[v]
            total = total + term
        return total

    def evaluate(self, values: Mapping[VariableId, object], field: Field):
        total = field.zero
        for m, c in self.terms.items():
            t = field(c)
            for v in m:
                t = field(t * values[v])
            total = field(total + t)
        return total

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def _format_monomial(m: Monomial, pow_op: str) -> str:
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        e = j - i
        parts.append(m[i].name if e == 1 else f"{m[i].name}{pow_op}{e}")
        i = j
    return "*".join(parts)


def format_polynomial(p: Polynomial, pow_op: str = "^") -> str:
    if p.is_zero():
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _format_monomial(m, pow_op)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x_[A-Za-z0-9_\-.]+?_\d+_\d+)(?![0-9_])|(?P<op>[-+*^()]))")


def parse_polynomial(text: str) -> Polynomial:
    """Parse sums of products like ``"x_a_1_2*x_b_1_1 - 3/2*x_c_1_1^2"``.

    Parentheses, unary minus, ``*`` and nonnegative integer powers are
    supported; ``**`` is read as ``^``.
    """
    tokens = []
    pos = 0
    text = text.strip().replace("**", "^")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.group("var"):
            tokens.append(("var", _parse_var(m.group("var"))))
        else:
            tokens.append(("op", m.group("op")))
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def expr() -> Polynomial:
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term() -> Polynomial:
        acc = power()
        while peek() == ("op", "*"):
            take()
            acc = acc * power()
        return acc

    def power() -> Polynomial:
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num" or val.denominator != 1:
                raise ValueError("exponent must be a nonnegative integer")
            out = Polynomial.const(1)
            for _ in range(int(val)):
                out = out * base
            return out
        return base

    def atom() -> Polynomial:
        kind, val = take()
        if kind == "num":
            return Polynomial.const(val)
        if kind == "var":
            return Polynomial.var(val)
        if (kind, val) == ("op", "("):
            e = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return e
        if (kind, val) == ("op", "-"):
            return -atom()
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in polynomial {text!r}")
    return result


def _parse_var(name: str) -> VariableId:
    body, row, col = name[2:].rsplit("_", 2)
    return VariableId(body, int(row), int(col))


def linear_combination(polys: Iterable[Polynomial], coeffs: Iterable) -> Polynomial:
    total = Polynomial()
    for p, c in zip(polys, coeffs):
        total = total + (c * p if isinstance(c, Polynomial) else p * c)
    return total
