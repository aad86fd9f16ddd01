"""Text grammar and structured serialization for differential polynomials.

Grammar: generators ``z``, ``zb``, ``u0``, ``u1``, ..., ``ub0``, ...;
exponential factor ``E[q]`` with q a rational literal; scalar literals are
rationals with optional ``i`` and ``s2`` factors; operators ``+ - * ^``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .diffpoly import DiffPoly, Monomial, U, UB, Z, ZB, var_name
from .scalars import Scalar


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN = re.compile(r"""
    (?P<num>\d+(?:/\d+)?)
  | (?P<name>ub\d+|u\d+|zb|z|i|s2|E)
  | (?P<op>[-+*^\[\]()])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", pos)

    def parse(self) -> DiffPoly:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos)
        return p

    def expr(self) -> DiffPoly:
        sign = 1
        kind, val, _ = self.peek()
        if val in "+-":
            self.next()
            sign = -1 if val == "-" else 1
        p = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if val == "+":
                self.next()
                p = p + self.term()
            elif val == "-":
                self.next()
                p = p - self.term()
            else:
                return p

    def term(self) -> DiffPoly:
        p = self.factor()
        while self.peek()[1] == "*":
            self.next()
            p = p * self.factor()
        return p

    def factor(self) -> DiffPoly:
        p = self.atom()
        if self.peek()[1] == "^":
            self.next()
            kind, val, pos = self.next()
            if kind != "num" or "/" in val:
                raise ParseError("exponent must be a nonnegative integer", pos)
            p = _poly_pow(p, int(val))
        return p

    def rational(self) -> Fraction:
        sign = 1
        if self.peek()[1] == "-":
            self.next()
            sign = -1
        kind, val, pos = self.next()
        if kind != "num":
            raise ParseError("expected rational literal", pos)
        return sign * Fraction(val)

    def atom(self) -> DiffPoly:
        kind, val, pos = self.next()
        if kind == "num":
            return DiffPoly.const(Fraction(val))
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p
        if val == "i":
            return DiffPoly.const(Scalar(0, 1))
        if val == "s2":
            return DiffPoly.const(Scalar(0, 0, 1))
        if val == "E":
            self.expect("[")
            q = self.rational()
            self.expect("]")
            return DiffPoly.exp_u(q)
        if val == "z":
            return DiffPoly.z()
        if val == "zb":
            return DiffPoly.zb()
        if kind == "name" and val.startswith("ub"):
            return DiffPoly.ub(int(val[2:]))
        if kind == "name" and val.startswith("u"):
            return DiffPoly.u(int(val[1:]))
        raise ParseError(f"unexpected token {val!r}", pos)


def _poly_pow(p: DiffPoly, n: int) -> DiffPoly:
    out = DiffPoly.const(1)
    for _ in range(n):
        out = out * p
    return out


def parse_poly(text: str) -> DiffPoly:
    return _Parser(text).parse()


# ---- formatting ----------------------------------------------------------

def _format_fraction(x: Fraction) -> str:
    return str(x)


def format_scalar(s: Scalar) -> str:
    """Scalar as a product-or-sum in grammar syntax, e.g. ``-3/2*i*s2``."""
    parts = []
    for value, suffix in ((s.a, ""), (s.b, "i"), (s.c, "s2"), (s.d, "i*s2")):
        if value == 0:
            continue
        mag = abs(value)
        body = suffix if (mag == 1 and suffix) else _format_fraction(mag) + \
            ("*" + suffix if suffix else "")
        parts.append(("-" if value < 0 else "+", body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _scalar_is_single_component(s: Scalar) -> bool:
    return sum(1 for v in s.components() if v != 0) <= 1


def _format_monomial(mon: Monomial) -> str:
    q, powers = mon
    factors = []
    if q != 0:
        factors.append(f"E[{q}]")
    for var, e in sorted(powers, reverse=True):
        factors.append(var_name(var) + (f"^{e}" if e > 1 else ""))
    return "*".join(factors)


def format_poly(p: DiffPoly) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for mon, coeff in p.sorted_terms():
        body = _format_monomial(mon)
        if _scalar_is_single_component(coeff):
            text = format_scalar(coeff)
            negative = text.startswith("-")
            if negative:
                text = text[1:]
            if body:
                text = body if text == "1" else f"{text}*{body}"
            sign = "-" if negative else "+"
        else:
            sign = "+"
            text = f"({format_scalar(coeff)})" + (f"*{body}" if body else "")
        pieces.append((sign, text))
    sign, text = pieces[0]
    out = ("-" if sign == "-" else "") + text
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


# ---- structured serialization --------------------------------------------

def poly_to_record(p: DiffPoly) -> list:
    """One record per term: {coeff: [4 rationals], exp_u, powers}."""
    records = []
    for (q, powers), coeff in p.sorted_terms():
        records.append({
            "coeff": [str(x) for x in coeff.components()],
            "exp_u": str(q),
            "powers": {var_name(var): e for var, e in powers},
        })
    return records


_NAME_TO_VAR = {"z": Z, "zb": ZB}


def name_to_var(name: str):
    if name in _NAME_TO_VAR:
        return _NAME_TO_VAR[name]
    if name.startswith("ub"):
        return UB(int(name[2:]))
    if name.startswith("u"):
        return U(int(name[1:]))
    raise ValueError(f"unknown generator {name!r}")


def poly_from_record(records: list) -> DiffPoly:
    out = DiffPoly.zero()
    for rec in records:
        coeff = Scalar(*[Fraction(x) for x in rec["coeff"]])
        q = Fraction(rec["exp_u"])
        powers = tuple(sorted((name_to_var(name), e)
                              for name, e in rec["powers"].items()))
        out = out + DiffPoly.from_term(coeff, (q, powers))
    return out
