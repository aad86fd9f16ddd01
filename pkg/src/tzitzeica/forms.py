"""Exterior forms in the coframe {zeta, zetabar, eta_0, eta_i, etabar_i}.

Coframe symbols are encoded as (kind, index): (0,0) = zeta, (1,0) = zetabar,
(2,i) = eta_i for i >= 0, (3,i) = etabar_i for i >= 1; tuple comparison gives
the canonical order zeta < zetabar < eta_0 < eta_1 < ... < etabar_1 < ...
The structure equations are

    d zeta = 0
    d eta_0 = zeta ^ eta_1 + zetabar ^ etabar_1
    d eta_i = -eta_{i+1} ^ zeta + tau^{i-1} ^ zetabar,   i >= 1

with tau^i = sum_j C(i,j) T^j_u eta_{i-j}.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .diffpoly import DiffPoly, U, UB, _coerce_poly
from .jets import SystemParams, e_minus1, e_minus1bar
from .scalars import Scalar

ZETA = (0, 0)
ZETABAR = (1, 0)


def ETA(i: int):
    return (2, i)


def ETABAR(i: int):
    if i == 0:
        return (2, 0)  # eta_0 is real
    return (3, i)


def symbol_name(sym) -> str:
    kind, idx = sym
    if kind == 0:
        return "Z"
    if kind == 1:
        return "Zb"
    if kind == 2:
        return f"h{idx}"
    return f"hb{idx}"


def _sort_with_sign(symbols):
    """Sort a symbol tuple, returning (sorted tuple, permutation sign) or None on repeats."""
    syms = list(symbols)
    sign = 1
    for i in range(1, len(syms)):
        j = i
        while j > 0 and syms[j - 1] > syms[j]:
            syms[j - 1], syms[j] = syms[j], syms[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(syms)):
        if syms[i - 1] == syms[i]:
            return None
    return tuple(syms), sign


class Form:
    """Exterior form with DiffPoly coefficients; degree fixed per instance."""

    __slots__ = ("degree", "comps")

    def __init__(self, degree: int, comps=None):
        self.degree = degree
        self.comps = comps or {}

    @staticmethod
    def zero(degree: int) -> "Form":
        return Form(degree, {})

    @staticmethod
    def from_components(degree: int, items) -> "Form":
        """Build from (symbols, coefficient) pairs, normalizing symbol order."""
        out: dict = {}
        for symbols, coeff in items:
            coeff = _coerce_poly(coeff)
            if coeff.is_zero():
                continue
            if len(symbols) != degree:
                raise ValueError("wedge length does not match degree")
            norm = _sort_with_sign(symbols)
            if norm is None:
                continue
            key, sign = norm
            c = coeff if sign == 1 else -coeff
            prev = out.get(key)
            c = c if prev is None else prev + c
            if c.is_zero():
                out.pop(key, None)
            else:
                out[key] = c
        return Form(degree, out)

    def __add__(self, other: "Form") -> "Form":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        out = dict(self.comps)
        for key, c in other.comps.items():
            prev = out.get(key)
            nc = c if prev is None else prev + c
            if nc.is_zero():
                out.pop(key, None)
            else:
                out[key] = nc
        return Form(self.degree, out)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.degree, {k: -c for k, c in self.comps.items()})

    def __mul__(self, other) -> "Form":
        p = _coerce_poly(other)
        if p.is_zero():
            return Form(self.degree, {})
        out = {}
        for key, c in self.comps.items():
            nc = c * p
            if not nc.is_zero():
                out[key] = nc
        return Form(self.degree, out)

    __rmul__ = __mul__

    def wedge(self, other: "Form") -> "Form":
        out = Form.zero(self.degree + other.degree)
        items = []
        for k1, c1 in self.comps.items():
            for k2, c2 in other.comps.items():
                items.append((k1 + k2, c1 * c2))
        return out + Form.from_components(self.degree + other.degree, items)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.degree == other.degree and self.comps == other.comps

    def __hash__(self):
        return hash((self.degree, frozenset(self.comps.items())))

    def component(self, *symbols) -> DiffPoly:
        norm = _sort_with_sign(symbols)
        if norm is None:
            return DiffPoly.zero()
        key, sign = norm
        c = self.comps.get(key, DiffPoly.zero())
        return c if sign == 1 else -c

    def conjugate(self) -> "Form":
        items = []
        for key, c in self.comps.items():
            nk = tuple((kind ^ 1, idx) if idx or kind < 2 else (kind, idx)
                       for kind, idx in key)
            items.append((nk, c.conjugate()))
        return Form.from_components(self.degree, items)

    def max_level(self) -> int:
        """Largest eta index appearing (0 when only zeta components)."""
        best = 0
        for key in self.comps:
            for kind, idx in key:
                if kind >= 2 and idx > best:
                    best = idx
        return best

    def __repr__(self):
        return f"Form({self.degree}, {format_form(self)!r})"


def format_form(omega: Form) -> str:
    """Text layout: coefficient times wedge symbols, e.g. ``u1*Z - f*Zb + h1``."""
    from .grammar import format_poly
    if not omega.comps:
        return "0"
    pieces = []
    for key in sorted(omega.comps):
        sym = "^".join(symbol_name(s) for s in key)
        coeff = omega.comps[key]
        text = format_poly(coeff)
        if len(coeff.terms) == 1:
            sign = "-" if text.startswith("-") else "+"
            body = text[1:] if text.startswith("-") else text
            if body == "1" and sym:
                piece = sym
            else:
                piece = f"{body}*{sym}" if sym else body
        else:
            sign = "+"
            piece = f"({text})*{sym}" if sym else f"({text})"
        pieces.append((sign, piece))
    sign, piece = pieces[0]
    out = ("-" if sign == "-" else "") + piece
    for sign, piece in pieces[1:]:
        out += f" {sign} {piece}"
    return out


def d_function(params: SystemParams, p: DiffPoly) -> Form:
    """Exterior derivative of a function in the coframe basis."""
    items = [((ZETA,), e_minus1(params, p)),
             ((ZETABAR,), e_minus1bar(params, p)),
             ((ETA(0),), p.partial("u"))]
    for i in sorted(p.jet_indices(2)):
        items.append(((ETA(i + 1),), p.partial(U(i))))
    for i in sorted(p.jet_indices(3)):
        items.append(((ETABAR(i + 1),), p.partial(UB(i))))
    return Form.from_components(1, items)


def tau(params: SystemParams, i: int) -> Form:
    """tau^i = sum_{j<=i} C(i,j) T^j_u eta_{i-j}; tau^0 = f_u eta_0."""
    items = []
    for j in range(i + 1):
        items.append(((ETA(i - j),), comb(i, j) * params.T(j).partial("u")))
    return Form.from_components(1, items)


def tau_bar(params: SystemParams, i: int) -> Form:
    items = []
    for j in range(i + 1):
        items.append(((ETABAR(i - j),), comb(i, j) * params.Tbar(j).partial("u")))
    return Form.from_components(1, items)


def d_symbol(params: SystemParams, sym) -> Form:
    kind, idx = sym
    if kind <= 1:
        return Form.zero(2)
    if kind == 2 and idx == 0:
        return Form.from_components(2, [((ZETA, ETA(1)), 1), ((ZETABAR, ETABAR(1)), 1)])
    if kind == 2:
        out = Form.from_components(2, [((ETA(idx + 1), ZETA), -1)])
        return out + tau(params, idx - 1).wedge(
            Form.from_components(1, [((ZETABAR,), 1)]))
    out = Form.from_components(2, [((ETABAR(idx + 1), ZETABAR), -1)])
    return out + tau_bar(params, idx - 1).wedge(
        Form.from_components(1, [((ZETA,), 1)]))


def d_form(params: SystemParams, omega: Form) -> Form:
    """Exterior derivative via the structure equations and the Leibniz rule."""
    out = Form.zero(omega.degree + 1)
    for key, coeff in omega.comps.items():
        base = Form.from_components(len(key), [(key, DiffPoly.const(1))])
        out = out + d_function(params, coeff).wedge(base)
        for k, sym in enumerate(key):
            rest_items = []
            prefix = key[:k]
            suffix = key[k + 1:]
            dsym = d_symbol(params, sym)
            sign = -1 if k % 2 else 1
            for dkey, dc in dsym.comps.items():
                rest_items.append((prefix + dkey + suffix, dc * coeff * sign))
            out = out + Form.from_components(omega.degree + 1, rest_items)
    return out


def reduce_mod_ideal(omega: Form) -> Form:
    """Drop every wedge term containing an eta factor."""
    out = {k: c for k, c in omega.comps.items()
           if all(kind <= 1 for kind, _ in k)}
    return Form(omega.degree, out)


def J_apply(omega: Form) -> Form:
    """Multiply (1,0)-components by i, (0,1)-components by -i; eta_0 is fixed."""
    if omega.degree != 1:
        raise ValueError("J acts on one-forms")
    out = {}
    for key, c in omega.comps.items():
        kind, idx = key[0]
        if kind == 2 and idx == 0:
            out[key] = c
        elif kind in (0, 2):
            out[key] = c * Scalar(0, 1)
        else:
            out[key] = c * Scalar(0, -1)
    return Form(1, out)


@dataclass(frozen=True)
class OneFormModI:
    """Reduced representative P*zeta + Q*zetabar of a one-form mod the ideal."""

    P: DiffPoly
    Q: DiffPoly

    @staticmethod
    def from_form(omega: Form) -> "OneFormModI":
        red = reduce_mod_ideal(omega)
        return OneFormModI(red.component(ZETA), red.component(ZETABAR))

    def to_form(self) -> Form:
        return Form.from_components(1, [((ZETA,), self.P), ((ZETABAR,), self.Q)])

    def __add__(self, other: "OneFormModI") -> "OneFormModI":
        return OneFormModI(self.P + other.P, self.Q + other.Q)

    def __sub__(self, other: "OneFormModI") -> "OneFormModI":
        return OneFormModI(self.P - other.P, self.Q - other.Q)

    def __mul__(self, c) -> "OneFormModI":
        return OneFormModI(self.P * c, self.Q * c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.P.is_zero() and self.Q.is_zero()

    def conjugate(self) -> "OneFormModI":
        return OneFormModI(self.Q.conjugate(), self.P.conjugate())

    def weight(self):
        """Weight of the form (coefficient weight plus coframe weight)."""
        ws = set()
        if not self.P.is_zero():
            w = self.P.weight()
            if w is None:
                return None
            ws.add(w - 1)
        if not self.Q.is_zero():
            w = self.Q.weight()
            if w is None:
                return None
            ws.add(w + 1)
        if len(ws) > 1:
            return None
        return ws.pop() if ws else None
