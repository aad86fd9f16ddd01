"""Exponential-differential polynomials in z, zb, u_j, ub_j with e^{q*u} factors.

A monomial is a pair (q, powers): q is the rational exponent of e^{q*u} and
powers is a sorted tuple of ((kind, index), exponent) entries.  Variable kinds
are 0 = z, 1 = zb, 2 = u_j, 3 = ub_j; that tuple order realizes the canonical
variable order z < zb < u0 < u1 < ... < ub0 < ub1 < ...
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, Optional

from .scalars import Scalar

# variable encodings
Z = (0, 0)
ZB = (1, 0)


def U(j: int):
    return (2, j)


def UB(j: int):
    return (3, j)


VAR_NAMES = {0: "z", 1: "zb", 2: "u", 3: "ub"}

Monomial = tuple  # (q: Fraction, powers: tuple[((kind, idx), exp), ...])

ONE_MONOMIAL: Monomial = (Fraction(0), ())


def var_name(var) -> str:
    kind, idx = var
    if kind == 0:
        return "z"
    if kind == 1:
        return "zb"
    return f"{VAR_NAMES[kind]}{idx}"


def monomial_weight(mon: Monomial) -> int:
    q, powers = mon
    w = 0
    for (kind, idx), e in powers:
        if kind == 0:
            w -= e
        elif kind == 1:
            w += e
        elif kind == 2:
            w += (idx + 1) * e
        else:
            w -= (idx + 1) * e
    return w


def monomial_sort_key(mon: Monomial):
    """Canonical term-order key: weight, then highest variable first, then q.

    Sorting terms by this key in descending order prints the highest-order
    jet first, matching the canonical text layout.
    """
    q, powers = mon
    return (monomial_weight(mon), tuple(sorted(powers, reverse=True)), q)


def _merge_powers(p1, p2):
    out = dict(p1)
    for var, e in p2:
        ne = out.get(var, 0) + e
        if ne:
            out[var] = ne
        else:
            del out[var]
    return tuple(sorted(out.items()))


class DiffPoly:
    """Finite Scalar-linear combination of monomials; immutable by convention."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms = terms or {}

    # ---- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "DiffPoly":
        return DiffPoly({})

    @staticmethod
    def from_term(coeff, mon: Monomial = ONE_MONOMIAL) -> "DiffPoly":
        c = Scalar.coerce(coeff)
        if c.is_zero():
            return DiffPoly({})
        return DiffPoly({mon: c})

    @staticmethod
    def const(c) -> "DiffPoly":
        return DiffPoly.from_term(c)

    @staticmethod
    def gen(var) -> "DiffPoly":
        return DiffPoly({(Fraction(0), ((var, 1),)): Scalar(1)})

    @staticmethod
    def u(j: int) -> "DiffPoly":
        return DiffPoly.gen(U(j))

    @staticmethod
    def ub(j: int) -> "DiffPoly":
        return DiffPoly.gen(UB(j))

    @staticmethod
    def z() -> "DiffPoly":
        return DiffPoly.gen(Z)

    @staticmethod
    def zb() -> "DiffPoly":
        return DiffPoly.gen(ZB)

    @staticmethod
    def exp_u(q) -> "DiffPoly":
        """The factor e^{q*u} for rational q."""
        return DiffPoly({(Fraction(q), ()): Scalar(1)})

    # ---- ring operations ----------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (DiffPoly, int, Fraction, Scalar)):
            return NotImplemented
        o = _coerce_poly(other)
        if not self.terms:
            return o
        if not o.terms:
            return self
        out = dict(self.terms)
        for mon, c in o.terms.items():
            nc = out.get(mon)
            nc = c if nc is None else nc + c
            if nc.is_zero():
                out.pop(mon, None)
            else:
                out[mon] = nc
        return DiffPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (DiffPoly, int, Fraction, Scalar)):
            return NotImplemented
        return self + (-_coerce_poly(other))

    def __rsub__(self, other):
        return _coerce_poly(other) + (-self)

    def __neg__(self):
        return DiffPoly({mon: -c for mon, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            c = Scalar.coerce(other)
            if c.is_zero():
                return DiffPoly({})
            return DiffPoly({mon: cc * c for mon, cc in self.terms.items()})
        if not isinstance(other, DiffPoly):
            return NotImplemented
        o = _coerce_poly(other)
        out: dict = {}
        for (q1, p1), c1 in self.terms.items():
            for (q2, p2), c2 in o.terms.items():
                mon = (q1 + q2, _merge_powers(p1, p2))
                c = c1 * c2
                nc = out.get(mon)
                nc = c if nc is None else nc + c
                if nc.is_zero():
                    out.pop(mon, None)
                else:
                    out[mon] = nc
        return DiffPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined for DiffPoly")
        out = DiffPoly.from_term(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = _coerce_poly(other)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    # ---- structure ------------------------------------------------------
    def conjugate(self) -> "DiffPoly":
        """Swap z <-> zb and u_j <-> ub_j, conjugate coefficients; e^{qu} is fixed."""
        out = {}
        for (q, powers), c in self.terms.items():
            np = tuple(sorted(((kind ^ 1, idx), e) for (kind, idx), e in powers))
            out[(q, np)] = c.conjugate()
        return DiffPoly(out)

    def weight(self):
        """Common weight of all monomials, or None when inhomogeneous or zero."""
        w = None
        for mon in self.terms:
            mw = monomial_weight(mon)
            if w is None:
                w = mw
            elif w != mw:
                return None
        return w

    def is_homogeneous_of_weight(self, d: int) -> bool:
        if not self.terms:
            return True
        return all(monomial_weight(m) == d for m in self.terms)

    def partial(self, g) -> "DiffPoly":
        """Formal partial derivative; g is a variable tuple or the symbol 'u'."""
        out: dict = {}
        if g == "u":
            for (q, powers), c in self.terms.items():
                if q:
                    nc = c * q
                    out[(q, powers)] = nc
            return DiffPoly(out)
        for (q, powers), c in self.terms.items():
            for i, (var, e) in enumerate(powers):
                if var == g:
                    np = powers[:i] + ((var, e - 1),) + powers[i + 1:] if e > 1 \
                        else powers[:i] + powers[i + 1:]
                    mon = (q, np)
                    nc = out.get(mon)
                    add = c * e
                    nc = add if nc is None else nc + add
                    if nc.is_zero():
                        out.pop(mon, None)
                    else:
                        out[mon] = nc
                    break
        return DiffPoly(out)

    def variables(self) -> set:
        vs = set()
        for (_q, powers) in self.terms:
            for var, _e in powers:
                vs.add(var)
        return vs

    def jet_indices(self, kind: int) -> set:
        return {idx for (_q, powers) in self.terms
                for (k, idx), _e in powers if k == kind}

    def max_jet(self, kind: int) -> int:
        """Largest jet index of the given kind, or -1 when absent."""
        idxs = self.jet_indices(kind)
        return max(idxs) if idxs else -1

    def max_var_degree(self, var) -> int:
        best = 0
        for (_q, powers) in self.terms:
            for v, e in powers:
                if v == var and e > best:
                    best = e
        return best

    def max_total_jet_degree(self) -> int:
        best = 0
        for (_q, powers) in self.terms:
            deg = sum(e for (kind, _i), e in powers if kind >= 2)
            if deg > best:
                best = deg
        return best

    def exp_sectors(self) -> set:
        return {q for (q, _p) in self.terms}

    def coefficient(self, mon: Monomial) -> Scalar:
        return self.terms.get(mon, Scalar(0))

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: monomial_sort_key(kv[0]), reverse=True)

    def eval_numeric(self, assignment: dict, u: float = 0.0) -> complex:
        """Floating evaluation; assignment maps generator names to complex values."""
        total = 0j
        for (q, powers), c in self.terms.items():
            val = c.numeric() * cmath.exp(float(q) * u)
            for var, e in powers:
                name = var_name(var)
                if name not in assignment:
                    raise KeyError(f"missing assignment for {name}")
                val *= assignment[name] ** e
            total += val
        return total

    def __repr__(self):
        from .grammar import format_poly
        return f"DiffPoly({format_poly(self)!r})"


def _coerce_poly(x) -> DiffPoly:
    if isinstance(x, DiffPoly):
        return x
    if isinstance(x, (int, Fraction, Scalar)):
        return DiffPoly.from_term(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to DiffPoly")


def poly_sum(polys: Iterable[DiffPoly]) -> DiffPoly:
    out = DiffPoly.zero()
    for p in polys:
        out = out + p
    return out
