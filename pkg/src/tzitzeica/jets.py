"""Prolonged-system calculus: potential family, T-series, total derivatives.

The PDE is u_{z zb} = -f(u) with the one-parameter potential
f = e^{-alpha*u} - e^{2*alpha*u}, which satisfies f_uu = alpha*f_u +
2*alpha^2*f identically.  alpha = -1 is the normalized Tzitzeica case
f = e^u - e^{-2u}.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from .diffpoly import DiffPoly, U, UB


class SystemParams:
    """Potential parameter alpha plus memoized T-series tables.

    The memo tables are guarded by a lock, so instances may be shared across
    threads; every produced value is immutable.
    """

    def __init__(self, alpha=Fraction(-1)):
        alpha = Fraction(alpha)
        if alpha == 0:
            raise ValueError("alpha must be nonzero")
        self.alpha = alpha
        self.f = DiffPoly.exp_u(-alpha) - DiffPoly.exp_u(2 * alpha)
        self.f_u = self.f.partial("u")
        self.f_uu = self.f_u.partial("u")
        self._T = [self.f]
        self._Tbar = [self.f.conjugate()]
        self._lock = threading.Lock()

    def T(self, i: int) -> DiffPoly:
        """T^0 = f and T^{i+1} = sum_j C(i,j) u_{i-j} T^j_u."""
        if i < len(self._T):
            return self._T[i]
        with self._lock:
            while len(self._T) <= i:
                n = len(self._T) - 1  # build T^{n+1}
                acc = DiffPoly.zero()
                for j in range(n + 1):
                    acc = acc + comb(n, j) * DiffPoly.u(n - j) * self._T[j].partial("u")
                self._T.append(acc)
        return self._T[i]

    def Tbar(self, i: int) -> DiffPoly:
        if i < len(self._Tbar):
            return self._Tbar[i]
        self.T(i)
        with self._lock:
            while len(self._Tbar) <= i:
                self._Tbar.append(self._T[len(self._Tbar)].conjugate())
        return self._Tbar[i]

    def __repr__(self):
        return f"SystemParams(alpha={self.alpha})"


def is_tzitzeica(params: SystemParams) -> bool:
    return params.alpha == Fraction(-1)


def e_minus1(params: SystemParams, p: DiffPoly) -> DiffPoly:
    """Total derivative dual to zeta: d/dz + u0 d/du + sum u_{i+1} d/du_i - sum Tbar^i d/dub_i."""
    out = p.partial((0, 0))  # d/dz
    out = out + DiffPoly.u(0) * p.partial("u")
    for i in sorted(p.jet_indices(2)):
        out = out + DiffPoly.u(i + 1) * p.partial(U(i))
    for i in sorted(p.jet_indices(3)):
        out = out - params.Tbar(i) * p.partial(UB(i))
    return out


def e_minus1bar(params: SystemParams, p: DiffPoly) -> DiffPoly:
    """Conjugate total derivative, dual to zetabar."""
    out = p.partial((1, 0))  # d/dzb
    out = out + DiffPoly.ub(0) * p.partial("u")
    for i in sorted(p.jet_indices(3)):
        out = out + DiffPoly.ub(i + 1) * p.partial(UB(i))
    for i in sorted(p.jet_indices(2)):
        out = out - params.T(i) * p.partial(U(i))
    return out


def E_lin(params: SystemParams, p: DiffPoly) -> DiffPoly:
    """Linearized operator e_minus1bar(e_minus1(p)) + f_u * p."""
    return e_minus1bar(params, e_minus1(params, p)) + params.f_u * p


def satisfies_no_mixing(p: DiffPoly) -> bool:
    """No monomial mixes u_i with ub_j, and no e^{qu} dependence."""
    for (q, powers) in p.terms:
        if q != 0:
            return False
        kinds = {kind for (kind, _i), _e in powers}
        if 2 in kinds and 3 in kinds:
            return False
    return True
