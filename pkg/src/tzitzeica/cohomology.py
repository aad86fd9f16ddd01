"""Conservation-law one-forms and two-forms on the prolonged system.

Representatives live in the quotient by the ideal, reduced to P*zeta +
Q*zetabar.  Triviality is decided by integration feasibility within the
configured ansatz (the window is widened once before concluding
nontriviality); for the even weights arising here the vanishing theorem makes
that decision complete.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diffpoly import DiffPoly, U
from .forms import (ETA, ETABAR, ZETA, ZETABAR, Form, J_apply, OneFormModI,
                    d_function, reduce_mod_ideal)
from .jets import (E_lin, SystemParams, e_minus1, e_minus1bar,
                   satisfies_no_mixing)
from .linsolve import (AnsatzSpec, NotExact, default_ansatz, integrate_oneform)
from .scalars import Scalar

I = Scalar(0, 1)


def q_generator() -> DiffPoly:
    """The classical weight-zero generating function z*u0 - zb*ub0."""
    return DiffPoly.z() * DiffPoly.u(0) - DiffPoly.zb() * DiffPoly.ub(0)


def phi_tilde(params: SystemParams, P: DiffPoly, Q: DiffPoly) -> OneFormModI:
    """Q*dP + P*dbarQ reduced mod the ideal: (Q e_{-1}P) zeta + (P e_{-1bar}Q) zetabar."""
    return OneFormModI(Q * e_minus1(params, P), P * e_minus1bar(params, Q))


def phi_rep(params: SystemParams, P: DiffPoly, i: int) -> OneFormModI:
    """Normal-form representative i/(2(2i-1)) * J(P dq - q dP) of the class of P."""
    if not E_lin(params, P).is_zero():
        raise ValueError("phi_rep expects a kernel element")
    q = q_generator()
    w = P * d_function(params, q) - q * d_function(params, P)
    scaled = J_apply(w) * Scalar(0, Fraction(1, 2 * (2 * i - 1)))
    return OneFormModI.from_form(reduce_mod_ideal(scaled))


def closed_mod_ideal(params: SystemParams, omega: OneFormModI) -> DiffPoly:
    """Residual e_{-1}(Q) - e_{-1bar}(P); zero iff the form is closed mod the ideal."""
    return e_minus1(params, omega.Q) - e_minus1bar(params, omega.P)


@dataclass(frozen=True)
class Trivial:
    potential: DiffPoly


@dataclass(frozen=True)
class Nontrivial:
    pass


def triviality_test(params: SystemParams, omega: OneFormModI,
                    ansatz: AnsatzSpec | None = None):
    """Trivial(G) when omega = dG mod the ideal is solvable, else Nontrivial."""
    if not closed_mod_ideal(params, omega).is_zero():
        raise ValueError("triviality_test expects a closed form")
    if omega.is_zero():
        return Trivial(DiffPoly.zero())
    spec = ansatz if ansatz is not None else default_ansatz(params, omega)
    G = integrate_oneform(params, omega, spec)
    if isinstance(G, NotExact):
        G = integrate_oneform(params, omega, spec.widen())
    if isinstance(G, NotExact):
        return Nontrivial()
    return Trivial(G)


@dataclass(frozen=True)
class CohomologyClassRep:
    """A one-form representative with its weight and provenance."""

    form: OneFormModI
    weight: Optional[int]
    provenance: str

    @staticmethod
    def from_pair(params: SystemParams, P: DiffPoly, Q: DiffPoly,
                  label: str = "") -> "CohomologyClassRep":
        form = phi_tilde(params, P, Q)
        if not closed_mod_ideal(params, form).is_zero():
            raise ValueError("representative is not closed mod the ideal")
        return CohomologyClassRep(form, form.weight(), label)


# ---- normal-form two-form ---------------------------------------------------

def _psi_two_form() -> Form:
    # Im(zeta ^ omega_1) on the prolongation
    half_i = Scalar(0, Fraction(-1, 2))
    return Form.from_components(2, [((ZETA, ETA(1)), half_i),
                                    ((ZETABAR, ETABAR(1)), -half_i)])


def normal_form_B(params: SystemParams, A: DiffPoly, i: int, j: int,
                  level: int) -> DiffPoly:
    """Coefficient B^{ij} determined by the generating function."""
    total = DiffPoly.zero()
    for m in range(level - j - i + 2):
        term = A.partial(U(m + j + i - 1))
        if term.is_zero():
            continue
        for _ in range(m):
            term = e_minus1(params, term)
        sign = 1 if (m - i + 1) % 2 == 0 else -1
        total = total + sign * comb(m + i - 1, i - 1) * term
    return I * total


def normal_form_Phi(params: SystemParams, A: DiffPoly, level: int) -> Form:
    """The closed two-form eta_0 ^ rho + A psi + sum B^{ij} eta_i ^ eta_j + conj."""
    if not satisfies_no_mixing(A):
        raise ValueError("generating function must not mix u_i with ub_j or depend on u")
    if not E_lin(params, A).is_zero():
        raise ValueError("generating function must solve the linearized equation")
    if A.is_zero():
        return Form.zero(2)
    dA = d_function(params, A)
    # normalize rho so that it has no eta_0 component
    dA = Form(1, {k: c for k, c in dA.comps.items() if k != (ETA(0),)})
    rho = J_apply(dA) * Scalar(Fraction(-1, 2))
    eta0 = Form.from_components(1, [((ETA(0),), 1)])
    out = eta0.wedge(rho) + _psi_two_form() * A
    for i in range(1, level + 1):
        for j in range(i + 1, level + 1):
            B = normal_form_B(params, A, i, j, level)
            if B.is_zero():
                continue
            out = out + Form.from_components(2, [((ETA(i), ETA(j)), B)])
            out = out + Form.from_components(
                2, [((ETABAR(i), ETABAR(j)), B.conjugate())])
    return out


# ---- translation-invariant gauge -------------------------------------------

@dataclass
class GaugeResult:
    phi_hat: OneFormModI
    G: DiffPoly
    A: DiffPoly
    B: DiffPoly


def translation_gauge(params: SystemParams, P: DiffPoly,
                      window=None) -> GaugeResult:
    """Translation-invariant representative of the class of phi_tilde(P, q).

    Integrates dA = phi_tilde(P, u0) and dB = phi_tilde(P, ub0) (both of even
    weight, hence exact), sets G = z*A - zb*B, and returns
    phi_hat = -A zeta + (B - ub0 P) zetabar together with G.
    """
    if not E_lin(params, P).is_zero():
        raise ValueError("translation_gauge expects a kernel element")
    u0, ub0 = DiffPoly.u(0), DiffPoly.ub(0)
    omA = phi_tilde(params, P, u0)
    omB = phi_tilde(params, P, ub0)
    A = integrate_oneform(params, omA, default_ansatz(params, omA, window))
    B = integrate_oneform(params, omB, default_ansatz(params, omB, window))
    if isinstance(A, NotExact) or isinstance(B, NotExact):
        raise RuntimeError("even-weight gauge integral failed; widen the ansatz window")
    G = DiffPoly.z() * A - DiffPoly.zb() * B
    phi_hat = OneFormModI(-A, B - ub0 * P)
    for poly in (phi_hat.P, phi_hat.Q):
        if poly.max_var_degree((0, 0)) or poly.max_var_degree((1, 0)):
            raise AssertionError("gauge representative is not translation invariant")
    # phi_hat must be cohomologous to phi_tilde(P, q) with potential G
    diff = phi_tilde(params, P, q_generator()) - phi_hat
    if not (e_minus1(params, G) - diff.P).is_zero() or \
       not (e_minus1bar(params, G) - diff.Q).is_zero():
        raise AssertionError("gauge potential does not close the difference")
    return GaugeResult(phi_hat, G, A, B)


# ---- finite-type rank test --------------------------------------------------

_COMPLEX_RE = re.compile(r"^\s*(?P<re>[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)?"
                         r"\s*(?P<im>[+-]\s*\d*(?:\.\d+)?(?:[eE][+-]?\d+)?)?\s*"
                         r"(?P<i>i)?\s*$")


def parse_complex(text: str) -> complex:
    """Entries like ``1.5+2i``, ``-3i``, ``2``."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s.endswith("i"):
        body = s[:-1]
        # split into real and imaginary parts at the last +/- that is not an exponent sign
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                re_part, im_part = body[:k], body[k:]
                break
        else:
            re_part, im_part = "", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return complex(float(re_part) if re_part else 0.0, float(im_part))
    return complex(float(s), 0.0)


@dataclass
class SampleTable:
    """Rows of numeric jet assignments used by the rank test."""

    rows: List[Dict[str, complex]]
    source: str = "inline"

    @staticmethod
    def from_text(text: str, source: str = "text") -> "SampleTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty sample table")
        header = re.split(r"[,\s]+", lines[0].strip())
        rows = []
        for ln in lines[1:]:
            vals = re.split(r"[,\t]+", ln.strip()) if ("," in ln or "\t" in ln) \
                else ln.split()
            if len(vals) != len(header):
                raise ValueError(f"row has {len(vals)} entries, header has {len(header)}")
            rows.append({name: parse_complex(v) for name, v in zip(header, vals)})
        return SampleTable(rows, source)

    @staticmethod
    def random(names: Sequence[str], count: int, seed: int = 0,
               conjugate_pairs: bool = True) -> "SampleTable":
        import random as _random
        rng = _random.Random(seed)
        rows = []
        for _ in range(count):
            row: Dict[str, complex] = {"u": rng.uniform(-1, 1)}
            for name in names:
                if name == "u":
                    continue
                val = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                row[name] = val
            if conjugate_pairs:
                for name in list(row):
                    if name.startswith("u") and name != "u" and not name.startswith("ub"):
                        row["ub" + name[1:]] = row[name].conjugate()
            rows.append(row)
        return SampleTable(rows, f"random(seed={seed})")

    def evaluate(self, poly: DiffPoly) -> np.ndarray:
        out = []
        for row in self.rows:
            u = row.get("u", 0.0)
            out.append(poly.eval_numeric(row, float(u.real if isinstance(u, complex) else u)))
        return np.array(out, dtype=complex)


@dataclass
class RankResult:
    rank: int
    finite_type_g: Optional[int]
    dependencies: List[Tuple[int, List[complex]]] = field(default_factory=list)
    exact_certificate: bool = False
    message: str = ""


def _numeric_rank(matrix: np.ndarray, rel_floor: float = 1e-8) -> int:
    if matrix.size == 0:
        return 0
    svals = np.linalg.svd(matrix, compute_uv=False)
    if svals.size == 0 or svals[0] == 0:
        return 0
    cut = svals[0] * rel_floor
    rank = int(np.sum(svals > cut))
    # refine by the largest relative gap among the significant values
    for k in range(rank - 1):
        if svals[k + 1] > 0 and svals[k] / svals[k + 1] > 1e6:
            return k + 1
    return rank


def finite_type_rank(table: SampleTable, gens: Sequence[DiffPoly],
                     rel_floor: float = 1e-8) -> RankResult:
    """Numeric rank of [gens and conjugates] and the least finite-type order.

    finite_type_g is the least g such that every later generator (and its
    conjugate) depends linearly on the first g generators and conjugates; None
    means independent at this sample size.
    """
    gens = list(gens)
    if not gens:
        return RankResult(0, None, message="no generators")
    if len(table.rows) < 2 * len(gens):
        raise ValueError("need at least as many sample rows as matrix columns")
    columns = []
    for g in gens:
        columns.append(table.evaluate(g))
        columns.append(table.evaluate(g.conjugate()))
    matrix = np.column_stack(columns)
    rank = _numeric_rank(matrix, rel_floor)

    finite_g = None
    dependencies: List[Tuple[int, List[complex]]] = []
    for g in range(1, len(gens)):
        base = matrix[:, : 2 * g]
        ok = True
        deps = []
        for m in range(2 * g, matrix.shape[1]):
            target = matrix[:, m]
            coeff, residual, *_ = np.linalg.lstsq(base, target, rcond=None)
            fitted = base @ coeff
            err = np.linalg.norm(target - fitted)
            scale = max(np.linalg.norm(target), 1.0)
            if err > rel_floor * scale * 100:
                ok = False
                break
            deps.append((m, list(coeff)))
        if ok:
            finite_g = g
            dependencies = deps
            break

    exact = False
    if dependencies and all(g.exp_sectors() == {Fraction(0)} or g.is_zero()
                            for g in gens):
        exact = _verify_exact_dependencies(gens, dependencies)
    message = (f"finite-type order {finite_g}" if finite_g is not None
               else "independent at this sample size")
    return RankResult(rank, finite_g, dependencies, exact, message)


def _column_poly(gens, index: int) -> DiffPoly:
    g = gens[index // 2]
    return g if index % 2 == 0 else g.conjugate()


def _rationalize(x: complex, limit: int = 10 ** 6):
    fr = Fraction(x.real).limit_denominator(limit)
    fi = Fraction(x.imag).limit_denominator(limit)
    if abs(float(fr) - x.real) > 1e-6 or abs(float(fi) - x.imag) > 1e-6:
        return None
    return Scalar(fr, fi)


def _verify_exact_dependencies(gens, dependencies) -> bool:
    for target_idx, coeff in dependencies:
        target = _column_poly(gens, target_idx)
        acc = DiffPoly.zero()
        for k, c in enumerate(coeff):
            s = _rationalize(c)
            if s is None:
                return False
            acc = acc + s * _column_poly(gens, k)
        if not (target - acc).is_zero():
            return False
    return True
