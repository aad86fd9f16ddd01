"""Weighted-homogeneous ansatz enumeration and exact linear solving.

kernel_basis is the brute-force oracle for the solution spaces V_d of the
linearized equation; integrate_oneform finds the unique weighted-homogeneous
function G with dG congruent to a given reduced one-form modulo the ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .diffpoly import DiffPoly, U, UB, Z, ZB, monomial_sort_key
from .forms import OneFormModI
from .jets import E_lin, SystemParams, e_minus1, e_minus1bar
from .scalars import Scalar


def default_exp_window(params: SystemParams, half_steps: int = 4):
    """Exponent lattice {0, ±alpha/2, ±alpha, ...} used for gauge-type ansatz."""
    half = params.alpha / 2
    window = {Fraction(0)}
    for k in range(1, half_steps + 1):
        window.add(k * half)
        window.add(-k * half)
    return tuple(sorted(window))


@dataclass(frozen=True)
class AnsatzSpec:
    """Monomial class for a weighted-homogeneous unknown function."""

    weight: int
    klass: str = "mixed"                  # pure-u | pure-ub | mixed
    exp_window: tuple = (Fraction(0),)
    max_total_degree: Optional[int] = None
    max_u_jet: int = -1
    max_ub_jet: int = -1
    max_z: int = 0
    max_zb: int = 0

    def widen(self) -> "AnsatzSpec":
        """Double the exponential window; other bounds are structural."""
        window = sorted(set(self.exp_window)
                        | {q + r for q in self.exp_window for r in self.exp_window})
        return AnsatzSpec(self.weight, self.klass, tuple(window),
                          self.max_total_degree, self.max_u_jet,
                          self.max_ub_jet, self.max_z, self.max_zb)


def _partitions(n: int, largest: int | None = None):
    if n == 0:
        yield ()
        return
    if largest is None:
        largest = n
    for part in range(min(n, largest), 0, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def _pure_monomials(d: int, kind: int, max_jet: int = -1):
    """Weight-d monomials in jets of one kind (kind 2: d >= 0, kind 3: d <= 0)."""
    n = d if kind == 2 else -d
    if n < 0:
        return []
    if n == 0:
        return [()]
    out = []
    for partition in _partitions(n):
        if max_jet >= 0 and partition[0] - 1 > max_jet:
            continue
        powers: dict = {}
        for part in partition:
            var = (kind, part - 1)
            powers[var] = powers.get(var, 0) + 1
        out.append(tuple(sorted(powers.items())))
    return out


def enumerate_monomials(d: int, klass: str, *, max_total_degree=None,
                        max_u_jet=-1, max_ub_jet=-1, max_z=0, max_zb=0,
                        exp_window=(Fraction(0),)) -> list:
    """All monomials of weight d in the class, in canonical descending order."""
    power_sets: list
    if klass == "pure-u":
        power_sets = [(Fraction(q), p) for q in exp_window
                      for p in _pure_monomials(d, 2, max_u_jet)]
    elif klass == "pure-ub":
        power_sets = [(Fraction(q), p) for q in exp_window
                      for p in _pure_monomials(d, 3, max_ub_jet)]
    elif klass == "mixed":
        variables = []
        if max_z:
            variables.append((Z, -1))
        if max_zb:
            variables.append((ZB, 1))
        for j in range(max_u_jet + 1):
            variables.append((U(j), j + 1))
        for j in range(max_ub_jet + 1):
            variables.append((UB(j), -(j + 1)))
        caps = {Z: max_z, ZB: max_zb}
        found: list = []
        budget = max_total_degree if max_total_degree is not None else abs(d) + 2

        def rec(i, weight_left, degree_left, acc):
            if i == len(variables):
                if weight_left == 0:
                    found.append(tuple(sorted(acc)))
                return
            # bound the reachable weight with the remaining degree budget
            reach = degree_left * max((abs(w) for _v, w in variables[i:]), default=0)
            if abs(weight_left) > reach:
                return
            var, w = variables[i]
            cap = min(degree_left, caps.get(var, degree_left))
            for e in range(cap + 1):
                nacc = acc + [(var, e)] if e else acc
                rec(i + 1, weight_left - e * w, degree_left - e, nacc)

        rec(0, d, budget, [])
        power_sets = [(Fraction(q), p) for q in exp_window for p in found]
    else:
        raise ValueError(f"unknown ansatz class {klass!r}")
    return sorted(set(power_sets), key=monomial_sort_key, reverse=True)


def monomials_for_spec(spec: AnsatzSpec) -> list:
    return enumerate_monomials(
        spec.weight, spec.klass, max_total_degree=spec.max_total_degree,
        max_u_jet=spec.max_u_jet, max_ub_jet=spec.max_ub_jet,
        max_z=spec.max_z, max_zb=spec.max_zb, exp_window=spec.exp_window)


# ---- exact linear algebra --------------------------------------------------

@dataclass
class LinearSystem:
    rows: list                      # list of dict[col -> Scalar]
    rhs: list                       # list of Scalar
    ncols: int
    labels: list = field(default_factory=list)


@dataclass
class Solution:
    particular: list
    nullspace: list                 # list of coefficient vectors


def linear_solve_exact(system: LinearSystem) -> Optional[Solution]:
    """Exact Gaussian elimination over the scalar field; None means infeasible.

    Columns are processed in order with first-nonzero pivoting, so the result
    is deterministic.  Inconsistency is detected during forward elimination;
    back-substitution only runs on feasible systems.
    """
    rows = [dict(row) for row in system.rows]
    rhs_vec = list(system.rhs)
    alive = [bool(row) for row in rows]
    col_to_rows: dict = {}
    for idx, row in enumerate(rows):
        for c in row:
            col_to_rows.setdefault(c, set()).add(idx)
    pivots: list = []               # (col, normalized row, rhs), col increasing

    def eliminate(idx, col, prow, prhs):
        target = rows[idx]
        factor = target.pop(col)
        for c, v in prow.items():
            if c == col:
                continue
            nv = target.get(c)
            if nv is None:
                target[c] = -factor * v
                col_to_rows.setdefault(c, set()).add(idx)
            else:
                nv = nv - factor * v
                if nv.is_zero():
                    del target[c]
                    col_to_rows[c].discard(idx)
                else:
                    target[c] = nv
        rhs_vec[idx] = rhs_vec[idx] - factor * prhs

    for col in range(system.ncols):
        holders = col_to_rows.get(col)
        if not holders:
            continue
        pick = min(holders)
        row = rows[pick]
        rhs = rhs_vec[pick]
        alive[pick] = False
        for c in row:
            col_to_rows[c].discard(pick)
        inv = row[col].inverse()
        row = {c: v * inv for c, v in row.items()}
        rhs = rhs * inv
        for idx in sorted(col_to_rows.get(col, ())):
            eliminate(idx, col, row, rhs)
            if not rows[idx]:
                alive[idx] = False
                if not rhs_vec[idx].is_zero():
                    return None
        pivots.append((col, row, rhs))

    for idx, flag in enumerate(alive):
        if not flag:
            continue
        if rows[idx]:
            raise AssertionError("unpivoted column survived elimination")
        if not rhs_vec[idx].is_zero():
            return None

    # back-substitution to reduced echelon form
    for k in range(len(pivots) - 1, -1, -1):
        col, row, rhs = pivots[k]
        for j in range(k + 1, len(pivots)):
            col2, row2, rhs2 = pivots[j]
            if col2 in row:
                factor = row.pop(col2)
                for c, v in row2.items():
                    if c == col2:
                        continue
                    nv = row.get(c)
                    nv = -factor * v if nv is None else nv - factor * v
                    if nv.is_zero():
                        row.pop(c, None)
                    else:
                        row[c] = nv
                rhs = rhs - factor * rhs2
        pivots[k] = (col, row, rhs)

    zero = Scalar(0)
    particular = [zero] * system.ncols
    pivot_cols = set()
    for col, _row, rhs in pivots:
        particular[col] = rhs
        pivot_cols.add(col)
    nullspace = []
    for free in range(system.ncols):
        if free in pivot_cols:
            continue
        vec = [zero] * system.ncols
        vec[free] = Scalar(1)
        for col, row, _rhs in pivots:
            c = row.get(free)
            if c is not None:
                vec[col] = -c
        nullspace.append(vec)
    return Solution(particular, nullspace)


def _joint_image_system(columns_images: list, targets: list) -> LinearSystem:
    """Stack several image equations (one per target) into a single system.

    columns_images[j] is a list of image polynomials, one per equation; the
    equation index is folded into the row key.
    """
    row_index: dict = {}
    rows: list = []
    rhs: list = []

    def row_for(key):
        idx = row_index.get(key)
        if idx is None:
            idx = len(rows)
            row_index[key] = idx
            rows.append({})
            rhs.append(Scalar(0))
        return idx

    for j, images in enumerate(columns_images):
        for eq, image in enumerate(images):
            for mon, c in image.terms.items():
                rows[row_for((eq, mon))][j] = c
    for eq, target in enumerate(targets):
        for mon, c in target.terms.items():
            rhs[row_for((eq, mon))] = c
    return LinearSystem(rows, rhs, len(columns_images))


# ---- kernel of the linearized operator -------------------------------------

def kernel_basis(params: SystemParams, d: int) -> list:
    """Basis of {P in the weight-d pure ansatz : E_lin(P) = 0}, monic in the top jet."""
    if d == 0:
        raise ValueError("weight 0 is spanned by the classical generator q")
    klass = "pure-u" if d > 0 else "pure-ub"
    columns = enumerate_monomials(d, klass)
    if not columns:
        return []
    polys = [DiffPoly.from_term(1, mon) for mon in columns]
    images = [[E_lin(params, p)] for p in polys]
    system = _joint_image_system(images, [DiffPoly.zero()])
    solution = linear_solve_exact(system)
    assert solution is not None
    basis = []
    top = (Fraction(0), (((2, d - 1) if d > 0 else (3, -d - 1), 1),))
    top_col = columns.index(top)
    for vec in solution.nullspace:
        p = DiffPoly.zero()
        for c, mon in zip(vec, columns):
            if not c.is_zero():
                p = p + DiffPoly.from_term(c, mon)
        lead = vec[top_col]
        if not lead.is_zero():
            p = p * lead.inverse()
        basis.append(p)
    return basis


# ---- integration of one-forms ----------------------------------------------

class NotExact:
    """Marker: the one-form admits no potential within the ansatz."""

    def __repr__(self):
        return "NotExact"


NOT_EXACT = NotExact()


def default_ansatz(params: SystemParams, omega: OneFormModI,
                   window=None) -> AnsatzSpec:
    """Heuristic ansatz bounds read off the one-form to integrate."""
    w = omega.weight()
    if w is None:
        raise ValueError("one-form must be weighted-homogeneous")
    P, Q = omega.P, omega.Q
    targets = set(P.exp_sectors()) | set(Q.exp_sectors()) | {Fraction(0)}
    if window is None:
        window = default_exp_window(params)
    # total derivatives shift exponential sectors by multiples of alpha, so
    # only window sectors in the same coset as some target sector can couple
    sectors = {q for q in set(window) | targets
               if any(((q - t) / params.alpha).denominator == 1 for t in targets)}
    max_u = max(P.max_jet(2) - 1, Q.max_jet(2) + 1, 0)
    max_ub = max(P.max_jet(3) + 1, Q.max_jet(3) - 1, 0)
    has_u = P.max_jet(2) >= 0 or Q.max_jet(2) >= 0
    has_ub = P.max_jet(3) >= 0 or Q.max_jet(3) >= 0
    degree = max(P.max_total_jet_degree(), Q.max_total_jet_degree()) + 1
    max_z = max(P.max_var_degree(Z), Q.max_var_degree(Z))
    max_zb = max(P.max_var_degree(ZB), Q.max_var_degree(ZB))
    if has_u and not has_ub and not max_z and not max_zb:
        return AnsatzSpec(w, "pure-u", tuple(sorted(sectors)), None, -1, -1)
    if has_ub and not has_u and not max_z and not max_zb:
        return AnsatzSpec(w, "pure-ub", tuple(sorted(sectors)), None, -1, -1)
    return AnsatzSpec(w, "mixed", tuple(sorted(sectors)), degree,
                      max_u, max_ub, max_z, max_zb)


def integrate_oneform(params: SystemParams, omega: OneFormModI,
                      ansatz: AnsatzSpec | None = None):
    """Weighted-homogeneous G with e_minus1(G) = P and e_minus1bar(G) = Q.

    Returns NOT_EXACT when the linear system is infeasible.  At weight zero
    the pure-constant coefficient is pinned to zero, making G unique.
    """
    if omega.is_zero():
        return DiffPoly.zero()
    if ansatz is None:
        ansatz = default_ansatz(params, omega)
    columns = monomials_for_spec(ansatz)
    constant = (Fraction(0), ())
    columns = [mon for mon in columns if mon != constant]
    if not columns:
        return NOT_EXACT
    polys = [DiffPoly.from_term(1, mon) for mon in columns]
    images = [[e_minus1(params, p), e_minus1bar(params, p)] for p in polys]
    system = _joint_image_system(images, [omega.P, omega.Q])
    solution = linear_solve_exact(system)
    if solution is None:
        return NOT_EXACT
    if solution.nullspace:
        raise AssertionError("integration ansatz has a nontrivial kernel")
    G = DiffPoly.zero()
    for c, mon in zip(solution.particular, columns):
        if not c.is_zero():
            G = G + DiffPoly.from_term(c, mon)
    return G
