"""The order-six recursions on generating functions of the Tzitzeica equation.

P_step raises the weight by six through the seven-stage chain
a -> alpha -> b -> f -> r -> s -> beta -> t -> a', where the two one-form
stages are integrated exactly and the rest are first-order differential
substitutions.  N_step runs the mirrored chain downward.

Both maps are normalized so that monic inputs map to monic outputs on the
pure-u side and on the pure-ub side (the two sectors need different constant
normalizations: the raw stage formulas are monic along their natural
direction, u-chains upward for P_step and ub-chains downward for N_step, and
pick up the factor 3^6 in the opposite direction).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .diffpoly import DiffPoly
from .forms import OneFormModI
from .jets import E_lin, SystemParams, e_minus1, e_minus1bar, is_tzitzeica
from .linsolve import AnsatzSpec, NotExact, integrate_oneform
from .scalars import Scalar

I = Scalar(0, 1)
SQRT2 = Scalar(0, 0, 1)
I_SQRT2 = Scalar(0, 0, 0, 1)          # sqrt(-2)
I_INV_SQRT2 = Scalar(0, 0, 0, Fraction(1, 2))   # i/sqrt2
INV_SQRT2 = Scalar(0, 0, Fraction(1, 2))        # 1/sqrt2
SECTOR_NORMALIZATION = Scalar(729)    # 3^6, see module docstring


class IntegrationFailed(RuntimeError):
    """A recursion stage had no exact potential within its ansatz."""


@dataclass
class RecursionTrace:
    """Stage-by-stage record of one application of a recursion step."""

    a: DiffPoly
    alpha_form: OneFormModI
    b: DiffPoly
    f: DiffPoly
    r: DiffPoly
    s: DiffPoly
    beta_form: OneFormModI
    t: DiffPoly
    a_next: DiffPoly
    direction: str = "P"

    def stages(self):
        return [("a", self.a), ("b", self.b), ("f", self.f), ("r", self.r),
                ("s", self.s), ("t", self.t), ("a_next", self.a_next)]


def _check_input(params: SystemParams, a: DiffPoly, excluded, step_name: str) -> int:
    if not is_tzitzeica(params):
        raise ValueError(f"{step_name} is defined at alpha = -1 only")
    d = a.weight()
    if d is None or a.is_zero():
        raise ValueError(f"{step_name} input must be nonzero weighted-homogeneous")
    if d % 2 == 0:
        raise ValueError(f"{step_name} input must have odd weight, got {d}")
    if d in excluded:
        raise ValueError(f"{step_name} is not defined on weight {d}")
    if not E_lin(params, a).is_zero():
        raise ValueError(f"{step_name} input is not in the kernel of the linearization")
    return d


def _stage_ansatz(weight: int, side_positive: bool, sector: Fraction) -> AnsatzSpec:
    """b/t-type stages are (exponential factor) * pure jet polynomials."""
    klass = "pure-u" if side_positive else "pure-ub"
    return AnsatzSpec(weight, klass, (Fraction(sector),))


def _integrate_stage(params, omega, ansatz, stage: str) -> DiffPoly:
    G = integrate_oneform(params, omega, ansatz)
    if isinstance(G, NotExact):
        raise IntegrationFailed(f"stage {stage}: one-form has no exact potential")
    return G


def P_step(params: SystemParams, a: DiffPoly) -> RecursionTrace:
    """One application of the weight-raising recursion, with full trace."""
    d = _check_input(params, a, (-1, -5), "P_step")
    e1 = lambda p: e_minus1(params, p)
    u0 = DiffPoly.u(0)
    eu = DiffPoly.exp_u(1)

    a1 = e1(a)
    alpha = OneFormModI(I_INV_SQRT2 * (e1(a1) + 2 * u0 * a1),
                        Scalar(-3) * I_INV_SQRT2 * eu * a)
    b = _integrate_stage(params, alpha,
                         _stage_ansatz(d + 1, d > 0, Fraction(0 if d > 0 else 1)),
                         "b")
    f = I * DiffPoly.exp_u(Fraction(1, 2)) * (e1(b) - u0 * b)
    r = SQRT2 * DiffPoly.exp_u(Fraction(-1, 2)) * (e1(f) + Fraction(1, 2) * u0 * f)
    s = -INV_SQRT2 * DiffPoly.exp_u(-1) * e1(r)
    s1 = e1(s)
    beta = OneFormModI(I * eu * (e1(s1) - u0 * s1),
                       Scalar(-3) * I * DiffPoly.exp_u(-1) * s)
    t = _integrate_stage(params, beta,
                         _stage_ansatz(d + 5, d > 0, Fraction(0 if d > 0 else -1)),
                         "t")
    a_next = -I_SQRT2 * (e1(t) + u0 * t)
    if d < 0:
        a_next = a_next / SECTOR_NORMALIZATION
    return RecursionTrace(a, alpha, b, f, r, s, beta, t, a_next, "P")


def N_step(params: SystemParams, a: DiffPoly) -> RecursionTrace:
    """One application of the weight-lowering recursion, with full trace.

    Stage names mirror the raising chain; here the order of computation is
    t, s, r, f, b and the two integrations produce e^u*t and e^{-u}*b.
    """
    d = _check_input(params, a, (1, 5), "N_step")
    e1b = lambda p: e_minus1bar(params, p)
    ub0 = DiffPoly.ub(0)
    eu = DiffPoly.exp_u(1)
    eminus = DiffPoly.exp_u(-1)

    ab = e1b(a)
    alpha = OneFormModI(Scalar(3) * I_INV_SQRT2 * eu * a,
                        -I_INV_SQRT2 * (e1b(ab) + 2 * ub0 * ab))
    # integrate for w = e^u * t
    w = _integrate_stage(params, alpha,
                         AnsatzSpec(d - 1, "pure-u" if d > 0 else "pure-ub",
                                    (Fraction(1 if d > 0 else 0),)),
                         "t")
    t = eminus * w
    s = I * eu * e1b(t)
    r = SQRT2 * (e1b(s) + ub0 * s)
    f = -INV_SQRT2 * DiffPoly.exp_u(Fraction(-1, 2)) * e1b(r)
    g = DiffPoly.exp_u(Fraction(-1, 2)) * f
    g1 = e1b(g)
    beta = OneFormModI(Scalar(-3) * I * DiffPoly.exp_u(Fraction(-3, 2)) * f,
                       I * eu * (e1b(g1) - ub0 * g1))
    # integrate for v = e^{-u} * b
    v = _integrate_stage(params, beta,
                         AnsatzSpec(d - 5, "pure-u" if d > 0 else "pure-ub",
                                    (Fraction(-1 if d > 0 else 0),)),
                         "b")
    b = eu * v
    a_prev = I_SQRT2 * (e1b(v) + ub0 * v)
    if d > 0:
        a_prev = a_prev / SECTOR_NORMALIZATION
    return RecursionTrace(a, alpha, b, f, r, s, beta, t, a_prev, "N")


def chain_generate(params: SystemParams, seed: DiffPoly, steps: int) -> List[DiffPoly]:
    """[seed, P(seed), P^2(seed), ...], each element verified in the kernel."""
    if not E_lin(params, seed).is_zero():
        raise ValueError("seed is not in the kernel of the linearization")
    out = [seed]
    for _ in range(steps):
        trace = P_step(params, out[-1])
        if not E_lin(params, trace.a_next).is_zero():
            raise AssertionError("recursion output escaped the kernel")
        out.append(trace.a_next)
    return out
