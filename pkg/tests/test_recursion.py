from fractions import Fraction

import pytest

from tzitzeica.diffpoly import DiffPoly
from tzitzeica.grammar import parse_poly
from tzitzeica.jets import E_lin, SystemParams
from tzitzeica.linsolve import kernel_basis
from tzitzeica.recursion import N_step, P_step, chain_generate
from tzitzeica.scalars import Scalar

SEPTIC_TEXT = ("u6 + 7*u4*u1 - 7*u4*u0^2 + 14*u3*u2 - 28*u3*u1*u0 - 21*u2^2*u0"
           " - 28*u2*u1^2 - 14*u2*u1*u0^2 + 14*u2*u0^4 - 28/3*u1^3*u0"
           " + 28*u1^2*u0^3 - 4/3*u0^7")


def test_P_step_stage_values(params, trace_u0):
    u0, u1 = DiffPoly.u(0), DiffPoly.u(1)
    i_inv_sqrt2 = Scalar(0, 0, 0, Fraction(1, 2))
    assert trace_u0.b == i_inv_sqrt2 * (u1 + u0 * u0)
    f_expected = (-Scalar(0, 0, Fraction(1, 2)) * DiffPoly.exp_u(Fraction(1, 2))
                  * parse_poly("u2 + u1*u0 - u0^3"))
    assert trace_u0.f == f_expected
    assert trace_u0.r == -parse_poly("u3 + 2*u2*u0 + u1^2 - 2*u1*u0^2 - u0^4")


def test_P_step_stage_weights(trace_u0):
    weights = [trace_u0.a.weight(), trace_u0.b.weight(), trace_u0.f.weight(),
               trace_u0.r.weight(), trace_u0.s.weight(), trace_u0.t.weight(),
               trace_u0.a_next.weight()]
    assert weights == [1, 2, 3, 4, 5, 6, 7]


def test_P_step_weight_seven_closed_form(trace_u0):
    assert trace_u0.a_next == parse_poly(SEPTIC_TEXT)


def test_P_step_output_in_kernel(params, trace_u0):
    assert E_lin(params, trace_u0.a_next).is_zero()


def test_P_step_agrees_with_kernel_oracle(params, trace_u0, gen5, gen7):
    assert trace_u0.a_next == gen7
    assert P_step(params, gen5).a_next == kernel_basis(params, 11)[0]


def test_P_step_depth_two_agrees_with_kernel_oracle(params, gen7):
    assert P_step(params, gen7).a_next == kernel_basis(params, 13)[0]


def test_N_step_inverts_P(params, gen7):
    assert N_step(params, gen7).a_next == DiffPoly.u(0)
    p13 = P_step(params, gen7).a_next
    assert N_step(params, p13).a_next == gen7


def test_normalization_on_conjugate_chain(params, gen7):
    # the lowering map sends the monic ub-chain upward in |weight|, monically
    ub0 = DiffPoly.ub(0)
    assert N_step(params, ub0).a_next == gen7.conjugate()
    assert P_step(params, gen7.conjugate()).a_next == ub0


def test_linearity_of_steps(params, gen7):
    c = Scalar(0, 3)
    assert P_step(params, c * DiffPoly.u(0)).a_next == c * gen7


def test_chain_generate(params, gen5, gen7):
    chain = chain_generate(params, DiffPoly.u(0), 2)
    assert [p.weight() for p in chain] == [1, 7, 13]
    assert chain[1] == gen7
    assert E_lin(params, chain[2]).is_zero()
    assert chain_generate(params, DiffPoly.u(0), 0) == [DiffPoly.u(0)]
    chain5 = chain_generate(params, gen5, 1)
    assert [p.weight() for p in chain5] == [5, 11]


def test_pure_u_shape_preserved(params, trace_u0):
    out = trace_u0.a_next
    assert out.max_jet(3) == -1
    assert out.exp_sectors() == {Fraction(0)}
    assert out.max_var_degree((0, 0)) == 0


def test_excluded_weights_rejected(params, gen5):
    with pytest.raises(ValueError):
        P_step(params, DiffPoly.ub(0))     # weight -1
    with pytest.raises(ValueError):
        P_step(params, gen5.conjugate())     # weight -5
    with pytest.raises(ValueError):
        N_step(params, DiffPoly.u(0))      # weight 1
    with pytest.raises(ValueError):
        N_step(params, gen5)                 # weight 5


def test_non_kernel_input_rejected(params):
    with pytest.raises(ValueError):
        P_step(params, DiffPoly.u(2))      # odd weight but E_lin != 0


def test_even_weight_rejected(params):
    with pytest.raises(ValueError):
        P_step(params, DiffPoly.u(1))


def test_alpha_restriction():
    with pytest.raises(ValueError):
        P_step(SystemParams(Fraction(2)), DiffPoly.u(0))
