import random
from fractions import Fraction

import pytest

from tzitzeica.diffpoly import DiffPoly
from tzitzeica.forms import ZETA, ZETABAR
from tzitzeica.jets import E_lin
from tzitzeica.loopalgebra import (KillingChain, Mat3, assemble_killing_field,
                                   build_connection, component_equations_check,
                                   double_bracket_multiplier, D_operator,
                                   eigenspace_project, flatness_residual,
                                   g0, g1, g2, g3, g4, g5, in_eigenspace,
                                   killing_form)
from tzitzeica.recursion import P_step
from tzitzeica.scalars import Scalar

from test_diffpoly import rand_poly

BASIS = {0: [g0(1)], 1: [g1(1, 0), g1(0, 1)], 2: [g2(1)], 3: [g3(1)],
         4: [g4(1)], 5: [g5(1, 0), g5(0, 1)]}


def random_traceless(rng):
    entries = [[rand_poly(rng) for _ in range(3)] for _ in range(3)]
    m = Mat3(entries)
    third = Fraction(1, 3)
    tr = m.trace() * third
    return m - Mat3([[tr if i == j else 0 for j in range(3)] for i in range(3)])


def test_projection_idempotent_on_own_space():
    for j, mats in BASIS.items():
        for M in mats:
            assert (eigenspace_project(M, j) - M).is_zero()
            for k in range(6):
                if k != j:
                    assert eigenspace_project(M, k).is_zero()


def test_projections_sum_to_identity():
    rng = random.Random(13)
    for _ in range(20):
        M = random_traceless(rng)
        total = Mat3.zero()
        for j in range(6):
            total = total + eigenspace_project(M, j)
        assert (total - M).is_zero()


def test_all_blocks_traceless():
    for mats in BASIS.values():
        for M in mats:
            assert M.trace().is_zero()


def test_bracket_grading():
    for i, mi in BASIS.items():
        for j, mj in BASIS.items():
            for X in mi:
                for Y in mj:
                    assert in_eigenspace(X.bracket(Y), (i + j) % 6)


def test_connection_entries(params):
    conn = build_connection(params)
    A = conn.psi[-1].coefficient_matrix(ZETA)
    half_sqrt2_eu2 = Scalar(0, 0, Fraction(1, 2)) * DiffPoly.exp_u(Fraction(1, 2))
    assert A.m[1][0] == half_sqrt2_eu2
    z0 = conn.psi[0].coefficient_matrix(ZETA)
    assert z0.m[1][2] == Scalar(0, Fraction(1, 2)) * DiffPoly.u(0)
    assert conn.psi[-1].coefficient_matrix(ZETABAR).is_zero()
    assert conn.psi[1].coefficient_matrix(ZETA).is_zero()
    # eigenspace placement of the three parts
    assert in_eigenspace(conn.A_minus1, 5)
    assert in_eigenspace(conn.A_one, 1)
    assert in_eigenspace(z0, 0)


def test_flatness(params):
    residuals = flatness_residual(params)
    assert set(residuals) == {-2, -1, 0, 1, 2}
    for mf in residuals.values():
        assert mf.is_zero()


@pytest.fixture(scope="module")
def chain_u0(params, trace_u0):
    return KillingChain.from_recursion_trace(params, trace_u0)


def test_component_equations_u0_chain(params, chain_u0):
    residuals = component_equations_check(params, chain_u0)
    assert len(residuals) == 16
    for name, res in residuals:
        assert res.is_zero(), name


def test_component_equations_gen5_chain(params, gen5):
    chain = KillingChain.from_recursion_trace(params, P_step(params, gen5))
    for name, res in component_equations_check(params, chain):
        assert res.is_zero(), name


def test_component_weights(chain_u0):
    d = chain_u0.a.weight()
    expected = [d, d + 1, d + 1, d + 2, d + 3, d + 4, d + 5, d + 5, d + 6]
    fields = [chain_u0.a, chain_u0.b, chain_u0.c, chain_u0.f, chain_u0.r,
              chain_u0.s, chain_u0.t, chain_u0.v, chain_u0.a_next]
    assert [p.weight() for p in fields] == expected


def test_assembled_field_twist(chain_u0):
    X = assemble_killing_field(chain_u0, n=0)
    assert X.twist_ok()
    assert set(X.blocks) <= set(range(7))
    # the g_0 block holds minus the scalar in the (2,3) slot
    assert X.block(0).m[1][2] == -chain_u0.a


def test_assemble_g3_block_is_diagonal(chain_u0):
    X = assemble_killing_field(chain_u0)
    blk = X.block(3)
    assert blk.m[0][0] == -2 * chain_u0.r
    assert blk.m[1][1] == chain_u0.r
    assert blk.m[0][1].is_zero()


def test_double_bracket_multiplier(params):
    # [A_{-1},[A_1, .]] acts on g_0 as -(e^u + 2 e^{-2u}) = -f_u
    assert double_bracket_multiplier(params) == -params.f_u


def test_D_operator_examples(params):
    assert D_operator(params, g0(DiffPoly.u(0))).is_zero()
    assert not D_operator(params, g0(DiffPoly.u(1))).is_zero()
    with pytest.raises(ValueError):
        D_operator(params, g3(1))


def test_D_agrees_with_linearization(params):
    rng = random.Random(19)
    for _ in range(50):
        p = rand_poly(rng)
        assert D_operator(params, g0(p)) == g0(Scalar(-4) * E_lin(params, p))


def test_killing_form(params):
    assert killing_form(g0(1), g0(1)) == DiffPoly.const(-2)
    assert killing_form(g0(1), g3(1)).is_zero()
    rng = random.Random(29)
    for _ in range(20):
        X, Y = random_traceless(rng), random_traceless(rng)
        assert killing_form(X, Y) == killing_form(Y, X)


def test_loop_bracket_grading(chain_u0):
    X = assemble_killing_field(chain_u0)
    sq = X.bracket(X)
    for p, M in sq.blocks.items():
        assert in_eigenspace(M, p % 6)
