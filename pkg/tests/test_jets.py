import random
from fractions import Fraction

import pytest

from tzitzeica.diffpoly import DiffPoly
from tzitzeica.grammar import parse_poly
from tzitzeica.jets import (E_lin, SystemParams, e_minus1, e_minus1bar,
                            satisfies_no_mixing)

from test_diffpoly import rand_poly


def test_potential_identity_alpha_family():
    for alpha in (Fraction(-1), Fraction(2), Fraction(1, 3)):
        p = SystemParams(alpha)
        assert (p.f_uu - (alpha * p.f_u + 2 * alpha ** 2 * p.f)).is_zero()


def test_alpha_zero_rejected():
    with pytest.raises(ValueError):
        SystemParams(0)


def test_T_series(params):
    u0, u1 = DiffPoly.u(0), DiffPoly.u(1)
    assert params.T(0) == DiffPoly.exp_u(1) - DiffPoly.exp_u(-2)
    assert params.T(1) == u0 * params.f_u
    assert params.T(2) == u1 * params.f_u + u0 * u0 * params.f_uu


def test_total_derivative_examples(params):
    u0 = DiffPoly.u(0)
    assert e_minus1(params, u0) == DiffPoly.u(1)
    assert e_minus1bar(params, u0) == -params.f
    assert e_minus1(params, DiffPoly.z()) == DiffPoly.const(1)
    assert e_minus1(params, DiffPoly.zb()).is_zero()
    assert e_minus1bar(params, DiffPoly.ub(0)) == DiffPoly.ub(1)


def test_linearization_examples(params):
    u0, u1 = DiffPoly.u(0), DiffPoly.u(1)
    assert E_lin(params, u0).is_zero()
    q = DiffPoly.z() * u0 - DiffPoly.zb() * DiffPoly.ub(0)
    assert E_lin(params, q).is_zero()
    assert E_lin(params, u1) == -u0 * u0 * params.f_uu


def test_commutator_vanishes_randomized():
    for alpha in (Fraction(-1), Fraction(2)):
        p = SystemParams(alpha)
        rng = random.Random(101)
        for _ in range(100):
            poly = rand_poly(rng)
            lhs = e_minus1(p, e_minus1bar(p, poly))
            rhs = e_minus1bar(p, e_minus1(p, poly))
            assert (lhs - rhs).is_zero()


def test_weight_bookkeeping(params):
    rng = random.Random(55)
    checked = 0
    while checked < 100:
        p = rand_poly(rng)
        w = p.weight()
        if w is None or p.is_zero():
            continue
        up = e_minus1(params, p)
        down = e_minus1bar(params, p)
        if up:
            assert up.weight() == w + 1
        if down:
            assert down.weight() == w - 1
        lin = E_lin(params, p)
        if lin:
            assert lin.weight() == w
        checked += 1


def test_no_mixing_predicate():
    assert satisfies_no_mixing(parse_poly("z*u0 - zb*ub0"))
    assert not satisfies_no_mixing(parse_poly("u0*ub0"))
    assert not satisfies_no_mixing(parse_poly("E[1]*u0"))
