from fractions import Fraction

import pytest

from tzitzeica.diffpoly import DiffPoly
from tzitzeica.forms import OneFormModI
from tzitzeica.grammar import format_poly, parse_poly
from tzitzeica.jets import E_lin, SystemParams, e_minus1, e_minus1bar
from tzitzeica.linsolve import (AnsatzSpec, LinearSystem, NotExact,
                                default_ansatz, enumerate_monomials,
                                integrate_oneform, kernel_basis,
                                linear_solve_exact, monomials_for_spec)
from tzitzeica.scalars import Scalar


def mono_text(mon):
    return format_poly(DiffPoly.from_term(1, mon))


def test_enumerate_pure_u_counts():
    assert [mono_text(m) for m in enumerate_monomials(1, "pure-u")] == ["u0"]
    assert [mono_text(m) for m in enumerate_monomials(3, "pure-u")] == \
        ["u2", "u1*u0", "u0^3"]
    names = [mono_text(m) for m in enumerate_monomials(5, "pure-u")]
    assert names == ["u4", "u3*u0", "u2*u1", "u2*u0^2", "u1^2*u0", "u1*u0^3", "u0^5"]


def test_enumerate_pure_ub():
    names = [mono_text(m) for m in enumerate_monomials(-3, "pure-ub")]
    assert names == ["ub2", "ub1*ub0", "ub0^3"]


def test_enumerate_mixed_weight_zero():
    mons = enumerate_monomials(0, "mixed", max_total_degree=2, max_u_jet=0,
                               max_ub_jet=0, exp_window=(Fraction(0), Fraction(1)))
    names = {mono_text(m) for m in mons}
    assert names == {"1", "E[1]", "ub0*u0", "E[1]*ub0*u0"}


def test_solver_unique_solution():
    rows = [{0: Scalar(1)}, {1: Scalar(1)}]
    sol = linear_solve_exact(LinearSystem(rows, [Scalar(2), Scalar(3)], 2))
    assert sol.particular == [Scalar(2), Scalar(3)]
    assert sol.nullspace == []


def test_solver_nullspace():
    sol = linear_solve_exact(
        LinearSystem([{0: Scalar(1), 1: Scalar(1)}], [Scalar(0)], 2))
    assert len(sol.nullspace) == 1
    vec = sol.nullspace[0]
    assert vec[0] + vec[1] == Scalar(0)


def test_solver_infeasible():
    sys_ = LinearSystem([{0: Scalar(1)}, {0: Scalar(1)}],
                        [Scalar(0), Scalar(1)], 1)
    assert linear_solve_exact(sys_) is None


def test_solver_exact_field_arithmetic():
    # entries with i and sqrt2 exercise inverses in the full field
    rows = [{0: Scalar(0, 1), 1: Scalar(0, 0, 1)}, {1: Scalar(2)}]
    sol = linear_solve_exact(LinearSystem(rows, [Scalar(1), Scalar(0, 0, 1)], 2))
    x, y = sol.particular
    assert Scalar(0, 1) * x + Scalar(0, 0, 1) * y == Scalar(1)
    assert Scalar(2) * y == Scalar(0, 0, 1)


def test_kernel_dimensions(params):
    assert [len(kernel_basis(params, d)) for d in (1, 3, 5, 7, 9)] == \
        [1, 0, 1, 1, 0]


def test_kernel_weight_one(params):
    assert kernel_basis(params, 1) == [DiffPoly.u(0)]


def test_kernel_negative_is_conjugate(params, gen5):
    neg = kernel_basis(params, -5)
    assert len(neg) == 1
    assert neg[0] == gen5.conjugate()


def test_kernel_elements_satisfy_properties(params, gen5, gen7):
    for d, p in ((5, gen5), (7, gen7)):
        assert E_lin(params, p).is_zero()
        assert p.weight() == d
        # monic in the highest jet variable
        top = (Fraction(0), (((2, d - 1), 1),))
        assert p.coefficient(top) == Scalar(1)


def test_kernel_alpha_family_quintic():
    p2 = SystemParams(Fraction(2))
    basis = kernel_basis(p2, 5)
    assert len(basis) == 1
    a = Fraction(2)
    expected = parse_poly(
        f"u4 - {5*a}*u2*u1 - {5*a**2}*u2*u0^2 - {5*a**2}*u1^2*u0 + {a**4}*u0^5")
    assert basis[0] == expected


def test_kernel_even_weight_rejected(params):
    with pytest.raises(ValueError):
        kernel_basis(params, 0)


def test_integrate_b_stage(params):
    u0, u1, u2 = DiffPoly.u(0), DiffPoly.u(1), DiffPoly.u(2)
    i_inv_sqrt2 = Scalar(0, 0, 0, Fraction(1, 2))
    omega = OneFormModI(i_inv_sqrt2 * (u2 + 2 * u0 * u1),
                        Scalar(0, 0, 0, Fraction(-3, 2)) * DiffPoly.exp_u(1) * u0)
    G = integrate_oneform(params, omega)
    assert G == i_inv_sqrt2 * (u1 + u0 * u0)


def test_integrate_simple_square(params):
    u0, u1 = DiffPoly.u(0), DiffPoly.u(1)
    G = integrate_oneform(params, OneFormModI(u0 * u1, -u0 * params.f))
    assert G == Fraction(1, 2) * u0 * u0


def test_integrate_not_exact(params):
    u0 = DiffPoly.u(0)
    q = DiffPoly.z() * u0 - DiffPoly.zb() * DiffPoly.ub(0)
    omega = OneFormModI(u0 * e_minus1(params, q), q * e_minus1bar(params, u0))
    assert isinstance(integrate_oneform(params, omega), NotExact)


def test_integrate_postcondition(params, gen5):
    # every returned G reproduces the form exactly
    u0 = DiffPoly.u(0)
    omega = OneFormModI(u0 * e_minus1(params, gen5), gen5 * e_minus1bar(params, u0))
    G = integrate_oneform(params, omega)
    assert e_minus1(params, G) == omega.P
    assert e_minus1bar(params, G) == omega.Q


def test_integrate_weight_zero_drops_constant(params):
    u0, ub0 = DiffPoly.u(0), DiffPoly.ub(0)
    omega = OneFormModI(ub0 * e_minus1(params, u0), u0 * e_minus1bar(params, ub0))
    B = integrate_oneform(params, omega)
    assert B.coefficient((Fraction(0), ())) == Scalar(0)
    assert e_minus1(params, B) == omega.P


def test_default_ansatz_sector_filter(params):
    u0 = DiffPoly.u(0)
    omega = OneFormModI(u0 * DiffPoly.u(1), -u0 * params.f)
    spec = default_ansatz(params, omega)
    # half-integer sectors cannot couple to integer targets at alpha = -1
    assert all(q.denominator == 1 for q in spec.exp_window)


def test_ansatz_widen_grows_window(params):
    spec = AnsatzSpec(2, "pure-u", (Fraction(0), Fraction(1)))
    widened = spec.widen()
    assert set(spec.exp_window) < set(widened.exp_window)
    assert len(monomials_for_spec(widened)) >= len(monomials_for_spec(spec))
