import random
from fractions import Fraction

from tzitzeica.diffpoly import DiffPoly, U, UB, monomial_weight
from tzitzeica.scalars import Scalar


def rand_poly(rng, allow_exp=True):
    out = DiffPoly.zero()
    for _ in range(rng.randint(1, 5)):
        powers = {}
        for _ in range(rng.randint(0, 3)):
            var = (rng.choice((0, 1, 2, 2, 3, 3)), rng.randint(0, 3))
            if var[0] < 2:
                var = (var[0], 0)
            powers[var] = powers.get(var, 0) + 1
        q = Fraction(rng.choice((0, 0, 0, 1, -2, Fraction(1, 2))) if allow_exp else 0)
        coeff = Scalar(rng.randint(-4, 4), rng.randint(-2, 2))
        out = out + DiffPoly.from_term(coeff, (q, tuple(sorted(powers.items()))))
    return out


def test_additive_inverse():
    u0 = DiffPoly.u(0)
    assert (u0 + (-u0)).is_zero()


def test_add_keeps_distinct_terms():
    p = DiffPoly.u(0) + DiffPoly.ub(0)
    assert len(p.terms) == 2


def test_exponentials_add():
    e = DiffPoly.exp_u(1)
    assert e + e == 2 * e
    assert DiffPoly.exp_u(Fraction(1, 2)) * DiffPoly.exp_u(Fraction(1, 2)) == e


def test_product_difference_of_squares():
    u0, ub0 = DiffPoly.u(0), DiffPoly.ub(0)
    assert (u0 + ub0) * (u0 - ub0) == u0 * u0 - ub0 * ub0


def test_isqrt2_squares_to_minus_two():
    c = DiffPoly.const(Scalar(0, 0, 0, 1))
    assert c * c == DiffPoly.const(-2)


def test_ring_laws_randomized():
    rng = random.Random(5)
    for _ in range(100):
        p, q, r = (rand_poly(rng) for _ in range(3))
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r


def test_conjugate_involution_and_homomorphism():
    rng = random.Random(9)
    for _ in range(100):
        p, q = rand_poly(rng), rand_poly(rng)
        assert p.conjugate().conjugate() == p
        assert (p * q).conjugate() == p.conjugate() * q.conjugate()


def test_conjugate_examples():
    u1, ub1 = DiffPoly.u(1), DiffPoly.ub(1)
    e = DiffPoly.exp_u(1)
    assert (e * u1).conjugate() == e * ub1
    q = DiffPoly.z() * DiffPoly.u(0) - DiffPoly.zb() * DiffPoly.ub(0)
    assert q.conjugate() == -q
    iu0 = Scalar(0, 1) * DiffPoly.u(0)
    assert iu0.conjugate() == Scalar(0, -1) * DiffPoly.ub(0)


def test_weights():
    # z*ub2*u1^2 has weight -1 - 3 + 4 = 0
    p = DiffPoly.z() * DiffPoly.ub(2) * DiffPoly.u(1) * DiffPoly.u(1)
    assert p.weight() == 0
    assert (DiffPoly.u(0) + DiffPoly.u(1)).weight() is None
    assert DiffPoly.exp_u(3).weight() == 0


def test_weight_multiplicative_and_conjugate():
    rng = random.Random(1)
    for _ in range(100):
        p, q = rand_poly(rng), rand_poly(rng)
        wp, wq = p.weight(), q.weight()
        if wp is not None and wq is not None and p and q:
            assert (p * q).weight() == wp + wq
        if wp is not None and p:
            assert p.conjugate().weight() == -wp


def test_partial_derivatives():
    u0 = DiffPoly.u(0)
    p = u0 * u0 * u0 * u0 * u0
    assert p.partial(U(0)) == 5 * u0 * u0 * u0 * u0
    assert DiffPoly.exp_u(-2).partial("u") == -2 * DiffPoly.exp_u(-2)
    assert (DiffPoly.z() * u0).partial((0, 0)) == u0
    assert u0.partial(UB(0)).is_zero()


def test_eval_numeric():
    u0 = DiffPoly.u(0)
    assert abs((u0 * u0).eval_numeric({"u0": 2.0}) - 4.0) < 1e-12
    assert abs(DiffPoly.exp_u(1).eval_numeric({}, u=0.0) - 1.0) < 1e-12
    val = (u0 * DiffPoly.ub(0)).eval_numeric({"u0": 1 + 1j, "ub0": 1 - 1j})
    assert abs(val - 2.0) < 1e-12


def test_monomial_weight_table():
    assert monomial_weight((Fraction(0), (((2, 4), 1),))) == 5
    assert monomial_weight((Fraction(0), (((3, 4), 1),))) == -5
    assert monomial_weight((Fraction(3), ())) == 0
    assert monomial_weight((Fraction(0), (((0, 0), 2), ((1, 0), 1)))) == -1
