"""su(3)-loop-algebra side: twisted eigenspaces, flat family, Killing fields.

The order-6 automorphism splits sl(3,C) into eigenspaces g_0..g_5; matrices
are decomposed against the explicit block parametrization, so no cube roots
enter the scalar arithmetic.  The block-scaling ledger relating recursion
stages to Killing components (b, c scaled by 1/3, f by 1/3, r, s by 1/9,
t, v, a' by 1/27, i.e. 3^{-ceil(j/2)} on the g_j block) is derived by
matching the stage formulas against the component equations; it is validated
by component_equations_check returning sixteen identically-zero residuals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .diffpoly import DiffPoly, _coerce_poly
from .forms import ZETA, ZETABAR, Form, d_form, reduce_mod_ideal
from .jets import SystemParams, e_minus1, e_minus1bar, is_tzitzeica
from .recursion import RecursionTrace
from .scalars import Scalar

I = Scalar(0, 1)
SQRT2 = Scalar(0, 0, 1)
I_SQRT2 = Scalar(0, 0, 0, 1)
HALF = Fraction(1, 2)


def _p(x) -> DiffPoly:
    return _coerce_poly(x)


class Mat3:
    """3x3 matrix with DiffPoly entries."""

    __slots__ = ("m",)

    def __init__(self, rows):
        self.m = tuple(tuple(_p(x) for x in row) for row in rows)
        if len(self.m) != 3 or any(len(r) != 3 for r in self.m):
            raise ValueError("Mat3 needs 3x3 entries")

    @staticmethod
    def zero() -> "Mat3":
        z = DiffPoly.zero()
        return Mat3([[z, z, z]] * 3)

    def __add__(self, other: "Mat3") -> "Mat3":
        return Mat3([[self.m[i][j] + other.m[i][j] for j in range(3)]
                     for i in range(3)])

    def __sub__(self, other: "Mat3") -> "Mat3":
        return Mat3([[self.m[i][j] - other.m[i][j] for j in range(3)]
                     for i in range(3)])

    def __neg__(self) -> "Mat3":
        return Mat3([[-self.m[i][j] for j in range(3)] for i in range(3)])

    def __mul__(self, other):
        if isinstance(other, Mat3):
            return Mat3([[sum((self.m[i][k] * other.m[k][j] for k in range(3)),
                              DiffPoly.zero()) for j in range(3)]
                         for i in range(3)])
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Mat3":
        return Mat3([[self.m[i][j] * c for j in range(3)] for i in range(3)])

    def bracket(self, other: "Mat3") -> "Mat3":
        return self * other - other * self

    def trace(self) -> DiffPoly:
        return self.m[0][0] + self.m[1][1] + self.m[2][2]

    def is_zero(self) -> bool:
        return all(self.m[i][j].is_zero() for i in range(3) for j in range(3))

    def __eq__(self, other):
        if not isinstance(other, Mat3):
            return NotImplemented
        return self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def map_entries(self, fn) -> "Mat3":
        return Mat3([[fn(self.m[i][j]) for j in range(3)] for i in range(3)])

    def __repr__(self):
        from .grammar import format_poly
        rows = ["[" + ", ".join(format_poly(x) for x in row) + "]"
                for row in self.m]
        return "Mat3(" + "; ".join(rows) + ")"


def killing_form(X: Mat3, Y: Mat3) -> DiffPoly:
    """Trace form; proportional to the Killing form of sl(3,C)."""
    return (X * Y).trace()


# ---- eigenspace parametrization -------------------------------------------

def g0(a) -> Mat3:
    a = _p(a)
    z = DiffPoly.zero()
    return Mat3([[z, z, z], [z, z, -a], [z, a, z]])


def g1(b, c) -> Mat3:
    b, c = _p(b), _p(c)
    z = DiffPoly.zero()
    return Mat3([[z, -b, -I * b], [b, c, -I * c], [I * b, -I * c, -c]])


def g2(f) -> Mat3:
    f = _p(f)
    z = DiffPoly.zero()
    return Mat3([[z, f, -I * f], [f, z, z], [-I * f, z, z]])


def g3(r) -> Mat3:
    r = _p(r)
    z = DiffPoly.zero()
    return Mat3([[-2 * r, z, z], [z, r, z], [z, z, r]])


def g4(s) -> Mat3:
    s = _p(s)
    z = DiffPoly.zero()
    return Mat3([[z, s, I * s], [s, z, z], [I * s, z, z]])


def g5(t, v) -> Mat3:
    t, v = _p(t), _p(v)
    z = DiffPoly.zero()
    return Mat3([[z, -t, I * t], [t, v, I * v], [-I * t, I * v, -v]])


_BUILDERS = {0: lambda c: g0(c["A"]), 1: lambda c: g1(c["B"], c["C"]),
             2: lambda c: g2(c["F"]), 3: lambda c: g3(c["R"]),
             4: lambda c: g4(c["S"]), 5: lambda c: g5(c["T"], c["V"])}


def eigenspace_components(M: Mat3) -> Dict[str, DiffPoly]:
    """Coordinates of a trace-free matrix in the eigenspace parametrization."""
    m = M.m
    quarter = Fraction(1, 4)
    p, q = m[0][1], m[1][0]
    r = -I * m[0][2]
    s = -I * m[2][0]
    return {
        "S": (p + q + r + s) * quarter,
        "F": (p + q - r - s) * quarter,
        "T": (q - p + r - s) * quarter,
        "B": (q - p - r + s) * quarter,
        "R": m[0][0] * Fraction(-1, 2),
        "A": (m[2][1] - m[1][2]) * HALF,
        "C": (m[1][1] - m[2][2] + I * (m[1][2] + m[2][1])) * quarter,
        "V": (m[1][1] - m[2][2] - I * (m[1][2] + m[2][1])) * quarter,
    }


def eigenspace_project(M: Mat3, j: int) -> Mat3:
    if j not in range(6):
        raise ValueError("eigenspace index must be 0..5")
    return _BUILDERS[j](eigenspace_components(M))


def in_eigenspace(M: Mat3, j: int) -> bool:
    return (M - eigenspace_project(M, j)).is_zero()


# ---- loop matrices ----------------------------------------------------------

class LoopMatrix:
    """Laurent polynomial in the loop parameter with Mat3 coefficients.

    The twist pins the lambda^p block to the eigenspace g_{p mod 6}.
    """

    __slots__ = ("blocks",)

    def __init__(self, blocks: Dict[int, Mat3], check_twist: bool = True):
        self.blocks = {p: M for p, M in blocks.items() if not M.is_zero()}
        if check_twist:
            for p, M in self.blocks.items():
                if not in_eigenspace(M, p % 6):
                    raise ValueError(f"lambda^{p} block is not in g_{p % 6}")

    def __add__(self, other: "LoopMatrix") -> "LoopMatrix":
        out = dict(self.blocks)
        for p, M in other.blocks.items():
            out[p] = out[p] + M if p in out else M
        return LoopMatrix(out, check_twist=False)

    def __mul__(self, other: "LoopMatrix") -> "LoopMatrix":
        out: Dict[int, Mat3] = {}
        for p, Mp in self.blocks.items():
            for q, Mq in other.blocks.items():
                prod = Mp * Mq
                out[p + q] = out[p + q] + prod if p + q in out else prod
        return LoopMatrix(out, check_twist=False)

    def bracket(self, other: "LoopMatrix") -> "LoopMatrix":
        out: Dict[int, Mat3] = {}
        for p, Mp in self.blocks.items():
            for q, Mq in other.blocks.items():
                br = Mp.bracket(Mq)
                out[p + q] = out[p + q] + br if p + q in out else br
        return LoopMatrix(out, check_twist=False)

    def block(self, p: int) -> Mat3:
        return self.blocks.get(p, Mat3.zero())

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self.blocks.values())

    def twist_ok(self) -> bool:
        return all(in_eigenspace(M, p % 6) for p, M in self.blocks.items())


# ---- the flat family --------------------------------------------------------

class MatForm:
    """3x3 matrix of exterior forms of a common degree."""

    __slots__ = ("degree", "m")

    def __init__(self, degree: int, rows):
        self.degree = degree
        self.m = tuple(tuple(row) for row in rows)

    @staticmethod
    def zero(degree: int) -> "MatForm":
        z = Form.zero(degree)
        return MatForm(degree, [[z, z, z]] * 3)

    @staticmethod
    def from_mat3(M: Mat3, symbol) -> "MatForm":
        return MatForm(1, [[Form.from_components(1, [((symbol,), M.m[i][j])])
                            for j in range(3)] for i in range(3)])

    def __add__(self, other: "MatForm") -> "MatForm":
        return MatForm(self.degree, [[self.m[i][j] + other.m[i][j]
                                      for j in range(3)] for i in range(3)])

    def wedge(self, other: "MatForm") -> "MatForm":
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = Form.zero(self.degree + other.degree)
                for k in range(3):
                    acc = acc + self.m[i][k].wedge(other.m[k][j])
                row.append(acc)
            rows.append(row)
        return MatForm(self.degree + other.degree, rows)

    def d(self, params: SystemParams) -> "MatForm":
        return MatForm(self.degree + 1,
                       [[d_form(params, self.m[i][j]) for j in range(3)]
                        for i in range(3)])

    def reduce_mod_ideal(self) -> "MatForm":
        return MatForm(self.degree,
                       [[reduce_mod_ideal(self.m[i][j]) for j in range(3)]
                        for i in range(3)])

    def coefficient_matrix(self, *symbols) -> Mat3:
        return Mat3([[self.m[i][j].component(*symbols) for j in range(3)]
                     for i in range(3)])

    def is_zero(self) -> bool:
        return all(self.m[i][j].is_zero() for i in range(3) for j in range(3))


@dataclass
class Connection:
    """Flat family psi_lambda = lambda^{-1} psi_{-1} + psi_0 + lambda psi_1."""

    psi: Dict[int, MatForm]
    A_minus1: Mat3      # zeta coefficient of psi_{-1}
    A_one: Mat3         # zetabar coefficient of psi_1

    def zeta_coefficients(self) -> LoopMatrix:
        return LoopMatrix({p: mf.coefficient_matrix(ZETA)
                           for p, mf in self.psi.items()}, check_twist=False)

    def zetabar_coefficients(self) -> LoopMatrix:
        return LoopMatrix({p: mf.coefficient_matrix(ZETABAR)
                           for p, mf in self.psi.items()}, check_twist=False)


def build_connection(params: SystemParams) -> Connection:
    """Assemble the flat su(3) family at alpha = -1."""
    if not is_tzitzeica(params):
        raise ValueError("the flat family is written in the alpha = -1 gauge")
    half = Scalar(HALF)
    z1 = SQRT2 * DiffPoly.exp_u(HALF)       # coefficient of zeta in zeta_1
    z2 = DiffPoly.exp_u(-1)
    A_minus1 = Mat3([[0, -half * z1, I * half * z1],
                     [half * z1, I * half * z2, -half * z2],
                     [-I * half * z1, -half * z2, -I * half * z2]])
    A_one = Mat3([[0, -half * z1, -I * half * z1],
                  [half * z1, I * half * z2, half * z2],
                  [I * half * z1, half * z2, -I * half * z2]])
    psi_m1 = MatForm.from_mat3(A_minus1, ZETA)
    psi_p1 = MatForm.from_mat3(A_one, ZETABAR)
    # psi_0 carries theta = (ub0 zetabar - u0 zeta)/2 in the g_0 slot
    u0, ub0 = DiffPoly.u(0), DiffPoly.ub(0)
    psi_0 = (MatForm.from_mat3(g0(-I * half * u0), ZETA)
             + MatForm.from_mat3(g0(I * half * ub0), ZETABAR))
    return Connection({-1: psi_m1, 0: psi_0, 1: psi_p1}, A_minus1, A_one)


def flatness_residual(params: SystemParams) -> Dict[int, MatForm]:
    """d psi_lambda + psi_lambda ^ psi_lambda per loop power, reduced mod the ideal."""
    conn = build_connection(params)
    residuals: Dict[int, MatForm] = {}
    for p in range(-2, 3):
        acc = MatForm.zero(2)
        if p in conn.psi:
            acc = acc + conn.psi[p].d(params)
        for a in (-1, 0, 1):
            b = p - a
            if a in conn.psi and b in conn.psi:
                acc = acc + conn.psi[a].wedge(conn.psi[b])
        residuals[p] = acc.reduce_mod_ideal()
    return residuals


# ---- Killing chains ---------------------------------------------------------

@dataclass
class KillingChain:
    """One window of Killing-field components, in Killing normalization."""

    a: DiffPoly
    b: DiffPoly
    c: DiffPoly
    f: DiffPoly
    r: DiffPoly
    s: DiffPoly
    t: DiffPoly
    v: DiffPoly
    a_next: DiffPoly

    @staticmethod
    def from_recursion_trace(params: SystemParams, trace: RecursionTrace) -> "KillingChain":
        """Apply the 3^{-ceil(j/2)} block-scaling ledger to a raising trace."""
        if trace.direction != "P":
            raise ValueError("Killing chains are assembled from raising traces")
        third = Fraction(1, 3)
        ninth = Fraction(1, 9)
        b = trace.b * third
        c = (e_minus1(params, trace.a) + I_SQRT2 * b) * Fraction(1, 2)
        f = trace.f * third
        r = trace.r * ninth
        s = trace.s * ninth
        t = trace.t * Fraction(1, 27)
        v = (e_minus1(params, s) + I * DiffPoly.exp_u(-1) * t) * Scalar(0, 0, HALF)
        a_next = trace.a_next * Fraction(1, 27)
        return KillingChain(trace.a, b, c, f, r, s, t, v, a_next)


def assemble_killing_field(chain: KillingChain, n: int = 0) -> LoopMatrix:
    """Blocks lambda^{6n}..lambda^{6n+6} with the displayed e^{ku} factors."""
    e = DiffPoly.exp_u
    base = 6 * n
    return LoopMatrix({
        base: g0(chain.a),
        base + 1: g1(e(Fraction(-1, 2)) * chain.b, e(1) * chain.c),
        base + 2: g2(chain.f),
        base + 3: g3(chain.r),
        base + 4: g4(e(HALF) * chain.s),
        base + 5: g5(e(HALF) * chain.t, chain.v),
        base + 6: g0(chain.a_next),
    })


COMPONENT_EQUATIONS = (
    "abc", "bf", "cf", "f", "r", "stv", "ta", "va",
    "abcbar", "babar", "cfbar", "fbar", "rbar", "stvbar", "tabar", "vabar",
)


def component_equations_check(params: SystemParams,
                              chain: KillingChain) -> List[Tuple[str, DiffPoly]]:
    """All sixteen scalar component identities of the Killing-field equation.

    The dzb equation of the g_0 block is evaluated on the outgoing component
    a_next, which closes the window on the current t, v.
    """
    e1 = lambda p: e_minus1(params, p)
    e1b = lambda p: e_minus1bar(params, p)
    u0, ub0 = DiffPoly.u(0), DiffPoly.ub(0)
    e = DiffPoly.exp_u
    half = Fraction(1, 2)
    a, b, c, f, r, s, t, v, a2 = (chain.a, chain.b, chain.c, chain.f, chain.r,
                                  chain.s, chain.t, chain.v, chain.a_next)
    inv_sqrt2 = Scalar(0, 0, half)
    residuals = [
        ("abc", e1(a) + I_SQRT2 * b - 2 * c),
        ("bf", e1(b) - u0 * b + I * e(-half) * f),
        ("cf", e1(c) + 2 * u0 * c + SQRT2 * e(-half) * f),
        ("f", e1(f) + half * u0 * f - 3 * inv_sqrt2 * e(half) * r),
        ("r", e1(r) + SQRT2 * e(1) * s),
        ("stv", e1(s) - SQRT2 * v + I * e(-1) * t),
        ("ta", e1(t) + u0 * t - Scalar(0, 0, 0, half) * a2),
        ("va", e1(v) - u0 * v - e(-1) * a2),
        ("abcbar", e1b(a2) - I_SQRT2 * e(1) * t + 2 * e(-1) * v),
        ("babar", e1b(b) + Scalar(0, 0, 0, half) * e(1) * a),
        ("cfbar", e1b(c) + e(-2) * a),
        ("fbar", e1b(f) - half * ub0 * f + I * e(Fraction(-3, 2)) * b
         - SQRT2 * e(Fraction(3, 2)) * c),
        ("rbar", e1b(r) + SQRT2 * e(half) * f),
        ("stvbar", e1b(s) + ub0 * s - 3 * inv_sqrt2 * r),
        ("tabar", e1b(t) + I * e(-1) * s),
        ("vabar", e1b(v) + ub0 * v + SQRT2 * e(1) * s),
    ]
    return residuals


# ---- the operator on the g_0 slot ------------------------------------------

def D_operator(params: SystemParams, P: Mat3) -> Mat3:
    """Delta P + 4 [A_{-1}, [A_1, P]] on g_0-valued matrices.

    Delta is read off the definition dbar-d P = (1/4) Delta(P) zeta ^ zetabar,
    which on functions of the prolongation gives Delta = -4 e_minus1bar e_minus1;
    with that sign the operator equals -4 times the scalar linearization, so
    kernels coincide.
    """
    if not in_eigenspace(P, 0):
        raise ValueError("D_operator input must lie in g_0")
    conn = build_connection(params)
    lap = P.map_entries(
        lambda p: Scalar(-4) * e_minus1bar(params, e_minus1(params, p)))
    return lap + Scalar(4) * conn.A_minus1.bracket(conn.A_one.bracket(P))


def double_bracket_multiplier(params: SystemParams) -> DiffPoly:
    """The scalar factor lambda with [A_{-1},[A_1, g0(p)]] = lambda * g0(p)."""
    conn = build_connection(params)
    image = conn.A_minus1.bracket(conn.A_one.bracket(g0(1)))
    comp = eigenspace_components(image)
    return comp["A"]
