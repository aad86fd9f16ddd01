"""FastAPI service wrapping the symbolic engine.

Each endpoint mirrors one CLI subcommand; handlers are plain functions so the
CLI can dispatch in-process without a running server.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .cohomology import (Nontrivial, SampleTable, Trivial, closed_mod_ideal,
                         finite_type_rank, phi_tilde, q_generator,
                         translation_gauge, triviality_test)
from .diffpoly import DiffPoly
from .forms import format_form
from .grammar import ParseError, format_poly, parse_poly, poly_to_record
from .jets import E_lin, SystemParams, e_minus1, e_minus1bar
from .linsolve import default_exp_window, kernel_basis
from .loopalgebra import (KillingChain, component_equations_check,
                          flatness_residual)
from .recursion import IntegrationFailed, P_step
from .scalars import Scalar


class UsageError(ValueError):
    """Bad options or unparsable input; maps to HTTP 422 / exit code 2."""


class MathFailure(RuntimeError):
    """Unexpected nonzero residual or failed integration; HTTP 409 / exit 3."""


def _parse_alpha(text: str) -> SystemParams:
    try:
        return SystemParams(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad alpha {text!r}: {exc}") from exc


def _builtin_seed(params: SystemParams, name: str) -> DiffPoly:
    if name == "u0":
        return DiffPoly.u(0)
    if name == "v5":
        basis = kernel_basis(params, 5)
        if not basis:
            raise MathFailure("weight-5 kernel is empty at this alpha")
        return basis[0]
    try:
        return parse_poly(name)
    except ParseError as exc:
        raise UsageError(f"bad seed {name!r}: {exc}") from exc


# ---- request/response models ------------------------------------------------

class KernelRequest(BaseModel):
    weight: int
    alpha: str = "-1"


class KernelResponse(BaseModel):
    weight: int
    alpha: str
    dimension: int
    basis: List[str]
    records: List[list]


class ChainElement(BaseModel):
    weight: int
    text: str
    in_kernel: bool


class RecurRequest(BaseModel):
    seed: str = "u0"
    steps: int = 1
    alpha: str = "-1"
    include_trace: bool = False


class StageLine(BaseModel):
    name: str
    weight: Optional[int]
    text: str
    record: list


class RecurResponse(BaseModel):
    seed: str
    steps: int
    chain: List[ChainElement]
    traces: Optional[List[List[StageLine]]] = None


class VerifyRequest(BaseModel):
    what: Literal["flatness", "killing", "closed", "gauge", "commutator"]
    seed: str = "u0"
    cases: int = 100
    rng_seed: int = 7
    alpha: str = "-1"


class CheckLine(BaseModel):
    name: str
    passed: bool
    residual: Optional[str] = None


class VerifyResponse(BaseModel):
    what: str
    passed: bool
    checks: List[CheckLine]


class GaugeRequest(BaseModel):
    generator: str = "u0"
    alpha: str = "-1"
    window_half_steps: int = 4


class GaugeResponse(BaseModel):
    generator: str
    A: str
    B: str
    G: str
    phi_hat: str
    phi_hat_zeta: str
    phi_hat_zetabar: str
    translation_invariant: bool
    difference_exact: bool


class RankRequest(BaseModel):
    samples: str = Field(description="delimited table, header = generator names")
    gens: List[str]
    rel_floor: float = 1e-8


class RankResponse(BaseModel):
    rank: int
    finite_type_g: Optional[int]
    dependencies: List[str]
    exact_certificate: bool
    message: str


# ---- handlers ----------------------------------------------------------------

def handle_kernel(req: KernelRequest) -> KernelResponse:
    params = _parse_alpha(req.alpha)
    if req.weight == 0 or req.weight % 2 == 0:
        raise UsageError("kernel weight must be odd and nonzero")
    basis = kernel_basis(params, req.weight)
    return KernelResponse(
        weight=req.weight, alpha=req.alpha, dimension=len(basis),
        basis=[format_poly(p) for p in basis],
        records=[poly_to_record(p) for p in basis])


def handle_recur(req: RecurRequest) -> RecurResponse:
    params = _parse_alpha(req.alpha)
    if params.alpha != Fraction(-1):
        raise UsageError("the recursion is defined at alpha = -1 only")
    if req.steps < 0:
        raise UsageError("steps must be nonnegative")
    seed = _builtin_seed(params, req.seed)
    chain = [seed]
    traces = []
    try:
        if not E_lin(params, seed).is_zero():
            raise UsageError("seed is not in the kernel of the linearization")
        for _ in range(req.steps):
            trace = P_step(params, chain[-1])
            chain.append(trace.a_next)
            if req.include_trace:
                traces.append([StageLine(name=name, weight=p.weight(),
                                         text=format_poly(p),
                                         record=poly_to_record(p))
                               for name, p in trace.stages()])
    except IntegrationFailed as exc:
        raise MathFailure(str(exc)) from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    elements = [ChainElement(weight=p.weight(), text=format_poly(p),
                             in_kernel=E_lin(params, p).is_zero())
                for p in chain]
    if not all(e.in_kernel for e in elements):
        raise MathFailure("chain element escaped the kernel")
    return RecurResponse(seed=req.seed, steps=req.steps, chain=elements,
                         traces=traces if req.include_trace else None)


def _verify_flatness(params) -> List[CheckLine]:
    out = []
    for p, residual in sorted(flatness_residual(params).items()):
        out.append(CheckLine(name=f"lambda^{p}", passed=residual.is_zero()))
    return out


def _verify_killing(params, seed_name: str) -> List[CheckLine]:
    seed = _builtin_seed(params, seed_name)
    trace = P_step(params, seed)
    chain = KillingChain.from_recursion_trace(params, trace)
    out = []
    for name, residual in component_equations_check(params, chain):
        ok = residual.is_zero()
        out.append(CheckLine(name=name, passed=ok,
                             residual=None if ok else format_poly(residual)))
    return out


def _verify_closed(params, seed_name: str) -> List[CheckLine]:
    q = q_generator()
    seed = _builtin_seed(params, seed_name)
    out = []
    form = phi_tilde(params, q, seed)
    res = closed_mod_ideal(params, form)
    out.append(CheckLine(name="closed(phi_tilde(q,P))", passed=res.is_zero(),
                         residual=None if res.is_zero() else format_poly(res)))
    verdict = triviality_test(params, form)
    out.append(CheckLine(name="nontrivial(phi_tilde(q,P))",
                         passed=isinstance(verdict, Nontrivial)))
    even = phi_tilde(params, seed, DiffPoly.u(0))
    verdict_even = triviality_test(params, even)
    out.append(CheckLine(name="trivial(phi_tilde(P,u0))",
                         passed=isinstance(verdict_even, Trivial)))
    return out


def _verify_gauge(params, seed_name: str) -> List[CheckLine]:
    seed = _builtin_seed(params, seed_name)
    try:
        result = translation_gauge(params, seed)
    except (AssertionError, RuntimeError) as exc:
        return [CheckLine(name="translation_gauge", passed=False,
                          residual=str(exc))]
    checks = [CheckLine(name="z-free", passed=True),
              CheckLine(name="cohomologous-to-phi_tilde(P,q)", passed=True)]
    if seed_name == "u0":
        u0 = DiffPoly.u(0)
        expA = Fraction(1, 2) * u0 * u0
        expB = (u0 * DiffPoly.ub(0) + DiffPoly.exp_u(1)
                + Fraction(1, 2) * DiffPoly.exp_u(-2))
        checks.append(CheckLine(name="matches-derived-values",
                                passed=(result.A - expA).is_zero()
                                and (result.B - expB).is_zero()))
    return checks


def _random_poly(rng: random.Random) -> DiffPoly:
    out = DiffPoly.zero()
    for _ in range(rng.randint(1, 4)):
        powers = {}
        for _ in range(rng.randint(0, 3)):
            kind = rng.choice((2, 2, 3))
            var = (kind, rng.randint(0, 4))
            powers[var] = powers.get(var, 0) + 1
        q = Fraction(rng.choice((0, 0, 1, -1, 2)))
        coeff = [0, 0, 0, 0]
        coeff[rng.randint(0, 3)] = rng.randint(-4, 4)
        out = out + DiffPoly.from_term(Scalar(*coeff),
                                       (q, tuple(sorted(powers.items()))))
    return out


def _verify_commutator(params, cases: int, rng_seed: int) -> List[CheckLine]:
    rng = random.Random(rng_seed)
    bad = 0
    for _ in range(cases):
        p = _random_poly(rng)
        lhs = e_minus1(params, e_minus1bar(params, p))
        rhs = e_minus1bar(params, e_minus1(params, p))
        if not (lhs - rhs).is_zero():
            bad += 1
    return [CheckLine(name=f"commutator({cases} cases, seed {rng_seed})",
                      passed=bad == 0,
                      residual=None if bad == 0 else f"{bad} failures")]


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    params = _parse_alpha(req.alpha)
    if req.what == "flatness":
        checks = _verify_flatness(params)
    elif req.what == "killing":
        checks = _verify_killing(params, req.seed)
    elif req.what == "closed":
        checks = _verify_closed(params, req.seed)
    elif req.what == "gauge":
        checks = _verify_gauge(params, req.seed)
    else:
        checks = _verify_commutator(params, req.cases, req.rng_seed)
    return VerifyResponse(what=req.what, passed=all(c.passed for c in checks),
                          checks=checks)


def handle_gauge(req: GaugeRequest) -> GaugeResponse:
    params = _parse_alpha(req.alpha)
    seed = _builtin_seed(params, req.generator)
    window = default_exp_window(params, req.window_half_steps)
    try:
        result = translation_gauge(params, seed, window)
    except (AssertionError, RuntimeError) as exc:
        raise MathFailure(str(exc)) from exc
    return GaugeResponse(
        generator=req.generator, A=format_poly(result.A), B=format_poly(result.B),
        G=format_poly(result.G), phi_hat=format_form(result.phi_hat.to_form()),
        phi_hat_zeta=format_poly(result.phi_hat.P),
        phi_hat_zetabar=format_poly(result.phi_hat.Q),
        translation_invariant=True, difference_exact=True)


def handle_rank(req: RankRequest) -> RankResponse:
    try:
        table = SampleTable.from_text(req.samples)
        gens = [parse_poly(g) for g in req.gens]
    except (ParseError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    try:
        result = finite_type_rank(table, gens, req.rel_floor)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc
    deps = [f"col{idx} = " + " + ".join(f"({c.real:.6g}{c.imag:+.6g}i)*col{k}"
                                        for k, c in enumerate(coeff))
            for idx, coeff in result.dependencies]
    return RankResponse(rank=result.rank, finite_type_g=result.finite_type_g,
                        dependencies=deps,
                        exact_certificate=result.exact_certificate,
                        message=result.message)


# ---- app ---------------------------------------------------------------------

app = FastAPI(title="tzitzeica", version="0.1.0",
              description="Exact conservation-law engine for the Tzitzeica equation")


def _wrap(handler, req):
    try:
        return handler(req)
    except UsageError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except MathFailure as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc


@app.post("/kernel", response_model=KernelResponse)
def kernel_endpoint(req: KernelRequest):
    return _wrap(handle_kernel, req)


@app.post("/recur", response_model=RecurResponse)
def recur_endpoint(req: RecurRequest):
    return _wrap(handle_recur, req)


@app.post("/verify", response_model=VerifyResponse)
def verify_endpoint(req: VerifyRequest):
    return _wrap(handle_verify, req)


@app.post("/gauge", response_model=GaugeResponse)
def gauge_endpoint(req: GaugeRequest):
    return _wrap(handle_gauge, req)


@app.post("/rank", response_model=RankResponse)
def rank_endpoint(req: RankRequest):
    return _wrap(handle_rank, req)


@app.get("/health")
def health():
    return {"status": "ok"}
