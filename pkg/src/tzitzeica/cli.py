"""Command-line frontend; a thin client over the service layer.

Subcommands map one-to-one onto the service endpoints.  By default requests
are dispatched in-process; with --server they are POSTed to a running
instance.  Exit codes: 0 success, 2 usage or parse error, 3 mathematical
failure (unexpected nonzero residual or failed integration).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import service
from .service import (GaugeRequest, KernelRequest, MathFailure, RankRequest,
                      RecurRequest, UsageError, VerifyRequest)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MATH = 3


def _post_remote(server: str, path: str, payload: dict) -> dict:
    import httpx
    response = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
    if response.status_code == 422:
        raise UsageError(response.json().get("detail", response.text))
    if response.status_code == 409:
        raise MathFailure(response.json().get("detail", response.text))
    response.raise_for_status()
    return response.json()


def _dispatch(args, path: str, handler, request) -> dict:
    if args.server:
        return _post_remote(args.server, path, request.model_dump())
    return handler(request).model_dump()


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _cmd_kernel(args) -> int:
    req = KernelRequest(weight=args.weight, alpha=args.alpha)
    data = _dispatch(args, "/kernel", service.handle_kernel, req)
    lines = [f"weight {data['weight']}  alpha {data['alpha']}  "
             f"dimension {data['dimension']}"]
    lines.extend(data["basis"])
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _cmd_recur(args) -> int:
    req = RecurRequest(seed=args.seed, steps=args.steps, alpha=args.alpha,
                       include_trace=args.trace)
    data = _dispatch(args, "/recur", service.handle_recur, req)
    lines = []
    for element in data["chain"]:
        mark = "ok" if element["in_kernel"] else "FAIL"
        lines.append(f"[weight {element['weight']:>3}  E_lin {mark}] {element['text']}")
    if args.trace and data.get("traces"):
        for k, stages in enumerate(data["traces"]):
            lines.append(f"-- step {k + 1} --")
            for stage in stages:
                lines.append(f"  {stage['name']:<7} (weight {stage['weight']:>3})"
                             f" = {stage['text']}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _cmd_verify(args) -> int:
    req = VerifyRequest(what=args.what, seed=args.seed, cases=args.cases,
                        rng_seed=args.rng_seed, alpha=args.alpha)
    data = _dispatch(args, "/verify", service.handle_verify, req)
    lines = []
    for check in data["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        line = f"{status}  {check['name']}"
        if check.get("residual"):
            line += f"  residual: {check['residual']}"
        lines.append(line)
    lines.append(("PASS" if data["passed"] else "FAIL") + f"  {data['what']} suite")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if data["passed"] else EXIT_MATH


def _cmd_gauge(args) -> int:
    generator = args.gen
    if args.gen_file:
        with open(args.gen_file, "r", encoding="utf-8") as fh:
            generator = fh.read().strip()
    req = GaugeRequest(generator=generator, alpha=args.alpha,
                       window_half_steps=args.max_exp_window)
    data = _dispatch(args, "/gauge", service.handle_gauge, req)
    text = "\n".join([
        f"A = {data['A']}",
        f"B = {data['B']}",
        f"G = {data['G']}",
        f"phi_hat = {data['phi_hat']}",
    ])
    _emit(args, data, text)
    return EXIT_OK


def _cmd_rank(args) -> int:
    with open(args.samples, "r", encoding="utf-8") as fh:
        samples = fh.read()
    if args.gens_file:
        with open(args.gens_file, "r", encoding="utf-8") as fh:
            gens = [ln.strip() for ln in fh if ln.strip()]
    else:
        gens = args.gen or []
    if not gens:
        raise UsageError("no generators given (use --gen or --gens-file)")
    req = RankRequest(samples=samples, gens=gens, rel_floor=args.rel_floor)
    data = _dispatch(args, "/rank", service.handle_rank, req)
    lines = [f"rank {data['rank']}", data["message"]]
    lines.extend(data["dependencies"])
    if data["dependencies"]:
        lines.append("certificate exact" if data["exact_certificate"]
                     else "certificate numeric")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn
    uvicorn.run("tzitzeica.service:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tzitzeica",
        description="Exact conservation-law engine for the Tzitzeica equation")
    parser.add_argument("--alpha", default="-1",
                        help="potential parameter (rational, default -1)")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; default in-process")
    parser.add_argument("--max-exp-window", type=int, default=4,
                        help="half-steps of alpha/2 in the exponential ansatz window")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="basis of the weight-d kernel space")
    p.add_argument("--weight", type=int, required=True)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("recur", help="generate a recursion chain")
    p.add_argument("--seed", default="u0",
                   help="u0, v5, or a polynomial in the text grammar")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--trace", action="store_true",
                   help="also print every intermediate stage polynomial")
    p.set_defaults(func=_cmd_recur)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--what", required=True,
                   choices=["flatness", "killing", "closed", "gauge", "commutator"])
    p.add_argument("--seed", default="u0")
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--rng-seed", type=int, default=7)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gauge", help="translation-invariant representative")
    p.add_argument("--gen", default="u0")
    p.add_argument("--gen-file", default=None)
    p.set_defaults(func=_cmd_gauge)

    p = sub.add_parser("rank", help="finite-type rank test on numeric samples")
    p.add_argument("--samples", required=True, help="sample table file")
    p.add_argument("--gen", action="append", help="generator (repeatable)")
    p.add_argument("--gens-file", default=None)
    p.add_argument("--rel-floor", type=float, default=1e-8)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MathFailure as exc:
        print(f"mathematical failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
