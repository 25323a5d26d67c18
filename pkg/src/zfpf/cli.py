"""Command-line front end.

    zfpf estimate      --input H.json --beta RE,IM --epsilon E --delta D
    zfpf oracle        --input MODEL.json --beta RE,IM
    zfpf coeffs        --input MODEL.json --order M
    zfpf sample        --input H.json --beta B --epsilon E --seed S
    zfpf csp-estimate  --input CSP.json --beta RE,IM --M M --region disc:B

Exit status: 0 ok, 2 input error, 3 out of regime, 4 capability cap,
5 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import oracle
from .csp import CspFamily, CspFormula, estimate_csp
from .errors import InputError, RegimeError, ZfpfError
from .family import log_taylor
from .interpolate import GoodRegion, disc, strip_map
from .io import load_json, load_model, measurement_from_dict, to_pair
from .quantum import GibbsSampler, Hamiltonian, QuantumFamily, TensorizedMeasurement, \
    beta0, estimate_partition, make_rng

log = logging.getLogger("zfpf")


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise InputError(f"expected RE or RE,IM, got {text!r}")


def parse_region(spec: str) -> GoodRegion | None:
    """``auto`` -> None, ``disc:B``, or ``strip:RE,IM,WIDTH``."""
    if spec == "auto":
        return None
    kind, _, rest = spec.partition(":")
    try:
        if kind == "disc":
            return disc(float(rest))
        if kind == "strip":
            re, im, width = (float(x) for x in rest.split(","))
            return strip_map(complex(re, im), width)
    except ValueError:
        pass
    raise InputError(f"bad region spec {spec!r}; use auto, disc:B or strip:RE,IM,WIDTH")


def _measurement(arg: str, h: Hamiltonian) -> TensorizedMeasurement:
    if arg == "identity":
        return TensorizedMeasurement.identity(h.n_sites, h.q)
    data = load_json(arg)
    try:
        return measurement_from_dict(data, h.n_sites, h.q)
    except InputError as exc:
        raise InputError(f"{arg}: {exc}") from None


def _check_unit(name: str, value: float) -> None:
    if not 0 < value < 1:
        raise InputError(f"--{name} must lie in (0, 1), got {value}")


def _report(command, rep, beta0_value=None, warnings=()) -> dict:
    return {
        "command": command,
        "value": to_pair(rep.value),
        "log_value": to_pair(rep.log_value),
        "order_m": rep.order,
        "truncation_bound": rep.truncation_bound,
        "beta0": beta0_value,
        "elapsed_ms": rep.elapsed_ms,
        "warnings": list(warnings),
    }


def _require_hamiltonian(model, path) -> Hamiltonian:
    if not isinstance(model, Hamiltonian):
        raise InputError(f"{path}: this command needs a Hamiltonian (use csp-estimate for formulas)")
    return model


def cmd_estimate(args) -> dict:
    h = _require_hamiltonian(load_model(args.input), args.input)
    o = _measurement(args.measurement, h)
    _check_unit("epsilon", args.epsilon)
    _check_unit("delta", args.delta)
    region = parse_region(args.region)
    warnings = []
    if region is not None:
        warnings.append("user-supplied region: zero-freeness on it is assumed, not checked")
    rep = estimate_partition(h, o, parse_complex(args.beta), args.epsilon, args.delta,
                             region=region, M=args.M, threads=args.threads)
    return _report("estimate", rep, rep.beta0, warnings)


def cmd_csp_estimate(args) -> dict:
    f = load_model(args.input)
    if not isinstance(f, CspFormula):
        raise InputError(f"{args.input}: csp-estimate needs a CSP formula")
    _check_unit("epsilon", args.epsilon)
    _check_unit("delta", args.delta)
    region = parse_region(args.region)
    if region is None:
        raise RegimeError("no zero-free region is known for a general CSP; pass --region disc:B or strip:...")
    if args.M is None:
        raise InputError("csp-estimate needs --M, a bound on |log Z| over the region")
    rep = estimate_csp(f, region, parse_complex(args.beta), args.epsilon, args.delta, args.M,
                       threads=args.threads)
    return _report("csp-estimate", rep, None, ["M-zero-freeness on the region is assumed, not checked"])


def cmd_oracle(args) -> dict:
    start = time.perf_counter()
    model = load_model(args.input)
    x = parse_complex(args.beta)
    if isinstance(model, CspFormula):
        value = oracle.exact_csp_partition(model, x)
        b0 = None
    else:
        o = _measurement(args.measurement, model)
        value = oracle.exact_partition(model, o, x)
        h = model.max_term_norm()
        b0 = beta0(model.k, model.d, h) if h > 0 else None
    import cmath

    log_value = cmath.log(value) if value != 0 else complex(float("-inf"), 0.0)
    return {
        "command": "oracle",
        "value": to_pair(value),
        "log_value": to_pair(log_value),
        "order_m": None,
        "truncation_bound": None,
        "beta0": b0,
        "elapsed_ms": (time.perf_counter() - start) * 1e3,
        "warnings": [],
    }


def cmd_coeffs(args) -> dict:
    model = load_model(args.input)
    if args.order < 1:
        raise InputError("--order must be >= 1")
    if isinstance(model, CspFormula):
        family = CspFamily(model)
    else:
        family = QuantumFamily(model, _measurement(args.measurement, model))
    series = log_taylor(family, args.order, threads=args.threads)
    return {"order": args.order, "coefficients": [to_pair(c) for c in series.coefficients]}


def cmd_sample(args) -> dict:
    h = _require_hamiltonian(load_model(args.input), args.input)
    beta = parse_complex(args.beta)
    if beta.imag != 0:
        raise InputError("sampling needs a real --beta")
    _check_unit("epsilon", args.epsilon)
    _check_unit("delta", args.delta)
    sampler = GibbsSampler(h, beta.real, args.epsilon, args.delta, threads=args.threads)
    sigma = sampler.draw(make_rng(args.seed))
    return {"sigma": list(sigma), "seed": args.seed}


COMMANDS = {
    "estimate": cmd_estimate,
    "sample": cmd_sample,
    "coeffs": cmd_coeffs,
    "oracle": cmd_oracle,
    "csp-estimate": cmd_csp_estimate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zfpf", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="model JSON (Hamiltonian or CSP formula)")
        p.add_argument("--measurement", default="identity", help="measurement JSON or 'identity'")
        p.add_argument("--beta", default="0", help="evaluation point RE or RE,IM (the field for CSPs)")
        p.add_argument("--epsilon", type=float, default=1e-3)
        p.add_argument("--delta", type=float, default=0.1)
        p.add_argument("--M", type=float, default=None, help="override the zero-freeness bound")
        p.add_argument("--region", default="auto", help="auto | disc:B | strip:RE,IM,WIDTH")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--order", type=int, default=6, help="truncation order for coeffs")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        result = COMMANDS[args.command](args)
    except ZfpfError as exc:
        print(f"zfpf {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    text = json.dumps(result) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
