"""Command-line surface: K0 queries, certified decompositions,
certificate verification, and batch suites with JSON reports.

Exit codes: 0 success, 2 parse or input error, 3 verification failure,
4 search exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import engine, k0
from .errors import HyperfinError, SearchExhausted
from .kronecker import IsoClass, KroneckerModule, canonical, point_from_scalar, zero_module
from .linalg import Matrix, parse_field

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VERIFY = 3
EXIT_SEARCH = 4


class ParseFailure(Exception):
    pass


def _vec(v) -> str:
    return "(" + ",".join(str(c) for c in v) + ")"


def _parse_type(text):
    try:
        a, b = (int(p) for p in text.split(","))
        return k0.get_type((a, b))
    except (ValueError, HyperfinError) as exc:
        raise ParseFailure(f"bad type {text!r}: {exc}")


def _ints(args):
    try:
        return [int(a) for a in args]
    except ValueError as exc:
        raise ParseFailure(str(exc))


def cmd_k0(args) -> int:
    t = _parse_type(args.type)
    op = args.op
    vals = _ints(args.values)
    if op == "radical":
        print(_vec(t.h))
        return EXIT_OK
    if op in ("defect", "q", "classify", "coxeter"):
        if len(vals) != 2:
            raise ParseFailure(f"{op} expects 2 integers")
        x = (vals[0], vals[1])
        if op == "defect":
            print(k0.defect(t, x))
        elif op == "q":
            print(k0.quadratic_form(t, x))
        elif op == "classify":
            print(k0.classify_k0(t, x).value)
        else:
            print(_vec(k0.coxeter(t, x)))
        return EXIT_OK
    if op == "euler":
        if len(vals) != 4:
            raise ParseFailure("euler expects 4 integers")
        print(k0.euler_form(t, (vals[0], vals[1]), (vals[2], vals[3])))
        return EXIT_OK
    raise ParseFailure(f"unknown k0 operation {op!r}")


def _random_module(field, d1: int, d2: int, seed: int) -> KroneckerModule:
    rng = random.Random(seed)
    if field.is_prime:
        draw = lambda: rng.randrange(field.p)
    else:
        draw = lambda: rng.randint(-4, 4)
    a = Matrix.from_rows(field, [[draw() for _ in range(d2)] for _ in range(d1)],
                         nrows=d1, ncols=d2)
    b = Matrix.from_rows(field, [[draw() for _ in range(d2)] for _ in range(d1)],
                         nrows=d1, ncols=d2)
    return KroneckerModule(field, a, b)


def load_module(source: str, field_name: str, seed: int) -> KroneckerModule:
    """A module from a builtin descriptor or a JSON file path.

    Builtins: zero, preproj:n, postinj:n, regular:lam:m, random:d1,d2.
    """
    try:
        field = parse_field(field_name)
    except HyperfinError as exc:
        raise ParseFailure(str(exc))
    head, _, rest = source.partition(":")
    try:
        if source == "zero":
            return zero_module(field)
        if head == "preproj":
            return canonical(field, IsoClass.preproj(int(rest)))
        if head == "postinj":
            return canonical(field, IsoClass.postinj(int(rest)))
        if head == "regular":
            lam, _, m = rest.partition(":")
            return canonical(field, IsoClass.regular(
                point_from_scalar(field, field.of(lam)), int(m)))
        if head == "random":
            d1, d2 = (int(p) for p in rest.split(","))
            return _random_module(field, d1, d2, seed)
    except (ValueError, HyperfinError) as exc:
        raise ParseFailure(f"bad builtin {source!r}: {exc}")
    try:
        with open(source) as fh:
            obj = json.load(fh)
        return KroneckerModule.from_json(obj)
    except (OSError, ValueError, KeyError, HyperfinError) as exc:
        raise ParseFailure(f"cannot load module from {source!r}: {exc}")


def _emit(obj, out_path):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_instance(source: str, epsilon: str, field_name: str, seed: int):
    mod = load_module(source, field_name, seed)
    try:
        eps = engine.parse_epsilon(epsilon)
    except HyperfinError as exc:
        raise ParseFailure(str(exc))
    cert = engine.hyperfinite_decompose(mod, eps)
    report = engine.verify_certificate(mod, cert)
    return mod, cert, report


def cmd_decompose(args) -> int:
    try:
        mod, cert, report = _run_instance(args.module, args.epsilon,
                                          args.field, args.seed)
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    _emit(cert.to_json(), args.out)
    if not report["pass"]:
        print(f"verification failed: {report}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    mod = load_module(args.module, args.field, args.seed)
    try:
        with open(args.certificate) as fh:
            obj = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ParseFailure(f"cannot load certificate: {exc}")
    try:
        cert = engine.Certificate.from_json(obj, mod)
    except (HyperfinError, ValueError, KeyError, IndexError, TypeError) as exc:
        print(f"certificate rejected: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    report = engine.verify_certificate(mod, cert)
    report["stored_dims_match"] = (int(obj.get("dimX", mod.dim)) == mod.dim
                                   and int(obj.get("dimY", cert.dim_y)) == cert.dim_y)
    report["pass"] = report["pass"] and report["stored_dims_match"]
    _emit(report, args.out)
    return EXIT_OK if report["pass"] else EXIT_VERIFY


def cmd_suite(args) -> int:
    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ParseFailure(f"cannot load config: {exc}")
    seed = args.seed if args.seed is not None else int(config.get("seed", 0))
    instances = config.get("instances", [])
    records = []
    worst = EXIT_OK
    for idx, inst in enumerate(instances):
        source = inst["module"]
        epsilon = inst.get("epsilon", "1/4")
        field_name = inst.get("field", "F5")
        inst_seed = seed + idx
        try:
            mod, cert, report = _run_instance(source, epsilon, field_name,
                                              inst_seed)
        except SearchExhausted:
            records.append({"index": idx, "module": source, "pass": False,
                            "error": "search exhausted"})
            worst = max(worst, EXIT_SEARCH)
            continue
        records.append({
            "index": idx,
            "module": source,
            "fingerprint": cert.input_fingerprint,
            "epsilon": str(cert.epsilon),
            "dims": list(mod.dim_vector),
            "dimY": cert.dim_y,
            "iterations": cert.iterations,
            "max_summand": cert.max_summand_dim(),
            "pass": bool(report["pass"]),
        })
        if not report["pass"]:
            worst = max(worst, EXIT_VERIFY)
    passed = sum(1 for r in records if r["pass"])
    report = {
        "instances": records,
        "summary": {"total": len(records), "passed": passed},
    }
    _emit(report, args.out)
    return worst


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperfin",
                                description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=None,
                   help="random seed (env HYPERFIN_SEED overrides)")
    sub = p.add_subparsers(dest="command", required=True)

    pk = sub.add_parser("k0", help="lattice queries on rank-two types")
    pk.add_argument("--type", required=True, help="2,2 or 1,4 or 4,1")
    pk.add_argument("op", help="euler | q | defect | coxeter | classify | radical")
    pk.add_argument("values", nargs="*", help="integer vector entries")
    pk.set_defaults(func=cmd_k0)

    pd = sub.add_parser("decompose", help="certified decomposition of a module")
    pd.add_argument("--module", required=True,
                    help="JSON file or builtin (zero, preproj:n, postinj:n, "
                         "regular:lam:m, random:d1,d2)")
    pd.add_argument("--epsilon", required=True, help="rational like 1/4")
    pd.add_argument("--field", default="Q", help="Q or Fp (builtins only)")
    pd.add_argument("--out", default=None, help="certificate output path")
    pd.set_defaults(func=cmd_decompose)

    pv = sub.add_parser("verify", help="re-check a certificate")
    pv.add_argument("--module", required=True)
    pv.add_argument("--field", default="Q")
    pv.add_argument("--out", default=None, help="report output path")
    pv.add_argument("certificate", help="certificate JSON path")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("suite", help="run a batch of instances from a config")
    ps.add_argument("config", help="suite config JSON path")
    ps.add_argument("--out", default=None, help="report output path")
    ps.add_argument("--jobs", type=int, default=1,
                    help="accepted for compatibility; runs sequentially")
    ps.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else 0
    env_seed = os.environ.get("HYPERFIN_SEED")
    if env_seed is not None:
        args.seed = int(env_seed)
    elif args.seed is None:
        args.seed = 0
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SearchExhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except HyperfinError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
