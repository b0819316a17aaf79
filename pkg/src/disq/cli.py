"""Command-line experiment runner.

Subcommands:
  order      -- run order-finding shots and emit per-shot records + a summary
  factor     -- run the factoring driver against an odd composite modulus
  resources  -- print the analytic resource comparison (single L or a sweep)

JSON output is one object per line (shot records, then one summary object),
every object carrying "schema": 1.  CSV output is the aggregate row.  A fixed
--seed (or the DISQ_SEED environment variable as fallback) makes output
byte-identical across runs, including with --workers > 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import protocol, resources
from .protocol import (
    ENGINE_DISTRIBUTED,
    ENGINE_MONOLITHIC,
    MODE_JOINT,
    MODE_SEQUENTIAL,
    ProtocolParams,
)
from .statevec import CapacityError

EXIT_OK = 0
EXIT_FAILURE = 1  # capacity exceeded, factoring gave up, etc.
EXIT_USAGE = 2

CSV_SUMMARY_COLUMNS = ["N", "a", "epsilon", "shots", "success-rate", "theorem2-bound", "mean-error"]


class UsageError(Exception):
    pass


def _parse_epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse epsilon {text!r}: {exc}") from None
    if not 0 < eps < 1:
        raise UsageError(f"epsilon must be in (0, 1), got {eps}")
    return eps


def _resolve_seed(seed: int | None) -> int | None:
    if seed is not None:
        return seed
    env = os.environ.get("DISQ_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"DISQ_SEED must be an integer, got {env!r}") from None
    return None


def _pick_base(N: int, rng: np.random.Generator) -> int:
    coprime = [a for a in range(1, N) if math.gcd(a, N) == 1]
    return int(coprime[rng.integers(0, len(coprime))])


def _smallest_prime_factor(n: int) -> int | None:
    f = 2
    while f * f <= n:
        if n % f == 0:
            return f
        f += 1
    return None


def _check_factorable(N: int) -> None:
    if N < 3 or N % 2 == 0:
        raise UsageError(f"N must be odd and >= 3, got {N}")
    spf = _smallest_prime_factor(N)
    if spf is None:
        raise UsageError(f"N={N} is prime; nothing to factor")
    power = spf
    while power < N:
        power *= spf
    if power == N:
        raise UsageError(f"N={N} is a prime power ({spf}^k); use a root-finding shortcut")


def _open_output(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _summary_csv(summary: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_SUMMARY_COLUMNS)
    writer.writerow(
        [
            summary["N"],
            summary["a"],
            summary["epsilon"],
            summary["shots"],
            summary["success_rate"],
            summary["theorem2_bound"],
            summary["mean_error"],
        ]
    )
    return buf.getvalue()


def cmd_order(args: argparse.Namespace) -> int:
    epsilon = _parse_epsilon(args.epsilon)
    seed = _resolve_seed(args.seed)
    if args.N < 2:
        raise UsageError(f"N must be >= 2, got {args.N}")
    if args.shots < 1:
        raise UsageError(f"shots must be >= 1, got {args.shots}")
    a = args.a
    if a is None:
        a = _pick_base(args.N, np.random.default_rng(seed))
    if not 1 <= a < args.N or math.gcd(a, args.N) != 1:
        raise UsageError(f"need 1 <= a < N with gcd(a, N) = 1, got a={a}, N={args.N}")
    params = ProtocolParams.derive(args.N, a, epsilon)
    records = protocol.run_shots(
        params,
        args.shots,
        seed=seed,
        engine=args.engine,
        mode=args.mode,
        faithful_teleport=not args.relabel_teleport,
        workers=args.workers,
    )
    summary = protocol.summarize(params, records)
    out, close = _open_output(args.output)
    try:
        if args.format == "json":
            for record in records:
                print(json.dumps(record.to_json_dict(), separators=(",", ":")), file=out)
            print(json.dumps(summary, separators=(",", ":")), file=out)
        else:
            out.write(_summary_csv(summary))
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_factor(args: argparse.Namespace) -> int:
    epsilon = _parse_epsilon(args.epsilon)
    seed = _resolve_seed(args.seed)
    _check_factorable(args.N)
    rng = np.random.default_rng(seed if seed is None else [seed, 0x0F])
    result = protocol.run_shor_factoring(
        args.N,
        epsilon,
        rng,
        max_attempts=args.max_attempts,
        engine=args.engine,
        mode=args.mode,
    )
    if result.factor is None:
        print(
            f"no factor of {args.N} found in {result.attempt_count} attempt(s)",
            file=sys.stderr,
        )
        return EXIT_FAILURE
    print(
        json.dumps(
            {
                "schema": 1,
                "type": "factor",
                "N": args.N,
                "factor": result.factor,
                "cofactor": args.N // result.factor,
                "attempts": result.attempt_count,
            },
            separators=(",", ":"),
        )
    )
    return EXIT_OK


def _parse_sweep(spec: str) -> range:
    try:
        start, stop, step = (int(part) for part in spec.split(":"))
    except ValueError:
        raise UsageError(f"--sweep-L expects start:stop:step, got {spec!r}") from None
    if start < 2 or step < 1 or stop < start:
        raise UsageError(f"bad sweep range {spec!r}")
    return range(start, stop + 1, step)


def cmd_resources(args: argparse.Namespace) -> int:
    epsilon = _parse_epsilon(args.epsilon)
    out, close = _open_output(args.output)
    try:
        if args.sweep_L:
            writer = csv.writer(out)
            writer.writerow(
                [
                    "L",
                    "epsilon",
                    "qubits-monolithic",
                    "qubits-node-A",
                    "qubits-node-B",
                    "qubit-savings",
                    "ctrl-len-monolithic",
                    "ctrl-len-node-A",
                    "ctrl-len-node-B",
                    "classical-bits-distributed",
                ]
            )
            for L in _parse_sweep(args.sweep_L):
                if L % 2:
                    continue
                rep = resources.account(L, epsilon, args.b_constant)
                writer.writerow(
                    [
                        rep.L,
                        str(rep.epsilon),
                        rep.qubits_monolithic,
                        rep.qubits_node_a,
                        rep.qubits_node_b,
                        rep.qubit_savings,
                        rep.ctrl_len_monolithic,
                        rep.ctrl_len_node_a,
                        rep.ctrl_len_node_b,
                        rep.classical_bits_distributed,
                    ]
                )
            return EXIT_OK
        if args.L is None:
            raise UsageError("resources needs --L or --sweep-L")
        try:
            rep = resources.account(args.L, epsilon, args.b_constant)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        print(rep.to_json() if args.format == "json" else rep.table(), file=out)
        return EXIT_OK
    finally:
        if close:
            out.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disq",
        description="Two-node order finding on a seeded state-vector simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    order = sub.add_parser("order", help="run order-finding shots")
    order.add_argument("--N", type=int, required=True, help="modulus")
    order.add_argument("--a", type=int, default=None, help="base (random coprime if omitted)")
    order.add_argument("--epsilon", default="1/4", help="failure budget, e.g. 0.25 or 1/4")
    order.add_argument("--shots", type=int, default=100)
    order.add_argument("--seed", type=int, default=None, help="falls back to DISQ_SEED")
    order.add_argument(
        "--engine", choices=[ENGINE_MONOLITHIC, ENGINE_DISTRIBUTED], default=ENGINE_DISTRIBUTED
    )
    order.add_argument("--mode", choices=[MODE_SEQUENTIAL, MODE_JOINT], default=MODE_SEQUENTIAL)
    order.add_argument("--format", choices=["json", "csv"], default="json")
    order.add_argument("--output", default="-", help="output path, '-' for stdout")
    order.add_argument("--workers", type=int, default=1)
    order.add_argument(
        "--relabel-teleport",
        action="store_true",
        help="skip the faithful teleport simulation (accounting only)",
    )
    order.set_defaults(handler=cmd_order)

    factor = sub.add_parser("factor", help="factor an odd composite modulus")
    factor.add_argument("--N", type=int, required=True)
    factor.add_argument("--epsilon", default="1/4")
    factor.add_argument("--seed", type=int, default=None, help="falls back to DISQ_SEED")
    factor.add_argument(
        "--engine", choices=[ENGINE_MONOLITHIC, ENGINE_DISTRIBUTED], default=ENGINE_DISTRIBUTED
    )
    factor.add_argument("--mode", choices=[MODE_SEQUENTIAL, MODE_JOINT], default=MODE_SEQUENTIAL)
    factor.add_argument("--max-attempts", type=int, default=10)
    factor.set_defaults(handler=cmd_factor)

    res = sub.add_parser("resources", help="analytic resource comparison")
    res.add_argument("--L", type=int, default=None, help="even modulus bit length")
    res.add_argument("--epsilon", default="1/4")
    res.add_argument("--b-constant", type=int, default=0, help="auxiliary qubits per side")
    res.add_argument("--sweep-L", default=None, help="start:stop:step, emits CSV rows")
    res.add_argument("--format", choices=["table", "json"], default="table")
    res.add_argument("--output", default="-", help="output path, '-' for stdout")
    res.set_defaults(handler=cmd_resources)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"error: {exc} (shrink N or epsilon)", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
