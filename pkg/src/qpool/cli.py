"""Command-line front end: pool, compat, bloch, verify, random."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness, linalg, measurement, pooling, qubit
from .errors import IncompatibleStatesError, QpoolError

# Human-authored files carry fewer digits than internally generated ones.
FILE_DENSITY_TOL = 1e-8

INCOMPATIBLE_MESSAGE = "incompatible states: Tr[ρAρB] ≈ 0"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INCOMPATIBLE = 3


def _fmt17(x: float) -> str:
    # 17 significant digits round-trip any double exactly.
    return format(float(x), ".17g")


def _matrix_rows_json(m: np.ndarray) -> str:
    rows = []
    for row in m:
        rows.append(
            "[" + ",".join(f"[{_fmt17(e.real)},{_fmt17(e.imag)}]" for e in row) + "]"
        )
    return "[" + ",".join(rows) + "]"


def matrix_file_text(m: np.ndarray) -> str:
    return f'{{"dim":{m.shape[0]},"matrix":{_matrix_rows_json(m)}}}\n'


def povm_file_text(povm: measurement.Povm) -> str:
    elements = ",".join(_matrix_rows_json(e) for e in povm.elements)
    return f'{{"dim":{povm.dim},"elements":[{elements}]}}\n'


def _rows_to_matrix(rows, dim: int, what: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim:
        raise QpoolError(f"{what} must have {dim} rows")
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise QpoolError(f"{what} row {i} must have {dim} entries")
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) for v in entry)
            ):
                raise QpoolError(
                    f"{what} entry ({i},{j}) must be a [re, im] number pair"
                )
            out[i, j] = complex(entry[0], entry[1])
    return out


def parse_matrix_payload(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "matrix" not in obj:
        raise QpoolError('matrix file must be {"dim": ..., "matrix": ...}')
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise QpoolError(f"dim must be a positive integer, got {dim!r}")
    return _rows_to_matrix(obj["matrix"], dim, "matrix")


def parse_povm_payload(obj) -> measurement.Povm:
    if not isinstance(obj, dict) or "dim" not in obj or "elements" not in obj:
        raise QpoolError('POVM file must be {"dim": ..., "elements": ...}')
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise QpoolError(f"dim must be a positive integer, got {dim!r}")
    elements = obj["elements"]
    if not isinstance(elements, list) or not elements:
        raise QpoolError("elements must be a non-empty list of matrices")
    return measurement.validate_povm(
        [_rows_to_matrix(rows, dim, f"element {k}") for k, rows in enumerate(elements)]
    )


def load_density(path: str) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    m = parse_matrix_payload(obj)
    return linalg.validate_density(m, tol=FILE_DENSITY_TOL)


def load_povm(path: str) -> measurement.Povm:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return parse_povm_payload(obj)


def _emit(obj: dict, pretty: bool) -> None:
    if pretty:
        print(json.dumps(obj, indent=2))
    else:
        print(json.dumps(obj))


def _parse_bloch(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise QpoolError(f"expected X,Y,Z with three components, got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise QpoolError(f"bad Bloch component in {text!r}") from exc


def _parse_dims(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError as exc:
        raise QpoolError(f"expected LO..HI or a single integer, got {text!r}") from exc
    if lo_i < 2 or hi_i < lo_i:
        raise QpoolError(f"bad dimension range {text!r}")
    return lo_i, hi_i


def cmd_pool(args) -> int:
    if len(args.inputs) < 2:
        raise QpoolError("pooling needs at least two input files")
    states = [load_density(p) for p in args.inputs]
    if args.mode == "ordered":
        report = pooling.pool_ordered_multi(states)
    else:
        report = pooling.pool_symmetric_multi(states, norm_mode=args.norm)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(matrix_file_text(report.pooled))
    payload = {"compatibility": report.compatibility}
    if len(states) >= 3:
        payload["norm_discrepancy"] = report.norm_discrepancy
    _emit(payload, args.pretty)
    return EXIT_OK


def cmd_compat(args) -> int:
    a = load_density(args.file_a)
    b = load_density(args.file_b)
    print(f"{pooling.compatibility(a, b):.15f}")
    return EXIT_OK


def cmd_bloch(args) -> int:
    a = _parse_bloch(args.a)
    b = _parse_bloch(args.b)
    weights = qubit.bloch_weights(a, b)
    pooled = qubit.pool_bloch(a, b)
    _emit(
        {
            "pooled": [float(x) for x in pooled],
            "alpha": weights.alpha,
            "beta": weights.beta,
            "compatibility": 0.5 * (1.0 + float(np.dot(a, b))),
        },
        args.pretty,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise QpoolError(f"trials must be >= 1, got {args.trials}")
    lo, hi = _parse_dims(args.dims)
    dims = range(lo, hi + 1)
    reports: dict[str, harness.VerificationReport] = {}
    if args.suite in ("two", "all"):
        reports["two"] = harness.verify_two_observer(
            args.trials, (lo, hi), args.tol, args.seed
        )
    if args.suite in ("commuting", "all"):
        reports["commuting"] = harness.merge_reports(
            harness.verify_commuting_reduction(args.trials, d, args.tol, args.seed + d)
            for d in dims
        )
    if args.suite in ("three", "all"):
        reports["three"] = harness.merge_reports(
            harness.verify_three_observer(args.trials, d, args.seed + d, tol=args.tol)
            for d in dims
        )
    if args.suite == "all":
        payload = {name: r.as_dict() for name, r in reports.items()}
    else:
        payload = reports[args.suite].as_dict()
    _emit(payload, args.pretty)
    failed = any(r.failures for r in reports.values())
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def cmd_random(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "state":
        rank = args.rank if args.rank is not None else args.dim
        m = harness.random_density(args.dim, rank, rng)
        text = matrix_file_text(m)
    else:
        outcomes = args.outcomes if args.outcomes is not None else 2
        povm = harness.random_povm(args.dim, outcomes, rng)
        text = povm_file_text(povm)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpool",
        description="Pool independent observers' quantum states of knowledge.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_pool = sub.add_parser("pool", help="pool two or more states from files")
    p_pool.add_argument("--mode", choices=("ordered", "symmetric"), required=True)
    p_pool.add_argument(
        "--in", dest="inputs", nargs="+", required=True, metavar="FILE",
        help="input state files, in measurement order for --mode ordered",
    )
    p_pool.add_argument(
        "--norm", choices=pooling.NORM_MODES, default="trace",
        help="denominator for symmetric pooling of three or more states",
    )
    p_pool.add_argument("--out", required=True, metavar="FILE")
    p_pool.add_argument("--pretty", action="store_true")
    p_pool.set_defaults(func=cmd_pool)

    p_compat = sub.add_parser("compat", help="print the overlap of two states")
    p_compat.add_argument("file_a")
    p_compat.add_argument("file_b")
    p_compat.set_defaults(func=cmd_compat)

    p_bloch = sub.add_parser("bloch", help="pool two qubit Bloch vectors")
    p_bloch.add_argument("--a", required=True, metavar="X,Y,Z")
    p_bloch.add_argument("--b", required=True, metavar="X,Y,Z")
    p_bloch.add_argument("--pretty", action="store_true")
    p_bloch.set_defaults(func=cmd_bloch)

    p_verify = sub.add_parser("verify", help="run randomized oracle sweeps")
    p_verify.add_argument(
        "--suite", choices=("two", "commuting", "three", "all"), default="all"
    )
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--dims", default="2..4", metavar="LO..HI")
    p_verify.add_argument("--tol", type=float, default=1e-10)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--pretty", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_random = sub.add_parser("random", help="write a random state or POVM file")
    p_random.add_argument("kind", choices=("state", "povm"))
    p_random.add_argument("--dim", type=int, required=True)
    p_random.add_argument("--rank", type=int, default=None)
    p_random.add_argument("--outcomes", type=int, default=None)
    p_random.add_argument("--seed", type=int, default=0)
    p_random.add_argument("--out", required=True, metavar="FILE")
    p_random.set_defaults(func=cmd_random)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IncompatibleStatesError:
        print(INCOMPATIBLE_MESSAGE, file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except QpoolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
