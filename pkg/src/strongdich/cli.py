"""Command-line surface: strong | qrig | tom | lattice | quasipolarities | verify.

Every flag can also be supplied through an environment variable with the
``STRONGDICH_`` prefix (``STRONGDICH_CACHE_DIR``, ``STRONGDICH_JOBS``, ...).
Exit codes: 0 success, 1 verification or internal-consistency failure,
2 usage or precondition violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .affine import euler_phi, quasipolarities
from .cache import load_or_build
from .dichotomy import (
    DEFAULT_BF_CUTOFF,
    StrongCountReport,
    strong_count_bruteforce,
    strong_count_formula,
    verify_theorem,
)
from .errors import BudgetExceeded, InternalCheckError, OrderCapExceeded
from .inventory import (
    DEFAULT_BRUTEFORCE_CUTOFF,
    eval_at_minus_one,
    qrig_bruteforce,
    qrig_via_moebius,
    qrig_via_tom,
)
from .perms import DEFAULT_MAX_ORDER

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _env(name: str) -> str | None:
    return os.environ.get(f"STRONGDICH_{name}")


def _env_int(name: str) -> int | None:
    raw = _env(name)
    return int(raw) if raw is not None else None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strongdich",
        description=(
            "Exact enumeration of strong dichotomy classes of Z/2kZ under the "
            "affine group, and of the rigid pattern-inventory polynomial."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("text", "json", "csv"),
        default=_env("FORMAT") or "text",
        help="output format (default: text)",
    )
    common.add_argument(
        "--cache-dir",
        type=Path,
        default=Path(_env("CACHE_DIR")) if _env("CACHE_DIR") else None,
        help="directory for the lattice/marks cache (default: user cache dir)",
    )
    common.add_argument(
        "--jobs",
        type=int,
        default=_env_int("JOBS") or 1,
        help="worker count for parallel scans (default: 1)",
    )
    common.add_argument(
        "--max-order",
        type=int,
        default=_env_int("MAX_ORDER") or DEFAULT_MAX_ORDER,
        help=f"group/subgroup-enumeration order cap (default: {DEFAULT_MAX_ORDER})",
    )
    common.add_argument(
        "--bf-cutoff",
        type=int,
        default=_env_int("BF_CUTOFF"),
        help=(
            "brute-force budget: max k for 'strong'/'verify' "
            f"(default {DEFAULT_BF_CUTOFF}), max n for 'qrig' "
            f"(default {DEFAULT_BRUTEFORCE_CUTOFF})"
        ),
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p_strong = sub.add_parser(
        "strong", parents=[common], help="count strong dichotomy classes s(2k)"
    )
    p_strong.add_argument("--k", type=int, default=_env_int("K"), help="half-modulus k")
    p_strong.add_argument(
        "--method",
        choices=("formula", "bruteforce", "both"),
        default=_env("METHOD") or "formula",
    )
    p_strong.add_argument(
        "--allow-even",
        action="store_true",
        help="let the brute-force method explore even k (outside the theorem)",
    )

    p_qrig = sub.add_parser(
        "qrig", parents=[common], help="rigid pattern-inventory polynomial Q_rig"
    )
    p_qrig.add_argument("--k", type=int, default=None, help="half-modulus (n = 2k)")
    p_qrig.add_argument("--n", type=int, default=None, help="modulus n (even)")

    p_tom = sub.add_parser(
        "tom", parents=[common], help="table of marks of Aff(Z/nZ)"
    )
    p_tom.add_argument("--n", type=int, default=_env_int("N"), help="modulus n")

    p_lat = sub.add_parser(
        "lattice", parents=[common], help="subgroup class table of Aff(Z/nZ)"
    )
    p_lat.add_argument("--n", type=int, default=_env_int("N"), help="modulus n")

    p_quasi = sub.add_parser(
        "quasipolarities", parents=[common], help="fixed-point-free affine involutions"
    )
    p_quasi.add_argument("--n", type=int, default=_env_int("N"), help="modulus n (even)")

    p_verify = sub.add_parser(
        "verify", parents=[common], help="machine-check Q_rig(-1) = -s(2k)"
    )
    p_verify.add_argument("--k", type=int, default=_env_int("K"), help="half-modulus k (odd)")

    return parser


def _require(value, flag: str):
    if value is None:
        raise ValueError(f"missing required option {flag}")
    return value


def _emit(args, *, text: str, obj: dict, csv_rows: list[list[str]]) -> None:
    if args.format == "json":
        print(json.dumps(obj, indent=2))
    elif args.format == "csv":
        print("\n".join(",".join(row) for row in csv_rows))
    else:
        print(text)


def _cmd_strong(args) -> int:
    k = _require(args.k, "--k")
    cutoff = args.bf_cutoff if args.bf_cutoff is not None else DEFAULT_BF_CUTOFF
    timings: dict[str, float] = {}
    s_formula = s_bf = None
    if args.method in ("formula", "both"):
        t0 = time.perf_counter()
        s_formula = strong_count_formula(
            k, cache_dir=args.cache_dir, max_order=args.max_order
        )
        timings["formula"] = time.perf_counter() - t0
    if args.method in ("bruteforce", "both"):
        t0 = time.perf_counter()
        s_bf = strong_count_bruteforce(
            k,
            allow_even=args.allow_even,
            cutoff=cutoff,
            jobs=args.jobs,
            max_order=args.max_order,
        )
        timings["bruteforce"] = time.perf_counter() - t0
    if s_formula is not None and s_bf is not None and s_formula != s_bf:
        raise InternalCheckError(
            f"methods disagree: formula {s_formula}, brute force {s_bf}"
        )
    s_value = s_formula if s_formula is not None else s_bf
    report = StrongCountReport(
        k=k,
        s_value=s_value,
        method=args.method,
        group_order=2 * k * euler_phi(2 * k),
        s_bruteforce=s_bf,
        timings=timings,
    )
    lines = ["k\ts(2k)", f"{k}\t{s_value}"]
    if args.method == "both":
        lines.append("# formula and brute force agree")
    if args.method == "bruteforce" and k % 2 == 0:
        lines.append("# even k: exploratory count, outside the proven theorem")
    _emit(
        args,
        text="\n".join(lines),
        obj=report.to_json_dict(),
        csv_rows=[["k", "s"], [str(k), str(s_value)]],
    )
    return EXIT_OK


def _cmd_qrig(args) -> int:
    if (args.k is None) == (args.n is None):
        env_k, env_n = _env_int("K"), _env_int("N")
        if args.k is None and args.n is None and (env_k is None) != (env_n is None):
            args.k, args.n = env_k, env_n
        else:
            raise ValueError("give exactly one of --k and --n")
    n = args.n if args.n is not None else 2 * args.k
    cutoff = args.bf_cutoff if args.bf_cutoff is not None else DEFAULT_BRUTEFORCE_CUTOFF
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    data = load_or_build(n, cache_dir=args.cache_dir, max_order=args.max_order)
    timings["class_data"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    q_moebius = qrig_via_moebius(n, data=data, method="classes")
    q_tom = qrig_via_tom(n, data=data)
    timings["inventory"] = time.perf_counter() - t0
    q_bf = None
    if n <= cutoff:
        t0 = time.perf_counter()
        q_bf = qrig_bruteforce(n, cutoff=cutoff, jobs=args.jobs, max_order=args.max_order)
        timings["bruteforce"] = time.perf_counter() - t0

    if q_moebius != q_tom or (q_bf is not None and q_bf != q_moebius):
        raise InternalCheckError("the inventory routes disagree")
    if not q_moebius.is_palindromic(n):
        raise InternalCheckError("inventory polynomial is not palindromic")

    coeffs = [q_moebius.coefficient(d) for d in range(n + 1)]
    value = eval_at_minus_one(q_moebius)
    obj = {
        "n": str(n),
        "k": str(n // 2),
        "coefficients": [str(c) for c in coeffs],
        "qrig_at_minus_one": str(value),
        "paths": {
            "moebius": [str(c) for c in coeffs],
            "tom": [str(q_tom.coefficient(d)) for d in range(n + 1)],
            "bruteforce": None
            if q_bf is None
            else [str(q_bf.coefficient(d)) for d in range(n + 1)],
        },
        "palindromic": True,
        "timing_seconds": {k: round(v, 6) for k, v in timings.items()},
    }
    text = "\n".join(
        [
            f"# Q_rig over Z/{n}Z, coefficients of x^0..x^{n}",
            " ".join(str(c) for c in coeffs),
            f"Q_rig(-1) = {value}",
        ]
    )
    csv_rows = [["degree", "coefficient"]] + [[str(d), str(c)] for d, c in enumerate(coeffs)]
    _emit(args, text=text, obj=obj, csv_rows=csv_rows)
    return EXIT_OK


def _cmd_tom(args) -> int:
    n = _require(args.n, "--n")
    data = load_or_build(n, cache_dir=args.cache_dir, max_order=args.max_order)
    desc = [list(reversed(row)) for row in reversed(data.marks)]
    orders_desc = [str(rec.order) for rec in reversed(data.classes)]
    obj = {
        "n": str(n),
        "group_order": str(data.group_order),
        "convention": "descending (|G_1| >= ... >= |G_N| = 1)",
        "class_orders": orders_desc,
        "marks": [[str(x) for x in row] for row in desc],
    }
    lines = [f"# table of marks of Aff(Z/{n}Z), convention: descending "
             f"(|G_1| >= ... >= |G_N| = 1)"]
    lines += [" ".join(str(x) for x in row) for row in desc]
    csv_rows = [[str(x) for x in row] for row in desc]
    _emit(args, text="\n".join(lines), obj=obj, csv_rows=csv_rows)
    return EXIT_OK


def _cmd_lattice(args) -> int:
    n = _require(args.n, "--n")
    data = load_or_build(n, cache_dir=args.cache_dir, max_order=args.max_order)
    obj = {
        "n": str(n),
        "group_order": str(data.group_order),
        "num_classes": str(data.num_classes),
        "total_subgroups": str(sum(rec.length for rec in data.classes)),
        "convention": data.convention,
        "classes": [
            {
                "order": str(rec.order),
                "length": str(rec.length),
                "mu": str(rec.mu),
                "orbit_sizes": [str(s) for s in rec.orbit_sizes],
                "in_k0": rec.in_k0,
            }
            for rec in data.classes
        ],
    }
    lines = [
        f"# subgroup classes of Aff(Z/{n}Z) (ascending), "
        f"{obj['total_subgroups']} subgroups in {data.num_classes} classes",
        "class\torder\tlength\tmu\torbit_sizes",
    ]
    for i, rec in enumerate(data.classes):
        sizes = ",".join(str(s) for s in rec.orbit_sizes)
        lines.append(f"{i}\t{rec.order}\t{rec.length}\t{rec.mu}\t{sizes}")
    csv_rows = [["class", "order", "length", "mu", "orbit_sizes"]] + [
        [str(i), str(rec.order), str(rec.length), str(rec.mu),
         " ".join(str(s) for s in rec.orbit_sizes)]
        for i, rec in enumerate(data.classes)
    ]
    _emit(args, text="\n".join(lines), obj=obj, csv_rows=csv_rows)
    return EXIT_OK


def _cmd_quasipolarities(args) -> int:
    n = _require(args.n, "--n")
    qs = quasipolarities(n)
    obj = {
        "n": str(n),
        "count": str(len(qs)),
        "quasipolarities": [{"u": str(q.translation), "v": str(q.multiplier)} for q in qs],
    }
    lines = [f"# quasipolarities of Aff(Z/{n}Z) as (u, v) pairs"]
    lines += [f"({q.translation}, {q.multiplier})" for q in qs]
    csv_rows = [["u", "v"]] + [[str(q.translation), str(q.multiplier)] for q in qs]
    _emit(args, text="\n".join(lines), obj=obj, csv_rows=csv_rows)
    return EXIT_OK


def _cmd_verify(args) -> int:
    k = _require(args.k, "--k")
    cutoff = args.bf_cutoff if args.bf_cutoff is not None else DEFAULT_BF_CUTOFF
    report = verify_theorem(
        k,
        cache_dir=args.cache_dir,
        max_order=args.max_order,
        bf_cutoff=cutoff,
        jobs=args.jobs,
    )
    verdict = "holds" if report.theorem_holds else "FAILS"
    lines = [
        f"k = {k} (n = {2 * k})",
        f"s(2k)      = {report.s_value}",
        f"Q_rig(-1)  = {report.qrig_at_minus_one}",
    ]
    if report.s_bruteforce is not None:
        lines.append(f"brute force = {report.s_bruteforce}")
    lines.append(f"theorem Q_rig(-1) = -s(2k): {verdict}")
    csv_rows = [
        ["k", "s", "qrig_at_minus_one", "theorem_holds"],
        [str(k), str(report.s_value), str(report.qrig_at_minus_one),
         str(bool(report.theorem_holds)).lower()],
    ]
    _emit(args, text="\n".join(lines), obj=report.to_json_dict(), csv_rows=csv_rows)
    return EXIT_OK if report.theorem_holds else EXIT_FAILURE


_COMMANDS = {
    "strong": _cmd_strong,
    "qrig": _cmd_qrig,
    "tom": _cmd_tom,
    "lattice": _cmd_lattice,
    "quasipolarities": _cmd_quasipolarities,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OrderCapExceeded, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalCheckError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
