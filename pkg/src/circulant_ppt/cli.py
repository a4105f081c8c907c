"""Command-line front end.

Subcommands: ``check``, ``threshold``, ``sweep``, ``oracle`` and ``export``.
Every JSON report starts with a header carrying the tool version, seed and
tolerances, so a run can be repeated from its own output.

Exit status: ``check`` returns 0 when the state is PPT (under every
nontrivial mask, or under the one requested), 1 when it is not; ``oracle``
returns 0 iff every deviation is within tolerance.  Any error gives 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .harness import BISECT_XTOL, WORKERS_ENV, grid_points, oracle_schemes, oracle_suite, parse_grid, sweep, zoo_threshold
from .linalg import HERMITIAN_RTOL, PSD_RTOL
from .ppt import ORACLE_TOL, all_masks, ppt_check_all
from .statefile import VERSION as STATE_VERSION
from .statefile import read_state, state_to_dict
from .zoo import ZOO

REPORT_SCHEMA_VERSION = 1
MAX_D = 4
MAX_TOTAL = 256


class CliError(Exception):
    pass


def _parse_value(raw: str):
    if "," in raw:
        return tuple(_parse_value(v) for v in raw.split(",") if v)
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    return raw


def _family(name: str):
    if name not in ZOO:
        raise CliError(f"unknown zoo family {name!r}; choose from {', '.join(sorted(ZOO))}")
    return ZOO[name]


def _zoo_params(args, spec) -> dict:
    params = {}
    for item in args.param or []:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise CliError(f"--param expects k=v, got {item!r}")
        params[key] = raw if key in spec.text_params else _parse_value(raw)
    for flag in ("d", "n"):
        value = getattr(args, flag, None)
        if value is None:
            continue
        if flag not in spec.dims_params:
            raise CliError(f"family {spec.name!r} has fixed dimensions; drop --{flag}")
        params[flag] = value
    return params


def _check_limits(d: int, n: int):
    if d > MAX_D or d**n > MAX_TOTAL:
        raise CliError(f"d={d}, n={n} exceeds the limits d <= {MAX_D}, d^n <= {MAX_TOTAL}")


def _load_state(args):
    if bool(args.zoo) == bool(args.file):
        raise CliError("give exactly one of --zoo or --file")
    if args.file:
        if args.param:
            raise CliError("--param only applies to --zoo")
        state = read_state(args.file)
    else:
        spec = _family(args.zoo)
        state = spec.build(**_zoo_params(args, spec))
    _check_limits(state.dims.d, state.dims.n)
    return state


def _parse_mask(text: str, n: int) -> tuple[int, ...]:
    if len(text) != n - 1 or set(text) - {"0", "1"}:
        raise CliError(f"--mask must be {n - 1} binary digits, got {text!r}")
    return tuple(int(c) for c in text)


def _header(args) -> dict:
    return {
        "tool": "circulant-ppt",
        "version": __version__,
        "schema_version": REPORT_SCHEMA_VERSION,
        "state_file_version": STATE_VERSION,
        "command": args.command,
        "seed": getattr(args, "seed", None),
        "tolerances": {
            "psd_rtol": getattr(args, "tol", PSD_RTOL),
            "hermitian_rtol": HERMITIAN_RTOL,
            "oracle_tol": ORACLE_TOL,
            "bisect_xtol": getattr(args, "xtol", BISECT_XTOL),
        },
    }


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, result) -> None:
    _emit(args, json.dumps({"header": _header(args), "result": result}, indent=2) + "\n")


def _require_json(args):
    if getattr(args, "format", "json") != "json":
        raise CliError("CSV output is only available for sweep")


def cmd_check(args) -> int:
    _require_json(args)
    state = _load_state(args)
    n = state.dims.n
    if args.mask is not None:
        masks = [_parse_mask(args.mask, n)]
    else:
        masks = all_masks(n)
    report = ppt_check_all(state, args.tol, oracle=args.oracle, masks=masks)
    result = report.to_dict()
    if state.name:
        result["family"] = {"name": state.name, "params": _plain(state.params)}
    if args.mask is not None:
        ok = report.results[0].ppt
        result["verdict_mask"] = args.mask
    else:
        ok = report.fully_ppt
    result["ppt"] = ok
    _emit_json(args, result)
    return 0 if ok else 1


def _plain(params: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in params.items()}


def cmd_threshold(args) -> int:
    _require_json(args)
    spec = _family(args.zoo)
    param = args.vary or spec.threshold_param
    if param is None:
        raise CliError(f"family {spec.name!r} has no default threshold parameter; pass --vary")
    bracket = tuple(args.bracket) if args.bracket else spec.bracket
    if bracket is None:
        raise CliError("no default bracket for this family; pass --bracket LO HI")
    fixed = _zoo_params(args, spec)
    probe = spec.build(**fixed, **{param: bracket[0]})
    _check_limits(probe.dims.d, probe.dims.n)
    try:
        res = zoo_threshold(spec.name, param, bracket[0], bracket[1], fixed, args.tol, args.xtol)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    result = {"family": spec.name, "parameter": param, "fixed": _plain(fixed), **res.to_dict()}
    expected = spec.expected_threshold(**fixed) if param == spec.threshold_param else None
    if expected is not None:
        result["expected"] = expected
        result["error"] = abs(res.estimate - expected)
    _emit_json(args, result)
    return 0


def cmd_sweep(args) -> int:
    spec = _family(args.zoo)
    if not args.grid:
        raise CliError("sweep needs at least one --grid name=lo:hi:count")
    try:
        grids = [parse_grid(g) for g in args.grid]
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    fixed = _zoo_params(args, spec)
    points = grid_points(grids)
    for name in ("d", "n"):
        if name in spec.dims_params and any(name in p for p in points):
            raise CliError(f"{name} is a dimension; set it with --{name}, not --grid")
    dims = {**spec.defaults, **fixed}
    if "d" in spec.dims_params or "n" in spec.dims_params:
        _check_limits(int(dims.get("d", 2)), int(dims.get("n", 2)))
    rows = sweep(spec.name, points, fixed, args.tol)
    if args.format == "csv":
        buf = io.StringIO()
        cols = [g[0] for g in grids] + ["fully_ppt", "min_eigenvalue", "error"]
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        buf.write("".join(f"# {k}: {json.dumps(v)}\n" for k, v in _header(args).items()))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if row.get(k) is None else row[k]) for k in cols})
        _emit(args, buf.getvalue())
    else:
        _emit_json(args, {"family": spec.name, "fixed": _plain(fixed), "points": rows})
    return 0


def cmd_oracle(args) -> int:
    _require_json(args)
    if args.d is None or args.n is None:
        raise CliError("oracle needs --d and --n")
    _check_limits(args.d, args.n)
    if args.n < 2:
        raise CliError("oracle needs n >= 2")
    try:
        summaries = [oracle_suite(args.d, args.n, args.count, args.seed, s)
                     for s in oracle_schemes(args.n, args.scheme)]
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    result = {
        "max_deviation": max(s.max_deviation for s in summaries),
        "passed": all(s.passed for s in summaries),
        "suites": [s.to_dict() for s in summaries],
    }
    _emit_json(args, result)
    return 0 if result["passed"] else 1


def cmd_export(args) -> int:
    _require_json(args)
    if args.file:
        raise CliError("export builds from --zoo")
    state = _load_state(args)
    doc = state_to_dict(state)
    _emit(args, json.dumps(doc, indent=1) + "\n")
    return 0


def _add_source(p, with_file=True):
    p.add_argument("--zoo", help=f"zoo family ({', '.join(sorted(ZOO))})")
    p.add_argument("--param", action="append", metavar="K=V", help="family parameter (repeatable)")
    if with_file:
        p.add_argument("--file", help="state file (JSON)")
    p.add_argument("--d", type=int, help="local dimension")
    p.add_argument("--n", type=int, help="number of factors")


def _add_common(p):
    p.add_argument("--tol", type=float, default=PSD_RTOL, help="relative PSD tolerance")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=None, help="seed recorded in the report header")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circulant-ppt",
        description="PPT analysis of multipartite circulant states.",
        epilog=f"Set {WORKERS_ENV} to cap the worker pool used by sweep and oracle.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="PPT verdicts for a zoo family or a state file")
    _add_source(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--mask", help="one mask as binary digits for factors 2..n, e.g. 01")
    group.add_argument("--masks", choices=("all",), help="every mask (default)")
    p.add_argument("--oracle", action="store_true", help="also report the dense-oracle deviation")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("threshold", help="bisect a one-parameter PPT boundary")
    _add_source(p, with_file=False)
    p.add_argument("--vary", help="parameter to bisect (family default otherwise)")
    p.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--xtol", type=float, default=BISECT_XTOL, help="final bracket width")
    _add_common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", help="evaluate a family over a parameter grid")
    _add_source(p, with_file=False)
    p.add_argument("--grid", action="append", metavar="NAME=LO:HI:COUNT",
                   help="grid axis, inclusive endpoints, or NAME=v1,v2,... (repeatable)")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="cross-check block rules against the dense transpose")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--scheme", choices=("small", "sigma", "xi", "all"), default="small")
    p.add_argument("--tol", type=float, default=PSD_RTOL, help=argparse.SUPPRESS)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export", help="write a zoo state as a state file")
    _add_source(p)
    _add_common(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
