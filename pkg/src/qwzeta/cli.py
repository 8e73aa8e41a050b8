"""Command-line front end.

Subcommands: ``verify``, ``zeta``, ``figure1``, ``spectra``. Options can also
come from a plain ``key = value`` file given with ``--config``; flags on the
command line win. ``QWZETA_THREADS`` sets the default worker count.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import mahler, spectra, verify
from .graph import build_torus, decompose_1d, parse_marking, resolve_marked
from .linalg import symmetric_eigenvalues
from .operators import build_dirichlet, case2_dirichlet_kronecker, path_adjacency
from .quadrature import QuadratureSpec
from .zeta import (
    search_walk,
    zeta_1d_finite,
    zeta_1d_limit,
    zeta_case1,
    zeta_case2_finite,
    zeta_case2_limit,
    zeta_direct,
    zeta_factorized,
    zeta_nonsearch_limit,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

METHOD_ALIASES = {
    "direct": "direct",
    "factorized": "factorized",
    "closed-1d": "closed-1d",
    "thm31-finite": "closed-1d",
    "closed-case1": "closed-case1",
    "case1": "closed-case1",
    "closed-case2": "closed-case2",
    "case2": "closed-case2",
    "case2-finite": "closed-case2",
    "limit-1d": "limit-1d",
    "thm31-limit": "limit-1d",
    "limit-case2": "limit-case2",
    "case2-limit": "limit-case2",
    "limit-nonsearch": "limit-nonsearch",
    "nonsearch": "limit-nonsearch",
}

ZETA_FIELDS = ["method", "d", "L", "marking", "u_re", "u_im", "zeta_inv_re", "zeta_inv_im", "flags"]


class ConfigError(ValueError):
    pass


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("QWZETA_THREADS", "1")))
    except ValueError:
        return 1


def parse_complex_list(text: str) -> list[complex]:
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        z = complex(tok.replace("i", "j"))
        out.append(z)
    if not out:
        raise argparse.ArgumentTypeError("empty u list")
    return out


def parse_int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (inclusive stop) or a comma list."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        n = int(round((stop - start) / step)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    return [float(x) for x in text.split(",") if x]


def load_config(path: str) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value.strip().strip('"').strip("'")
    return out


def fmt(x: float) -> str:
    """Shortest repr that round-trips the double."""
    return repr(float(x))


def _writer(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


# ----------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    report = verify.run(
        args.suite,
        d=args.d,
        Ls=args.L or ((4, 5, 6, 7, 8) if args.d == 1 else (4, 6)),
        n_random=args.random_markings,
        seed=args.seed,
        us=args.u,
        tol=args.tol,
        quad_tol=args.quad_tol,
        quad_points=args.quad_points,
        max_dim=args.max_dim,
        workers=args.workers,
    )
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    fh, close = _writer(args.out)
    fh.write(text)
    if close:
        fh.close()
    failed = [c for c in report["checks"] if not c["pass"]]
    print(f"{len(report['checks']) - len(failed)}/{len(report['checks'])} checks passed", file=sys.stderr)
    return EXIT_OK if report["pass"] else EXIT_FAIL


# ------------------------------------------------------------------- zeta


def evaluate(method: str, args, u: complex):
    """Dispatch one evaluation; returns (ZetaValue, L label, marking label)."""
    d = args.d
    quad_points = args.quad_points
    if method in ("direct", "factorized", "closed-1d"):
        if args.L is None or args.marking is None:
            raise ConfigError(f"method {method} needs --L and --marking")
        L = args.L[0]
        torus = build_torus(d, L)
        marked = resolve_marked(torus, args.marking)
        label = marked.label()
        if method == "direct":
            w = search_walk(d, L, marked, max_dim=args.max_dim)
            return zeta_direct(w.W, torus.n_vertices, u), L, label
        if method == "factorized":
            return zeta_factorized(torus, marked, u), L, label
        if d != 1:
            raise ConfigError("closed-1d needs --d 1")
        return zeta_1d_finite(decompose_1d(torus, marked), u), L, label
    if method == "closed-case1":
        _require_marking(args, "checkerboard")
        return zeta_case1(d, u), "", "checkerboard"
    if method == "closed-case2":
        _require_marking(args, "half")
        N = _half_side(args)
        return zeta_case2_finite(d, N, u), 2 * N, "half"
    if method == "limit-1d":
        if args.ratios is None:
            raise ConfigError("limit-1d needs --ratios c_M,c_F,c_F'")
        q = QuadratureSpec.periodic(1, quad_points)
        return zeta_1d_limit(args.ratios, u, q), "inf", "ratios:" + ",".join(map(str, args.ratios))
    if method == "limit-case2":
        _require_marking(args, "half")
        return zeta_case2_limit(d, u, QuadratureSpec.halfangle_last(d, quad_points)), "inf", "half"
    if method == "limit-nonsearch":
        if args.marking is not None and parse_marking(args.marking) != ():
            raise ConfigError("limit-nonsearch has no marked vertices; use --marking explicit: or omit it")
        return zeta_nonsearch_limit(d, u, QuadratureSpec.periodic(d, quad_points)), "inf", "none"
    raise ConfigError(f"unknown method {method}")


def _require_marking(args, kind):
    if args.marking is not None and parse_marking(args.marking) != kind:
        raise ConfigError(f"method needs the {kind} marking, got {args.marking!r}")


def _half_side(args) -> int:
    if args.N is not None:
        return args.N
    if args.L is not None:
        if args.L[0] % 2:
            raise ConfigError("half-region marking needs even L")
        return args.L[0] // 2
    raise ConfigError("closed-case2 needs --N or --L")


def _parse_ratios(text):
    from fractions import Fraction

    vals = [Fraction(t) for t in text.split(",")]
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("ratios are c_M,c_F,c_F'")
    return tuple(vals)


def cmd_zeta(args) -> int:
    try:
        method = METHOD_ALIASES[args.method]
    except KeyError:
        raise ConfigError(f"unknown method {args.method!r}; choose from {sorted(METHOD_ALIASES)}") from None
    rows = []
    for u in args.u:
        z, L, label = evaluate(method, args, u)
        rows.append({
            "method": method,
            "d": args.d,
            "L": L,
            "marking": label,
            "u_re": fmt(complex(u).real),
            "u_im": fmt(complex(u).imag),
            "zeta_inv_re": fmt(z.value.real),
            "zeta_inv_im": fmt(z.value.imag),
            "flags": ";".join(z.flags),
        })
    fh, close = _writer(args.out)
    if args.format == "json":
        fh.write(json.dumps({"schema": 1, "rows": rows}, indent=2) + "\n")
    else:
        w = csv.DictWriter(fh, ZETA_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    if close:
        fh.close()
    return EXIT_OK


# ---------------------------------------------------------------- figure1


def cmd_figure1(args) -> int:
    grid = args.grid
    bad = [u for u in grid if not 0 < u < 1]
    if bad:
        raise ConfigError(f"u-grid must lie strictly inside (0, 1); offending values {bad[:3]}")
    table = mahler.figure1_table(args.d, grid, args.quad_points, args.workers)
    text = table.to_csv()
    fh, close = _writer(args.out)
    fh.write(text)
    if close:
        fh.close()
    if args.script:
        with open(args.script, "w") as sh:
            sh.write(mahler.GNUPLOT_SCRIPT.format(csv=args.out or "figure1.csv"))
    peak, at = table.max_abs_diff()
    print(f"max |diff| = {fmt(peak)} at u = {at}; |diff| non-decreasing: {table.monotone}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------- spectra


def spectra_rows(args):
    """(closed-form eigenvalues, numeric eigenvalues), both sorted."""
    if args.path is not None:
        closed = spectra.path_spectrum(args.path).sorted()
        numeric = symmetric_eigenvalues(path_adjacency(args.path)) if args.path else np.empty(0)
    elif args.torus:
        if args.L is None:
            raise ConfigError("--torus needs --L")
        L = args.L[0]
        closed = spectra.torus_adjacency_spectrum(args.d, L).sorted()
        numeric = symmetric_eigenvalues(build_torus(args.d, L).adjacency())
    elif args.case2:
        N = _half_side(args)
        closed = spectra.case2_dirichlet_spectrum(args.d, N).sorted()
        if 2 * N >= 3:
            torus = build_torus(args.d, 2 * N)
            P = build_dirichlet(torus, resolve_marked(torus, "half")).matrix
        else:
            P = case2_dirichlet_kronecker(args.d, N)
        numeric = symmetric_eigenvalues(P)
    else:
        raise ConfigError("choose one of --path n, --torus, --case2")
    return closed, numeric


def cmd_spectra(args) -> int:
    closed, numeric = spectra_rows(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "eigenvalue", "numeric", "residual"])
    for i, (a, b) in enumerate(zip(closed, numeric)):
        w.writerow([i, fmt(a), fmt(b), fmt(abs(a - b))])
    fh, close = _writer(args.out)
    fh.write(buf.getvalue())
    if close:
        fh.close()
    return EXIT_OK


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qwzeta", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key = value file; command-line flags override it")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--d", type=int, default=1, help="torus dimension")
        sp.add_argument("--L", type=parse_int_list, default=None, help="side length(s), comma separated")
        sp.add_argument("--quad-points", type=int, default=None, help="quadrature points per dimension")
        sp.add_argument("--workers", type=int, default=_default_workers())
        sp.add_argument("--max-dim", type=int, default=verify.MAX_DIM, help="largest W' dimension allowed")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    v = sub.add_parser("verify", help="run oracle suites and print a JSON report")
    common(v)
    v.add_argument("--suite", type=lambda s: s.split(","), default=["all"],
                   help="comma list of " + ",".join(verify.SUITES + ("all",)))
    v.add_argument("--random-markings", type=int, default=5)
    v.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    v.add_argument("--u", type=parse_complex_list, default=list(verify.DEFAULT_US))
    v.add_argument("--tol", type=float, default=verify.DET_TOL)
    v.add_argument("--quad-tol", type=float, default=verify.QUAD_TOL)
    v.set_defaults(func=cmd_verify)

    z = sub.add_parser("zeta", help="evaluate one method at one or more u")
    common(z)
    z.add_argument("--method", required=True, help="one of " + ", ".join(sorted(METHOD_ALIASES)))
    z.add_argument("--marking", default=None, help="checkerboard | half | explicit:i,j,...")
    z.add_argument("--N", type=int, default=None, help="half side for the half-region forms")
    z.add_argument("--ratios", type=_parse_ratios, default=None, help="c_M,c_F,c_F' for limit-1d")
    z.add_argument("--u", type=parse_complex_list, required=True)
    z.add_argument("--format", choices=("csv", "json"), default="csv")
    z.set_defaults(func=cmd_zeta)

    f = sub.add_parser("figure1", help="search vs non-search logarithmic zeta table")
    common(f)
    f.set_defaults(d=2)
    f.add_argument("--grid", type=parse_grid, default=mahler.default_grid(), help="start:stop:step or list")
    f.add_argument("--script", default=None, help="also write a gnuplot script here")
    f.set_defaults(func=cmd_figure1)

    s = sub.add_parser("spectra", help="dump closed-form spectra with numeric check")
    common(s)
    s.add_argument("--path", type=int, default=None, metavar="n")
    s.add_argument("--torus", action="store_true")
    s.add_argument("--case2", action="store_true")
    s.add_argument("--N", type=int, default=None)
    s.set_defaults(func=cmd_spectra)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre_args, _ = pre.parse_known_args(argv)
    try:
        if pre_args.config:
            cfg = load_config(pre_args.config)
            for action in parser._subparsers._group_actions:
                for sp in action.choices.values():
                    for a in sp._actions:
                        if a.dest in cfg:
                            a.required = False
                    known = {a.dest for a in sp._actions}
                    sp.set_defaults(**{k: v for k, v in cfg.items() if k in known})
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"qwzeta: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
