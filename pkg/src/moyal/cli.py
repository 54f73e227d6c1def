"""Command-line front end.

Operand grammar (``--a``, ``--b``, ``--emit`` and positional inputs):

  f[m,n]        twisted Hermite basis element
  h[k,l]        Hermite tensor h_k(q) h_l(p)
  gauss(s)      exp(-(q^2 + p^2) / (2 s^2))
  PATH          grid file (CSV ``q,p,re,im`` or binary ``MOYAL1``) or
                coefficient CSV ``m,n,re,im``
  polynomial    e.g. ``3*q^2*p - 2i*H + a*abar`` with names q, p, H, a,
                abar, i, sqrt2; products are pointwise

Exit codes: 0 success, 1 failed verification, 2 parse error, 3 backend and
operand mismatch, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import warnings
from pathlib import Path

import numpy as np

from .basis import BasisSpec, BasisWarning, analyze, basis_fn, hermite_tensor, synthesize
from .phasegrid import GridFunction, PhaseGrid, load_grid, write_binary, write_csv
from .seqspace import CoeffMatrix, StWeights, matrix_star, read_coeff_csv, rk_norm, st_norm, write_coeff_csv
from .stargrid import PATHS, twisted_product
from .symbolic import ParseError, PolyQP, parse_poly, poly_star

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_MISMATCH, EXIT_IO = 0, 1, 2, 3, 4

DEFAULTS = {"L": 8.0, "M": 256, "order": 16, "path": "switch", "tolerance_scale": 1.0}


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def load_defaults(env=None) -> dict:
    """Built-in defaults overlaid with the JSON profile named by ``MOYAL_DEFAULTS``."""
    env = os.environ if env is None else env
    out = dict(DEFAULTS)
    path = env.get("MOYAL_DEFAULTS")
    if path:
        try:
            prof = json.loads(Path(path).read_text())
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot read MOYAL_DEFAULTS profile: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_PARSE, f"MOYAL_DEFAULTS profile is not valid JSON: {exc}") from exc
        unknown = set(prof) - set(DEFAULTS)
        if unknown:
            raise CliError(EXIT_PARSE, f"unknown keys in MOYAL_DEFAULTS profile: {sorted(unknown)}")
        out.update(prof)
    return out


# ------------------------------------------------------------------ operands

_BASIS = re.compile(r"^\s*([fh])\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*$")
_GAUSS = re.compile(r"^\s*gauss\(\s*([^)]+?)\s*\)\s*$")


class Operand:
    """Parsed operand before it is bound to a backend."""

    def __init__(self, kind: str, value, text: str):
        self.kind = kind  # basis, hermite, gauss, grid, coeffs, poly
        self.value = value
        self.text = text


def parse_operand(text: str) -> Operand:
    m = _BASIS.match(text)
    if m:
        kind = "basis" if m.group(1) == "f" else "hermite"
        return Operand(kind, (int(m.group(2)), int(m.group(3))), text)
    m = _GAUSS.match(text)
    if m:
        try:
            s = float(m.group(1))
        except ValueError:
            raise CliError(EXIT_PARSE, f"gauss width must be a number: {text!r}") from None
        if not s > 0:
            raise CliError(EXIT_PARSE, f"gauss width must be positive: {text!r}")
        return Operand("gauss", s, text)
    looks_like_file = os.path.sep in text or text.endswith((".csv", ".bin"))
    if looks_like_file or os.path.exists(text):
        return _load_file(text)
    try:
        return Operand("poly", parse_poly(text), text)
    except ParseError as exc:
        raise CliError(EXIT_PARSE, f"cannot parse operand {text!r}: {exc}") from None


def _load_file(path: str) -> Operand:
    try:
        with open(path, "rb") as fh:
            head = fh.read(16)
        if head.startswith(b"m,n"):
            return Operand("coeffs", read_coeff_csv(path), path)
        return Operand("grid", load_grid(path), path)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    except ValueError as exc:
        raise CliError(EXIT_IO, f"malformed input file {path}: {exc}") from None


def _gauss(grid: PhaseGrid, s: float) -> GridFunction:
    return grid.sample(lambda q, p: np.exp(-(q * q + p * p) / (2 * s * s)))


def _spec(order: int, grid: PhaseGrid) -> BasisSpec:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BasisWarning)
        return BasisSpec(order, grid)


def to_grid(op: Operand, grid: PhaseGrid) -> GridFunction:
    if op.kind == "basis":
        return basis_fn(op.value, grid)
    if op.kind == "hermite":
        return hermite_tensor(*op.value, grid)
    if op.kind == "gauss":
        return _gauss(grid, op.value)
    if op.kind == "grid":
        if op.value.grid != grid:
            raise CliError(EXIT_MISMATCH, f"{op.text}: grid {op.value.grid} differs from {grid}")
        return op.value
    if op.kind == "coeffs":
        return synthesize(op.value, grid)
    raise CliError(EXIT_MISMATCH, f"operand {op.text!r} is a polynomial; it has no grid samples (use --backend poly)")


def to_coeffs(op: Operand, grid: PhaseGrid, order: int) -> CoeffMatrix:
    if op.kind == "basis":
        m, n = op.value
        if max(m, n) >= order:
            raise CliError(EXIT_MISMATCH, f"{op.text}: index exceeds basis order {order}")
        return CoeffMatrix.unit(m, n, order)
    if op.kind == "coeffs":
        c = op.value
        if c.order > order and np.any(c.entries[order:, :]) | np.any(c.entries[:, order:]):
            raise CliError(EXIT_MISMATCH, f"{op.text}: coefficients exceed basis order {order}")
        return c.resized(order)
    if op.kind == "poly":
        raise CliError(EXIT_MISMATCH, f"operand {op.text!r} is a polynomial; it has no basis expansion")
    return analyze(to_grid(op, grid), _spec(order, grid))


def _grid_for(ops, L: float, M: int) -> PhaseGrid:
    grids = {op.value.grid for op in ops if op.kind == "grid"}
    if len(grids) > 1:
        raise CliError(EXIT_MISMATCH, "grid operands live on different grids")
    if grids:
        return grids.pop()
    try:
        return PhaseGrid(L, M)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None


# ------------------------------------------------------------------ output


def write_ppm(magnitude: np.ndarray, path) -> float:
    """Write ``magnitude[j, k]`` (``q`` along x, ``p`` up) as an 8-bit P6 image.

    Returns the maximum used for the linear normalization.
    """
    img = np.asarray(magnitude, float).T[::-1]
    top = float(img.max()) if img.size else 0.0
    levels = np.zeros(img.shape, np.uint8) if top == 0 else np.rint(255.0 * img / top).astype(np.uint8)
    rgb = np.repeat(levels[:, :, None], 3, axis=2)
    h, w = levels.shape
    Path(path).write_bytes(f"P6\n{w} {h}\n255\n".encode() + rgb.tobytes())
    return top


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(path, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def _poly_csv(P: PolyQP) -> str:
    lines = ["q_deg,p_deg,re,im"]
    for (i, j), c in sorted(P.terms.items()):
        z = complex(c)
        lines.append(f"{i},{j},{z.real!r},{z.imag!r}")
    return "\n".join(lines) + "\n"


def _coeff_csv_text(c: CoeffMatrix, tol: float = 0.0) -> str:
    lines = ["m,n,re,im"]
    for m, n in zip(*np.nonzero(np.abs(c.entries) > tol)):
        z = c.entries[m, n]
        lines.append(f"{m},{n},{float(z.real)!r},{float(z.imag)!r}")
    return "\n".join(lines) + "\n"


def _heatmap(args, magnitude, report):
    if args.heatmap:
        try:
            top = write_ppm(magnitude, args.heatmap)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {args.heatmap}: {exc}") from None
        side = {"source": args.heatmap, "scale": "linear", "levels": 256, "max_abs": top}
        _write(str(args.heatmap) + ".json", _dump(side))
        report["heatmap"] = {"path": str(args.heatmap), "max_abs": top}


# ------------------------------------------------------------------ commands


def cmd_star(args, dflt) -> int:
    a, b = parse_operand(args.a), parse_operand(args.b)
    backend = args.backend
    report = {"backend": backend, "a": args.a, "b": args.b}
    if backend == "poly":
        if a.kind != "poly" or b.kind != "poly":
            raise CliError(EXIT_MISMATCH, "the poly backend needs two polynomial operands")
        prod = poly_star(a.value, b.value)
        report.update({"result": str(prod), "degree": prod.degree, "terms": len(prod)})
        print(prod)
        if args.out:
            _write(args.out, _poly_csv(prod))
        if args.heatmap:
            grid = _grid_for([], args.L, args.M)
            Q, P = grid.mesh()
            _heatmap(args, np.abs(prod.evaluate(Q, P)), report)
        if args.report:
            _write(args.report, _dump(report))
        return EXIT_OK

    grid = _grid_for([a, b], args.L, args.M)
    order = args.order
    report.update({"L": grid.extent, "M": grid.size, "M_b": order})
    if backend == "matrix":
        ca, cb = to_coeffs(a, grid, order), to_coeffs(b, grid, order)
        prod = matrix_star(ca, cb)
        e = np.abs(prod.entries)
        report["residual"] = {
            "edge_max_abs": float(max(e[-1, :].max(), e[:, -1].max())),
            "l2_norm": st_norm(prod, StWeights(0, 0)),
        }
        if args.out:
            write_coeff_csv(prod, args.out, f"{args.a} * {args.b}")
        else:
            sys.stdout.write(_coeff_csv_text(prod, args.threshold))
        _heatmap(args, e, report)
    else:
        fa, fb = to_grid(a, grid), to_grid(b, grid)
        prod = twisted_product(fa, fb, path=args.path)
        cross = synthesize(matrix_star(to_coeffs(a, grid, order), to_coeffs(b, grid, order)), grid)
        report["path"] = args.path
        report["residual"] = {
            "sup_vs_matrix": (prod - cross).sup(),
            "sup_abs": prod.sup(),
        }
        if args.out:
            try:
                (write_binary if str(args.out).endswith(".bin") else write_csv)(prod, args.out)
            except OSError as exc:
                raise CliError(EXIT_IO, f"cannot write {args.out}: {exc}") from None
        _heatmap(args, np.abs(prod.values), report)
    text = _dump(report)
    if args.report:
        _write(args.report, text)
    elif backend == "grid":
        sys.stdout.write(text)
    return EXIT_OK


def cmd_basis(args, dflt) -> int:
    op = parse_operand(args.emit)
    if op.kind not in ("basis", "hermite", "gauss"):
        raise CliError(EXIT_MISMATCH, "basis --emit takes f[m,n], h[k,l] or gauss(s)")
    grid = _grid_for([], args.L, args.M)
    f = to_grid(op, grid)
    out = args.out
    if out is None:
        x = grid.nodes
        lines = ["q,p,re,im"]
        for j in range(grid.size):
            for k in range(grid.size):
                z = f.values[j, k]
                lines.append(f"{float(x[j])!r},{float(x[k])!r},{float(z.real)!r},{float(z.imag)!r}")
        sys.stdout.write("\n".join(lines) + "\n")
        return EXIT_OK
    try:
        (write_binary if str(out).endswith(".bin") else write_csv)(f, out)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc}") from None
    if args.heatmap:
        report = {}
        _heatmap(args, np.abs(f.values), report)
    return EXIT_OK


def _coeffs_from(text: str, args) -> tuple[CoeffMatrix, Operand]:
    op = parse_operand(text)
    if op.kind == "coeffs":
        return op.value, op
    grid = _grid_for([op], args.L, args.M)
    return to_coeffs(op, grid, args.order), op


def cmd_analyze(args, dflt) -> int:
    c, op = _coeffs_from(args.input, args)
    e = np.abs(c.entries)
    m, n = np.unravel_index(int(np.argmax(e)), e.shape)
    rest = e.copy()
    rest[m, n] = 0.0
    summary = {
        "input": args.input,
        "order": c.order,
        "dominant": [int(m), int(n)],
        "dominant_abs": float(e[m, n]),
        "off_target_l2": float(np.sqrt(np.sum(rest**2))),
        "off_target_max": float(rest.max()),
    }
    if args.out:
        write_coeff_csv(c, args.out, args.description or f"analysis of {args.input}")
        sys.stdout.write(_dump(summary))
    else:
        sys.stdout.write(_coeff_csv_text(c, args.threshold))
    return EXIT_OK


def _pair(text: str) -> tuple[float, float]:
    try:
        s, t = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 's,t', got {text!r}") from None
    return s, t


def cmd_norms(args, dflt) -> int:
    c, _ = _coeffs_from(args.input, args)
    out = {"input": args.input, "order": c.order, "l2": st_norm(c, StWeights(0, 0))}
    ks = args.rk if args.rk else [0, 1, 2]
    out["rk"] = {f"{k:g}": rk_norm(c, k) for k in ks}
    if args.st:
        out["st"] = {f"{s:g},{t:g}": st_norm(c, StWeights(s, t)) for s, t in args.st}
    sys.stdout.write(_dump(out))
    return EXIT_OK


def cmd_verify(args, dflt) -> int:
    from .verify import CHECK_NAMES, format_result, report_json, run_checks

    scale = args.tolerance_scale
    unknown = set(args.only or ()) - set(CHECK_NAMES)
    if unknown:
        raise CliError(EXIT_PARSE, f"unknown check(s) {sorted(unknown)}; known: {', '.join(CHECK_NAMES)}")
    results = run_checks(
        only=args.only,
        max_index=args.max_index,
        tolerance_scale=scale,
        progress=lambda r: print(format_result(r, scale), flush=True),
    )
    npass = sum(r.passed for r in results)
    print(f"{npass}/{len(results)} checks passed")
    if args.json:
        _write(args.json, report_json(results, scale) + "\n")
    return EXIT_OK if npass == len(results) else EXIT_VERIFY


def cmd_bench(args, dflt) -> int:
    from .bench import CSV_HEADER, run_bench

    rows = run_bench(args.sweep_M, args.sweep_order, extent=args.L, repeat=args.repeat)
    text = CSV_HEADER + "\n" + "".join(f"{b},{p},{s:.6f},{e:.6e}\n" for b, p, s, e in rows)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser(dflt: dict) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="moyal",
        description="Twisted (Moyal) products on phase space.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def grid_opts(p, order=True):
        p.add_argument("-L", "--extent", dest="L", type=float, default=dflt["L"], help="grid half-width (default %(default)s)")
        p.add_argument("-M", "--size", dest="M", type=int, default=dflt["M"], help="nodes per axis (default %(default)s)")
        if order:
            p.add_argument("--order", type=int, default=dflt["order"], help="basis order M_b (default %(default)s)")

    p = sub.add_parser("star", help="twisted product of two operands")
    p.add_argument("--backend", choices=("grid", "matrix", "poly"), default="grid")
    p.add_argument("--a", required=True, help="left operand")
    p.add_argument("--b", required=True, help="right operand")
    p.add_argument("--path", choices=PATHS, default=dflt["path"], help="grid product route")
    p.add_argument("--out", help="product output (CSV; .bin for binary grids)")
    p.add_argument("--report", help="JSON report path")
    p.add_argument("--heatmap", help="PPM image of |product|")
    p.add_argument("--threshold", type=float, default=0.0, help="hide coefficients at or below this size on stdout")
    grid_opts(p)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("basis", help="sample a basis function on the grid")
    p.add_argument("--emit", required=True, help="f[m,n], h[k,l] or gauss(s)")
    p.add_argument("--out", help="output file (CSV, or .bin); stdout if omitted")
    p.add_argument("--heatmap", help="PPM image of |f|")
    grid_opts(p, order=False)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("analyze", help="expand a function in the f_mn basis")
    p.add_argument("input", help="grid file or operand expression")
    p.add_argument("--out", help="coefficient CSV (a .json sidecar is written next to it)")
    p.add_argument("--description", help="text stored in the sidecar")
    p.add_argument("--threshold", type=float, default=0.0, help="hide coefficients at or below this size on stdout")
    grid_opts(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("norms", help="r_k and (s,t) norms of a coefficient matrix")
    p.add_argument("input", help="coefficient CSV, grid file or operand expression")
    p.add_argument("--rk", type=float, action="append", help="r_k index (repeatable)")
    p.add_argument("--st", type=_pair, action="append", help="weights 's,t' (repeatable)")
    grid_opts(p)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("verify", help="run the identity checks")
    p.add_argument("--only", nargs="+", metavar="NAME", help="subset of checks")
    p.add_argument("--max-index", type=int, help="override the index range of indexed checks")
    p.add_argument("--tolerance-scale", type=float, default=dflt["tolerance_scale"], help="multiply tolerances")
    p.add_argument("--json", help="write a JSON report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the grid and matrix backends")
    p.add_argument("--sweep-M", type=_int_list, default=[64, 128, 256], help="grid sizes (default 64,128,256)")
    p.add_argument("--sweep-order", type=_int_list, default=[8, 16, 32], help="basis orders (default 8,16,32)")
    p.add_argument("-L", "--extent", dest="L", type=float, default=dflt["L"])
    p.add_argument("--repeat", type=int, default=3, help="timing repeats; the minimum is reported")
    p.add_argument("--out", help="CSV output; stdout if omitted")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    try:
        dflt = load_defaults()
        args = build_parser(dflt).parse_args(argv)
        return args.func(args, dflt)
    except CliError as exc:
        print(f"moyal: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        print(f"moyal: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"moyal: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
