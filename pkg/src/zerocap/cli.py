"""Command-line frontend and the JSON channel-file format.

Exit statuses: 0 success, 1 usage error, 2 format/validation failure,
3 parameters outside the constructible domain (``verify`` with ``x < 1/2``).

Channel file::

    {"dim_in": n, "dim_out": m,
     "kraus": [ [[ [re, im], ... ], ...], ... ]}   # one m x n matrix per operator
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import analysis, families
from .channels import KrausChannel, tp_residual
from .errors import DimensionError, FormatError, ParameterDomainError, ValidationError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_DOMAIN = 3

INGEST_TOL = 1e-6
RESIDUAL_TOL = 1e-9

CSV_COLUMNS = (
    "d",
    "x",
    "residual",
    "min_ppt_eig",
    "ppt",
    "antidegradable_constructible",
    "coherent_info",
)


class UsageError(Exception):
    pass


# -- channel files -----------------------------------------------------------


def channel_to_dict(ch: KrausChannel) -> dict:
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [
            [[[float(z.real), float(z.imag)] for z in row] for row in op] for op in ch.kraus
        ],
    }


def save_channel(ch: KrausChannel, path) -> None:
    # json writes floats with repr(), the shortest string that round-trips exactly
    with open(path, "w") as fh:
        json.dump(channel_to_dict(ch), fh)
        fh.write("\n")


def _field_int(doc, name):
    if name not in doc:
        raise FormatError(f"missing field {name!r}")
    v = doc[name]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise FormatError(f"field {name!r} must be a positive integer, got {v!r}")
    return v


def channel_from_dict(doc, tol: float = INGEST_TOL) -> KrausChannel:
    """Parse and validate a channel document.

    Raises :class:`FormatError` on structural problems (naming the offending
    field) and :class:`ValidationError` when ``sum K^dagger K`` misses the
    identity by ``tol`` or more.
    """
    if not isinstance(doc, dict):
        raise FormatError("top level must be a JSON object")
    dim_in = _field_int(doc, "dim_in")
    dim_out = _field_int(doc, "dim_out")
    kraus = doc.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise FormatError("field 'kraus' must be a non-empty list of matrices")
    ops = []
    for k, op in enumerate(kraus):
        if not isinstance(op, list) or len(op) != dim_out:
            raise FormatError(f"kraus[{k}] must be a list of {dim_out} rows")
        m = np.empty((dim_out, dim_in), dtype=complex)
        for r, row in enumerate(op):
            if not isinstance(row, list) or len(row) != dim_in:
                raise FormatError(f"kraus[{k}][{r}] must be a list of {dim_in} entries")
            for c, z in enumerate(row):
                if (
                    not isinstance(z, list)
                    or len(z) != 2
                    or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in z)
                ):
                    raise FormatError(f"kraus[{k}][{r}][{c}] must be a [re, im] pair of numbers")
                if not all(math.isfinite(t) for t in z):
                    raise FormatError(f"kraus[{k}][{r}][{c}] is not finite")
                m[r, c] = complex(z[0], z[1])
        ops.append(m)
    ch = KrausChannel(dim_in, dim_out, tuple(ops))
    res = tp_residual(ch)
    if not res < tol:
        raise ValidationError(
            f"channel is not trace preserving: max |sum K^dagger K - I| = {res:.6g}", residual=res
        )
    return ch


def load_channel(path, tol: float = INGEST_TOL) -> KrausChannel:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    try:
        return channel_from_dict(doc, tol)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from exc


# -- scan --------------------------------------------------------------------


@dataclass
class ScanRecord:
    d: int
    x: float
    residual: Optional[float]
    min_ppt_eig: float
    ppt: bool
    coherent_info: Optional[float]
    antidegradable_constructible: bool


def scan_grid(x_start: float, x_end: float, steps: int) -> List[float]:
    if steps == 1:
        return [x_start]
    xs = [x_start + k * (x_end - x_start) / (steps - 1) for k in range(steps)]
    xs[-1] = x_end
    return xs


def scan_point(d: int, x: float, coherent: bool, cfg: analysis.OptimizerConfig) -> ScanRecord:
    ch = families.depolarizing(x, d)
    min_eig = float(analysis.ppt_spectrum(ch)[0])
    try:
        residual = analysis.antidegradability_residual(x, d)
        constructible = True
    except ParameterDomainError:
        residual = None
        constructible = False
    ic = analysis.maximize_coherent_information(ch, cfg).value if coherent else None
    return ScanRecord(
        d=d,
        x=x,
        residual=residual,
        min_ppt_eig=min_eig,
        ppt=min_eig >= -analysis.PPT_TOL,
        coherent_info=ic,
        antidegradable_constructible=constructible,
    )


def scan_depolarizing(
    d: int,
    x_start: float,
    x_end: float,
    steps: int,
    with_coherent_info: bool = False,
    seed: int = 42,
    restarts: int = 20,
    jobs: int = 1,
) -> List[ScanRecord]:
    """Evaluate every grid point; point ``k`` optimizes with seed ``seed + k``."""
    if not 2 <= d <= 8:
        raise UsageError(f"--dim must be between 2 and 8, got {d}")
    if not 0.0 <= x_start <= x_end <= 1.0:
        raise UsageError(f"need 0 <= x-start <= x-end <= 1, got [{x_start}, {x_end}]")
    if steps < 1:
        raise UsageError(f"--steps must be >= 1, got {steps}")
    xs = scan_grid(x_start, x_end, steps)

    def work(k):
        cfg = analysis.OptimizerConfig(restarts=restarts, seed=seed + k)
        return scan_point(d, xs[k], with_coherent_info, cfg)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(work, range(len(xs))))
    return [work(k) for k in range(len(xs))]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return f"{v:.17g}"


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow([_fmt(getattr(rec, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


# -- commands ----------------------------------------------------------------


def cmd_scan_depolarizing(args, out, err) -> int:
    records = scan_depolarizing(
        args.dim,
        args.x_start,
        args.x_end,
        args.steps,
        with_coherent_info=args.coherent_info,
        seed=args.seed,
        restarts=args.restarts,
        jobs=args.jobs,
    )
    text = records_to_csv(records)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out, err) -> int:
    d, x = args.dim, args.x
    if d < 2:
        raise UsageError(f"--dim must be >= 2, got {d}")
    if not 0.0 <= x <= 1.0:
        raise UsageError(f"--x must lie in [0, 1], got {x}")
    p = families.NoiseParameter(x, d)
    print(f"d = {d}", file=out)
    print(f"x = {x:.17g}", file=out)
    dd2 = families.d_delta_squared(x)
    try:
        c = families.antidegrading_params(p)
    except ParameterDomainError:
        print(f"d*delta^2 = {dd2:.17g}", file=out)
        print("anti-degrading map: not constructible (x < 1/2)", file=out)
        return EXIT_DOMAIN
    comp = families.depolarizing_complement(p)
    amap = families.antidegrading_map(p)
    residual = analysis.antidegradability_residual(p)
    print(f"beta = {c.beta:.17g}", file=out)
    print(f"delta = {c.delta:.17g}", file=out)
    print(f"d*delta^2 = {dd2:.17g}", file=out)
    print(f"xi = {c.xi:.17g}", file=out)
    print(f"kraus: channel {len(families.depolarizing(p))}, complement {len(comp)}, "
          f"anti-degrading map {len(amap)}", file=out)
    print(f"choi residual = {residual:.17g}", file=out)
    ok = residual < RESIDUAL_TOL
    print(f"anti-degradable: {'yes' if ok else 'NO'}", file=out)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_contaminate(args, out, err) -> int:
    if not 0.0 <= args.x <= 1.0:
        raise UsageError(f"--x must lie in [0, 1], got {args.x}")
    lam = load_channel(args.inp)
    save_channel(families.contaminate(lam, args.x), args.out)
    return EXIT_OK


def cmd_ppt(args, out, err) -> int:
    d, x = args.dim, args.x
    if d < 2:
        raise UsageError(f"--dim must be >= 2, got {d}")
    if not 0.0 <= x <= 1.0:
        raise UsageError(f"--x must lie in [0, 1], got {x}")
    spec = analysis.ppt_spectrum(families.depolarizing(x, d))
    exact = analysis.analytic_ppt_spectrum(x, d)
    print(f"d = {d}", file=out)
    print(f"x = {x:.17g}", file=out)
    print(f"symmetric eigenvalue = {exact.sym_value:.17g} (x{exact.sym_multiplicity})", file=out)
    print(f"antisymmetric eigenvalue = {exact.antisym_value:.17g} "
          f"(x{exact.antisym_multiplicity})", file=out)
    print(f"min numeric eigenvalue = {spec[0]:.17g}", file=out)
    print(f"ppt threshold d/(d+1) = {analysis.ppt_threshold(d):.17g}", file=out)
    print(f"ppt: {'yes' if spec[0] >= -analysis.PPT_TOL else 'no'}", file=out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zerocap", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("scan-depolarizing", help="scan the depolarizing family over a grid of x")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--x-start", type=float, required=True)
    p.add_argument("--x-end", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--coherent-info", action="store_true",
                   help="also maximize one-shot coherent information (slow)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1, help="grid points evaluated concurrently")
    p.add_argument("--out", help="CSV destination (default stdout)")
    p.set_defaults(func=cmd_scan_depolarizing)

    p = sub.add_parser("verify", help="check the anti-degrading map at one (d, x)")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("contaminate", help="apply white noise to a channel file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_contaminate)

    p = sub.add_parser("ppt", help="partial-transpose spectrum of the depolarizing Choi matrix")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=cmd_ppt)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out, err)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (FormatError, ValidationError, DimensionError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except ParameterDomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
