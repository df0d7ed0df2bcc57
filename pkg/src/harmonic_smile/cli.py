"""Command-line front end.

    harmonic-smile diagnose --ssvi 0.25,3,0.7
    harmonic-smile figure1 --svi 0.04,0.4,-0.7,0.1,0.2 --grid -1,1,401 --out fig1.csv
    harmonic-smile figure2 --surface 0.09,4,-0.8 --grid -2,2,41
    harmonic-smile volswap --ssvi 1,3,0.7 --theta-sweep 1,0.5,0.1,0.01
    harmonic-smile price --ssvi 0.25,3,0.7

Output is CSV (UTF-8, LF, one header row, 17 significant digits). With
``--out`` a ``<out>.meta.json`` sidecar records the invocation; the CSV
itself is byte-identical across identical runs.

Exit codes: 0 success, 1 usage or I/O error, 2 arbitrage detected by
``diagnose``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .arbitrage import DiagnosticsReport, check_ssvi_slice, diagnose
from .dupire import LocalVolPoint, dupire_table
from .errors import SmileError
from .parameterizations import (
    SsviParams,
    SviParams,
    read_smile_csv,
    ssvi_smile,
    ssvi_surface,
    svi_smile,
)
from .pricing import (
    VolSwapResult,
    log_contract,
    price_claim,
    sqrt_price,
    volswap_sweep,
)
from .shorttime import TABLE_HEADER, normalized_table as rescaled_table
from .transform import normalized_table, smile_table

EXIT_OK, EXIT_USAGE, EXIT_ARBITRAGE = 0, 1, 2
COMMANDS = ("diagnose", "figure1", "figure2", "volswap", "price")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict
    grid: tuple[float, float, int] | None
    output_path: str | None
    format: str = "csv"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.grid is not None:
            lo, hi, n = self.grid
            if n < 2 or not lo < hi:
                raise UsageError("grid needs k_min < k_max and n >= 2")


def _floats(text: str, n: int | None = None, name: str = "value") -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"malformed number in {name}: {text!r}") from exc
    if n is not None and len(vals) != n:
        raise UsageError(f"{name} expects {n} comma-separated numbers, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"non-finite number in {name}: {text!r}")
    return vals


def _grid(text: str) -> tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--grid expects min,max,n, got {text!r}")
    lo, hi = _floats(",".join(parts[:2]), 2, "--grid")
    try:
        n = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"--grid count must be an integer, got {parts[2]!r}") from exc
    return lo, hi, n


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def write_csv(header: Sequence[str], rows: Iterable[Sequence], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])


def _build_parser() -> _Parser:
    parser = _Parser(prog="harmonic-smile", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def smile_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--svi", metavar="a,b,rho,m,sigma")
        g.add_argument("--ssvi", metavar="theta,phi,rho")
        g.add_argument("--smile-csv", metavar="PATH", help="sampled smile, header k,v")

    def common(p):
        p.add_argument("--grid", metavar="min,max,n")
        p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("diagnose", help="static-arbitrage report for one smile")
    smile_args(p)
    common(p)

    p = sub.add_parser("figure1", help="k,v,h table (or z,v_half with --table normalized)")
    smile_args(p)
    common(p)
    p.add_argument("--table", choices=("h", "normalized"), default="h")

    p = sub.add_parser("figure2", help="rescaled normalized vols on an SSVI surface")
    p.add_argument("--surface", metavar="theta_rate,phi,rho", default="0.09,4,-0.8")
    p.add_argument("--maturities", metavar="T1,T2,...", default="0.25,0.1,0.04,0.01")
    p.add_argument("--table", choices=("normalized", "dupire"), default="normalized")
    common(p)

    p = sub.add_parser("volswap", help="SSVI vol-swap quadrature vs asymptotic")
    p.add_argument("--ssvi", metavar="theta,phi,rho", required=True)
    p.add_argument("--theta-sweep", metavar="t1,t2,...")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("price", help="log-contract and sqrt claim by two routes")
    smile_args(p)
    p.add_argument("--out", metavar="PATH")
    return parser


def _smile(ns):
    if ns.svi is not None:
        return svi_smile(SviParams(*_floats(ns.svi, 5, "--svi")))
    if ns.ssvi is not None:
        return ssvi_smile(SsviParams(*_floats(ns.ssvi, 3, "--ssvi")))
    return read_smile_csv(ns.smile_csv)


def _config(ns) -> RunConfig:
    grid = _grid(ns.grid) if getattr(ns, "grid", None) else None
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "grid", "out")}
    return RunConfig(ns.command, params, grid, ns.out)


def _linspace(grid, default):
    lo, hi, n = grid or default
    return np.linspace(lo, hi, n)


def _execute(cfg: RunConfig, ns, out) -> int:
    if cfg.command == "diagnose":
        smile = _smile(ns)
        report = diagnose(smile, _linspace(cfg.grid, (-3.0, 3.0, 2001)))
        write_csv(DiagnosticsReport.header(), [report.row()], out)
        return EXIT_OK if report.passed else EXIT_ARBITRAGE

    if cfg.command == "figure1":
        smile = _smile(ns)
        grid = _linspace(cfg.grid, (-1.0, 1.0, 401))
        if ns.table == "h":
            write_csv(["k", "v", "h"], smile_table(smile, grid), out)
        else:
            write_csv(["z", "v_half"], normalized_table(smile, grid), out)
        return EXIT_OK

    if cfg.command == "figure2":
        surface = ssvi_surface(*_floats(ns.surface, 3, "--surface"))
        maturities = _floats(ns.maturities, None, "--maturities")
        if ns.table == "normalized":
            zs = _linspace(cfg.grid, (-2.0, 2.0, 41))
            write_csv(TABLE_HEADER, rescaled_table(surface, maturities, zs), out)
        else:
            ks = _linspace(cfg.grid, (-0.5, 0.5, 21))
            write_csv(LocalVolPoint.header(), (p.row() for p in dupire_table(maturities, ks, surface)), out)
        return EXIT_OK

    if cfg.command == "volswap":
        theta, phi, rho = _floats(ns.ssvi, 3, "--ssvi")
        thetas = _floats(ns.theta_sweep, None, "--theta-sweep") if ns.theta_sweep else [theta]
        for t in thetas:
            if not check_ssvi_slice(SsviParams(t, phi, rho)):
                print(f"warning: SSVI slice conditions fail at theta={t}", file=sys.stderr)
        results = volswap_sweep(thetas, phi, rho)
        write_csv(VolSwapResult.header(), (r.row() for r in results), out)
        return EXIT_OK

    if cfg.command == "price":
        smile = _smile(ns)
        rows = [
            ("log_contract", log_contract(smile), price_claim(lambda x: -2.0 * math.log(x), smile)),
            ("sqrt", sqrt_price(smile), price_claim(math.sqrt, smile)),
        ]
        write_csv(["claim", "normalized", "density"], rows, out)
        return EXIT_OK

    raise UsageError(f"unknown command {cfg.command!r}")  # pragma: no cover


_VALUE_FLAGS = {"--svi", "--ssvi", "--smile-csv", "--grid", "--out", "--surface", "--maturities", "--theta-sweep"}


def _attach_values(argv: list[str]) -> list[str]:
    """Rewrite ``--flag VALUE`` as ``--flag=VALUE`` so values like ``-1,1,401``
    are not mistaken for options."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    """Run one command; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = _build_parser().parse_args(_attach_values(argv))
        if ns.command is None:
            raise UsageError(f"a command is required: {', '.join(COMMANDS)}")
        cfg = _config(ns)
        buf = io.StringIO()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            code = _execute(cfg, ns, buf)
    except UsageError as exc:
        print(f"harmonic-smile: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SmileError, ValueError, OSError) as exc:
        print(f"harmonic-smile: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.output_path is None:
        stdout.write(buf.getvalue())
        return code
    try:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        meta = {
            "command": cfg.command,
            "argv": argv,
            "version": __version__,
            "created": datetime.now(timezone.utc).isoformat(),
        }
        with open(f"{cfg.output_path}.meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        print(f"harmonic-smile: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


def main() -> None:
    sys.exit(run())
