"""``vixjumps`` command line.

Verbs: asym, mc, forward, converge, reproduce (and serve, to start the HTTP
service). With ``--server URL`` the verbs are forwarded to a running service
and the returned rows are printed exactly as a local run would print them.

Exit codes: 0 success, 1 usage or config error, 2 reproduction failure,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, commands
from .commands import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, CommandResult
from .errors import ConfigError, DomainError, NumericError
from .tables import TABLES

OUT_DIR_ENV = "VIXJUMPS_OUTPUT_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    if ":" in text:
        return commands.parse_strike_range(text)
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None


def _strike_range(text: str) -> list[float]:
    try:
        return _float_list(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _source_flags(p, table_required=False):
    g = p.add_mutually_exclusive_group(required=table_required)
    g.add_argument("--table", choices=sorted(TABLES), help="built-in parameter set of a reference table")
    if not table_required:
        g.add_argument("--model", type=Path, help="INI model file")


def _strike_flags(p):
    p.add_argument("--underlying", choices=("vix", "equity"))
    s = p.add_mutually_exclusive_group()
    s.add_argument("--strikes", type=_strike_range, help="a:b:step or a comma list of absolute strikes")
    s.add_argument("--moneyness", type=_strike_range,
                   help="K / K_ATM ratios (a:b:step or comma list); K_ATM = S0 or sqrt(eta^2 V0 + kappa)")
    p.add_argument("--kind", choices=("auto", "call", "put"), default="auto",
                   help="auto picks the OTM side of each strike")
    sc = p.add_mutually_exclusive_group()
    sc.add_argument("--scaled", dest="scaled", action="store_true", default=True,
                    help="report scaled values, 1000/lambda_C (1e4 for fn-vix), per unit maturity for MC")
    sc.add_argument("--raw", dest="scaled", action="store_false")


def _mc_flags(p):
    p.add_argument("--paths", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--antithetic", action="store_true", default=None)
    p.add_argument("--workers", type=int, default=1)


def _common(p):
    p.add_argument("--out", type=Path, help="write CSV here instead of stdout")
    p.add_argument("--server", help="URL of a running vixjumps service; run the verb there")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vixjumps", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"vixjumps {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("asym", help="leading-order coefficients")
    _source_flags(p)
    _strike_flags(p)
    p.add_argument("--method", choices=("closed", "generic"), default="closed")
    p.add_argument("--bs-forward", choices=("mean", "median"),
                   help="forward convention of the equity closed forms (tables default to median)")
    _common(p)

    p = sub.add_parser("mc", help="Monte Carlo prices")
    _source_flags(p)
    _strike_flags(p)
    p.add_argument("--maturity", type=float)
    _mc_flags(p)
    _common(p)

    p = sub.add_parser("forward", help="Monte Carlo VIX forward E[VIX_T]")
    _source_flags(p)
    p.add_argument("--maturity", type=float)
    _mc_flags(p)
    _common(p)

    p = sub.add_parser("converge", help="MC price / T against the coefficient over maturities")
    _source_flags(p)
    p.add_argument("--underlying", choices=("vix", "equity"))
    p.add_argument("--strike", type=float, required=True)
    p.add_argument("--kind", choices=("auto", "call", "put"), default="auto")
    p.add_argument("--maturity", dest="maturities", type=_strike_range, required=True,
                   help="comma list of maturities")
    _mc_flags(p)
    _common(p)

    p = sub.add_parser("reproduce", help="check a reference table cell by cell")
    _source_flags(p, table_required=True)
    p.add_argument("--mc", action="store_true", help="also rerun the MC columns")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--paths", type=int)
    p.add_argument("--workers", type=int, default=1)
    _common(p)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _payload(args) -> dict:
    """Request body for the service, mirroring the local call."""
    body: dict = {}
    if getattr(args, "table", None):
        body["table"] = args.table
    elif getattr(args, "model", None):
        body["config"] = args.model.read_text(encoding="utf-8")
    for key in ("underlying", "strikes", "moneyness", "kind", "scaled", "method", "maturity", "paths", "steps",
                "seed", "antithetic", "workers", "strike", "maturities"):
        val = getattr(args, key, None)
        if val is not None:
            body[key] = val
    if getattr(args, "bs_forward", None):
        body["bs_forward"] = args.bs_forward
    return body


def _remote(args) -> CommandResult:
    import httpx

    base = args.server.rstrip("/")
    try:
        if args.verb == "reproduce":
            params = {"mc": str(args.mc).lower(), "seed": args.seed, "workers": args.workers}
            if args.paths:
                params["paths"] = args.paths
            resp = httpx.get(f"{base}/reproduce/{args.table}", params=params, timeout=None)
        else:
            resp = httpx.post(f"{base}/{args.verb}", json=_payload(args), timeout=None)
    except httpx.HTTPError as exc:
        raise ConfigError(f"cannot reach {base}: {exc}") from None
    data = resp.json()
    if resp.status_code == 500 and data.get("kind") == "numeric":
        raise NumericError(data["message"])
    if resp.status_code >= 400:
        detail = data.get("message") or data.get("detail")
        raise ConfigError(f"server rejected the request: {detail}")
    return CommandResult(tuple(data["columns"]), data["rows"], data["exit_code"], data["messages"])


def _local(args) -> CommandResult:
    if args.verb == "reproduce":
        return commands.cmd_reproduce(args.table, args.mc, args.seed, args.paths, args.workers)
    if args.table is None and args.model is None:
        raise ConfigError("give --table or --model")
    text = args.model.read_text(encoding="utf-8") if args.model else None
    src = commands.resolve_source(args.table, text)
    underlying = getattr(args, "underlying", None) or src.underlying or "equity"
    if args.verb == "asym":
        return commands.cmd_asym(src, underlying, args.strikes, args.moneyness, args.kind, args.method,
                                 args.scaled, args.bs_forward)
    if args.verb == "mc":
        return commands.cmd_mc(src, underlying, args.strikes, args.moneyness, args.kind, args.maturity,
                               args.paths, args.steps, args.seed, args.antithetic, args.scaled, args.workers)
    if args.verb == "forward":
        return commands.cmd_forward(src, args.maturity, args.paths, args.steps, args.seed, args.antithetic,
                                    args.workers)
    return commands.cmd_converge(src, underlying, args.strike, args.kind, args.maturities, args.paths,
                                 args.steps, args.seed, args.antithetic, args.workers)


def render_csv(res: CommandResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(res.columns)
    for row in res.rows:
        w.writerow([commands.format_value(row.get(c)) for c in res.columns])
    return buf.getvalue()


def _out_path(path: Path) -> Path:
    root = os.environ.get(OUT_DIR_ENV)
    if root and not path.is_absolute():
        path = Path(root) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verb == "serve":
        import uvicorn

        uvicorn.run("vixjumps.service:app", host=args.host, port=args.port)
        return EXIT_OK
    try:
        res = _remote(args) if args.server else _local(args)
    except (ConfigError, DomainError, FileNotFoundError) as exc:
        print(f"vixjumps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"vixjumps: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render_csv(res)
    if args.out:
        _out_path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for msg in res.messages:
        print(msg, file=sys.stderr)
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
