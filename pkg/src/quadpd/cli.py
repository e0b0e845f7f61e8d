"""Command-line client for the quadpd service.

By default requests are served in-process by the ASGI app; ``--url`` sends
them to a running server instead.  Reports are printed as JSON.  Exit codes:
0 success, 1 usage or parse error, 2 failed theorem-backed check.
"""

from __future__ import annotations

import argparse
import json
import sys

from .documents import dumps_report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quadpd", description="Projective dimension of ideals of quadrics.")
    p.add_argument("--url", help="base URL of a running quadpd service")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def filecmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file", nargs="?", default="-", help="ideal document ('-' for stdin)")
        return s

    filecmd("pd", "projective dimension of R/I")
    s = filecmd("resolve", "minimal free resolution and Betti table")
    s.add_argument("--seed", type=int, default=0)
    filecmd("mult", "multiplicity, dimension and Hilbert numerator")
    s = filecmd("colon", "ideal quotient I : (f1, ..., fk)")
    s.add_argument("--by", required=True, help="comma-separated polynomials")
    s = filecmd("classify-matrix", "canonical form of the matrix section")
    s.add_argument("--seed", type=int, default=0)
    filecmd("type", "type signature from the primes section")
    s = sub.add_parser("tight", help="the tight family with n generators")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--char", type=int, default=None, help="field characteristic")
    s = filecmd("verify", "main bound and applicable case bounds")
    s.add_argument("--context", default=None, help="hypothesis family (default: inferred)")
    s = sub.add_parser("fuzz", help="seeded verification campaign")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--family", default="generic")
    s.add_argument("--n-range", default="3..5")
    s.add_argument("--vars", type=int, default=8)
    s.add_argument("--char", type=int, default=None)
    s.add_argument("--jobs", type=int, default=1)
    filecmd("question2", "slack of the h(n-h+1) candidate bound")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _payload(args) -> tuple[str, dict]:
    c = args.command
    if c == "tight":
        return "/tight", {"n": args.n, "characteristic": args.char}
    if c == "fuzz":
        return "/fuzz", {"seed": args.seed, "trials": args.trials, "family": args.family,
                         "n_range": args.n_range, "variables": args.vars,
                         "characteristic": args.char, "jobs": args.jobs}
    body = {"document": _read(args.file)}
    if c in ("resolve", "classify-matrix"):
        body["seed"] = args.seed
    elif c == "colon":
        body["by"] = args.by
    elif c == "verify":
        body["context"] = args.context
    return "/" + c, body


def _post(url: str | None, route: str, body: dict):
    import httpx
    if url:
        with httpx.Client(base_url=url, timeout=None) as client:
            return client.post(route, json=body)

    import asyncio
    from .service import app

    async def call():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://quadpd") as client:
            return await client.post(route, json=body)

    return asyncio.run(call())


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 1
    try:
        route, body = _payload(args)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"quadpd: cannot read input: {exc}", file=sys.stderr)
        return 1
    try:
        resp = _post(args.url, route, body)
    except Exception as exc:  # transport failures must not crash the CLI
        print(f"quadpd: request failed: {exc}", file=sys.stderr)
        return 1
    try:
        data = resp.json()
    except json.JSONDecodeError:
        print(f"quadpd: bad response ({resp.status_code})", file=sys.stderr)
        return 1
    if resp.status_code != 200:
        if isinstance(data, dict) and data.get("line") is not None:
            print(f"quadpd: {data['line']}:{data['column']}: {data['error']}", file=sys.stderr)
        elif isinstance(data, dict) and "error" in data:
            print(f"quadpd: {data['error']}", file=sys.stderr)
        else:
            print(f"quadpd: invalid request: {data}", file=sys.stderr)
        return 1
    sys.stdout.write(dumps_report(data["report"]))
    return int(data["exit_code"])


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
