"""Command-line client for the polygen service.

Every subcommand is a thin wrapper over one HTTP endpoint.  By default the
service runs in-process (no daemon needed); point ``--server`` or the
POLYGEN_SERVER environment variable at a running ``polygen serve`` instance
to work against a shared deployment.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import httpx

EXIT_BY_KIND = {"usage": 1, "data": 2, "inconsistency": 3}
EXIT_BY_STATUS = {400: 1, 404: 2, 422: 2, 500: 3}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _client(server: str | None) -> httpx.Client:
    server = server or os.environ.get("POLYGEN_SERVER")
    if server:
        return httpx.Client(base_url=server, timeout=None)
    # in-process service: same HTTP surface, no daemon
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app

    return TestClient(app)


def _call(args, endpoint: str, payload: dict) -> int:
    payload = {k: v for k, v in payload.items() if v is not None}
    with _client(args.server) as client:
        resp = client.post(endpoint, json=payload)
    if resp.status_code != 200:
        try:
            err = resp.json()["error"]
            print(f"error ({err['kind']}): {err['message']}", file=sys.stderr)
            return EXIT_BY_KIND.get(err["kind"], 3)
        except (KeyError, ValueError):
            print(f"error: HTTP {resp.status_code}: {resp.text}", file=sys.stderr)
            return EXIT_BY_STATUS.get(resp.status_code, 3)
    body = resp.json()
    print(json.dumps(body, indent=2, sort_keys=True))
    return 0


def _add_common(p: argparse.ArgumentParser, *, data_required: bool = True) -> None:
    p.add_argument("--data", required=data_required, help="dataset file (paths resolve against POLYGEN_DATA_DIR)")
    p.add_argument("--rep", choices=["h", "v"], default="h", help="representation: h(yperplane) or v (convex hull)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polygen", description=__doc__)
    parser.add_argument("--server", help="URL of a running service; default is in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and validate a dataset file")
    _add_common(p)

    p = sub.add_parser("stats", help="dataset statistics (counts, token lengths, vocabulary)")
    _add_common(p)
    p.add_argument("--scheme", choices=["standard", "line_numbered"], default="standard")

    p = sub.add_parser("convert", help="convert every sample to the other representation")
    _add_common(p)
    p.add_argument("--out", help="write the converted dataset here")
    p.add_argument("--cap", type=int, default=None)

    p = sub.add_parser("filter", help="keep samples short enough in the convex-hull form")
    _add_common(p)
    p.add_argument("--threshold", type=int, default=800)
    p.add_argument("--out")

    p = sub.add_parser("split", help="seeded half/half split; writes a manifest")
    _add_common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("perturb", help="draw samples and flip one small entry in each")
    _add_common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-samples", type=int, default=1000)
    p.add_argument("--out")

    p = sub.add_parser("baseline-fit", help="fit the order-n histogram baseline")
    _add_common(p)
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--scheme", choices=["standard", "line_numbered"], default="line_numbered")
    p.add_argument("--out", required=True)

    p = sub.add_parser("baseline-sample", help="sample from a fitted baseline model")
    p.add_argument("--model", required=True)
    p.add_argument("--num-samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--out")

    p = sub.add_parser("check", help="run all property checks over a samples file")
    _add_common(p)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out", help="write the full JSON response here")

    p = sub.add_parser("index-build", help="build the invariant-key index of a training set")
    _add_common(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="property + memorization evaluation of generated samples")
    p.add_argument("--samples", required=True, help="generated samples file")
    _add_common(p)
    p.add_argument("--index", required=True)
    p.add_argument("--split-manifest")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="write the CSV table here")

    p = sub.add_parser("perturbation-experiment", help="single-entry volatility experiment")
    _add_common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-samples", type=int, default=1000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--csv")

    p = sub.add_parser("report", help="re-emit a JSON report as CSV or JSON")
    p.add_argument("--report", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8123)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.command == "ingest":
        return _call(args, "/v1/ingest", {"data": args.data, "rep": args.rep})
    if args.command == "stats":
        return _call(args, "/v1/stats", {"data": args.data, "rep": args.rep, "scheme": args.scheme})
    if args.command == "convert":
        return _call(args, "/v1/convert", {"data": args.data, "rep": args.rep, "out": args.out, "cap": args.cap})
    if args.command == "filter":
        return _call(
            args,
            "/v1/filter",
            {"data": args.data, "rep": args.rep, "threshold": args.threshold, "out": args.out},
        )
    if args.command == "split":
        return _call(args, "/v1/split", {"data": args.data, "rep": args.rep, "seed": args.seed, "out": args.out})
    if args.command == "perturb":
        return _call(
            args,
            "/v1/perturb",
            {"data": args.data, "rep": args.rep, "seed": args.seed, "num_samples": args.num_samples, "out": args.out},
        )
    if args.command == "baseline-fit":
        return _call(
            args,
            "/v1/baseline/fit",
            {"data": args.data, "rep": args.rep, "order": args.order, "scheme": args.scheme, "out": args.out},
        )
    if args.command == "baseline-sample":
        return _call(
            args,
            "/v1/baseline/sample",
            {
                "model": args.model,
                "num_samples": args.num_samples,
                "seed": args.seed,
                "max_len": args.max_len,
                "out": args.out,
            },
        )
    if args.command == "check":
        payload = {"data": args.data, "rep": args.rep, "cap": args.cap}
        if args.out:
            code = _call_to_file(args, "/v1/check", payload, args.out)
            return code
        return _call(args, "/v1/check", payload)
    if args.command == "index-build":
        return _call(
            args,
            "/v1/index/build",
            {"data": args.data, "rep": args.rep, "threads": args.threads, "out": args.out},
        )
    if args.command == "evaluate":
        return _call(
            args,
            "/v1/evaluate",
            {
                "samples": args.samples,
                "data": args.data,
                "rep": args.rep,
                "index": args.index,
                "split_manifest": args.split_manifest,
                "threads": args.threads,
                "cap": args.cap,
                "seed": args.seed,
                "out": args.out,
                "csv": args.csv,
            },
        )
    if args.command == "perturbation-experiment":
        return _call(
            args,
            "/v1/experiments/perturbation",
            {
                "data": args.data,
                "rep": args.rep,
                "seed": args.seed,
                "num_samples": args.num_samples,
                "threads": args.threads,
                "cap": args.cap,
                "out": args.out,
                "csv": args.csv,
            },
        )
    if args.command == "report":
        return _call(args, "/v1/report", {"report": args.report, "format": args.format, "out": args.out})
    raise AssertionError(f"unhandled command {args.command}")


def _call_to_file(args, endpoint: str, payload: dict, out: str) -> int:
    payload = {k: v for k, v in payload.items() if v is not None}
    with _client(args.server) as client:
        resp = client.post(endpoint, json=payload)
    if resp.status_code != 200:
        try:
            err = resp.json()["error"]
            print(f"error ({err['kind']}): {err['message']}", file=sys.stderr)
            return EXIT_BY_KIND.get(err["kind"], 3)
        except (KeyError, ValueError):
            print(f"error: HTTP {resp.status_code}", file=sys.stderr)
            return EXIT_BY_STATUS.get(resp.status_code, 3)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(resp.json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
