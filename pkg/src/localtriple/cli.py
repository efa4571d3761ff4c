"""Command-line front end: a thin client over the FastAPI service.

By default requests are answered in-process through an ASGI transport, so
no server is needed; `--server URL` targets a running instance instead,
and `localtriple serve` starts one.  Output is deterministic for fixed
inputs and seed: JSON is emitted with sorted keys, CSV with fixed headers.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

from . import __version__

_CSV_ENDPOINTS = {"whittaker", "matcoef"}


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # this environment's TestClient import warns
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _emit(args, payload: dict, csv_text: str | None = None) -> None:
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _table_csv(payload: dict) -> str:
    lines = [",".join(payload["columns"])]
    for row in payload["rows"]:
        lines.append(",".join(f"{x:.12g}" for x in row))
    return "\n".join(lines)


def _post(args, path: str, body: dict) -> dict:
    with _client(args.server) as client:
        resp = client.post(path, json=body)
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            print(f"error ({resp.status_code}): {detail}", file=sys.stderr)
            raise SystemExit(2)
        return resp.json()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="localtriple", description=__doc__)
    parser.add_argument("--version", action="version", version=f"localtriple {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--server", default=None, help="base URL of a running service (default: in-process)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--p", type=int, default=3)
        p.add_argument("--precision", type=int, default=16, help="working precision L of the field model")

    p_li = sub.add_parser("local-integral", help="brute force vs closed form of the local triple integral")
    common(p_li)
    p_li.add_argument("--rep1", required=True)
    p_li.add_argument("--rep2", required=True)
    p_li.add_argument("--rep3", required=True)

    p_wh = sub.add_parser("whittaker", help="emit a Whittaker newform table")
    common(p_wh)
    p_wh.add_argument("--rep", required=True)
    p_wh.add_argument("--resolution", type=int, default=None)

    p_mc = sub.add_parser("matcoef", help="emit matrix-coefficient values on the coset grid")
    common(p_mc)
    p_mc.add_argument("--rep", required=True)
    p_mc.add_argument("--role", choices=("phi1", "phi2", "phi3"), default="phi1")
    p_mc.add_argument("--c3", type=int, required=True)
    p_mc.add_argument("--resolution", type=int, default=1)

    p_kc = sub.add_parser("kirillov-check", help="omega^2, unitarity and support checks of the engine")
    common(p_kc)
    p_kc.add_argument("--c", type=int, default=2)
    p_kc.add_argument("--w", default="w0")
    p_kc.add_argument("--samples", type=int, default=25)

    p_hc = sub.add_parser("hecke-check", help="eigenvalue identity suite")
    common(p_hc)
    p_hc.add_argument("--samples", type=int, default=200)

    p_am = sub.add_parser("amplifier", help="exponent arithmetic b(alpha), delta(alpha)")
    common(p_am)
    p_am.add_argument("--alpha", default="7/64")
    p_am.add_argument("--N", type=int, default=None)

    p_vf = sub.add_parser("verify", help="run the acceptance suite")
    common(p_vf)
    p_vf.add_argument("--suite", choices=("all", "triple", "tables", "hecke"), default="all")

    p_sv = sub.add_parser("serve", help="run the FastAPI service under uvicorn")
    p_sv.add_argument("--host", default="127.0.0.1")
    p_sv.add_argument("--port", type=int, default=8717)

    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.command == "local-integral":
        payload = _post(
            args,
            "/local-integral",
            {"p": args.p, "rep1": args.rep1, "rep2": args.rep2, "rep3": args.rep3, "tol": args.tol, "threads": args.threads, "precision": args.precision},
        )
        _emit(args, payload)
        return 0 if payload["abs_error"] <= args.tol else 1

    if args.command == "whittaker":
        payload = _post(args, "/whittaker", {"p": args.p, "rep": args.rep, "resolution": args.resolution, "precision": args.precision})
        _emit(args, payload, _table_csv(payload))
        return 0

    if args.command == "matcoef":
        payload = _post(
            args,
            "/matcoef",
            {"p": args.p, "rep": args.rep, "role": args.role, "c3": args.c3, "resolution": args.resolution, "precision": args.precision},
        )
        _emit(args, payload, _table_csv(payload))
        return 0

    if args.command == "kirillov-check":
        payload = _post(
            args,
            "/kirillov-check",
            {"p": args.p, "c": args.c, "w": args.w, "seed": args.seed, "samples": args.samples, "tol": max(args.tol, 1e-10)},
        )
        _emit(args, payload)
        return 0 if payload["passed"] else 1

    if args.command == "hecke-check":
        payload = _post(args, "/hecke-check", {"samples": args.samples, "seed": args.seed})
        _emit(args, payload)
        return 0 if payload["passed"] else 1

    if args.command == "amplifier":
        payload = _post(args, "/amplifier", {"alpha": args.alpha, "N": args.N, "seed": args.seed})
        _emit(args, payload)
        return 0

    if args.command == "verify":
        payload = _post(args, "/verify", {"suite": args.suite})
        for crit in payload["criteria"]:
            status = "PASS" if crit["passed"] else "FAIL"
            print(f"{status} criterion {crit['id']}: {crit['detail']}", file=sys.stderr)
        _emit(args, payload)
        return 0 if payload["passed"] else 1

    parser.error("unknown command")
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
