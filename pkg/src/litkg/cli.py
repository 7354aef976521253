"""litkg command line: a thin client over the HTTP service.

``litkg serve`` runs the service; every other subcommand talks to a running
server (``--server`` or LITKG_SERVER, default http://127.0.0.1:8030).
Ingestion sends an update manifest with absolute bundle paths, so client and
server are expected to share a filesystem.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

DEFAULT_SERVER = "http://127.0.0.1:8030"


def _server_url(args) -> str:
    return args.server or os.environ.get("LITKG_SERVER") or DEFAULT_SERVER


def _client(args) -> httpx.Client:
    return httpx.Client(base_url=_server_url(args), timeout=60.0)


def _print_json(obj) -> None:
    print(json.dumps(obj, ensure_ascii=False, indent=2))


def _handle(response: httpx.Response) -> dict | None:
    content_type = response.headers.get("content-type", "")
    if response.status_code >= 400:
        if "json" in content_type:
            _print_json(response.json())
        else:
            print(response.text, file=sys.stderr)
        raise SystemExit(1)
    if "json" in content_type:
        return response.json()
    print(response.text, end="")
    return None


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    host, _, port = args.addr.rpartition(":")
    state = (
        ServiceState.from_data_dir(args.data_dir) if args.data_dir else ServiceState()
    )
    ui_dir = args.ui_dir
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = str(candidate) if candidate.is_dir() else None
    app = create_app(state, ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def cmd_ingest(args) -> int:
    paths = [str(Path(p).resolve()) for p in args.bundles]
    with _client(args) as client:
        data = _handle(
            client.post(
                "/admin/update", json={"added": paths, "removed": [], "updated": []}
            )
        )
    _print_json(data)
    return 1 if data.get("errors") else 0


def cmd_ctd(args) -> int:
    with _client(args) as client:
        data = _handle(client.post("/admin/ctd", json={"path": str(Path(args.table).resolve())}))
    _print_json(data)
    return 0


def cmd_update(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text("utf-8"))
    base = Path(args.manifest).resolve().parent
    for key in ("added", "updated"):
        manifest[key] = [
            str((base / p).resolve()) if not Path(p).is_absolute() else p
            for p in manifest.get(key, [])
        ]
    manifest.setdefault("removed", [])
    with _client(args) as client:
        data = _handle(client.post("/admin/update", json=manifest))
    _print_json(data)
    return 1 if data.get("errors") else 0


def cmd_stats(args) -> int:
    with _client(args) as client:
        data = _handle(client.get("/stats"))
    _print_json(data)
    return 0


def cmd_paths(args) -> int:
    params = {
        "src": args.src,
        "dst": args.dst,
        "hops": args.hops,
        "top_k": args.top_k,
        "mode": args.mode,
    }
    with _client(args) as client:
        data = _handle(client.get("/paths", params=params))
    _print_json(data)
    return 0


def cmd_evidence(args) -> int:
    with _client(args) as client:
        data = _handle(
            client.post("/evidence", json={"query": args.query, "top_n": args.top_n})
        )
    _print_json(data)
    return 0


def cmd_metaquery(args) -> int:
    with _client(args) as client:
        data = _handle(
            client.post("/metaquery", json={"pattern": args.pattern, "top_n": args.top_n})
        )
    _print_json(data)
    return 0


def cmd_report(args) -> int:
    params = [("targets", t) for t in args.targets]
    params += [("hops", args.hops), ("top_k", args.top_k), ("mode", args.mode)]
    if args.generated:
        params.append(("generated", args.generated))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _client(args) as client:
        structured = client.get(f"/report/{args.drug}", params=params)
        if structured.status_code >= 400:
            _handle(structured)
        markdown = client.get(
            f"/report/{args.drug}", params=params + [("format", "markdown")]
        )
        if markdown.status_code >= 400:
            _handle(markdown)
    stem = args.drug.replace("/", "_")
    json_path = out_dir / f"{stem}.report.json"
    md_path = out_dir / f"{stem}.report.md"
    json_path.write_bytes(structured.content)
    md_path.write_bytes(markdown.content)
    print(f"wrote {json_path}")
    print(f"wrote {md_path}")
    return 0


def cmd_export(args) -> int:
    with _client(args) as client:
        response = client.get("/export", params={"format": args.format})
        data = _handle(response)
    if data is not None:
        _print_json(data)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="litkg", description=__doc__)
    parser.add_argument("--server", default=None, help="service base URL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8030")
    p.add_argument("--data-dir", default=None)
    p.add_argument("--ui-dir", default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("ingest", help="ingest bundle files")
    p.add_argument("bundles", nargs="+")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("ctd", help="link a CTD-style table")
    p.add_argument("table")
    p.set_defaults(func=cmd_ctd)

    p = sub.add_parser("update", help="apply an update manifest file")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("stats", help="graph statistics")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("paths", help="ranked paths between two entities")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--hops", type=int, default=3)
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--mode", default="AvgSupport")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("evidence", help="rank evidence sentences for a query")
    p.add_argument("--query", required=True)
    p.add_argument("--top-n", type=int, default=10)
    p.set_defaults(func=cmd_evidence)

    p = sub.add_parser("metaquery", help="typed-pattern sentence search")
    p.add_argument("pattern")
    p.add_argument("--top-n", type=int, default=10)
    p.set_defaults(func=cmd_metaquery)

    p = sub.add_parser("report", help="generate a drug repurposing report")
    p.add_argument("--drug", required=True)
    p.add_argument("--targets", required=True, nargs="+")
    p.add_argument("--out", default=".")
    p.add_argument("--hops", type=int, default=3)
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--mode", default="AvgSupport")
    p.add_argument("--generated", default=None, help="fixed timestamp for reproducible output")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export", help="export the graph")
    p.add_argument("--format", default="canonical", choices=["canonical", "graph-description"])
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
