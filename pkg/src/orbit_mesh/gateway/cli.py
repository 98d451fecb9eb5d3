"""orbit-gateway: serve the API gateway."""

from __future__ import annotations

import argparse

from orbit_mesh.configfile import load_config
from orbit_mesh.ctm.client import CtmClient
from orbit_mesh.dispatcher.client import DispatcherClient
from orbit_mesh.gateway.service import GatewayConfig, GatewayService
from orbit_mesh.httpcommon import resolve_token, serve
from orbit_mesh.storage.paths import open_storage


def build_service(cfg: dict) -> GatewayService:
    config = GatewayConfig(
        dispatcher_url=cfg.get("dispatcher_url", "http://127.0.0.1:7070"),
        ctm_url=cfg.get("ctm_url", "http://127.0.0.1:7072"),
        data_root=cfg.get("data_root", "./orbit-data"),
        host=cfg.get("host", "127.0.0.1"),
        port=cfg.get("port", 7071),
        token=cfg.get("token"),
        max_inline_payload=cfg.get("max_inline_payload", 1024 * 1024),
        submit_tries=cfg.get("submit_tries", 3),
        backoff_base_s=cfg.get("backoff_base_s", 0.1),
    )
    token = resolve_token(config.token)
    store, blobs = open_storage(config.data_root)
    return GatewayService(
        dispatcher=DispatcherClient(config.dispatcher_url, token=token),
        ctm=CtmClient(config.ctm_url, token=token),
        store=store, blobs=blobs, config=config,
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="orbit-gateway")
    sub = parser.add_subparsers(dest="command", required=True)
    serve_p = sub.add_parser("serve", help="run the API gateway")
    serve_p.add_argument("--config", required=True, help="TOML or JSON config file")
    args = parser.parse_args(argv)

    cfg = load_config(args.config)
    service = build_service(cfg)
    from orbit_mesh.gateway.app import create_app

    app = create_app(service, token=resolve_token(service.config.token))
    serve(app, service.config.host, service.config.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
