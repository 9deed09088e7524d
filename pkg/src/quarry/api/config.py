"""Service configuration: one INI file plus QUARRY_* environment overrides.

Example file:

    [server]
    listen_host = 127.0.0.1
    listen_port = 8901
    data_dir = /var/lib/quarry

    [paths]
    registry = /etc/quarry/registry.json
    lexicon = /etc/quarry/lexicon.tsv
    gazetteer = /etc/quarry/gazetteer.tsv
    kb = /etc/quarry/kb.jsonl

    [queue]
    lease_ttl = 300
    max_attempts = 3
    native_workers = 2
    worker_port = 8902

Anything omitted falls back to the bundled assets and an in-memory store.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path

ASSETS_DIR = Path(__file__).resolve().parents[1] / "assets"

_ENV_MAP = {
    "QUARRY_LISTEN_HOST": ("server", "listen_host"),
    "QUARRY_LISTEN_PORT": ("server", "listen_port"),
    "QUARRY_DATA_DIR": ("server", "data_dir"),
    "QUARRY_UI_DIR": ("server", "ui_dir"),
    "QUARRY_REGISTRY": ("paths", "registry"),
    "QUARRY_LEXICON": ("paths", "lexicon"),
    "QUARRY_GAZETTEER": ("paths", "gazetteer"),
    "QUARRY_KB": ("paths", "kb"),
    "QUARRY_LEASE_TTL": ("queue", "lease_ttl"),
    "QUARRY_MAX_ATTEMPTS": ("queue", "max_attempts"),
    "QUARRY_NATIVE_WORKERS": ("queue", "native_workers"),
    "QUARRY_WORKER_PORT": ("queue", "worker_port"),
}


@dataclass
class ServiceConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8901
    data_dir: str = ""  # empty: in-memory store
    ui_dir: str = ""
    registry_path: str = str(ASSETS_DIR / "registry.json")
    lexicon_path: str = str(ASSETS_DIR / "lexicon.tsv")
    gazetteer_path: str = str(ASSETS_DIR / "gazetteer.tsv")
    kb_path: str = str(ASSETS_DIR / "kb.jsonl")
    lease_ttl: float = 300.0
    max_attempts: int = 3
    native_workers: int = 2
    worker_port: int = -1  # -1: worker protocol listener disabled, 0: ephemeral

    def store_path(self) -> str:
        if not self.data_dir:
            return ":memory:"
        os.makedirs(self.data_dir, exist_ok=True)
        return str(Path(self.data_dir) / "corpus.db")


def load_config(path: str | None = None, env: dict | None = None) -> ServiceConfig:
    env = os.environ if env is None else env
    parser = configparser.ConfigParser()
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    for var, (section, option) in _ENV_MAP.items():
        if var in env:
            if not parser.has_section(section):
                parser.add_section(section)
            parser.set(section, option, env[var])

    cfg = ServiceConfig()
    get = parser.get
    if parser.has_section("server"):
        cfg.listen_host = get("server", "listen_host", fallback=cfg.listen_host)
        cfg.listen_port = parser.getint("server", "listen_port", fallback=cfg.listen_port)
        cfg.data_dir = get("server", "data_dir", fallback=cfg.data_dir)
        cfg.ui_dir = get("server", "ui_dir", fallback=cfg.ui_dir)
    if parser.has_section("paths"):
        cfg.registry_path = get("paths", "registry", fallback=cfg.registry_path)
        cfg.lexicon_path = get("paths", "lexicon", fallback=cfg.lexicon_path)
        cfg.gazetteer_path = get("paths", "gazetteer", fallback=cfg.gazetteer_path)
        cfg.kb_path = get("paths", "kb", fallback=cfg.kb_path)
    if parser.has_section("queue"):
        cfg.lease_ttl = parser.getfloat("queue", "lease_ttl", fallback=cfg.lease_ttl)
        cfg.max_attempts = parser.getint("queue", "max_attempts", fallback=cfg.max_attempts)
        cfg.native_workers = parser.getint("queue", "native_workers", fallback=cfg.native_workers)
        cfg.worker_port = parser.getint("queue", "worker_port", fallback=cfg.worker_port)
    return cfg
