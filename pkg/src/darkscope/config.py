"""Pipeline configuration: sectioned key-value files with CLI overrides."""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

_DURATION_RE = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([smhd]?)\s*$")
_UNIT_SECONDS = {"": 1.0, "s": 1.0, "m": 60.0, "h": 3600.0, "d": 86400.0}


def parse_duration(value: str | float | int) -> float:
    """'90', '90s', '15m', '4h', '5d' -> seconds."""
    if isinstance(value, (int, float)):
        return float(value)
    m = _DURATION_RE.match(value)
    if not m:
        raise ValueError(f"bad duration: {value!r}")
    return float(m.group(1)) * _UNIT_SECONDS[m.group(2)]


@dataclass
class PipelineConfig:
    store_root: Path = Path("./darkscope-store")
    corpus_list: Path | None = None
    target_lang: str = "en"
    fixture_mode: bool = True
    classifier_seed: int = 7
    max_urls_visited: int = 100
    max_wall_time: float = 900.0
    max_product_pages: int = 5
    max_visits_per_url: int = 2
    workers: int = 2
    min_df: int = 2
    min_cluster_size: int = 5
    metric: str = "l2"
    variance_target: float = 0.95
    monitor_interval: float = 0.5
    monitor_duration: float = 3.5
    reload_check: bool = True
    service_host: str = "127.0.0.1"
    service_port: int = 8321
    rank_bin_width: int = 1000

    def validate(self) -> None:
        if self.min_df < 1:
            raise ValueError("min_df must be >= 1")
        if self.min_cluster_size < 2:
            raise ValueError("min_cluster_size must be >= 2")
        if self.metric not in ("l1", "l2"):
            raise ValueError("metric must be l1 or l2")
        if self.monitor_duration < 2 * self.monitor_interval:
            raise ValueError("monitor duration must be at least twice the interval")
        for name in ("max_urls_visited", "max_product_pages", "max_visits_per_url", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def load_config(path: str | Path | None, overrides: dict | None = None) -> PipelineConfig:
    cfg = PipelineConfig()
    if path is not None:
        parser = configparser.ConfigParser()
        read = parser.read(str(path))
        if not read:
            raise FileNotFoundError(f"config file not found: {path}")

        def get(section: str, key: str, default):
            if parser.has_option(section, key):
                return parser.get(section, key)
            return default

        cfg.store_root = Path(get("store", "root", cfg.store_root))
        raw_list = get("corpus", "list", None)
        cfg.corpus_list = Path(raw_list) if raw_list else None
        cfg.target_lang = get("corpus", "target_lang", cfg.target_lang)
        cfg.fixture_mode = str(get("pipeline", "fixture_mode", cfg.fixture_mode)).lower() in ("1", "true", "yes")
        cfg.classifier_seed = int(get("discovery", "seed", cfg.classifier_seed))
        cfg.max_urls_visited = int(get("discovery", "max_urls_visited", cfg.max_urls_visited))
        cfg.max_wall_time = parse_duration(get("discovery", "max_wall_time", cfg.max_wall_time))
        cfg.max_product_pages = int(get("discovery", "max_product_pages", cfg.max_product_pages))
        cfg.max_visits_per_url = int(get("discovery", "max_visits_per_url", cfg.max_visits_per_url))
        cfg.workers = int(get("pipeline", "workers", cfg.workers))
        cfg.min_df = int(get("cluster", "min_df", cfg.min_df))
        cfg.min_cluster_size = int(get("cluster", "min_cluster_size", cfg.min_cluster_size))
        cfg.metric = get("cluster", "metric", cfg.metric)
        cfg.variance_target = float(get("cluster", "variance_target", cfg.variance_target))
        cfg.monitor_interval = parse_duration(get("monitor", "interval", cfg.monitor_interval))
        cfg.monitor_duration = parse_duration(get("monitor", "duration", cfg.monitor_duration))
        cfg.reload_check = str(get("monitor", "reload_check", cfg.reload_check)).lower() in ("1", "true", "yes")
        cfg.service_host = get("service", "host", cfg.service_host)
        cfg.service_port = int(get("service", "port", cfg.service_port))
        cfg.rank_bin_width = int(get("report", "rank_bin_width", cfg.rank_bin_width))
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    cfg.validate()
    return cfg
