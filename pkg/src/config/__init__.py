"""Configuration for htmobility."""

from src.config.settings import ColumnMap, KMeansConfig, RunConfig, ServiceSettings, load_run_config

__all__ = ["ColumnMap", "KMeansConfig", "RunConfig", "ServiceSettings", "load_run_config"]
