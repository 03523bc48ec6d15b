"""工具函数模块."""

from spinforge.utils.logger import setup_logger
from spinforge.utils.parallel import ordered_map, resolve_threads

__all__ = ["ordered_map", "resolve_threads", "setup_logger"]
