"""有序并行映射.

独立轨迹 (系综成员、参数扫描) 在线程池中运行，结果按输入顺序返回，
保证归约顺序与线程数无关。
"""

from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor

from loguru import logger


def resolve_threads(threads: int | None) -> int:
    """解析线程数，None 或非正数表示使用全部可用核心."""
    if threads is None or threads <= 0:
        return os.cpu_count() or 1
    return threads


def ordered_map[T, R](fn: Callable[[T], R], items: Iterable[T], threads: int | None = 1) -> list[R]:
    """并行执行 fn 并按输入顺序收集结果.

    Args:
        fn: 无共享可变状态的任务函数。
        items: 任务输入。
        threads: 线程数，1 表示串行执行。

    Returns:
        与 items 顺序一致的结果列表。
    """
    work = list(items)
    workers = min(resolve_threads(threads), max(len(work), 1))
    if workers == 1:
        return [fn(item) for item in work]

    logger.debug(f"Dispatching {len(work)} tasks to {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))
