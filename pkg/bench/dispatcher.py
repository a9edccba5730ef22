"""Cell Dispatcher — run independent benchmark cells concurrently.

Uses ``asyncio.gather`` with ``return_exceptions=True`` so one failing cell
never blocks the others.  Each cell is a plain synchronous callable executed
in a worker thread (``asyncio.to_thread``); a semaphore caps concurrency.
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass
from typing import Any, Callable

from loguru import logger


@dataclass(frozen=True)
class Cell:
    """One unit of bench work; ``run`` must be thread-safe."""

    label: str
    run: Callable[[], Any]


class CellDispatcher:
    """Dispatch a list of Cell objects to worker threads."""

    def __init__(self, max_workers: int = 4):
        self.max_workers = max(1, int(max_workers))

    async def dispatch(self, cells: list[Cell]) -> list[dict]:
        """Execute *cells* concurrently.

        Returns one result dict per cell (same order as input):
        ``{"label", "success": True, "result"}`` or
        ``{"label", "success": False, "error", "exception"}``.
        """
        semaphore = asyncio.Semaphore(self.max_workers)
        total = len(cells)
        done = 0

        async def guarded(cell: Cell) -> Any:
            nonlocal done
            async with semaphore:
                result = await asyncio.to_thread(cell.run)
            done += 1
            logger.info(f"  [{done}/{total}] {cell.label} done")
            return result

        raw = await asyncio.gather(*(guarded(c) for c in cells), return_exceptions=True)

        results: list[dict] = []
        for cell, result in zip(cells, raw):
            if isinstance(result, BaseException):
                logger.warning(f"Cell {cell.label} raised: {result}")
                results.append({
                    "label": cell.label,
                    "success": False,
                    "error": str(result),
                    "exception": result,
                })
            else:
                results.append({"label": cell.label, "success": True, "result": result})
        return results
