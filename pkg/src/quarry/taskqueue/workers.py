"""In-process worker threads for the native analyzers, plus the lease reaper.

Native workers speak the same message objects as external ones: they pull
an Assign from the broker, run the tool callable, and report Complete or
Fail semantics through the broker's methods. Analyzer errors are not
retryable (the tools are deterministic), so a failure surfaces
immediately as an error record.
"""

from __future__ import annotations

import logging
import threading
from typing import Callable

from ..analyzers.tools import ToolInputs
from ..errors import LeaseExpired, QuarryError
from .broker import Broker
from .messages import dep_records_to_outputs

logger = logging.getLogger(__name__)


class NativeWorkerPool:
    def __init__(
        self,
        broker: Broker,
        tools: dict[str, Callable[[ToolInputs], dict]],
        workers: int = 2,
        poll_interval: float = 0.05,
    ):
        self._broker = broker
        self._tools = tools
        self._count = workers
        self._poll = poll_interval
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

    def start(self) -> None:
        for i in range(self._count):
            t = threading.Thread(target=self._run, args=(f"native-{i}",), daemon=True, name=f"native-{i}")
            t.start()
            self._threads.append(t)

    def stop(self) -> None:
        self._stop.set()
        for t in self._threads:
            t.join(timeout=2)
        self._threads.clear()

    def _run(self, worker_id: str) -> None:
        tool_ids = sorted(self._tools)
        while not self._stop.is_set():
            assign = self._broker.lease(worker_id, tool_ids)
            if assign is None:
                self._broker.wait_for_work(self._poll)
                continue
            inputs = ToolInputs(
                doc_id=assign.doc_id,
                text=assign.inputs.get("text", ""),
                fields=assign.inputs.get("fields", {}),
                deps=dep_records_to_outputs(assign.inputs.get("deps", {})),
            )
            try:
                output = self._tools[assign.tool_id](inputs)
            except QuarryError as exc:
                self._report_failure(assign.task_id, worker_id, str(exc))
                continue
            except Exception as exc:  # analyzer bug: fail the task, keep the worker
                logger.exception("tool %s crashed on %s", assign.tool_id, assign.doc_id)
                self._report_failure(assign.task_id, worker_id, f"{type(exc).__name__}: {exc}")
                continue
            try:
                self._broker.complete(assign.task_id, output, worker_id=worker_id)
            except LeaseExpired:
                logger.warning("lease lost before completion of %s", assign.task_id)

    def _report_failure(self, task_id: str, worker_id: str, message: str) -> None:
        try:
            self._broker.fail(task_id, message, retryable=False, worker_id=worker_id)
        except LeaseExpired:
            logger.warning("lease lost before failure report of %s", task_id)


class Reaper:
    """Periodically returns expired leases to the queue."""

    def __init__(self, broker: Broker, interval: float = 1.0):
        self._broker = broker
        self._interval = interval
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        self._thread = threading.Thread(target=self._run, daemon=True, name="reaper")
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2)

    def _run(self) -> None:
        while not self._stop.wait(self._interval):
            self._broker.reap_expired()
