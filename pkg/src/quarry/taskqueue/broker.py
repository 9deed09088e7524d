"""Two-priority durable task queue with pull-based workers.

Jobs group the per-document execution plans of one request. Every task of
a plan exists from submission, but only chain heads are leasable; each
completion readies the next task of its chain. Interactive tasks always
lease before batch tasks; within a priority class the queue is FIFO by
the moment a task became leasable.

Fault tolerance: a lease carries a deadline; the reaper returns expired
leases to the queue until a task has consumed its attempts, after which
it fails permanently (keeping attempt <= max_attempts while staying
live). A permanent failure records an error analysis and cancels the
tasks downstream in the same chain, whose prerequisites can never be
satisfied; other chains continue. Retryable failures back off by
2^attempt seconds.

All state transitions happen under one lock, so concurrent lease calls
never hand the same task to two workers.
"""

from __future__ import annotations

import heapq
import itertools
import queue
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Optional

from ..docstore import AnalysisRecord, DocStore
from ..errors import LeaseExpired, NotFound, UnknownTask
from ..pipeline import ExecutionPlan, ToolRegistry, plan as build_plan
from .messages import Assign

PRIORITY = {"interactive": 0, "batch": 1}

QUEUED, LEASED, OK, ERROR, RETRY_WAIT, CANCELLED = (
    "queued", "leased", "ok", "error", "retry_wait", "cancelled",
)
TERMINAL = (OK, ERROR, CANCELLED)


@dataclass
class Task:
    task_id: str
    job_id: str
    doc_id: str
    tool_id: str
    tool_version: str
    priority: int
    state: str = QUEUED
    attempt: int = 0
    lease_deadline: Optional[float] = None
    worker_id: Optional[str] = None
    retry_at: Optional[float] = None
    # chain bookkeeping: tasks become leasable head-first
    chain: tuple[str, int] = ("", 0)  # (doc_id, component index)
    chain_pos: int = 0
    ready: bool = False
    enqueue_seq: Optional[int] = None

    def summary(self) -> dict:
        return {
            "task_id": self.task_id,
            "doc_id": self.doc_id,
            "tool_id": self.tool_id,
            "tool_version": self.tool_version,
            "priority": self.priority,
            "state": self.state,
            "attempt": self.attempt,
        }


@dataclass
class Job:
    job_id: str
    kind: str
    doc_ids: list[str]
    state: str = "pending"
    created_at: Optional[datetime] = None
    plans: dict[str, ExecutionPlan] = field(default_factory=dict)
    cached: dict[str, list[str]] = field(default_factory=dict)  # doc -> requested tools served from cache
    task_ids: list[str] = field(default_factory=list)
    requested: list[str] = field(default_factory=list)


class Broker:
    """In-process queue core shared by the REST API and the worker protocol."""

    def __init__(
        self,
        store: DocStore,
        registry: ToolRegistry,
        lease_ttl: float = 300.0,
        max_attempts: int = 3,
        clock: Callable[[], float] = time.time,
    ):
        self._store = store
        self._registry = registry
        self.lease_ttl = lease_ttl
        self.max_attempts = max_attempts
        self._clock = clock
        self._lock = threading.RLock()
        self._jobs: dict[str, Job] = {}
        self._tasks: dict[str, Task] = {}
        self._queues: dict[str, list[tuple[int, int, str]]] = {}  # tool -> heap
        self._seq = itertools.count()
        self._job_seq = itertools.count(1)
        self._events: dict[str, list[dict]] = {}
        self._subscribers: dict[str, list[queue.Queue]] = {}
        self._work_available = threading.Condition(self._lock)

    # ------------------------------------------------------------- submit

    def submit(self, kind: str, doc_ids: list[str], requested_tools: list[str], force: bool = False) -> str:
        """Plan and enqueue one job; fully cached requests complete immediately."""
        if kind not in PRIORITY:
            raise ValueError(f"unknown job kind {kind!r}")
        requested = sorted(set(requested_tools))
        with self._lock:
            for doc_id in doc_ids:
                self._store.get_document(doc_id)  # NotFound propagates
            job_id = f"job-{next(self._job_seq):06d}"
            job = Job(
                job_id=job_id, kind=kind, doc_ids=list(doc_ids),
                created_at=datetime.now(timezone.utc), requested=requested,
            )
            self._jobs[job_id] = job
            self._events[job_id] = []
            for doc_id in doc_ids:
                closure = self._registry.resolve(requested).nodes
                satisfied = set()
                if not force:
                    satisfied = {t for t in closure if self._cached_ok(doc_id, t)}
                graph = self._registry.resolve(requested, satisfied)
                doc_plan = build_plan(graph)
                job.plans[doc_id] = doc_plan
                job.cached[doc_id] = sorted(set(requested) & satisfied)
                for comp_idx, chain in enumerate(doc_plan.chains):
                    for pos, tool_id in enumerate(chain):
                        task = Task(
                            task_id=f"{job_id}-t{len(job.task_ids):05d}",
                            job_id=job_id,
                            doc_id=doc_id,
                            tool_id=tool_id,
                            tool_version=self._registry.version_of(tool_id),
                            priority=PRIORITY[kind],
                            chain=(doc_id, comp_idx),
                            chain_pos=pos,
                        )
                        self._tasks[task.task_id] = task
                        job.task_ids.append(task.task_id)
                        if pos == 0:
                            self._make_ready(task)
            if not job.task_ids:
                job.state = "done"
            self._emit(job, {"event": "job", "job_id": job_id, "state": job.state})
            self._work_available.notify_all()
            return job_id

    def _cached_ok(self, doc_id: str, tool_id: str) -> bool:
        rec = self._store.get_analysis(doc_id, tool_id, self._registry.version_of(tool_id))
        return rec is not None and rec.status == "ok"

    def _make_ready(self, task: Task) -> None:
        task.ready = True
        task.enqueue_seq = next(self._seq)
        heapq.heappush(
            self._queues.setdefault(task.tool_id, []),
            (task.priority, task.enqueue_seq, task.task_id),
        )
        self._emit_task(task)

    # -------------------------------------------------------------- lease

    def lease(self, worker_id: str, tool_ids: list[str], now: Optional[float] = None) -> Optional[Assign]:
        """Hand out the oldest highest-priority leasable task for these tools."""
        now = self._clock() if now is None else now
        with self._lock:
            self._promote_retries(now)
            best_key = None
            best_tool = None
            for tool_id in tool_ids:
                heap = self._queues.get(tool_id)
                while heap:
                    priority, seq, task_id = heap[0]
                    task = self._tasks.get(task_id)
                    if task is None or task.state != QUEUED or not task.ready or task.enqueue_seq != seq:
                        heapq.heappop(heap)  # stale entry
                        continue
                    if best_key is None or (priority, seq) < best_key:
                        best_key = (priority, seq)
                        best_tool = tool_id
                    break
            if best_tool is None:
                return None
            _, _, task_id = heapq.heappop(self._queues[best_tool])
            task = self._tasks[task_id]
            task.state = LEASED
            task.attempt += 1
            task.worker_id = worker_id
            task.lease_deadline = now + self.lease_ttl
            job = self._jobs[task.job_id]
            if job.state == "pending":
                job.state = "running"
                self._emit(job, {"event": "job", "job_id": job.job_id, "state": job.state})
            self._emit_task(task)
            return Assign(
                task_id=task.task_id,
                doc_id=task.doc_id,
                tool_id=task.tool_id,
                inputs=self._build_inputs(task),
            )

    def _build_inputs(self, task: Task) -> dict:
        doc = self._store.get_document(task.doc_id)
        deps = {}
        for dep in self._registry.require(task.tool_id).depends_on:
            rec = self._store.get_analysis(task.doc_id, dep, self._registry.version_of(dep))
            if rec is not None and rec.status == "ok":
                deps[dep] = rec.to_json()
        return {"text": doc.text, "fields": dict(doc.fields), "deps": deps}

    def _promote_retries(self, now: float) -> None:
        for task in self._tasks.values():
            if task.state == RETRY_WAIT and task.retry_at is not None and task.retry_at <= now:
                task.state = QUEUED
                task.retry_at = None
                self._make_ready(task)

    # ----------------------------------------------------- worker results

    def _held_task(self, task_id: str, worker_id: Optional[str]) -> Task:
        task = self._tasks.get(task_id)
        if task is None:
            raise UnknownTask(f"no task {task_id!r}")
        if task.state != LEASED or (worker_id is not None and task.worker_id != worker_id):
            raise LeaseExpired(f"caller no longer holds the lease on {task_id}")
        return task

    def complete(self, task_id: str, output, worker_id: Optional[str] = None, now: Optional[float] = None) -> None:
        """Record a success, persist the analysis, and ready the chain successor."""
        with self._lock:
            task = self._held_task(task_id, worker_id)
            self._store.put_analysis(
                AnalysisRecord(
                    doc_id=task.doc_id, tool_id=task.tool_id, tool_version=task.tool_version,
                    status="ok", output=output,
                )
            )
            task.state = OK
            task.worker_id = None
            task.lease_deadline = None
            self._emit_task(task, output=output)
            successor = self._chain_successor(task)
            if successor is not None:
                self._make_ready(successor)
            self._recompute_job(self._jobs[task.job_id])
            self._work_available.notify_all()

    def fail(
        self,
        task_id: str,
        message: str,
        retryable: bool,
        worker_id: Optional[str] = None,
        now: Optional[float] = None,
    ) -> None:
        """Retry with backoff while attempts remain, else fail the chain tail."""
        now = self._clock() if now is None else now
        with self._lock:
            task = self._held_task(task_id, worker_id)
            task.worker_id = None
            task.lease_deadline = None
            if retryable and task.attempt < self.max_attempts:
                task.state = RETRY_WAIT
                task.retry_at = now + 2.0**task.attempt
                self._emit_task(task)
            else:
                self._fail_permanently(task, message)
            self._recompute_job(self._jobs[task.job_id])
            self._work_available.notify_all()

    def _fail_permanently(self, task: Task, message: str) -> None:
        task.state = ERROR
        self._store.put_analysis(
            AnalysisRecord(
                doc_id=task.doc_id, tool_id=task.tool_id, tool_version=task.tool_version,
                status="error", error_message=message,
            )
        )
        self._emit_task(task, error=message)
        job = self._jobs[task.job_id]
        for other_id in job.task_ids:
            other = self._tasks[other_id]
            if (
                other.chain == task.chain
                and other.chain_pos > task.chain_pos
                and other.state not in TERMINAL
            ):
                other.state = CANCELLED
                other.ready = False
                self._emit_task(other)

    def _chain_successor(self, task: Task) -> Optional[Task]:
        job = self._jobs[task.job_id]
        for other_id in job.task_ids:
            other = self._tasks[other_id]
            if other.chain == task.chain and other.chain_pos == task.chain_pos + 1:
                return other if other.state == QUEUED and not other.ready else None
        return None

    def heartbeat(self, worker_id: str, task_id: str, now: Optional[float] = None) -> bool:
        """Extend a held lease; False if the caller no longer holds it."""
        now = self._clock() if now is None else now
        with self._lock:
            task = self._tasks.get(task_id)
            if task is None or task.state != LEASED or task.worker_id != worker_id:
                return False
            task.lease_deadline = now + self.lease_ttl
            return True

    # ------------------------------------------------------------- reaper

    def reap_expired(self, now: Optional[float] = None) -> int:
        """Return expired leases to the queue (attempt unchanged); a task out
        of attempts fails permanently instead of looping forever."""
        now = self._clock() if now is None else now
        reaped = 0
        with self._lock:
            self._promote_retries(now)
            touched_jobs = set()
            for task in list(self._tasks.values()):
                if task.state != LEASED or task.lease_deadline is None or task.lease_deadline >= now:
                    continue
                task.worker_id = None
                task.lease_deadline = None
                if task.attempt < self.max_attempts:
                    task.state = QUEUED
                    self._make_ready(task)
                else:
                    self._fail_permanently(task, "lease expired and attempts exhausted")
                    touched_jobs.add(task.job_id)
                reaped += 1
            for job_id in touched_jobs:
                self._recompute_job(self._jobs[job_id])
            if reaped:
                self._work_available.notify_all()
        return reaped

    # ------------------------------------------------------------- status

    def job_status(self, job_id: str) -> dict:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                raise NotFound(f"no job with id {job_id!r}")
            tasks = [self._tasks[tid].summary() for tid in job.task_ids]
            counts: dict[str, int] = {}
            for t in tasks:
                counts[t["state"]] = counts.get(t["state"], 0) + 1
            return {
                "job_id": job.job_id,
                "kind": job.kind,
                "state": job.state,
                "created_at": job.created_at.isoformat() if job.created_at else None,
                "doc_ids": list(job.doc_ids),
                "requested_tools": list(job.requested),
                "cached": {d: list(ts) for d, ts in job.cached.items()},
                "tasks": tasks,
                "counts": counts,
                "task_count": len(tasks),
            }

    def job_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._jobs)

    def _recompute_job(self, job: Job) -> None:
        states = [self._tasks[tid].state for tid in job.task_ids]
        if all(s in TERMINAL for s in states):
            if all(s == OK for s in states):
                new = "done"
            elif any(s == OK for s in states):
                new = "partial_failure"
            else:
                new = "failed"
        elif all(s == QUEUED for s in states):
            new = "pending"
        else:
            new = "running"
        if new != job.state:
            job.state = new
            self._emit(job, {"event": "job", "job_id": job.job_id, "state": new})

    # ------------------------------------------------------------- events

    def _emit_task(self, task: Task, output=None, error: Optional[str] = None) -> None:
        payload = {"event": "task", **task.summary()}
        if output is not None:
            payload["output"] = output
        if error is not None:
            payload["error"] = error
        self._emit(self._jobs[task.job_id], payload)

    def _emit(self, job: Job, payload: dict) -> None:
        payload = dict(payload)
        payload["ts"] = datetime.now(timezone.utc).isoformat()
        self._events[job.job_id].append(payload)
        for sub in self._subscribers.get(job.job_id, []):
            sub.put(payload)

    def subscribe(self, job_id: str) -> queue.Queue:
        """Queue of job events; already-emitted events are replayed first."""
        with self._lock:
            if job_id not in self._jobs:
                raise NotFound(f"no job with id {job_id!r}")
            sub: queue.Queue = queue.Queue()
            for event in self._events[job_id]:
                sub.put(event)
            self._subscribers.setdefault(job_id, []).append(sub)
            return sub

    def unsubscribe(self, job_id: str, sub: queue.Queue) -> None:
        with self._lock:
            subs = self._subscribers.get(job_id, [])
            if sub in subs:
                subs.remove(sub)

    def wait_for_work(self, timeout: float) -> None:
        with self._work_available:
            self._work_available.wait(timeout)

    # ------------------------------------------------------ test support

    def state_counts(self) -> dict[str, int]:
        with self._lock:
            counts: dict[str, int] = {}
            for task in self._tasks.values():
                counts[task.state] = counts.get(task.state, 0) + 1
            return counts
