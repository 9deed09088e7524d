"""Worker protocol messages.

Workers and the queue exchange these as length-prefixed JSON frames over
a persistent byte stream; native analyzers exchange the same objects
in-process. Request/response plumbing (registered, no_work, ok, error)
frames the conversation but carries no queue state. All timestamps are
UTC ISO-8601.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class Register:
    worker_id: str
    tool_ids: list[str]

    def to_wire(self) -> dict:
        return {"type": "register", "worker_id": self.worker_id, "tool_ids": list(self.tool_ids)}


@dataclass
class Lease:
    tool_ids: list[str]

    def to_wire(self) -> dict:
        return {"type": "lease", "tool_ids": list(self.tool_ids)}


@dataclass
class Assign:
    task_id: str
    doc_id: str
    tool_id: str
    inputs: dict[str, Any] = field(default_factory=dict)

    def to_wire(self) -> dict:
        return {
            "type": "assign",
            "task_id": self.task_id,
            "doc_id": self.doc_id,
            "tool_id": self.tool_id,
            "inputs": self.inputs,
        }

    @classmethod
    def from_wire(cls, data: dict) -> "Assign":
        return cls(
            task_id=data["task_id"],
            doc_id=data["doc_id"],
            tool_id=data["tool_id"],
            inputs=data.get("inputs", {}),
        )


@dataclass
class Complete:
    task_id: str
    output: Any

    def to_wire(self) -> dict:
        return {"type": "complete", "task_id": self.task_id, "output": self.output}


@dataclass
class Fail:
    task_id: str
    message: str
    retryable: bool

    def to_wire(self) -> dict:
        return {
            "type": "fail",
            "task_id": self.task_id,
            "message": self.message,
            "retryable": self.retryable,
        }


@dataclass
class Heartbeat:
    worker_id: str
    task_id: str

    def to_wire(self) -> dict:
        return {"type": "heartbeat", "worker_id": self.worker_id, "task_id": self.task_id}


def parse_message(data: dict):
    kind = data.get("type")
    if kind == "register":
        return Register(worker_id=data["worker_id"], tool_ids=list(data["tool_ids"]))
    if kind == "lease":
        return Lease(tool_ids=list(data.get("tool_ids", [])))
    if kind == "assign":
        return Assign.from_wire(data)
    if kind == "complete":
        return Complete(task_id=data["task_id"], output=data.get("output"))
    if kind == "fail":
        return Fail(
            task_id=data["task_id"],
            message=data.get("message", ""),
            retryable=bool(data.get("retryable", False)),
        )
    if kind == "heartbeat":
        return Heartbeat(worker_id=data["worker_id"], task_id=data["task_id"])
    raise ValueError(f"unknown message type {kind!r}")


def dep_records_to_outputs(deps: dict[str, dict]) -> dict[str, Any]:
    """Assign carries full analysis records per dependency; tools want outputs."""
    return {tool_id: rec.get("output") for tool_id, rec in deps.items()}
