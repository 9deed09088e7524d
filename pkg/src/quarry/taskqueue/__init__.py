"""Two-priority task queue, worker protocol, and worker runners."""

from .broker import Broker, Job, Task
from .messages import Assign, Complete, Fail, Heartbeat, Lease, Register, parse_message
from .wire import WorkerClient, WorkerProtocolServer, recv_frame, send_frame
from .workers import NativeWorkerPool, Reaper

__all__ = [
    "Assign",
    "Broker",
    "Complete",
    "Fail",
    "Heartbeat",
    "Job",
    "Lease",
    "NativeWorkerPool",
    "Reaper",
    "Register",
    "Task",
    "WorkerClient",
    "WorkerProtocolServer",
    "parse_message",
    "recv_frame",
    "send_frame",
]
