"""Length-prefixed JSON framing and the worker protocol endpoint.

Frame layout: a 4-byte big-endian length followed by that many bytes of
UTF-8 JSON. One connection serves one worker: it registers once, then
loops lease -> assign -> complete/fail, heartbeating long tasks.
"""

from __future__ import annotations

import json
import socket
import struct
import threading
from typing import Optional

from ..errors import LeaseExpired, NotFound, QuarryError, UnknownTask
from .broker import Broker
from .messages import Assign, Complete, Fail, Heartbeat, Lease, Register, parse_message

MAX_FRAME = 16 * 1024 * 1024


def send_frame(sock: socket.socket, payload: dict) -> None:
    data = json.dumps(payload).encode("utf-8")
    if len(data) > MAX_FRAME:
        raise ValueError("frame too large")
    sock.sendall(struct.pack(">I", len(data)) + data)


def recv_frame(sock: socket.socket) -> Optional[dict]:
    header = _recv_exact(sock, 4)
    if header is None:
        return None
    (length,) = struct.unpack(">I", header)
    if length > MAX_FRAME:
        raise ValueError("frame too large")
    body = _recv_exact(sock, length)
    if body is None:
        return None
    return json.loads(body.decode("utf-8"))


def _recv_exact(sock: socket.socket, n: int) -> Optional[bytes]:
    chunks = []
    remaining = n
    while remaining:
        chunk = sock.recv(remaining)
        if not chunk:
            return None
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


class WorkerProtocolServer:
    """Accepts worker connections and bridges them onto the broker."""

    def __init__(self, broker: Broker, host: str = "127.0.0.1", port: int = 0):
        self._broker = broker
        self._listener = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._listener.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._listener.bind((host, port))
        self._listener.listen()
        self._listener.settimeout(0.2)  # lets the accept loop notice stop()
        self.host, self.port = self._listener.getsockname()
        self._stop = threading.Event()
        self._accept_thread: Optional[threading.Thread] = None
        self._conns: list[socket.socket] = []

    def start(self) -> None:
        self._accept_thread = threading.Thread(target=self._accept_loop, daemon=True, name="worker-proto")
        self._accept_thread.start()

    def stop(self) -> None:
        self._stop.set()
        try:
            self._listener.close()
        except OSError:
            pass
        for conn in list(self._conns):
            try:
                conn.close()
            except OSError:
                pass
        if self._accept_thread is not None:
            self._accept_thread.join(timeout=2)

    def _accept_loop(self) -> None:
        while not self._stop.is_set():
            try:
                conn, _addr = self._listener.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            conn.settimeout(None)
            self._conns.append(conn)
            threading.Thread(target=self._serve, args=(conn,), daemon=True).start()

    def _serve(self, conn: socket.socket) -> None:
        worker_id: Optional[str] = None
        registered_tools: list[str] = []
        try:
            while not self._stop.is_set():
                data = recv_frame(conn)
                if data is None:
                    return
                try:
                    msg = parse_message(data)
                    reply = self._dispatch(msg, worker_id, registered_tools)
                    if isinstance(msg, Register):
                        worker_id = msg.worker_id
                        registered_tools = list(msg.tool_ids)
                except QuarryError as exc:
                    reply = {"type": "error", "kind": type(exc).__name__, "message": str(exc)}
                except (ValueError, KeyError) as exc:
                    reply = {"type": "error", "kind": "BadMessage", "message": str(exc)}
                send_frame(conn, reply)
        except (OSError, json.JSONDecodeError):
            return
        finally:
            try:
                conn.close()
            except OSError:
                pass

    def _dispatch(self, msg, worker_id: Optional[str], registered_tools: list[str]) -> dict:
        if isinstance(msg, Register):
            return {"type": "registered", "worker_id": msg.worker_id}
        if worker_id is None:
            return {"type": "error", "kind": "NotRegistered", "message": "register first"}
        if isinstance(msg, Lease):
            tools = msg.tool_ids or registered_tools
            assign = self._broker.lease(worker_id, tools)
            return assign.to_wire() if assign is not None else {"type": "no_work"}
        if isinstance(msg, Complete):
            self._broker.complete(msg.task_id, msg.output, worker_id=worker_id)
            return {"type": "ok"}
        if isinstance(msg, Fail):
            self._broker.fail(msg.task_id, msg.message, msg.retryable, worker_id=worker_id)
            return {"type": "ok"}
        if isinstance(msg, Heartbeat):
            alive = self._broker.heartbeat(msg.worker_id, msg.task_id)
            return {"type": "ok", "lease_held": alive}
        return {"type": "error", "kind": "BadMessage", "message": f"unexpected {type(msg).__name__}"}


class WorkerClient:
    """Client side of the protocol, for external workers and tests."""

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass

    def _call(self, msg) -> dict:
        send_frame(self._sock, msg.to_wire())
        reply = recv_frame(self._sock)
        if reply is None:
            raise ConnectionError("server closed the connection")
        if reply.get("type") == "error":
            kind = reply.get("kind")
            if kind == "LeaseExpired":
                raise LeaseExpired(reply.get("message", ""))
            if kind == "UnknownTask":
                raise UnknownTask(reply.get("message", ""))
            if kind == "NotFound":
                raise NotFound(reply.get("message", ""))
            raise QuarryError(f"{kind}: {reply.get('message', '')}")
        return reply

    def register(self, worker_id: str, tool_ids: list[str]) -> dict:
        return self._call(Register(worker_id=worker_id, tool_ids=tool_ids))

    def lease(self, tool_ids: Optional[list[str]] = None) -> Optional[Assign]:
        reply = self._call(Lease(tool_ids=tool_ids or []))
        if reply.get("type") == "no_work":
            return None
        return Assign.from_wire(reply)

    def complete(self, task_id: str, output) -> None:
        self._call(Complete(task_id=task_id, output=output))

    def fail(self, task_id: str, message: str, retryable: bool) -> None:
        self._call(Fail(task_id=task_id, message=message, retryable=retryable))

    def heartbeat(self, worker_id: str, task_id: str) -> bool:
        reply = self._call(Heartbeat(worker_id=worker_id, task_id=task_id))
        return bool(reply.get("lease_held"))
