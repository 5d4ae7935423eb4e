"""Workstation <-> robot line protocol over TCP.

Every message is one UTF-8 line, ``TAG [payload]\\n``. Numeric payloads are
written with exactly six decimals. The workstation (planner server) sends a
single ``THETA`` when the robot connects; the robot then runs autonomously
and streams status lines (``RANGE``, ``LANE_LOST``, ``TARGET_FOUND``,
``ERROR``) until it sends ``DONE``.
"""

from __future__ import annotations

import enum
import logging
import math
import os
import queue
import socket
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple, Union

from .errors import EncodingError, ProtocolError, TransportError

log = logging.getLogger(__name__)

DEFAULT_PORT = 7878
PORT_ENV = "WAYPATH_PORT"


def default_port() -> int:
    value = os.environ.get(PORT_ENV)
    if not value:
        return DEFAULT_PORT
    try:
        port = int(value)
    except ValueError:
        raise ValueError(f"{PORT_ENV}={value!r} is not a port number") from None
    if not 0 <= port <= 65535:
        raise ValueError(f"{PORT_ENV}={port} out of range")
    return port


class MsgType(enum.Enum):
    THETA = "THETA"
    RANGE = "RANGE"
    TARGET_FOUND = "TARGET_FOUND"
    LANE_LOST = "LANE_LOST"
    DONE = "DONE"
    ERROR = "ERROR"


NUMERIC = {MsgType.THETA, MsgType.RANGE}
BARE = {MsgType.TARGET_FOUND, MsgType.LANE_LOST, MsgType.DONE}


def canonical(value: float) -> float:
    """The float a six-decimal wire value decodes to."""
    return float(f"{value:.6f}")


@dataclass(frozen=True)
class WireMessage:
    type: MsgType
    value: Union[float, str, None] = None

    @classmethod
    def theta(cls, degrees: float) -> "WireMessage":
        return cls(MsgType.THETA, canonical(degrees))

    @classmethod
    def range(cls, cm: float) -> "WireMessage":
        return cls(MsgType.RANGE, canonical(cm))

    @classmethod
    def error(cls, text: str) -> "WireMessage":
        return cls(MsgType.ERROR, text)

    def __str__(self) -> str:
        return encode(self).decode("utf-8").rstrip("\n")


TARGET_FOUND = WireMessage(MsgType.TARGET_FOUND)
LANE_LOST = WireMessage(MsgType.LANE_LOST)
DONE = WireMessage(MsgType.DONE)


def encode(msg: WireMessage) -> bytes:
    t = msg.type
    if t in NUMERIC:
        if isinstance(msg.value, bool) or not isinstance(msg.value, (int, float)):
            raise EncodingError(f"{t.value} needs a numeric payload, got {msg.value!r}")
        if not math.isfinite(msg.value):
            raise EncodingError(f"{t.value} payload must be finite, got {msg.value}")
        if t is MsgType.RANGE and msg.value < 0:
            raise EncodingError("RANGE payload must be non-negative")
        return f"{t.value} {msg.value:.6f}\n".encode("utf-8")
    if t in BARE:
        if msg.value is not None:
            raise EncodingError(f"{t.value} takes no payload")
        return f"{t.value}\n".encode("utf-8")
    text = msg.value if msg.value is not None else ""
    if not isinstance(text, str) or "\n" in text or "\r" in text:
        raise EncodingError("ERROR payload must be single-line text")
    return (f"ERROR {text}\n" if text else "ERROR\n").encode("utf-8")


def decode(line: Union[bytes, str]) -> WireMessage:
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ProtocolError(f"line is not UTF-8: {exc}") from None
    if line.endswith("\n"):
        line = line[:-1]
    if line.endswith("\r"):
        line = line[:-1]
    if "\n" in line or "\r" in line:
        raise ProtocolError("more than one line")
    tag, sep, payload = line.partition(" ")
    try:
        t = MsgType(tag)
    except ValueError:
        raise ProtocolError(f"unknown message type {tag!r}") from None
    if t in BARE:
        if sep:
            raise ProtocolError(f"{tag} takes no payload, got {payload!r}")
        return WireMessage(t)
    if t is MsgType.ERROR:
        return WireMessage(t, payload)
    try:
        value = float(payload)
    except ValueError:
        raise ProtocolError(f"malformed {tag} payload {payload!r}") from None
    if not math.isfinite(value) or (t is MsgType.RANGE and value < 0):
        raise ProtocolError(f"out-of-range {tag} payload {payload!r}")
    return WireMessage(t, value)


# -- sessions ---------------------------------------------------------------


class Transcript:
    """Timestamped record of lines sent (``>``) and received (``<``)."""

    def __init__(self, clock=time.monotonic):
        self._clock = clock
        self._t0 = clock()
        self.lines: List[str] = []

    def add(self, direction: str, line: str) -> None:
        self.lines.append(f"{self._clock() - self._t0:.6f} {direction} {line.rstrip(chr(10))}")

    def text(self) -> str:
        return "".join(ln + "\n" for ln in self.lines)


class Channel:
    """Line-oriented wrapper around a connected socket."""

    def __init__(self, sock: socket.socket, transcript: Optional[Transcript] = None):
        self.sock = sock
        self.reader = sock.makefile("rb")
        self.transcript = transcript if transcript is not None else Transcript()
        self.sent: List[WireMessage] = []
        self.received: List[WireMessage] = []

    def send(self, msg: WireMessage) -> None:
        data = encode(msg)
        self.sock.sendall(data)
        self.sent.append(msg)
        self.transcript.add(">", data.decode("utf-8"))

    def recv_line(self) -> Optional[bytes]:
        line = self.reader.readline()
        if not line:
            return None
        if not line.endswith(b"\n"):
            raise ProtocolError("connection closed mid-line")
        self.transcript.add("<", line.decode("utf-8", "replace"))
        return line

    def recv(self) -> Optional[WireMessage]:
        line = self.recv_line()
        if line is None:
            return None
        msg = decode(line)
        self.received.append(msg)
        return msg

    def close(self) -> None:
        try:
            self.reader.close()
        finally:
            try:
                self.sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            self.sock.close()


@dataclass
class SessionReport:
    outcome: str  # "completed" or "error"
    theta: Optional[float]
    sent: List[WireMessage] = field(default_factory=list)
    received: List[WireMessage] = field(default_factory=list)
    transcript: List[str] = field(default_factory=list)
    error: Optional[str] = None


def _run_session(conn: socket.socket, plan_theta: Callable[[], float], timeout: Optional[float]) -> SessionReport:
    conn.settimeout(timeout)
    chan = Channel(conn)
    report = SessionReport("error", None)
    try:
        theta = WireMessage.theta(plan_theta())
        report.theta = theta.value
        chan.send(theta)
        while True:
            msg = chan.recv()
            if msg is None:
                report.error = "client disconnected before DONE"
                break
            if msg.type is MsgType.DONE:
                report.outcome = "completed"
                break
    except ProtocolError as exc:
        report.error = f"protocol error: {exc}"
        try:
            chan.send(WireMessage.error(str(exc)))
        except OSError:
            pass
    except (OSError, socket.timeout) as exc:
        report.error = f"transport error: {exc}"
    finally:
        chan.close()
    report.sent, report.received, report.transcript = chan.sent, chan.received, chan.transcript.lines
    if report.error:
        log.warning("session ended with error: %s", report.error)
    return report


def _reject(conn: socket.socket) -> None:
    try:
        conn.sendall(encode(WireMessage.error("busy: another robot session is active")))
    except OSError:
        pass
    finally:
        conn.close()


def serve_planner(
    listener: socket.socket,
    plan_theta: Callable[[], float],
    max_sessions: Optional[int] = 1,
    session_timeout: Optional[float] = 60.0,
    on_session: Optional[Callable[[SessionReport], None]] = None,
    stop: Optional[threading.Event] = None,
) -> List[SessionReport]:
    """Serve robot sessions on a bound, listening socket.

    One session runs at a time; connections arriving meanwhile get an
    ``ERROR`` line and are closed. A failed session is logged and the server
    keeps accepting. Returns after ``max_sessions`` sessions (never when
    ``None``) or when ``stop`` is set.
    """
    stop = stop or threading.Event()
    busy = threading.Event()
    pending: "queue.Queue[socket.socket]" = queue.Queue()
    reports: List[SessionReport] = []

    def acceptor():
        listener.settimeout(0.05)
        while not stop.is_set():
            try:
                conn, _ = listener.accept()
            except socket.timeout:
                continue
            except OSError:
                break
            if busy.is_set():
                _reject(conn)
                continue
            busy.set()
            pending.put(conn)

    thread = threading.Thread(target=acceptor, name="waypath-acceptor", daemon=True)
    thread.start()
    try:
        while max_sessions is None or len(reports) < max_sessions:
            try:
                conn = pending.get(timeout=0.05)
            except queue.Empty:
                if stop.is_set():
                    break
                continue
            try:
                report = _run_session(conn, plan_theta, session_timeout)
            finally:
                busy.clear()
            reports.append(report)
            if on_session is not None:
                on_session(report)
    finally:
        stop.set()
        thread.join()
    return reports


def listen(host: str = "127.0.0.1", port: Optional[int] = None, backlog: int = 4) -> socket.socket:
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, default_port() if port is None else port))
    sock.listen(backlog)
    return sock


# -- robot side -------------------------------------------------------------


@dataclass
class ClientResult:
    outcome: str  # completed, trapped, timeout, protocol-failure
    theta: Optional[float]
    sent: List[WireMessage] = field(default_factory=list)
    received: List[WireMessage] = field(default_factory=list)
    transcript: List[str] = field(default_factory=list)
    mission: object = None
    error: Optional[str] = None


Executor = Callable[[float, Callable[[WireMessage], None]], Tuple[str, object]]


def connect(address: Tuple[str, int], timeout: float = 5.0) -> socket.socket:
    try:
        return socket.create_connection(address, timeout=timeout)
    except OSError as exc:
        raise TransportError(f"cannot connect to {address[0]}:{address[1]}: {exc}") from None


def run_robot_client(
    connector: Union[Tuple[str, int], Callable[[], socket.socket]],
    execute: Executor,
    timeout: float = 10.0,
) -> ClientResult:
    """Robot side of a session.

    Waits for the single ``THETA``, hands it to ``execute(theta, emit)``
    which drives the robot and may ``emit`` status messages, then reports
    ``TARGET_FOUND`` (on success) and ``DONE``. ``execute`` returns an
    ``(outcome, details)`` pair where outcome is ``"completed"`` on arrival.
    """
    sock = connect(connector, timeout) if isinstance(connector, tuple) else connector()
    sock.settimeout(timeout)
    chan = Channel(sock)
    result = ClientResult("protocol-failure", None)
    try:
        try:
            first = chan.recv()
        except socket.timeout:
            raise TransportError("timed out waiting for THETA") from None
        except OSError as exc:
            raise TransportError(str(exc)) from None
        if first is None:
            raise TransportError("server closed the connection before sending THETA")
        if first.type is not MsgType.THETA:
            raise ProtocolError(f"expected THETA first, got {first.type.value}")
        result.theta = first.value
        outcome, details = execute(first.value, chan.send)
        result.mission = details
        if outcome == "completed":
            chan.send(TARGET_FOUND)
        else:
            chan.send(WireMessage.error(outcome))
        chan.send(DONE)
        result.outcome = outcome
    except ProtocolError as exc:
        result.error = str(exc)
        result.outcome = "protocol-failure"
        try:
            chan.send(WireMessage.error(f"protocol error: {exc}"))
        except OSError:
            pass
    finally:
        chan.close()
        result.sent, result.received, result.transcript = chan.sent, chan.received, chan.transcript.lines
    return result


class SimExecutor:
    """Runs the received theta through the simulator as the robot's body."""

    def __init__(self, scenario):
        self.scenario = scenario

    def __call__(self, theta: float, emit: Callable[[WireMessage], None]):
        from .sim import Outcome, run_mission

        report = run_mission(self.scenario, initial_theta=theta, on_range=lambda d: emit(WireMessage.range(d)))
        outcome = "completed" if report.outcome is Outcome.DONE else report.outcome.value.lower()
        return outcome, report


def loopback_mission(scenario, timeout: float = 30.0) -> Tuple[SessionReport, ClientResult]:
    """Run planner server and simulated robot client over a local socket."""
    from .sim import plan_initial_theta

    listener = listen("127.0.0.1", 0)
    address = listener.getsockname()
    reports: List[SessionReport] = []
    server = threading.Thread(
        target=lambda: reports.extend(
            serve_planner(listener, lambda: plan_initial_theta(scenario), max_sessions=1, session_timeout=timeout)
        ),
        name="waypath-planner",
        daemon=True,
    )
    server.start()
    try:
        result = run_robot_client(address, SimExecutor(scenario), timeout=timeout)
    finally:
        server.join(timeout)
        listener.close()
    if not reports:
        raise TransportError("planner server did not finish its session")
    return reports[0], result
