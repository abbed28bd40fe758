"""Telemetry/control endpoint for human-driven runs.

The server pushes one telemetry frame per tick and applies the client's
throttle/brake as the vehicle command. The normative protocol is one JSON
document per line over TCP; the same messages are optionally offered over
WebSocket for the browser console.

Pacing modes:
  realtime  ticks advance at wall-clock ``dt``; the latest control received
            wins; the simulation idles until a client connects and pauses if
            the client disconnects mid-run.
  lockstep  the server blocks for exactly one control message after every
            frame, which makes replayed command streams reproduce scripted
            runs bit for bit.

Messages:
  server -> client  {"type":"frame","scenario":...,"tick":n,"t":...,
                     "d_int":...,"v_kmh":...,"light":"RED","light_code":3,
                     "state":...,"warn":...,"v_min":...,"v_max":...,
                     "time_to_green":...}
                    {"type":"end"} after the final frame
  client -> server  {"type":"control","throttle":0..1,"brake":0..1}
"""

from __future__ import annotations

import json
import socket
import time
from dataclasses import dataclass
from typing import Optional

from ..errors import ConfigError, TransportError
from ..vehicle import A_MAX, B_MAX
from . import ws
from .runner import Simulation, TelemetryFrame, TimeSeriesLog
from .scenario import ScenarioConfig


@dataclass(frozen=True)
class ControlCommand:
    throttle: float
    brake: float

    def acceleration(self) -> float:
        """Brake has priority when both pedals are pressed."""
        throttle = min(1.0, max(0.0, self.throttle))
        brake = min(1.0, max(0.0, self.brake))
        if brake > 0.0:
            return -brake * B_MAX
        return throttle * A_MAX


COAST = ControlCommand(throttle=0.0, brake=0.0)


def frame_to_obj(frame: TelemetryFrame) -> dict:
    row = frame.row
    return {
        "type": "frame",
        "scenario": frame.scenario,
        "tick": frame.tick,
        "t": row.t,
        "d_int": row.d_int,
        "v_kmh": row.v_kmh,
        "light": row.light.name,
        "light_code": int(row.light),
        "state": row.state,
        "warn": row.warn,
        "v_min": row.v_min,
        "v_max": row.v_max,
        "time_to_green": row.time_to_green,
    }


def parse_control(line: str) -> Optional[ControlCommand]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError:
        return None
    if not isinstance(obj, dict) or obj.get("type") != "control":
        return None
    try:
        return ControlCommand(throttle=float(obj["throttle"]), brake=float(obj["brake"]))
    except (KeyError, TypeError, ValueError):
        return None


class _TcpChannel:
    """Line-delimited JSON over an accepted TCP connection."""

    def __init__(self, conn: socket.socket):
        self._conn = conn
        self._buf = b""

    def send_line(self, line: str) -> None:
        try:
            self._conn.sendall(line.encode("utf-8") + b"\n")
        except OSError as exc:
            raise TransportError(f"telemetry send failed: {exc}") from exc

    def recv_line(self, timeout: Optional[float]) -> Optional[str]:
        """Next line, or None when the peer closed; raises TransportError on
        timeout."""
        deadline = None if timeout is None else time.monotonic() + timeout
        while b"\n" not in self._buf:
            remaining = None if deadline is None else deadline - time.monotonic()
            if remaining is not None and remaining <= 0:
                raise TransportError("timed out waiting for control message")
            self._conn.settimeout(remaining)
            try:
                chunk = self._conn.recv(4096)
            except socket.timeout:
                raise TransportError("timed out waiting for control message") from None
            except OSError as exc:
                raise TransportError(f"telemetry receive failed: {exc}") from exc
            if not chunk:
                return None
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line.decode("utf-8")

    def poll_lines(self) -> list[str]:
        """Drain whatever is pending without blocking; raises TransportError
        once the peer has closed."""
        lines = []
        while True:
            self._conn.settimeout(0.0)
            try:
                chunk = self._conn.recv(4096)
            except (BlockingIOError, socket.timeout):
                break
            except OSError as exc:
                raise TransportError(f"telemetry receive failed: {exc}") from exc
            if not chunk:
                raise TransportError("console disconnected")
            self._buf += chunk
        while b"\n" in self._buf:
            line, self._buf = self._buf.split(b"\n", 1)
            lines.append(line.decode("utf-8"))
        return lines

    def close(self) -> None:
        try:
            self._conn.close()
        except OSError:
            pass


class _WsChannel:
    """Same message stream over WebSocket; one JSON document per text frame."""

    def __init__(self, conn: socket.socket):
        self._ws = ws.WsConnection(conn)

    def send_line(self, line: str) -> None:
        self._ws.send_text(line)

    def recv_line(self, timeout: Optional[float]) -> Optional[str]:
        return self._ws.recv_text(timeout)

    def poll_lines(self) -> list[str]:
        return self._ws.poll_texts()

    def close(self) -> None:
        self._ws.close()


class TelemetryServer:
    """Runs one human-driven scenario per call to :meth:`run`."""

    def __init__(
        self,
        cfg: ScenarioConfig,
        port: int = 0,
        ws_port: Optional[int] = None,
        lockstep: bool = False,
        host: str = "127.0.0.1",
    ):
        if cfg.driver_script != "human":
            raise ConfigError("serve() requires a human-driven scenario")
        self.cfg = cfg
        self.lockstep = lockstep
        self._host = host
        self._tcp = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._tcp.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._tcp.bind((host, port))
        self._tcp.listen(1)
        self.port = self._tcp.getsockname()[1]
        self._ws_sock = None
        self.ws_port = None
        if ws_port is not None:
            self._ws_sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            self._ws_sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            self._ws_sock.bind((host, ws_port))
            self._ws_sock.listen(1)
            self.ws_port = self._ws_sock.getsockname()[1]

    def _accept(self):
        """Block until a client connects on either listener."""
        import selectors

        sel = selectors.DefaultSelector()
        sel.register(self._tcp, selectors.EVENT_READ, "tcp")
        if self._ws_sock is not None:
            sel.register(self._ws_sock, selectors.EVENT_READ, "ws")
        try:
            while True:
                for key, _ in sel.select():
                    conn, _addr = key.fileobj.accept()
                    conn.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
                    if key.data == "ws":
                        return _WsChannel(conn)
                    return _TcpChannel(conn)
        finally:
            sel.close()

    def run(self) -> TimeSeriesLog:
        """Idle until a console connects, then drive the scenario with its
        commands. Returns the completed log."""
        sim = Simulation(self.cfg)
        channel = self._accept()
        command = COAST
        pending: Optional[str] = None
        try:
            tick = 0
            while tick <= sim.total_ticks:
                if pending is None:
                    row = sim.tick()
                    pending = json.dumps(frame_to_obj(TelemetryFrame(self.cfg.name, tick, row)))
                try:
                    channel.send_line(pending)
                    if tick == sim.total_ticks:
                        break
                    command = self._next_command(channel, command)
                except TransportError:
                    if self.lockstep:
                        raise
                    # Console went away: pause at the current tick until a
                    # new client connects, then resend the pending frame.
                    channel.close()
                    channel = self._accept()
                    command = COAST
                    continue
                pending = None
                sim.apply_command(command.acceleration())
                tick += 1
                if not self.lockstep:
                    time.sleep(self.cfg.dt)
            channel.send_line(json.dumps({"type": "end"}))
        finally:
            channel.close()
            sim.transport.close()
            self.close()
        return sim.log

    def _next_command(self, channel, current: ControlCommand) -> ControlCommand:
        if self.lockstep:
            while True:
                line = channel.recv_line(timeout=30.0)
                if line is None:
                    raise TransportError("console disconnected during lockstep run")
                parsed = parse_control(line)
                if parsed is not None:
                    return parsed
        latest = current
        for line in channel.poll_lines():
            parsed = parse_control(line)
            if parsed is not None:
                latest = parsed
        return latest

    def close(self) -> None:
        self._tcp.close()
        if self._ws_sock is not None:
            self._ws_sock.close()
