"""Minimal server-side WebSocket support (RFC 6455, text frames only).

The telemetry protocol is line-delimited JSON over TCP; browsers cannot open
raw TCP sockets, so the serve endpoint optionally exposes the same messages
over WebSocket, one JSON document per text frame. Only what the driving
console needs is implemented: handshake, masked client frames, unfragmented
text, ping/pong, close. Incoming bytes are buffered so partial reads never
desynchronize frame parsing.
"""

from __future__ import annotations

import base64
import hashlib
import socket
import struct
from typing import Optional

from ..errors import TransportError

_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

OP_TEXT = 0x1
OP_CLOSE = 0x8
OP_PING = 0x9
OP_PONG = 0xA


def accept_handshake(conn: socket.socket) -> None:
    """Read the HTTP upgrade request and answer with 101 Switching Protocols."""
    request = b""
    while b"\r\n\r\n" not in request:
        chunk = conn.recv(4096)
        if not chunk:
            raise TransportError("websocket handshake aborted")
        request += chunk
        if len(request) > 65536:
            raise TransportError("websocket handshake request too large")
    key = None
    for line in request.split(b"\r\n"):
        if line.lower().startswith(b"sec-websocket-key:"):
            key = line.split(b":", 1)[1].strip().decode("ascii")
    if key is None:
        raise TransportError("websocket handshake missing Sec-WebSocket-Key")
    accept = base64.b64encode(hashlib.sha1((key + _GUID).encode("ascii")).digest()).decode("ascii")
    conn.sendall(
        (
            "HTTP/1.1 101 Switching Protocols\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Accept: {accept}\r\n\r\n"
        ).encode("ascii")
    )


def encode_text(text: str) -> bytes:
    payload = text.encode("utf-8")
    header = bytes([0x80 | OP_TEXT])
    n = len(payload)
    if n < 126:
        header += bytes([n])
    elif n < 65536:
        header += bytes([126]) + struct.pack(">H", n)
    else:
        header += bytes([127]) + struct.pack(">Q", n)
    return header + payload


def _encode_control(opcode: int, payload: bytes = b"") -> bytes:
    return bytes([0x80 | opcode, len(payload)]) + payload


def parse_frame(buf: bytearray) -> Optional[tuple[int, bytes]]:
    """Pop one complete frame off ``buf``; None while incomplete."""
    if len(buf) < 2:
        return None
    opcode = buf[0] & 0x0F
    masked = buf[1] & 0x80
    length = buf[1] & 0x7F
    offset = 2
    if length == 126:
        if len(buf) < 4:
            return None
        length = int.from_bytes(buf[2:4], "big")
        offset = 4
    elif length == 127:
        if len(buf) < 10:
            return None
        length = int.from_bytes(buf[2:10], "big")
        offset = 10
    mask = b""
    if masked:
        if len(buf) < offset + 4:
            return None
        mask = bytes(buf[offset : offset + 4])
        offset += 4
    if len(buf) < offset + length:
        return None
    payload = bytes(buf[offset : offset + length])
    if masked:
        payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
    del buf[: offset + length]
    return opcode, payload


class WsConnection:
    """One accepted websocket client."""

    def __init__(self, conn: socket.socket):
        accept_handshake(conn)
        self._conn = conn
        self._buf = bytearray()
        self._closed = False

    def send_text(self, text: str) -> None:
        try:
            self._conn.sendall(encode_text(text))
        except OSError as exc:
            raise TransportError(f"websocket send failed: {exc}") from exc

    def _next_text(self) -> Optional[str]:
        """Consume buffered frames; answers pings; None when no complete text
        frame is buffered. Raises TransportError after a close frame."""
        while True:
            frame = parse_frame(self._buf)
            if frame is None:
                return None
            opcode, payload = frame
            if opcode == OP_TEXT:
                return payload.decode("utf-8")
            if opcode == OP_PING:
                try:
                    self._conn.sendall(_encode_control(OP_PONG, payload))
                except OSError:
                    pass
                continue
            if opcode == OP_CLOSE:
                self._closed = True
                try:
                    self._conn.sendall(_encode_control(OP_CLOSE))
                except OSError:
                    pass
                raise TransportError("websocket peer sent close")
            # Pongs and unknown opcodes are ignored.

    def recv_text(self, timeout: Optional[float]) -> str:
        """Block up to ``timeout`` for the next text frame."""
        while True:
            text = self._next_text()
            if text is not None:
                return text
            if self._closed:
                raise TransportError("websocket closed")
            self._conn.settimeout(timeout)
            try:
                chunk = self._conn.recv(4096)
            except socket.timeout:
                raise TransportError("timed out waiting for websocket frame") from None
            except OSError as exc:
                raise TransportError(f"websocket receive failed: {exc}") from exc
            if not chunk:
                raise TransportError("websocket peer disconnected")
            self._buf.extend(chunk)

    def poll_texts(self) -> list[str]:
        """Drain without blocking; raises TransportError once the peer left."""
        while True:
            self._conn.settimeout(0.0)
            try:
                chunk = self._conn.recv(4096)
            except (BlockingIOError, socket.timeout):
                break
            except OSError as exc:
                raise TransportError(f"websocket receive failed: {exc}") from exc
            if not chunk:
                raise TransportError("websocket peer disconnected")
            self._buf.extend(chunk)
        texts = []
        while True:
            text = self._next_text()
            if text is None:
                break
            texts.append(text)
        return texts

    def close(self) -> None:
        try:
            self._conn.close()
        except OSError:
            pass
