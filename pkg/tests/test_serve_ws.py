"""WebSocket bridge: a minimal client drives a human scenario end to end."""

import base64
import dataclasses
import json
import os
import socket
import struct
import threading

from v2i_testbed.harness.runner import run_scenario
from v2i_testbed.harness.scenario import load_scenario
from v2i_testbed.harness.serve import TelemetryServer
from v2i_testbed.vehicle import A_MAX, B_MAX


class WsClient:
    """Client-side framing, written against the RFC rather than the server
    code: masked client frames, plain server frames."""

    def __init__(self, port: int):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=30)
        key = base64.b64encode(os.urandom(16)).decode()
        self.sock.sendall(
            (
                f"GET / HTTP/1.1\r\nHost: 127.0.0.1:{port}\r\n"
                "Upgrade: websocket\r\nConnection: Upgrade\r\n"
                f"Sec-WebSocket-Key: {key}\r\nSec-WebSocket-Version: 13\r\n\r\n"
            ).encode()
        )
        response = b""
        while b"\r\n\r\n" not in response:
            response += self.sock.recv(4096)
        assert b"101" in response.split(b"\r\n", 1)[0]

    def _recv_exact(self, n: int) -> bytes:
        buf = b""
        while len(buf) < n:
            chunk = self.sock.recv(n - len(buf))
            assert chunk, "server closed"
            buf += chunk
        return buf

    def recv_obj(self) -> dict:
        head = self._recv_exact(2)
        assert head[0] & 0x0F == 0x1  # text
        length = head[1] & 0x7F
        if length == 126:
            length = struct.unpack(">H", self._recv_exact(2))[0]
        elif length == 127:
            length = struct.unpack(">Q", self._recv_exact(8))[0]
        return json.loads(self._recv_exact(length))

    def send_obj(self, obj: dict) -> None:
        payload = json.dumps(obj).encode()
        mask = os.urandom(4)
        header = bytes([0x81])
        n = len(payload)
        if n < 126:
            header += bytes([0x80 | n])
        else:
            header += bytes([0x80 | 126]) + struct.pack(">H", n)
        body = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
        self.sock.sendall(header + mask + body)

    def close(self):
        self.sock.close()


def test_frame_parser_handles_partial_and_masked_frames():
    from v2i_testbed.harness.ws import OP_TEXT, encode_text, parse_frame

    masked_payload = b'{"type":"control"}'
    mask = b"\x01\x02\x03\x04"
    body = bytes(b ^ mask[i % 4] for i, b in enumerate(masked_payload))
    wire = bytes([0x80 | OP_TEXT, 0x80 | len(masked_payload)]) + mask + body

    buf = bytearray()
    for i in range(len(wire) - 1):
        buf.extend(wire[i : i + 1])
        assert parse_frame(buf) is None  # incomplete at every prefix
    buf.extend(wire[-1:])
    opcode, payload = parse_frame(buf)
    assert (opcode, payload) == (OP_TEXT, masked_payload)
    assert not buf  # consumed exactly one frame

    # Two server frames back to back parse independently.
    buf = bytearray(encode_text("a") + encode_text("b"))
    assert parse_frame(buf) == (OP_TEXT, b"a")
    assert parse_frame(buf) == (OP_TEXT, b"b")
    assert parse_frame(buf) is None

    # Extended 16-bit length.
    long_text = "x" * 300
    buf = bytearray(encode_text(long_text))
    assert parse_frame(buf) == (OP_TEXT, long_text.encode())


def test_ws_lockstep_replay_matches_scripted_run():
    scripted = run_scenario(load_scenario("glosa-2"))
    cfg = dataclasses.replace(load_scenario("glosa-2"), driver_script="human")
    server = TelemetryServer(cfg, port=0, ws_port=0, lockstep=True)
    result: dict = {}
    thread = threading.Thread(target=lambda: result.update(log=server.run()), daemon=True)
    thread.start()

    client = WsClient(server.ws_port)
    while True:
        obj = client.recv_obj()
        if obj["type"] == "end":
            break
        tick = obj["tick"]
        if tick < len(scripted.commands):
            a = scripted.commands[tick]
            control = (
                {"type": "control", "throttle": a / A_MAX, "brake": 0.0}
                if a >= 0
                else {"type": "control", "throttle": 0.0, "brake": -a / B_MAX}
            )
            client.send_obj(control)
    client.close()
    thread.join(timeout=30)
    assert not thread.is_alive()
    assert result["log"].rows == scripted.rows
