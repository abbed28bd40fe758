"""Message transports between the roadside (controller) and vehicle (OBU) side.

INPROC is a lossless in-order queue. UDP sends each encoded message as one
datagram over the loopback interface; the simulation knows how many datagrams
it dispatched each tick and collects exactly that many, so a lossless UDP run
is deterministic. Loss and duplication are injected deterministically at the
sender by a seeded wrapper, never by the network.
"""

from __future__ import annotations

import random
import socket
import time

from ..errors import TransportError

DEFAULT_UDP_PORT = 5550
_BUFSIZE = 65536


class InprocTransport:
    """Lossless in-order delivery inside the process."""

    def __init__(self):
        self._queue: list[bytes] = []

    def send(self, payload: bytes) -> int:
        self._queue.append(payload)
        return 1

    def receive(self, expected: int, timeout: float = 0.0) -> list[bytes]:
        if len(self._queue) < expected:
            raise TransportError(
                f"expected {expected} messages, have {len(self._queue)}"
            )
        out, self._queue = self._queue[:expected], self._queue[expected:]
        return out

    def close(self) -> None:
        self._queue.clear()


class UdpTransport:
    """One datagram per message over loopback.

    Port 0 binds an ephemeral port (useful for tests); the bound port is
    available as ``port``.
    """

    def __init__(self, port: int = DEFAULT_UDP_PORT, host: str = "127.0.0.1"):
        self._host = host
        try:
            self._rx = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
            self._rx.bind((host, port))
            self._tx = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        except OSError as exc:
            raise TransportError(f"cannot open UDP sockets on {host}:{port}: {exc}") from exc
        self.port = self._rx.getsockname()[1]

    def send(self, payload: bytes) -> int:
        try:
            self._tx.sendto(payload, (self._host, self.port))
        except OSError as exc:
            raise TransportError(f"UDP send failed: {exc}") from exc
        return 1

    def receive(self, expected: int, timeout: float = 1.0) -> list[bytes]:
        out: list[bytes] = []
        deadline = time.monotonic() + timeout
        while len(out) < expected:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise TransportError(
                    f"UDP receive timed out with {len(out)}/{expected} messages"
                )
            self._rx.settimeout(remaining)
            try:
                data, _ = self._rx.recvfrom(_BUFSIZE)
            except socket.timeout:
                continue
            except OSError as exc:
                raise TransportError(f"UDP receive failed: {exc}") from exc
            out.append(data)
        return out

    def close(self) -> None:
        self._rx.close()
        self._tx.close()


class LossyTransport:
    """Deterministic loss/duplication injection in front of another transport.

    Every message is independently dropped with ``loss`` probability or
    duplicated with ``dup`` probability, driven by a seeded RNG so runs are
    reproducible. ``send`` returns how many copies were actually dispatched.
    """

    def __init__(self, inner, loss: float = 0.2, dup: float = 0.0, seed: int = 0):
        if not 0 <= loss <= 1 or not 0 <= dup <= 1 or loss + dup > 1:
            raise TransportError(f"bad loss/dup rates: {loss}, {dup}")
        self._inner = inner
        self._loss = loss
        self._dup = dup
        self._rng = random.Random(seed)

    def send(self, payload: bytes) -> int:
        roll = self._rng.random()
        if roll < self._loss:
            return 0
        copies = 2 if roll < self._loss + self._dup else 1
        sent = 0
        for _ in range(copies):
            sent += self._inner.send(payload)
        return sent

    def receive(self, expected: int, timeout: float = 1.0) -> list[bytes]:
        return self._inner.receive(expected, timeout)

    def close(self) -> None:
        self._inner.close()


def make_transport(kind: str, udp_port: int = DEFAULT_UDP_PORT):
    if kind == "inproc":
        return InprocTransport()
    if kind == "udp":
        return UdpTransport(port=udp_port)
    raise TransportError(f"unknown transport {kind!r}")
