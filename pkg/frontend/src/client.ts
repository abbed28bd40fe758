/**
 * Connection to the harness serve endpoint. The browser build uses the
 * WebSocket mirror (one JSON document per text frame); tests drive the same
 * handler interface over TCP lines from Node.
 */

import { parseServerMessage, serializeControl, type ControlCommand, type ServerMessage } from './protocol.js';

export interface ConsoleConnection {
  send(cmd: ControlCommand): void;
  close(): void;
}

export interface ConnectionHandlers {
  onOpen(): void;
  onMessage(msg: ServerMessage): void;
  onClose(): void;
}

export function connectWebSocket(url: string, handlers: ConnectionHandlers): ConsoleConnection {
  const socket = new WebSocket(url);
  socket.onopen = () => handlers.onOpen();
  socket.onmessage = (event) => {
    const msg = parseServerMessage(String(event.data));
    if (msg !== null) handlers.onMessage(msg);
  };
  socket.onclose = () => handlers.onClose();
  socket.onerror = () => socket.close();
  return {
    send(cmd: ControlCommand): void {
      if (socket.readyState === WebSocket.OPEN) socket.send(serializeControl(cmd));
    },
    close(): void {
      socket.close();
    },
  };
}
