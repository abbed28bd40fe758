/**
 * Console state: connection status, the latest telemetry frame, and the
 * current pedal input. The console never extrapolates vehicle state — it
 * renders received frames verbatim, so reconnecting mid-run simply resumes
 * from the next frame.
 */

import type { ControlCommand, TelemetryFrame } from './protocol.js';

export type ConnectionStatus = 'connecting' | 'connected' | 'disconnected' | 'ended';

export interface ConsoleState {
  connection: ConnectionStatus;
  frame: TelemetryFrame | null;
  input: ControlCommand;
}

export function initialState(): ConsoleState {
  return { connection: 'connecting', frame: null, input: { throttle: 0, brake: 0 } };
}

export function applyConnected(state: ConsoleState): ConsoleState {
  return { ...state, connection: 'connected' };
}

export function applyFrame(state: ConsoleState, frame: TelemetryFrame): ConsoleState {
  return { ...state, connection: 'connected', frame };
}

export function applyEnd(state: ConsoleState): ConsoleState {
  return { ...state, connection: 'ended' };
}

export function applyDisconnect(state: ConsoleState): ConsoleState {
  // Keep the last frame for context; the overlay signals it is stale.
  return { ...state, connection: 'disconnected' };
}

export function applyInput(state: ConsoleState, input: ControlCommand): ConsoleState {
  return { ...state, input };
}
