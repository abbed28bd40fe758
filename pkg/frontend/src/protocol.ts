/**
 * Telemetry/control protocol: one JSON document per message.
 *
 * Over TCP the framing is one document per line; over WebSocket it is one
 * document per text frame. The shapes here mirror the harness serve
 * endpoint exactly.
 */

export interface TelemetryFrame {
  type: 'frame';
  scenario: string;
  tick: number;
  t: number;
  d_int: number;
  v_kmh: number;
  light: 'GREEN' | 'YELLOW' | 'RED';
  light_code: number;
  state: number;
  warn: boolean;
  v_min: number;
  v_max: number;
  time_to_green: number;
}

export interface EndMessage {
  type: 'end';
}

export type ServerMessage = TelemetryFrame | EndMessage;

export interface ControlCommand {
  throttle: number; // 0..1
  brake: number; // 0..1
}

const LIGHTS = ['GREEN', 'YELLOW', 'RED'];

function isNumber(x: unknown): x is number {
  return typeof x === 'number' && Number.isFinite(x);
}

/** Parse one server document; null for anything malformed or unknown. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof obj !== 'object' || obj === null) return null;
  const m = obj as Record<string, unknown>;
  if (m.type === 'end') return { type: 'end' };
  if (m.type !== 'frame') return null;
  if (
    typeof m.scenario !== 'string' ||
    !isNumber(m.tick) ||
    !isNumber(m.t) ||
    !isNumber(m.d_int) ||
    !isNumber(m.v_kmh) ||
    typeof m.light !== 'string' ||
    !LIGHTS.includes(m.light) ||
    !isNumber(m.light_code) ||
    !isNumber(m.state) ||
    typeof m.warn !== 'boolean' ||
    !isNumber(m.v_min) ||
    !isNumber(m.v_max) ||
    !isNumber(m.time_to_green)
  ) {
    return null;
  }
  return m as unknown as TelemetryFrame;
}

export function serializeControl(cmd: ControlCommand): string {
  return JSON.stringify({ type: 'control', throttle: cmd.throttle, brake: cmd.brake });
}

/** Split a byte stream into complete lines, keeping the unterminated tail. */
export class LineSplitter {
  private tail = '';

  push(chunk: string): string[] {
    this.tail += chunk;
    const parts = this.tail.split('\n');
    this.tail = parts.pop() ?? '';
    return parts.filter((line) => line.length > 0);
  }
}
