/**
 * Keyboard pedals: accelerate and brake keys map to full throttle / full
 * brake (bang-bang), no keys means coast. The vehicle side gives brake
 * priority when both are held; the console reports both honestly.
 */

import type { ControlCommand } from './protocol.js';

export interface KeyState {
  accelerate: boolean;
  brake: boolean;
}

export const ACCELERATE_KEYS = ['ArrowUp', 'w', 'W'];
export const BRAKE_KEYS = ['ArrowDown', 's', 'S', ' '];

export function controlFromKeys(keys: KeyState): ControlCommand {
  return { throttle: keys.accelerate ? 1 : 0, brake: keys.brake ? 1 : 0 };
}

export function keyDown(keys: KeyState, key: string): KeyState {
  if (ACCELERATE_KEYS.includes(key)) return { ...keys, accelerate: true };
  if (BRAKE_KEYS.includes(key)) return { ...keys, brake: true };
  return keys;
}

export function keyUp(keys: KeyState, key: string): KeyState {
  if (ACCELERATE_KEYS.includes(key)) return { ...keys, accelerate: false };
  if (BRAKE_KEYS.includes(key)) return { ...keys, brake: false };
  return keys;
}

export const INPUT_PERIOD_MS = 50; // 20 Hz, comfortably above the 10 Hz floor

/**
 * Emit the current control at a fixed rate while connected. Returns a stop
 * function; emission also stops when `connected` reports false.
 */
export function startInputLoop(
  current: () => ControlCommand,
  connected: () => boolean,
  send: (cmd: ControlCommand) => void,
  schedule: (fn: () => void, ms: number) => unknown = setTimeout,
): () => void {
  let running = true;
  const step = () => {
    if (!running) return;
    if (!connected()) {
      running = false;
      return;
    }
    send(current());
    schedule(step, INPUT_PERIOD_MS);
  };
  schedule(step, INPUT_PERIOD_MS);
  return () => {
    running = false;
  };
}
