/**
 * View model: formats one telemetry frame into the six labeled fields of the
 * advisory display plus the warning banner flag. Values come straight from
 * the frame — no client-side smoothing or recomputation. A -1 speed renders
 * as the not-applicable marker, never as "-1 km/h"; time-to-green keeps the
 * raw "-1 sec" of the on-board display.
 */

import type { TelemetryFrame } from './protocol.js';
import type { ConsoleState } from './state.js';

export const NOT_APPLICABLE = '—'; // em dash marker for n/a speeds

export const STATE_NAMES: Record<number, string> = {
  1: 'Waiting for Green',
  2: 'RLVW',
  3: 'Speed Advisory',
  4: 'No Recommendation',
};

export interface ViewModel {
  distance: string;
  approachingState: string;
  approachingStateName: string;
  trafficLightState: string;
  lightColor: 'green' | 'yellow' | 'red';
  minSpeed: string;
  maxSpeed: string;
  timeToGreen: string;
  speed: string;
  warnBanner: boolean;
  overlay: 'none' | 'waiting' | 'disconnected' | 'ended';
}

function speedField(kmh: number): string {
  return kmh < 0 ? NOT_APPLICABLE : `${kmh.toFixed(1)} km/h`;
}

function timeField(s: number): string {
  return s < 0 ? '-1 sec' : `${s.toFixed(1)} sec`;
}

export function frameView(frame: TelemetryFrame): ViewModel {
  return {
    distance: `${frame.d_int.toFixed(2)} m`,
    approachingState: frame.state < 0 ? NOT_APPLICABLE : String(frame.state),
    approachingStateName: STATE_NAMES[frame.state] ?? NOT_APPLICABLE,
    trafficLightState: String(frame.light_code),
    lightColor: frame.light === 'GREEN' ? 'green' : frame.light === 'YELLOW' ? 'yellow' : 'red',
    minSpeed: speedField(frame.v_min),
    maxSpeed: speedField(frame.v_max),
    timeToGreen: timeField(frame.time_to_green),
    speed: `${frame.v_kmh.toFixed(1)} km/h`,
    warnBanner: frame.warn,
    overlay: 'none',
  };
}

const EMPTY: Omit<ViewModel, 'overlay'> = {
  distance: NOT_APPLICABLE,
  approachingState: NOT_APPLICABLE,
  approachingStateName: NOT_APPLICABLE,
  trafficLightState: NOT_APPLICABLE,
  lightColor: 'red',
  minSpeed: NOT_APPLICABLE,
  maxSpeed: NOT_APPLICABLE,
  timeToGreen: NOT_APPLICABLE,
  speed: NOT_APPLICABLE,
  warnBanner: false,
};

export function consoleView(state: ConsoleState): ViewModel {
  const base = state.frame ? frameView(state.frame) : { ...EMPTY, overlay: 'none' as const };
  if (state.connection === 'disconnected') return { ...base, overlay: 'disconnected' };
  if (state.connection === 'ended') return { ...base, overlay: 'ended' };
  if (state.frame === null) return { ...base, overlay: 'waiting' };
  return base;
}
