/** Browser shell: wires the socket, keyboard, and DOM together. */

import { connectWebSocket, type ConsoleConnection } from './client.js';
import { controlFromKeys, keyDown, keyUp, startInputLoop, type KeyState } from './input.js';
import {
  applyDisconnect,
  applyEnd,
  applyFrame,
  applyInput,
  applyConnected,
  initialState,
  type ConsoleState,
} from './state.js';
import { consoleView } from './view.js';

function byId(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function render(state: ConsoleState): void {
  const view = consoleView(state);
  byId('distance').textContent = view.distance;
  byId('approaching-state').textContent = view.approachingState;
  byId('approaching-state-name').textContent = view.approachingStateName;
  byId('light-state').textContent = view.trafficLightState;
  byId('min-speed').textContent = view.minSpeed;
  byId('max-speed').textContent = view.maxSpeed;
  byId('time-to-green').textContent = view.timeToGreen;
  byId('speed').textContent = view.speed;
  byId('light-lamp').dataset.color = view.lightColor;
  byId('warning-banner').hidden = !view.warnBanner;
  const overlay = byId('overlay');
  overlay.hidden = view.overlay === 'none';
  overlay.textContent =
    view.overlay === 'disconnected'
      ? 'DISCONNECTED'
      : view.overlay === 'ended'
        ? 'RUN COMPLETE'
        : 'Waiting for telemetry…';
  byId('throttle-bar').style.width = `${state.input.throttle * 100}%`;
  byId('brake-bar').style.width = `${state.input.brake * 100}%`;
}

function main(): void {
  let state = initialState();
  let keys: KeyState = { accelerate: false, brake: false };
  const update = (next: ConsoleState) => {
    state = next;
    render(state);
  };

  const params = new URLSearchParams(window.location.search);
  const url = params.get('ws') ?? 'ws://127.0.0.1:5601';
  byId('endpoint').textContent = url;

  const connection: ConsoleConnection = connectWebSocket(url, {
    onOpen: () => update(applyConnected(state)),
    onMessage: (msg) => {
      update(msg.type === 'end' ? applyEnd(state) : applyFrame(state, msg));
    },
    onClose: () => update(state.connection === 'ended' ? state : applyDisconnect(state)),
  });

  window.addEventListener('keydown', (event) => {
    keys = keyDown(keys, event.key);
    update(applyInput(state, controlFromKeys(keys)));
  });
  window.addEventListener('keyup', (event) => {
    keys = keyUp(keys, event.key);
    update(applyInput(state, controlFromKeys(keys)));
  });

  // Sliders as an alternative to the keyboard.
  const throttleSlider = byId('throttle-slider') as HTMLInputElement;
  const brakeSlider = byId('brake-slider') as HTMLInputElement;
  const sliderInput = () =>
    update(
      applyInput(state, {
        throttle: Number(throttleSlider.value) / 100,
        brake: Number(brakeSlider.value) / 100,
      }),
    );
  throttleSlider.addEventListener('input', sliderInput);
  brakeSlider.addEventListener('input', sliderInput);

  startInputLoop(
    () => state.input,
    () => state.connection === 'connected',
    (cmd) => connection.send(cmd),
  );

  render(state);
}

main();
