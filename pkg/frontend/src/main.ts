// Bootstrap: wire the session client, steering input, and render loop to the
// DOM. One requestAnimationFrame loop renders the latest tick and flushes at
// most one coalesced steering command per frame.

import { SessionClient } from "./client.js";
import { SteeringInput } from "./input.js";
import { PRESETS, Preset, presetByName } from "./presets.js";
import { drawFrame } from "./render.js";
import { Scene, buildScene } from "./scene.js";
import { fitView, toWorld } from "./transform.js";

const TRAIL_LENGTH = 240;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("view");
  const maybeCtx = canvas.getContext("2d");
  if (!maybeCtx) {
    throw new Error("canvas 2d context unavailable");
  }
  const ctx: CanvasRenderingContext2D = maybeCtx;

  const presetSelect = el<HTMLSelectElement>("preset");
  for (const p of PRESETS) {
    const opt = document.createElement("option");
    opt.value = p.name;
    opt.textContent = p.label;
    presetSelect.appendChild(opt);
  }

  const banner = el<HTMLDivElement>("banner");
  const flagsBox = el<HTMLDivElement>("flags");
  const metricsBox = el<HTMLPreElement>("metrics");
  const modeButton = el<HTMLButtonElement>("mode");
  const addressBox = el<HTMLInputElement>("address");

  let preset: Preset = PRESETS[0]!;
  let transform = fitView(canvas.width, canvas.height, preset.viewRadius);
  let input = new SteeringInput(preset.frame, preset.defaultSpeed);
  let client: SessionClient | null = null;
  let scene: Scene | null = null;
  let trail: Array<[number, number]> = [];
  let lastTick = -1;
  let mode: "direct" | "pid" = "pid";

  function connect(): void {
    client?.close();
    preset = presetByName(presetSelect.value || PRESETS[0]!.name);
    transform = fitView(canvas.width, canvas.height, preset.viewRadius);
    input = new SteeringInput(preset.frame, preset.defaultSpeed);
    scene = null;
    trail = [];
    lastTick = -1;
    client = new SessionClient(addressBox.value, preset.name, {
      onState: (state) => {
        banner.textContent =
          state === "live" ? "" :
          state === "connecting" ? "connecting…" :
          "service disconnected — view frozen, retrying";
        banner.className = state === "live" ? "hidden" : "visible";
      },
      onError: (code, detail) => {
        banner.textContent = `service error [${code}]: ${detail}`;
        banner.className = "visible";
      },
    });
    client.connect();
  }

  el<HTMLButtonElement>("connect").addEventListener("click", connect);
  presetSelect.addEventListener("change", connect);

  modeButton.addEventListener("click", () => {
    mode = mode === "pid" ? "direct" : "pid";
    modeButton.textContent = `mode: ${mode}`;
    client?.setMode(mode);
  });

  window.addEventListener("keydown", (ev) => {
    if (input.keydown(ev.key)) {
      ev.preventDefault();
    }
  });

  canvas.addEventListener("click", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const sx = (ev.clientX - rect.left) * (canvas.width / rect.width);
    const sy = (ev.clientY - rect.top) * (canvas.height / rect.height);
    const [wx, wy] = toWorld(transform, sx, sy);
    input.clickWorld(wx, wy);
  });

  function frame(): void {
    const record = client?.latestTick ?? null;
    if (record && record.k !== lastTick) {
      lastTick = record.k;
      if (record.robot_xy) {
        trail.push(record.robot_xy);
        if (trail.length > TRAIL_LENGTH) {
          trail.shift();
        }
      }
      scene = buildScene(record, transform, trail);
      flagsBox.innerHTML = renderFlags(scene);
    }
    const metrics = client?.latestMetrics;
    if (metrics) {
      metricsBox.textContent = [
        `max dTilt  ${metrics.max_dalpha.toFixed(4)} rad`,
        `max dPan   ${metrics.max_dgamma.toFixed(4)} rad`,
        `rms error  ${metrics.rms_error.toFixed(4)}`,
        `visibility ${(metrics.visibility_fraction * 100).toFixed(1)}%`,
        `converged  ${metrics.convergence_tick ?? "—"}`,
      ].join("\n");
    }
    drawFrame(ctx, scene, preset, transform, input.rejectedClick);

    const command = input.flush();
    if (command) {
      client?.sendCommand(command);
    }
    requestAnimationFrame(frame);
  }

  connect();
  requestAnimationFrame(frame);
}

function renderFlags(scene: Scene): string {
  const badge = (on: boolean, label: string) =>
    `<span class="badge ${on ? "on" : "off"}">${label}</span>`;
  return [
    badge(scene.flags.saturatedTilt, "tilt rate-limited"),
    badge(scene.flags.saturatedPan, "pan rate-limited"),
    badge(scene.flags.clamped, "tilt clamped"),
    badge(scene.flags.assumptionViolated, "outside rear semicircle"),
  ].join(" ");
}

main();
