// Scenario presets the UI can start a session from. Sessions are initialized
// by preset *name*; the service owns the scenario documents. The frame
// numbers here only size the static background (semicircle, sector) and the
// click-to-waypoint check, mirroring the committed benchmark files.

import type { FramePreset } from "./input.js";

export interface Preset {
  name: string;
  label: string;
  frame: FramePreset;
  /** World radius the viewport must cover, meters. */
  viewRadius: number;
  fov: { l_v: number; theta_v_deg: number };
  defaultSpeed: number;
}

export const PRESETS: Preset[] = [
  {
    name: "stationary",
    label: "Stationary robot (free steering)",
    frame: { l_w: 10.0, theta_w_deg: 180.0, humanFacingDeg: 90.0 },
    viewRadius: 11.0,
    fov: { l_v: 5.0, theta_v_deg: 34.0 },
    defaultSpeed: 1.0,
  },
  {
    name: "near_pass",
    label: "Near pass (smoothing stress)",
    frame: { l_w: 1.6, theta_w_deg: 180.0, humanFacingDeg: 90.0 },
    viewRadius: 6.5,
    fov: { l_v: 5.0, theta_v_deg: 34.0 },
    defaultSpeed: 5.0,
  },
  {
    name: "wall_demo",
    label: "Wall demo (bent shadow)",
    frame: { l_w: 6.0, theta_w_deg: 180.0, humanFacingDeg: 90.0 },
    viewRadius: 8.0,
    fov: { l_v: 5.0, theta_v_deg: 34.0 },
    defaultSpeed: 1.0,
  },
  {
    name: "convergence",
    label: "Convergence (offset start pose)",
    frame: { l_w: 10.0, theta_w_deg: 180.0, humanFacingDeg: 90.0 },
    viewRadius: 11.0,
    fov: { l_v: 5.0, theta_v_deg: 34.0 },
    defaultSpeed: 0.0,
  },
];

export function presetByName(name: string): Preset {
  const p = PRESETS.find((x) => x.name === name);
  if (!p) {
    throw new Error(`unknown preset ${name}`);
  }
  return p;
}
