// Pure scene construction: tick record in, screen-space draw nodes out.
// Every position comes from a service-reported coordinate pushed through the
// affine transform; nothing here re-derives simulation state.

import type { TickRecordWire } from "./protocol.js";
import { Affine, toScreen } from "./transform.js";

export type NodeKind =
  | "robot"
  | "setpoint"
  | "tip"
  | "footprint"
  | "trail";

export interface SceneNode {
  kind: NodeKind;
  x: number;
  y: number;
  /** Surface kind for footprint points (ground / elevated-top / wall-face). */
  surface?: string;
}

export interface SceneFlags {
  saturatedTilt: boolean;
  saturatedPan: boolean;
  clamped: boolean;
  assumptionViolated: boolean;
}

export interface Scene {
  nodes: SceneNode[];
  lightTilt: number;
  lightPan: number;
  flags: SceneFlags;
  tick: number;
}

export function buildScene(
  record: TickRecordWire,
  transform: Affine,
  trail: Array<[number, number]> = [],
): Scene {
  const nodes: SceneNode[] = [];

  for (const [wx, wy] of trail) {
    const [x, y] = toScreen(transform, wx, wy);
    nodes.push({ kind: "trail", x, y });
  }
  for (const pt of record.footprint) {
    const [x, y] = toScreen(transform, pt.p[0], pt.p[1]);
    nodes.push({ kind: "footprint", x, y, surface: pt.kind });
  }
  if (record.robot_xy) {
    const [x, y] = toScreen(transform, record.robot_xy[0], record.robot_xy[1]);
    nodes.push({ kind: "robot", x, y });
  }
  if (record.setpoint_xy) {
    const [x, y] = toScreen(transform, record.setpoint_xy[0], record.setpoint_xy[1]);
    nodes.push({ kind: "setpoint", x, y });
  }
  {
    const [x, y] = toScreen(transform, record.tip.p[0], record.tip.p[1]);
    nodes.push({ kind: "tip", x, y });
  }

  return {
    nodes,
    lightTilt: record.light_pose.tilt,
    lightPan: record.light_pose.pan,
    flags: {
      saturatedTilt: record.saturated[0],
      saturatedPan: record.saturated[1],
      clamped: record.clamped,
      assumptionViolated: record.assumption_violated,
    },
    tick: record.k,
  };
}
