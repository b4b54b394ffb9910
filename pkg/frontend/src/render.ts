// Canvas drawing. Static chrome (semicircle, FOV sector) comes from the
// preset; everything that moves is a Scene node whose position already went
// through the one affine transform.

import type { Preset } from "./presets.js";
import type { Scene } from "./scene.js";
import { Affine, toScreen } from "./transform.js";

const COLORS: Record<string, string> = {
  trail: "#3b4252",
  footprint: "#8899aa",
  "footprint-wall": "#d08770",
  robot: "#bf616a",
  setpoint: "#a3be8c",
  tip: "#ebcb8b",
};

function dot(ctx: CanvasRenderingContext2D, x: number, y: number, r: number, color: string): void {
  ctx.beginPath();
  ctx.fillStyle = color;
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  ctx.fill();
}

function cross(ctx: CanvasRenderingContext2D, x: number, y: number, r: number, color: string): void {
  ctx.strokeStyle = color;
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(x - r, y - r);
  ctx.lineTo(x + r, y + r);
  ctx.moveTo(x - r, y + r);
  ctx.lineTo(x + r, y - r);
  ctx.stroke();
  ctx.lineWidth = 1;
}

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  scene: Scene | null,
  preset: Preset,
  transform: Affine,
  rejectedClick: boolean,
): void {
  const { width, height } = ctx.canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, width, height);

  drawBackground(ctx, preset, transform);
  if (scene) {
    drawScene(ctx, scene, transform);
  }
  if (rejectedClick) {
    ctx.fillStyle = "#bf616a";
    ctx.font = "13px system-ui";
    ctx.fillText("waypoint must be inside the rear semicircle", 12, height - 12);
  }
}

function drawBackground(ctx: CanvasRenderingContext2D, preset: Preset, t: Affine): void {
  const facing = (preset.frame.humanFacingDeg * Math.PI) / 180;
  const [hx, hy] = toScreen(t, 0, 0);

  // Rear semicircle (the robot's world).
  ctx.beginPath();
  ctx.strokeStyle = "#4c566a";
  ctx.setLineDash([6, 6]);
  // Screen angles mirror world angles (y flip): world angle a -> screen -a.
  ctx.arc(hx, hy, preset.frame.l_w * t.scale, -(facing + Math.PI / 2), -(facing - Math.PI / 2));
  ctx.closePath();
  ctx.stroke();
  ctx.setLineDash([]);

  // Forward FOV sector.
  const half = (preset.fov.theta_v_deg * Math.PI) / 360;
  ctx.beginPath();
  ctx.strokeStyle = "#5e81ac";
  ctx.moveTo(hx, hy);
  ctx.arc(hx, hy, preset.fov.l_v * t.scale, -(facing + half), -(facing - half));
  ctx.closePath();
  ctx.stroke();

  // Human marker.
  ctx.beginPath();
  ctx.fillStyle = "#88c0d0";
  ctx.arc(hx, hy, 5, 0, 2 * Math.PI);
  ctx.fill();
}

function drawScene(ctx: CanvasRenderingContext2D, scene: Scene, t: Affine): void {
  for (const node of scene.nodes) {
    switch (node.kind) {
      case "trail":
        dot(ctx, node.x, node.y, 1.5, COLORS.trail!);
        break;
      case "footprint":
        dot(
          ctx, node.x, node.y, 3,
          node.surface === "wall-face" ? COLORS["footprint-wall"]! : COLORS.footprint!,
        );
        break;
      case "robot":
        dot(ctx, node.x, node.y, 6, COLORS.robot!);
        break;
      case "setpoint":
        cross(ctx, node.x, node.y, 6, COLORS.setpoint!);
        break;
      case "tip":
        dot(ctx, node.x, node.y, 4, COLORS.tip!);
        break;
    }
  }
  drawLightGlyph(ctx, scene);
}

/** Azimuth needle + elevation arc so tilt/pan jumps are visible at a glance. */
function drawLightGlyph(ctx: CanvasRenderingContext2D, scene: Scene): void {
  const cx = ctx.canvas.width - 56;
  const cy = 56;
  const r = 34;

  ctx.strokeStyle = "#4c566a";
  ctx.beginPath();
  ctx.arc(cx, cy, r, 0, 2 * Math.PI);
  ctx.stroke();

  ctx.strokeStyle = scene.flags.saturatedPan ? "#d08770" : "#ebcb8b";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(cx, cy);
  ctx.lineTo(cx + r * Math.cos(-scene.lightPan), cy + r * Math.sin(-scene.lightPan));
  ctx.stroke();

  const frac = scene.lightTilt / (Math.PI / 2);
  ctx.strokeStyle = scene.flags.saturatedTilt || scene.flags.clamped ? "#d08770" : "#a3be8c";
  ctx.beginPath();
  ctx.arc(cx, cy, r + 5, -Math.PI / 2, -Math.PI / 2 + frac * Math.PI, false);
  ctx.stroke();
  ctx.lineWidth = 1;

  ctx.fillStyle = "#d8dee9";
  ctx.font = "11px system-ui";
  ctx.fillText(`tilt ${(scene.lightTilt * 180 / Math.PI).toFixed(1)}°`, cx - 30, cy + r + 20);
  ctx.fillText(`pan ${(scene.lightPan * 180 / Math.PI).toFixed(1)}°`, cx - 30, cy + r + 33);
}
