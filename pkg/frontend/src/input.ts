// Keyboard and click steering. Inputs accumulate into a pending command and
// are flushed at most once per display frame, so key auto-repeat cannot spam
// the service; one discrete input yields exactly one command message.

import type { CommandPayload } from "./protocol.js";

export interface FramePreset {
  l_w: number;
  theta_w_deg: number;
  humanFacingDeg: number;
}

const SPEED_STEP = 0.25;
const HEADING_STEP_DEG = 15;
const MAX_SPEED = 6.0;

/** Wrap an angle to (-pi, pi], matching the service's convention. */
function wrapPi(a: number): number {
  let w = a % (2 * Math.PI);
  if (w <= -Math.PI) {
    w += 2 * Math.PI;
  } else if (w > Math.PI) {
    w -= 2 * Math.PI;
  }
  return w;
}

export class SteeringInput {
  private pending: CommandPayload | null = null;
  /** Local echo of the last commanded values, for incremental key steps. */
  private speed = 0;
  private headingDeg = 0;
  rejectedClick = false;

  constructor(private frame: FramePreset, initialSpeed = 0, initialHeadingDeg = 0) {
    this.speed = initialSpeed;
    this.headingDeg = initialHeadingDeg;
  }

  /** Returns true when the key steers (callers preventDefault on it). */
  keydown(key: string): boolean {
    switch (key) {
      case "ArrowUp":
        this.speed = Math.min(this.speed + SPEED_STEP, MAX_SPEED);
        break;
      case "ArrowDown":
        this.speed = Math.max(this.speed - SPEED_STEP, 0);
        break;
      case "ArrowLeft":
        this.headingDeg += HEADING_STEP_DEG;
        break;
      case "ArrowRight":
        this.headingDeg -= HEADING_STEP_DEG;
        break;
      case " ":
        this.speed = 0;
        break;
      default:
        return false;
    }
    this.pending = { heading_deg: this.headingDeg, speed: this.speed };
    return true;
  }

  /**
   * A click at world (wx, wy): inside the rear semicircle it queues a
   * waypoint command; outside it sets the rejection cue and sends nothing.
   */
  clickWorld(wx: number, wy: number): boolean {
    const polar = this.toWorldPolar(wx, wy);
    if (polar === null) {
      this.rejectedClick = true;
      return false;
    }
    this.rejectedClick = false;
    this.pending = { waypoint: { r_w: polar.r_w, beta_w_deg: polar.beta_w_deg } };
    return true;
  }

  /** At most one coalesced command per flush (call once per display frame). */
  flush(): CommandPayload | null {
    const out = this.pending;
    this.pending = null;
    return out;
  }

  private toWorldPolar(wx: number, wy: number): { r_w: number; beta_w_deg: number } | null {
    const r = Math.hypot(wx, wy);
    if (r > this.frame.l_w || r === 0) {
      return null;
    }
    const facing = (this.frame.humanFacingDeg * Math.PI) / 180;
    const beta = wrapPi(facing - Math.PI / 2 - Math.atan2(wy, wx));
    const betaDeg = (beta * 180) / Math.PI;
    if (betaDeg < 0 || betaDeg > this.frame.theta_w_deg) {
      return null;
    }
    return { r_w: r, beta_w_deg: betaDeg };
  }
}
