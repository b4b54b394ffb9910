import { describe, expect, it } from "vitest";

import { SteeringInput } from "../src/input.js";

const FRAME = { l_w: 10.0, theta_w_deg: 180.0, humanFacingDeg: 90.0 };

describe("SteeringInput", () => {
  it("one discrete input yields exactly one command", () => {
    const input = new SteeringInput(FRAME, 1.0);
    expect(input.keydown("ArrowUp")).toBe(true);
    const first = input.flush();
    expect(first).not.toBeNull();
    expect(first?.speed).toBeCloseTo(1.25);
    // Nothing queued afterwards: no duplicate message for the same input.
    expect(input.flush()).toBeNull();
  });

  it("rapid key repeat coalesces to at most one command per flush", () => {
    const input = new SteeringInput(FRAME, 0.0);
    for (let i = 0; i < 17; i++) {
      input.keydown("ArrowUp");
    }
    const commands = [];
    let c;
    while ((c = input.flush()) !== null) {
      commands.push(c);
    }
    expect(commands).toHaveLength(1);
    expect(commands[0]?.speed).toBeCloseTo(17 * 0.25);
  });

  it("heading keys steer left and right", () => {
    const input = new SteeringInput(FRAME, 1.0, 0.0);
    input.keydown("ArrowLeft");
    expect(input.flush()?.heading_deg).toBeCloseTo(15);
    input.keydown("ArrowRight");
    input.keydown("ArrowRight");
    expect(input.flush()?.heading_deg).toBeCloseTo(-15);
  });

  it("speed never goes negative and space stops", () => {
    const input = new SteeringInput(FRAME, 0.25);
    input.keydown("ArrowDown");
    input.keydown("ArrowDown");
    expect(input.flush()?.speed).toBe(0);
    input.keydown("ArrowUp");
    input.keydown(" ");
    expect(input.flush()?.speed).toBe(0);
  });

  it("ignores non-steering keys", () => {
    const input = new SteeringInput(FRAME);
    expect(input.keydown("a")).toBe(false);
    expect(input.flush()).toBeNull();
  });

  it("click in the rear semicircle sends that waypoint", () => {
    const input = new SteeringInput(FRAME);
    // Directly behind the human (facing +y): world (0, -4).
    expect(input.clickWorld(0, -4)).toBe(true);
    const cmd = input.flush();
    expect(cmd?.waypoint?.r_w).toBeCloseTo(4);
    expect(cmd?.waypoint?.beta_w_deg).toBeCloseTo(90);
    expect(input.rejectedClick).toBe(false);
  });

  it("click at the human's right maps to beta 0", () => {
    const input = new SteeringInput(FRAME);
    expect(input.clickWorld(3, 0)).toBe(true);
    expect(input.flush()?.waypoint?.beta_w_deg).toBeCloseTo(0);
  });

  it("clicks outside the semicircle are rejected without a message", () => {
    const input = new SteeringInput(FRAME);
    expect(input.clickWorld(0, 4)).toBe(false);      // front half-plane
    expect(input.rejectedClick).toBe(true);
    expect(input.flush()).toBeNull();
    expect(input.clickWorld(0, -12)).toBe(false);    // beyond the rim
    expect(input.flush()).toBeNull();
  });
});
