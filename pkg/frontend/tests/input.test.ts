import { describe, expect, it } from "vitest";

import { InputState } from "../src/input.js";

describe("InputState", () => {
  it("maps wasd to movement intents", () => {
    const input = new InputState();
    input.keyDown("w");
    expect(input.intent(0.1).move).toEqual([1, 0, 0]);
    input.keyUp("w");
    input.keyDown("S");
    input.keyDown("d");
    expect(input.intent(0.1).move).toEqual([-1, 1, 0]);
  });

  it("clamps opposing keys to zero", () => {
    const input = new InputState();
    input.keyDown("w");
    input.keyDown("s");
    expect(input.intent(0.1).move).toEqual([0, 0, 0]);
  });

  it("rises and sinks with r and f", () => {
    const input = new InputState();
    input.keyDown("r");
    expect(input.intent(0.1).move).toEqual([0, 0, 1]);
    input.keyUp("r");
    input.keyDown("f");
    expect(input.intent(0.1).move).toEqual([0, 0, -1]);
  });

  it("accumulates mouse look and drains it", () => {
    const input = new InputState();
    input.mouseLook(100, -50);
    const first = input.intent(0.1);
    expect(first.look.yaw).toBeLessThan(0);
    expect(first.look.pitch).toBeGreaterThan(0);
    const second = input.intent(0.1);
    expect(second.look.yaw).toBe(0);
    expect(second.look.pitch).toBe(0);
  });

  it("scales arrow-key turning with dt", () => {
    const input = new InputState();
    input.keyDown("ArrowLeft");
    const slow = input.intent(0.1).look.yaw;
    const fast = input.intent(0.2).look.yaw;
    expect(fast).toBeCloseTo(2 * slow);
    expect(slow).toBeGreaterThan(0);
  });

  it("reports idle only with no input pending", () => {
    const input = new InputState();
    expect(input.idle).toBe(true);
    input.mouseLook(1, 0);
    expect(input.idle).toBe(false);
    input.intent(0.1);
    expect(input.idle).toBe(true);
  });
});
