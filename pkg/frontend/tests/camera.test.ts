import { describe, expect, it } from "vitest";

import { defaultCamera, orbit, pan, project, unproject, zoom } from "../src/camera.js";

describe("camera", () => {
  it("projects the target to the canvas center", () => {
    const camera = defaultCamera();
    const p = project(camera, camera.target, 800, 600);
    expect(p.visible).toBe(true);
    expect(p.x).toBeCloseTo(400, 6);
    expect(p.y).toBeCloseTo(300, 6);
  });

  it("unproject inverts project at the same depth", () => {
    const camera = orbit(defaultCamera(), 0.4, -0.1);
    const world: [number, number, number] = [1.25, -0.5, -3.75];
    const p = project(camera, world, 800, 600);
    const back = unproject(camera, p.x, p.y, p.depth, 800, 600);
    expect(back[0]).toBeCloseTo(world[0], 9);
    expect(back[1]).toBeCloseTo(world[1], 9);
    expect(back[2]).toBeCloseTo(world[2], 9);
  });

  it("points behind the eye are invisible", () => {
    const camera = defaultCamera();
    const p = project(camera, [0, 0, 100], 800, 600);
    expect(p.visible).toBe(false);
  });

  it("zoom clamps the distance", () => {
    let camera = defaultCamera();
    for (let i = 0; i < 100; i++) camera = zoom(camera, 0.5);
    expect(camera.distance).toBeGreaterThanOrEqual(0.5);
    for (let i = 0; i < 100; i++) camera = zoom(camera, 2.0);
    expect(camera.distance).toBeLessThanOrEqual(60);
  });

  it("pan moves the target in the view plane", () => {
    const camera = defaultCamera();
    const moved = pan(camera, 100, 0);
    expect(moved.target[0]).not.toBe(camera.target[0]);
    expect(moved.target[1]).toBe(camera.target[1]);
  });
});
