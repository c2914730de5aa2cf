// Orbiting perspective camera over the workspace. Pure state + math so
// projection is unit-testable without a DOM.

import type { Vec3 } from "./types.js";

export interface Camera {
  target: Vec3;
  distance: number;
  yaw: number; // radians about +y, 0 looks along -z like the user
  pitch: number; // radians, positive looks down
  fov: number; // vertical, radians
}

export function defaultCamera(): Camera {
  return { target: [0, 0, -2.0], distance: 9.0, yaw: 0, pitch: 0.15, fov: Math.PI / 4 };
}

export function orbit(camera: Camera, dYaw: number, dPitch: number): Camera {
  const pitch = Math.max(-1.4, Math.min(1.4, camera.pitch + dPitch));
  return { ...camera, yaw: camera.yaw + dYaw, pitch };
}

export function pan(camera: Camera, dx: number, dy: number): Camera {
  // Move the target in the camera's screen plane.
  const scale = camera.distance * 0.0015;
  const cy = Math.cos(camera.yaw);
  const sy = Math.sin(camera.yaw);
  const right: Vec3 = [cy, 0, -sy];
  const target: Vec3 = [
    camera.target[0] - right[0] * dx * scale,
    camera.target[1] + dy * scale,
    camera.target[2] - right[2] * dx * scale,
  ];
  return { ...camera, target };
}

export function zoom(camera: Camera, factor: number): Camera {
  const distance = Math.max(0.5, Math.min(60, camera.distance * factor));
  return { ...camera, distance };
}

export function cameraEye(camera: Camera): Vec3 {
  const cp = Math.cos(camera.pitch);
  return [
    camera.target[0] + camera.distance * cp * Math.sin(camera.yaw),
    camera.target[1] + camera.distance * Math.sin(camera.pitch),
    camera.target[2] + camera.distance * cp * Math.cos(camera.yaw),
  ];
}

export interface Projected {
  x: number;
  y: number;
  depth: number; // camera-space distance along the view axis
  visible: boolean;
}

interface Basis {
  eye: Vec3;
  right: Vec3;
  up: Vec3;
  forward: Vec3;
}

function cameraBasis(camera: Camera): Basis {
  const eye = cameraEye(camera);
  const fx = camera.target[0] - eye[0];
  const fy = camera.target[1] - eye[1];
  const fz = camera.target[2] - eye[2];
  const fl = Math.hypot(fx, fy, fz);
  const forward: Vec3 = [fx / fl, fy / fl, fz / fl];
  const worldUp: Vec3 = [0, 1, 0];
  const r: Vec3 = [
    forward[1] * worldUp[2] - forward[2] * worldUp[1],
    forward[2] * worldUp[0] - forward[0] * worldUp[2],
    forward[0] * worldUp[1] - forward[1] * worldUp[0],
  ];
  const rl = Math.hypot(r[0], r[1], r[2]) || 1;
  const right: Vec3 = [r[0] / rl, r[1] / rl, r[2] / rl];
  const up: Vec3 = [
    right[1] * forward[2] - right[2] * forward[1],
    right[2] * forward[0] - right[0] * forward[2],
    right[0] * forward[1] - right[1] * forward[0],
  ];
  return { eye, right, up, forward };
}

// World -> screen. The screen origin is the canvas center; callers scale
// by the canvas size.
export function project(camera: Camera, point: Vec3, width: number, height: number): Projected {
  const { eye, right, up, forward } = cameraBasis(camera);
  const dx = point[0] - eye[0];
  const dy = point[1] - eye[1];
  const dz = point[2] - eye[2];
  const cx = dx * right[0] + dy * right[1] + dz * right[2];
  const cy = dx * up[0] + dy * up[1] + dz * up[2];
  const cz = dx * forward[0] + dy * forward[1] + dz * forward[2];
  if (cz <= 0.01) {
    return { x: 0, y: 0, depth: cz, visible: false };
  }
  const focal = height / 2 / Math.tan(camera.fov / 2);
  return {
    x: width / 2 + (cx / cz) * focal,
    y: height / 2 - (cy / cz) * focal,
    depth: cz,
    visible: true,
  };
}

// Screen point back to the world at a fixed camera depth; dragging keeps
// the grabbed object's depth, which is the 2D analogue of a VR grab.
export function unproject(camera: Camera, x: number, y: number, depth: number,
                          width: number, height: number): Vec3 {
  const { eye, right, up, forward } = cameraBasis(camera);
  const focal = height / 2 / Math.tan(camera.fov / 2);
  const cx = ((x - width / 2) * depth) / focal;
  const cy = ((height / 2 - y) * depth) / focal;
  return [
    eye[0] + right[0] * cx + up[0] * cy + forward[0] * depth,
    eye[1] + right[1] * cx + up[1] * cy + forward[1] * depth,
    eye[2] + right[2] * cx + up[2] * cy + forward[2] * depth,
  ];
}
