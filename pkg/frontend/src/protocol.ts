// FrameState protocol, version 1. Mirrors the engine's JSON schema; the
// client renders whatever the engine sends and never re-derives topology.

export const FRAME_STATE_VERSION = 1;

export interface WorldColor {
  name: string;
  color: [number, number, number];
}

export interface RegionState {
  id: number;
  label: string;
  label_index: number;
  color: [number, number, number];
  loops: number[][][];
  pole: [number, number];
  pole_radius: number;
  bbox: [number, number, number, number];
}

export interface CrossingEvent {
  t: number;
  segment: number;
  sign: number;
  applied: string;
}

export interface FrameState {
  version: number;
  scene: string;
  world: string;
  element: string;
  world_index: number;
  pose: { position: [number, number, number]; yaw: number; pitch: number };
  camera: { width: number; height: number; vfov_deg: number };
  knot_segments: number[][];
  regions: RegionState[];
  worlds: WorldColor[];
  events: CrossingEvent[];
}

export interface StepRequest {
  version: number;
  move: [number, number, number];
  look: { yaw: number; pitch: number };
  dt: number;
}

export function checkFrame(frame: FrameState): FrameState {
  if (frame.version !== FRAME_STATE_VERSION) {
    throw new Error(`unsupported FrameState version ${frame.version}`);
  }
  return frame;
}

export function rgb(color: [number, number, number]): string {
  return `rgb(${color[0]}, ${color[1]}, ${color[2]})`;
}
