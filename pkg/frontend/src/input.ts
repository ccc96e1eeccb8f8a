// Keyboard and mouse state folded into per-frame movement intents.
// WASD moves, R/F rises and sinks, arrow keys or mouse drag turn the view.

export interface MoveIntent {
  move: [number, number, number]; // forward, right, up in [-1, 1]
  look: { yaw: number; pitch: number };
}

const KEY_MOVES: Record<string, [number, number, number]> = {
  w: [1, 0, 0],
  s: [-1, 0, 0],
  d: [0, 1, 0],
  a: [0, -1, 0],
  r: [0, 0, 1],
  f: [0, 0, -1],
};

const ARROW_LOOK: Record<string, [number, number]> = {
  ArrowLeft: [1, 0],
  ArrowRight: [-1, 0],
  ArrowUp: [0, 1],
  ArrowDown: [0, -1],
};

export class InputState {
  private down = new Set<string>();
  private pendingYaw = 0;
  private pendingPitch = 0;

  keyDown(key: string): void {
    this.down.add(key.length === 1 ? key.toLowerCase() : key);
  }

  keyUp(key: string): void {
    this.down.delete(key.length === 1 ? key.toLowerCase() : key);
  }

  mouseLook(dx: number, dy: number, sensitivity = 0.004): void {
    this.pendingYaw -= dx * sensitivity;
    this.pendingPitch -= dy * sensitivity;
  }

  /** Consume accumulated input; arrow-key turning scales with dt. */
  intent(dt: number, turnRate = 1.2): MoveIntent {
    const move: [number, number, number] = [0, 0, 0];
    for (const [key, m] of Object.entries(KEY_MOVES)) {
      if (this.down.has(key)) {
        move[0] += m[0];
        move[1] += m[1];
        move[2] += m[2];
      }
    }
    for (let i = 0; i < 3; i++) move[i] = Math.max(-1, Math.min(1, move[i]!));

    let yaw = this.pendingYaw;
    let pitch = this.pendingPitch;
    this.pendingYaw = 0;
    this.pendingPitch = 0;
    for (const [key, [dy, dp]] of Object.entries(ARROW_LOOK)) {
      if (this.down.has(key)) {
        yaw += dy * turnRate * dt;
        pitch += dp * turnRate * dt;
      }
    }
    return { move, look: { yaw, pitch } };
  }

  get idle(): boolean {
    return (
      this.down.size === 0 && this.pendingYaw === 0 && this.pendingPitch === 0
    );
  }
}
