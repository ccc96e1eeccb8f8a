// Session client: connect, step, close. All topology stays server-side;
// the client only forwards movement intents and consumes FrameStates.

import { checkFrame, FrameState, StepRequest } from "./protocol.js";

export interface SceneSummary {
  name: string;
  group_order: number;
  worlds: { name: string; color: [number, number, number] }[];
  group_only: boolean;
  piece_count: number | null;
}

type FetchLike = typeof fetch;

export class SessionClient {
  private sessionId: string | null = null;
  lastFrame: FrameState | null = null;

  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  get session(): string | null {
    return this.sessionId;
  }

  get world(): string | null {
    return this.lastFrame?.world ?? null;
  }

  async scenes(): Promise<SceneSummary[]> {
    return this.json(await this.fetchImpl(`${this.baseUrl}/scenes`));
  }

  async connect(scene: string, width = 800, height = 600): Promise<FrameState> {
    const res = await this.fetchImpl(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ scene, width, height }),
    });
    const body = await this.json<{ session: string; frame: FrameState }>(res);
    this.sessionId = body.session;
    this.lastFrame = checkFrame(body.frame);
    return this.lastFrame;
  }

  async step(
    move: [number, number, number],
    look: { yaw: number; pitch: number },
    dt = 1.0,
  ): Promise<FrameState> {
    if (!this.sessionId) throw new Error("not connected");
    const req: StepRequest = { version: 1, move, look, dt };
    const res = await this.fetchImpl(
      `${this.baseUrl}/sessions/${this.sessionId}/step`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(req),
      },
    );
    this.lastFrame = checkFrame(await this.json<FrameState>(res));
    return this.lastFrame;
  }

  async info(): Promise<{ session: string; scene: string; world: string }> {
    if (!this.sessionId) throw new Error("not connected");
    return this.json(
      await this.fetchImpl(`${this.baseUrl}/sessions/${this.sessionId}`),
    );
  }

  async close(): Promise<void> {
    if (!this.sessionId) return;
    await this.fetchImpl(`${this.baseUrl}/sessions/${this.sessionId}`, {
      method: "DELETE",
    });
    this.sessionId = null;
  }

  private async json<T>(res: Response): Promise<T> {
    if (!res.ok) {
      let detail = `${res.status}`;
      try {
        const body = (await res.json()) as { detail?: string };
        if (body.detail) detail = `${res.status}: ${body.detail}`;
      } catch {
        // keep the bare status
      }
      throw new Error(`engine request failed (${detail})`);
    }
    return (await res.json()) as T;
  }
}
