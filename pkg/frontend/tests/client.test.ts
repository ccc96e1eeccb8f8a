import { describe, expect, it } from "vitest";

import { SessionClient } from "../src/client.js";
import { FrameState } from "../src/protocol.js";

function fakeFrame(world: string, version = 1): FrameState {
  return {
    version,
    scene: "unknot",
    world,
    element: world === "ice" ? "e" : "a",
    world_index: world === "ice" ? 0 : 1,
    pose: { position: [0, 0, 0], yaw: 0, pitch: 0 },
    camera: { width: 100, height: 80, vfov_deg: 70 },
    knot_segments: [],
    regions: [],
    worlds: [
      { name: "ice", color: [198, 226, 255] },
      { name: "forest", color: [34, 120, 60] },
    ],
    events: [],
  };
}

function fakeFetch(handler: (url: string, init?: RequestInit) => unknown) {
  return (async (url: RequestInfo | URL, init?: RequestInit) => {
    const body = handler(String(url), init);
    return new Response(JSON.stringify(body), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
}

describe("SessionClient", () => {
  it("tracks the session and the reported world", async () => {
    const calls: string[] = [];
    const client = new SessionClient(
      "http://engine",
      fakeFetch((url) => {
        calls.push(url);
        if (url.endsWith("/sessions")) {
          return { session: "s1", frame: fakeFrame("ice") };
        }
        return fakeFrame("forest");
      }),
    );
    await client.connect("unknot");
    expect(client.session).toBe("s1");
    expect(client.world).toBe("ice");
    await client.step([1, 0, 0], { yaw: 0, pitch: 0 });
    expect(client.world).toBe("forest");
    expect(calls[1]).toContain("/sessions/s1/step");
  });

  it("rejects unknown FrameState versions", async () => {
    const client = new SessionClient(
      "http://engine",
      fakeFetch(() => ({ session: "s1", frame: fakeFrame("ice", 2) })),
    );
    await expect(client.connect("unknot")).rejects.toThrow(/version/);
  });

  it("surfaces engine error details", async () => {
    const failing = (async () =>
      new Response(JSON.stringify({ detail: "unknown scene 'granny'" }), {
        status: 404,
      })) as unknown as typeof fetch;
    const client = new SessionClient("http://engine", failing);
    await expect(client.connect("granny")).rejects.toThrow(/unknown scene/);
  });

  it("refuses to step before connecting", async () => {
    const client = new SessionClient("http://engine");
    await expect(client.step([1, 0, 0], { yaw: 0, pitch: 0 })).rejects.toThrow(
      /not connected/,
    );
  });
});
