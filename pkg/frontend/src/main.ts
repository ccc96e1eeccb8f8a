import { SessionClient } from "./client.js";
import { InputState } from "./input.js";
import { FrameView } from "./view.js";

const ENGINE_URL =
  new URLSearchParams(location.search).get("engine") ?? "http://127.0.0.1:8000";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function start(): Promise<void> {
  const canvas = el<HTMLCanvasElement>("view");
  const view = new FrameView(
    canvas,
    el("world"),
    el("legend"),
    el("log"),
  );
  const status = el("status");
  const picker = el<HTMLSelectElement>("scene");
  const client = new SessionClient(ENGINE_URL);
  const input = new InputState();

  try {
    const scenes = await client.scenes();
    for (const s of scenes.filter((s) => !s.group_only)) {
      const opt = document.createElement("option");
      opt.value = s.name;
      opt.textContent = `${s.name} (${s.group_order} worlds)`;
      picker.append(opt);
    }
  } catch (err) {
    status.textContent = `engine unreachable at ${ENGINE_URL}: ${err}`;
    return;
  }

  let busy = false;
  let connected = false;

  async function connect(scene: string): Promise<void> {
    busy = true;
    status.textContent = `building ${scene}...`;
    try {
      const frame = await client.connect(scene, canvas.clientWidth, canvas.clientHeight);
      view.draw(frame);
      status.textContent =
        "WASD move, R/F rise and sink, arrows or drag to look";
      connected = true;
    } catch (err) {
      status.textContent = `${err}`;
    } finally {
      busy = false;
    }
  }

  picker.addEventListener("change", () => void connect(picker.value));

  window.addEventListener("keydown", (e) => {
    input.keyDown(e.key);
    if (Object.keys({ w: 1, a: 1, s: 1, d: 1, r: 1, f: 1 }).includes(e.key.toLowerCase()))
      e.preventDefault();
  });
  window.addEventListener("keyup", (e) => input.keyUp(e.key));
  let dragging = false;
  canvas.addEventListener("mousedown", () => (dragging = true));
  window.addEventListener("mouseup", () => (dragging = false));
  window.addEventListener("mousemove", (e) => {
    if (dragging) input.mouseLook(e.movementX, e.movementY);
  });

  let last = performance.now();
  async function tick(): Promise<void> {
    const now = performance.now();
    const dt = Math.min((now - last) / 1000, 0.2);
    if (connected && !busy && !input.idle) {
      const intent = input.intent(dt);
      busy = true;
      try {
        const frame = await client.step(intent.move, intent.look, Math.max(dt, 0.02));
        view.draw(frame);
        last = now;
      } catch (err) {
        status.textContent = `${err}`;
      } finally {
        busy = false;
      }
    } else if (input.idle) {
      last = now;
    }
    requestAnimationFrame(() => void tick());
  }

  await connect(picker.value || "unknot");
  requestAnimationFrame(() => void tick());
}

void start();
