// Canvas renderer for FrameStates: regions as even-odd filled polygons,
// the projected knot as a stroke, plus the HUD (world indicator, legend,
// crossing log). The engine already solved visibility; nothing here does.

import { FrameState, rgb } from "./protocol.js";

export class FrameView {
  private readonly ctx: CanvasRenderingContext2D;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly worldLabel: HTMLElement,
    private readonly legend: HTMLElement,
    private readonly log: HTMLElement,
  ) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  draw(frame: FrameState): void {
    const { width, height } = frame.camera;
    if (this.canvas.width !== width) this.canvas.width = width;
    if (this.canvas.height !== height) this.canvas.height = height;
    const ctx = this.ctx;

    const current = frame.worlds[frame.world_index];
    ctx.fillStyle = current ? rgb(current.color) : "#202020";
    ctx.fillRect(0, 0, width, height);

    for (const region of frame.regions) {
      const path = new Path2D();
      for (const loop of region.loops) {
        if (loop.length < 3) continue;
        path.moveTo(loop[0]![0]!, loop[0]![1]!);
        for (let i = 1; i < loop.length; i++) {
          path.lineTo(loop[i]![0]!, loop[i]![1]!);
        }
        path.closePath();
      }
      ctx.fillStyle = rgb(region.color);
      ctx.fill(path, "evenodd");
    }

    ctx.strokeStyle = "rgb(15, 15, 20)";
    ctx.lineWidth = 2;
    ctx.beginPath();
    for (const [x0, y0, x1, y1] of frame.knot_segments as [
      number,
      number,
      number,
      number,
    ][]) {
      ctx.moveTo(x0, y0);
      ctx.lineTo(x1, y1);
    }
    ctx.stroke();

    this.drawHud(frame);
  }

  private drawHud(frame: FrameState): void {
    const current = frame.worlds[frame.world_index];
    this.worldLabel.textContent = `world: ${frame.world} (${frame.element})`;
    this.worldLabel.style.background = current ? rgb(current.color) : "#444";

    this.legend.replaceChildren(
      ...frame.worlds.map((w) => {
        const item = document.createElement("div");
        item.className = "legend-item" + (w.name === frame.world ? " here" : "");
        const swatch = document.createElement("span");
        swatch.className = "swatch";
        swatch.style.background = rgb(w.color);
        item.append(swatch, document.createTextNode(w.name));
        return item;
      }),
    );

    for (const ev of frame.events) {
      const line = document.createElement("div");
      const dir = ev.sign > 0 ? "→" : "←";
      line.textContent = `crossed piece ${ev.segment} ${dir} applied ${ev.applied}, now in ${frame.world}`;
      this.log.prepend(line);
    }
    while (this.log.childElementCount > 8) {
      this.log.lastElementChild?.remove();
    }
  }
}
