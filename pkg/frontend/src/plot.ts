/** 2-D region plot geometry: interference (dB) on x, throughput on y.
 *
 * All layout math is pure so it can be unit-tested; the canvas renderer
 * at the bottom is a thin consumer of it.
 */

import type { DashboardModel, TrajectoryPoint } from "./model.js";
import type { OddConfiguration } from "./types.js";

export interface PlotWindow {
  cMin: number;
  cMax: number;
  uMin: number;
  uMax: number;
  width: number;
  height: number;
  margin: number;
}

export interface LayerRect {
  configId: string;
  styleIndex: number;
  knowledge: string;
  x: number;
  y: number;
  w: number;
  h: number;
}

export function plotWindowFor(
  configurations: OddConfiguration[],
  trajectory: TrajectoryPoint[],
  width: number,
  height: number,
): PlotWindow {
  let cMin = -30;
  let uMax = 40;
  for (const config of configurations) {
    for (const [cLo, , , uHi] of config.boxes) {
      cMin = Math.min(cMin, cLo);
      uMax = Math.max(uMax, uHi);
    }
  }
  for (const point of trajectory) {
    cMin = Math.min(cMin, point.context);
    uMax = Math.max(uMax, point.utility);
  }
  return { cMin: cMin - 2, cMax: 0, uMin: 0, uMax: uMax + 5, width, height, margin: 36 };
}

export function worldToPixel(
  w: PlotWindow,
  utility: number,
  context: number,
): { x: number; y: number } {
  const innerW = w.width - 2 * w.margin;
  const innerH = w.height - 2 * w.margin;
  const x = w.margin + ((context - w.cMin) / (w.cMax - w.cMin)) * innerW;
  const y = w.height - w.margin - ((utility - w.uMin) / (w.uMax - w.uMin)) * innerH;
  return { x, y };
}

export function layerRects(
  configurations: OddConfiguration[],
  w: PlotWindow,
): LayerRect[] {
  const rects: LayerRect[] = [];
  configurations.forEach((config, index) => {
    config.boxes.forEach((box, boxIndex) => {
      const [cLo, cHi, uLo, uHi] = box;
      const topLeft = worldToPixel(w, uHi, cLo);
      const bottomRight = worldToPixel(w, uLo, cHi);
      rects.push({
        configId: config.id,
        styleIndex: index,
        knowledge: config.knowledge[boxIndex] ?? "known_known",
        x: topLeft.x,
        y: topLeft.y,
        w: bottomRight.x - topLeft.x,
        h: bottomRight.y - topLeft.y,
      });
    });
  });
  return rects;
}

const LAYER_COLORS = [
  "#58a6ff",
  "#3fb950",
  "#d29922",
  "#bc8cff",
  "#f78166",
  "#56d4dd",
];

export function layerColor(styleIndex: number): string {
  return LAYER_COLORS[styleIndex % LAYER_COLORS.length];
}

export function drawPlot(
  ctx: CanvasRenderingContext2D,
  model: DashboardModel,
  width: number,
  height: number,
): void {
  const windowSpec = plotWindowFor(model.layers(), model.trajectory, width, height);
  ctx.clearRect(0, 0, width, height);
  ctx.font = "10px monospace";

  for (const rect of layerRects(model.layers(), windowSpec)) {
    const color = layerColor(rect.styleIndex);
    ctx.globalAlpha = 0.14;
    ctx.fillStyle = color;
    ctx.fillRect(rect.x, rect.y, rect.w, rect.h);
    ctx.globalAlpha = 1.0;
    ctx.strokeStyle = color;
    ctx.setLineDash(rect.knowledge === "known_known" ? [] : [4, 3]);
    ctx.strokeRect(rect.x, rect.y, rect.w, rect.h);
    ctx.setLineDash([]);
  }

  // axes labels
  ctx.fillStyle = "#8b949e";
  ctx.fillText("interference (dB)", width / 2 - 40, height - 8);
  ctx.save();
  ctx.translate(10, height / 2 + 40);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText("throughput (pkt/s)", 0, 0);
  ctx.restore();

  // trajectory: faded walk, out-of-ODD points flagged red
  model.trajectory.forEach((point, index) => {
    const { x, y } = worldToPixel(windowSpec, point.utility, point.context);
    const isLatest = index === model.trajectory.length - 1;
    ctx.globalAlpha = isLatest ? 1.0 : 0.25 + 0.5 * (index / model.trajectory.length);
    ctx.fillStyle = point.inOdd ? "#c9d1d9" : "#f85149";
    ctx.beginPath();
    ctx.arc(x, y, isLatest ? 5 : 2, 0, Math.PI * 2);
    ctx.fill();
    if (isLatest) {
      ctx.strokeStyle = point.inOdd ? "#58a6ff" : "#f85149";
      ctx.stroke();
    }
  });
  ctx.globalAlpha = 1.0;
}
