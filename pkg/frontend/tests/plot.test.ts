import { describe, expect, it } from "vitest";

import { layerColor, layerRects, plotWindowFor, worldToPixel } from "../src/plot.js";
import type { OddConfiguration } from "../src/types.js";

const CONFIGS: OddConfiguration[] = [
  { id: "power-min", boxes: [[-12, 0, 0, 10]], knowledge: ["known_known"], lifetime_years: [5, 8] },
  {
    id: "dualband-radio",
    boxes: [[-30, 0, 0, 50]],
    knowledge: ["known_unknown"],
    lifetime_years: [1, 3],
  },
];

describe("plot geometry", () => {
  it("maps world corners into the padded pixel window", () => {
    const w = { cMin: -30, cMax: 0, uMin: 0, uMax: 50, width: 400, height: 300, margin: 30 };
    expect(worldToPixel(w, 0, -30)).toEqual({ x: 30, y: 270 });     // bottom-left
    expect(worldToPixel(w, 50, 0)).toEqual({ x: 370, y: 30 });      // top-right
    const mid = worldToPixel(w, 25, -15);
    expect(mid.x).toBeCloseTo(200);
    expect(mid.y).toBeCloseTo(150);
  });

  it("produces one rect per box with a stable per-config style", () => {
    const w = plotWindowFor(CONFIGS, [], 400, 300);
    const rects = layerRects(CONFIGS, w);
    expect(rects).toHaveLength(2);
    expect(rects[0].configId).toBe("power-min");
    expect(rects[1].configId).toBe("dualband-radio");
    expect(rects[0].styleIndex).not.toBe(rects[1].styleIndex);
    expect(rects.every((r) => r.w > 0 && r.h > 0)).toBe(true);
  });

  it("window expands to include trajectory excursions", () => {
    const w = plotWindowFor(CONFIGS, [
      { tick: 0, utility: 70, context: -45, inOdd: false },
    ], 400, 300);
    expect(w.cMin).toBeLessThanOrEqual(-45);
    expect(w.uMax).toBeGreaterThanOrEqual(70);
  });

  it("knowledge tag selects the dashed style", () => {
    const w = plotWindowFor(CONFIGS, [], 400, 300);
    const rects = layerRects(CONFIGS, w);
    expect(rects[0].knowledge).toBe("known_known");
    expect(rects[1].knowledge).toBe("known_unknown");
  });

  it("layer colors cycle deterministically", () => {
    expect(layerColor(0)).toBe(layerColor(6));
    expect(layerColor(1)).not.toBe(layerColor(2));
  });
});
