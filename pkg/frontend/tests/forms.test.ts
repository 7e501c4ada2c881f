import { describe, expect, it } from "vitest";

import { parseLossGoal, parseTargetForm } from "../src/forms.js";

describe("parseTargetForm", () => {
  it("accepts the reference extension target", () => {
    const result = parseTargetForm({
      utilityLo: "20", utilityHi: "40", contextLo: "-20", contextHi: "0",
    });
    expect(result).toEqual({ ok: true, utility: [20, 40], context: [-20, 0] });
  });

  it("rejects inverted intervals inline without posting", () => {
    const result = parseTargetForm({
      utilityLo: "40", utilityHi: "20", contextLo: "-20", contextHi: "0",
    });
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.errors.some((e) => e.field === "utility")).toBe(true);
    }
  });

  it("rejects non-numeric input naming the field", () => {
    const result = parseTargetForm({
      utilityLo: "many", utilityHi: "40", contextLo: "-20", contextHi: "0",
    });
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.errors[0].field).toBe("utilityLo");
    }
  });

  it("rejects positive interference and negative throughput", () => {
    const result = parseTargetForm({
      utilityLo: "-5", utilityHi: "40", contextLo: "-20", contextHi: "3",
    });
    expect(result.ok).toBe(false);
    if (!result.ok) {
      const fields = result.errors.map((e) => e.field);
      expect(fields).toContain("utility");
      expect(fields).toContain("context");
    }
  });
});

describe("parseLossGoal", () => {
  it("accepts fractions in (0, 1) only", () => {
    expect(parseLossGoal("0.05")).toBe(0.05);
    expect(parseLossGoal("0")).toBeNull();
    expect(parseLossGoal("1")).toBeNull();
    expect(parseLossGoal("two")).toBeNull();
  });
});
