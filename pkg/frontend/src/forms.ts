/** Client-side validation for operator forms; mirrors server rules. */

export interface TargetFormInput {
  utilityLo: string;
  utilityHi: string;
  contextLo: string;
  contextHi: string;
}

export type TargetFormResult =
  | { ok: true; utility: [number, number]; context: [number, number] }
  | { ok: false; errors: { field: string; message: string }[] };

export function parseTargetForm(input: TargetFormInput): TargetFormResult {
  const errors: { field: string; message: string }[] = [];

  const parse = (field: string, raw: string): number => {
    const value = Number(raw);
    if (raw.trim() === "" || Number.isNaN(value)) {
      errors.push({ field, message: "must be a number" });
      return NaN;
    }
    return value;
  };

  const uLo = parse("utilityLo", input.utilityLo);
  const uHi = parse("utilityHi", input.utilityHi);
  const cLo = parse("contextLo", input.contextLo);
  const cHi = parse("contextHi", input.contextHi);
  if (errors.length > 0) {
    return { ok: false, errors };
  }

  if (uLo > uHi) {
    errors.push({ field: "utility", message: `lo ${uLo} exceeds hi ${uHi}` });
  }
  if (cLo > cHi) {
    errors.push({ field: "context", message: `lo ${cLo} exceeds hi ${cHi}` });
  }
  if (uLo < 0) {
    errors.push({ field: "utility", message: "throughput must be >= 0" });
  }
  if (cHi > 0) {
    errors.push({ field: "context", message: "interference must be <= 0 dB" });
  }
  if (errors.length > 0) {
    return { ok: false, errors };
  }
  return { ok: true, utility: [uLo, uHi], context: [cLo, cHi] };
}

export function parseLossGoal(raw: string): number | null {
  const value = Number(raw);
  if (Number.isNaN(value) || value <= 0 || value >= 1) {
    return null;
  }
  return value;
}
