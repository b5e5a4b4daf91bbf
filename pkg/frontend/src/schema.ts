/**
 * Loaders for the solver CLI's documented output files. Schema violations
 * raise SchemaError naming the offending field; unknown keys are ignored.
 */
import { readFileSync } from "node:fs";

export class SchemaError extends Error {
  readonly file: string;
  readonly field: string;

  constructor(file: string, field: string, detail: string) {
    super(`${file}: field '${field}': ${detail}`);
    this.file = file;
    this.field = field;
  }
}

export interface FieldCell {
  x: number;
  y: number;
  re: number;
  im: number;
  mask: 0 | 1;
}

export interface FieldGrid {
  cells: FieldCell[];
  xs: number[]; // distinct x values, ascending
  ys: number[]; // distinct y values, ascending
}

const FIELD_HEADER = "x,y,re,im,mask";

export function loadFieldCsv(path: string): FieldGrid {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) throw new SchemaError(path, "header", "empty file");
  if (lines[0] !== FIELD_HEADER)
    throw new SchemaError(path, "header", `expected '${FIELD_HEADER}', got '${lines[0]}'`);
  const cells: FieldCell[] = [];
  const xset = new Set<number>();
  const yset = new Set<number>();
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== 5)
      throw new SchemaError(path, `row ${i}`, `expected 5 columns, got ${parts.length}`);
    const [x, y, re, im] = parts.slice(0, 4).map(Number);
    const mask = Number(parts[4]);
    if (!Number.isFinite(x)) throw new SchemaError(path, "x", `non-numeric at row ${i}`);
    if (!Number.isFinite(y)) throw new SchemaError(path, "y", `non-numeric at row ${i}`);
    if (mask !== 0 && mask !== 1)
      throw new SchemaError(path, "mask", `must be 0 or 1 at row ${i}`);
    if (mask === 0 && (!Number.isFinite(re) || !Number.isFinite(im)))
      throw new SchemaError(path, "re", `unmasked cell must be finite at row ${i}`);
    cells.push({ x, y, re, im, mask: mask as 0 | 1 });
    xset.add(x);
    yset.add(y);
  }
  return {
    cells,
    xs: [...xset].sort((a, b) => a - b),
    ys: [...yset].sort((a, b) => a - b),
  };
}

export type Complex = [number, number];

export interface Diagnostics {
  curvePolyline: Complex[];
  sources: Complex[];
  supportAngles: number[];
  dataPolesZeta: Complex[];
  mapDerivZerosZeta: Complex[];
  shieldPolyline: { angles: number[]; radii: number[] };
  boundaryResidual: number;
}

function json(path: string): any {
  try {
    return JSON.parse(readFileSync(path, "utf8"));
  } catch (e) {
    throw new SchemaError(path, "(document)", `not valid JSON: ${e}`);
  }
}

function pairList(path: string, rec: any, field: string): Complex[] {
  const v = rec[field];
  if (!Array.isArray(v)) throw new SchemaError(path, field, "missing or not an array");
  return v.map((p: any, i: number) => {
    if (!Array.isArray(p) || p.length !== 2 || !p.every((c) => typeof c === "number"))
      throw new SchemaError(path, field, `entry ${i} is not an [re, im] pair`);
    return [p[0], p[1]] as Complex;
  });
}

function numberList(path: string, rec: any, field: string): number[] {
  const v = rec[field];
  if (!Array.isArray(v) || !v.every((c: any) => typeof c === "number"))
    throw new SchemaError(path, field, "missing or not a numeric array");
  return v as number[];
}

export function loadDiagnostics(path: string): Diagnostics {
  const rec = json(path);
  const shield = rec.shield_polyline;
  if (typeof shield !== "object" || shield === null)
    throw new SchemaError(path, "shield_polyline", "missing or not an object");
  if (typeof rec.boundary_residual !== "number")
    throw new SchemaError(path, "boundary_residual", "missing or not a number");
  return {
    curvePolyline: pairList(path, rec, "curve_polyline"),
    sources: pairList(path, rec, "sources"),
    supportAngles: numberList(path, rec, "support_angles"),
    dataPolesZeta: pairList(path, rec, "data_poles_zeta"),
    mapDerivZerosZeta: pairList(path, rec, "map_deriv_zeros_zeta"),
    shieldPolyline: {
      angles: numberList(path, shield, "angles").map((v) => v),
      radii: numberList(path, shield, "radii").map((v) => v),
    },
    boundaryResidual: rec.boundary_residual,
  };
}

export interface Solution {
  sources: Complex[];
  k: number;
  order: number;
}

export function loadSolution(path: string): Solution {
  const rec = json(path);
  if (typeof rec.k !== "number") throw new SchemaError(path, "k", "missing or not a number");
  if (typeof rec.order !== "number")
    throw new SchemaError(path, "order", "missing or not a number");
  return { sources: pairList(path, rec, "sources"), k: rec.k, order: rec.order };
}

export interface StudyRow {
  J: number;
  residual: number;
}

export function loadStudyCsv(path: string): StudyRow[] {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || lines[0] !== "J,residual")
    throw new SchemaError(path, "header", "expected 'J,residual'");
  if (lines.length < 2) throw new SchemaError(path, "rows", "no data rows");
  return lines.slice(1).map((line, i) => {
    const [J, residual] = line.split(",").map(Number);
    if (!Number.isInteger(J) || J <= 0)
      throw new SchemaError(path, "J", `not a positive integer at row ${i + 1}`);
    if (!Number.isFinite(residual) || residual < 0)
      throw new SchemaError(path, "residual", `not a non-negative number at row ${i + 1}`);
    return { J, residual };
  });
}
