import assert from "node:assert/strict";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import {
  loadDiagnostics,
  loadFieldCsv,
  loadSolution,
  loadStudyCsv,
  SchemaError,
} from "../src/schema";

const FIX = join(__dirname, "..", "..", "test", "fixtures");

function tmpFile(name: string, content: string): string {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const p = join(dir, name);
  writeFileSync(p, content);
  return p;
}

test("loads the disk field grid", () => {
  const grid = loadFieldCsv(join(FIX, "disk", "field.csv"));
  assert.equal(grid.xs.length, 60);
  assert.equal(grid.ys.length, 60);
  assert.equal(grid.cells.length, 3600);
  const masked = grid.cells.filter((c) => c.mask === 1);
  assert.ok(masked.length > 0);
  for (const c of masked) assert.ok(Math.hypot(c.x, c.y) < 1.2);
});

test("loads diagnostics and solution for both runs", () => {
  for (const name of ["disk", "trefoil"]) {
    const diag = loadDiagnostics(join(FIX, name, "diagnostics.json"));
    assert.ok(diag.curvePolyline.length >= 64);
    assert.ok(diag.sources.length > 0);
    assert.equal(diag.shieldPolyline.angles.length, diag.shieldPolyline.radii.length);
    assert.ok(diag.boundaryResidual < 1e-6);
    const sol = loadSolution(join(FIX, name, "solution.json"));
    assert.equal(sol.sources.length, diag.sources.length);
    assert.ok(sol.k > 0);
  }
});

test("loads the study table", () => {
  const rows = loadStudyCsv(join(FIX, "study", "study.csv"));
  assert.ok(rows.length >= 3);
  assert.ok(rows[rows.length - 1].residual < rows[0].residual);
});

test("rejects a wrong field.csv header, naming the field", () => {
  const p = tmpFile("field.csv", "a,b,c,d,e\n1,2,3,4,0\n");
  assert.throws(
    () => loadFieldCsv(p),
    (e: unknown) => e instanceof SchemaError && e.field === "header",
  );
});

test("rejects a bad mask value, naming the field", () => {
  const p = tmpFile("field.csv", "x,y,re,im,mask\n1,2,3,4,7\n");
  assert.throws(
    () => loadFieldCsv(p),
    (e: unknown) => e instanceof SchemaError && e.field === "mask",
  );
});

test("rejects non-finite unmasked cells, naming the field", () => {
  const p = tmpFile("field.csv", "x,y,re,im,mask\n1,2,nan,0,0\n");
  assert.throws(
    () => loadFieldCsv(p),
    (e: unknown) => e instanceof SchemaError && e.field === "re",
  );
});

test("rejects diagnostics missing sources, naming the field", () => {
  const rec = JSON.parse(readFileSync(join(FIX, "disk", "diagnostics.json"), "utf8"));
  delete rec.sources;
  const p = tmpFile("diagnostics.json", JSON.stringify(rec));
  assert.throws(
    () => loadDiagnostics(p),
    (e: unknown) => e instanceof SchemaError && e.field === "sources",
  );
});

test("rejects malformed complex pairs, naming the field", () => {
  const rec = JSON.parse(readFileSync(join(FIX, "disk", "diagnostics.json"), "utf8"));
  rec.data_poles_zeta = [[1, 2], [3]];
  const p = tmpFile("diagnostics.json", JSON.stringify(rec));
  assert.throws(
    () => loadDiagnostics(p),
    (e: unknown) => e instanceof SchemaError && e.field === "data_poles_zeta",
  );
});

test("ignores unknown keys", () => {
  const rec = JSON.parse(readFileSync(join(FIX, "disk", "diagnostics.json"), "utf8"));
  rec.totally_new_key = { nested: [1, 2, 3] };
  const p = tmpFile("diagnostics.json", JSON.stringify(rec));
  const diag = loadDiagnostics(p);
  assert.ok(diag.sources.length > 0);
});

test("rejects an empty study table, naming the field", () => {
  const p = tmpFile("study.csv", "J,residual\n");
  assert.throws(
    () => loadStudyCsv(p),
    (e: unknown) => e instanceof SchemaError && e.field === "rows",
  );
});

test("rejects a non-integer J, naming the field", () => {
  const p = tmpFile("study.csv", "J,residual\n2.5,1e-3\n");
  assert.throws(
    () => loadStudyCsv(p),
    (e: unknown) => e instanceof SchemaError && e.field === "J",
  );
});
