import assert from "node:assert/strict";
import { createHash } from "node:crypto";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

import { encodePng, pngSize, Raster } from "../src/png";
import { loadDiagnostics, loadFieldCsv, loadStudyCsv } from "../src/schema";
import {
  renderConvergence,
  renderField,
  renderPlacement,
  renderZeta,
} from "../src/render";

const FIX = join(__dirname, "..", "..", "test", "fixtures");

const sha = (p: string) => createHash("sha256").update(readFileSync(p)).digest("hex");

test("png encoder round-trips dimensions", () => {
  const img = new Raster(33, 21);
  img.disk(10, 10, 4, [200, 0, 0]);
  const buf = encodePng(img);
  assert.deepEqual(pngSize(buf), { width: 33, height: 21 });
  assert.ok(buf.length > 100);
});

test("field renders for disk and trefoil without modifying inputs", () => {
  for (const name of ["disk", "trefoil"]) {
    const csv = join(FIX, name, "field.csv");
    const before = sha(csv);
    const grid = loadFieldCsv(csv);
    const img = renderField(grid);
    const buf = encodePng(img);
    assert.deepEqual(pngSize(buf), { width: 640, height: 640 });
    assert.equal(sha(csv), before);
  }
});

test("placement and zeta render for disk and trefoil", () => {
  for (const name of ["disk", "trefoil"]) {
    const p = join(FIX, name, "diagnostics.json");
    const before = sha(p);
    const diag = loadDiagnostics(p);
    for (const render of [renderPlacement, renderZeta]) {
      const buf = encodePng(render(diag));
      assert.deepEqual(pngSize(buf), { width: 640, height: 640 });
      assert.ok(buf.length > 500);
    }
    assert.equal(sha(p), before);
  }
});

test("convergence renders from the study table", () => {
  const rows = loadStudyCsv(join(FIX, "study", "study.csv"));
  const buf = encodePng(renderConvergence(rows));
  assert.deepEqual(pngSize(buf), { width: 640, height: 640 });
});

test("rendering is deterministic", () => {
  const grid = loadFieldCsv(join(FIX, "disk", "field.csv"));
  const a = encodePng(renderField(grid));
  const b = encodePng(renderField(grid));
  assert.ok(a.equals(b));
});

test("all-zero field grid renders uniformly", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const p = join(dir, "field.csv");
  const lines = ["x,y,re,im,mask"];
  for (let iy = 0; iy < 4; iy++)
    for (let ix = 0; ix < 4; ix++) lines.push(`${ix},${iy},0,0,0`);
  writeFileSync(p, lines.join("\n") + "\n");
  const img = renderField(loadFieldCsv(p));
  const buf = encodePng(img);
  assert.ok(buf.length > 0);
  // uniform: every pixel equals the first
  const [r0, g0, b0] = [img.data[0], img.data[1], img.data[2]];
  for (let i = 0; i < img.data.length; i += 4) {
    assert.equal(img.data[i], r0);
    assert.equal(img.data[i + 1], g0);
    assert.equal(img.data[i + 2], b0);
  }
});

test("empty pole sets fall back to the constant shield ring", () => {
  const rec = JSON.parse(readFileSync(join(FIX, "disk", "diagnostics.json"), "utf8"));
  rec.data_poles_zeta = [];
  rec.map_deriv_zeros_zeta = [];
  const angles = Array.from({ length: 64 }, (_, i) => -Math.PI + (2 * Math.PI * i) / 63);
  rec.shield_polyline = { angles, radii: angles.map(() => 0.5) };
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const p = join(dir, "diagnostics.json");
  writeFileSync(p, JSON.stringify(rec));
  const buf = encodePng(renderZeta(loadDiagnostics(p)));
  assert.ok(buf.length > 500);
});

test("field color modes differ", () => {
  const grid = loadFieldCsv(join(FIX, "disk", "field.csv"));
  const re = encodePng(renderField(grid, { width: 320, height: 320, color: "re" }));
  const mag = encodePng(renderField(grid, { width: 320, height: 320, color: "abs" }));
  assert.ok(!re.equals(mag));
});
