import assert from "node:assert/strict";
import { execFileSync, spawnSync } from "node:child_process";
import { existsSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

const FIX = join(__dirname, "..", "..", "test", "fixtures");
const PLOT = join(__dirname, "..", "src", "plot.js");

function plot(args: string[]) {
  return spawnSync(process.execPath, [PLOT, ...args], { encoding: "utf8" });
}

test("renders all four kinds end to end", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  for (const [kind, inDir] of [
    ["field", join(FIX, "disk")],
    ["placement", join(FIX, "trefoil")],
    ["zeta", join(FIX, "trefoil")],
    ["convergence", join(FIX, "study")],
  ] as const) {
    const out = join(dir, `${kind}.png`);
    const r = plot(["--kind", kind, "--in", inDir, "--out", out]);
    assert.equal(r.status, 0, r.stderr);
    assert.ok(existsSync(out));
  }
});

test("schema mismatch exits nonzero and names the field", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  writeFileSync(join(dir, "field.csv"), "x,y,re,im\n1,2,3,4\n");
  const r = plot(["--kind", "field", "--in", dir, "--out", join(dir, "o.png")]);
  assert.equal(r.status, 2);
  assert.match(r.stderr, /header/);
});

test("usage errors exit 64", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  assert.equal(plot(["--kind", "field"]).status, 64);
  assert.equal(
    plot(["--kind", "sculpture", "--in", dir, "--out", join(dir, "o.png")]).status,
    64,
  );
  assert.equal(
    plot(["--kind", "field", "--in", dir, "--out", join(dir, "o.png"), "--width", "1"]).status,
    64,
  );
});

test("custom dimensions are honored", () => {
  const dir = mkdtempSync(join(tmpdir(), "plots-"));
  const out = join(dir, "small.png");
  const r = plot([
    "--kind", "convergence", "--in", join(FIX, "study"), "--out", out,
    "--width", "200", "--height", "150",
  ]);
  assert.equal(r.status, 0, r.stderr);
  const buf = require("node:fs").readFileSync(out);
  assert.equal(buf.readUInt32BE(16), 200);
  assert.equal(buf.readUInt32BE(20), 150);
});
