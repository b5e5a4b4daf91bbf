/**
 * Plot renderers. Pure consumers of the loaded records: no numerical
 * recomputation beyond coordinate transforms and color mapping.
 *
 * Marker conventions on placement plots follow the solver's diagnostics:
 * shielding curve as a blue line, boundary-data poles as blue dots,
 * map-derivative zeros as red circles, support points as black dots and
 * sources / radial projections as red dots.
 */
import { Raster } from "./png";
import { Complex, Diagnostics, FieldGrid, StudyRow } from "./schema";

const BLUE: [number, number, number] = [40, 80, 200];
const RED: [number, number, number] = [200, 40, 40];
const BLACK: [number, number, number] = [20, 20, 20];
const GRAY: [number, number, number] = [180, 180, 185];
const INTERIOR: [number, number, number] = [90, 90, 95];

/** diverging blue-white-red map for s in [-1, 1] */
function diverging(s: number): [number, number, number] {
  const t = Math.max(-1, Math.min(1, s));
  if (t < 0) {
    const u = 1 + t;
    return [Math.round(40 + 215 * u), Math.round(80 + 175 * u), 255];
  }
  const u = 1 - t;
  return [255, Math.round(80 + 175 * u), Math.round(40 + 215 * u)];
}

/** sequential map for s in [0, 1] (dark blue -> yellow) */
function sequential(s: number): [number, number, number] {
  const t = Math.max(0, Math.min(1, s));
  return [
    Math.round(255 * Math.min(1, 1.6 * t)),
    Math.round(255 * t ** 0.8),
    Math.round(90 + 110 * (1 - t) - 90 * t),
  ];
}

export interface RenderOptions {
  width: number;
  height: number;
  color: "re" | "abs";
}

export const DEFAULTS: RenderOptions = { width: 640, height: 640, color: "re" };

export function renderField(grid: FieldGrid, opts: RenderOptions = DEFAULTS): Raster {
  const img = new Raster(opts.width, opts.height);
  const { xs, ys, cells } = grid;
  const nx = xs.length;
  const ny = ys.length;
  const index = new Map<string, number>();
  xs.forEach((v, i) => index.set(`x${v}`, i));
  ys.forEach((v, i) => index.set(`y${v}`, i));
  // color scale from unmasked values
  let scale = 0;
  for (const c of cells)
    if (!c.mask) scale = Math.max(scale, opts.color === "re" ? Math.abs(c.re) : Math.hypot(c.re, c.im));
  if (scale === 0) scale = 1;
  for (const c of cells) {
    const ix = index.get(`x${c.x}`)!;
    const iy = index.get(`y${c.y}`)!;
    const x0 = Math.floor((ix * opts.width) / nx);
    const x1 = Math.floor(((ix + 1) * opts.width) / nx) - 1;
    // image rows run top-down; grid rows bottom-up
    const y0 = Math.floor(((ny - 1 - iy) * opts.height) / ny);
    const y1 = Math.floor(((ny - iy) * opts.height) / ny) - 1;
    const rgb = c.mask
      ? INTERIOR
      : opts.color === "re"
        ? diverging(c.re / scale)
        : sequential(Math.hypot(c.re, c.im) / scale);
    img.fillRect(x0, y0, x1, y1, rgb);
  }
  return img;
}

interface Frame {
  toPx: (p: Complex) => [number, number];
}

function frameFor(points: Complex[], width: number, height: number, pad = 0.08): Frame {
  let xmin = Infinity,
    xmax = -Infinity,
    ymin = Infinity,
    ymax = -Infinity;
  for (const [x, y] of points) {
    xmin = Math.min(xmin, x);
    xmax = Math.max(xmax, x);
    ymin = Math.min(ymin, y);
    ymax = Math.max(ymax, y);
  }
  if (!Number.isFinite(xmin)) {
    xmin = -1;
    xmax = 1;
    ymin = -1;
    ymax = 1;
  }
  const w = Math.max(xmax - xmin, 1e-9);
  const h = Math.max(ymax - ymin, 1e-9);
  const span = Math.max(w, h) * (1 + 2 * pad);
  const cx = (xmin + xmax) / 2;
  const cy = (ymin + ymax) / 2;
  return {
    toPx: ([x, y]) => [
      Math.round(((x - cx) / span + 0.5) * (width - 1)),
      Math.round((0.5 - (y - cy) / span) * (height - 1)),
    ],
  };
}

function polyline(img: Raster, frame: Frame, pts: Complex[], rgb: [number, number, number]): void {
  for (let i = 1; i < pts.length; i++) {
    const [x0, y0] = frame.toPx(pts[i - 1]);
    const [x1, y1] = frame.toPx(pts[i]);
    img.line(x0, y0, x1, y1, rgb);
  }
}

/** point on the stored curve polyline at parameter t in [-1, 1] */
function curveAt(poly: Complex[], t: number): Complex {
  const n = poly.length;
  let u = (t + 1) / 2;
  u -= Math.floor(u);
  const s = u * n;
  const i = Math.floor(s) % n;
  const frac = s - Math.floor(s);
  const a = poly[i];
  const b = poly[(i + 1) % n];
  return [a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1])];
}

export function renderPlacement(diag: Diagnostics, opts: RenderOptions = DEFAULTS): Raster {
  const img = new Raster(opts.width, opts.height);
  const frame = frameFor(diag.curvePolyline.concat(diag.sources), opts.width, opts.height);
  const closed = diag.curvePolyline.concat([diag.curvePolyline[0]]);
  polyline(img, frame, closed, BLACK);
  for (const theta of diag.supportAngles) {
    const [x, y] = frame.toPx(curveAt(diag.curvePolyline, theta / Math.PI));
    img.disk(x, y, 2, BLACK);
  }
  for (const s of diag.sources) {
    const [x, y] = frame.toPx(s);
    img.disk(x, y, 2.5, RED);
  }
  return img;
}

export function renderZeta(diag: Diagnostics, opts: RenderOptions = DEFAULTS): Raster {
  const img = new Raster(opts.width, opts.height);
  const box: Complex[] = [
    [-1.1, -1.1],
    [1.1, 1.1],
  ];
  const frame = frameFor(box, opts.width, opts.height);
  // unit circle
  const circle: Complex[] = [];
  for (let i = 0; i <= 256; i++) {
    const a = -Math.PI + (2 * Math.PI * i) / 256;
    circle.push([Math.cos(a), Math.sin(a)]);
  }
  polyline(img, frame, circle, GRAY);
  // shielding curve: blue line
  const gamma: Complex[] = diag.shieldPolyline.angles.map((a, i) => [
    diag.shieldPolyline.radii[i] * Math.cos(a),
    diag.shieldPolyline.radii[i] * Math.sin(a),
  ]);
  if (gamma.length > 1) polyline(img, frame, gamma, BLUE);
  // data poles: blue dots
  for (const p of diag.dataPolesZeta) {
    const [x, y] = frame.toPx(p);
    img.disk(x, y, 2, BLUE);
  }
  // map-derivative zeros: red circles
  for (const z of diag.mapDerivZerosZeta) {
    const [x, y] = frame.toPx(z);
    img.circle(x, y, 4, RED);
  }
  // support angles on the circle: black dots; radial projections: red dots
  for (let i = 0; i < diag.supportAngles.length; i++) {
    const th = diag.supportAngles[i];
    const [x, y] = frame.toPx([Math.cos(th), Math.sin(th)]);
    img.disk(x, y, 1.5, BLACK);
  }
  return img;
}

export function renderConvergence(rows: StudyRow[], opts: RenderOptions = DEFAULTS): Raster {
  const img = new Raster(opts.width, opts.height);
  const m = { l: 60, r: 20, t: 20, b: 40 };
  const plotW = opts.width - m.l - m.r;
  const plotH = opts.height - m.t - m.b;
  const Js = rows.map((r) => r.J);
  const logs = rows.map((r) => Math.log10(Math.max(r.residual, 1e-300)));
  const jmin = Math.min(...Js);
  const jmax = Math.max(...Js);
  const lmin = Math.floor(Math.min(...logs)) - 1;
  const lmax = Math.ceil(Math.max(...logs)) + 1;
  const px = (J: number) => m.l + ((J - jmin) / Math.max(jmax - jmin, 1)) * plotW;
  const py = (lg: number) => m.t + ((lmax - lg) / Math.max(lmax - lmin, 1)) * plotH;
  // axes
  img.line(m.l, m.t, m.l, m.t + plotH, BLACK);
  img.line(m.l, m.t + plotH, m.l + plotW, m.t + plotH, BLACK);
  // decade gridlines
  for (let lg = lmin; lg <= lmax; lg++) {
    const y = Math.round(py(lg));
    for (let x = m.l; x <= m.l + plotW; x += 4) img.set(x, y, GRAY);
  }
  // polyline with markers
  for (let i = 1; i < rows.length; i++) {
    img.line(px(Js[i - 1]), py(logs[i - 1]), px(Js[i]), py(logs[i]), BLUE);
  }
  for (let i = 0; i < rows.length; i++) img.disk(px(Js[i]), py(logs[i]), 3, RED);
  return img;
}
