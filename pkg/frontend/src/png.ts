/**
 * Minimal RGBA raster with a dependency-free PNG encoder (zlib comes with
 * node). Enough drawing primitives for heatmaps, polylines and markers.
 */
import { deflateSync } from "node:zlib";

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array; // RGBA rows, top to bottom

  constructor(width: number, height: number, fill: [number, number, number] = [255, 255, 255]) {
    if (width < 2 || height < 2) throw new Error("raster must be at least 2x2");
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 4);
    for (let i = 0; i < width * height; i++) {
      this.data[4 * i] = fill[0];
      this.data[4 * i + 1] = fill[1];
      this.data[4 * i + 2] = fill[2];
      this.data[4 * i + 3] = 255;
    }
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = 4 * (y * this.width + x);
    this.data[i] = rgb[0];
    this.data[i + 1] = rgb[1];
    this.data[i + 2] = rgb[2];
    this.data[i + 3] = 255;
  }

  fillRect(x0: number, y0: number, x1: number, y1: number, rgb: [number, number, number]): void {
    for (let y = Math.max(0, y0); y <= Math.min(this.height - 1, y1); y++)
      for (let x = Math.max(0, x0); x <= Math.min(this.width - 1, x1); x++) this.set(x, y, rgb);
  }

  line(x0: number, y0: number, x1: number, y1: number, rgb: [number, number, number]): void {
    // Bresenham
    let [xa, ya, xb, yb] = [Math.round(x0), Math.round(y0), Math.round(x1), Math.round(y1)];
    const dx = Math.abs(xb - xa);
    const dy = -Math.abs(yb - ya);
    const sx = xa < xb ? 1 : -1;
    const sy = ya < yb ? 1 : -1;
    let err = dx + dy;
    for (;;) {
      this.set(xa, ya, rgb);
      if (xa === xb && ya === yb) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        xa += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ya += sy;
      }
    }
  }

  disk(cx: number, cy: number, r: number, rgb: [number, number, number]): void {
    for (let y = Math.ceil(cy - r); y <= Math.floor(cy + r); y++)
      for (let x = Math.ceil(cx - r); x <= Math.floor(cx + r); x++)
        if ((x - cx) ** 2 + (y - cy) ** 2 <= r * r) this.set(x, y, rgb);
  }

  circle(cx: number, cy: number, r: number, rgb: [number, number, number]): void {
    const steps = Math.max(16, Math.ceil(2 * Math.PI * r));
    for (let i = 0; i < steps; i++) {
      const a = (2 * Math.PI * i) / steps;
      this.set(Math.round(cx + r * Math.cos(a)), Math.round(cy + r * Math.sin(a)), rgb);
    }
  }
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (let i = 0; i < buf.length; i++) c = CRC_TABLE[(c ^ buf[i]) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "ascii");
  const body = Buffer.concat([Buffer.from(type, "ascii"), Buffer.from(payload)]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(payload), tail]);
}

export function encodePng(img: Raster): Buffer {
  const sig = Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(img.width, 0);
  ihdr.writeUInt32BE(img.height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  // scanlines with filter byte 0
  const raw = Buffer.alloc(img.height * (1 + 4 * img.width));
  for (let y = 0; y < img.height; y++) {
    const off = y * (1 + 4 * img.width);
    raw[off] = 0;
    raw.set(img.data.subarray(4 * y * img.width, 4 * (y + 1) * img.width), off + 1);
  }
  const idat = deflateSync(raw, { level: 6 });
  return Buffer.concat([
    sig,
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

/** Width/height of an encoded PNG (for tests). */
export function pngSize(buf: Buffer): { width: number; height: number } {
  if (buf.length < 24 || buf[0] !== 0x89 || buf.toString("ascii", 1, 4) !== "PNG")
    throw new Error("not a PNG file");
  return { width: buf.readUInt32BE(16), height: buf.readUInt32BE(20) };
}
