/**
 * Mask painting model and a dependency-free PNG encoder.
 *
 * The server contract is a PNG whose alpha channel marks the edit
 * region (alpha > 127 = masked). The encoder emits RGBA with stored
 * (uncompressed) deflate blocks, which every PNG reader accepts.
 */

export class MaskPainter {
  private readonly alpha: Uint8Array;

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    if (width <= 0 || height <= 0) throw new Error("mask dimensions must be positive");
    this.alpha = new Uint8Array(width * height);
  }

  paintRect(x0: number, y0: number, x1: number, y1: number): void {
    const left = Math.max(0, Math.min(x0, x1));
    const top = Math.max(0, Math.min(y0, y1));
    const right = Math.min(this.width, Math.max(x0, x1));
    const bottom = Math.min(this.height, Math.max(y0, y1));
    for (let y = top; y < bottom; y++) {
      this.alpha.fill(255, y * this.width + left, y * this.width + right);
    }
  }

  /** Circular brush dab for freehand strokes. */
  paintDab(cx: number, cy: number, radius: number): void {
    const r2 = radius * radius;
    for (let y = Math.max(0, cy - radius); y <= Math.min(this.height - 1, cy + radius); y++) {
      for (let x = Math.max(0, cx - radius); x <= Math.min(this.width - 1, cx + radius); x++) {
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r2) {
          this.alpha[y * this.width + x] = 255;
        }
      }
    }
  }

  erase(x0: number, y0: number, x1: number, y1: number): void {
    for (let y = Math.max(0, y0); y < Math.min(this.height, y1); y++) {
      this.alpha.fill(0, y * this.width + Math.max(0, x0), y * this.width + Math.min(this.width, x1));
    }
  }

  isPainted(x: number, y: number): boolean {
    return (this.alpha[y * this.width + x] ?? 0) > 127;
  }

  isEmpty(): boolean {
    return !this.alpha.some((a) => a > 127);
  }

  /** Encode as an RGBA PNG; throws on an empty mask (server rejects it anyway). */
  toPng(): Uint8Array {
    if (this.isEmpty()) throw new Error("empty mask");
    const rgba = new Uint8Array(this.width * this.height * 4);
    for (let i = 0; i < this.alpha.length; i++) {
      rgba[i * 4] = 255;
      rgba[i * 4 + 1] = 255;
      rgba[i * 4 + 2] = 255;
      rgba[i * 4 + 3] = this.alpha[i] as number;
    }
    return encodePngRgba(rgba, this.width, this.height);
  }

  toPngBase64(): string {
    const bytes = this.toPng();
    let binary = "";
    for (const b of bytes) binary += String.fromCharCode(b);
    // btoa in browsers; Buffer under node.
    return typeof btoa === "function"
      ? btoa(binary)
      : Buffer.from(bytes).toString("base64");
  }
}

// -- PNG encoding -----------------------------------------------------------

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(data: Uint8Array): number {
  let crc = 0xffffffff;
  for (const byte of data) crc = (CRC_TABLE[(crc ^ byte) & 0xff] as number) ^ (crc >>> 8);
  return (crc ^ 0xffffffff) >>> 0;
}

function adler32(data: Uint8Array): number {
  let a = 1;
  let b = 0;
  for (const byte of data) {
    a = (a + byte) % 65521;
    b = (b + a) % 65521;
  }
  return ((b << 16) | a) >>> 0;
}

function u32(value: number): Uint8Array {
  return new Uint8Array([(value >>> 24) & 0xff, (value >>> 16) & 0xff, (value >>> 8) & 0xff, value & 0xff]);
}

function chunk(type: string, body: Uint8Array): Uint8Array {
  const typed = new Uint8Array(4 + body.length);
  for (let i = 0; i < 4; i++) typed[i] = type.charCodeAt(i);
  typed.set(body, 4);
  return concat([u32(body.length), typed, u32(crc32(typed))]);
}

function concat(parts: Uint8Array[]): Uint8Array {
  const out = new Uint8Array(parts.reduce((n, p) => n + p.length, 0));
  let offset = 0;
  for (const p of parts) {
    out.set(p, offset);
    offset += p.length;
  }
  return out;
}

/** zlib stream with stored (BTYPE=00) deflate blocks only. */
function zlibStored(raw: Uint8Array): Uint8Array {
  const parts: Uint8Array[] = [new Uint8Array([0x78, 0x01])];
  const max = 0xffff;
  for (let offset = 0; offset < raw.length; offset += max) {
    const slice = raw.subarray(offset, Math.min(raw.length, offset + max));
    const final = offset + max >= raw.length ? 1 : 0;
    const len = slice.length;
    parts.push(
      new Uint8Array([final, len & 0xff, len >>> 8, ~len & 0xff, (~len >>> 8) & 0xff]),
      slice,
    );
  }
  parts.push(u32(adler32(raw)));
  return concat(parts);
}

export function encodePngRgba(rgba: Uint8Array, width: number, height: number): Uint8Array {
  if (rgba.length !== width * height * 4) throw new Error("rgba length mismatch");
  const ihdr = new Uint8Array(13);
  ihdr.set(u32(width), 0);
  ihdr.set(u32(height), 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // color type RGBA
  // compression, filter, interlace all 0

  const stride = width * 4;
  const raw = new Uint8Array(height * (stride + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (stride + 1)] = 0; // filter: none
    raw.set(rgba.subarray(y * stride, (y + 1) * stride), y * (stride + 1) + 1);
  }

  return concat([
    new Uint8Array([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", zlibStored(raw)),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

// -- minimal decoder (stored-block streams; used for self-verification) -----

export interface DecodedPng {
  width: number;
  height: number;
  rgba: Uint8Array;
}

export function decodePngRgba(png: Uint8Array): DecodedPng {
  const view = new DataView(png.buffer, png.byteOffset, png.byteLength);
  let offset = 8; // signature
  let width = 0;
  let height = 0;
  const idat: Uint8Array[] = [];
  while (offset < png.length) {
    const length = view.getUint32(offset);
    const type = String.fromCharCode(...png.subarray(offset + 4, offset + 8));
    const body = png.subarray(offset + 8, offset + 8 + length);
    if (type === "IHDR") {
      width = view.getUint32(offset + 8);
      height = view.getUint32(offset + 12);
      if (body[8] !== 8 || body[9] !== 6) throw new Error("only 8-bit RGBA supported");
    } else if (type === "IDAT") {
      idat.push(body);
    }
    offset += 12 + length;
  }
  const stream = concat(idat);
  const raw = inflateStored(stream.subarray(2, stream.length - 4));
  const stride = width * 4;
  const rgba = new Uint8Array(width * height * 4);
  for (let y = 0; y < height; y++) {
    if (raw[y * (stride + 1)] !== 0) throw new Error("only filter 0 supported");
    rgba.set(raw.subarray(y * (stride + 1) + 1, (y + 1) * (stride + 1)), y * stride);
  }
  return { width, height, rgba };
}

function inflateStored(data: Uint8Array): Uint8Array {
  const parts: Uint8Array[] = [];
  let offset = 0;
  for (;;) {
    const header = data[offset] as number;
    if ((header & 0x06) !== 0) throw new Error("only stored deflate blocks supported");
    const len = (data[offset + 1] as number) | ((data[offset + 2] as number) << 8);
    parts.push(data.subarray(offset + 5, offset + 5 + len));
    offset += 5 + len;
    if (header & 1) break;
  }
  return concat(parts);
}
