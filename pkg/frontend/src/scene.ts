import type { BlockKind, BlockPayload, CanvasDocument, EdgeKind } from "./types.js";

export const BLOCK_W = 200;
export const BLOCK_H = 120;

/** Edge provenance colors: blue = generate, orange = drag-to-link. */
export const EDGE_COLORS: Record<EdgeKind, string> = {
  exploration: "#2563eb",
  customization: "#f97316",
};

export interface ViewBlock {
  id: string;
  kind: BlockKind;
  payload: BlockPayload;
  x: number;
  y: number;
  w: number;
  h: number;
  // View-only state; never written back to the server document.
  selected: boolean;
  loading: boolean;
  error: string | null;
}

export interface ViewEdge {
  from: string;
  to: string;
  kind: EdgeKind;
  color: string;
}

export interface Scene {
  canvasId: string;
  revision: number;
  blocks: ViewBlock[];
  edges: ViewEdge[];
}

/**
 * Project a server document into the render model. The scene is derived
 * purely from the document, so a page reload that refetches the canvas
 * reconstructs the identical scene.
 */
export function buildScene(doc: CanvasDocument): Scene {
  const body = doc.canvas;
  return {
    canvasId: body.id,
    revision: body.revision,
    blocks: body.blocks.map((b) => ({
      id: b.id,
      kind: b.kind,
      payload: b.payload,
      x: b.x,
      y: b.y,
      w: BLOCK_W,
      h: BLOCK_H,
      selected: false,
      loading: false,
      error: null,
    })),
    edges: body.edges.map((e) => ({
      from: e.from,
      to: e.to,
      kind: e.kind,
      color: EDGE_COLORS[e.kind],
    })),
  };
}

export interface Viewport {
  width: number;
  height: number;
}

export interface CameraTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

/** Pan/zoom transform that brings every block into the viewport. */
export function fitToView(scene: Scene, viewport: Viewport, margin = 40): CameraTransform {
  if (scene.blocks.length === 0) return { scale: 1, offsetX: 0, offsetY: 0 };
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const b of scene.blocks) {
    minX = Math.min(minX, b.x);
    minY = Math.min(minY, b.y);
    maxX = Math.max(maxX, b.x + b.w);
    maxY = Math.max(maxY, b.y + b.h);
  }
  const scale = Math.min(
    1,
    (viewport.width - 2 * margin) / (maxX - minX),
    (viewport.height - 2 * margin) / (maxY - minY),
  );
  return { scale, offsetX: margin - minX * scale, offsetY: margin - minY * scale };
}

export function toScreen(t: CameraTransform, x: number, y: number): [number, number] {
  return [x * t.scale + t.offsetX, y * t.scale + t.offsetY];
}

export interface CaptionSegment {
  text: string;
  bold: boolean;
}

/**
 * Split a caption on asterisk keyword markers: `*word*` renders as a
 * bold span with the asterisks hidden. The raw string in the document
 * is never modified.
 */
export function renderCaption(caption: string): CaptionSegment[] {
  const segments: CaptionSegment[] = [];
  const re = /\*([^*]+)\*/g;
  let last = 0;
  for (let m = re.exec(caption); m !== null; m = re.exec(caption)) {
    if (m.index > last) segments.push({ text: caption.slice(last, m.index), bold: false });
    segments.push({ text: m[1] as string, bold: true });
    last = m.index + m[0].length;
  }
  if (last < caption.length) segments.push({ text: caption.slice(last), bold: false });
  return segments;
}
