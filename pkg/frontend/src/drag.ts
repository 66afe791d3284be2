import type { StudioClient } from "./api.js";
import type { BlockDoc, BlockKind, EdgeDoc } from "./types.js";
import { canLink } from "./dispatch.js";

export interface DragResult {
  edge: EdgeDoc;
  target: BlockDoc;
}

/**
 * A drag-to-link gesture. A completed gesture maps to exactly one
 * `/canvas/{id}/link` call; an invalid or abandoned drop is discarded
 * with no network traffic.
 */
export class DragGesture {
  x = 0;
  y = 0;
  private settled = false;

  constructor(
    readonly sourceId: string,
    readonly sourceKind: BlockKind,
  ) {}

  move(x: number, y: number): void {
    if (this.settled) throw new Error("gesture already settled");
    this.x = x;
    this.y = y;
  }

  cancel(): void {
    this.settled = true;
  }

  async drop(
    targetId: string,
    targetKind: BlockKind,
    client: StudioClient,
    canvasId: string,
  ): Promise<DragResult | null> {
    if (this.settled) throw new Error("gesture already settled");
    this.settled = true;
    if (targetId === this.sourceId) return null;
    if (!canLink(this.sourceKind, targetKind)) return null;
    return client.link(canvasId, this.sourceId, targetId);
  }
}
