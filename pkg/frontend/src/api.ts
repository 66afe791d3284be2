import type {
  BlockDoc,
  BlockKind,
  BlockPayload,
  CanvasDocument,
  CaptionRecPayload,
  EdgeDoc,
  ErrorEnvelope,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
    readonly provider?: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Raised on PUT when the local revision is stale; callers should reload. */
export class StaleRevisionError extends ApiError {
  constructor(message: string) {
    super("conflict", message, 409);
    this.name = "StaleRevisionError";
  }
}

async function raiseEnvelope(res: Response): Promise<never> {
  let envelope: ErrorEnvelope | null = null;
  try {
    envelope = (await res.json()) as ErrorEnvelope;
  } catch {
    /* non-JSON body */
  }
  const err = envelope?.error;
  if (err?.code === "conflict") throw new StaleRevisionError(err.message);
  throw new ApiError(
    err?.code ?? "bad_request",
    err?.message ?? `HTTP ${res.status}`,
    res.status,
    err?.provider,
  );
}

/**
 * Thin typed client over the studio HTTP API. The fetch implementation
 * is injected so tests and non-browser hosts can supply their own.
 */
export class StudioClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) await raiseEnvelope(res);
    return (await res.json()) as T;
  }

  private async binary(path: string): Promise<ArrayBuffer> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, { method: "GET" });
    if (!res.ok) await raiseEnvelope(res);
    return res.arrayBuffer();
  }

  // -- canvas --------------------------------------------------------------

  createCanvas(): Promise<CanvasDocument> {
    return this.json("POST", "/canvas");
  }

  getCanvas(id: string): Promise<CanvasDocument> {
    return this.json("GET", `/canvas/${id}`);
  }

  async putCanvas(id: string, doc: CanvasDocument): Promise<CanvasDocument> {
    const res = await this.fetchImpl(`${this.baseUrl}/canvas/${id}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    });
    if (!res.ok) await raiseEnvelope(res);
    return (await res.json()) as CanvasDocument;
  }

  createBlock(
    canvasId: string,
    kind: BlockKind,
    payload: BlockPayload,
    near?: string,
  ): Promise<BlockDoc> {
    return this.json("POST", `/canvas/${canvasId}/blocks`, { kind, payload, near });
  }

  link(canvasId: string, from: string, to: string): Promise<{ edge: EdgeDoc; target: BlockDoc }> {
    return this.json("POST", `/canvas/${canvasId}/link`, { from, to });
  }

  generate(
    canvasId: string,
    source: string,
    what: "images" | "captions" | "post",
    options?: { chosen_keyword?: string; image?: string; caption?: string },
  ): Promise<BlockDoc> {
    return this.json("POST", `/canvas/${canvasId}/generate`, { source, what, ...options });
  }

  layout(canvasId: string): Promise<CanvasDocument> {
    return this.json("POST", `/canvas/${canvasId}/layout`);
  }

  // -- search / recommendation ---------------------------------------------

  searchImages(topic: string, n = 4, offset = 0): Promise<{ ids: string[]; out_of_vocabulary: boolean }> {
    return this.json("POST", "/search/images", { topic, n, offset });
  }

  keywordPanel(seed: string, k = 8): Promise<{ keywords: string[] }> {
    return this.json("POST", "/recommend/keywords", { seed, k });
  }

  recommendCaptions(topic: string): Promise<CaptionRecPayload> {
    return this.json("POST", "/recommend/captions", { topic });
  }

  // -- images --------------------------------------------------------------

  imageUrl(id: string): string {
    return `${this.baseUrl}/images/${id}`;
  }

  imageBytes(id: string): Promise<ArrayBuffer> {
    return this.binary(`/images/${id}`);
  }

  regenerate(id: string): Promise<{ id: string }> {
    return this.json("POST", `/images/${id}/regenerate`);
  }

  maskEdit(id: string, maskPngBase64: string, prompt: string): Promise<{ id: string }> {
    return this.json("POST", `/images/${id}/mask-edit`, { mask: maskPngBase64, prompt });
  }

  exportPost(blockId: string, canvasId?: string): Promise<ArrayBuffer> {
    const query = canvasId ? `?canvas=${canvasId}` : "";
    return this.binary(`/post/${blockId}/export${query}`);
  }
}
