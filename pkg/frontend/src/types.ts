/** Server document shapes, mirrored from the backend's canonical JSON. */

export type BlockKind =
  | "text"
  | "image"
  | "post"
  | "search_results"
  | "image_rec"
  | "caption_rec";

export type EdgeKind = "exploration" | "customization";

export interface PostPayload {
  image: string | null;
  caption: string | null;
  template: string;
}

export interface SearchResultsPayload {
  ids: string[];
  oov: boolean;
}

export interface ImageRecPayload {
  seed: string;
  semantic: string[];
  color: string[];
  object: string[];
  chosen_keyword: string | null;
}

export interface CaptionRecPayload {
  product: string[];
  activity: string[];
  advertisement: string[];
}

export type BlockPayload =
  | string
  | PostPayload
  | SearchResultsPayload
  | ImageRecPayload
  | CaptionRecPayload;

export interface BlockDoc {
  id: string;
  kind: BlockKind;
  payload: BlockPayload;
  x: number;
  y: number;
  created_at?: number;
  [extra: string]: unknown;
}

export interface EdgeDoc {
  from: string;
  to: string;
  kind: EdgeKind;
}

export interface CanvasBody {
  id: string;
  revision: number;
  blocks: BlockDoc[];
  edges: EdgeDoc[];
  tombstones: string[];
  [extra: string]: unknown;
}

export interface CanvasDocument {
  format_version: number;
  canvas: CanvasBody;
}

export interface ErrorEnvelope {
  error: {
    code: "bad_request" | "not_found" | "conflict" | "parse_failure" | "provider_failure";
    message: string;
    provider?: string;
  };
}
