export { StudioClient, ApiError, StaleRevisionError } from "./api.js";
export type { FetchLike } from "./api.js";
export { LINK_DISPATCH, canLink, validTargets } from "./dispatch.js";
export { DragGesture } from "./drag.js";
export type { DragResult } from "./drag.js";
export {
  MaskPainter,
  encodePngRgba,
  decodePngRgba,
} from "./mask.js";
export type { DecodedPng } from "./mask.js";
export { optionPanel } from "./panels.js";
export type { PanelContext, PanelOption } from "./panels.js";
export {
  BLOCK_H,
  BLOCK_W,
  EDGE_COLORS,
  buildScene,
  fitToView,
  renderCaption,
  toScreen,
} from "./scene.js";
export type { CameraTransform, CaptionSegment, Scene, ViewBlock, ViewEdge, Viewport } from "./scene.js";
export type * from "./types.js";
