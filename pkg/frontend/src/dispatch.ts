import type { BlockKind } from "./types.js";

/**
 * Static mirror of the server's drag-to-link dispatch table, so invalid
 * drops are rejected optimistically before any API call. The server
 * remains the authority; a mismatch surfaces as a bad_request error.
 */
export const LINK_DISPATCH: ReadonlyMap<string, string> = new Map([
  ["text->image_rec", "explore_images_with_text"],
  ["image->image_rec", "explore_images_with_image"],
  ["text->caption_rec", "explore_captions_with_text"],
  ["image->caption_rec", "explore_captions_with_image"],
  ["text->image", "fuse_text_image"],
  ["image->image", "fuse_image_image"],
  ["text->text", "fuse_text_caption"],
  ["image->text", "fuse_image_caption"],
]);

export function canLink(source: BlockKind, target: BlockKind): boolean {
  return LINK_DISPATCH.has(`${source}->${target}`);
}

/** Valid drop targets for a given source kind, for drop-zone highlighting. */
export function validTargets(source: BlockKind): BlockKind[] {
  const out: BlockKind[] = [];
  for (const key of LINK_DISPATCH.keys()) {
    const [src, dst] = key.split("->") as [BlockKind, BlockKind];
    if (src === source) out.push(dst);
  }
  return out;
}
