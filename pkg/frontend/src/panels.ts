import type { StudioClient } from "./api.js";
import type { BlockDoc, BlockKind } from "./types.js";

export interface PanelContext {
  client: StudioClient;
  canvasId: string;
  block: BlockDoc;
  /** "More Images" requires choosing a related keyword first. */
  chooseKeyword?: (keywords: string[]) => Promise<string | undefined>;
  /** "Mask Edit" opens the painter; resolves to base64 PNG + prompt or null on cancel. */
  openMaskEditor?: () => Promise<{ maskPngBase64: string; prompt: string } | null>;
}

export interface PanelOption {
  label: string;
  run(ctx: PanelContext): Promise<unknown>;
}

const TEXT_OPTIONS: PanelOption[] = [
  {
    label: "Generate Images",
    run: (ctx) => ctx.client.generate(ctx.canvasId, ctx.block.id, "images"),
  },
  {
    label: "Generate Captions",
    run: (ctx) => ctx.client.generate(ctx.canvasId, ctx.block.id, "captions"),
  },
  {
    label: "Generate Post",
    run: (ctx) => ctx.client.generate(ctx.canvasId, ctx.block.id, "post"),
  },
];

const IMAGE_OPTIONS: PanelOption[] = [
  {
    label: "Regenerate",
    run: (ctx) => ctx.client.regenerate(ctx.block.payload as string),
  },
  {
    label: "More Images",
    async run(ctx) {
      const imageId = ctx.block.payload as string;
      const { keywords } = await ctx.client.keywordPanel(imageId);
      const chosen = ctx.chooseKeyword
        ? await ctx.chooseKeyword(keywords)
        : keywords[0];
      if (chosen === undefined) return null; // dismissed
      return ctx.client.generate(ctx.canvasId, ctx.block.id, "images", {
        chosen_keyword: chosen,
      });
    },
  },
  {
    label: "Mask Edit",
    async run(ctx) {
      if (!ctx.openMaskEditor) throw new Error("mask editor not available");
      const spec = await ctx.openMaskEditor();
      if (spec === null) return null; // cancelled: no API call
      if (!spec.prompt.trim()) throw new Error("prompt must be non-empty");
      return ctx.client.maskEdit(
        ctx.block.payload as string,
        spec.maskPngBase64,
        spec.prompt,
      );
    },
  },
  {
    label: "Generate Post",
    run: (ctx) => ctx.client.generate(ctx.canvasId, ctx.block.id, "post"),
  },
];

/**
 * The "..." action menu for a block. Text blocks expose exactly three
 * options, image blocks exactly four; other kinds have no panel.
 */
export function optionPanel(kind: BlockKind): PanelOption[] {
  if (kind === "text") return TEXT_OPTIONS;
  if (kind === "image") return IMAGE_OPTIONS;
  return [];
}
