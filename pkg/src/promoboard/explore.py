"""Context-aware exploration: re-steering an existing recommendation
block from a dragged text prompt or context image.

Keyword extraction runs the caption/detection/classification providers
against three fixed label vocabularies (semantic, color-name, object
tag) and rebuilds each recommendation list from the single top keyword
per dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import prompts
from .colors import RgbColor, delta_e, dominant_color
from .corpus import UnknownImageError, decode_raster, read_image_bytes
from .recommend import TOP_K, ImageRecommendation, _chat_caption_set, _delta_to_seed
from .recommend import seed_concepts

# CSS basic color names with canonical RGB values: the fixed color-word
# vocabulary L_c.
COLOR_NAMES = {
    "aqua": (0, 255, 255),
    "black": (0, 0, 0),
    "blue": (0, 0, 255),
    "fuchsia": (255, 0, 255),
    "gray": (128, 128, 128),
    "green": (0, 128, 0),
    "lime": (0, 255, 0),
    "maroon": (128, 0, 0),
    "navy": (0, 0, 128),
    "olive": (128, 128, 0),
    "purple": (128, 0, 128),
    "red": (255, 0, 0),
    "silver": (192, 192, 192),
    "teal": (0, 128, 128),
    "white": (255, 255, 255),
    "yellow": (255, 255, 0),
}


class ExplorationError(ValueError):
    def __init__(self, dimension, message):
        self.dimension = dimension
        super().__init__(f"{dimension}: {message}")


@dataclass
class KeywordLists:
    """The three classification label vocabularies."""

    semantic: list[str]
    color: list[str] = field(default_factory=lambda: sorted(COLOR_NAMES))
    object: list[str] = field(default_factory=list)

    @classmethod
    def from_corpus(cls, index, graph=None):
        semantic = index.semantic_labels()
        if graph is not None:
            in_vocab = [w for w in semantic if w in graph.nodes]
            if in_vocab:
                semantic = in_vocab
        return cls(semantic=semantic, object=index.object_labels())

    def require(self, dimension):
        labels = getattr(self, dimension)
        if not labels:
            raise ExplorationError(dimension, "empty keyword list")
        return labels


@dataclass
class ExtractedKeywords:
    semantic: str | None = None  # W_s
    color: str | None = None  # W_c
    object: str | None = None  # W_o
    seed_semantic: str | None = None  # W_b, image-context task only
    description: str | None = None  # D_i
    contextual_prompt: str | None = None  # P_t^I


def nearest_color_name(color: RgbColor) -> str:
    """Closest CSS-basic color name by CIE76 distance; ties by name."""
    return min(
        sorted(COLOR_NAMES),
        key=lambda name: (delta_e(color, RgbColor(*COLOR_NAMES[name])), name),
    )


def _caption_of(index, providers, image_id, blobs=None):
    record = index.get(image_id)
    if record.caption_cache:
        return record.caption_cache
    data = read_image_bytes(record, blobs)
    description = providers.call("caption", data)
    record.caption_cache = description
    return description


def _top_label(providers, text, labels):
    return providers.call("classify", text, labels)[0][0]


def explore_images_with_text(
    index, graph, providers, seed_id, text_context, lists=None, blobs=None
):
    """Rebuild the three image lists from the seed's description joined
    with a dragged text context. Returns (recommendation, extracted)."""
    if not text_context or not text_context.strip():
        raise ValueError("text context must be non-empty")
    lists = lists or KeywordLists.from_corpus(index, graph)
    seed = index.get(seed_id)

    description = _caption_of(index, providers, seed_id, blobs)
    contextual = prompts.contextual_image_prompt(description, text_context)
    w_s = _top_label(providers, contextual, lists.require("semantic"))
    w_c = _top_label(providers, contextual, lists.require("color"))
    w_o = _top_label(providers, contextual, lists.require("object"))
    extracted = ExtractedKeywords(
        semantic=w_s, color=w_c, object=w_o,
        description=description, contextual_prompt=contextual,
    )

    rec = ImageRecommendation(seed=seed_id, chosen_keyword=w_s)
    rec.semantic = sorted(index.by_keyword.get(w_s, set()) - {seed_id})[:TOP_K]
    target = RgbColor(*COLOR_NAMES[w_c])
    color_pool = seed_concepts(index, graph, seed) - {seed_id}
    rec.color = sorted(
        color_pool,
        key=lambda rid: (_delta_to_color(index, rid, target), rid),
    )[:TOP_K]
    rec.object = sorted(index.by_object.get(w_o, set()) - {seed_id})[:TOP_K]
    return rec, extracted


def _delta_to_color(index, rid, target):
    record = index.get(rid)
    if record.dominant is None:
        return float("inf")
    return delta_e(record.dominant, target)


def explore_captions_with_text(providers, seed_text, text_context):
    """New caption set steered by a dragged text prompt."""
    if not seed_text or not seed_text.strip():
        raise ValueError("seed text must be non-empty")
    if not text_context or not text_context.strip():
        raise ValueError("text context must be non-empty")
    prompt = prompts.CAPTION_EXPLORE_WITH_TEXT.format(
        seed_text=seed_text, text_context=text_context
    )
    return _chat_caption_set(providers, prompt)


def explore_images_with_image(
    index, graph, providers, seed_id, context_id, lists=None, blobs=None
):
    """Re-steer the image lists from a context image (brand logo etc.).

    Images carrying both the seed's own semantic keyword and the context
    keyword are ranked ahead of those carrying only the context keyword;
    color and object lists likewise rank context-keyword carriers first.
    Within a priority tier, order is color distance then id.
    """
    lists = lists or KeywordLists.from_corpus(index, graph)
    seed = index.get(seed_id)
    ctx = index.get(context_id)
    try:
        ctx_bytes = read_image_bytes(ctx, blobs)
    except UnknownImageError:
        # bytes unavailable: the stored ingest-time annotations stand in
        ctx_bytes = None

    if ctx_bytes is not None:
        detected = providers.call("detect", ctx_bytes)
        ctx_dominant = ctx.dominant or dominant_color(decode_raster(ctx_bytes))
    else:
        detected = sorted(ctx.objects)
        ctx_dominant = ctx.dominant
    w_o = detected[0] if detected else None
    w_c = nearest_color_name(ctx_dominant)
    semantic_labels = lists.require("semantic")
    w_s = _top_label(providers, _caption_of(index, providers, context_id, blobs), semantic_labels)
    w_b = _top_label(providers, _caption_of(index, providers, seed_id, blobs), semantic_labels)
    extracted = ExtractedKeywords(
        semantic=w_s, color=w_c, object=w_o, seed_semantic=w_b,
        description=index.get(context_id).caption_cache,
    )

    def has(rid, kw):
        return kw in index.get(rid).keywords

    def tier_sort(candidates):
        return sorted(
            candidates,
            key=lambda rid: (
                not has(rid, w_s),
                _delta_to_color(index, rid, ctx_dominant),
                rid,
            ),
        )

    rec = ImageRecommendation(seed=seed_id, chosen_keyword=w_s)
    semantic_pool = index.by_keyword.get(w_s, set()) - {seed_id}
    rec.semantic = sorted(
        semantic_pool,
        key=lambda rid: (
            not has(rid, w_b),
            _delta_to_color(index, rid, ctx_dominant),
            rid,
        ),
    )[:TOP_K]
    target = RgbColor(*COLOR_NAMES[w_c])
    color_pool = seed_concepts(index, graph, seed) - {seed_id}
    rec.color = sorted(
        color_pool,
        key=lambda rid: (
            not has(rid, w_s),
            _delta_to_color(index, rid, target),
            rid,
        ),
    )[:TOP_K]
    object_pool = (index.by_object.get(w_o, set()) if w_o else set()) - {seed_id}
    rec.object = tier_sort(object_pool)[:TOP_K]
    return rec, extracted


def explore_captions_with_image(index, providers, seed_text, context_id, blobs=None):
    """New caption set steered by a context image's description."""
    if not seed_text or not seed_text.strip():
        raise ValueError("seed text must be non-empty")
    description = _caption_of(index, providers, context_id, blobs)
    prompt = prompts.CAPTION_EXPLORE_WITH_IMAGE.format(
        seed_text=seed_text, description=description
    )
    return _chat_caption_set(providers, prompt)
