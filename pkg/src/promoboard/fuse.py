"""Fusion pipelines plus the image-block Regenerate and Mask Edit
actions.

Every pipeline is caption-then-generate: the target image's description
feeds the generation prompt, and every generated image is ingested back
into the corpus as a fully annotated record (the mind map's branching
history never points at dangling artifacts). Inputs are never mutated.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image

from . import prompts
from .corpus import ImageRecord, annotate_uploaded_image, decode_raster, read_image_bytes


class FusionError(ValueError):
    pass


@dataclass
class MaskSpec:
    """Binary edit region as a PNG alpha channel (alpha > 127 = masked)."""

    mask_png: bytes
    prompt: str

    def validate_against(self, image_bytes):
        target = decode_raster(image_bytes)
        try:
            mask_img = Image.open(io.BytesIO(self.mask_png))
            mask_img.load()
        except Exception:
            raise FusionError("decode error: undecodable mask")
        h, w = target.shape[:2]
        if mask_img.size != (w, h):
            raise FusionError(
                f"mask dimensions {mask_img.size} do not match image {(w, h)}"
            )
        alpha = np.asarray(mask_img.convert("RGBA"))[:, :, 3]
        if not (alpha > 127).any():
            raise FusionError("empty mask")


def _ingest_generated(index, data, providers, blobs=None, graph=None):
    return annotate_uploaded_image(index, data, providers, blobs=blobs, graph=graph)


def fuse_text_image(index, providers, target_id, prompt_text, blobs=None, graph=None) -> ImageRecord:
    """Regenerate a target image under a text requirement."""
    if not prompt_text or not prompt_text.strip():
        raise FusionError("text prompt must be non-empty")
    record = index.get(target_id)
    description = _description(index, providers, record, blobs)
    gen_prompt = prompts.image_fusion_with_text(description, prompt_text)
    data = providers.call("image_gen", gen_prompt)
    return _ingest_generated(index, data, providers, blobs, graph)


def fuse_text_caption(providers, target_caption, prompt_text) -> str:
    """Rewrite a caption under a text requirement."""
    if not target_caption or not target_caption.strip():
        raise FusionError("target caption must be non-empty")
    if not prompt_text or not prompt_text.strip():
        raise FusionError("text prompt must be non-empty")
    prompt = prompts.CAPTION_FUSE_WITH_TEXT.format(
        caption=target_caption, prompt=prompt_text
    )
    return providers.call("chat", prompt)


def fuse_image_image(index, providers, target_id, interest_id, blobs=None, graph=None) -> ImageRecord:
    """Blend a personal-interest image into the target as its context."""
    target = index.get(target_id)
    interest = index.get(interest_id)
    gen_prompt = prompts.image_fusion_with_image(
        _description(index, providers, target, blobs),
        _description(index, providers, interest, blobs),
    )
    data = providers.call("image_gen", gen_prompt)
    return _ingest_generated(index, data, providers, blobs, graph)


def fuse_image_caption(index, providers, target_caption, interest_id, blobs=None) -> str:
    """Rewrite a caption under the description of an interest image."""
    if not target_caption or not target_caption.strip():
        raise FusionError("target caption must be non-empty")
    interest = index.get(interest_id)
    prompt = prompts.CAPTION_FUSE_WITH_IMAGE.format(
        caption=target_caption,
        description=_description(index, providers, interest, blobs),
    )
    return providers.call("chat", prompt)


def regenerate_image(index, providers, target_id, blobs=None, graph=None) -> ImageRecord:
    """Produce a similar image from the target's description alone."""
    record = index.get(target_id)
    data = providers.call("image_gen", _description(index, providers, record, blobs))
    return _ingest_generated(index, data, providers, blobs, graph)


def mask_edit(index, providers, target_id, mask: MaskSpec, blobs=None, graph=None) -> ImageRecord:
    """Inpaint the masked region under the mask's prompt; unmasked
    pixels are preserved by provider contract."""
    record = index.get(target_id)
    image_bytes = read_image_bytes(record, blobs)
    mask.validate_against(image_bytes)
    data = providers.call("inpaint", image_bytes, mask.mask_png, mask.prompt)
    return _ingest_generated(index, data, providers, blobs, graph)


def _description(index, providers, record, blobs=None):
    if record.caption_cache:
        return record.caption_cache
    data = read_image_bytes(record, blobs)
    description = providers.call("caption", data)
    record.caption_cache = description
    return description
