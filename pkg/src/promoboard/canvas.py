"""Mind-map document model: typed blocks, provenance-typed edges,
post composition, auto-layout and persistence.

Edge provenance encodes the thinking path: edges created by generate
actions are ``exploration`` (rendered blue), edges created by
drag-to-link context/fusion actions are ``customization`` (rendered
orange). Deleted blocks leave tombstones so the path stays auditable.

``created_at`` is a canvas-local logical clock, not wall time, so a
scripted session serializes byte-identically across runs.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

from PIL import Image, ImageDraw

from .recommend import CaptionSet, ImageRecommendation

DOCUMENT_FORMAT_VERSION = 1

BLOCK_KINDS = ("text", "image", "post", "search_results", "image_rec", "caption_rec")
EDGE_KINDS = ("exploration", "customization")
POST_TEMPLATES = ("caption_below", "caption_overlay")

# Nominal block footprint for layout and overlap checks, canvas units.
BLOCK_W = 200
BLOCK_H = 120
GAP_X = 60
GAP_Y = 40

POST_EXPORT_SIZE = (1080, 1350)

# (source kind, target kind) -> dispatch handled by the studio layer.
# Mirrored client-side so invalid drops can be rejected before the API
# call; the server remains the authority.
LINK_DISPATCH = {
    ("text", "image_rec"): "explore_images_with_text",
    ("image", "image_rec"): "explore_images_with_image",
    ("text", "caption_rec"): "explore_captions_with_text",
    ("image", "caption_rec"): "explore_captions_with_image",
    ("text", "image"): "fuse_text_image",
    ("image", "image"): "fuse_image_image",
    ("text", "text"): "fuse_text_caption",
    ("image", "text"): "fuse_image_caption",
}


class CanvasError(ValueError):
    pass


class SchemaError(CanvasError):
    """Document violates the persisted schema; message carries the path
    to the offending field."""


@dataclass
class PostComposition:
    image: str | None = None
    caption: str | None = None
    template: str = "caption_below"

    def __post_init__(self):
        if self.template not in POST_TEMPLATES:
            raise CanvasError(f"unknown post template: {self.template}")

    @property
    def renderable(self):
        return self.image is not None or self.caption is not None

    def to_json(self):
        return {"image": self.image, "caption": self.caption, "template": self.template}

    @classmethod
    def from_json(cls, data):
        return cls(
            image=data.get("image"),
            caption=data.get("caption"),
            template=data.get("template", "caption_below"),
        )


@dataclass
class Block:
    id: str
    kind: str
    payload: object
    x: float = 0.0
    y: float = 0.0
    created_at: int = 0
    extra: dict = field(default_factory=dict)

    def bbox(self):
        return (self.x, self.y, self.x + BLOCK_W, self.y + BLOCK_H)


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    kind: str


def _payload_to_json(kind, payload):
    if kind in ("text",):
        return payload
    if kind == "image":
        return payload
    if kind == "post":
        return payload.to_json()
    if kind == "search_results":
        return {"ids": list(payload.get("ids", [])), "oov": bool(payload.get("oov", False))}
    if kind == "image_rec":
        return payload.to_json()
    if kind == "caption_rec":
        return payload.to_json()
    raise CanvasError(f"unknown block kind: {kind}")


def _payload_from_json(kind, data, path):
    try:
        if kind == "text":
            if not isinstance(data, str):
                raise CanvasError("text payload must be a string")
            return data
        if kind == "image":
            if not isinstance(data, str):
                raise CanvasError("image payload must be an image id")
            return data
        if kind == "post":
            return PostComposition.from_json(data)
        if kind == "search_results":
            return {"ids": list(data["ids"]), "oov": bool(data.get("oov", False))}
        if kind == "image_rec":
            return ImageRecommendation.from_json(data)
        if kind == "caption_rec":
            return CaptionSet.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: {exc}")
    raise SchemaError(f"{path}: unknown block kind {kind!r}")


def validate_payload(kind, payload):
    if kind not in BLOCK_KINDS:
        raise CanvasError(f"unknown block kind: {kind}")
    expected = {
        "text": str,
        "image": str,
        "post": PostComposition,
        "search_results": dict,
        "image_rec": ImageRecommendation,
        "caption_rec": CaptionSet,
    }[kind]
    if not isinstance(payload, expected):
        raise CanvasError(f"payload for {kind} block must be {expected.__name__}")
    if kind == "text" and not payload.strip():
        raise CanvasError("text block payload must be non-empty")


class Canvas:
    def __init__(self, canvas_id="canvas"):
        self.id = canvas_id
        self.blocks: dict[str, Block] = {}
        self.edges: list[Edge] = []
        self.revision = 0
        self.tombstones: list[str] = []
        self.extra: dict = {}
        self._clock = 0
        self._next_block = 0

    # -- mutation helpers ---------------------------------------------------

    def _bump(self):
        self.revision += 1

    def _fresh_block_id(self):
        self._next_block += 1
        return f"b{self._next_block}"

    def get(self, block_id) -> Block:
        try:
            return self.blocks[block_id]
        except KeyError:
            raise CanvasError(f"unknown block id: {block_id}")

    def create_block(self, kind, payload, near=None, block_id=None):
        validate_payload(kind, payload)
        bid = block_id or self._fresh_block_id()
        if bid in self.blocks:
            raise CanvasError(f"duplicate block id: {bid}")
        self._clock += 1
        block = Block(id=bid, kind=kind, payload=payload, created_at=self._clock)
        if near is not None:
            self._place_near(block, self.get(near))
        else:
            self._place_free(block)
        self.blocks[bid] = block
        self._bump()
        return block

    def _overlaps_any(self, block):
        x0, y0, x1, y1 = block.bbox()
        for other in self.blocks.values():
            ox0, oy0, ox1, oy1 = other.bbox()
            if x0 < ox1 and ox0 < x1 and y0 < oy1 and oy0 < y1:
                return True
        return False

    def _place_near(self, block, anchor):
        block.x = anchor.x + BLOCK_W + GAP_X
        block.y = anchor.y
        while self._overlaps_any(block):
            block.y += BLOCK_H + GAP_Y

    def _place_free(self, block):
        block.x = 0.0
        block.y = 0.0
        while self._overlaps_any(block):
            block.y += BLOCK_H + GAP_Y

    def set_payload(self, block_id, payload):
        block = self.get(block_id)
        validate_payload(block.kind, payload)
        block.payload = payload
        self._bump()

    def add_edge(self, src, dst, kind):
        if kind not in EDGE_KINDS:
            raise CanvasError(f"unknown edge kind: {kind}")
        if src == dst:
            raise CanvasError("self-loop edges are not allowed")
        self.get(src)
        self.get(dst)
        edge = Edge(src, dst, kind)
        self.edges.append(edge)
        self._bump()
        return edge

    def delete_block(self, block_id):
        self.get(block_id)
        del self.blocks[block_id]
        self.edges = [e for e in self.edges if e.src != block_id and e.dst != block_id]
        self.tombstones.append(block_id)
        self._bump()

    def move_block(self, block_id, x, y):
        block = self.get(block_id)
        block.x, block.y = float(x), float(y)
        self._bump()

    # -- layout -------------------------------------------------------------

    def auto_layout(self):
        """Layered left-to-right tree over exploration edges.

        Customization edges do not affect layering. Blocks with no
        exploration edges stack in a left gutter. Deterministic: layer
        assignment is longest-path; within-layer order is block id.
        """
        explo = [e for e in self.edges if e.kind == "exploration"]
        connected = {e.src for e in explo} | {e.dst for e in explo}
        children: dict[str, list[str]] = {}
        indeg = {b: 0 for b in connected}
        for e in explo:
            children.setdefault(e.src, []).append(e.dst)
            indeg[e.dst] += 1

        layer = {b: 0 for b in connected}
        frontier = sorted(b for b in connected if indeg[b] == 0)
        seen = set(frontier)
        order = list(frontier)
        while order:
            nxt = []
            for b in order:
                for c in children.get(b, ()):
                    layer[c] = max(layer[c], layer[b] + 1)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            order = sorted(set(nxt))

        by_layer: dict[int, list[str]] = {}
        for b in connected:
            by_layer.setdefault(layer[b], []).append(b)
        for lv, ids in by_layer.items():
            for slot, bid in enumerate(sorted(ids)):
                block = self.blocks[bid]
                block.x = float(lv * (BLOCK_W + GAP_X))
                block.y = float(slot * (BLOCK_H + GAP_Y))

        gutter = sorted(b for b in self.blocks if b not in connected)
        for slot, bid in enumerate(gutter):
            block = self.blocks[bid]
            block.x = float(-(BLOCK_W + GAP_X))
            block.y = float(slot * (BLOCK_H + GAP_Y))
        self._bump()

    # -- persistence --------------------------------------------------------

    def to_json(self):
        return {
            "format_version": DOCUMENT_FORMAT_VERSION,
            "canvas": {
                "id": self.id,
                "revision": self.revision,
                "clock": self._clock,
                "next_block": self._next_block,
                "tombstones": list(self.tombstones),
                "blocks": [
                    {
                        "id": b.id,
                        "kind": b.kind,
                        "payload": _payload_to_json(b.kind, b.payload),
                        "x": b.x,
                        "y": b.y,
                        "created_at": b.created_at,
                        **b.extra,
                    }
                    for b in sorted(self.blocks.values(), key=lambda b: b.id)
                ],
                "edges": [
                    {"from": e.src, "to": e.dst, "kind": e.kind} for e in self.edges
                ],
                **self.extra,
            },
        }


KNOWN_CANVAS_KEYS = {"id", "revision", "clock", "next_block", "tombstones", "blocks", "edges"}
KNOWN_BLOCK_KEYS = {"id", "kind", "payload", "x", "y", "created_at"}


def save(canvas) -> bytes:
    """Canonical JSON document bytes; byte-stable for equal state."""
    return json.dumps(canvas.to_json(), sort_keys=True, separators=(",", ":")).encode("utf-8")


def load(data) -> Canvas:
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise SchemaError(f"document: not valid JSON ({exc})")
    version = doc.get("format_version")
    if version != DOCUMENT_FORMAT_VERSION:
        raise SchemaError(f"format_version: unsupported value {version!r}")
    body = doc.get("canvas")
    if not isinstance(body, dict):
        raise SchemaError("canvas: missing or not an object")

    canvas = Canvas(body.get("id", "canvas"))
    for i, bdoc in enumerate(body.get("blocks", [])):
        path = f"canvas.blocks[{i}]"
        if not isinstance(bdoc, dict) or "id" not in bdoc or "kind" not in bdoc:
            raise SchemaError(f"{path}: missing id or kind")
        payload = _payload_from_json(bdoc["kind"], bdoc.get("payload"), path + ".payload")
        block = Block(
            id=bdoc["id"],
            kind=bdoc["kind"],
            payload=payload,
            x=float(bdoc.get("x", 0.0)),
            y=float(bdoc.get("y", 0.0)),
            created_at=int(bdoc.get("created_at", 0)),
            extra={k: v for k, v in bdoc.items() if k not in KNOWN_BLOCK_KEYS},
        )
        if block.id in canvas.blocks:
            raise SchemaError(f"{path}.id: duplicate block id {block.id!r}")
        canvas.blocks[block.id] = block
    for i, edoc in enumerate(body.get("edges", [])):
        path = f"canvas.edges[{i}]"
        try:
            edge = Edge(edoc["from"], edoc["to"], edoc["kind"])
        except (KeyError, TypeError):
            raise SchemaError(f"{path}: missing from/to/kind")
        if edge.kind not in EDGE_KINDS:
            raise SchemaError(f"{path}.kind: unknown edge kind {edge.kind!r}")
        if edge.src not in canvas.blocks or edge.dst not in canvas.blocks:
            raise SchemaError(f"{path}: dangling endpoint")
        canvas.edges.append(edge)
    canvas.revision = int(body.get("revision", 0))
    canvas.tombstones = list(body.get("tombstones", []))
    canvas._clock = int(body.get("clock", 0))
    canvas._next_block = int(body.get("next_block", 0))
    canvas.extra = {k: v for k, v in body.items() if k not in KNOWN_CANVAS_KEYS}
    return canvas


# --------------------------------------------------------------------------
# Post export


def render_post(composition, image_bytes=None) -> bytes:
    """Composite the post onto a fixed 1080x1350 white card as PNG."""
    if not composition.renderable:
        raise CanvasError("post has neither image nor caption")
    card = Image.new("RGB", POST_EXPORT_SIZE, (255, 255, 255))
    draw = ImageDraw.Draw(card)
    image_box_h = POST_EXPORT_SIZE[1] - 270 if composition.template == "caption_below" else POST_EXPORT_SIZE[1]
    if composition.image is not None and image_bytes is not None:
        img = Image.open(io.BytesIO(image_bytes)).convert("RGB")
        scale = min(POST_EXPORT_SIZE[0] / img.width, image_box_h / img.height)
        size = (max(1, int(img.width * scale)), max(1, int(img.height * scale)))
        img = img.resize(size, Image.LANCZOS)
        card.paste(img, ((POST_EXPORT_SIZE[0] - size[0]) // 2, (image_box_h - size[1]) // 2))
    if composition.caption:
        y = POST_EXPORT_SIZE[1] - 220 if composition.template == "caption_below" else POST_EXPORT_SIZE[1] - 120
        for line_no, line in enumerate(_wrap(composition.caption, 70)[:8]):
            draw.text((60, y + line_no * 24), line, fill=(20, 20, 20))
    buf = io.BytesIO()
    card.save(buf, format="PNG")
    return buf.getvalue()


def _wrap(text, width):
    words = text.split()
    lines, cur = [], ""
    for word in words:
        trial = f"{cur} {word}".strip()
        if len(trial) > width and cur:
            lines.append(cur)
            cur = word
        else:
            cur = trial
    if cur:
        lines.append(cur)
    return lines or [""]
