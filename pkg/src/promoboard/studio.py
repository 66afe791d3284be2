"""Service layer: owns the corpus, graph, providers and canvases, and
implements the drag-to-link dispatch and the generate menu actions on
top of the document model.

Link semantics: the result always replaces the target block's payload
(recommendation blocks update in place; fusion targets show the fused
result) and the created edge is ``customization``. Generate actions
spawn a new block connected by an ``exploration`` edge. Underlying
image records are never mutated; fusion outputs are new corpus records.
"""

from __future__ import annotations

import threading

from . import canvas as canvasmod
from . import explore, fuse, recommend
from .canvas import Canvas, LINK_DISPATCH, PostComposition
from .corpus import annotate_uploaded_image, read_image_bytes
from .explore import KeywordLists


class UnsupportedLinkError(ValueError):
    pass


class Studio:
    def __init__(self, index, graph, providers, blobs=None, rng_seed=0):
        self.index = index
        self.graph = graph
        self.providers = providers
        self.blobs = blobs
        self.rng_seed = rng_seed
        self.lists = KeywordLists.from_corpus(index, graph)
        self.canvases: dict[str, Canvas] = {}
        self._canvas_locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()
        self._next_canvas = 0

    # -- canvas lifecycle ---------------------------------------------------

    def create_canvas(self):
        with self._guard:
            self._next_canvas += 1
            cid = f"c{self._next_canvas}"
            self.canvases[cid] = Canvas(cid)
            self._canvas_locks[cid] = threading.Lock()
        return self.canvases[cid]

    def canvas(self, canvas_id) -> Canvas:
        try:
            return self.canvases[canvas_id]
        except KeyError:
            raise canvasmod.CanvasError(f"unknown canvas id: {canvas_id}")

    def canvas_lock(self, canvas_id):
        self.canvas(canvas_id)
        return self._canvas_locks[canvas_id]

    def replace_canvas(self, canvas_id, document_bytes):
        loaded = canvasmod.load(document_bytes)
        with self.canvas_lock(canvas_id):
            loaded.id = canvas_id
            self.canvases[canvas_id] = loaded
        return loaded

    # -- provider-backed conveniences --------------------------------------

    def image_bytes(self, image_id):
        return read_image_bytes(self.index.get(image_id), self.blobs)

    def refresh_lists(self):
        self.lists = KeywordLists.from_corpus(self.index, self.graph)

    def upload_image(self, data):
        record = annotate_uploaded_image(
            self.index, data, self.providers,
            semantic_labels=self.lists.semantic or None,
            blobs=self.blobs, graph=self.graph,
        )
        self.refresh_lists()
        return record

    def _ingested(self, record):
        self.refresh_lists()
        return record

    def regenerate(self, image_id):
        return self._ingested(
            fuse.regenerate_image(self.index, self.providers, image_id, self.blobs, self.graph)
        )

    def mask_edit(self, image_id, mask_spec):
        return self._ingested(
            fuse.mask_edit(self.index, self.providers, image_id, mask_spec, self.blobs, self.graph)
        )

    # -- drag-to-link dispatch ---------------------------------------------

    def link(self, canvas_id, from_id, to_id):
        """Apply the (source kind, target kind) action, replace the
        target payload with the result, and record an orange edge."""
        cv = self.canvas(canvas_id)
        with self.canvas_lock(canvas_id):
            src = cv.get(from_id)
            dst = cv.get(to_id)
            action = LINK_DISPATCH.get((src.kind, dst.kind))
            if action is None:
                raise UnsupportedLinkError(
                    f"unsupported link: {src.kind} -> {dst.kind}"
                )
            result = self._apply_link(cv, action, src, dst)
            cv.set_payload(to_id, result)
            edge = cv.add_edge(from_id, to_id, "customization")
            return edge, result

    def _apply_link(self, cv, action, src, dst):
        if action == "explore_images_with_text":
            rec, _ = explore.explore_images_with_text(
                self.index, self.graph, self.providers,
                dst.payload.seed, src.payload, self.lists, self.blobs,
            )
            return rec
        if action == "explore_images_with_image":
            rec, _ = explore.explore_images_with_image(
                self.index, self.graph, self.providers,
                dst.payload.seed, src.payload, self.lists, self.blobs,
            )
            return rec
        if action == "explore_captions_with_text":
            return explore.explore_captions_with_text(
                self.providers, self._seed_text_for(cv, dst), src.payload
            )
        if action == "explore_captions_with_image":
            return explore.explore_captions_with_image(
                self.index, self.providers, self._seed_text_for(cv, dst),
                src.payload, self.blobs,
            )
        if action == "fuse_text_image":
            record = fuse.fuse_text_image(
                self.index, self.providers, dst.payload, src.payload,
                self.blobs, self.graph,
            )
            return self._ingested(record).id
        if action == "fuse_image_image":
            record = fuse.fuse_image_image(
                self.index, self.providers, dst.payload, src.payload,
                self.blobs, self.graph,
            )
            return self._ingested(record).id
        if action == "fuse_text_caption":
            return fuse.fuse_text_caption(self.providers, dst.payload, src.payload)
        if action == "fuse_image_caption":
            return fuse.fuse_image_caption(
                self.index, self.providers, dst.payload, src.payload, self.blobs
            )
        raise UnsupportedLinkError(f"unknown action: {action}")

    def _seed_text_for(self, cv, block):
        """Seed text of a caption_rec block: the text block that spawned
        it, recovered from its incoming exploration edge."""
        for edge in cv.edges:
            if edge.dst == block.id and edge.kind == "exploration":
                origin = cv.blocks.get(edge.src)
                if origin is not None and origin.kind == "text":
                    return origin.payload
        raise UnsupportedLinkError(
            f"caption block {block.id} has no originating text block"
        )

    # -- generate menu ------------------------------------------------------

    def generate_from(self, canvas_id, source_id, what, chosen_keyword=None,
                      image_id=None, caption=None):
        """Generate Images / Generate Captions / Generate Post from a
        text or image block; spawns a new block with a blue edge."""
        cv = self.canvas(canvas_id)
        with self.canvas_lock(canvas_id):
            src = cv.get(source_id)
            allowed = {"text": ("images", "captions", "post"), "image": ("images", "post")}
            if src.kind not in allowed or what not in allowed[src.kind]:
                raise UnsupportedLinkError(
                    f"{src.kind} block does not support generate {what}"
                )
            kind, payload = self._generate_payload(src, what, chosen_keyword, image_id, caption)
            block = cv.create_block(kind, payload, near=source_id)
            cv.add_edge(source_id, block.id, "exploration")
            return block

    def _generate_payload(self, src, what, chosen_keyword, image_id, caption):
        if what == "images":
            if src.kind == "text":
                ids, oov = recommend.search_images(
                    self.index, self.graph, self.providers, src.payload
                )
                return "search_results", {"ids": ids, "oov": oov}
            rec = recommend.recommend_images(
                self.index, self.graph, src.payload,
                chosen_keyword=chosen_keyword, rng_seed=self.rng_seed,
            )
            return "image_rec", rec
        if what == "captions":
            return "caption_rec", recommend.recommend_captions(self.providers, src.payload)
        # post
        if image_id is not None or caption is not None:
            return "post", PostComposition(image=image_id, caption=caption)
        if src.kind == "image":
            description = fuse._description(
                self.index, self.providers, self.index.get(src.payload), self.blobs
            )
            return "post", PostComposition(
                image=src.payload, caption=self.providers.call("chat", description)
            )
        generated = self._ingested(
            annotate_uploaded_image(
                self.index, self.providers.call("image_gen", src.payload),
                self.providers, blobs=self.blobs, graph=self.graph,
            )
        )
        return "post", PostComposition(image=generated.id, caption=src.payload)

    def export_post(self, canvas_id, block_id):
        cv = self.canvas(canvas_id)
        block = cv.get(block_id)
        if block.kind != "post":
            raise canvasmod.CanvasError(f"block {block_id} is not a post block")
        image_bytes = (
            self.image_bytes(block.payload.image) if block.payload.image else None
        )
        return canvasmod.render_post(block.payload, image_bytes)
