"""HTTP/JSON facade over the studio: the only process boundary the UI
talks to.

Every endpoint returns either a typed success body or an ApiError
envelope {"error": {"code", "message", "provider"?}}; binary image and
post-export endpoints return PNG.
"""

from __future__ import annotations

import base64

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from . import canvas as canvasmod
from . import explore, fuse, recommend
from .canvas import CanvasError, PostComposition, SchemaError
from .corpus import CorpusError, DuplicateIdError, UnknownImageError
from .fuse import FusionError, MaskSpec
from .providers import ProviderError
from .recommend import CaptionParseError
from .studio import Studio, UnsupportedLinkError

_STATUS = {
    "bad_request": 400,
    "not_found": 404,
    "provider_failure": 502,
    "parse_failure": 422,
    "conflict": 409,
}


class ApiError(Exception):
    def __init__(self, code, message, provider=None):
        self.code = code
        self.message = message
        self.provider = provider
        super().__init__(message)

    def response(self):
        body = {"error": {"code": self.code, "message": self.message}}
        if self.provider:
            body["error"]["provider"] = self.provider
        return JSONResponse(status_code=_STATUS[self.code], content=body)


def _classify_error(exc) -> ApiError:
    if isinstance(exc, ApiError):
        return exc
    if isinstance(exc, (UnknownImageError,)):
        return ApiError("not_found", str(exc))
    if isinstance(exc, CanvasError) and (
        "unknown canvas id" in str(exc) or "unknown block id" in str(exc)
    ):
        return ApiError("not_found", str(exc))
    if isinstance(exc, DuplicateIdError):
        return ApiError("conflict", str(exc))
    if isinstance(exc, (CaptionParseError, SchemaError)):
        return ApiError("parse_failure", str(exc))
    if isinstance(exc, ProviderError):
        return ApiError("provider_failure", str(exc), provider=exc.capability)
    if isinstance(
        exc,
        (CanvasError, CorpusError, FusionError, UnsupportedLinkError, ValueError, KeyError),
    ):
        return ApiError("bad_request", str(exc))
    raise exc


def _block_json(block):
    return {
        "id": block.id,
        "kind": block.kind,
        "payload": canvasmod._payload_to_json(block.kind, block.payload),
        "x": block.x,
        "y": block.y,
    }


def _payload_arg(kind, data):
    return canvasmod._payload_from_json(kind, data, "payload")


def create_app(studio: Studio) -> FastAPI:
    app = FastAPI(title="promoboard")

    @app.exception_handler(Exception)
    async def _handle(request: Request, exc: Exception):
        return _classify_error(exc).response()

    @app.middleware("http")
    async def _catch(request: Request, call_next):
        # FastAPI's TestClient re-raises unhandled exceptions; keep the
        # envelope contract by converting here as well.
        try:
            return await call_next(request)
        except Exception as exc:  # noqa: BLE001
            return _classify_error(exc).response()

    # -- canvas -------------------------------------------------------------

    @app.post("/canvas")
    async def create_canvas():
        cv = studio.create_canvas()
        return cv.to_json()

    @app.get("/canvas/{canvas_id}")
    async def get_canvas(canvas_id: str):
        return studio.canvas(canvas_id).to_json()

    @app.put("/canvas/{canvas_id}")
    async def put_canvas(canvas_id: str, request: Request):
        current = studio.canvas(canvas_id)
        body = await request.body()
        incoming = canvasmod.load(body)
        if incoming.revision < current.revision:
            raise ApiError(
                "conflict",
                f"stale revision {incoming.revision} < {current.revision}",
            )
        return studio.replace_canvas(canvas_id, body).to_json()

    @app.post("/canvas/{canvas_id}/blocks")
    async def create_block(canvas_id: str, body: dict):
        cv = studio.canvas(canvas_id)
        kind = body.get("kind")
        if kind not in canvasmod.BLOCK_KINDS:
            raise ApiError("bad_request", f"unknown block kind: {kind}")
        payload = _payload_arg(kind, body.get("payload"))
        with studio.canvas_lock(canvas_id):
            block = cv.create_block(kind, payload, near=body.get("near"))
        return _block_json(block)

    @app.post("/canvas/{canvas_id}/link")
    async def link(canvas_id: str, body: dict):
        edge, result = studio.link(canvas_id, body["from"], body["to"])
        target = studio.canvas(canvas_id).get(edge.dst)
        return {
            "edge": {"from": edge.src, "to": edge.dst, "kind": edge.kind},
            "target": _block_json(target),
        }

    @app.post("/canvas/{canvas_id}/generate")
    async def generate(canvas_id: str, body: dict):
        block = studio.generate_from(
            canvas_id,
            body["source"],
            body["what"],
            chosen_keyword=body.get("chosen_keyword"),
            image_id=body.get("image"),
            caption=body.get("caption"),
        )
        return _block_json(block)

    @app.post("/canvas/{canvas_id}/layout")
    async def layout(canvas_id: str):
        cv = studio.canvas(canvas_id)
        with studio.canvas_lock(canvas_id):
            cv.auto_layout()
        return cv.to_json()

    # -- search / recommendation -------------------------------------------

    @app.post("/search/images")
    async def search_images(body: dict):
        ids, oov = recommend.search_images(
            studio.index, studio.graph, studio.providers,
            body.get("topic", ""), n=body.get("n", 4), offset=body.get("offset", 0),
        )
        return {"ids": ids, "out_of_vocabulary": oov}

    @app.post("/recommend/images")
    async def recommend_images(body: dict):
        rec = recommend.recommend_images(
            studio.index, studio.graph, body["seed"],
            chosen_keyword=body.get("chosen_keyword"),
            rng_seed=body.get("rng_seed", studio.rng_seed),
        )
        return rec.to_json()

    @app.post("/recommend/keywords")
    async def keyword_panel(body: dict):
        words = recommend.related_keyword_panel(
            studio.index, studio.graph, body["seed"], k=body.get("k", 8)
        )
        return {"keywords": words}

    @app.post("/recommend/captions")
    async def recommend_captions(body: dict):
        return recommend.recommend_captions(studio.providers, body.get("topic", "")).to_json()

    # -- context-aware exploration -----------------------------------------

    @app.post("/explore/text-image")
    async def explore_text_image(body: dict):
        rec, extracted = explore.explore_images_with_text(
            studio.index, studio.graph, studio.providers,
            body["seed"], body.get("text_context", ""), studio.lists, studio.blobs,
        )
        return {"recommendation": rec.to_json(), "keywords": _keywords_json(extracted)}

    @app.post("/explore/text-caption")
    async def explore_text_caption(body: dict):
        return explore.explore_captions_with_text(
            studio.providers, body.get("seed_text", ""), body.get("text_context", "")
        ).to_json()

    @app.post("/explore/image-image")
    async def explore_image_image(body: dict):
        rec, extracted = explore.explore_images_with_image(
            studio.index, studio.graph, studio.providers,
            body["seed"], body["context"], studio.lists, studio.blobs,
        )
        return {"recommendation": rec.to_json(), "keywords": _keywords_json(extracted)}

    @app.post("/explore/image-caption")
    async def explore_image_caption(body: dict):
        return explore.explore_captions_with_image(
            studio.index, studio.providers,
            body.get("seed_text", ""), body["context"], studio.blobs,
        ).to_json()

    # -- fusion -------------------------------------------------------------

    @app.post("/fuse/text-image")
    async def fuse_text_image(body: dict):
        record = fuse.fuse_text_image(
            studio.index, studio.providers, body["target"], body.get("prompt", ""),
            studio.blobs, studio.graph,
        )
        studio.refresh_lists()
        return {"id": record.id}

    @app.post("/fuse/text-caption")
    async def fuse_text_caption(body: dict):
        caption = fuse.fuse_text_caption(
            studio.providers, body.get("caption", ""), body.get("prompt", "")
        )
        return {"caption": caption}

    @app.post("/fuse/image-image")
    async def fuse_image_image(body: dict):
        record = fuse.fuse_image_image(
            studio.index, studio.providers, body["target"], body["interest"],
            studio.blobs, studio.graph,
        )
        studio.refresh_lists()
        return {"id": record.id}

    @app.post("/fuse/image-caption")
    async def fuse_image_caption(body: dict):
        caption = fuse.fuse_image_caption(
            studio.index, studio.providers, body.get("caption", ""), body["interest"],
            studio.blobs,
        )
        return {"caption": caption}

    # -- images -------------------------------------------------------------

    @app.post("/images/upload")
    async def upload(body: dict):
        data = base64.b64decode(body["data"])
        record = studio.upload_image(data)
        return {
            "id": record.id,
            "keywords": sorted(record.keywords),
            "objects": sorted(record.objects),
            "caption": record.caption_cache,
            "dominant": list(record.dominant.as_tuple()),
        }

    @app.post("/images/{image_id}/mask-edit")
    async def mask_edit(image_id: str, body: dict):
        spec = MaskSpec(
            mask_png=base64.b64decode(body.get("mask", "")),
            prompt=body.get("prompt", ""),
        )
        record = studio.mask_edit(image_id, spec)
        return {"id": record.id}

    @app.post("/images/{image_id}/regenerate")
    async def regenerate(image_id: str):
        record = studio.regenerate(image_id)
        return {"id": record.id}

    @app.get("/images/{image_id}")
    async def get_image(image_id: str):
        return Response(content=studio.image_bytes(image_id), media_type="image/png")

    # -- post export --------------------------------------------------------

    @app.get("/post/{block_id}/export")
    async def export_post(block_id: str, canvas: str | None = None):
        if canvas is None:
            for cid in sorted(studio.canvases):
                cv = studio.canvases[cid]
                if block_id in cv.blocks and cv.blocks[block_id].kind == "post":
                    canvas = cid
                    break
        if canvas is None:
            raise ApiError("not_found", f"no post block {block_id}")
        return Response(
            content=studio.export_post(canvas, block_id), media_type="image/png"
        )

    return app


def _keywords_json(extracted):
    return {
        "semantic": extracted.semantic,
        "color": extracted.color,
        "object": extracted.object,
        "seed_semantic": extracted.seed_semantic,
        "description": extracted.description,
        "contextual_prompt": extracted.contextual_prompt,
    }
