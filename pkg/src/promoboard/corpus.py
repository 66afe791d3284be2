"""Image corpus: manifest ingestion, annotation, inverted indexes and the
content-addressed blob store for uploaded/generated images.

The index is immutable while serving queries; uploads and fusion outputs
append under a single writer lock. Persistence is a versioned JSON file
next to the manifest.
"""

from __future__ import annotations

import hashlib
import io
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .colors import Palette, RgbColor, dominant_color, quantize_palette

INDEX_FORMAT_VERSION = 1


class CorpusError(Exception):
    pass


class DuplicateIdError(CorpusError):
    pass


class UnknownImageError(CorpusError):
    pass


@dataclass
class ImageRecord:
    id: str
    uri: str
    keywords: set[str] = field(default_factory=set)
    objects: set[str] = field(default_factory=set)
    dominant: RgbColor | None = None
    palette: Palette | None = None
    caption_cache: str | None = None
    oov_keywords: set[str] = field(default_factory=set)

    def to_json(self):
        return {
            "id": self.id,
            "uri": self.uri,
            "keywords": sorted(self.keywords),
            "objects": sorted(self.objects),
            "dominant": list(self.dominant.as_tuple()) if self.dominant else None,
            "palette": [
                [list(c.as_tuple()), pop] for c, pop in (self.palette.entries if self.palette else ())
            ],
            "caption_cache": self.caption_cache,
            "oov_keywords": sorted(self.oov_keywords),
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            id=data["id"],
            uri=data["uri"],
            keywords=set(data.get("keywords", [])),
            objects=set(data.get("objects", [])),
            dominant=RgbColor(*data["dominant"]) if data.get("dominant") else None,
            palette=Palette(
                tuple((RgbColor(*c), pop) for c, pop in data.get("palette", []))
            )
            if data.get("palette")
            else None,
            caption_cache=data.get("caption_cache"),
            oov_keywords=set(data.get("oov_keywords", [])),
        )


class CorpusIndex:
    def __init__(self):
        self.records: dict[str, ImageRecord] = {}
        self.by_keyword: dict[str, set[str]] = {}
        self.by_object: dict[str, set[str]] = {}
        self._write_lock = threading.Lock()
        self._seq = 0

    def __len__(self):
        return len(self.records)

    def get(self, image_id) -> ImageRecord:
        try:
            return self.records[image_id]
        except KeyError:
            raise UnknownImageError(f"unknown image id: {image_id}")

    def add(self, record):
        with self._write_lock:
            if record.id in self.records:
                raise DuplicateIdError(f"duplicate image id: {record.id}")
            self.records[record.id] = record
            self._post(record)

    def _post(self, record):
        for kw in record.keywords:
            self.by_keyword.setdefault(kw, set()).add(record.id)
        for obj in record.objects:
            self.by_object.setdefault(obj, set()).add(record.id)

    def rebuild_indexes(self):
        self.by_keyword = {}
        self.by_object = {}
        for record in self.records.values():
            self._post(record)

    def fresh_id(self, data):
        """Content hash plus a monotone suffix, so regenerating the same
        bytes still yields a distinct id while whole-session runs stay
        reproducible."""
        with self._write_lock:
            self._seq += 1
            return f"{hashlib.sha256(data).hexdigest()[:12]}-{self._seq}"

    def semantic_labels(self):
        return sorted(self.by_keyword)

    def object_labels(self):
        return sorted(self.by_object)


def candidates_in_concepts(index, concepts):
    """Union of keyword postings over the members of a ConceptSet."""
    out = set()
    for member in concepts.members:
        out |= index.by_keyword.get(member.word, set())
    return out


def decode_raster(data):
    """PNG/JPEG bytes -> (h, w, 3) uint8 array, or CorpusError."""
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except Exception:
        raise CorpusError("decode error: undecodable image")
    return np.asarray(img.convert("RGB"), dtype=np.uint8)


class BlobStore:
    """Content-addressed storage for uploaded and generated images."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def put(self, image_id, data):
        path = self.root / f"{image_id}.png"
        path.write_bytes(data)
        return str(path)

    def get(self, image_id):
        path = self.root / f"{image_id}.png"
        if not path.exists():
            raise UnknownImageError(f"no blob for image id: {image_id}")
        return path.read_bytes()


def read_image_bytes(record, blobs=None):
    uri = record.uri
    if blobs is not None:
        try:
            return blobs.get(record.id)
        except UnknownImageError:
            pass
    if not uri or not Path(uri).is_file():
        raise UnknownImageError(f"image uri not found: {uri!r}")
    return Path(uri).read_bytes()


def _flag_oov(record, graph):
    if graph is not None:
        record.oov_keywords = {kw for kw in record.keywords if kw not in graph.nodes}


def _annotate_colors(record, raster):
    record.palette = quantize_palette(raster)
    record.dominant = record.palette.entries[0][0]


def ingest_manifest(rows, providers, graph=None, existing=None, report=None):
    """Build (or resume) the corpus index from manifest rows.

    Each row: {"id", "uri", "keywords": [...], "objects": [...]? }.
    Undecodable images are skipped and reported; duplicate ids are a
    hard error. Rows whose id already exists in ``existing`` with full
    annotation are kept as-is, which makes re-runs idempotent.
    """
    index = existing if existing is not None else CorpusIndex()
    skipped = report if report is not None else []
    seen_ids = set()
    for n, row in enumerate(rows, start=1):
        rid = row.get("id")
        if not rid or not row.get("uri") or not row.get("keywords"):
            raise CorpusError(f"manifest row {n}: id, uri and >=1 keyword required")
        if rid in seen_ids:
            raise DuplicateIdError(f"manifest row {n}: duplicate image id: {rid}")
        seen_ids.add(rid)
        if rid in index.records:
            continue  # resumable: already annotated

        try:
            data = Path(row["uri"]).read_bytes()
            raster = decode_raster(data)
        except (OSError, CorpusError) as exc:
            skipped.append((rid, str(exc)))
            continue

        record = ImageRecord(id=rid, uri=row["uri"], keywords=set(row["keywords"]))
        _annotate_colors(record, raster)
        if row.get("objects") is not None:
            record.objects = set(row["objects"])
        else:
            record.objects = set(providers.call("detect", data))
        _flag_oov(record, graph)
        top_kw = sorted(record.keywords)[0]
        if hasattr(providers.caption, "register_hint"):
            providers.caption.register_hint(data, top_kw)
        index.add(record)
    return index


def annotate_uploaded_image(
    index, data, providers, semantic_labels=None, blobs=None,
    graph=None, top_k=3, min_confidence=0.2,
):
    """Caption-then-classify annotation for a user-uploaded image.

    Keywords are the top-3 classifier labels (confidence >= 0.2) over
    the corpus's semantic keyword list. The record is appended to the
    corpus under a fresh content-addressed id.
    """
    raster = decode_raster(data)
    labels = semantic_labels if semantic_labels is not None else index.semantic_labels()
    description = providers.call("caption", data)
    keywords = set()
    if labels:
        ranked = providers.call("classify", description, labels)
        keywords = {lab for lab, conf in ranked[:top_k] if conf >= min_confidence}
    rid = index.fresh_id(data)
    uri = blobs.put(rid, data) if blobs is not None else ""
    record = ImageRecord(
        id=rid, uri=uri, keywords=keywords, caption_cache=description,
        objects=set(providers.call("detect", data)),
    )
    _annotate_colors(record, raster)
    _flag_oov(record, graph)
    index.add(record)
    return record


def load_manifest(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def save_index(index, path):
    doc = {
        "format_version": INDEX_FORMAT_VERSION,
        "seq": index._seq,
        "records": [index.records[rid].to_json() for rid in sorted(index.records)],
    }
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True), encoding="utf-8")


def load_index(path):
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    version = doc.get("format_version")
    if version != INDEX_FORMAT_VERSION:
        raise CorpusError(f"unsupported index format_version: {version}")
    index = CorpusIndex()
    for rec in doc["records"]:
        index.add(ImageRecord.from_json(rec))
    index._seq = doc.get("seq", 0)
    return index
