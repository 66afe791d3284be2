import io
import random

import pytest
from PIL import Image

from promoboard.assoc import AssociationGraph, ingest_associations
from promoboard.colors import Palette, RgbColor
from promoboard.corpus import CorpusIndex, ImageRecord
from promoboard.providers import ProviderSuite


def png_bytes(color=(255, 0, 0), size=(32, 32)):
    buf = io.BytesIO()
    Image.new("RGB", size, color).save(buf, format="PNG")
    return buf.getvalue()


def mask_png(size, box=None):
    """RGBA mask PNG: alpha 255 inside box (x0, y0, x1, y1), else 0."""
    img = Image.new("RGBA", size, (0, 0, 0, 0))
    if box is not None:
        for x in range(box[0], box[2]):
            for y in range(box[1], box[3]):
                img.putpixel((x, y), (255, 255, 255, 255))
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def make_record(rid, keywords=(), objects=(), dominant=(128, 128, 128), caption=None):
    color = RgbColor(*dominant)
    return ImageRecord(
        id=rid,
        uri="",
        keywords=set(keywords),
        objects=set(objects),
        dominant=color,
        palette=Palette(((color, 1),)),
        caption_cache=caption,
    )


def build_index(records):
    index = CorpusIndex()
    for record in records:
        index.add(record)
    return index


def random_corpus(rng, n, vocab, objects_vocab):
    records = []
    for i in range(n):
        records.append(
            make_record(
                f"img{i:03d}",
                keywords=rng.sample(vocab, rng.randint(1, min(3, len(vocab)))),
                objects=rng.sample(objects_vocab, rng.randint(0, min(3, len(objects_vocab)))),
                dominant=(rng.randrange(256), rng.randrange(256), rng.randrange(256)),
            )
        )
    return records


@pytest.fixture
def suite():
    return ProviderSuite.mock(seed=0)


@pytest.fixture
def toy_graph():
    # juice fans out to concrete/imageable things; all vocab words are
    # reachable within two hops of one another's cues.
    rows = [
        ("juice", "orange", 3),
        ("juice", "health", 2),
        ("juice", "bottle", 1),
        ("orange", "tree", 2),
        ("orange", "fruit", 2),
        ("health", "sport", 1),
        ("bottle", "glass", 1),
        ("coffee", "juice", 1),
        ("coffee", "cup", 3),
    ]
    graph = ingest_associations(rows)
    for word in graph.nodes:
        graph.lexicon[word] = (0.8, 0.8)
    graph.lexicon["health"] = (0.3, 0.3)  # below default thresholds
    return graph


@pytest.fixture
def flat_graph():
    """Every keyword is a node with full lexicon scores and no edges."""
    graph = AssociationGraph()
    for word in ("juice", "coffee", "tea", "bread", "fruit", "sport"):
        graph.nodes.add(word)
        graph.lexicon[word] = (1.0, 1.0)
    return graph


@pytest.fixture
def rng():
    return random.Random(1234)
