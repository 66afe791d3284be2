"""Topic search, the semantic keyword panel, three-dimensional image
recommendation from a seed image, and three-dimensional caption
recommendation.

Color and object dimensions are deterministic rankings; the semantic
dimension samples uniformly from the qualified candidates under a
caller-supplied rng seed so that results are diverse but reproducible.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from . import prompts
from .assoc import imageable_concepts_scored, within_two_hops
from .colors import delta_e
from .corpus import candidates_in_concepts
from .providers import tokenize

TOP_K = 4

DIMENSIONS = ("product", "activity", "advertisement")


class CaptionParseError(ValueError):
    def __init__(self, message, raw):
        self.raw = raw
        super().__init__(f"{message}\n--- raw response ---\n{raw}")


@dataclass(frozen=True)
class CaptionSet:
    product: tuple[str, str, str]
    activity: tuple[str, str, str]
    advertisement: tuple[str, str, str]

    def __post_init__(self):
        for dim in DIMENSIONS:
            caps = getattr(self, dim)
            if len(caps) != 3 or any(not c for c in caps):
                raise ValueError(f"dimension {dim} needs exactly 3 non-empty captions")

    def to_json(self):
        return {dim: list(getattr(self, dim)) for dim in DIMENSIONS}

    @classmethod
    def from_json(cls, data):
        return cls(**{dim: tuple(data[dim]) for dim in DIMENSIONS})


@dataclass
class ImageRecommendation:
    seed: str
    semantic: list[str] = field(default_factory=list)
    color: list[str] = field(default_factory=list)
    object: list[str] = field(default_factory=list)
    chosen_keyword: str | None = None

    def to_json(self):
        return {
            "seed": self.seed,
            "semantic": list(self.semantic),
            "color": list(self.color),
            "object": list(self.object),
            "chosen_keyword": self.chosen_keyword,
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            seed=data["seed"],
            semantic=list(data.get("semantic", [])),
            color=list(data.get("color", [])),
            object=list(data.get("object", [])),
            chosen_keyword=data.get("chosen_keyword"),
        )


# --------------------------------------------------------------------------
# Image search and the keyword panel


def search_images(index, graph, providers, topic, n=TOP_K, offset=0):
    """Match topic tokens against the keyword index; fall back to the
    zero-shot classifier for out-of-vocabulary topics.

    Returns (ids, oov_flag).
    """
    if not topic or not topic.strip():
        raise ValueError("topic must be non-empty")
    tokens = tokenize(topic)
    scored: dict[str, float] = {}
    for token in tokens:
        for rid in index.by_keyword.get(token, ()):
            # a direct keyword hit is a zero-hop path: strength 1
            scored[rid] = max(scored.get(rid, 0.0), 1.0)
    if scored:
        ranked = sorted(scored, key=lambda rid: (-scored[rid], rid))
        return ranked[offset : offset + n], False

    labels = index.semantic_labels()
    if not labels:
        return [], True
    ranked_labels = providers.call("classify", topic, labels)
    top_label = ranked_labels[0][0]
    ids = sorted(index.by_keyword.get(top_label, ()))
    return ids[offset : offset + n], True


def related_keyword_panel(index, graph, seed_id, k=8):
    """Imageable concepts around all of the seed's keywords, merged by
    max path strength. The seed's own keywords always qualify."""
    seed = index.get(seed_id)
    merged: dict[str, float] = {kw: 1.0 for kw in sorted(seed.keywords)}
    for kw in sorted(seed.keywords):
        for word, strength in imageable_concepts_scored(graph, kw):
            if strength > merged.get(word, 0.0):
                merged[word] = strength
    ranked = sorted(merged, key=lambda w: (-merged[w], w))
    return ranked[:k]


# --------------------------------------------------------------------------
# The three image dimensions


def seed_concepts(index, graph, seed):
    """Two-hop concept neighborhood over all of the seed's keywords."""
    ids = set()
    for kw in seed.keywords:
        ids |= candidates_in_concepts(index, within_two_hops(graph, kw))
    return ids


def recommend_semantic(index, seed_id, chosen_keyword, rng_seed=0, k=TOP_K):
    """Uniform sample without replacement from the images carrying the
    chosen keyword; reproducible for a fixed rng seed."""
    seed = index.get(seed_id)
    candidates = sorted(index.by_keyword.get(chosen_keyword, set()) - {seed.id})
    if not candidates:
        return []
    rng = random.Random(rng_seed)
    return rng.sample(candidates, min(k, len(candidates)))


def _delta_to_seed(index, seed, rid):
    cand = index.get(rid)
    if cand.dominant is None or seed.dominant is None:
        return float("inf")
    return delta_e(cand.dominant, seed.dominant)


def recommend_color(index, graph, seed_id, k=TOP_K, offset=0):
    """Concept-restricted candidates ranked by dominant-color distance."""
    seed = index.get(seed_id)
    candidates = seed_concepts(index, graph, seed) - {seed.id}
    ranked = sorted(candidates, key=lambda rid: (_delta_to_seed(index, seed, rid), rid))
    return ranked[offset : offset + k]


def recommend_object(index, graph, seed_id, k=TOP_K, offset=0):
    """Concept-restricted candidates sharing >= 1 object tag, ranked by
    shared-tag count, then color distance, then id."""
    seed = index.get(seed_id)
    if not seed.objects:
        return []
    candidates = seed_concepts(index, graph, seed) - {seed.id}
    shared = {
        rid: len(index.get(rid).objects & seed.objects)
        for rid in candidates
        if index.get(rid).objects & seed.objects
    }
    ranked = sorted(
        shared,
        key=lambda rid: (-shared[rid], _delta_to_seed(index, seed, rid), rid),
    )
    return ranked[offset : offset + k]


def recommend_images(index, graph, seed_id, chosen_keyword=None, rng_seed=0):
    rec = ImageRecommendation(seed=seed_id, chosen_keyword=chosen_keyword)
    if chosen_keyword:
        rec.semantic = recommend_semantic(index, seed_id, chosen_keyword, rng_seed)
    rec.color = recommend_color(index, graph, seed_id)
    rec.object = recommend_object(index, graph, seed_id)
    return rec


# --------------------------------------------------------------------------
# Caption recommendation


_HEADER_RE = re.compile(
    r"^[^a-zA-Z]*(product|activity|advertisement)(?:[^a-zA-Z]+captions?)?[^a-zA-Z]*$",
    re.IGNORECASE,
)
_BULLET_RE = re.compile(r"^\s*(?:\d+[.)]\s*|[-•]\s+|\*\s+)")


def parse_caption_response(text) -> CaptionSet:
    """Tolerant parser for the chat provider's caption listings.

    Recognizes case-insensitive dimension headers and numbered or
    bulleted captions; asterisk keyword markers and non-ASCII glyphs in
    caption text are preserved verbatim. Exactly 3 captions per
    dimension or a parse error naming the offending dimensions.
    """
    found: dict[str, list[str]] = {dim: [] for dim in DIMENSIONS}
    current = None
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        header = _HEADER_RE.match(stripped)
        if header:
            current = header.group(1).lower()
            continue
        if current is None:
            continue
        caption = _BULLET_RE.sub("", stripped).strip()
        if caption:
            found[current].append(caption)
    bad = [f"{dim} has {len(found[dim])}" for dim in DIMENSIONS if len(found[dim]) != 3]
    if bad:
        raise CaptionParseError(f"expected 3 captions per dimension ({', '.join(bad)})", text)
    return CaptionSet(**{dim: tuple(found[dim]) for dim in DIMENSIONS})


def _chat_caption_set(providers, prompt, retries=1):
    last_error = None
    for _ in range(retries + 1):
        raw = providers.call("chat", prompt)
        try:
            return parse_caption_response(raw)
        except CaptionParseError as exc:
            last_error = exc
    raise last_error


def recommend_captions(providers, topic) -> CaptionSet:
    """Product/activity/advertisement captions for a topic text."""
    if not topic or not topic.strip():
        raise ValueError("topic must be non-empty")
    prompt = prompts.CAPTION_RECOMMEND.format(topic=topic)
    return _chat_caption_set(providers, prompt)
