"""Capability contracts for the external AI services, with live HTTP
clients and deterministic offline mocks.

Every other module depends only on the six capability interfaces in
``ProviderSuite``; this is the only module that performs network I/O.
The mocks are shipped first-class implementations (not test doubles) so
the whole studio runs offline: each mock is a pure function of its
inputs and a fixed seed.
"""

from __future__ import annotations

import hashlib
import io
import os
import re
import time
from dataclasses import dataclass, field

import httpx
from PIL import Image, PngImagePlugin

ENV_PREFIX = "PROMOBOARD"
CAPABILITIES = ("chat", "image_gen", "inpaint", "caption", "detect", "classify")

MOCK_WORDS = (
    "juice", "coffee", "ramen", "sunset", "forest", "bicycle", "flower",
    "ocean", "mountain", "bread", "camera", "guitar", "lantern", "kite",
    "candle", "garden",
)

MOCK_OBJECT_VOCAB = (
    "bottle", "cup", "bowl", "table", "chair", "plant", "sign", "bag",
    "box", "phone", "book", "shoe",
)


class ProviderError(Exception):
    """Base class; carries the capability that failed."""

    def __init__(self, capability, message):
        self.capability = capability
        super().__init__(f"{capability}: {message}")


class ProviderAuthError(ProviderError):
    pass


class ProviderTimeoutError(ProviderError):
    pass


class ProviderResponseError(ProviderError):
    """Malformed or non-2xx response from the remote service."""


@dataclass
class CapabilityConfig:
    mode: str = "mock"  # "mock" or "live"
    url: str = ""
    key: str = ""
    model: str = ""
    timeout: float = 120.0
    retries: int = 2

    def require_live(self, capability):
        if not self.url:
            raise ProviderAuthError(capability, "live mode requires an endpoint URL")
        if not self.key:
            raise ProviderAuthError(capability, "live mode requires a credential")


def config_from_env(capability, environ=None):
    """Read PROMOBOARD_<CAPABILITY>_{URL,KEY,MODEL,MODE} for one capability."""
    env = os.environ if environ is None else environ
    prefix = f"{ENV_PREFIX}_{capability.upper()}_"
    return CapabilityConfig(
        mode=env.get(prefix + "MODE", "mock"),
        url=env.get(prefix + "URL", ""),
        key=env.get(prefix + "KEY", ""),
        model=env.get(prefix + "MODEL", ""),
    )


def _digest(*parts):
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, str):
            part = part.encode("utf-8")
        h.update(part)
        h.update(b"\x00")
    return h.digest()


def _png_bytes(image, prompt=None):
    info = PngImagePlugin.PngInfo()
    if prompt is not None:
        info.add_text("prompt", prompt)
    buf = io.BytesIO()
    image.save(buf, format="PNG", pnginfo=info)
    return buf.getvalue()


def decode_image(data, capability="caption"):
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
        return img
    except Exception:
        raise ProviderResponseError(capability, "decode error: undecodable image")


# --------------------------------------------------------------------------
# Deterministic mocks


class MockChat:
    """Pattern-matches the studio's own prompt families and answers with
    deterministic, parseable text derived from the prompt hash."""

    def __init__(self, seed=0):
        self.seed = seed

    def _word(self, prompt, salt):
        d = _digest(str(self.seed), prompt, salt)
        return MOCK_WORDS[d[0] % len(MOCK_WORDS)]

    def complete(self, prompt):
        if prompt.startswith("Generate three promotional captions"):
            lines = []
            for dim in ("Product", "Activity", "Advertisement"):
                lines.append(f"{dim}:")
                for i in range(1, 4):
                    word = self._word(prompt, f"{dim}{i}")
                    lines.append(f"{i}. Enjoy *{word}* moments every day ✨")
            return "\n".join(lines)
        if prompt.startswith("Regenerate the following promotional"):
            word = self._word(prompt, "regen")
            return f"Rediscover *{word}* like never before ✨"
        return f"mock:{_digest(str(self.seed), prompt).hex()[:12]}"


class MockImageGen:
    """Renders a solid color derived from the prompt hash and embeds the
    prompt in PNG metadata so the mock captioner can read it back."""

    def __init__(self, seed=0, size=(256, 256)):
        self.seed = seed
        self.size = size

    def generate(self, prompt):
        d = _digest(str(self.seed), prompt)
        img = Image.new("RGB", self.size, (d[0], d[1], d[2]))
        return _png_bytes(img, prompt=prompt)


class MockInpaint:
    """Copies unmasked pixels verbatim; fills masked pixels (alpha > 127
    in the mask PNG) with a color derived from the prompt hash."""

    def __init__(self, seed=0):
        self.seed = seed

    def inpaint(self, image, mask, prompt):
        src = decode_image(image, "inpaint").convert("RGB")
        mask_img = decode_image(mask, "inpaint").convert("RGBA")
        if mask_img.size != src.size:
            raise ProviderResponseError(
                "inpaint",
                f"mask dimensions {mask_img.size} do not match image {src.size}",
            )
        d = _digest(str(self.seed), prompt)
        fill = Image.new("RGB", src.size, (d[0], d[1], d[2]))
        alpha = mask_img.getchannel("A").point(lambda a: 255 if a > 127 else 0)
        out = Image.composite(fill, src, alpha)
        return _png_bytes(out, prompt=prompt)


class MockCaptioner:
    """Describes an image as "image of <word>".

    The word comes, in order of preference, from a prompt embedded in
    the PNG metadata (covering mock-generated images), from a registered
    hint (corpus images register their top manifest keyword), or from a
    fixed wordlist indexed by the content hash.
    """

    def __init__(self, seed=0):
        self.seed = seed
        self._hints: dict[bytes, str] = {}

    def register_hint(self, data, word):
        self._hints[_digest(data)] = word

    def caption(self, image):
        img = decode_image(image, "caption")
        embedded = img.info.get("prompt")
        if embedded:
            return embedded
        hint = self._hints.get(_digest(image))
        if hint:
            return f"image of {hint}"
        d = _digest(str(self.seed), image)
        return f"image of {MOCK_WORDS[d[0] % len(MOCK_WORDS)]}"


class MockDetector:
    """Emits 1-3 tags from a fixed vocabulary, chosen by content hash.
    Hints override, including an empty list for "nothing detectable"."""

    def __init__(self, seed=0, vocab=MOCK_OBJECT_VOCAB):
        self.seed = seed
        self.vocab = tuple(vocab)
        self._hints: dict[bytes, list] = {}

    def register_hint(self, data, tags):
        self._hints[_digest(data)] = list(tags)

    def detect(self, image):
        decode_image(image, "detect")
        hint = self._hints.get(_digest(image))
        if hint is not None:
            return list(hint)
        if not self.vocab:
            return []
        d = _digest(str(self.seed), image)
        count = 1 + d[1] % 3
        tags = []
        for i in range(count):
            tag = self.vocab[d[2 + i] % len(self.vocab)]
            if tag not in tags:
                tags.append(tag)
        return tags


_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text):
    return _TOKEN_RE.findall(text.lower())


class MockClassifier:
    """Ranks candidate labels by token overlap with the text.

    Confidence is the fraction of a label's tokens present in the text;
    ties (including the all-zero case) break lexicographically, so the
    ranking is total and deterministic.
    """

    def __init__(self, seed=0):
        self.seed = seed

    def classify(self, text, labels):
        if not labels:
            raise ProviderResponseError("classify", "no candidate labels")
        toks = set(tokenize(text))
        scored = []
        for label in labels:
            ltoks = tokenize(label)
            overlap = sum(1 for t in ltoks if t in toks)
            conf = overlap / max(1, len(ltoks))
            scored.append((label, conf))
        scored.sort(key=lambda lc: (-lc[1], lc[0]))
        return scored


# --------------------------------------------------------------------------
# Live HTTP clients (OpenAI-style JSON shapes; adapters keep vendor
# specifics out of the rest of the system)


class _LiveBase:
    capability = ""

    def __init__(self, config, client=None):
        self.config = config
        self._client = client or httpx.Client(timeout=config.timeout)

    def _post(self, payload):
        cfg = self.config
        cfg.require_live(self.capability)
        last = None
        for attempt in range(cfg.retries + 1):
            try:
                resp = self._client.post(
                    cfg.url,
                    json=payload,
                    headers={"Authorization": f"Bearer {cfg.key}"},
                )
            except httpx.TimeoutException as exc:
                last = ProviderTimeoutError(self.capability, str(exc))
            except httpx.HTTPError as exc:
                last = ProviderResponseError(self.capability, str(exc))
            else:
                if resp.status_code in (401, 403):
                    raise ProviderAuthError(self.capability, f"HTTP {resp.status_code}")
                if resp.status_code >= 400:
                    last = ProviderResponseError(
                        self.capability, f"HTTP {resp.status_code}: {resp.text[:200]}"
                    )
                else:
                    try:
                        return resp.json()
                    except ValueError:
                        raise ProviderResponseError(self.capability, "non-JSON response")
            if attempt < cfg.retries:
                time.sleep(min(2.0**attempt * 0.5, 8.0))
        raise last

    def _extract(self, data, *path):
        cur = data
        for key in path:
            try:
                cur = cur[key]
            except (KeyError, IndexError, TypeError):
                raise ProviderResponseError(
                    self.capability, f"missing field {'.'.join(map(str, path))}"
                )
        return cur


class LiveChat(_LiveBase):
    capability = "chat"

    def complete(self, prompt):
        data = self._post(
            {
                "model": self.config.model,
                "messages": [{"role": "user", "content": prompt}],
            }
        )
        return self._extract(data, "choices", 0, "message", "content")


class LiveImageGen(_LiveBase):
    capability = "image_gen"

    def generate(self, prompt):
        import base64

        data = self._post(
            {"model": self.config.model, "prompt": prompt, "response_format": "b64_json"}
        )
        return base64.b64decode(self._extract(data, "data", 0, "b64_json"))


class LiveInpaint(_LiveBase):
    capability = "inpaint"

    def inpaint(self, image, mask, prompt):
        import base64

        data = self._post(
            {
                "model": self.config.model,
                "prompt": prompt,
                "image": base64.b64encode(image).decode("ascii"),
                "mask": base64.b64encode(mask).decode("ascii"),
                "response_format": "b64_json",
            }
        )
        return base64.b64decode(self._extract(data, "data", 0, "b64_json"))


class LiveCaptioner(_LiveBase):
    capability = "caption"

    def caption(self, image):
        import base64

        data = self._post(
            {"model": self.config.model, "image": base64.b64encode(image).decode("ascii")}
        )
        return self._extract(data, "caption")


class LiveDetector(_LiveBase):
    capability = "detect"

    def detect(self, image):
        import base64

        data = self._post(
            {"model": self.config.model, "image": base64.b64encode(image).decode("ascii")}
        )
        return list(self._extract(data, "objects"))


class LiveClassifier(_LiveBase):
    capability = "classify"

    def classify(self, text, labels):
        data = self._post(
            {"model": self.config.model, "text": text, "labels": list(labels)}
        )
        pairs = self._extract(data, "labels")
        return [(p["label"], float(p["score"])) for p in pairs]


_LIVE = {
    "chat": LiveChat,
    "image_gen": LiveImageGen,
    "inpaint": LiveInpaint,
    "caption": LiveCaptioner,
    "detect": LiveDetector,
    "classify": LiveClassifier,
}


@dataclass
class ProviderSuite:
    chat: object
    image_gen: object
    inpaint: object
    caption: object
    detect: object
    classify: object
    cache: dict = field(default_factory=dict)
    cache_enabled: bool = False

    @classmethod
    def mock(cls, seed=0):
        return cls(
            chat=MockChat(seed),
            image_gen=MockImageGen(seed),
            inpaint=MockInpaint(seed),
            caption=MockCaptioner(seed),
            detect=MockDetector(seed),
            classify=MockClassifier(seed),
        )

    @classmethod
    def from_env(cls, environ=None, seed=0):
        """Mock everywhere except capabilities explicitly set to live."""
        mock = cls.mock(seed)
        kwargs = {}
        for cap in CAPABILITIES:
            cfg = config_from_env(cap, environ)
            if cfg.mode == "live":
                cfg.require_live(cap)
                kwargs[cap] = _LIVE[cap](cfg)
            else:
                kwargs[cap] = getattr(mock, cap)
        return cls(**kwargs)

    def call(self, capability, *args, **kwargs):
        """Uniform entry point; optional caching keyed by request hash."""
        if capability not in CAPABILITIES:
            raise ValueError(f"unknown capability: {capability}")
        provider = getattr(self, capability)
        method = {
            "chat": "complete",
            "image_gen": "generate",
            "inpaint": "inpaint",
            "caption": "caption",
            "detect": "detect",
            "classify": "classify",
        }[capability]
        if self.cache_enabled:
            key = _digest(capability, repr(args), repr(sorted(kwargs.items())))
            if key in self.cache:
                return self.cache[key]
            result = getattr(provider, method)(*args, **kwargs)
            self.cache[key] = result
            return result
        return getattr(provider, method)(*args, **kwargs)
