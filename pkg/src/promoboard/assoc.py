"""Directed weighted word-association graph with an imageability lexicon.

Ingests free-association counts into per-cue normalized strengths and
answers the concept-expansion queries (two-hop neighborhoods, filtered
and ranked by how concrete/imageable the associated words are) that the
semantic recommendation dimension runs on.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

DEFAULT_CONCRETENESS_MIN = 0.4
DEFAULT_IMAGEABILITY_MIN = 0.4


class MalformedRowError(ValueError):
    def __init__(self, row_number, reason):
        self.row_number = row_number
        self.reason = reason
        super().__init__(f"row {row_number}: {reason}")


@dataclass(frozen=True)
class AssociationEdge:
    cue: str
    response: str
    strength: float  # fraction of the cue's responses, in (0, 1]


@dataclass(frozen=True)
class ConceptMember:
    word: str
    hops: int  # 0, 1 or 2
    path_strength: float  # max over paths of the product of edge strengths


@dataclass(frozen=True)
class ConceptSet:
    origin: str
    members: tuple[ConceptMember, ...]
    found: bool = True

    def words(self):
        return {m.word for m in self.members}

    def strength_of(self, word):
        for m in self.members:
            if m.word == word:
                return m.path_strength
        return 0.0


@dataclass
class AssociationGraph:
    nodes: set[str] = field(default_factory=set)
    edges: dict[str, dict[str, float]] = field(default_factory=dict)  # cue -> response -> strength
    lexicon: dict[str, tuple[float, float]] = field(default_factory=dict)  # word -> (concreteness, imageability)

    def out_edges(self, cue):
        return self.edges.get(cue, {})

    def scores(self, word):
        return self.lexicon.get(word, (0.0, 0.0))


def _normalize_token(tok):
    return tok.strip().lower()


def ingest_associations(rows, reverse=False) -> AssociationGraph:
    """Build the graph from (cue, response, count) rows.

    Duplicate pairs are summed; strengths are normalized per cue so each
    cue's outgoing strengths sum to 1. ``reverse`` flips the stored edge
    direction (response -> cue).
    """
    counts: dict[str, dict[str, int]] = {}
    for i, row in enumerate(rows, start=1):
        try:
            cue, response, count = row
        except (TypeError, ValueError):
            raise MalformedRowError(i, f"expected (cue, response, count), got {row!r}")
        cue, response = _normalize_token(str(cue)), _normalize_token(str(response))
        if not cue or not response:
            raise MalformedRowError(i, "empty cue or response")
        try:
            count = int(count)
        except (TypeError, ValueError):
            raise MalformedRowError(i, f"count is not an integer: {count!r}")
        if count <= 0:
            raise MalformedRowError(i, f"count must be positive, got {count}")
        if reverse:
            cue, response = response, cue
        counts.setdefault(cue, {})
        counts[cue][response] = counts[cue].get(response, 0) + count

    graph = AssociationGraph()
    for cue, responses in counts.items():
        total = sum(responses.values())
        graph.nodes.add(cue)
        graph.edges[cue] = {}
        for response, count in responses.items():
            graph.nodes.add(response)
            graph.edges[cue][response] = count / total
    return graph


def load_associations_csv(path, reverse=False) -> AssociationGraph:
    """Read a UTF-8 ``cue,response,count`` CSV (header optional)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = []
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if not rows and row and row[0].strip().lower() == "cue":
                continue
            rows.append(tuple(row[:3]))
    return ingest_associations(rows, reverse=reverse)


def load_lexicon_csv(graph, path):
    """Attach ``word,concreteness,imageability`` scores to the graph."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if i == 1 and row[0].strip().lower() == "word":
                continue
            word = _normalize_token(row[0])
            try:
                conc, imag = float(row[1]), float(row[2])
            except (IndexError, ValueError):
                raise MalformedRowError(i, f"bad lexicon row: {row!r}")
            if not (0.0 <= conc <= 1.0 and 0.0 <= imag <= 1.0):
                raise MalformedRowError(i, "scores must be in [0, 1]")
            graph.lexicon[word] = (conc, imag)
    return graph


def within_two_hops(graph, word) -> ConceptSet:
    """All nodes reachable in at most two directed hops from word.

    Path strength of a member is the max over paths of the product of
    edge strengths; hop distance is the minimal one. Unknown words give
    an empty set flagged not-found rather than an error, since user
    topics are often out of vocabulary.
    """
    word = _normalize_token(word)
    if word not in graph.nodes:
        return ConceptSet(origin=word, members=(), found=False)

    strength = {word: 1.0}
    hops = {word: 0}
    for mid, s1 in graph.out_edges(word).items():
        if s1 > strength.get(mid, 0.0):
            strength[mid] = s1
        hops.setdefault(mid, 1)
    for mid, s1 in graph.out_edges(word).items():
        for far, s2 in graph.out_edges(mid).items():
            s = s1 * s2
            if s > strength.get(far, 0.0):
                strength[far] = s
            hops.setdefault(far, 2)
    strength[word] = 1.0
    hops[word] = 0

    members = tuple(
        ConceptMember(w, hops[w], strength[w]) for w in sorted(strength)
    )
    return ConceptSet(origin=word, members=members)


def imageable_concepts_scored(
    graph,
    word,
    concreteness_min=DEFAULT_CONCRETENESS_MIN,
    imageability_min=DEFAULT_IMAGEABILITY_MIN,
):
    """(word, path_strength) pairs for two-hop concepts clearing both
    lexicon thresholds, ranked by strength descending then word."""
    concepts = within_two_hops(graph, word)
    qualified = [
        (m.word, m.path_strength)
        for m in concepts.members
        if graph.scores(m.word)[0] >= concreteness_min
        and graph.scores(m.word)[1] >= imageability_min
    ]
    qualified.sort(key=lambda ws: (-ws[1], ws[0]))
    return qualified


def imageable_concepts(
    graph,
    word,
    k,
    concreteness_min=DEFAULT_CONCRETENESS_MIN,
    imageability_min=DEFAULT_IMAGEABILITY_MIN,
):
    """Top-k two-hop concepts that clear both lexicon thresholds.

    Ranked by path strength descending, ties broken lexicographically.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scored = imageable_concepts_scored(graph, word, concreteness_min, imageability_min)
    return [w for w, _ in scored[:k]]
