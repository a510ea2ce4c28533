"""Runtime semantic matching: field name -> concept -> closest bin option."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from .core import BinScheme, LabelFormat, Provenance, label_bins
from .ingest import SeriesProfile
from .pipeline import BinConcept, BinOption, SemanticLookupTable, _words

DEFAULT_MATCH_THRESHOLD = 0.85
# Reject matches whose selected option overlaps less than this share of the
# data range; an "age" field holding milliseconds should not get age brackets.
MIN_COVERAGE = Decimal("0.10")

IRREGULAR_SINGULARS = {
    "children": "child",
    "men": "man",
    "women": "woman",
    "people": "person",
    "feet": "foot",
    "teeth": "tooth",
    "geese": "goose",
    "mice": "mouse",
    "lives": "life",
    "wives": "wife",
    "halves": "half",
    "leaves": "leaf",
    "indices": "index",
}

# Already-singular shapes the -s suffix rule must leave alone.
UNINFLECTED = {
    "series", "species", "means", "news", "physics", "economics",
    "statistics", "analysis", "basis", "status", "census",
}


def lemmatize(token: str) -> str:
    """Rule-based singularization of one lowercase token; idempotent."""
    if token in IRREGULAR_SINGULARS:
        return IRREGULAR_SINGULARS[token]
    if token in UNINFLECTED:
        return token
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    for suffix in ("sses", "shes", "ches", "xes", "zes"):
        if token.endswith(suffix):
            return token[:-2]
    if token.endswith("s") and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    return token


def _lemma_tokens(text: str) -> list[str]:
    from .pipeline import STOPWORDS

    return [lemmatize(w) for w in _words(text) if w not in STOPWORDS]


def _edit_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def _similarity(field_tokens: list[str], term_tokens: list[str]) -> float:
    """Blend of normalized edit distance and token containment, max of both.

    Containment asks whether all of the term's tokens appear among the field
    tokens, so decorated names ("Base Pay (USD)") still hit short terms.
    """
    if not field_tokens or not term_tokens:
        return 0.0
    a = " ".join(field_tokens)
    b = " ".join(term_tokens)
    edit_sim = 1.0 - _edit_distance(a, b) / max(len(a), len(b))
    overlap = len(set(field_tokens) & set(term_tokens)) / len(set(term_tokens))
    return max(edit_sim, overlap)


@dataclass(frozen=True)
class ConceptMatch:
    concept_id: str
    matched_term: str
    similarity: float


def match_concept(field_name: str, table: SemanticLookupTable,
                  threshold: float = DEFAULT_MATCH_THRESHOLD) -> ConceptMatch | None:
    """Best concept for a field name, or None below the match threshold.

    Case, punctuation and camelCase styling are normalized away; tokens are
    lemmatized on both sides.  Score ties break toward the lexicographically
    smaller concept id.
    """
    field_tokens = _lemma_tokens(field_name)
    best: ConceptMatch | None = None
    for concept in sorted(table.concepts, key=lambda c: c.id):
        for term in concept.terms:
            sim = _similarity(field_tokens, _lemma_tokens(term))
            if sim >= threshold and (best is None or sim > best.similarity):
                best = ConceptMatch(concept_id=concept.id, matched_term=term, similarity=sim)
    return best


def _bounds_distance(option: BinOption, profile: SeriesProfile) -> Decimal:
    eps = profile.grain.step
    span = profile.max - profile.min + eps
    return (abs(option.breaks[0] - profile.min) + abs(option.breaks[-1] - profile.max)) / span


def select_bin_option(concept: BinConcept, profile: SeriesProfile) -> BinOption:
    """Bin option whose outer breaks sit closest to the data bounds.

    Distance is |first - min| + |last - max| over the data span; ties prefer
    higher source counts, then the smaller serialization.
    """
    if not concept.bin_options:
        raise ValueError(f"concept {concept.id!r} has no bin options")
    return min(
        concept.bin_options,
        key=lambda o: (_bounds_distance(o, profile), -o.source_count, o.key()),
    )


def _coverage(option: BinOption, profile: SeriesProfile) -> Decimal:
    eps = profile.grain.step
    lo = max(option.breaks[0], profile.min)
    hi = min(option.breaks[-1], profile.max)
    overlap = max(hi - lo, Decimal(0))
    return overlap / (profile.max - profile.min + eps)


def semantic_bins(field_name: str, profile: SeriesProfile,
                  table: SemanticLookupTable,
                  threshold: float = DEFAULT_MATCH_THRESHOLD) -> BinScheme | None:
    """Full semantic route: match the field, pick the closest option.

    Returns None (callers fall back to default bins) when no concept
    matches, the concept has no options, or no option overlaps at least 10%
    of the data range.
    """
    match = match_concept(field_name, table, threshold)
    if match is None:
        return None
    concept = table.concept(match.concept_id)
    if not concept.bin_options:
        return None
    viable = tuple(o for o in concept.bin_options if _coverage(o, profile) >= MIN_COVERAGE)
    if not viable:
        return None
    option = select_bin_option(
        BinConcept(id=concept.id, label=concept.label, related=concept.related,
                   bin_options=viable),
        profile,
    )
    scheme = BinScheme(
        edges=option.breaks,
        open_low=option.open_low,
        open_high=option.open_high,
        provenance=Provenance.semantic(concept.id),
    )
    return label_bins(scheme, LabelFormat(profile.grain))
