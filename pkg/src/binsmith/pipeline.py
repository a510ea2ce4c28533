"""Offline semantic-lookup pipeline.

Trains a topic model over a corpus of binned field names, aligns topics to
named bin concepts by summed topic-word probability, then folds survey
questions into the model to harvest their declared bin breaks per concept.
The product is a persistable lookup table mapping concepts to bin options.
"""

from __future__ import annotations

import json
import random
import re
import warnings
import zlib
from dataclasses import dataclass, field, replace
from decimal import Decimal
from importlib import resources

from .core import as_decimal, canonical_json, decimal_to_number

DEFAULT_ALPHA = 0.1
DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000
DEFAULT_THRESHOLD = 0.06
DEFAULT_TOP_FIELDS = 100
FOLD_IN_SWEEPS = 25

TABLE_VERSION = "1"

_CAMEL_RE = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")
_WORD_RE = re.compile(r"[a-z0-9]+")


def _load_stopwords() -> frozenset[str]:
    text = resources.files("binsmith.data").joinpath("stopwords.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


STOPWORDS = _load_stopwords()


def _words(text: str) -> list[str]:
    spaced = _CAMEL_RE.sub(" ", text)
    return _WORD_RE.findall(spaced.lower())


def term_token(term: str) -> str:
    """Canonical single-token form of a (possibly multiword) concept term."""
    return "_".join(_words(term))


def tokenize(text: str, phrases: tuple[str, ...] = ()) -> list[str]:
    """Lowercase, split camelCase and punctuation, drop stop words.

    Multiword entries from ``phrases`` ("base salary") are fused into single
    underscore-joined tokens when their words appear consecutively; longer
    phrases win.
    """
    words = _words(text)
    phrase_seqs = sorted(
        {tuple(_words(p)) for p in phrases if len(_words(p)) > 1},
        key=len,
        reverse=True,
    )
    tokens: list[str] = []
    i = 0
    while i < len(words):
        fused = None
        for seq in phrase_seqs:
            if tuple(words[i : i + len(seq)]) == seq:
                fused = "_".join(seq)
                i += len(seq)
                break
        if fused is not None:
            tokens.append(fused)
            continue
        w = words[i]
        i += 1
        if w not in STOPWORDS:
            tokens.append(w)
    return tokens


@dataclass(frozen=True)
class Corpus:
    """Tokenized documents plus the vocabulary in first-appearance order."""

    documents: tuple[tuple[str, tuple[str, ...]], ...]
    vocabulary: tuple[str, ...]

    def __post_init__(self):
        vocab = set(self.vocabulary)
        for doc_id, tokens in self.documents:
            for t in tokens:
                if t not in vocab:
                    raise ValueError(f"token {t!r} in {doc_id!r} missing from vocabulary")
                if not t or t != t.lower():
                    raise ValueError(f"token {t!r} must be lowercase and non-empty")


def build_corpus(documents: list[tuple[str, list[str]]]) -> Corpus:
    vocab: list[str] = []
    seen: set[str] = set()
    docs = []
    for doc_id, tokens in documents:
        for t in tokens:
            if t not in seen:
                seen.add(t)
                vocab.append(t)
        docs.append((doc_id, tuple(tokens)))
    return Corpus(documents=tuple(docs), vocabulary=tuple(vocab))


@dataclass(frozen=True)
class TopicModel:
    """Topic-word probability table p(w|t) with its training settings."""

    K: int
    phi: tuple[tuple[float, ...], ...]
    vocabulary: tuple[str, ...]
    alpha: float
    beta: float
    seed: int
    iterations: int

    def __post_init__(self):
        for t, row in enumerate(self.phi):
            total = sum(row)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"phi row {t} sums to {total}, not 1")
            if any(p <= 0 for p in row):
                raise ValueError(f"phi row {t} has non-positive entries")

    def word_index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.vocabulary)}

    def p(self, word: str, topic: int) -> float:
        """p(word | topic); 0 for out-of-vocabulary words."""
        try:
            return self.phi[topic][self.vocabulary.index(word)]
        except ValueError:
            return 0.0

    def top_words(self, topic: int, n: int = 8) -> list[tuple[str, float]]:
        row = self.phi[topic]
        order = sorted(range(len(row)), key=lambda i: (-row[i], self.vocabulary[i]))
        return [(self.vocabulary[i], row[i]) for i in order[:n]]


def train_lda(corpus: Corpus, K: int, iterations: int = DEFAULT_ITERATIONS,
              seed: int = 0, alpha: float = DEFAULT_ALPHA,
              beta: float = DEFAULT_BETA) -> TopicModel:
    """Collapsed Gibbs sampling over the corpus.

    Runs ``iterations`` full sweeps with a seeded deterministic RNG, then
    reads phi off the final counts as (n_tw + beta) / (n_t + V*beta).
    Identical inputs and seed give bit-identical phi.
    """
    if K < 1:
        raise ValueError(f"need K >= 1, got {K}")
    if iterations < 1:
        raise ValueError(f"need iterations >= 1, got {iterations}")
    if not corpus.vocabulary:
        raise ValueError("empty vocabulary")
    index = {w: i for i, w in enumerate(corpus.vocabulary)}
    V = len(corpus.vocabulary)
    docs = [[index[t] for t in tokens] for _, tokens in corpus.documents]

    rng = random.Random(seed)
    n_tw = [[0] * V for _ in range(K)]
    n_t = [0] * K
    n_dk = [[0] * K for _ in docs]
    z = []
    for d, doc in enumerate(docs):
        zs = []
        for w in doc:
            k = rng.randrange(K)
            zs.append(k)
            n_tw[k][w] += 1
            n_t[k] += 1
            n_dk[d][k] += 1
        z.append(zs)

    vbeta = V * beta
    weights = [0.0] * K
    for _ in range(iterations):
        for d, doc in enumerate(docs):
            zd = z[d]
            nd = n_dk[d]
            for i, w in enumerate(doc):
                k = zd[i]
                n_tw[k][w] -= 1
                n_t[k] -= 1
                nd[k] -= 1
                total = 0.0
                for t in range(K):
                    total += (n_tw[t][w] + beta) / (n_t[t] + vbeta) * (nd[t] + alpha)
                    weights[t] = total
                r = rng.random() * total
                k = 0
                while weights[k] < r:
                    k += 1
                zd[i] = k
                n_tw[k][w] += 1
                n_t[k] += 1
                nd[k] += 1

    phi = tuple(
        tuple((n_tw[t][w] + beta) / (n_t[t] + vbeta) for w in range(V))
        for t in range(K)
    )
    return TopicModel(K=K, phi=phi, vocabulary=corpus.vocabulary,
                      alpha=alpha, beta=beta, seed=seed, iterations=iterations)


def fold_in(model: TopicModel, tokens: list[str], rng: random.Random,
            sweeps: int = FOLD_IN_SWEEPS) -> list[float] | None:
    """Infer topic proportions for new tokens with phi frozen.

    Returns None when no token is in the model vocabulary.
    """
    index = model.word_index()
    words = [index[t] for t in tokens if t in index]
    if not words:
        return None
    K = model.K
    alpha = model.alpha
    n_k = [0] * K
    z = []
    for _ in words:
        k = rng.randrange(K)
        z.append(k)
        n_k[k] += 1
    weights = [0.0] * K
    for _ in range(sweeps):
        for i, w in enumerate(words):
            n_k[z[i]] -= 1
            total = 0.0
            for t in range(K):
                total += model.phi[t][w] * (n_k[t] + alpha)
                weights[t] = total
            r = rng.random() * total
            k = 0
            while weights[k] < r:
                k += 1
            z[i] = k
            n_k[k] += 1
    denom = len(words) + K * alpha
    return [(n_k[t] + alpha) / denom for t in range(K)]


# --- Concepts and alignment --------------------------------------------------


@dataclass(frozen=True)
class BinOption:
    """One harvested break list with how many corpus questions backed it."""

    breaks: tuple[Decimal, ...]
    open_low: bool = False
    open_high: bool = False
    source_count: int = 1

    def __post_init__(self):
        breaks = tuple(as_decimal(b) for b in self.breaks)
        object.__setattr__(self, "breaks", breaks)
        if len(breaks) < 2:
            raise ValueError(f"need at least 2 breaks, got {len(breaks)}")
        for lo, hi in zip(breaks, breaks[1:]):
            if not lo < hi:
                raise ValueError(f"breaks not strictly increasing: {lo} >= {hi}")

    def key(self) -> str:
        return canonical_json({
            "breaks": [decimal_to_number(b) for b in self.breaks],
            "open_low": self.open_low,
            "open_high": self.open_high,
        })


@dataclass(frozen=True)
class BinConcept:
    """A named bin concept with its related-term list and harvested options."""

    id: str
    label: str
    related: tuple[str, ...]
    bin_options: tuple[BinOption, ...] = ()

    def __post_init__(self):
        if not self.related:
            raise ValueError(f"concept {self.id!r} needs at least one related term")

    @property
    def terms(self) -> tuple[str, ...]:
        """The concept plus its related terms: the full matching set R(c)."""
        if self.label in self.related:
            return self.related
        return (self.label,) + self.related


@dataclass(frozen=True)
class AlignmentConfig:
    a_threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        if not (0 <= self.a_threshold <= 1):
            raise ValueError(f"a_threshold must lie in [0,1], got {self.a_threshold}")


@dataclass(frozen=True)
class Alignment:
    topic: int
    concept_id: str
    score: float


def alignment_score(concept: BinConcept, topic: int, model: TopicModel) -> float:
    """Summed topic-word probability of the concept's term set.

    Terms are deduplicated after canonical tokenization; out-of-vocabulary
    terms contribute 0.
    """
    index = model.word_index()
    tokens = {term_token(t) for t in concept.terms}
    return sum(model.phi[topic][index[t]] for t in tokens if t in index)


def align(model: TopicModel, concepts: list[BinConcept],
          cfg: AlignmentConfig | None = None) -> list[Alignment]:
    """Map each topic to its best-scoring concept, dropping weak alignments.

    Every topic maps to at most one concept; score ties break toward the
    lexicographically smaller concept id.
    """
    cfg = cfg or AlignmentConfig()
    out = []
    ordered = sorted(concepts, key=lambda c: c.id)
    for t in range(model.K):
        best = None
        best_score = -1.0
        for c in ordered:
            s = alignment_score(c, t, model)
            if s > best_score:
                best, best_score = c, s
        if best is not None and best_score >= cfg.a_threshold:
            out.append(Alignment(topic=t, concept_id=best.id, score=best_score))
    return out


# --- Survey harvesting --------------------------------------------------------


@dataclass(frozen=True)
class SurveyQuestion:
    id: str
    text: str
    breaks: tuple[Decimal, ...] = ()
    open_low: bool = False
    open_high: bool = False


@dataclass(frozen=True)
class SemanticLookupTable:
    """The persisted artifact: concepts with harvested bin options."""

    concepts: tuple[BinConcept, ...]
    version: str = TABLE_VERSION
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [c.id for c in self.concepts]
        if len(set(ids)) != len(ids):
            raise ValueError("concept ids must be unique")

    def concept(self, concept_id: str) -> BinConcept:
        for c in self.concepts:
            if c.id == concept_id:
                return c
        raise KeyError(concept_id)


def harvest_breaks(survey: list[SurveyQuestion], alignments: list[Alignment],
                   model: TopicModel, concepts: list[BinConcept],
                   seed: int = 0, provenance: dict | None = None,
                   phrases: tuple[str, ...] = ()) -> SemanticLookupTable:
    """Fold each survey question into the model and bank its breaks.

    A question is soft-assigned to its dominant topic (phi frozen); if that
    topic is aligned to a concept, the question's break list becomes one of
    the concept's bin options.  Identical break lists merge with their
    source counts added; options sort by source count, then serialization.
    """
    topic_to_concept = {a.topic: a.concept_id for a in alignments}
    options: dict[str, dict[str, BinOption]] = {c.id: {} for c in concepts}
    rng = random.Random(zlib.crc32(b"harvest") ^ seed)
    for q in survey:
        if len(q.breaks) < 2:
            warnings.warn(f"survey question {q.id!r} has no numeric breaks; skipped")
            continue
        theta = fold_in(model, tokenize(q.text, phrases), rng)
        if theta is None:
            continue
        dominant = max(range(model.K), key=lambda t: (theta[t], -t))
        concept_id = topic_to_concept.get(dominant)
        if concept_id is None or concept_id not in options:
            continue
        opt = BinOption(breaks=q.breaks, open_low=q.open_low, open_high=q.open_high)
        bank = options[concept_id]
        key = opt.key()
        if key in bank:
            bank[key] = replace(bank[key], source_count=bank[key].source_count + 1)
        else:
            bank[key] = opt
    enriched = []
    for c in sorted(concepts, key=lambda c: c.id):
        opts = sorted(options[c.id].values(), key=lambda o: (-o.source_count, o.key()))
        enriched.append(replace(c, bin_options=tuple(opts)))
    return SemanticLookupTable(
        concepts=tuple(enriched),
        provenance=provenance or {},
    )


# --- Persistence ---------------------------------------------------------------


def option_to_dict(opt: BinOption) -> dict:
    return {
        "breaks": [decimal_to_number(b) for b in opt.breaks],
        "open_low": opt.open_low,
        "open_high": opt.open_high,
        "source_count": opt.source_count,
    }


def concept_to_dict(concept: BinConcept) -> dict:
    return {
        "id": concept.id,
        "label": concept.label,
        "related": list(concept.related),
        "bin_options": [option_to_dict(o) for o in concept.bin_options],
    }


def table_to_dict(table: SemanticLookupTable) -> dict:
    return {
        "version": table.version,
        "provenance": table.provenance,
        "concepts": [concept_to_dict(c) for c in table.concepts],
    }


def table_to_json(table: SemanticLookupTable) -> str:
    return canonical_json(table_to_dict(table)) + "\n"


def table_from_dict(data: dict) -> SemanticLookupTable:
    concepts = []
    for c in data.get("concepts", []):
        opts = tuple(
            BinOption(
                breaks=tuple(as_decimal(b) for b in o["breaks"]),
                open_low=bool(o.get("open_low", False)),
                open_high=bool(o.get("open_high", False)),
                source_count=int(o.get("source_count", 1)),
            )
            for o in c.get("bin_options", [])
        )
        concepts.append(BinConcept(id=c["id"], label=c["label"],
                                   related=tuple(c["related"]), bin_options=opts))
    return SemanticLookupTable(
        concepts=tuple(concepts),
        version=str(data.get("version", TABLE_VERSION)),
        provenance=dict(data.get("provenance", {})),
    )


def table_from_json(text: str) -> SemanticLookupTable:
    return table_from_dict(json.loads(text, parse_float=Decimal))


# --- Input loaders --------------------------------------------------------------


def load_concepts(text: str) -> list[BinConcept]:
    """Concept seed file: [{"id","label","related":[...]}, ...]."""
    data = json.loads(text)
    return [
        BinConcept(id=c["id"], label=c["label"], related=tuple(c["related"]))
        for c in data
    ]


def bundled_concepts() -> list[BinConcept]:
    text = resources.files("binsmith.data").joinpath("concepts.json").read_text("utf-8")
    return load_concepts(text)


def concept_phrases(concepts: list[BinConcept]) -> tuple[str, ...]:
    """Multiword concept terms, fused into single tokens during tokenization."""
    out = []
    for c in concepts:
        for term in c.terms:
            if len(_words(term)) > 1:
                out.append(term)
    return tuple(sorted(set(out)))


def load_field_corpus(text: str, phrases: tuple[str, ...] = (),
                      top: int = DEFAULT_TOP_FIELDS) -> Corpus:
    """Field-name corpus: one name per line, optional tab-separated count.

    Counts accumulate per distinct name; the ``top`` most frequent names
    (ties broken lexicographically) become one document each.
    """
    counts: dict[str, int] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            name, _, count_text = line.rpartition("\t")
            try:
                count = int(count_text)
            except ValueError:
                name, count = line, 1
        else:
            name, count = line, 1
        name = name.strip()
        counts[name] = counts.get(name, 0) + count
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top]
    documents = []
    for name, _ in ranked:
        tokens = tokenize(name, phrases)
        if tokens:
            documents.append((name, tokens))
    return build_corpus(documents)


def load_surveys(text: str) -> list[SurveyQuestion]:
    """Survey corpus: JSON lines with id, text, breaks, open_low, open_high."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line, parse_float=Decimal)
        out.append(SurveyQuestion(
            id=str(rec["id"]),
            text=str(rec["text"]),
            breaks=tuple(as_decimal(b) for b in rec.get("breaks", [])),
            open_low=bool(rec.get("open_low", False)),
            open_high=bool(rec.get("open_high", False)),
        ))
    return out


def build_lookup(concepts: list[BinConcept], field_text: str, survey_text: str,
                 k: int | None = None, iterations: int = DEFAULT_ITERATIONS,
                 seed: int = 0, threshold: float = DEFAULT_THRESHOLD,
                 top_fields: int = DEFAULT_TOP_FIELDS,
                 provenance_extra: dict | None = None,
                 ) -> tuple[SemanticLookupTable, list[Alignment], TopicModel]:
    """End-to-end offline pipeline: corpus, LDA, alignment, harvest."""
    phrases = concept_phrases(concepts)
    corpus = load_field_corpus(field_text, phrases, top=top_fields)
    surveys = load_surveys(survey_text)
    K = k if k is not None else len(concepts)
    model = train_lda(corpus, K=K, iterations=iterations, seed=seed)
    alignments = align(model, concepts, AlignmentConfig(a_threshold=threshold))
    provenance = {
        "k": K,
        "iterations": iterations,
        "seed": seed,
        "a_threshold": threshold,
        "top_fields": top_fields,
        "documents": len(corpus.documents),
        "survey_questions": len(surveys),
        "alignments": [[a.topic, a.concept_id, a.score] for a in alignments],
    }
    if provenance_extra:
        provenance.update(provenance_extra)
    table = harvest_breaks(surveys, alignments, model, concepts,
                           seed=seed, provenance=provenance, phrases=phrases)
    return table, alignments, model
