"""Lexicon- and rule-based feature extractors for the five HCRS dimensions.

Every feature is normalized to [0,1]. Cue counts are converted to rates
per 100 words and squashed with a saturating cap ``x_ref`` (default 5
hits per 100 words) so that the hybrid combination stays bounded. All
extractors are pure functions of (document, resource pack), so repeated
runs are bit-identical.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .metrics import DegenerateInputError, fkgl
from .resources import Gazetteer, LexiconPack, ResourcePack
from .textcore import Document, Sentence

__all__ = [
    "ToneFeatures",
    "CultureFeatures",
    "ActionFeatures",
    "ClarityFeatures",
    "TrustFeatures",
    "FeatureBundle",
    "squash",
    "tone_features",
    "culture_features",
    "action_features",
    "clarity_features",
    "trust_features",
    "extract_all",
    "DIMENSIONS",
]

DIMENSIONS = ("clarity", "trustworthiness", "tone", "culture", "actionability")

# function words excluded from the sentence-overlap cohesion proxy
_STOPWORDS = frozenset(
    """a an the and or but if then of to in on at for with without by from as is
    are was were be been being it its this that these those you your we our they
    their he she his her not no do does did done have has had will would can
    could should must may might shall""".split()
)

# discourse connectives for the cohesion density proxy
_CONNECTIVES = frozenset(
    """because therefore however also moreover furthermore so thus since
    although though meanwhile additionally consequently instead otherwise
    first then next finally""".split()
)

# unit words recognized after a number as a "quantity with unit" cue
_UNITS = frozenset(
    """mg ml g l tablet tablets pill pills drop drops dose doses day days hour
    hours minute minutes week weeks time times cup cups spoon spoons teaspoon
    teaspoons ounce ounces""".split()
)

_NUMBER_WORDS = frozenset(
    "one two three four five six seven eight nine ten half".split()
)

_CITATION = re.compile(r"\[\d+\]|\(\d{4}\)")


def squash(rate: float, x_ref: float) -> float:
    """Map a non-negative rate to [0,1] with saturation at ``x_ref``."""
    if x_ref <= 0:
        raise ValueError("x_ref must be positive")
    return min(1.0, rate / x_ref)


def _phrase_hits(words: list[str], phrases: frozenset[tuple[str, ...]]) -> int:
    """Occurrences of any phrase over a normalized word sequence."""
    hits = 0
    for i in range(len(words)):
        for p in phrases:
            if words[i : i + len(p)] == list(p):
                hits += 1
    return hits


def _rate(hits: int, words: int) -> float:
    return 100.0 * hits / words if words else 0.0


def _require_nonempty(doc: Document) -> None:
    if doc.stats.words < 1:
        raise DegenerateInputError("degenerate input: empty document")


@dataclass(frozen=True)
class ToneFeatures:
    politeness: float
    sentiment: float
    empathy: float
    intensity_profile: dict[str, float]

    def vector(self) -> list[float]:
        return [self.politeness, self.sentiment, self.empathy]


@dataclass(frozen=True)
class CultureFeatures:
    entity_match: float
    idiom_match: float
    embedding_similarity: float
    flags: frozenset[str] = frozenset()

    def vector(self) -> list[float]:
        return [self.entity_match, self.idiom_match, self.embedding_similarity]


@dataclass(frozen=True)
class ActionFeatures:
    directive: float
    procedural: float
    action_entities: float

    def vector(self) -> list[float]:
        return [self.directive, self.procedural, self.action_entities]


@dataclass(frozen=True)
class ClarityFeatures:
    readability_norm: float
    jargon_penalty: float
    cohesion: float
    flags: frozenset[str] = frozenset()

    def vector(self) -> list[float]:
        return [self.readability_norm, self.jargon_penalty, self.cohesion]


@dataclass(frozen=True)
class TrustFeatures:
    attribution: float
    institutional: float
    transparency: float
    authority: float

    def vector(self) -> list[float]:
        return [self.attribution, self.institutional, self.transparency, self.authority]


def _is_directive(sentence: Sentence, lexicons: LexiconPack) -> bool:
    words = sentence.words()
    if not words:
        return False
    if (words[0],) in lexicons.phrases("imperative_verbs"):
        return True
    # second-person modal: "you should ...", "you need to ..."
    modals = lexicons.phrases("modals_directive")
    for i, w in enumerate(words[:-1]):
        if w == "you":
            tail = words[i + 1 :]
            if any(tail[: len(m)] == list(m) for m in modals):
                return True
    return False


def tone_features(doc: Document, lexicons: LexiconPack, x_ref: float = 5.0) -> ToneFeatures:
    """Politeness, sentiment and empathy cues plus an intensity profile.

    Politeness is the squashed hedge+mitigator rate minus the fraction of
    sentences that are bare imperatives (imperative-initial with no
    softening cue in the sentence), clipped to [0,1]. Sentiment maps
    (pos-neg)/(pos+neg+1) affinely to [0,1] so affect-free text sits at 0.5.
    """
    _require_nonempty(doc)
    words = doc.words()
    n_words = len(words)
    hedgeset = lexicons.phrases("hedges") | lexicons.phrases("mitigators")
    hedge_rate = _rate(_phrase_hits(words, hedgeset), n_words)
    bare = 0
    for s in doc.sentences:
        sw = s.words()
        if not sw:
            continue
        if (sw[0],) in lexicons.phrases("imperative_verbs") and not _phrase_hits(
            sw, hedgeset
        ):
            bare += 1
    penalty = bare / doc.stats.sentences
    politeness = min(1.0, max(0.0, squash(hedge_rate, x_ref) - penalty))

    pos = _phrase_hits(words, lexicons.phrases("positive_terms"))
    neg = _phrase_hits(words, lexicons.phrases("negative_terms"))
    sentiment = ((pos - neg) / (pos + neg + 1) + 1.0) / 2.0

    empathy = squash(_rate(_phrase_hits(words, lexicons.phrases("empathy_terms")), n_words), x_ref)

    profile = {
        cat: _rate(_phrase_hits(words, lexicons.phrases(cat)), n_words)
        for cat in ("intensifiers", "modals_directive", "evidentials", "npi_terms")
    }
    return ToneFeatures(politeness, sentiment, empathy, profile)


def action_features(doc: Document, lexicons: LexiconPack, gazetteer: Gazetteer | None = None, x_ref: float = 5.0) -> ActionFeatures:
    """Directive, procedural and action-entity coverage scores."""
    _require_nonempty(doc)
    words = doc.words()
    n_words = len(words)

    directive_sents = [s for s in doc.sentences if _is_directive(s, lexicons)]
    d_a = len(directive_sents) / doc.stats.sentences

    cue_hits = _phrase_hits(words, lexicons.phrases("procedural_cues"))
    tokens = doc.tokens()
    for i in range(len(tokens) - 1):
        cur, nxt = tokens[i], tokens[i + 1]
        is_quantity = any(ch.isdigit() for ch in cur.surface) or cur.normalized in _NUMBER_WORDS
        if is_quantity and nxt.normalized in _UNITS:
            cue_hits += 1
    p_act = squash(_rate(cue_hits, n_words), x_ref)

    if directive_sents:
        temporal = lexicons.phrases("temporal_cues")
        agent = gazetteer.surfaces("person-title") if gazetteer else {}
        places = dict(gazetteer.surfaces("place")) if gazetteer else {}
        if gazetteer:
            places.update(gazetteer.surfaces("organization"))
        grounded = 0
        for s in directive_sents:
            sw = s.words()
            if (
                _phrase_hits(sw, temporal)
                or _phrase_hits(sw, frozenset(agent))
                or _phrase_hits(sw, frozenset(places))
            ):
                grounded += 1
        q_a = grounded / len(directive_sents)
    else:
        q_a = 0.0
    return ActionFeatures(d_a, p_act, q_a)


def _gazetteer_retention(
    source_words: list[str],
    output_words: list[str],
    phrases: frozenset[tuple[str, ...]],
    flag: str,
    flags: set[str],
) -> float:
    in_source = {p for p in phrases if _phrase_hits(source_words, frozenset([p]))}
    if not in_source:
        flags.add(flag)
        return 1.0
    retained = {p for p in in_source if _phrase_hits(output_words, frozenset([p]))}
    return len(retained) / len(in_source)


def culture_features(
    source_doc: Document,
    output_doc: Document,
    gazetteer: Gazetteer,
    lexicons: LexiconPack,
    embeddings,
) -> CultureFeatures:
    """Entity and idiom retention plus embedding similarity of the pair.

    Retention scores with an empty source set are vacuously 1 and carry a
    flag rather than silently passing. Cosine similarity of mean word
    vectors is mapped from [-1,1] to [0,1]; a fully out-of-vocabulary
    document gives 0.5 with a flag.
    """
    _require_nonempty(source_doc)
    _require_nonempty(output_doc)
    flags: set[str] = set()
    src_words = source_doc.words()
    out_words = output_doc.words()

    entity_phrases = frozenset(gazetteer.all_phrases())
    e_cul = _gazetteer_retention(src_words, out_words, entity_phrases, "vacuous_entities", flags)
    i_a = _gazetteer_retention(
        src_words, out_words, lexicons.phrases("idioms"), "vacuous_idioms", flags
    )

    def mean_vec(ws: list[str]) -> np.ndarray | None:
        vecs = [embeddings.get(w) for w in ws]
        vecs = [v for v in vecs if v is not None]
        if not vecs:
            return None
        return np.mean(vecs, axis=0)

    sv, ov = mean_vec(src_words), mean_vec(out_words)
    if sv is None or ov is None or not np.linalg.norm(sv) or not np.linalg.norm(ov):
        flags.add("embedding_oov")
        m_a = 0.5
    else:
        cos = float(np.dot(sv, ov) / (np.linalg.norm(sv) * np.linalg.norm(ov)))
        cos = max(-1.0, min(1.0, cos))
        m_a = (cos + 1.0) / 2.0
    return CultureFeatures(e_cul, i_a, m_a, frozenset(flags))


def clarity_features(doc: Document, lexicons: LexiconPack, x_ref: float = 5.0) -> ClarityFeatures:
    """Normalized readability, jargon penalty and two cohesion proxies."""
    _require_nonempty(doc)
    words = doc.words()
    n_words = len(words)

    grade = fkgl(doc).value
    readability_norm = max(0.0, min(1.0, (18.0 - grade) / 18.0))

    jargon_penalty = 1.0 - squash(
        _rate(_phrase_hits(words, lexicons.phrases("jargon_terms")), n_words), x_ref
    )

    flags: set[str] = set()
    connective_density = squash(
        _rate(sum(1 for w in words if w in _CONNECTIVES), n_words), x_ref
    )
    if doc.stats.sentences < 2:
        flags.add("single_sentence")
        cohesion = connective_density
    else:
        overlaps = []
        for a, b in zip(doc.sentences, doc.sentences[1:]):
            ca = {w for w in a.words() if w not in _STOPWORDS}
            cb = {w for w in b.words() if w not in _STOPWORDS}
            union = ca | cb
            overlaps.append(len(ca & cb) / len(union) if union else 1.0)
        cohesion = (sum(overlaps) / len(overlaps) + connective_density) / 2.0
    return ClarityFeatures(readability_norm, jargon_penalty, cohesion, frozenset(flags))


def trust_features(
    doc: Document, lexicons: LexiconPack, gazetteer: Gazetteer, x_ref: float = 5.0
) -> TrustFeatures:
    """Attribution, institutional, transparency and authority cue rates."""
    _require_nonempty(doc)
    words = doc.words()
    n_words = len(words)

    attribution_hits = _phrase_hits(words, lexicons.phrases("trust_attribution_cues"))
    attribution_hits += len(_CITATION.findall(doc.raw))
    attribution = squash(_rate(attribution_hits, n_words), x_ref)

    institutional = squash(
        _rate(_phrase_hits(words, lexicons.phrases("institutional_terms")), n_words), x_ref
    )
    transparency = squash(
        _rate(_phrase_hits(words, lexicons.phrases("transparency_cues")), n_words), x_ref
    )
    org_phrases = frozenset(gazetteer.surfaces("organization"))
    authority = squash(_rate(_phrase_hits(words, org_phrases), n_words), x_ref)
    return TrustFeatures(attribution, institutional, transparency, authority)


@dataclass(frozen=True)
class FeatureBundle:
    """All automatic features for one (source, output) pair."""

    tone: ToneFeatures
    culture: CultureFeatures
    action: ActionFeatures
    clarity: ClarityFeatures
    trust: TrustFeatures

    def vector(self, dimension: str) -> list[float]:
        group = {
            "tone": self.tone,
            "culture": self.culture,
            "actionability": self.action,
            "clarity": self.clarity,
            "trustworthiness": self.trust,
        }[dimension]
        return group.vector()

    @property
    def flags(self) -> frozenset[str]:
        return self.culture.flags | self.clarity.flags


def extract_all(source_doc: Document, output_doc: Document, pack: ResourcePack) -> FeatureBundle:
    """Run every extractor on an evaluation pair with one resource pack."""
    x = pack.x_ref
    return FeatureBundle(
        tone=tone_features(output_doc, pack.lexicons, x),
        culture=culture_features(
            source_doc, output_doc, pack.gazetteer, pack.lexicons, pack.embeddings
        ),
        action=action_features(output_doc, pack.lexicons, pack.gazetteer, x),
        clarity=clarity_features(output_doc, pack.lexicons, x),
        trust=trust_features(output_doc, pack.lexicons, pack.gazetteer, x),
    )
