"""Classic automatic metrics: FKGL, SMOG, Coleman-Liau, BLEU and SARI.

Grade indices use the published constants. BLEU is clipped n-gram
precision with the closest-reference brevity penalty and no smoothing by
default. SARI averages keep/add/delete operation scores over n = 1..4
with F-measure for keep/add and precision only for delete; a component
whose proposal and gold sets are both empty scores 1.0, and an empty
proposal against a non-empty gold scores 0. That empty-set convention is
normative here because published implementations disagree.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .textcore import Document, ngrams

__all__ = [
    "DegenerateInputError",
    "GradeLevel",
    "BleuBreakdown",
    "SariBreakdown",
    "fkgl",
    "smog",
    "coleman_liau",
    "bleu",
    "bleu_corpus",
    "sari",
]


class DegenerateInputError(ValueError):
    """Raised for documents with no words or no sentences."""


@dataclass(frozen=True)
class GradeLevel:
    value: float
    index_name: str


@dataclass(frozen=True)
class BleuBreakdown:
    n_max: int
    p_n: tuple[float, ...]
    w_n: tuple[float, ...]
    bp: float
    score: float


@dataclass(frozen=True)
class SariBreakdown:
    f_add: float
    f_keep: float
    f_del: float
    score: float
    per_n: dict[int, dict[str, float]] = field(default_factory=dict)


def _check(doc: Document) -> None:
    if doc.stats.words < 1 or doc.stats.sentences < 1:
        raise DegenerateInputError("degenerate input: need >=1 word and >=1 sentence")


def fkgl(doc: Document) -> GradeLevel:
    """Flesch-Kincaid grade: 0.39 W/S + 11.8 Syll/W - 15.59."""
    _check(doc)
    s = doc.stats
    value = 0.39 * s.words / s.sentences + 11.8 * s.syllables / s.words - 15.59
    return GradeLevel(value, "FKGL")


def smog(doc: Document) -> GradeLevel:
    """SMOG grade: 1.0430 sqrt(polysyllables * 30 / sentences) + 3.1291."""
    _check(doc)
    s = doc.stats
    value = 1.0430 * math.sqrt(s.polysyllables * 30 / s.sentences) + 3.1291
    return GradeLevel(value, "SMOG")


def coleman_liau(doc: Document) -> GradeLevel:
    """Coleman-Liau index: 0.0588 L - 0.296 S - 15.8.

    L = letters per 100 words, S = sentences per 100 words; letters are
    counted over word tokens only (see textcore.analyze).
    """
    _check(doc)
    s = doc.stats
    l = 100.0 * s.letters / s.words
    sent = 100.0 * s.sentences / s.words
    return GradeLevel(0.0588 * l - 0.296 * sent - 15.8, "CLI")


def _bleu_from_counts(
    matched: list[int],
    totals: list[int],
    cand_len: int,
    ref_len: int,
    n_max: int,
    weights: Sequence[float] | None,
    smoothing: bool,
) -> BleuBreakdown:
    if cand_len == 0:
        return BleuBreakdown(n_max, (), (), 0.0, 0.0)
    # orders the candidate is too short to populate are dropped, so that
    # an exact copy of a short reference still scores 1.0
    eff = 0
    for i, t in enumerate(totals[:n_max]):
        if t > 0:
            eff = i + 1
    if eff == 0:
        return BleuBreakdown(n_max, (), (), 0.0, 0.0)
    if weights is None:
        w = tuple(1.0 / eff for _ in range(eff))
    else:
        if len(weights) < eff:
            raise ValueError("need a weight per n-gram order")
        head = list(weights[:eff])
        total = sum(head)
        if total <= 0:
            raise ValueError("weights must have positive sum")
        w = tuple(x / total for x in head)
    p_n: list[float] = []
    for i in range(eff):
        m, t = matched[i], totals[i]
        if smoothing:
            p_n.append((m + 1) / (t + 1))
        else:
            p_n.append(m / t if t else 0.0)
    bp = 1.0 if cand_len > ref_len else math.exp(1 - ref_len / cand_len)
    if any(p == 0.0 for p in p_n):
        score = 0.0
    else:
        score = bp * math.exp(sum(wi * math.log(p) for wi, p in zip(w, p_n)))
    return BleuBreakdown(n_max, tuple(p_n), w, bp, score)


def _closest_ref_len(cand_len: int, ref_lens: Sequence[int]) -> int:
    # ties broken toward the shorter reference
    return min(ref_lens, key=lambda r: (abs(r - cand_len), r))


def bleu(
    candidate: Document,
    references: Sequence[Document],
    n_max: int = 4,
    weights: Sequence[float] | None = None,
    smoothing: bool = False,
) -> BleuBreakdown:
    """Sentence-level BLEU with modified (clipped) n-gram precision."""
    refs = [r for r in references if r.stats.words > 0]
    if not refs:
        raise ValueError("need at least one non-empty reference")
    cand_words = candidate.words()
    cand_len = len(cand_words)
    if cand_len == 0:
        return BleuBreakdown(n_max, (), (), 0.0, 0.0)
    eff = min(n_max, cand_len)
    matched: list[int] = []
    totals: list[int] = []
    for n in range(1, eff + 1):
        cgrams = ngrams(cand_words, n)
        clip: Counter = Counter()
        for ref in refs:
            rgrams = ngrams(ref.words(), n)
            for g, c in cgrams.items():
                clip[g] = max(clip[g], min(c, rgrams[g]))
        matched.append(sum(clip.values()))
        totals.append(sum(cgrams.values()))
    ref_len = _closest_ref_len(cand_len, [len(r.words()) for r in refs])
    return _bleu_from_counts(matched, totals, cand_len, ref_len, n_max, weights, smoothing)


def bleu_corpus(
    candidates: Sequence[Document],
    references: Sequence[Sequence[Document]],
    n_max: int = 4,
    weights: Sequence[float] | None = None,
    smoothing: bool = False,
) -> BleuBreakdown:
    """Corpus-level BLEU: counts are pooled across segments before division."""
    if len(candidates) != len(references):
        raise ValueError("one reference set per candidate required")
    matched = [0] * n_max
    totals = [0] * n_max
    cand_len = 0
    ref_len = 0
    for cand, refs in zip(candidates, references):
        refs = [r for r in refs if r.stats.words > 0]
        if not refs:
            raise ValueError("need at least one non-empty reference")
        cwords = cand.words()
        cand_len += len(cwords)
        ref_len += _closest_ref_len(len(cwords), [len(r.words()) for r in refs])
        for n in range(1, n_max + 1):
            cgrams = ngrams(cwords, n)
            clip: Counter = Counter()
            for ref in refs:
                rgrams = ngrams(ref.words(), n)
                for g, c in cgrams.items():
                    clip[g] = max(clip[g], min(c, rgrams[g]))
            matched[n - 1] += sum(clip.values())
            totals[n - 1] += sum(cgrams.values())
    return _bleu_from_counts(matched, totals, cand_len, ref_len, n_max, weights, smoothing)


def _f_measure(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _sari_n(
    src: Counter, out: Counter, refs: list[Counter], numref: int
) -> dict[str, float]:
    """keep/add/delete scores for one n-gram order."""
    rall: Counter = Counter()
    for r in refs:
        rall.update(r)
    src_rep = Counter({g: c * numref for g, c in src.items()})
    out_rep = Counter({g: c * numref for g, c in out.items()})

    # KEEP: proposal = src & out, gold = src & refs (rep-weighted)
    keep_prop = src_rep & out_rep
    keep_gold = src_rep & rall
    if not keep_prop and not keep_gold:
        keep = 1.0
    elif not keep_prop:
        keep = 0.0
    else:
        good = keep_prop & rall
        prec = sum(good[g] / keep_prop[g] for g in good) / len(keep_prop)
        rec = (
            sum(good[g] / keep_gold[g] for g in good) / len(keep_gold)
            if keep_gold
            else 0.0
        )
        keep = _f_measure(prec, rec)

    # DELETE: proposal = src - out, gold = src - refs; precision only
    del_prop = src_rep - out_rep
    del_gold = src_rep - rall
    if not del_prop and not del_gold:
        dele = 1.0
    elif not del_prop:
        dele = 0.0
    else:
        good = del_prop - rall
        dele = sum(good[g] / del_prop[g] for g in good) / len(del_prop)

    # ADD: proposal = set(out) - set(src), gold = set(refs) - set(src)
    add_prop = set(out) - set(src)
    add_gold = set(rall) - set(src)
    if not add_prop and not add_gold:
        add = 1.0
    elif not add_prop:
        add = 0.0
    else:
        good_add = add_prop & set(rall)
        prec = len(good_add) / len(add_prop)
        rec = len(good_add) / len(add_gold) if add_gold else 0.0
        add = _f_measure(prec, rec)

    return {"keep": keep, "add": add, "delete": dele}


def sari(
    source: Document,
    output: Document,
    references: Sequence[Document],
    n_max: int = 4,
) -> SariBreakdown:
    """SARI = (F_add + F_keep + F_del) / 3, averaged over n-gram orders."""
    if source.stats.words < 1:
        raise DegenerateInputError("degenerate input: empty source")
    refs = [r for r in references if r.stats.words > 0]
    if not refs:
        raise ValueError("need at least one non-empty reference")
    src_words = source.words()
    out_words = output.words()
    ref_words = [r.words() for r in refs]
    per_n: dict[int, dict[str, float]] = {}
    for n in range(1, n_max + 1):
        per_n[n] = _sari_n(
            ngrams(src_words, n),
            ngrams(out_words, n),
            [ngrams(rw, n) for rw in ref_words],
            len(refs),
        )
    f_keep = sum(per_n[n]["keep"] for n in per_n) / n_max
    f_add = sum(per_n[n]["add"] for n in per_n) / n_max
    f_del = sum(per_n[n]["delete"] for n in per_n) / n_max
    return SariBreakdown(f_add, f_keep, f_del, (f_add + f_keep + f_del) / 3, per_n)
