"""Pair association rules, next-page prediction and model persistence.

Model file layout (JSON, keys sorted, one canonical rendering per model)::

    {
      "format": "pagepredict-model",
      "version": 1,
      "catalog": [url, ...],                       # index = page id
      "config": {flag: value, ...},                # training flags, verbatim
      "level1": {"n_sessions": int, "n_transitions": int,
                 "pages": [[page, occ, occ_followed, occ_terminal,
                            sess_nonterminal, sess_terminal_only], ...]},
      "pairs": [[a, b, count], ...],               # level-2 counts
      "level1_survivors": [page, ...],
      "level2_survivors": [[a, b], ...],
      "rules": [[antecedent, consequent, support, confidence], ...]
    }

Support and confidence are written as exact fractions (``"2/3"``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Collection

from pagepredict._num import as_fraction
from pagepredict.ingest import PageCatalog, normalize_url
from pagepredict.markov import Level1Stats, PageCounts, PairStats
from pagepredict.vague import vague_level1, vague_score

MODEL_FORMAT = "pagepredict-model"
MODEL_VERSION = 1


class ModelError(ValueError):
    """A model file is unreadable, corrupted or of an unsupported version."""


@dataclass(frozen=True)
class AssociationRule:
    antecedent: int
    consequent: int
    support: Fraction
    confidence: Fraction

    def sort_key(self):
        return (self.antecedent, -self.confidence, -self.support, self.consequent)


def mine_rules(
    pairs: PairStats,
    level1: Level1Stats,
    min_support: float | Fraction = 0,
    min_confidence: float | Fraction = 0,
) -> list[AssociationRule]:
    """One rule per pair in ``pairs``, scored against the unpruned totals.

    Support divides by all transitions in the cluster and confidence by all
    onward occurrences of the antecedent, so pruning other pairs never
    inflates a survivor.
    """
    min_support, min_confidence = as_fraction(min_support), as_fraction(min_confidence)
    rules = []
    for (a, b), n in pairs.counts.items():
        rule = AssociationRule(
            a, b, Fraction(n, level1.n_transitions), Fraction(n, level1.occ_followed(a))
        )
        if rule.support >= min_support and rule.confidence >= min_confidence:
            rules.append(rule)
    rules.sort(key=AssociationRule.sort_key)
    return rules


@dataclass(frozen=True)
class PredictionModel:
    catalog: PageCatalog
    level1: Level1Stats
    pairs: PairStats
    level1_survivors: frozenset[int]
    level2_survivors: frozenset[tuple[int, int]]
    rules: tuple[AssociationRule, ...]
    config: dict[str, Any] = field(default_factory=dict)
    _next: dict[int, list[int]] = field(init=False, repr=False, compare=False)
    _popular: int | None = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "level1_survivors", frozenset(self.level1_survivors))
        object.__setattr__(self, "level2_survivors", frozenset(self.level2_survivors))
        rules = tuple(sorted(self.rules, key=AssociationRule.sort_key))
        object.__setattr__(self, "rules", rules)
        index: dict[int, list[int]] = {}
        for r in rules:
            index.setdefault(r.antecedent, []).append(r.consequent)
        object.__setattr__(self, "_next", index)
        popular = None
        if self.level1_survivors and self.level1.n_sessions:
            popular = min(
                self.level1_survivors,
                key=lambda p: (-vague_score(vague_level1(self.level1, p)), p),
            )
        object.__setattr__(self, "_popular", popular)

    @property
    def fallback_popular(self) -> bool:
        return bool(self.config.get("fallback_popular", False))

    @property
    def popular_page(self) -> int | None:
        """Level-1 survivor with the highest vague score (lowest id on ties)."""
        return self._popular

    def rules_for(self, page: int) -> list[AssociationRule]:
        return [r for r in self.rules if r.antecedent == page]

    def page_id(self, url: str) -> int | None:
        return self.catalog.id_of(normalize_url(url))


def predict_topk(
    model: PredictionModel, current: int | None, k: int, fallback: bool | None = None
) -> list[int]:
    """Top ``k`` consequents for ``current`` in canonical rule order.

    When ``current`` has no rule and fallback is on, the most popular
    surviving page is offered instead.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    nxt = model._next.get(current) if current is not None else None
    if nxt:
        return nxt[:k]
    if fallback is None:
        fallback = model.fallback_popular
    if fallback and model.popular_page is not None:
        return [model.popular_page]
    return []


def predict_next(model: PredictionModel, current: int | None, fallback: bool | None = None) -> int | None:
    """Most associated next page, or ``None`` to abstain."""
    top = predict_topk(model, current, 1, fallback)
    return top[0] if top else None


def _to_document(model: PredictionModel) -> dict[str, Any]:
    l1 = model.level1
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "catalog": model.catalog.urls,
        "config": model.config,
        "level1": {
            "n_sessions": l1.n_sessions,
            "n_transitions": l1.n_transitions,
            "pages": [[p, *l1.pages[p]] for p in sorted(l1.pages)],
        },
        "pairs": [[a, b, model.pairs.counts[a, b]] for a, b in sorted(model.pairs.counts)],
        "level1_survivors": sorted(model.level1_survivors),
        "level2_survivors": [list(k) for k in sorted(model.level2_survivors)],
        "rules": [
            [r.antecedent, r.consequent, str(r.support), str(r.confidence)] for r in model.rules
        ],
    }


def dumps_model(model: PredictionModel) -> str:
    return json.dumps(_to_document(model), indent=1, sort_keys=True, ensure_ascii=True) + "\n"


def save_model(model: PredictionModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model), encoding="utf-8")


def _check_ids(ids: Collection[int], n: int, what: str) -> None:
    for p in ids:
        if not isinstance(p, int) or not 0 <= p < n:
            raise ModelError(f"{what}: page id {p!r} outside catalog")


def loads_model(text: str) -> PredictionModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"corrupted model document: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelError("not a pagepredict model document")
    if doc.get("version") != MODEL_VERSION:
        raise ModelError(f"unsupported model version {doc.get('version')!r} (expected {MODEL_VERSION})")
    try:
        catalog = PageCatalog(doc["catalog"])
        n = len(catalog)
        l1doc = doc["level1"]
        if any(len(row) != 6 for row in l1doc["pages"]):
            raise ModelError("level-1 rows must have 6 fields")
        pages = {row[0]: PageCounts(*row[1:]) for row in l1doc["pages"]}
        level1 = Level1Stats(int(l1doc["n_sessions"]), int(l1doc["n_transitions"]), pages)
        pairs = PairStats({(a, b): c for a, b, c in doc["pairs"]})
        l1s = frozenset(doc["level1_survivors"])
        l2s = frozenset((a, b) for a, b in doc["level2_survivors"])
        rules = tuple(
            AssociationRule(a, b, Fraction(sup), Fraction(conf)) for a, b, sup, conf in doc["rules"]
        )
        config = dict(doc["config"])
    except ModelError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"corrupted model document: {exc!r}") from None

    _check_ids(pages, n, "level1")
    _check_ids(l1s, n, "level1_survivors")
    for a, b in list(pairs.counts) + list(l2s):
        _check_ids((a, b), n, "pairs")
    for r in rules:
        if (r.antecedent, r.consequent) not in l2s:
            raise ModelError(f"rule {r.antecedent}->{r.consequent} did not survive pruning")
        count = pairs.count(r.antecedent, r.consequent)
        if count == 0:
            raise ModelError(f"rule {r.antecedent}->{r.consequent} has no pair count")
        if r.support != Fraction(count, level1.n_transitions) or r.confidence != Fraction(
            count, level1.occ_followed(r.antecedent)
        ):
            raise ModelError(f"rule {r.antecedent}->{r.consequent} disagrees with stored counts")
    return PredictionModel(catalog, level1, pairs, l1s, l2s, rules, config)


def load_model(path: str | Path) -> PredictionModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ModelError(f"corrupted model document: {exc}") from None
    return loads_model(text)
