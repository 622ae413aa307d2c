"""Category distributions over suites: cross-sectional, longitudinal, replicated."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .classifier import Category, ChainClassifier
from .errors import ValidationError
from .evolution import VersionChain
from .generator import GenerationParams, TestSuite, generate_suite

CATEGORIES = tuple(Category)


@dataclass(frozen=True)
class ClassificationRecord:
    case_id: str
    origin_version: str
    target_version: str
    length: int
    category: Category

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "origin_version": self.origin_version,
            "target_version": self.target_version,
            "length": self.length,
            "category": int(self.category),
        }


@dataclass(frozen=True)
class CategoryDistribution:
    origin_version: str
    target_version: str
    length: int
    counts: tuple[float, float, float, float]
    proportions: tuple[float, float, float, float]

    @classmethod
    def from_counts(cls, origin, target, length, counts: Sequence[int]) -> "CategoryDistribution":
        total = sum(counts)
        if total <= 0:
            raise ValueError("distribution over an empty set of cases")
        return cls(origin, target, length, tuple(counts), tuple(c / total for c in counts))

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.origin_version, self.target_version, self.length)

    @property
    def total(self) -> float:
        return sum(self.counts)

    def count(self, category: Category) -> float:
        return self.counts[int(category) - 1]

    def proportion(self, category: Category) -> float:
        return self.proportions[int(category) - 1]


def aggregate(records: Iterable[ClassificationRecord]) -> list[CategoryDistribution]:
    """Order-independent: any permutation of ``records`` gives the same result."""
    tally: Counter = Counter()
    keys = set()
    for r in records:
        key = (r.origin_version, r.target_version, r.length)
        keys.add(key)
        tally[key + (int(r.category),)] += 1
    return [
        CategoryDistribution.from_counts(*key, [tally[key + (c,)] for c in range(1, 5)])
        for key in sorted(keys)
    ]


def _matrix_distributions(origin, targets, cases, matrix) -> list[CategoryDistribution]:
    lengths = [tc.length for tc in cases]
    out = []
    for k, target in targets:
        tally = Counter(zip(lengths, matrix.column(k)))
        for n in sorted(set(lengths)):
            out.append(
                CategoryDistribution.from_counts(origin, target, n, [tally[(n, c)] for c in range(1, 5)])
            )
    return out


def _suite_for(suites: Mapping[str, TestSuite], label: str) -> TestSuite:
    try:
        return suites[label]
    except KeyError:
        raise ValidationError(f"no test suite for version {label!r}") from None


def cross_sectional(
    chain: VersionChain, suites: Mapping[str, TestSuite], workers: int = 1
) -> list[CategoryDistribution]:
    """Each version's suite classified on the version right after it."""
    out = []
    labels = chain.labels
    for i in range(len(chain) - 1):
        cases = _suite_for(suites, labels[i]).cases()
        if not cases:
            continue
        matrix = ChainClassifier(chain.sub(i, i + 2)).classify(cases, 0, workers)
        out.extend(_matrix_distributions(labels[i], [(0, labels[i + 1])], cases, matrix))
    return sorted(out, key=lambda d: d.key)


def longitudinal(
    chain: VersionChain,
    suites: Mapping[str, TestSuite],
    workers: int = 1,
    all_targets: bool = False,
) -> list[CategoryDistribution]:
    """Each version's suite carried through every later version.

    By default only the final version is reported; ``all_targets`` keeps the
    distribution at every intermediate version as well.
    """
    out = []
    labels = chain.labels
    classifier = ChainClassifier(chain)
    for i in range(len(chain) - 1):
        cases = _suite_for(suites, labels[i]).cases()
        if not cases:
            continue
        matrix = classifier.classify(cases, i, workers)
        steps = list(enumerate(labels[i + 1 :]))
        targets = steps if all_targets else steps[-1:]
        out.extend(_matrix_distributions(labels[i], targets, cases, matrix))
    return sorted(out, key=lambda d: d.key)


def mean_distribution(runs: Sequence[Sequence[CategoryDistribution]]) -> list[CategoryDistribution]:
    """Arithmetic mean of counts and of proportions across runs, key by key."""
    by_key: dict[tuple, list[CategoryDistribution]] = {}
    for run in runs:
        for d in run:
            by_key.setdefault(d.key, []).append(d)
    out = []
    for key in sorted(by_key):
        ds = by_key[key]
        n = len(ds)
        counts = tuple(sum(d.counts[c] for d in ds) / n for c in range(4))
        props = tuple(sum(d.proportions[c] for d in ds) / n for c in range(4))
        out.append(CategoryDistribution(*key, counts, props))
    return out


@dataclass(frozen=True)
class ReplicationSet:
    seeds: tuple[int, ...]
    per_seed: tuple[tuple[CategoryDistribution, ...], ...]
    mean: tuple[CategoryDistribution, ...]


def generate_chain_suites(
    chain: VersionChain, params: GenerationParams, seed: int | None
) -> dict[str, TestSuite]:
    """One suite per non-final version of the chain."""
    return {
        chain.models[i].version_label: generate_suite(chain.efgs[i], params, seed)
        for i in range(len(chain) - 1)
    }


def replicate(
    chain: VersionChain,
    params: GenerationParams,
    seeds: Sequence[int],
    mode: str = "cross",
    workers: int = 1,
) -> ReplicationSet:
    if not seeds:
        raise ValueError("replicate needs at least one seed")
    if mode not in ("cross", "long"):
        raise ValueError(f"unknown mode {mode!r}")
    analyse = cross_sectional if mode == "cross" else longitudinal
    runs = []
    for seed in seeds:
        suites = generate_chain_suites(chain, params, seed)
        runs.append(tuple(analyse(chain, suites, workers=workers)))
    return ReplicationSet(tuple(seeds), tuple(runs), tuple(mean_distribution(runs)))
