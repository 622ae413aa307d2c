"""Test-suite generation: exhaustive event-interaction pairs and seeded random walks."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .efg import EventFlowGraph, reaching_prefix
from .errors import NoWalkPossible, ParseError, ValidationError
from .model import CASE_SEPARATOR, dump_json, read_json
from .prng import SplitMix64, derive_seed

LENGTH2_GENERATOR = "event-interaction"
RANDOM_GENERATOR = "random-sequence-length"
REJECTION_FACTOR = 50


@dataclass(frozen=True)
class TestCase:
    __test__ = False

    main_events: tuple[str, ...]
    origin_version: str

    @property
    def case_id(self) -> str:
        return CASE_SEPARATOR.join(self.main_events)

    @property
    def length(self) -> int:
        return len(self.main_events)


@dataclass(frozen=True)
class SuiteGroup:
    """All cases of one length plus how they were produced."""

    length: int
    generator: str
    seed: int | None
    cases: tuple[TestCase, ...]
    requested: int | None = None
    early_stopped: bool = False


@dataclass
class TestSuite:
    __test__ = False

    origin_version: str
    groups: dict[int, SuiteGroup] = field(default_factory=dict)

    def add(self, group: SuiteGroup) -> None:
        if group.length in self.groups:
            raise ValueError(f"suite already has a length-{group.length} group")
        self.groups[group.length] = group

    def merged(self, other: "TestSuite") -> "TestSuite":
        if other.origin_version != self.origin_version:
            raise ValueError("cannot merge suites of different versions")
        out = TestSuite(self.origin_version, dict(self.groups))
        for g in other.groups.values():
            out.add(g)
        return out

    def lengths(self) -> list[int]:
        return sorted(self.groups)

    def cases(self, length: int | None = None) -> list[TestCase]:
        if length is not None:
            group = self.groups.get(length)
            return list(group.cases) if group else []
        return [c for n in self.lengths() for c in self.groups[n].cases]

    def __len__(self) -> int:
        return sum(len(g.cases) for g in self.groups.values())


def _sorted_cases(cases: Iterable[TestCase]) -> tuple[TestCase, ...]:
    return tuple(sorted(cases, key=lambda c: c.case_id))


def effective_sequence(g: EventFlowGraph, tc: TestCase) -> list[str]:
    """Reaching steps for the first event followed by the case's own events."""
    return reaching_prefix(g, tc.main_events[0]) + list(tc.main_events)


def generate_all_length2(g: EventFlowGraph) -> TestSuite:
    cases = _sorted_cases(TestCase((x, y), g.version_label) for x, y in g.edges())
    suite = TestSuite(g.version_label)
    suite.add(SuiteGroup(2, LENGTH2_GENERATOR, None, cases, requested=None))
    return suite


def generate_random(g: EventFlowGraph, length: int, count: int, seed: int) -> TestSuite:
    """Up to ``count`` distinct random walks of ``length`` events.

    Each walk starts uniformly among the initial events and picks every
    successor uniformly from the current event's follow set.  Walks that hit
    a dead end or repeat an earlier case are rejected; after
    ``50 * count`` rejections in a row generation stops early.
    """
    if length < 2:
        raise ValueError("random walks need length >= 2")
    if count < 0:
        raise ValueError("count must be nonnegative")
    suite = TestSuite(g.version_label)
    if count and not any(g.follows[e] for e in g.initial_events):
        raise NoWalkPossible(
            f"no initial event of version {g.version_label!r} has a successor"
        )
    rng = SplitMix64(seed)
    below = rng.below
    initial = g.initial_events
    follows = g.follows
    found: set[tuple[str, ...]] = set()
    rejected = 0
    limit = REJECTION_FACTOR * count
    early = False
    while len(found) < count:
        if rejected >= limit:
            early = True
            break
        cur = initial[below(len(initial))]
        walk = [cur]
        for _ in range(length - 1):
            nxt = follows[cur]
            if not nxt:
                break
            cur = nxt[below(len(nxt))]
            walk.append(cur)
        key = tuple(walk)
        if len(walk) < length or key in found:
            rejected += 1
            continue
        found.add(key)
        rejected = 0
    cases = _sorted_cases(TestCase(k, g.version_label) for k in found)
    suite.add(SuiteGroup(length, RANDOM_GENERATOR, seed, cases, requested=count, early_stopped=early))
    return suite


@dataclass(frozen=True)
class GenerationParams:
    """What to generate for every version: the exhaustive pairs and/or random lengths."""

    length2_all: bool = True
    random_lengths: tuple[int, ...] = (3, 4, 5)
    count: int = 10_000


def generate_suite(g: EventFlowGraph, params: GenerationParams, seed: int | None) -> TestSuite:
    """Full per-version suite; each random length draws from its own derived seed."""
    suite = TestSuite(g.version_label)
    if params.length2_all:
        suite = suite.merged(generate_all_length2(g))
    if params.random_lengths and seed is None:
        raise ValueError("random generation needs an explicit seed")
    for n in params.random_lengths:
        sub = derive_seed(seed, g.version_label, n)
        suite = suite.merged(generate_random(g, n, params.count, sub))
    return suite


# ---------------------------------------------------------------------------
# suite files


def group_to_dict(origin_version: str, group: SuiteGroup) -> dict:
    return {
        "origin_version": origin_version,
        "generator": group.generator,
        "seed": group.seed,
        "length": group.length,
        "requested": group.requested,
        "early_stopped": group.early_stopped,
        "cases": [list(c.main_events) for c in group.cases],
    }


def dump_suite(suite: TestSuite) -> str:
    groups = [group_to_dict(suite.origin_version, suite.groups[n]) for n in suite.lengths()]
    return dump_json(groups[0] if len(groups) == 1 else groups)


def save_suite(suite: TestSuite, path) -> None:
    Path(path).write_text(dump_suite(suite), encoding="utf-8")


def _parse_group(obj, path) -> tuple[str, SuiteGroup]:
    if not isinstance(obj, dict):
        raise ValidationError("suite group must be an object", path)
    for key in ("origin_version", "generator", "length", "cases"):
        if key not in obj:
            raise ValidationError(f"missing key {key}", path)
    origin = obj["origin_version"]
    length = obj["length"]
    cases = []
    seen = set()
    for i, raw in enumerate(obj["cases"]):
        if not isinstance(raw, list) or not raw or not all(isinstance(e, str) for e in raw):
            raise ValidationError("case must be a nonempty list of event ids", f"{path}.cases[{i}]")
        if len(raw) != length:
            raise ValidationError(f"case has {len(raw)} events, group length is {length}", f"{path}.cases[{i}]")
        tc = TestCase(tuple(raw), origin)
        if tc.case_id in seen:
            raise ValidationError(f"duplicate case {tc.case_id!r}", f"{path}.cases[{i}]")
        seen.add(tc.case_id)
        cases.append(tc)
    group = SuiteGroup(
        length=length,
        generator=obj["generator"],
        seed=obj.get("seed"),
        cases=_sorted_cases(cases),
        requested=obj.get("requested"),
        early_stopped=bool(obj.get("early_stopped", False)),
    )
    return origin, group


def parse_suites(data) -> list[TestSuite]:
    """Suite file payload (one group object or a list of them) -> suites by version."""
    items = data if isinstance(data, list) else [data]
    suites: dict[str, TestSuite] = {}
    for i, obj in enumerate(items):
        origin, group = _parse_group(obj, f"[{i}]")
        suite = suites.setdefault(origin, TestSuite(origin))
        if group.length in suite.groups:
            raise ValidationError(f"second length-{group.length} group for {origin!r}", f"[{i}]")
        suite.add(group)
    return list(suites.values())


def load_suite(path) -> TestSuite:
    suites = parse_suites(read_json(path))
    if len(suites) != 1:
        raise ParseError(f"{path}: expected the suite of exactly one version, found {len(suites)}")
    return suites[0]


def load_suites(paths: Sequence) -> dict[str, TestSuite]:
    out: dict[str, TestSuite] = {}
    for p in paths:
        for suite in parse_suites(read_json(p)):
            out[suite.origin_version] = (
                out[suite.origin_version].merged(suite) if suite.origin_version in out else suite
            )
    return out
