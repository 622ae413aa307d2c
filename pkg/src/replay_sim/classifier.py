"""Replayability categories for single version pairs and whole version chains."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Sequence

from .efg import EventFlowGraph, is_valid_sequence, reaching_prefix
from .errors import VersionMismatch
from .evolution import EquivalenceMapping, VersionChain, map_event
from .generator import TestCase, effective_sequence
from .model import GuiModel, split_event_id


class Category(enum.IntEnum):
    REPLAYABLE_BY_ID = 1
    REPLAYABLE_AFTER_REPAIR = 2
    REPAIRABLE = 3
    UNREPAIRABLE = 4


def _widget(e: str) -> str:
    return split_event_id(e)[0]


def _step(seq, old: GuiModel, new: GuiModel, new_efg: EventFlowGraph, m: EquivalenceMapping):
    """Category of ``seq`` (events of ``old``) on ``new`` plus its image there."""
    mapped = [map_event(m, e, new) for e in seq]
    if any(x is None for x in mapped):
        return Category.UNREPAIRABLE, None
    if not is_valid_sequence(new_efg, mapped):
        return Category.REPAIRABLE, mapped
    old_ids, new_ids = old.stable_ids, new.stable_ids
    if all(old_ids[_widget(a)] == new_ids[_widget(b)] for a, b in zip(seq, mapped)):
        return Category.REPLAYABLE_BY_ID, mapped
    return Category.REPLAYABLE_AFTER_REPAIR, mapped


def classify_pair(
    tc: TestCase,
    old: tuple[GuiModel, EventFlowGraph],
    new: tuple[GuiModel, EventFlowGraph],
    m: EquivalenceMapping,
) -> Category:
    old_model, old_efg = old
    new_model, new_efg = new
    if tc.origin_version != old_model.version_label:
        raise VersionMismatch(
            f"case {tc.case_id!r} comes from {tc.origin_version!r}, not {old_model.version_label!r}"
        )
    if m.from_version != old_model.version_label or m.to_version != new_model.version_label:
        raise VersionMismatch(
            f"mapping {m.from_version!r}->{m.to_version!r} does not connect "
            f"{old_model.version_label!r}->{new_model.version_label!r}"
        )
    seq = effective_sequence(old_efg, tc)
    return _step(seq, old_model, new_model, new_efg, m)[0]


def classify_chain(tc: TestCase, chain: VersionChain) -> list[Category]:
    """Reported category on each later version of ``chain``.

    The effective sequence is mapped forward one hop at a time and checked
    against every intermediate version; a category never improves, so an
    event that vanishes and later reappears does not revive the case.
    """
    models, efgs = chain.models, chain.efgs
    if not models or tc.origin_version != models[0].version_label:
        raise VersionMismatch(f"case {tc.case_id!r} does not originate from the chain's first version")
    seq = effective_sequence(efgs[0], tc)
    worst = Category.REPLAYABLE_BY_ID
    out = []
    for k, m in enumerate(chain.mappings):
        if worst is not Category.UNREPAIRABLE:
            step, seq = _step(seq, models[k], models[k + 1], efgs[k + 1], m)
            worst = max(worst, step)
        out.append(worst)
    return out


# ---------------------------------------------------------------------------
# bulk engine
#
# For a fixed origin version every category sequence is determined by three
# step numbers: the first hop at which some event loses its equivalent (D),
# the first hop at which the mapped sequence is invalid (V) and the first hop
# at which some widget Id changes (I).  Reported category at hop k is then
# 4 if k >= D, else 3 if k >= V, else 2 if k >= I, else 1.  Each number is a
# minimum over per-event or per-edge values, which are memoised.

_NEVER = 1 << 30


class _OriginEngine:
    def __init__(self, chain: VersionChain, origin: int):
        self.models = chain.models[origin:]
        self.efgs = chain.efgs[origin:]
        self.mappings = chain.mappings[origin:]
        self.steps = len(self.mappings)
        self.origin_efg = self.efgs[0]
        self._event_memo: dict[str, tuple[int, int, int, list[str]]] = {}
        self._edge_memo: dict[tuple[str, str], int] = {}
        self._prefix_memo: dict[str, tuple[str, ...]] = {}
        self._event_maps = [
            {e: map_event(m, e, self.models[k + 1]) for e in self.models[k].events}
            for k, m in enumerate(self.mappings)
        ]

    def _event(self, e):
        """(death hop, Id-change hop, first hop where e is not initial, images)."""
        hit = self._event_memo.get(e)
        if hit is not None:
            return hit
        death = idchg = notinit = _NEVER
        images = [e]
        cur = e
        for k in range(self.steps):
            nxt = self._event_maps[k].get(cur)
            if nxt is None:
                death = k + 1
                break
            if idchg == _NEVER and (
                self.models[k].stable_ids[_widget(cur)] != self.models[k + 1].stable_ids[_widget(nxt)]
            ):
                idchg = k + 1
            if notinit == _NEVER and nxt not in self.efgs[k + 1].initial_set:
                notinit = k + 1
            images.append(nxt)
            cur = nxt
        hit = (death, idchg, notinit, images)
        self._event_memo[e] = hit
        return hit

    def _edge(self, x, y):
        """First hop at which the images of x and y are no longer an edge."""
        key = (x, y)
        hit = self._edge_memo.get(key)
        if hit is not None:
            return hit
        ix, iy = self._event(x)[3], self._event(y)[3]
        hit = _NEVER
        for k in range(1, min(len(ix), len(iy))):
            if iy[k] not in self.efgs[k].follow_sets.get(ix[k], ()):
                hit = k
                break
        self._edge_memo[key] = hit
        return hit

    def thresholds(self, main_events: Sequence[str]) -> tuple[int, int, int]:
        first = main_events[0]
        prefix = self._prefix_memo.get(first)
        if prefix is None:
            prefix = tuple(reaching_prefix(self.origin_efg, first))
            self._prefix_memo[first] = prefix
        seq = prefix + tuple(main_events)
        death = idchg = _NEVER
        event = self._event
        for e in seq:
            d, i, _, _ = event(e)
            if d < death:
                death = d
            if i < idchg:
                idchg = i
        invalid = event(seq[0])[2]
        edge = self._edge
        for x, y in zip(seq, seq[1:]):
            v = edge(x, y)
            if v < invalid:
                invalid = v
        return death, invalid, idchg

    def categories(self, main_events: Sequence[str]) -> bytes:
        death, invalid, idchg = self.thresholds(main_events)
        out = bytearray(self.steps)
        for k in range(1, self.steps + 1):
            out[k - 1] = 4 if k >= death else 3 if k >= invalid else 2 if k >= idchg else 1
        return bytes(out)


class CategoryMatrix:
    """Reported categories, one row per case and one column per later version."""

    def __init__(self, steps: int, data: bytes):
        self.steps = steps
        self.data = data

    def __len__(self):
        return len(self.data) // self.steps if self.steps else 0

    def row(self, i: int) -> tuple[Category, ...]:
        return tuple(Category(c) for c in self.data[i * self.steps : (i + 1) * self.steps])

    def column(self, k: int) -> bytes:
        return self.data[k :: self.steps]

    def __iter__(self) -> Iterator[tuple[Category, ...]]:
        return (self.row(i) for i in range(len(self)))

    def __eq__(self, other):
        return isinstance(other, CategoryMatrix) and (self.steps, self.data) == (other.steps, other.data)


_worker_chain: VersionChain | None = None
_worker_engines: dict[int, _OriginEngine] = {}


def _init_worker(chain: VersionChain) -> None:
    global _worker_chain
    _worker_chain = chain
    _worker_engines.clear()


def _classify_chunk(args) -> bytes:
    origin, cases = args
    engine = _worker_engines.get(origin)
    if engine is None:
        engine = _worker_engines[origin] = _OriginEngine(_worker_chain, origin)
    return b"".join(engine.categories(c) for c in cases)


class ChainClassifier:
    """Classifies whole suites against a chain; results match classify_chain.

    With ``workers > 1`` the cases are split into fixed-size chunks handled by
    a process pool and merged back in input order, so the output never
    depends on the worker count.
    """

    chunk_size = 20_000

    def __init__(self, chain: VersionChain):
        self.chain = chain
        self._engines: dict[int, _OriginEngine] = {}

    def engine(self, origin: int) -> _OriginEngine:
        if origin not in self._engines:
            self._engines[origin] = _OriginEngine(self.chain, origin)
        return self._engines[origin]

    def classify(
        self, cases: Sequence[TestCase], origin: int | str = 0, workers: int = 1
    ) -> CategoryMatrix:
        if isinstance(origin, str):
            origin = self.chain.index_of(origin)
        label = self.chain.models[origin].version_label
        for tc in cases:
            if tc.origin_version != label:
                raise VersionMismatch(f"case {tc.case_id!r} comes from {tc.origin_version!r}, not {label!r}")
        steps = len(self.chain) - 1 - origin
        events = [tc.main_events for tc in cases]
        if workers <= 1 or len(events) <= self.chunk_size:
            engine = self.engine(origin)
            return CategoryMatrix(steps, b"".join(engine.categories(e) for e in events))
        self.chain.efgs  # derive once before pickling
        chunks = [
            (origin, events[i : i + self.chunk_size]) for i in range(0, len(events), self.chunk_size)
        ]
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(self.chain,)
        ) as pool:
            parts = list(pool.map(_classify_chunk, chunks))
        return CategoryMatrix(steps, b"".join(parts))
