"""Event-flow graph derivation plus validity and reaching-step queries.

Construction explores window configurations breadth-first.  A configuration
is a stack of segments ``(modal_window | None, frozenset(non_modal_windows))``:
the bottom segment holds the non-modal windows open at the base level, each
modal window starts a new segment, and non-modal windows opened while a modal
window is on top join that segment.  Only the top segment is active.

Firing rules for an event ``e`` fired in configuration ``C`` (``context(C)``
is the set of top-level events of the active windows):

* SYSTEM          -> context(C)
* MENU_OPEN       -> menu children of e  +  context(C)
* WINDOW_OPEN w'  -> context(C + w')   (just w' if modal, else C's context + w')
* WINDOW_CLOSE    -> context(C - owning window)
* TERMINATE       -> nothing

An event fired in several configurations gets the union of its follow sets.
Events that never become fireable are left out of the graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import ModelError, Unreachable
from .model import EventKind, GuiModel, event_id_for

_EMPTY = frozenset()


@dataclass(frozen=True, eq=False)
class EventFlowGraph:
    version_label: str
    events: tuple[str, ...]
    follows: Mapping[str, tuple[str, ...]]
    initial_events: tuple[str, ...]

    @cached_property
    def follow_sets(self) -> dict[str, frozenset[str]]:
        return {e: frozenset(f) for e, f in self.follows.items()}

    @cached_property
    def initial_set(self) -> frozenset[str]:
        return frozenset(self.initial_events)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(f) for f in self.follows.values())

    def edges(self) -> list[tuple[str, str]]:
        return [(x, y) for x in self.events for y in self.follows[x]]

    @cached_property
    def _bfs_parents(self) -> dict[str, str | None]:
        # sorted frontier + sorted expansion = lexicographically least shortest path
        parent: dict[str, str | None] = {e: None for e in self.initial_events}
        queue = deque(self.initial_events)
        while queue:
            x = queue.popleft()
            for y in self.follows[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        return parent

    @cached_property
    def _prefix_cache(self) -> dict[str, tuple[str, ...]]:
        return {}

    def to_dict(self) -> dict:
        return {
            "events": list(self.events),
            "initial": list(self.initial_events),
            "edges": [[x, y] for x, y in self.edges()],
        }


class _Layout:
    """Per-window top-level events and per-menu child events of one model."""

    def __init__(self, model: GuiModel):
        self.model = model
        self.top: dict[str, tuple[str, ...]] = {}
        self.children: dict[str, tuple[str, ...]] = {}
        for win in model.windows:
            widgets = {wd.widget_id: wd for wd in win.widgets}

            def menu_owner(wd):
                cur = wd.parent
                while cur is not None:
                    anc = widgets[cur]
                    if any(a.kind is EventKind.MENU_OPEN for a in anc.actions):
                        return cur
                    cur = anc.parent
                return None

            top = []
            for wd in win.widgets:
                owner = menu_owner(wd)
                eids = [event_id_for(wd.widget_id, a.kind) for a in wd.actions]
                if owner is None:
                    top.extend(eids)
                else:
                    self.children.setdefault(owner, []).extend(eids)
            self.top[win.window_id] = tuple(sorted(top))
        self.children = {k: tuple(sorted(v)) for k, v in self.children.items()}

    def context(self, config) -> frozenset[str]:
        modal, others = config[-1]
        out = set()
        for w in others:
            out.update(self.top[w])
        if modal is not None:
            out.update(self.top[modal])
        return frozenset(out)

    def fireable(self, config) -> set[str]:
        events = self.model.events
        out = set()
        stack = list(self.context(config))
        while stack:
            e = stack.pop()
            if e in out:
                continue
            out.add(e)
            ev = events[e]
            if ev.kind is EventKind.MENU_OPEN:
                stack.extend(self.children.get(ev.widget_id, ()))
        return out


def _is_open(config, window_id) -> bool:
    return any(modal == window_id or window_id in others for modal, others in config)


def _open(config, window_id, modal: bool):
    if _is_open(config, window_id):
        return config
    if modal:
        return config + ((window_id, _EMPTY),)
    top_modal, others = config[-1]
    return config[:-1] + ((top_modal, others | {window_id}),)


def _close(config, window_id):
    segments = list(config)
    for i, (modal, others) in enumerate(segments):
        if window_id in others:
            segments[i] = (modal, others - {window_id})
            break
        if modal == window_id:
            below_modal, below = segments[i - 1]
            segments[i - 1] = (below_modal, below | others)
            del segments[i]
            break
    return tuple(segments)


def initial_configuration(model: GuiModel):
    config = ((None, _EMPTY),)
    for win in model.windows:
        if win.open_at_start:
            config = _open(config, win.window_id, win.modal)
    return config


def derive_efg(model: GuiModel) -> EventFlowGraph:
    """Build the event-flow graph of ``model`` by exploring its window configurations."""
    if not any(w.open_at_start for w in model.windows):
        raise ModelError(f"model {model.version_label!r} has no initial configuration")
    layout = _Layout(model)
    windows = model.window_by_id
    events = model.events

    start = initial_configuration(model)
    follows: dict[str, set[str]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        config = queue.popleft()
        context = layout.context(config)
        for e in layout.fireable(config):
            ev = events[e]
            out = follows.setdefault(e, set())
            kind = ev.kind
            if kind is EventKind.SYSTEM:
                out |= context
            elif kind is EventKind.MENU_OPEN:
                out |= context
                out.update(layout.children.get(ev.widget_id, ()))
            elif kind is EventKind.TERMINATE:
                continue
            else:
                if kind is EventKind.WINDOW_OPEN:
                    nxt = _open(config, ev.target, windows[ev.target].modal)
                else:
                    nxt = _close(config, ev.window_id)
                out |= layout.context(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)

    ordered = tuple(sorted(follows))
    return EventFlowGraph(
        version_label=model.version_label,
        events=ordered,
        follows={e: tuple(sorted(follows[e])) for e in ordered},
        initial_events=tuple(sorted(layout.context(start))),
    )


def is_valid_sequence(g: EventFlowGraph, seq: Sequence[str]) -> bool:
    if not seq or seq[0] not in g.initial_set:
        return False
    follow_sets = g.follow_sets
    for x, y in zip(seq, seq[1:]):
        nxt = follow_sets.get(x)
        if nxt is None or y not in nxt:
            return False
    return True


def reaching_prefix(g: EventFlowGraph, e: str) -> list[str]:
    """Shortest event path from an initial event up to (not including) ``e``.

    Ties go to the lexicographically smallest sequence of event ids.
    """
    cache = g._prefix_cache
    if e in cache:
        return list(cache[e])
    parents = g._bfs_parents
    if e not in parents:
        raise Unreachable(f"event {e!r} is not reachable in version {g.version_label!r}")
    path = []
    cur = parents[e]
    while cur is not None:
        path.append(cur)
        cur = parents[cur]
    path.reverse()
    cache[e] = tuple(path)
    return path


def efg_from_dict(data: dict, version_label: str = "") -> EventFlowGraph:
    follows = {e: set() for e in data["events"]}
    for x, y in data["edges"]:
        follows[x].add(y)
    events = tuple(sorted(follows))
    return EventFlowGraph(
        version_label=version_label,
        events=events,
        follows={e: tuple(sorted(follows[e])) for e in events},
        initial_events=tuple(sorted(data["initial"])),
    )
