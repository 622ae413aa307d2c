"""Versioned GUI models: windows, widgets, their actions, and stable widget Ids.

A model file is plain JSON::

    {"version_label": "0.2.0",
     "windows": [{"window_id": "main", "title": "Main", "modal": false,
                  "open_at_start": true,
                  "widgets": [{"widget_id": "ok", "type_name": "Button",
                               "title": "OK", "index": 0, "parent": null,
                               "actions": [{"kind": "SYSTEM", "target": null}]}]}]}
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any

from .errors import ParseError, ValidationError

FNV_OFFSET_BASIS = 14695981039346656037
FNV_PRIME = 1099511628211
_MASK64 = (1 << 64) - 1
ID_SEPARATOR = "\x1f"
# reserved as the case_id separator
CASE_SEPARATOR = "|"


class EventKind(str, enum.Enum):
    SYSTEM = "SYSTEM"
    MENU_OPEN = "MENU_OPEN"
    WINDOW_OPEN = "WINDOW_OPEN"
    WINDOW_CLOSE = "WINDOW_CLOSE"
    TERMINATE = "TERMINATE"


@dataclass(frozen=True)
class Action:
    kind: EventKind
    target: str | None = None


@dataclass(frozen=True)
class Widget:
    widget_id: str
    type_name: str
    title: str
    index: int
    parent: str | None = None
    actions: tuple[Action, ...] = ()


@dataclass(frozen=True)
class Window:
    window_id: str
    title: str
    modal: bool
    open_at_start: bool
    widgets: tuple[Widget, ...] = ()


@dataclass(frozen=True)
class Event:
    event_id: str
    widget_id: str
    window_id: str
    kind: EventKind
    target: str | None = None


def event_id_for(widget_id: str, kind: EventKind | str) -> str:
    return f"{widget_id}:{EventKind(kind).value}"


def split_event_id(event_id: str) -> tuple[str, EventKind]:
    widget_id, sep, tag = event_id.rpartition(":")
    if not sep or not widget_id:
        raise ValueError(f"malformed event id {event_id!r}")
    return widget_id, EventKind(tag)


@dataclass(frozen=True)
class GuiModel:
    version_label: str
    windows: tuple[Window, ...]

    @cached_property
    def window_by_id(self) -> dict[str, Window]:
        return {w.window_id: w for w in self.windows}

    @cached_property
    def widget_by_id(self) -> dict[str, Widget]:
        return {wd.widget_id: wd for w in self.windows for wd in w.widgets}

    @cached_property
    def window_of(self) -> dict[str, str]:
        """Owning window id for every widget id."""
        return {wd.widget_id: w.window_id for w in self.windows for wd in w.widgets}

    @cached_property
    def events(self) -> dict[str, Event]:
        out = {}
        for w in self.windows:
            for wd in w.widgets:
                for a in wd.actions:
                    eid = event_id_for(wd.widget_id, a.kind)
                    out[eid] = Event(eid, wd.widget_id, w.window_id, a.kind, a.target)
        return out

    @cached_property
    def stable_ids(self) -> dict[str, str]:
        return {
            wd.widget_id: compute_widget_id(wd, w) for w in self.windows for wd in w.widgets
        }

    def widget_count(self) -> int:
        return sum(len(w.widgets) for w in self.windows)


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET_BASIS
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


def canonical_widget_string(widget: Widget, window: Window) -> str:
    return ID_SEPARATOR.join(
        (window.title, widget.type_name, widget.title, str(widget.index))
    )


def compute_widget_id(widget: Widget, owning_window: Window) -> str:
    """StableId of a widget: FNV-1a 64 over its four identifying properties.

    Only the window title, type name, widget title and sibling index take
    part, so moving a widget to another parent leaves its Id unchanged while
    a rename does not.
    """
    data = canonical_widget_string(widget, owning_window).encode("utf-8")
    return f"{fnv1a_64(data):016x}"


def model_digest(model: GuiModel) -> frozenset[str]:
    return frozenset(model.stable_ids.values())


# ---------------------------------------------------------------------------
# parsing and validation

_MODEL_KEYS = {"version_label", "windows"}
_WINDOW_KEYS = {"window_id", "title", "modal", "open_at_start", "widgets"}
_WIDGET_KEYS = {"widget_id", "type_name", "title", "index", "parent", "actions"}
_ACTION_KEYS = {"kind", "target"}


def _check_keys(obj, allowed, path, strict):
    if not isinstance(obj, dict):
        raise ValidationError("expected an object", path)
    missing = sorted(k for k in allowed if k not in obj and k not in ("parent", "target"))
    if missing:
        raise ValidationError(f"missing key(s) {', '.join(missing)}", path)
    if strict:
        unknown = sorted(set(obj) - allowed)
        if unknown:
            raise ValidationError(f"unknown key(s) {', '.join(unknown)}", path)


def _typed(obj, key, typ, path):
    value = obj[key]
    # bool is an int subclass; keep them apart
    if typ is int and isinstance(value, bool) or not isinstance(value, typ):
        raise ValidationError(f"{key} must be {typ.__name__}", f"{path}.{key}")
    return value


def _parse_action(obj, path, strict) -> Action:
    _check_keys(obj, _ACTION_KEYS, path, strict)
    try:
        kind = EventKind(obj["kind"])
    except ValueError:
        raise ValidationError(f"unknown action kind {obj['kind']!r}", f"{path}.kind") from None
    target = obj.get("target")
    if kind is EventKind.WINDOW_OPEN:
        if not isinstance(target, str):
            raise ValidationError("WINDOW_OPEN needs a target window id", f"{path}.target")
    elif target is not None:
        raise ValidationError(f"{kind.value} takes no target", f"{path}.target")
    return Action(kind, target)


def _parse_widget(obj, path, strict) -> Widget:
    _check_keys(obj, _WIDGET_KEYS, path, strict)
    widget_id = _typed(obj, "widget_id", str, path)
    if not widget_id or CASE_SEPARATOR in widget_id:
        raise ValidationError(f"widget_id must be nonempty without {CASE_SEPARATOR!r}", f"{path}.widget_id")
    index = _typed(obj, "index", int, path)
    if index < 0:
        raise ValidationError("index must be nonnegative", f"{path}.index")
    parent = obj.get("parent")
    if parent is not None and not isinstance(parent, str):
        raise ValidationError("parent must be a string or null", f"{path}.parent")
    actions = obj["actions"]
    if not isinstance(actions, list):
        raise ValidationError("actions must be a list", f"{path}.actions")
    return Widget(
        widget_id=widget_id,
        type_name=_typed(obj, "type_name", str, path),
        title=_typed(obj, "title", str, path),
        index=index,
        parent=parent,
        actions=tuple(
            _parse_action(a, f"{path}.actions[{i}]", strict) for i, a in enumerate(actions)
        ),
    )


def _parse_window(obj, path, strict) -> Window:
    _check_keys(obj, _WINDOW_KEYS, path, strict)
    widgets = obj["widgets"]
    if not isinstance(widgets, list):
        raise ValidationError("widgets must be a list", f"{path}.widgets")
    return Window(
        window_id=_typed(obj, "window_id", str, path),
        title=_typed(obj, "title", str, path),
        modal=_typed(obj, "modal", bool, path),
        open_at_start=_typed(obj, "open_at_start", bool, path),
        widgets=tuple(
            _parse_widget(w, f"{path}.widgets[{i}]", strict) for i, w in enumerate(widgets)
        ),
    )


def validate_gui_model(model: GuiModel) -> None:
    """Check the structural invariants; raise ValidationError on the first breach."""
    window_ids = set()
    for wi, win in enumerate(model.windows):
        if win.window_id in window_ids:
            raise ValidationError(f"duplicate window id {win.window_id!r}", f"windows[{wi}]")
        window_ids.add(win.window_id)
    if not any(w.open_at_start for w in model.windows):
        raise ValidationError("no window has open_at_start = true", "windows")

    seen_widgets = {}
    event_ids = set()
    terminate_windows = set()
    for wi, win in enumerate(model.windows):
        local = {wd.widget_id: wd for wd in win.widgets}
        slots = set()
        for di, wd in enumerate(win.widgets):
            path = f"windows[{wi}].widgets[{di}]"
            if wd.widget_id in seen_widgets:
                raise ValidationError(f"duplicate widget id {wd.widget_id!r}", path)
            seen_widgets[wd.widget_id] = win.window_id
            if wd.parent is not None and wd.parent not in local:
                raise ValidationError(
                    f"parent {wd.parent!r} is not a widget of window {win.window_id!r}",
                    f"{path}.parent",
                )
            slot = (wd.parent, wd.type_name, wd.index)
            if slot in slots:
                raise ValidationError(
                    f"index {wd.index} already used by a {wd.type_name} sibling", f"{path}.index"
                )
            slots.add(slot)
            for ai, action in enumerate(wd.actions):
                eid = event_id_for(wd.widget_id, action.kind)
                if eid in event_ids:
                    raise ValidationError(f"duplicate event id {eid!r}", f"{path}.actions[{ai}]")
                event_ids.add(eid)
                if action.kind is EventKind.TERMINATE:
                    terminate_windows.add(win.window_id)
        # parent chains must end at the window (no cycles)
        for wd in win.widgets:
            hops, cur = 0, wd.parent
            while cur is not None:
                hops += 1
                if hops > len(win.widgets):
                    raise ValidationError(
                        f"parent cycle through widget {wd.widget_id!r}", f"windows[{wi}]"
                    )
                cur = local[cur].parent
    if len(terminate_windows) > 1:
        raise ValidationError(
            f"TERMINATE events in more than one window: {sorted(terminate_windows)}", "windows"
        )
    for wi, win in enumerate(model.windows):
        for di, wd in enumerate(win.widgets):
            for ai, action in enumerate(wd.actions):
                if action.kind is EventKind.WINDOW_OPEN and action.target not in window_ids:
                    raise ValidationError(
                        f"WINDOW_OPEN targets missing window {action.target!r}",
                        f"windows[{wi}].widgets[{di}].actions[{ai}].target",
                    )


def parse_gui_model(data: Any, strict: bool = True) -> GuiModel:
    _check_keys(data, _MODEL_KEYS, "$", strict)
    windows = data["windows"]
    if not isinstance(windows, list):
        raise ValidationError("windows must be a list", "windows")
    model = GuiModel(
        version_label=_typed(data, "version_label", str, "$"),
        windows=tuple(_parse_window(w, f"windows[{i}]", strict) for i, w in enumerate(windows)),
    )
    validate_gui_model(model)
    return model


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from exc


def load_gui_model(path, strict: bool = True) -> GuiModel:
    data = read_json(path)
    try:
        return parse_gui_model(data, strict=strict)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def model_to_dict(model: GuiModel) -> dict:
    return {
        "version_label": model.version_label,
        "windows": [
            {
                "window_id": w.window_id,
                "title": w.title,
                "modal": w.modal,
                "open_at_start": w.open_at_start,
                "widgets": [
                    {
                        "widget_id": wd.widget_id,
                        "type_name": wd.type_name,
                        "title": wd.title,
                        "index": wd.index,
                        "parent": wd.parent,
                        "actions": [{"kind": a.kind.value, "target": a.target} for a in wd.actions],
                    }
                    for wd in w.widgets
                ],
            }
            for w in model.windows
        ],
    }


def dump_json(data: Any) -> str:
    """Canonical serialization used for every artifact file."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def dump_gui_model(model: GuiModel) -> str:
    return dump_json(model_to_dict(model))


def save_gui_model(model: GuiModel, path) -> None:
    Path(path).write_text(dump_gui_model(model), encoding="utf-8")
