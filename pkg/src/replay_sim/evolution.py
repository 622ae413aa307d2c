"""Cross-version widget equivalences, version chains and controlled GUI mutations."""

from __future__ import annotations

import copy
import enum
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping, Sequence

from .efg import EventFlowGraph, derive_efg
from .errors import MutationError, ParseError, ValidationError, VersionMismatch
from .model import (
    EventKind,
    GuiModel,
    dump_json,
    load_gui_model,
    model_to_dict,
    parse_gui_model,
    read_json,
    split_event_id,
)


@dataclass(frozen=True, eq=False)
class EquivalenceMapping:
    from_version: str
    to_version: str
    pairs: Mapping[str, str]

    def __eq__(self, other):
        if not isinstance(other, EquivalenceMapping):
            return NotImplemented
        return (self.from_version, self.to_version, dict(self.pairs)) == (
            other.from_version,
            other.to_version,
            dict(other.pairs),
        )

    def __hash__(self):
        return hash((self.from_version, self.to_version, frozenset(self.pairs.items())))

    def __len__(self):
        return len(self.pairs)


def identity_mapping(old: GuiModel, new: GuiModel | None = None) -> EquivalenceMapping:
    """Map every widget of ``old`` to the same widget id (present in ``new``)."""
    new = new or old
    present = new.widget_by_id
    return EquivalenceMapping(
        old.version_label,
        new.version_label,
        {w: w for w in old.widget_by_id if w in present},
    )


def validate_mapping(m: EquivalenceMapping, old: GuiModel, new: GuiModel) -> None:
    if m.from_version != old.version_label or m.to_version != new.version_label:
        raise VersionMismatch(
            f"mapping {m.from_version!r}->{m.to_version!r} does not connect "
            f"{old.version_label!r}->{new.version_label!r}"
        )
    targets: dict[str, str] = {}
    for src, dst in sorted(m.pairs.items()):
        if src not in old.widget_by_id:
            raise ValidationError(f"unknown widget {src!r} in version {old.version_label!r}", f"pairs[{src}]")
        if dst not in new.widget_by_id:
            raise ValidationError(f"unknown widget {dst!r} in version {new.version_label!r}", f"pairs[{src}]")
        if dst in targets:
            raise ValidationError(
                f"mapping is not injective: {targets[dst]!r} and {src!r} both map to {dst!r}",
                f"pairs[{src}]",
            )
        targets[dst] = src


def parse_mapping(data: Any) -> EquivalenceMapping:
    if not isinstance(data, dict):
        raise ValidationError("mapping must be an object", "$")
    for key in ("from_version", "to_version", "pairs"):
        if key not in data:
            raise ValidationError(f"missing key {key}", "$")
    pairs: dict[str, str] = {}
    targets: dict[str, str] = {}
    for i, p in enumerate(data["pairs"]):
        if not isinstance(p, dict) or not isinstance(p.get("from"), str) or not isinstance(p.get("to"), str):
            raise ValidationError("pair needs string 'from' and 'to'", f"pairs[{i}]")
        src, dst = p["from"], p["to"]
        if src in pairs:
            raise ValidationError(f"widget {src!r} mapped twice", f"pairs[{i}]")
        if dst in targets:
            raise ValidationError(
                f"mapping is not injective: {targets[dst]!r} and {src!r} both map to {dst!r}",
                f"pairs[{i}]",
            )
        pairs[src] = dst
        targets[dst] = src
    return EquivalenceMapping(data["from_version"], data["to_version"], pairs)


def load_mapping(path, old: GuiModel | None = None, new: GuiModel | None = None) -> EquivalenceMapping:
    try:
        m = parse_mapping(read_json(path))
        if old is not None and new is not None:
            validate_mapping(m, old, new)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    return m


def mapping_to_dict(m: EquivalenceMapping) -> dict:
    return {
        "from_version": m.from_version,
        "to_version": m.to_version,
        "pairs": [{"from": s, "to": m.pairs[s]} for s in sorted(m.pairs)],
    }


def save_mapping(m: EquivalenceMapping, path) -> None:
    Path(path).write_text(dump_json(mapping_to_dict(m)), encoding="utf-8")


def map_event(m: EquivalenceMapping, e: str, new: GuiModel) -> str | None:
    """Image of event ``e`` in ``new``, or None when its widget has no equivalent
    or the equivalent widget does not support the same kind of action."""
    widget_id, kind = split_event_id(e)
    target = m.pairs.get(widget_id)
    if target is None:
        return None
    image = f"{target}:{kind.value}"
    return image if image in new.events else None


def compose(m12: EquivalenceMapping, m23: EquivalenceMapping) -> EquivalenceMapping:
    if m12.to_version != m23.from_version:
        raise VersionMismatch(
            f"cannot compose {m12.from_version!r}->{m12.to_version!r} "
            f"with {m23.from_version!r}->{m23.to_version!r}"
        )
    pairs = {}
    for src, mid in m12.pairs.items():
        dst = m23.pairs.get(mid)
        if dst is not None:
            pairs[src] = dst
    return EquivalenceMapping(m12.from_version, m23.to_version, pairs)


@dataclass(eq=False)
class VersionChain:
    models: list[GuiModel]
    mappings: list[EquivalenceMapping] = field(default_factory=list)

    def __post_init__(self):
        if len(self.mappings) != max(len(self.models) - 1, 0):
            raise ValidationError(
                f"{len(self.models)} models need {len(self.models) - 1} mappings, got {len(self.mappings)}"
            )
        for k, m in enumerate(self.mappings):
            validate_mapping(m, self.models[k], self.models[k + 1])

    @cached_property
    def efgs(self) -> list[EventFlowGraph]:
        return [derive_efg(m) for m in self.models]

    @property
    def labels(self) -> list[str]:
        return [m.version_label for m in self.models]

    def __len__(self):
        return len(self.models)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise VersionMismatch(f"version {label!r} is not part of the chain") from None

    def sub(self, start: int, stop: int | None = None) -> "VersionChain":
        """Chain over models[start:stop], sharing already derived graphs."""
        stop = len(self.models) if stop is None else stop
        out = VersionChain.__new__(VersionChain)
        out.models = self.models[start:stop]
        out.mappings = self.mappings[start : stop - 1]
        if "efgs" in self.__dict__:
            out.__dict__["efgs"] = self.efgs[start:stop]
        return out


def load_chain(manifest_path, strict: bool = True) -> VersionChain:
    """Chain manifest: {"models": [paths...], "mappings": [paths...]}, paths relative to the manifest."""
    manifest_path = Path(manifest_path)
    data = read_json(manifest_path)
    if not isinstance(data, dict) or not isinstance(data.get("models"), list) or not isinstance(
        data.get("mappings"), list
    ):
        raise ParseError(f"{manifest_path}: manifest needs 'models' and 'mappings' lists")
    base = manifest_path.parent
    models = [load_gui_model(base / p, strict=strict) for p in data["models"]]
    if len(data["mappings"]) != max(len(models) - 1, 0):
        raise ValidationError(
            f"{manifest_path}: {len(models)} models need {len(models) - 1} mappings, "
            f"got {len(data['mappings'])}"
        )
    mappings = [
        load_mapping(base / p, models[k], models[k + 1]) for k, p in enumerate(data["mappings"])
    ]
    return VersionChain(models, mappings)


# ---------------------------------------------------------------------------
# mutations


class MutationKind(str, enum.Enum):
    RENAME_TITLE = "RENAME_TITLE"
    MOVE = "MOVE"
    CHANGE_INDEX = "CHANGE_INDEX"
    DELETE_WIDGET = "DELETE_WIDGET"
    DELETE_WINDOW = "DELETE_WINDOW"
    ADD_WIDGET = "ADD_WIDGET"
    REWIRE_MENU = "REWIRE_MENU"


@dataclass(frozen=True)
class MutationOp:
    """One edit.  ``target`` is a widget id, except for DELETE_WINDOW and
    ADD_WIDGET where it names a window.  ``value`` depends on the kind:

    RENAME_TITLE  new title
    MOVE          {"parent": widget id or None, "position": list position or None}
    CHANGE_INDEX  new sibling index
    ADD_WIDGET    widget object as in model files
    REWIRE_MENU   widget id of the new owning menu
    """

    kind: MutationKind
    target: str
    value: Any = None

    def describe(self) -> str:
        return f"{self.kind.value}({self.target!r})"


def parse_mutation_script(data: Any) -> tuple[list[MutationOp], str | None]:
    """Script is a list of ops or {"new_label": ..., "ops": [...]}."""
    label = None
    if isinstance(data, dict):
        label = data.get("new_label")
        data = data.get("ops")
    if not isinstance(data, list):
        raise ValidationError("mutation script must be a list of operations", "ops")
    ops = []
    for i, raw in enumerate(data):
        if not isinstance(raw, dict) or "op" not in raw or "target" not in raw:
            raise ValidationError("operation needs 'op' and 'target'", f"ops[{i}]")
        try:
            kind = MutationKind(raw["op"])
        except ValueError:
            raise ValidationError(f"unknown operation {raw['op']!r}", f"ops[{i}].op") from None
        ops.append(MutationOp(kind, raw["target"], raw.get("value")))
    return ops, label


def mutation_to_dict(op: MutationOp) -> dict:
    return {"op": op.kind.value, "target": op.target, "value": op.value}


def _find_widget(doc, widget_id):
    for win in doc["windows"]:
        for i, wd in enumerate(win["widgets"]):
            if wd["widget_id"] == widget_id:
                return win, i, wd
    raise MutationError(f"widget {widget_id!r} does not exist")


def _descendants(win, widget_id) -> set[str]:
    out = {widget_id}
    grew = True
    while grew:
        grew = False
        for wd in win["widgets"]:
            if wd["parent"] in out and wd["widget_id"] not in out:
                out.add(wd["widget_id"])
                grew = True
    return out


def _reparent(win, idx, wd, new_parent, position=None):
    if new_parent is not None:
        ids = {w["widget_id"] for w in win["widgets"]}
        if new_parent not in ids:
            raise MutationError(f"new parent {new_parent!r} is not in window {win['window_id']!r}")
        if new_parent in _descendants(win, wd["widget_id"]):
            raise MutationError(f"moving {wd['widget_id']!r} under {new_parent!r} creates a cycle")
    wd["parent"] = new_parent
    if position is not None:
        del win["widgets"][idx]
        win["widgets"].insert(max(0, min(position, len(win["widgets"]))), wd)


def _apply(doc, op: MutationOp, deleted: set[str]) -> None:
    kind = op.kind
    if kind is MutationKind.DELETE_WINDOW:
        keep = [w for w in doc["windows"] if w["window_id"] != op.target]
        if len(keep) == len(doc["windows"]):
            raise MutationError(f"window {op.target!r} does not exist")
        gone = next(w for w in doc["windows"] if w["window_id"] == op.target)
        deleted.update(wd["widget_id"] for wd in gone["widgets"])
        doc["windows"] = keep
        # openers of a deleted window lose that action
        for win in keep:
            for wd in win["widgets"]:
                wd["actions"] = [
                    a for a in wd["actions"] if not (a["kind"] == "WINDOW_OPEN" and a["target"] == op.target)
                ]
        return
    if kind is MutationKind.ADD_WIDGET:
        win = next((w for w in doc["windows"] if w["window_id"] == op.target), None)
        if win is None:
            raise MutationError(f"window {op.target!r} does not exist")
        if not isinstance(op.value, dict) or "widget_id" not in op.value:
            raise MutationError("ADD_WIDGET needs a widget object")
        if any(op.value["widget_id"] in {wd["widget_id"] for wd in w["widgets"]} for w in doc["windows"]):
            raise MutationError(f"widget id {op.value['widget_id']!r} already in use")
        new = {"parent": None, "actions": []}
        new.update(copy.deepcopy(op.value))
        win["widgets"].append(new)
        return

    win, idx, wd = _find_widget(doc, op.target)
    if kind is MutationKind.RENAME_TITLE:
        if not isinstance(op.value, str) or op.value == wd["title"]:
            raise MutationError("RENAME_TITLE needs a different string title")
        wd["title"] = op.value
    elif kind is MutationKind.CHANGE_INDEX:
        if not isinstance(op.value, int) or isinstance(op.value, bool) or op.value == wd["index"]:
            raise MutationError("CHANGE_INDEX needs a different integer index")
        wd["index"] = op.value
    elif kind is MutationKind.DELETE_WIDGET:
        victims = _descendants(win, wd["widget_id"])
        deleted.update(victims)
        win["widgets"] = [w for w in win["widgets"] if w["widget_id"] not in victims]
    elif kind is MutationKind.MOVE:
        value = op.value or {}
        if not isinstance(value, dict):
            raise MutationError("MOVE needs {'parent': ..., 'position': ...}")
        new_parent = value.get("parent", wd["parent"])
        position = value.get("position")
        if new_parent == wd["parent"] and (position is None or position == idx):
            raise MutationError("MOVE changes neither parent nor position")
        _reparent(win, idx, wd, new_parent, position)
    elif kind is MutationKind.REWIRE_MENU:
        menu = next((w for w in win["widgets"] if w["widget_id"] == op.value), None)
        if menu is None or not any(a["kind"] == EventKind.MENU_OPEN.value for a in menu["actions"]):
            raise MutationError(f"{op.value!r} is not a menu in window {win['window_id']!r}")
        if op.value == wd["parent"]:
            raise MutationError(f"{op.target!r} already sits under menu {op.value!r}")
        _reparent(win, idx, wd, op.value)


def mutate(
    model: GuiModel, ops: Sequence[MutationOp], new_label: str
) -> tuple[GuiModel, EquivalenceMapping]:
    """Apply ``ops`` in order; return the new model and its ground-truth mapping.

    Surviving widgets keep their ids and map to themselves.  Deleted widgets
    (including whole subtrees and windows) stay unmapped, and so do widgets
    added later under a recycled id.
    """
    doc = model_to_dict(model)
    doc["version_label"] = new_label
    deleted: set[str] = set()
    for op in ops:
        try:
            _apply(doc, op, deleted)
            parse_gui_model(copy.deepcopy(doc))
        except (MutationError, ValidationError, KeyError, TypeError) as exc:
            raise MutationError(f"{op.describe()} is not applicable: {exc}") from exc
    new = parse_gui_model(doc)
    pairs = {w: w for w in model.widget_by_id if w not in deleted and w in new.widget_by_id}
    return new, EquivalenceMapping(model.version_label, new_label, pairs)
