"""Seeded synthetic GUI models and evolutions for tests, fixtures and benchmarks."""

from __future__ import annotations

from .errors import MutationError
from .evolution import MutationKind, MutationOp, VersionChain, mutate
from .model import GuiModel, parse_gui_model
from .prng import SplitMix64

WORDS = (
    "Open", "Save", "Close", "Copy", "Paste", "Find", "Zoom", "Print", "Undo", "Redo",
    "Bold", "Italic", "Export", "Import", "Help", "About", "Fold", "Split", "Join", "Sort",
)


class _Builder:
    def __init__(self, rng: SplitMix64):
        self.rng = rng
        self.serial = 0
        self.windows = []

    def fresh(self, prefix):
        self.serial += 1
        return f"{prefix}{self.serial}"

    def window(self, title, modal=False, start=False):
        win = {
            "window_id": self.fresh("win"),
            "title": title,
            "modal": modal,
            "open_at_start": start,
            "widgets": [],
        }
        self.windows.append(win)
        return win

    def widget(self, win, type_name, actions, parent=None, title=None):
        used = {w["index"] for w in win["widgets"] if w["parent"] == parent and w["type_name"] == type_name}
        wd = {
            "widget_id": self.fresh("w"),
            "type_name": type_name,
            "title": title if title is not None else self.rng.choice(WORDS),
            "index": next(i for i in range(len(used) + 1) if i not in used),
            "parent": parent,
            "actions": [{"kind": k, "target": t} for k, t in actions],
        }
        win["widgets"].append(wd)
        return wd


def random_model(
    rng: SplitMix64,
    label: str = "v0",
    max_events: int = 12,
    max_windows: int = 3,
) -> GuiModel:
    """Small random model with menus, dialogs, close buttons and at most ``max_events`` events."""
    b = _Builder(rng)
    main = b.window("Main", start=True)
    budget = max_events
    menus = []

    def spend(n=1):
        nonlocal budget
        budget -= n
        return budget >= 0

    if spend():
        b.widget(main, "Button", [("SYSTEM", None)])
    dialogs = []
    for _ in range(rng.below(max_windows)):
        dialogs.append(b.window(f"Dialog {len(dialogs) + 1}", modal=rng.chance(1, 2)))
    while budget > 0:
        r = rng.below(10)
        if r < 3 and spend():
            host = rng.choice([main] + dialogs)
            parent = rng.choice(menus)["widget_id"] if menus and rng.chance(1, 2) and host is main else None
            b.widget(host, "Button", [("SYSTEM", None)], parent=parent)
        elif r < 5 and spend():
            parent = rng.choice(menus)["widget_id"] if menus and rng.chance(1, 3) else None
            menus.append(b.widget(main, "Menu", [("MENU_OPEN", None)], parent=parent))
        elif r < 6 and menus and spend():
            b.widget(main, "MenuItem", [("SYSTEM", None)], parent=rng.choice(menus)["widget_id"])
        elif r < 8 and dialogs and spend():
            target = rng.choice(dialogs)
            host = rng.choice([main] + [d for d in dialogs if d is not target])
            parent = rng.choice(menus)["widget_id"] if host is main and menus and rng.chance(1, 2) else None
            b.widget(host, "Button", [("WINDOW_OPEN", target["window_id"])], parent=parent)
        elif r < 9 and dialogs and spend():
            b.widget(rng.choice(dialogs), "Button", [("WINDOW_CLOSE", None)], title="Close")
        elif r < 10 and spend():
            if rng.chance(1, 4) and not any(
                a["kind"] == "TERMINATE" for wd in main["widgets"] for a in wd["actions"]
            ):
                b.widget(main, "MenuItem" if menus else "Button", [("TERMINATE", None)],
                         parent=menus[0]["widget_id"] if menus else None, title="Exit")
            else:
                b.widget(main, "Label", [])
    return parse_gui_model({"version_label": label, "windows": b.windows})


def random_op(rng: SplitMix64, model: GuiModel, serial: int) -> MutationOp:
    """One mutation of a randomly chosen kind; may be inapplicable."""
    kind = rng.choice(tuple(MutationKind))
    widgets = [wd for w in model.windows for wd in w.widgets]
    if kind is MutationKind.DELETE_WINDOW:
        return MutationOp(kind, rng.choice(model.windows).window_id)
    if kind is MutationKind.ADD_WIDGET:
        win = rng.choice(model.windows)
        action = rng.choice(("SYSTEM", "SYSTEM", "WINDOW_CLOSE", None))
        value = {
            "widget_id": f"n{serial}",
            "type_name": "Button",
            "title": rng.choice(WORDS),
            "index": 100 + serial,
            "parent": None,
            "actions": [{"kind": action, "target": None}] if action else [],
        }
        return MutationOp(kind, win.window_id, value)
    if not widgets:
        return MutationOp(MutationKind.DELETE_WIDGET, "missing")
    wd = rng.choice(widgets)
    if kind is MutationKind.RENAME_TITLE:
        return MutationOp(kind, wd.widget_id, wd.title + " " + rng.choice(WORDS))
    if kind is MutationKind.CHANGE_INDEX:
        return MutationOp(kind, wd.widget_id, wd.index + 1 + rng.below(3))
    if kind is MutationKind.DELETE_WIDGET:
        return MutationOp(kind, wd.widget_id)
    window = model.window_by_id[model.window_of[wd.widget_id]]
    siblings = [w.widget_id for w in window.widgets if w.widget_id != wd.widget_id]
    if kind is MutationKind.MOVE:
        parent = rng.choice([None] + siblings) if rng.chance(1, 2) else wd.parent
        return MutationOp(kind, wd.widget_id, {"parent": parent, "position": rng.below(len(window.widgets))})
    menus = [w.widget_id for w in window.widgets if any(a.kind.value == "MENU_OPEN" for a in w.actions)]
    return MutationOp(kind, wd.widget_id, rng.choice(menus) if menus else "missing")


def random_evolution(
    rng: SplitMix64, model: GuiModel, new_label: str, n_ops: int, kinds_seen: set | None = None
) -> tuple[GuiModel, list[MutationOp]]:
    """Apply ``n_ops`` applicable random mutations (inapplicable draws are redrawn)."""
    ops: list[MutationOp] = []
    current = model
    attempts = 0
    while len(ops) < n_ops and attempts < 50 * (n_ops + 1):
        attempts += 1
        op = random_op(rng, current, attempts)
        try:
            current, _ = mutate(current, [op], new_label)
        except MutationError:
            continue
        ops.append(op)
        if kinds_seen is not None:
            kinds_seen.add(op.kind)
    return current, ops


def random_chain(
    seed: int,
    versions: int = 6,
    max_events: int = 12,
    max_windows: int = 3,
    ops_per_step: tuple[int, int] = (0, 3),
) -> VersionChain:
    rng = SplitMix64(seed)
    models = [random_model(rng, "v0", max_events, max_windows)]
    mappings = []
    for k in range(1, versions):
        lo, hi = ops_per_step
        n = lo + rng.below(hi - lo + 1)
        _, ops = random_evolution(rng, models[-1], f"v{k}", n)
        new, mapping = mutate(models[-1], ops, f"v{k}")
        models.append(new)
        mappings.append(mapping)
    return VersionChain(models, mappings)


def application_model(
    rng: SplitMix64,
    label: str,
    menus: int = 6,
    items_per_menu: int = 8,
    toolbar: int = 12,
    dialogs: int = 4,
    dialog_widgets: int = 6,
    labels: int = 0,
) -> GuiModel:
    """Desktop-application-shaped model: menu bar, toolbar, dialogs opened from menus."""
    b = _Builder(rng)
    main = b.window("Main", start=True)
    dialog_windows = [b.window(f"Dialog {i + 1}", modal=i % 2 == 0) for i in range(dialogs)]
    menu_ids = []
    for m in range(menus):
        menu = b.widget(main, "Menu", [("MENU_OPEN", None)], title=f"Menu {m}")
        menu_ids.append(menu["widget_id"])
        for i in range(items_per_menu):
            b.widget(main, "MenuItem", [("SYSTEM", None)], parent=menu["widget_id"], title=f"Item {m}.{i}")
    for i, dlg in enumerate(dialog_windows):
        b.widget(main, "MenuItem", [("WINDOW_OPEN", dlg["window_id"])],
                 parent=menu_ids[i % len(menu_ids)], title=f"{dlg['title']}...")
        for j in range(dialog_widgets):
            b.widget(dlg, "Button", [("SYSTEM", None)], title=f"Option {j}")
        b.widget(dlg, "Button", [("WINDOW_CLOSE", None)], title="Close")
    for i in range(toolbar):
        b.widget(main, "Button", [("SYSTEM", None)], title=f"Tool {i}")
    for i in range(labels):
        b.widget(main, "Label", [], title=f"Label {i}")
    b.widget(main, "MenuItem", [("TERMINATE", None)], parent=menu_ids[0], title="Exit")
    return parse_gui_model({"version_label": label, "windows": b.windows})
