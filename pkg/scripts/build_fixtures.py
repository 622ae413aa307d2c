#!/usr/bin/env python3
"""Regenerate the JSON fixtures under tests/fixtures/ (deterministic)."""

from __future__ import annotations

import json
from pathlib import Path

from replay_sim.evolution import mutate, mutation_to_dict, save_mapping
from replay_sim.model import dump_json, parse_gui_model, save_gui_model
from replay_sim.prng import SplitMix64
from replay_sim.synthetic import application_model, random_evolution

ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def mindmap_app() -> dict:
    """One main window, 120 widgets: 8 menus with items, a toolbar, status labels."""
    widgets = []

    def add(wid, type_name, title, index, parent, actions):
        widgets.append(
            {
                "widget_id": wid,
                "type_name": type_name,
                "title": title,
                "index": index,
                "parent": parent,
                "actions": [{"kind": k, "target": None} for k in actions],
            }
        )

    menus = ["File", "Edit", "View", "Insert", "Format", "Navigate", "Tools", "Help"]
    for m, name in enumerate(menus):
        mid = f"menu_{name.lower()}"
        add(mid, "JMenu", name, m, None, ["MENU_OPEN"])
        for i in range(9):
            kind = "TERMINATE" if (name == "File" and i == 8) else "SYSTEM"
            title = "Quit" if kind == "TERMINATE" else f"{name} item {i}"
            add(f"{mid}_item{i}", "JMenuItem", title, i, mid, [kind])
    add("toolbar", "JToolBar", "", 0, None, [])
    for i in range(25):
        add(f"tool{i}", "JButton", f"Tool {i}", i, "toolbar", ["SYSTEM"])
    for i in range(14):
        add(f"status{i}", "JLabel", f"Status {i}", i, None, [])
    assert len(widgets) == 120
    return {
        "version_label": "2001-01-15",
        "windows": [
            {
                "window_id": "main",
                "title": "MindMap",
                "modal": False,
                "open_at_start": True,
                "widgets": widgets,
            }
        ],
    }


REFERENCE_SEED = 20120213


def reference_chain(folder: Path) -> None:
    rng = SplitMix64(REFERENCE_SEED)
    base = application_model(
        rng, "r0", menus=5, items_per_menu=6, toolbar=8, dialogs=2, dialog_widgets=5, labels=6
    )
    folder.mkdir(parents=True, exist_ok=True)
    save_gui_model(base, folder / "r0.json")
    models, mappings = ["r0.json"], []
    current = base
    for k in range(1, 6):
        label = f"r{k}"
        _, ops = random_evolution(rng, current, label, 3 + rng.below(4))
        script = {"new_label": label, "ops": [mutation_to_dict(op) for op in ops]}
        (folder / f"mutations_r{k - 1}_r{k}.json").write_text(dump_json(script), encoding="utf-8")
        new, mapping = mutate(current, ops, label)
        save_gui_model(new, folder / f"{label}.json")
        save_mapping(mapping, folder / f"map_r{k - 1}_r{k}.json")
        models.append(f"{label}.json")
        mappings.append(f"map_r{k - 1}_r{k}.json")
        current = new
    (folder / "chain.json").write_text(dump_json({"models": models, "mappings": mappings}), encoding="utf-8")


def main() -> None:
    ROOT.mkdir(parents=True, exist_ok=True)
    fm = mindmap_app()
    parse_gui_model(fm)
    (ROOT / "mindmap-app.json").write_text(json.dumps(fm, indent=2) + "\n", encoding="utf-8")
    reference_chain(ROOT / "reference_chain")


if __name__ == "__main__":
    main()
