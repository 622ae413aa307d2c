from __future__ import annotations

import sys
from pathlib import Path

import pytest

from replay_sim.model import parse_gui_model

FIXTURES = Path(__file__).parent / "fixtures"
sys.path.insert(0, str(Path(__file__).parent))


def widget(wid, type_name="Button", title=None, index=0, parent=None, actions=("SYSTEM",), target=None):
    return {
        "widget_id": wid,
        "type_name": type_name,
        "title": wid if title is None else title,
        "index": index,
        "parent": parent,
        "actions": [
            {"kind": k, "target": target if k == "WINDOW_OPEN" else None} for k in actions
        ],
    }


def window(wid, widgets, title=None, modal=False, start=False):
    return {
        "window_id": wid,
        "title": title or wid.title(),
        "modal": modal,
        "open_at_start": start,
        "widgets": widgets,
    }


def model_doc(windows, label="v1"):
    return {"version_label": label, "windows": windows}


def two_button_doc(label="v1"):
    return model_doc([window("main", [widget("a"), widget("b", index=1)], start=True)], label)


def menu_doc(label="v1"):
    """Menu bar "File" holding "Exit", plus a "Help" button."""
    return model_doc(
        [
            window(
                "main",
                [
                    widget("File", "Menu", actions=("MENU_OPEN",)),
                    widget("Exit", "MenuItem", parent="File", actions=("TERMINATE",)),
                    widget("Help", "Button"),
                ],
                start=True,
            )
        ],
        label,
    )


def prefs_doc(label="v1"):
    """Main window with a button and an opener for a modal Prefs dialog."""
    return model_doc(
        [
            window(
                "main",
                [
                    widget("m", "Button"),
                    widget("open", "Button", index=1, actions=("WINDOW_OPEN",), target="prefs"),
                ],
                start=True,
            ),
            window(
                "prefs",
                [widget("p", "Button"), widget("c", "Button", index=1, actions=("WINDOW_CLOSE",))],
                modal=True,
            ),
        ],
        label,
    )


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def menu_model():
    return parse_gui_model(menu_doc())


@pytest.fixture
def prefs_model():
    return parse_gui_model(prefs_doc())
