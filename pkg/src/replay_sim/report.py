"""CSV and stacked-bar SVG output for category distributions."""

from __future__ import annotations

import io
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .analysis import CATEGORIES, CategoryDistribution
from .errors import ReportIOError

CSV_HEADER = "origin_version,target_version,length,category,count,proportion"

CATEGORY_LABELS = {
    1: "Replayable by Id",
    2: "Replayable after repair",
    3: "Repairable",
    4: "Unrepairable",
}
CATEGORY_COLORS = {1: "#2b8a3e", 2: "#74b816", 3: "#f59f00", 4: "#c92a2a"}


def _csv_field(text: str) -> str:
    if any(c in text for c in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def _fmt_count(c: float) -> str:
    return str(int(c)) if float(c).is_integer() else f"{c:.6f}"


def render_csv(distributions: Sequence[CategoryDistribution]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for d in sorted(distributions, key=lambda d: d.key):
        for cat in CATEGORIES:
            buf.write(
                f"{_csv_field(d.origin_version)},{_csv_field(d.target_version)},{d.length},"
                f"{int(cat)},{_fmt_count(d.count(cat))},{d.proportion(cat):.6f}\n"
            )
    return buf.getvalue()


BAR_W = 14
BAR_GAP = 3
GROUP_GAP = 22
PLOT_H = 240
MARGIN_L = 50
MARGIN_T = 40
MARGIN_B = 110


def render_svg(distributions: Sequence[CategoryDistribution], title: str = "") -> str:
    """One bar group per (origin, target) pair, one bar per test length, four stacked segments."""
    groups: dict[tuple[str, str], list[CategoryDistribution]] = {}
    for d in sorted(distributions, key=lambda d: d.key):
        groups.setdefault((d.origin_version, d.target_version), []).append(d)
    lengths = sorted({d.length for d in distributions})
    group_w = len(lengths) * (BAR_W + BAR_GAP) - BAR_GAP
    width = MARGIN_L + len(groups) * (group_w + GROUP_GAP) + 180
    height = MARGIN_T + PLOT_H + MARGIN_B
    base_y = MARGIN_T + PLOT_H

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN_L}" y="20" font-size="14">{escape(title)}</text>')
    for tick in range(0, 101, 25):
        y = base_y - PLOT_H * tick / 100
        out.append(
            f'<line x1="{MARGIN_L - 4}" y1="{y:.2f}" x2="{MARGIN_L + len(groups) * (group_w + GROUP_GAP)}" '
            f'y2="{y:.2f}" stroke="#dddddd"/>'
        )
        out.append(f'<text x="{MARGIN_L - 8}" y="{y + 3:.2f}" text-anchor="end">{tick}%</text>')

    x = MARGIN_L + GROUP_GAP / 2
    for (origin, target), ds in groups.items():
        by_len = {d.length: d for d in ds}
        for i, n in enumerate(lengths):
            d = by_len.get(n)
            if d is None:
                continue
            bx = x + i * (BAR_W + BAR_GAP)
            y = float(base_y)
            for cat in CATEGORIES:
                h = PLOT_H * d.proportion(cat)
                y -= h
                out.append(
                    f'<rect x="{bx:.2f}" y="{y:.2f}" width="{BAR_W}" height="{h:.2f}" '
                    f'fill="{CATEGORY_COLORS[int(cat)]}"><title>{escape(origin)} to {escape(target)}, '
                    f"length {n}, {CATEGORY_LABELS[int(cat)]}: {d.proportion(cat):.4f}</title></rect>"
                )
        label = origin if origin == target else f"{origin} → {target}"
        lx = x + group_w / 2
        out.append(
            f'<text x="{lx:.2f}" y="{base_y + 12}" text-anchor="end" '
            f'transform="rotate(-45 {lx:.2f} {base_y + 12})">{escape(label)}</text>'
        )
        x += group_w + GROUP_GAP

    lx = MARGIN_L + len(groups) * (group_w + GROUP_GAP) + 20
    for i, cat in enumerate(reversed(CATEGORIES)):
        ly = MARGIN_T + 16 * i
        out.append(f'<rect x="{lx}" y="{ly}" width="10" height="10" fill="{CATEGORY_COLORS[int(cat)]}"/>')
        out.append(f'<text x="{lx + 14}" y="{ly + 9}">{CATEGORY_LABELS[int(cat)]}</text>')
    out.append(
        f'<text x="{lx}" y="{MARGIN_T + 80}">bars per group: lengths {", ".join(map(str, lengths))}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_report(
    distributions: Sequence[CategoryDistribution], fmt: str, path, title: str = ""
) -> Path:
    if not distributions:
        raise ReportIOError("nothing to report: no distributions")
    fmt = fmt.lower()
    if fmt == "csv":
        text = render_csv(distributions)
    elif fmt == "svg":
        text = render_svg(distributions, title)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReportIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path
