"""Independent reference implementations used as test oracles.

Nothing here imports the package's graph, generator or classifier code: the
oracles work on plain model dicts, keep window configurations as ordered
stacks (not the canonical segments used by the library) and find reaching
steps by enumerating valid sequences in lexicographic order.
"""

from __future__ import annotations

from itertools import product

MASK = 0xFFFFFFFFFFFFFFFF


def fnv1a64_reference(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = h ^ b
        h = (h * 0x100000001B3) % (1 << 64)
    return h


def widget_id_reference(window_title, type_name, title, index) -> str:
    text = f"{window_title}\x1f{type_name}\x1f{title}\x1f{index}"
    return format(fnv1a64_reference(text.encode("utf-8")), "016x")


class OracleModel:
    """Brute-force event-flow semantics over a raw model dict."""

    def __init__(self, doc: dict):
        self.doc = doc
        self.windows = {w["window_id"]: w for w in doc["windows"]}
        self.widgets = {}
        self.window_of = {}
        for w in doc["windows"]:
            for wd in w["widgets"]:
                self.widgets[wd["widget_id"]] = wd
                self.window_of[wd["widget_id"]] = w["window_id"]
        self.events = {}
        for wid, wd in self.widgets.items():
            for a in wd["actions"]:
                self.events[f"{wid}:{a['kind']}"] = (wid, a["kind"], a.get("target"))
        self._explore()

    # -- structure

    def _is_menu(self, wid):
        return any(a["kind"] == "MENU_OPEN" for a in self.widgets[wid]["actions"])

    def _nearest_menu(self, wid):
        p = self.widgets[wid]["parent"]
        while p is not None:
            if self._is_menu(p):
                return p
            p = self.widgets[p]["parent"]
        return None

    def top_level(self, window_id):
        return {
            e for e, (wid, _, _) in self.events.items()
            if self.window_of[wid] == window_id and self._nearest_menu(wid) is None
        }

    def menu_children(self, menu_wid):
        return {e for e, (wid, _, _) in self.events.items() if self._nearest_menu(wid) == menu_wid}

    # -- configurations as ordered stacks of open windows

    def active(self, stack):
        last_modal = max((i for i, w in enumerate(stack) if self.windows[w]["modal"]), default=0)
        return stack[last_modal:]

    def context(self, stack):
        out = set()
        for w in self.active(stack):
            out |= self.top_level(w)
        return out

    def fireable(self, stack):
        out = set(self.context(stack))
        changed = True
        while changed:
            changed = False
            for e in list(out):
                wid, kind, _ = self.events[e]
                if kind == "MENU_OPEN":
                    new = self.menu_children(wid) - out
                    if new:
                        out |= new
                        changed = True
        return out

    def after(self, stack, e):
        wid, kind, target = self.events[e]
        if kind == "TERMINATE":
            return None
        if kind == "WINDOW_OPEN":
            return stack if target in stack else stack + (target,)
        if kind == "WINDOW_CLOSE":
            return tuple(w for w in stack if w != self.window_of[wid])
        return stack

    def _explore(self):
        start = ()
        for w in self.doc["windows"]:
            if w["open_at_start"]:
                start = start + (w["window_id"],)
        self.start = start
        seen = {start}
        todo = [start]
        self.edges = set()
        self.nodes = set()
        while todo:
            stack = todo.pop()
            for x in self.fireable(stack):
                self.nodes.add(x)
                nxt = self.after(stack, x)
                if nxt is None:
                    continue
                for y in self.context(nxt):
                    self.edges.add((x, y))
                if self.events[x][1] == "MENU_OPEN":
                    for y in self.menu_children(self.events[x][0]):
                        self.edges.add((x, y))
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        self.initial = self.context(start)

    # -- queries

    def valid(self, seq) -> bool:
        if not seq or seq[0] not in self.initial:
            return False
        return all((a, b) in self.edges for a, b in zip(seq, seq[1:]))

    def prefix(self, e):
        """First valid sequence ending in e, by (length, lexicographic order), minus e."""
        if e in self.initial:
            return []
        events = sorted(self.nodes)
        for k in range(1, len(events) + 1):
            for cand in self._valid_of_length(events, k):
                if cand[-1] in events and (cand[-1], e) in self.edges:
                    return list(cand)
        return None

    def _valid_of_length(self, events, k):
        # lexicographic enumeration of valid sequences of length k
        def rec(seq):
            if len(seq) == k:
                yield tuple(seq)
                return
            for nxt in events:
                if (not seq and nxt in self.initial) or (seq and (seq[-1], nxt) in self.edges):
                    yield from rec(seq + [nxt])

        yield from rec([])

    def stable_id(self, wid):
        wd = self.widgets[wid]
        win = self.windows[self.window_of[wid]]
        return widget_id_reference(win["title"], wd["type_name"], wd["title"], wd["index"])

    def supports(self, wid, kind):
        return wid in self.widgets and any(a["kind"] == kind for a in self.widgets[wid]["actions"])


def all_pairs_by_enumeration(om: OracleModel):
    """Every (x, y) over the full event set that the edge relation admits."""
    ev = sorted(om.events)
    return {(x, y) for x, y in product(ev, ev) if (x, y) in om.edges}


def oracle_classify(main_events, old: OracleModel, new: OracleModel, pairs: dict) -> int:
    """Categories 1-4 applied literally to prefix + main events."""
    prefix = old.prefix(main_events[0])
    seq = prefix + list(main_events)
    images = []
    for e in seq:
        wid, kind = e.rsplit(":", 1)
        target = pairs.get(wid)
        if target is None or not new.supports(target, kind):
            return 4
        images.append(f"{target}:{kind}")
    if not new.valid(images):
        return 3
    same = all(
        old.stable_id(a.rsplit(":", 1)[0]) == new.stable_id(b.rsplit(":", 1)[0])
        for a, b in zip(seq, images)
    )
    return 1 if same else 2
