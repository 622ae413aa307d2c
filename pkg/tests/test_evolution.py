import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES, model_doc, prefs_doc, widget, window
from replay_sim.errors import MutationError, ValidationError, VersionMismatch
from replay_sim.evolution import (
    EquivalenceMapping,
    MutationKind,
    MutationOp,
    compose,
    identity_mapping,
    load_chain,
    load_mapping,
    map_event,
    mutate,
    parse_mutation_script,
    save_mapping,
    validate_mapping,
)
from replay_sim.model import model_digest, parse_gui_model
from replay_sim.prng import SplitMix64
from replay_sim.synthetic import random_chain, random_evolution, random_model


def write(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return p


def test_identity_mapping_file(tmp_path, prefs_model):
    pairs = [{"from": w, "to": w} for w in prefs_model.widget_by_id]
    p = write(tmp_path, "m.json", {"from_version": "v1", "to_version": "v1", "pairs": pairs})
    m = load_mapping(p, prefs_model, prefs_model)
    assert m == identity_mapping(prefs_model)
    for e in prefs_model.events:
        assert map_event(m, e, prefs_model) == e


def test_non_injective_mapping_rejected(tmp_path):
    payload = {"from_version": "a", "to_version": "b", "pairs": [{"from": "w1", "to": "w1"}, {"from": "w2", "to": "w1"}]}
    with pytest.raises(ValidationError, match="injective"):
        load_mapping(write(tmp_path, "m.json", payload))


def test_dangling_mapping_rejected(prefs_model):
    m = EquivalenceMapping("v1", "v1", {"ghost": "m"})
    with pytest.raises(ValidationError, match="ghost"):
        validate_mapping(m, prefs_model, prefs_model)


def test_fixture_mapping_pair_count():
    path = FIXTURES / "reference_chain" / "map_r0_r1.json"
    # independent count: lines carrying a "from" key in the pretty-printed pairs array
    expected = sum(1 for line in path.read_text().splitlines() if line.strip().startswith('"from"'))
    assert len(load_mapping(path)) == expected > 0


def test_map_event_requires_same_kind():
    old = parse_gui_model(
        model_doc([window("main", [widget("x", actions=("SYSTEM", "MENU_OPEN")), widget("y", index=1)], start=True)], "a")
    )
    new = parse_gui_model(model_doc([window("main", [widget("x"), widget("y", index=1)], start=True)], "b"))
    m = identity_mapping(old, new)
    assert map_event(m, "x:SYSTEM", new) == "x:SYSTEM"
    assert map_event(m, "x:MENU_OPEN", new) is None
    deleted = EquivalenceMapping("a", "b", {"x": "x"})
    assert map_event(deleted, "y:SYSTEM", new) is None


def test_compose():
    m = EquivalenceMapping("a", "b", {"1": "x", "2": "y", "3": "z"})
    ident_a = EquivalenceMapping("a", "a", {"1": "1", "2": "2", "3": "3"})
    ident_b = EquivalenceMapping("b", "b", {"x": "x", "y": "y", "z": "z"})
    assert compose(ident_a, m) == m
    assert compose(m, ident_b) == m
    partial = EquivalenceMapping("b", "c", {"x": "p", "z": "q"})
    assert compose(m, partial).pairs == {"1": "p", "3": "q"}
    with pytest.raises(VersionMismatch):
        compose(partial, m)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**64 - 1))
def test_compose_is_associative(seed):
    chain = random_chain(seed, versions=4, ops_per_step=(0, 4))
    m1, m2, m3 = chain.mappings
    assert compose(compose(m1, m2), m3) == compose(m1, compose(m2, m3))


def test_empty_script_is_identity(prefs_model):
    new, m = mutate(prefs_model, [], "v2")
    assert model_digest(new) == model_digest(prefs_model)
    assert m.pairs == {w: w for w in prefs_model.widget_by_id}
    assert new.version_label == "v2"


def test_delete_window():
    old = parse_gui_model(prefs_doc())
    new, m = mutate(old, [MutationOp(MutationKind.DELETE_WINDOW, "prefs")], "v2")
    assert len(new.windows) == len(old.windows) - 1
    assert "p" not in m.pairs and "c" not in m.pairs
    # the opener survives but loses its dangling action
    assert m.pairs["open"] == "open"
    assert map_event(m, "open:WINDOW_OPEN", new) is None


def test_rename_keeps_mapping_changes_id():
    old = parse_gui_model(prefs_doc())
    new, m = mutate(old, [MutationOp(MutationKind.RENAME_TITLE, "m", "Open File...")], "v2")
    assert m.pairs["m"] == "m"
    assert old.stable_ids["m"] != new.stable_ids["m"]


def test_move_and_rewire_keep_ids():
    doc = model_doc(
        [
            window(
                "main",
                [
                    widget("f", "Menu", actions=("MENU_OPEN",)),
                    widget("e", "Menu", index=1, actions=("MENU_OPEN",)),
                    widget("x", "MenuItem", parent="f"),
                ],
                start=True,
            )
        ]
    )
    old = parse_gui_model(doc)
    new, m = mutate(
        old,
        [
            MutationOp(MutationKind.REWIRE_MENU, "x", "e"),
            MutationOp(MutationKind.MOVE, "e", {"parent": None, "position": 0}),
        ],
        "v2",
    )
    assert new.widget_by_id["x"].parent == "e"
    assert [w.widget_id for w in new.windows[0].widgets][0] == "e"
    assert old.stable_ids == new.stable_ids
    assert m.pairs == {"f": "f", "e": "e", "x": "x"}


def test_add_and_delete_recycled_id_stays_unmapped():
    old = parse_gui_model(prefs_doc())
    spec = {"widget_id": "m", "type_name": "Button", "title": "m", "index": 0, "parent": None,
            "actions": [{"kind": "SYSTEM", "target": None}]}
    new, m = mutate(
        old,
        [MutationOp(MutationKind.DELETE_WIDGET, "m"), MutationOp(MutationKind.ADD_WIDGET, "main", spec)],
        "v2",
    )
    assert "m" in new.widget_by_id
    assert "m" not in m.pairs


@pytest.mark.parametrize(
    "op",
    [
        MutationOp(MutationKind.RENAME_TITLE, "ghost", "x"),
        MutationOp(MutationKind.DELETE_WINDOW, "main"),
        MutationOp(MutationKind.CHANGE_INDEX, "m", 0),
        MutationOp(MutationKind.REWIRE_MENU, "m", "open"),
        MutationOp(MutationKind.MOVE, "m", {"parent": "zz"}),
        MutationOp(MutationKind.ADD_WIDGET, "main", {"widget_id": "p", "type_name": "B", "title": "", "index": 0}),
    ],
)
def test_inapplicable_ops(op):
    with pytest.raises(MutationError, match=op.kind.value):
        mutate(parse_gui_model(prefs_doc()), [op], "v2")


def test_change_index_clash_is_rejected():
    doc = model_doc([window("main", [widget("a"), widget("b", index=1)], start=True)])
    with pytest.raises(MutationError):
        mutate(parse_gui_model(doc), [MutationOp(MutationKind.CHANGE_INDEX, "a", 1)], "v2")


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**64 - 1))
def test_ground_truth_mappings_validate(seed):
    rng = SplitMix64(seed)
    old = random_model(rng, "a")
    _, ops = random_evolution(rng, old, "b", 1 + rng.below(5))
    new, m = mutate(old, ops, "b")
    validate_mapping(m, old, new)
    assert len(set(m.pairs.values())) == len(m.pairs)


def test_random_evolutions_cover_every_kind():
    seen = set()
    rng = SplitMix64(77)
    for i in range(60):
        random_evolution(rng, random_model(rng, "a"), "b", 4, kinds_seen=seen)
    assert seen == set(MutationKind)


def test_mutation_script_forms():
    ops, label = parse_mutation_script({"new_label": "z", "ops": [{"op": "DELETE_WIDGET", "target": "a"}]})
    assert label == "z" and ops == [MutationOp(MutationKind.DELETE_WIDGET, "a")]
    ops, label = parse_mutation_script([{"op": "RENAME_TITLE", "target": "a", "value": "b"}])
    assert label is None and ops[0].value == "b"
    with pytest.raises(ValidationError):
        parse_mutation_script([{"op": "EXPLODE", "target": "a"}])


def test_reference_chain_manifest_loads():
    chain = load_chain(FIXTURES / "reference_chain" / "chain.json")
    assert chain.labels == ["r0", "r1", "r2", "r3", "r4", "r5"]
    assert len(chain.mappings) == 5


def test_reference_chain_scripts_reproduce_models():
    folder = FIXTURES / "reference_chain"
    chain = load_chain(folder / "chain.json")
    for k in range(1, 6):
        ops, label = parse_mutation_script(json.loads((folder / f"mutations_r{k - 1}_r{k}.json").read_text()))
        new, m = mutate(chain.models[k - 1], ops, label)
        assert new == chain.models[k]
        assert m == chain.mappings[k - 1]


def test_mapping_save_load_round_trip(tmp_path, prefs_model):
    m = identity_mapping(prefs_model)
    save_mapping(m, tmp_path / "m.json")
    assert load_mapping(tmp_path / "m.json", prefs_model, prefs_model) == m
