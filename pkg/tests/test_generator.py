import hashlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES, menu_doc, model_doc, widget, window
from oracles import OracleModel, all_pairs_by_enumeration
from replay_sim.efg import derive_efg
from replay_sim.errors import NoWalkPossible, ValidationError
from replay_sim.generator import (
    GenerationParams,
    TestCase,
    dump_suite,
    effective_sequence,
    generate_all_length2,
    generate_random,
    generate_suite,
    load_suite,
    parse_suites,
    save_suite,
)
from replay_sim.model import load_gui_model, model_to_dict, parse_gui_model
from replay_sim.prng import SplitMix64, derive_seed
from replay_sim.synthetic import application_model, random_model


def test_splitmix64_reference_vector():
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(3)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
    ]


def test_below_is_in_range_and_covers():
    rng = SplitMix64(9)
    draws = [rng.below(7) for _ in range(2000)]
    assert set(draws) == set(range(7))


def test_derive_seed_depends_on_every_label():
    assert derive_seed(1, "v0", 3) != derive_seed(1, "v0", 4)
    assert derive_seed(1, "v0", 3) != derive_seed(2, "v0", 3)
    assert derive_seed(1, "v0", 3) == derive_seed(1, "v0", 3)


def test_effective_sequence(menu_model):
    g = derive_efg(menu_model)
    tc = TestCase(("Help:SYSTEM", "File:MENU_OPEN"), "v1")
    assert effective_sequence(g, tc) == ["Help:SYSTEM", "File:MENU_OPEN"]
    tc = TestCase(("Exit:TERMINATE",), "v1")
    assert effective_sequence(g, tc) == ["File:MENU_OPEN", "Exit:TERMINATE"]


def test_length2_on_three_buttons():
    doc = model_doc([window("main", [widget(f"b{i}", index=i) for i in range(3)], start=True)])
    suite = generate_all_length2(derive_efg(parse_gui_model(doc)))
    assert len(suite.cases(2)) == 9


def test_length2_matches_brute_force_edges(menu_model):
    suite = generate_all_length2(derive_efg(menu_model))
    oracle_edges = all_pairs_by_enumeration(OracleModel(model_to_dict(menu_model)))
    assert {tc.main_events for tc in suite.cases()} == oracle_edges
    ids = [tc.case_id for tc in suite.cases()]
    assert ids == sorted(ids)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**64 - 1))
def test_length2_size_equals_edge_count(seed):
    m = random_model(SplitMix64(seed), max_events=12)
    oracle = OracleModel(model_to_dict(m))
    assert len(generate_all_length2(derive_efg(m))) == len(all_pairs_by_enumeration(oracle))


def test_count_zero_gives_empty_suite(menu_model):
    suite = generate_random(derive_efg(menu_model), 3, 0, 1)
    assert len(suite) == 0
    assert not suite.groups[3].early_stopped


def test_single_walk_graph_stops_early():
    # a -> b -> c -> end: exactly one valid length-3 walk
    doc = model_doc(
        [
            window("main", [widget("a", actions=("WINDOW_OPEN",), target="w2")], start=True),
            window("w2", [widget("b", actions=("WINDOW_OPEN",), target="w3")], modal=True),
            window("w3", [widget("c", actions=("TERMINATE",))], modal=True),
        ]
    )
    g = derive_efg(parse_gui_model(doc))
    suite = generate_random(g, 3, 10, 5)
    assert [tc.main_events for tc in suite.cases()] == [("a:WINDOW_OPEN", "b:WINDOW_OPEN", "c:TERMINATE")]
    assert suite.groups[3].early_stopped
    assert suite.groups[3].requested == 10


def test_no_walk_possible():
    doc = model_doc([window("main", [widget("q", actions=("TERMINATE",))], start=True)])
    with pytest.raises(NoWalkPossible):
        generate_random(derive_efg(parse_gui_model(doc)), 2, 5, 1)


def test_fixed_seed_suite_files_are_byte_identical(tmp_path):
    g = derive_efg(load_gui_model(FIXTURES / "mindmap-app.json"))
    digests = []
    for name in ("a.json", "b.json"):
        save_suite(generate_random(g, 4, 100, 42), tmp_path / name)
        digests.append(hashlib.sha256((tmp_path / name).read_bytes()).hexdigest())
    assert digests[0] == digests[1]
    other = generate_random(g, 4, 100, 43)
    assert dump_suite(other) != (tmp_path / "a.json").read_text()


def test_generated_cases_pass_oracle_validity():
    m = application_model(SplitMix64(3), "app", menus=3, items_per_menu=4, toolbar=4, dialogs=2, dialog_widgets=3)
    g = derive_efg(m)
    oracle = OracleModel(model_to_dict(m))
    suite = generate_suite(g, GenerationParams(count=300), seed=11)
    assert suite.lengths() == [2, 3, 4, 5]
    for tc in suite.cases():
        assert oracle.valid(oracle.prefix(tc.main_events[0]) + list(tc.main_events))
        if tc.length > 2:
            assert oracle.valid(list(tc.main_events))
    for n in suite.lengths():
        ids = [tc.case_id for tc in suite.cases(n)]
        assert len(ids) == len(set(ids))


def test_suite_file_round_trip(tmp_path, menu_model):
    g = derive_efg(menu_model)
    suite = generate_all_length2(g).merged(generate_random(g, 3, 5, 7))
    path = tmp_path / "s.json"
    save_suite(suite, path)
    again = load_suite(path)
    assert dump_suite(again) == path.read_text()
    assert again.origin_version == "v1"
    assert again.groups[3].seed == 7


def test_single_group_file_uses_flat_object(menu_model):
    import json

    data = json.loads(dump_suite(generate_random(derive_efg(menu_model), 3, 2, 1)))
    assert set(data) >= {"origin_version", "generator", "seed", "length", "cases"}
    assert data["cases"] == sorted(data["cases"], key="|".join)


def test_duplicate_cases_rejected():
    payload = {
        "origin_version": "v1",
        "generator": "x",
        "seed": None,
        "length": 2,
        "cases": [["a:SYSTEM", "b:SYSTEM"], ["a:SYSTEM", "b:SYSTEM"]],
    }
    with pytest.raises(ValidationError, match="duplicate"):
        parse_suites(payload)


def test_different_seeds_differ_same_seed_repeats():
    g = derive_efg(load_gui_model(FIXTURES / "mindmap-app.json"))
    a = generate_random(g, 5, 200, 1)
    b = generate_random(g, 5, 200, 2)
    assert [t.case_id for t in a.cases()] != [t.case_id for t in b.cases()]
    assert dump_suite(a) == dump_suite(generate_random(g, 5, 200, 1))


def test_menu_fixture_random_walks_respect_rules():
    g = derive_efg(parse_gui_model(menu_doc()))
    suite = generate_random(g, 3, 20, 3)
    for tc in suite.cases():
        assert "Exit:TERMINATE" not in tc.main_events[:-1]
