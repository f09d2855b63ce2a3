import json

import pytest

from dergen import (
    Arrow,
    BudgetExceededError,
    ParseError,
    Presentation,
    Quiver,
    StructureError,
    export,
    generate_random_gentle,
    parse_presentation,
    permitted_paths,
    validate_presentation,
)
from oracles import brute_permitted


def test_parse_golden(g1):
    assert g1.name == "G1"
    assert g1.quiver.vertices == ("1", "2")
    assert [(a.name, a.src, a.tgt) for a in g1.quiver.arrows] == [
        ("a", "1", "2"),
        ("b", "2", "1"),
    ]
    # stored in traversal order: first a, then b
    assert g1.relations == (("a", "b"),)


def test_parse_vertex_only():
    p = parse_presentation("quiver K\nvertex 1\n")
    assert p.quiver.vertices == ("1",)
    assert p.quiver.arrows == ()
    assert p.relations == ()


def test_parse_comments_and_blank_lines():
    p = parse_presentation("# leading\nquiver K # trailing\n\nvertex 1 2\narrow a : 1 -> 2\n")
    assert p.name == "K"
    assert len(p.quiver.arrows) == 1


@pytest.mark.parametrize(
    "text,code",
    [
        ("vertex 1\n", "SYNTAX"),
        ("quiver K\nquiver L\n", "SYNTAX"),
        ("quiver K\nvertex 1\nnonsense 2\n", "SYNTAX"),
        ("quiver K\nvertex 1 1\n", "DUPLICATE_ID"),
        ("quiver K\nvertex 1\narrow a : 1 -> 2\n", "UNKNOWN_VERTEX"),
        ("quiver K\nvertex 1 2\narrow a : 1 -> 2\narrow a : 2 -> 1\n", "DUPLICATE_ID"),
        ("quiver K\nvertex 1 2\narrow a : 1 -> 2\nrel a c\n", "UNKNOWN_ARROW"),
        ("quiver K\nvertex 1 2\narrow a : 1 -> 2\nrel a\n", "RELATION_TOO_SHORT"),
        ("quiver K\nvertex 1 2\narrow a : 1 -> 2\narrow b : 1 -> 2\nrel b a\n", "NON_COMPOSABLE"),
        ("quiver K\nvertex 1 2\narrow a : 1 -> 2\narrow b : 2 -> 1\nrel b a + a b\n", "LINEAR_COMBINATION"),
        ("", "SYNTAX"),
    ],
)
def test_parse_errors(text, code):
    with pytest.raises(ParseError) as exc:
        parse_presentation(text)
    assert exc.value.code == code
    assert exc.value.line >= 1


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse_presentation("quiver K\nvertex 1\nvertex 2\narrow a : 1 -> 3\n")
    assert exc.value.line == 4
    assert exc.value.column == 16


def test_redundant_relation_dropped_with_warning():
    text = (
        "quiver K\nvertex 1 2 3 4\n"
        "arrow a : 1 -> 2\narrow b : 2 -> 3\narrow c : 3 -> 4\n"
        "rel b a\nrel c b a\n"
    )
    with pytest.warns(UserWarning, match="redundant"):
        p = parse_presentation(text)
    assert p.relations == (("a", "b"),)


def test_structure_errors():
    with pytest.raises(StructureError):
        Quiver(("1", "1"), ())
    with pytest.raises(StructureError):
        Quiver(("1",), (Arrow("a", "1", "2"),))
    q = Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "1", "2")))
    with pytest.raises(StructureError):
        Presentation("K", q, (("a", "b"),))  # not composable


# ---------------------------------------------------------------------------
# validation


def test_validate_golden_ok(g1):
    assert validate_presentation(g1).ok
    # cross-check finiteness by independent enumeration: nothing new at length 3+
    brute = brute_permitted(g1, 6)
    assert max(len(s) for s in brute) == 2


def test_validate_loop_without_relation_fails():
    p = parse_presentation("quiver L\nvertex 1\narrow x : 1 -> 1\n")
    report = validate_presentation(p)
    assert not report.ok
    codes = {c for c, _, _ in report.violations}
    assert codes == {"ADMISSIBLE_FAIL"}
    assert report.violations[0][2] == "x"


def test_validate_loop_with_square_zero_ok():
    p = parse_presentation("quiver L\nvertex 1\narrow x : 1 -> 1\nrel x x\n")
    assert validate_presentation(p).ok
    assert permitted_paths(p) == [("x",)]
    assert brute_permitted(p, 5) == [("x",)]


def test_validate_reports_short_and_redundant():
    q = Quiver(("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3")))
    p = Presentation("K", q, (("a",), ("a", "b")))
    report = validate_presentation(p)
    codes = sorted(c for c, _, _ in report.violations)
    assert codes == ["REDUNDANT_RELATION", "RELATION_TOO_SHORT"]
    assert not report.ok


def test_validate_longer_relations_admissible():
    # oriented 3-cycle needs a relation to stay finite; length-3 works too
    p = parse_presentation(
        "quiver C\nvertex 1 2 3\narrow x : 1 -> 2\narrow y : 2 -> 3\narrow z : 3 -> 1\n"
        "rel z y x\n"
    )
    assert validate_presentation(p).ok
    assert permitted_paths(p) == brute_permitted(p, 9)


# ---------------------------------------------------------------------------
# permitted paths


def test_permitted_golden(g1):
    assert permitted_paths(g1) == [("a",), ("b",), ("b", "a")]
    assert permitted_paths(g1) == brute_permitted(g1, 4)


def test_permitted_linear_a3(a3):
    assert permitted_paths(a3) == [("a",), ("b",), ("a", "b")]


def test_permitted_max_len(g1):
    assert permitted_paths(g1, max_len=1) == [("a",), ("b",)]


def test_permitted_budget_error_on_invalid():
    p = parse_presentation("quiver L\nvertex 1\narrow x : 1 -> 1\n")
    with pytest.raises(BudgetExceededError):
        permitted_paths(p)
    assert permitted_paths(p, max_len=3) == [("x",), ("x", "x"), ("x", "x", "x")]


def test_permitted_closed_under_factors_and_avoids_relations():
    for seed in range(8):
        p = generate_random_gentle(seed, 5, want_cycle=seed % 2 == 0, want_clock=None)
        paths = set(permitted_paths(p))
        for path in paths:
            for i in range(len(path)):
                for j in range(i + 1, len(path) + 1):
                    assert path[i:j] in paths
        for rel in p.relations:
            assert rel not in paths


def test_validate_iff_enumeration_terminates():
    for seed in range(10):
        p = generate_random_gentle(seed, 4, want_cycle=True, want_clock=None)
        assert validate_presentation(p).ok
        permitted_paths(p)  # must terminate


# ---------------------------------------------------------------------------
# export


def test_roundtrip_golden(g1, g2):
    for p in (g1, g2):
        assert parse_presentation(export(p, "canonical-text")) == p


def test_roundtrip_random():
    for seed in range(12):
        p = generate_random_gentle(seed, 6, want_cycle=seed % 2 == 0)
        assert parse_presentation(export(p, "canonical-text")) == p


def test_json_export(g1):
    doc = json.loads(export(g1, "json"))
    assert doc["vertices"] == ["1", "2"]
    assert len(doc["arrows"]) == 2
    assert doc["arrows"][0] == {"id": "a", "src": "1", "tgt": "2"}
    # functional order: outermost first
    assert doc["relations"] == [["b", "a"]]


def test_dot_export(g1):
    dot = export(g1, "dot")
    assert '"1" -> "2" [label="a"]' in dot
    assert "style=dashed" in dot and '[label="b a"' in dot
    single = parse_presentation("quiver S\nvertex 1\n")
    dotted = export(single, "dot")
    assert '"1";' in dotted and "->" not in dotted


def test_unknown_format(g1):
    with pytest.raises(ValueError):
        export(g1, "yaml")


# ---------------------------------------------------------------------------
# hypothesis properties


from hypothesis import given, settings, strategies as st_


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st_.integers(min_value=0, max_value=40), st_.integers(min_value=2, max_value=8))
def test_generated_presentations_roundtrip(seed, n):
    p = generate_random_gentle(seed, n, want_cycle=seed % 2 == 0)
    assert parse_presentation(export(p, "canonical-text")) == p
    assert validate_presentation(p).ok


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st_.integers(min_value=0, max_value=30), st_.integers(min_value=3, max_value=7))
def test_permitted_factor_closure_property(seed, n):
    p = generate_random_gentle(seed, n, want_cycle=False)
    paths = set(permitted_paths(p))
    for path in paths:
        assert all(path[i : i + 1] in paths for i in range(len(path)))
        if len(path) >= 2:
            assert path[1:] in paths and path[:-1] in paths
