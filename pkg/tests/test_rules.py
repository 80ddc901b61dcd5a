"""Rule validation, label derivation, and the rule file format."""

import importlib.resources as resources

import pytest

from twotile import (
    BaseFlag,
    BoundaryEdge,
    Corner,
    DirectedEdgeRef,
    TileInterior,
    fixture,
    make_rule,
    parse_rule,
    serialize_rule,
)
from twotile.diagnostics import InvalidRule
from twotile.rules import derive_labeling

from conftest import ALL_RULES


def fwd(eid):
    return DirectedEdgeRef(eid, True)


def bwd(eid):
    return DirectedEdgeRef(eid, False)


def codes(excinfo):
    return {d.code for d in excinfo.value.diagnostics}


def z2m1_records():
    """Editable copy of the z2m1 fixture's records."""
    vertices = [
        ("neg1", 1, Corner(0)),
        ("zero", 0, Corner(1)),
        ("one", 1, BoundaryEdge(1)),
        ("inf", 2, Corner(2)),
    ]
    edges = [
        ("re0", "neg1", "zero", 0, BoundaryEdge(0)),
        ("re1", "zero", "one", 0, BoundaryEdge(1)),
        ("re2", "one", "inf", 1, BoundaryEdge(1)),
        ("re3", "inf", "neg1", 1, BoundaryEdge(2)),
        ("imu", "inf", "zero", 2, TileInterior("w")),
        ("iml", "zero", "inf", 2, TileInterior("b")),
    ]
    tiles = [
        ("q1", "w", "w", (fwd("re1"), fwd("re2"), fwd("imu"))),
        ("q2", "b", "w", (fwd("re3"), fwd("re0"), bwd("imu"))),
        ("q3", "w", "b", (bwd("re0"), bwd("re3"), bwd("iml"))),
        ("q4", "b", "b", (bwd("re2"), bwd("re1"), fwd("iml"))),
    ]
    flag = BaseFlag("zero", fwd("re1"), "q1")
    return vertices, edges, tiles, flag


class TestMakeRule:
    def test_z2m1_records_build(self):
        v, e, t, flag = z2m1_records()
        rule = make_rule("again", 3, v, e, t, flag)
        assert rule.k == 3
        assert rule.deg == 2
        assert rule.base_vertices == ("neg1", "zero", "inf")

    def test_wrong_color_rejected(self):
        v, e, t, flag = z2m1_records()
        t = [(tid, "w" if c == "b" else "b", h, walk) for tid, c, h, walk in t[:1]] + t[1:]
        with pytest.raises(InvalidRule) as ei:
            make_rule("bad", 3, v, e, t, flag)
        assert "AdjacentSameColor" in codes(ei)

    def test_wrong_vertex_label_rejected(self):
        v, e, t, flag = z2m1_records()
        v = [("neg1", 2, Corner(0))] + v[1:]
        with pytest.raises(InvalidRule) as ei:
            make_rule("bad", 3, v, e, t, flag)
        assert codes(ei) & {"EdgeEndpointLabelMismatch", "CyclicLabelOrder", "FlagCondition"}

    def test_missing_corner_rejected(self):
        v, e, t, flag = z2m1_records()
        v = [("neg1", 1, BoundaryEdge(0))] + v[1:]
        with pytest.raises(InvalidRule):
            make_rule("bad", 3, v, e, t, flag)

    def test_boundary_chain_must_walk_the_side(self):
        v, e, t, flag = z2m1_records()
        # relocate an interior edge onto the boundary
        e = [r if r[0] != "imu" else ("imu", "inf", "zero", 2, BoundaryEdge(0)) for r in e]
        with pytest.raises(InvalidRule):
            make_rule("bad", 3, v, e, t, flag)


class TestDeriveLabeling:
    def test_matches_declared_labels_on_z2m1(self):
        rule = fixture("z2m1")
        vl, el, tc = derive_labeling(
            rule.d1, dict(rule.tile_host), rule.base_flag
        )
        assert vl == rule.vertex_label
        assert el == rule.edge_label
        assert tc == rule.tile_color

    def test_matches_declared_labels_on_lattes(self):
        rule = fixture("lattes2x2")
        vl, el, tc = derive_labeling(
            rule.d1, dict(rule.tile_host), rule.base_flag
        )
        assert vl == rule.vertex_label
        assert el == rule.edge_label
        assert tc == rule.tile_color

    def test_odd_vertex_cycle_rejected(self, data_dir):
        text = (data_dir / "oddball.rule").read_text()
        with pytest.raises(InvalidRule) as ei:
            parse_rule(text)
        assert "OddVertexCycle" in codes(ei)


class TestSerialization:
    @pytest.mark.parametrize("name", ALL_RULES)
    def test_round_trip(self, name):
        rule = fixture(name)
        text = serialize_rule(rule)
        again = parse_rule(text)
        assert again == rule
        assert serialize_rule(again) == text

    @pytest.mark.parametrize("name", ALL_RULES)
    def test_shipped_file_is_canonical(self, name):
        rule = fixture(name)
        shipped = (
            resources.files("twotile") / "data" / f"{rule.name}.rule"
        ).read_text()
        assert shipped == serialize_rule(rule)

    def test_syntax_error_reported_with_line(self):
        with pytest.raises(InvalidRule) as ei:
            parse_rule("rule x\nk 3\nvertex v label nope loc corner 0\n")
        diags = ei.value.diagnostics
        assert any(d.code == "SyntaxError" and d.line == 3 for d in diags)

    def test_missing_header_rejected(self):
        with pytest.raises(InvalidRule):
            parse_rule("vertex v label 0 loc corner 0\n")

    def test_comments_and_blank_lines_ignored(self):
        rule = fixture("z2m1")
        text = serialize_rule(rule)
        noisy = "# header comment\n\n" + text.replace(
            "k 3", "k 3  # three boundary sides"
        )
        assert parse_rule(noisy) == rule


class TestCounts:
    @pytest.mark.parametrize(
        "name,expected",
        [
            ("lattes2x2", (2, 2, 2, 2, 4)),
            ("barycentric", (3, 3, 3, 3, 6)),
            ("z2m1", (1, 1, 1, 1, 2)),
            ("grid:2:3", (3, 3, 3, 3, 6)),
            ("grid:5:5", (13, 12, 12, 13, 25)),
        ],
    )
    def test_host_color_counts(self, name, expected):
        c = fixture(name).counts()
        assert tuple(c) == expected

    @pytest.mark.parametrize("name", ALL_RULES)
    def test_cover_identity(self, name):
        c = fixture(name).counts()
        assert c.ww + c.bw == c.deg
        assert c.wb + c.bb == c.deg
