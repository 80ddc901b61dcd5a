"""Tutte embeddings and SVG output: geometry, orientation, determinism."""

import math

import pytest

from twotile import TutteEmbedding, fixture, generate, render_svg, tutte_embed
from twotile.diagnostics import DegenerateDrawing, UnknownCell
from twotile.render import boundary_cycle, panel_tiles
from twotile.rules import BoundaryEdge

from conftest import ALL_RULES, level_of, rule_of

RENDERABLE = tuple(r for r in ALL_RULES if r != "z2m1")


def shoelace(lc, emb, tile):
    vs = lc.complex.tile_vertices(tile)
    area = 0.0
    for i, v in enumerate(vs):
        x0, y0 = emb.coords[v]
        x1, y1 = emb.coords[vs[(i + 1) % len(vs)]]
        area += x0 * y1 - x1 * y0
    return area / 2.0


class TestLevelZero:
    @pytest.mark.parametrize("name", ALL_RULES)
    def test_each_panel_is_one_regular_polygon(self, name):
        rule = rule_of(name)
        lc = level_of(name, 0)
        for panel in ("w", "b"):
            emb = tutte_embed(lc, panel)
            assert emb.tiles == (panel,)
            assert emb.residual == 0.0
            assert emb.min_separation == math.inf
            for i in range(rule.k):
                theta = -math.pi / 2 + 2 * math.pi * i / rule.k
                x, y = emb.coords[f"p{i}"]
                assert x == pytest.approx(math.cos(theta), abs=1e-12)
                assert y == pytest.approx(math.sin(theta), abs=1e-12)

    @pytest.mark.parametrize("name", ALL_RULES)
    def test_boundary_cycle_is_the_corner_cycle(self, name):
        rule = rule_of(name)
        lc = level_of(name, 0)
        assert boundary_cycle(lc) == [f"p{i}" for i in range(rule.k)]


class TestBoundaryCycle:
    @pytest.mark.parametrize("name", ALL_RULES)
    def test_walks_every_boundary_vertex_once(self, name):
        lc = level_of(name, 2)
        cycle = boundary_cycle(lc)
        assert cycle[0] == "p0"
        assert len(set(cycle)) == len(cycle)
        # a cycle has as many vertices as edges
        n_boundary_edges = sum(
            isinstance(loc, BoundaryEdge) for loc in lc.edge_loc0.values()
        )
        assert len(cycle) == n_boundary_edges
        for i in range(rule_of(name).k):
            assert f"p{i}" in cycle


class TestTutteEmbedding:
    def test_lattes_level_one_white_panel_is_four_quadrilaterals(self):
        lc = level_of("lattes2x2", 1)
        emb = tutte_embed(lc, "w")
        assert emb.tiles == ("w/wt0", "w/wt1", "w/wt2", "w/wt3")
        assert all(len(lc.complex.tile_vertices(t)) == 4 for t in emb.tiles)
        assert emb.residual <= 1e-9

    @pytest.mark.parametrize("name", RENDERABLE)
    def test_panel_covers_its_tiles(self, name):
        lc = level_of(name, 1)
        for panel in ("w", "b"):
            emb = tutte_embed(lc, panel)
            assert emb.tiles == panel_tiles(lc, panel)
            assert set(emb.tiles) == {
                t for t, loc in lc.tile_loc0.items() if loc.color == panel
            }

    @pytest.mark.parametrize("name", RENDERABLE)
    def test_mirror_convention(self, name):
        # white panel faces the reader, black is seen from behind
        lc = level_of(name, 2)
        for panel, sign in (("w", 1.0), ("b", -1.0)):
            emb = tutte_embed(lc, panel)
            for t in emb.tiles:
                assert shoelace(lc, emb, t) * sign > 0.0

    def test_solve_quality_is_reported(self):
        lc = level_of("lattes2x2", 2)
        emb = tutte_embed(lc, "w")
        assert isinstance(emb, TutteEmbedding)
        assert 0.0 <= emb.residual <= 1e-9
        # nine interior vertices, so a genuine pairwise minimum
        assert 0.0 < emb.min_separation < math.inf

    def test_panel_must_be_a_color(self):
        lc = level_of("lattes2x2", 1)
        with pytest.raises(UnknownCell):
            tutte_embed(lc, "x")

    def test_doubled_edges_have_no_flat_drawing(self):
        # each level-1 quadrant hangs off a degree-2 vertex, which a
        # barycentric placement flattens onto a segment
        for n in (1, 2):
            lc = level_of("z2m1", n)
            for panel in ("w", "b"):
                with pytest.raises(DegenerateDrawing):
                    tutte_embed(lc, panel)


class TestSvg:
    def test_one_polygon_per_tile(self):
        lc = level_of("grid:5:5", 2)
        svg = render_svg(lc)
        assert svg.count("<polygon") == 1250
        assert svg.count("<polygon") == len(lc.complex.tiles)

    def test_panel_groups_and_markers(self):
        rule = rule_of("barycentric")
        svg = render_svg(level_of("barycentric", 1))
        assert '<g id="panel-w">' in svg
        assert '<g id="panel-b">' in svg
        # one marker per base vertex per panel
        assert svg.count("<circle") == 2 * rule.k

    def test_output_is_deterministic(self, golden_dir):
        lc = generate(fixture("lattes2x2"), 1)
        first = render_svg(lc)
        again = render_svg(generate(fixture("lattes2x2"), 1))
        assert first == again
        golden = (golden_dir / "lattes2x2_level1.svg").read_text()
        assert first == golden

    def test_level_zero_renders_everywhere(self):
        for name in ALL_RULES:
            svg = render_svg(level_of(name, 0))
            assert svg.count("<polygon") == 2
