"""Expansion numbers, the expansion factor interval, orbits, and the
chain metric. D_n values are frozen only after the brute-force oracle
agreed with the graph computation on every affordable instance."""

from fractions import Fraction

import pytest

from twotile import (
    brute_force_Dn,
    chain_distance,
    compute_Dn,
    expansion_report,
    fixture,
    flower,
    joins_opposite_sides,
    m_value,
    orbit_report,
    vertex_m_value,
)
from twotile.diagnostics import BadLambda, MixedLevels
from twotile.expansion import ancestor_tile, chain_distances_from, edge_flower

from conftest import ALL_RULES, level_of, rule_of


class TestDnOracle:
    """The oracle enumerates connected tile sets joining opposite sides
    directly; the product computation must match wherever both run."""

    @pytest.mark.parametrize(
        "name,nmax",
        [("lattes2x2", 3), ("barycentric", 2), ("grid:2:3", 2), ("z2m1", 4)],
    )
    def test_agreement(self, name, nmax):
        rule = rule_of(name)
        for n in range(1, nmax + 1):
            assert compute_Dn(rule, n) == brute_force_Dn(rule, n), (name, n)


class TestDnValues:
    def test_lattes_doubles(self):
        rule = rule_of("lattes2x2")
        for n in range(1, 6):
            assert compute_Dn(rule, n) == 2**n

    def test_z2m1_never_expands(self):
        rule = rule_of("z2m1")
        for n in range(1, 7):
            assert compute_Dn(rule, n) == 1

    @pytest.mark.parametrize(
        "name,values",
        [
            ("grid:2:3", (2, 4, 8, 16)),
            ("barycentric", (2, 4, 8, 16)),
            ("grid:5:5", (5, 25)),
        ],
    )
    def test_frozen_values(self, name, values):
        rule = rule_of(name)
        for n, want in enumerate(values, start=1):
            assert compute_Dn(rule, n) == want

    @pytest.mark.parametrize("name", ALL_RULES)
    def test_monotone_and_supermultiplicative(self, name):
        rule = rule_of(name)
        nmax = 2 if name == "grid:5:5" else 4
        d = {n: compute_Dn(rule, n) for n in range(1, nmax + 1)}
        for n in range(1, nmax):
            assert d[n + 1] >= d[n]
        for a in d:
            for b in d:
                if a + b in d:
                    assert d[a + b] >= d[a] * d[b]


class TestExpansionReport:
    def test_lattes_interval(self):
        rep = expansion_report(rule_of("lattes2x2"), 5)
        assert abs(rep.lambda0_lower - 2.0) <= 1e-12
        assert rep.lambda0_upper == 4
        assert rep.first_expanding_level == 1
        assert rep.d_values == (2, 4, 8, 16, 32)

    def test_z2m1_interval(self):
        rep = expansion_report(rule_of("z2m1"), 6)
        assert rep.lambda0_lower == 1.0
        assert rep.first_expanding_level is None
        assert rep.alpha == 0.0

    @pytest.mark.parametrize("name", ALL_RULES)
    def test_lower_bounded_by_upper(self, name):
        nmax = 2 if name == "grid:5:5" else 4
        rep = expansion_report(rule_of(name), nmax)
        assert 1.0 <= rep.lambda0_lower <= rep.lambda0_upper == rep.deg

    def test_d_accessor(self):
        rep = expansion_report(rule_of("lattes2x2"), 3)
        assert [rep.d(n) for n in (1, 2, 3)] == [2, 4, 8]


class TestJoinsOppositeSides:
    def test_z2m1_has_a_joining_tile_at_every_level(self):
        for n in (1, 2, 3):
            lc = level_of("z2m1", n)
            assert any(
                joins_opposite_sides(lc, {t}) for t in lc.complex.tiles
            )

    def test_no_single_tile_joins_on_expanding_levels(self):
        lc = level_of("lattes2x2", 2)
        assert not any(joins_opposite_sides(lc, {t}) for t in lc.complex.tiles)


class TestOrbits:
    @pytest.mark.parametrize(
        "name,periodic", [("z2m1", True), ("barycentric", True), ("lattes2x2", False)]
    )
    def test_periodic_critical(self, name, periodic):
        assert orbit_report(rule_of(name)).has_periodic_critical is periodic

    @pytest.mark.parametrize("name", ALL_RULES)
    def test_fiber_degree_sums(self, name):
        rule = rule_of(name)
        rep = orbit_report(rule)
        assert set(rep.fiber_degree_sum.values()) == {rule.deg}

    def test_z2m1_orbit(self):
        rep = orbit_report(rule_of("z2m1"))
        assert rep.orbit["inf"] == "inf"
        assert rep.local_degree["inf"] == 2
        assert rep.critical == frozenset({"zero", "inf"})

    def test_doubling_flags(self):
        assert orbit_report(rule_of("lattes2x2")).doubling
        assert not orbit_report(rule_of("z2m1")).doubling

    def test_q_exponent(self):
        rep = orbit_report(rule_of("lattes2x2"))
        assert abs(rep.q_exponent(2.0) - 2.0) <= 1e-12


class TestAncestors:
    def test_chain_to_root(self, levels):
        lc = levels("lattes2x2", 3)
        t = sorted(lc.complex.tiles)[0]
        anc = [ancestor_tile(lc, t, j) for j in range(4)]
        assert anc[3] == t
        assert anc[0] in ("w", "b")
        with pytest.raises(ValueError):
            ancestor_tile(lc, t, 4)

    def test_mixed_levels_rejected(self, levels):
        lc = levels("lattes2x2", 2)
        with pytest.raises(MixedLevels):
            m_value(lc, "w", "b")


class TestChainMetric:
    def test_m_value_of_tiles_sharing_a_vertex(self, levels):
        lc = levels("lattes2x2", 2)
        ts = sorted(lc.complex.tiles)
        for t in ts[:5]:
            assert m_value(lc, t, t) == 2

    def test_vertex_m_symmetric(self, levels):
        lc = levels("lattes2x2", 2)
        vs = sorted(lc.vertex_label)[:8]
        for i, u in enumerate(vs):
            for v in vs[i + 1 :]:
                assert vertex_m_value(lc, u, v) == vertex_m_value(lc, v, u)

    def test_distance_zero_iff_equal(self, levels):
        lc = levels("lattes2x2", 1)
        assert chain_distance(lc, "p0", "p0", 2) == 0
        assert chain_distance(lc, "p0", "p1", 2) > 0

    def test_distance_symmetric_and_triangle(self, levels):
        lc = levels("lattes2x2", 2)
        vs = sorted(lc.vertex_label)[:6]
        d = {(u, v): chain_distance(lc, u, v, 2) for u in vs for v in vs}
        for u in vs:
            for v in vs:
                assert d[(u, v)] == d[(v, u)]
                for w in vs:
                    assert d[(u, v)] <= d[(u, w)] + d[(w, v)]

    def test_exact_rationals_for_integer_lambda(self, levels):
        lc = levels("lattes2x2", 2)
        d = chain_distance(lc, "p0", "p2", 2)
        assert isinstance(d, Fraction)

    def test_float_lambda_gives_floats(self, levels):
        lc = levels("lattes2x2", 1)
        d = chain_distance(lc, "p0", "p2", 1.5)
        assert isinstance(d, float)

    def test_bad_lambda(self, levels):
        lc = levels("lattes2x2", 1)
        with pytest.raises(BadLambda):
            chain_distance(lc, "p0", "p1", 1)

    def test_bulk_matches_single(self, levels):
        lc = levels("lattes2x2", 2)
        vs = sorted(lc.vertex_label)
        u = vs[3]
        bulk = chain_distances_from(lc, u, 2)
        assert set(bulk) == set(vs)
        for v in vs[::7]:
            assert bulk[v] == chain_distance(lc, u, v, 2)

    def test_two_sided_bound_sample(self, levels):
        # the full all-pairs bound at n <= 3 runs in the acceptance suite
        lc = levels("lattes2x2", 2)
        lam = 2
        vs = sorted(lc.vertex_label)[:10]
        for i, u in enumerate(vs):
            dists = chain_distances_from(lc, u, lam)
            for v in vs[i + 1 :]:
                m = vertex_m_value(lc, u, v)
                d = dists[v]
                assert Fraction(1, lam ** (m + 1)) <= d <= Fraction(2, lam**m)


class TestFlowers:
    def test_vertex_flower_contents(self, levels):
        lc = levels("z2m1", 1)
        fl = flower(lc, "p0")
        assert "p0" in fl
        cyc = lc.complex.vertex_cycle("p0")
        assert set(cyc.edges) <= fl and set(cyc.tiles) <= fl

    def test_edge_flower_is_union_of_endpoint_flowers(self, levels):
        lc = levels("z2m1", 1)
        eid = sorted(lc.complex.edges)[0]
        tail, head = lc.complex.edges[eid]
        fl = edge_flower(lc, eid)
        assert fl == flower(lc, tail) | flower(lc, head)
