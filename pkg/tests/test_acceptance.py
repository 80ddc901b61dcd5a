"""Release gate: twelve checks, one test and one verdict line each.

Each check covers one contract the package promises: exact cell counts,
census closed forms, expansion numbers against the brute-force oracle,
the measure and entropy invariants, the two-sided chain-metric bound,
the invariant-curve pipeline, the address coding, and byte-stable
exports. Run with -s (or read the -v test names) to see the scorecard.
All arithmetic that can be exact is exact; floats only appear where a
tolerance is stated.
"""

import math
from fractions import Fraction

from twotile import (
    brute_force_Dn,
    chain_distances_from,
    compute_Dn,
    correlation,
    closed_form_counts,
    dump_complex,
    entropy_report,
    expansion_for_spec,
    expansion_report,
    find_candidate_curves,
    fixture,
    generate,
    identity_spec,
    iterate_curve,
    measure_model,
    orbit_report,
    render_svg,
    sft_matrix,
    sft_to_dot,
    spec_from_curve,
    tile_at,
    tile_mass,
    vertex_m_value,
)
from twotile.curves import InvalidSpec
from twotile.subdivision import Address, address_of, count_paths

from conftest import ALL_RULES, DEPTHS, level_of, rule_of

BOUNDS = {name: DEPTHS[name] for name in ALL_RULES}


def verdict(n, detail):
    print(f"criterion {n:>2}: PASS  {detail}")


def test_criterion_01_cell_count_formulas():
    checked = 0
    for name in ALL_RULES:
        rule = rule_of(name)
        k, deg = rule.k, rule.deg
        for n in range(BOUNDS[name] + 1):
            cx = level_of(name, n).complex
            assert len(cx.tiles) == 2 * deg**n, f"criterion 1: tiles {name} n={n}"
            assert len(cx.edges) == k * deg**n, f"criterion 1: edges {name} n={n}"
            assert (
                len(cx.vertex_ids) == (k - 2) * deg**n + 2
            ), f"criterion 1: vertices {name} n={n}"
            checked += 1
    verdict(1, f"count formulas exact on {checked} levels across {len(ALL_RULES)} rules")


def test_criterion_02_census_closed_forms():
    checked = 0
    for name in ALL_RULES:
        rule = rule_of(name)
        assert rule.k <= 4, f"criterion 2: fixture {name} outside the k<=4 scope"
        model = measure_model(rule)
        for n in range(BOUNDS[name] + 1):
            lc = level_of(name, n)
            by_pair = {("w", "w"): 0, ("w", "b"): 0, ("b", "w"): 0, ("b", "b"): 0}
            for t in lc.complex.tiles:
                by_pair[(lc.tile_loc0[t].color, lc.tile_color[t])] += 1
            got = closed_form_counts(model, n)
            want = (
                by_pair[("w", "w")],
                by_pair[("w", "b")],
                by_pair[("b", "w")],
                by_pair[("b", "b")],
            )
            assert got == want, f"criterion 2: census {name} n={n}: {got} != {want}"
            checked += 1
    verdict(2, f"closed-form census equals enumeration on {checked} levels")


def test_criterion_03_expansion_numbers():
    assert compute_Dn(rule_of("grid:2:3"), 1) == 2, "criterion 3: grid:2:3 D_1"
    z = rule_of("z2m1")
    for n in range(1, 7):
        assert compute_Dn(z, n) == 1, f"criterion 3: z2m1 D_{n}"
    la = rule_of("lattes2x2")
    for n in range(1, 4):
        dn = compute_Dn(la, n)
        oracle = brute_force_Dn(la, n)
        assert dn == oracle, f"criterion 3: lattes D_{n} {dn} vs oracle {oracle}"
    for n in range(1, 6):
        assert compute_Dn(la, n) == 2**n, f"criterion 3: lattes D_{n} != 2^{n}"
    verdict(3, "D_n agrees with the oracle and the frozen values")


def test_criterion_04_dn_growth_laws():
    pairs = 0
    for name in ALL_RULES:
        nmax = 2 if name == "grid:5:5" else 4
        d = expansion_report(rule_of(name), nmax).d_values
        for i in range(1, len(d)):
            assert d[i] >= d[i - 1], f"criterion 4: {name} D not monotone at {i}"
        for a in range(1, nmax):
            for b in range(1, nmax - a + 1):
                assert (
                    d[a + b - 1] >= d[a - 1] * d[b - 1]
                ), f"criterion 4: {name} D_{a+b} < D_{a} D_{b}"
                pairs += 1
    verdict(4, f"monotone and supermultiplicative over {pairs} index pairs")


def test_criterion_05_expansion_factor_bounds():
    la = expansion_report(rule_of("lattes2x2"), 5)
    assert abs(la.lambda0_lower - 2.0) <= 1e-12, "criterion 5: lattes lower bound"
    assert la.lambda0_upper == 4, "criterion 5: lattes upper bound"
    z = expansion_report(rule_of("z2m1"), 6)
    assert abs(z.lambda0_lower - 1.0) <= 1e-12, "criterion 5: z2m1 lower bound"
    verdict(5, "lambda0 brackets: lattes [2, 4], z2m1 lower 1.0")


def test_criterion_06_measure_consistency():
    for name in ALL_RULES:
        rule = rule_of(name)
        model = measure_model(rule)
        for n in range(3):
            lc = level_of(name, n)
            total = sum(
                (tile_mass(model, address_of(lc, t)) for t in lc.complex.tiles),
                Fraction(0),
            )
            assert total == 1, f"criterion 6: total mass {name} n={n} is {total}"
        # the parent's mass is exactly the sum over its children
        for n in range(1, min(3, BOUNDS[name]) + 1):
            lc = level_of(name, n)
            sums = {}
            for t in lc.complex.tiles:
                sums[lc.parent_of[t]] = sums.get(
                    lc.parent_of[t], Fraction(0)
                ) + tile_mass(model, address_of(lc, t))
            prev = lc.previous
            for t in prev.complex.tiles:
                assert sums[t] == tile_mass(
                    model, address_of(prev, t)
                ), f"criterion 6: martingale {name} n={n} tile {t}"
    la = rule_of("lattes2x2")
    model = measure_model(la)
    assert model.lambda2 == 0
    for x in ("w/wt0", "b/bt2"):
        for y in ("w", "b"):
            for m in (1, 2, 3):
                got = correlation(la, x, y, m, enumerate_check=True)
                want = tile_mass(model, x) * tile_mass(model, y)
                assert (
                    got == want
                ), f"criterion 6: correlation {x},{y},m={m}: {got} != {want}"
    verdict(6, "masses sum to 1, the martingale holds, lattes correlations split")


def test_criterion_07_entropy():
    for name in ALL_RULES:
        rule = rule_of(name)
        rep = entropy_report(measure_model(rule))
        assert (
            abs(rep.h_top - math.log(rule.deg)) <= 1e-12
        ), f"criterion 7: h_top {name}"
    q = orbit_report(rule_of("lattes2x2")).q_exponent(2.0)
    assert abs(q - 2.0) <= 1e-12, f"criterion 7: lattes Q(2) = {q}"
    verdict(7, "h_top = log(deg) everywhere, lattes Q(2) = 2")


def test_criterion_08_orbit_structure():
    flags = {}
    for name in ALL_RULES:
        rule = rule_of(name)
        rep = orbit_report(rule)
        assert set(rep.fiber_degree_sum.values()) == {
            rule.deg
        }, f"criterion 8: fiber degree sums {name}"
        flags[name] = rep.has_periodic_critical
    assert flags["z2m1"] is True, "criterion 8: z2m1 periodic critical point"
    assert flags["barycentric"] is True, "criterion 8: barycentric periodic critical"
    assert flags["lattes2x2"] is False, "criterion 8: lattes has none"
    verdict(8, f"fiber sums equal deg, periodic-critical flags {flags}")


def test_criterion_09_chain_metric_bounds():
    lam = Fraction(2)
    pairs = 0
    for n in range(4):
        lc = level_of("lattes2x2", n)
        vs = sorted(lc.complex.vertex_ids)
        for i, u in enumerate(vs):
            dists = chain_distances_from(lc, u, lam)
            for v in vs[i + 1 :]:
                m = vertex_m_value(lc, u, v)
                d = dists[v]
                assert isinstance(d, Fraction), "criterion 9: distance not exact"
                assert (
                    Fraction(1, 2 ** (m + 1)) <= d <= Fraction(2, 2**m)
                ), f"criterion 9: n={n} {u},{v}: m={m} d={d}"
                pairs += 1
    verdict(9, f"two-sided bound exact on {pairs} vertex pairs, levels 0..3")


def test_criterion_10_invariant_curve_pipeline():
    for filt in (False, True):
        assert (
            find_candidate_curves(fixture("z4rays"), require_no_tile_joins=filt) == []
        ), "criterion 10: z4rays marking admits no curve"
    for name in ALL_RULES:
        rule = rule_of(name)
        depth = 2 if name == "grid:5:5" else 3
        tower = iterate_curve(rule, identity_spec(rule), depth)
        assert tower.completed, f"criterion 10: identity tower {name}"
        for st in tower.steps:
            assert st.jordan and st.containment_ok and not st.diagnostics, (
                f"criterion 10: identity step {name} level {st.new_level}"
            )
    g55 = rule_of("grid:5:5")
    found = find_candidate_curves(g55, require_no_tile_joins=True, max_curves=2000)
    assert found, "criterion 10: grid:5:5 search came back empty"
    spec = None
    for c in found:
        try:
            spec = spec_from_curve(g55, c)
            break
        except InvalidSpec:
            continue
    assert spec is not None, "criterion 10: no candidate lifted to a spec"
    tower = iterate_curve(g55, spec, 4)
    assert tower.completed, "criterion 10: grid:5:5 tower stopped early"
    assert all(
        st.jordan and st.containment_ok for st in tower.steps
    ), "criterion 10: grid:5:5 tower not Jordan"
    fires = expansion_for_spec(g55, spec, 2)
    assert fires is not None and fires <= 2, f"criterion 10: expansion at {fires}"
    verdict(10, f"towers Jordan everywhere, grid:5:5 expansion fires at {fires}")


def test_criterion_11_address_coding():
    for name in ALL_RULES:
        rule = rule_of(name)
        for n in range(min(3, BOUNDS[name]) + 1):
            lc = level_of(name, n)
            seen = set()
            for t in lc.complex.tiles:
                a = address_of(lc, t)
                assert isinstance(a, Address)
                assert len(a.letters) == n, f"criterion 11: length {name} {t}"
                assert tile_at(lc, a) == t, f"criterion 11: round trip {name} {t}"
                seen.add(a)
            assert len(seen) == len(
                lc.complex.tiles
            ), f"criterion 11: addresses collide {name} n={n}"
            assert count_paths(rule, n) == 2 * rule.deg**n, (
                f"criterion 11: path count {name} n={n}"
            )
    verdict(11, "addresses biject with tiles and match the path count")


def test_criterion_12_deterministic_exports(golden_dir):
    js = dump_complex(generate(fixture("z2m1"), 2))
    assert js == dump_complex(
        generate(fixture("z2m1"), 2)
    ), "criterion 12: gen JSON differs between runs"
    assert js == (golden_dir / "z2m1_level2.json").read_text(), (
        "criterion 12: gen JSON drifted from the golden file"
    )
    svg = render_svg(generate(fixture("lattes2x2"), 1))
    assert svg == (golden_dir / "lattes2x2_level1.svg").read_text(), (
        "criterion 12: SVG drifted from the golden file"
    )
    dot = sft_to_dot(sft_matrix(rule_of("grid:2:3")))
    assert dot == (golden_dir / "grid_2_3_sft.dot").read_text(), (
        "criterion 12: DOT drifted from the golden file"
    )
    verdict(12, "JSON, SVG and DOT exports byte-identical to the golden files")
