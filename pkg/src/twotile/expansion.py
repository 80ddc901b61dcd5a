"""Tile chains and growth: how fast subdivision separates the 0-edges.

D_n is the least number of n-tiles forming a connected set that joins
opposite sides of the pillow boundary: for k >= 4, two 0-edges that are
not adjacent; for k = 3, all three. Its growth rate bounds the expansion
factor of any visual metric from below. The chain metric discretizes
those visual metrics on the vertices of a generated level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush

from .diagnostics import BadLambda, MixedLevels, UnknownCell, UnknownVertex
from .rules import BoundaryEdge, Corner, SubdivisionRule
from .subdivision import DEFAULT_MAX_TILES, LevelComplex, generate


def _levels_chain(lc: LevelComplex) -> list[LevelComplex]:
    """The generated tower [level 0, ..., lc]."""
    chain = [lc]
    while chain[-1].previous is not None:
        chain.append(chain[-1].previous)
    chain.reverse()
    return chain


class TileGraph:
    """Intersection graph of the tiles of one level.

    Two distinct tiles are adjacent when their closures meet, which for
    cells of one decomposition means sharing a vertex. terminal_set(l) is
    the set of tiles meeting the closed 0-edge l: a tile does iff one of
    its boundary vertices sits on that 0-edge or at one of its endpoints.
    """

    def __init__(self, lc: LevelComplex):
        self.lc = lc
        self.level = lc.level
        cx = lc.complex
        self.tiles = tuple(sorted(cx.tiles))
        self._tiles_at_vertex: dict[str, list[str]] = {v: [] for v in cx.vertex_ids}
        for tid in self.tiles:
            for v in cx.tile_vertices(tid):
                self._tiles_at_vertex[v].append(tid)
        self._terminal: dict[int, frozenset[str]] = {}
        k = lc.rule.k
        for l in range(k):
            hits = []
            for tid in self.tiles:
                if any(self._meets_zero_edge(v, l) for v in cx.tile_vertices(tid)):
                    hits.append(tid)
            self._terminal[l] = frozenset(hits)

    def _meets_zero_edge(self, vid: str, l: int) -> bool:
        k = self.lc.rule.k
        loc = self.lc.vertex_loc0[vid]
        if isinstance(loc, BoundaryEdge):
            return loc.label == l
        if isinstance(loc, Corner):
            return loc.index in (l, (l + 1) % k)
        return False

    def terminal_set(self, l: int) -> frozenset[str]:
        return self._terminal[l % self.lc.rule.k]

    def neighbors(self, tid: str) -> set[str]:
        out: set[str] = set()
        for v in self.lc.complex.tile_vertices(tid):
            out.update(self._tiles_at_vertex[v])
        out.discard(tid)
        return out

    def hop_distances(self, sources) -> dict[str, int]:
        dist = {t: 0 for t in sources}
        frontier = list(sources)
        while frontier:
            nxt = []
            for t in frontier:
                for u in self.neighbors(t):
                    if u not in dist:
                        dist[u] = dist[t] + 1
                        nxt.append(u)
            frontier = nxt
        return dist

    def is_connected(self) -> bool:
        if not self.tiles:
            return True
        return len(self.hop_distances([self.tiles[0]])) == len(self.tiles)


def _opposite_pairs(k: int) -> list[tuple[int, int]]:
    # unordered pairs of 0-edges that are not equal and not adjacent
    return [
        (a, b)
        for a in range(k)
        for b in range(a + 1, k)
        if (b - a) % k != 1 and (a - b) % k != 1
    ]


def joins_opposite_sides(lc: LevelComplex, tile_set) -> bool:
    tiles = list(tile_set)
    for t in tiles:
        if t not in lc.complex.tiles:
            raise MixedLevels(f"{t!r} is not a tile of level {lc.level}")
    g = TileGraph(lc)
    k = lc.rule.k
    met = [any(t in g.terminal_set(l) for t in tiles) for l in range(k)]
    if k == 3:
        return all(met)
    return any(met[a] and met[b] for a, b in _opposite_pairs(k))


def _dn_from_graph(g: TileGraph) -> int:
    k = g.lc.rule.k
    hops = {l: g.hop_distances(g.terminal_set(l)) for l in range(k)}
    if k == 3:
        best = min(hops[0][t] + hops[1][t] + hops[2][t] for t in g.tiles)
    else:
        best = min(
            hops[a][t] + hops[b][t] for a, b in _opposite_pairs(k) for t in g.tiles
        )
    return best + 1


def compute_Dn(rule: SubdivisionRule, n: int, max_tiles: int = DEFAULT_MAX_TILES) -> int:
    """Least size of a connected set of n-tiles joining opposite sides.

    k >= 4 reduces to a shortest tile path between two non-adjacent 0-edge
    terminal sets. k = 3 needs a connected set meeting all three, and a
    minimal such set is a spider: three shortest paths from a common
    center tile, counted once.
    """
    lc = generate(rule, n, max_tiles)
    return _dn_from_graph(TileGraph(lc))


def compute_Dn_of_level(lc: LevelComplex) -> int:
    return _dn_from_graph(TileGraph(lc))


def brute_force_Dn(rule: SubdivisionRule, n: int, max_tiles: int = 5000) -> int:
    """Oracle: iterative deepening over connected tile sets.

    Enumerates connected sets of tiles in increasing size until one joins
    opposite sides, so the answer carries no assumption about the shape of
    a minimal joining set. Each connected set is visited once (grow from a
    seed, only allowing tiles that rank above the seed, with a pick-or-ban
    split); a branch is cut when the farthest still-required terminal set
    is provably out of reach of the remaining budget.
    """
    lc = generate(rule, n, max_tiles)
    g = TileGraph(lc)
    k = lc.rule.k
    tiles = g.tiles
    index = {t: i for i, t in enumerate(tiles)}
    nbr_mask = [0] * len(tiles)
    for t in tiles:
        m = 0
        for u in g.neighbors(t):
            m |= 1 << index[u]
        nbr_mask[index[t]] = m
    term_bit = [0] * len(tiles)
    for l in range(k):
        for t in g.terminal_set(l):
            term_bit[index[t]] |= 1 << l
    requirements = (
        [(1 << 3) - 1] if k == 3 else [(1 << a) | (1 << b) for a, b in _opposite_pairs(k)]
    )
    hops = {l: g.hop_distances(g.terminal_set(l)) for l in range(k)}

    def lower_bound(members: list[int], met: int) -> int:
        # tiles still needed: for some requirement, reach every unmet set in
        # it; reaching the farthest one alone is a valid lower bound
        best = None
        for req in requirements:
            missing = req & ~met
            need = 0
            for l in range(k):
                if missing & (1 << l):
                    d = min(hops[l][tiles[i]] for i in members)
                    need = max(need, d)
            if best is None or need < best:
                best = need
        return best or 0

    def satisfied(met: int) -> bool:
        return any(met & req == req for req in requirements)

    for size in range(1, len(tiles) + 1):
        for seed in range(len(tiles)):
            # connected sets whose lowest-ranked tile is the seed
            found = _grow(
                members=[seed],
                member_mask=1 << seed,
                ext=nbr_mask[seed] >> (seed + 1) << (seed + 1),
                banned=0,
                met=term_bit[seed],
                size=size,
                seed=seed,
                nbr_mask=nbr_mask,
                term_bit=term_bit,
                tiles=tiles,
                lower_bound=lower_bound,
                satisfied=satisfied,
            )
            if found:
                return size
    raise AssertionError("the full tile set always joins opposite sides")


def _grow(members, member_mask, ext, banned, met, size, seed, nbr_mask, term_bit, tiles, lower_bound, satisfied):
    if satisfied(met):
        return True
    budget = size - len(members)
    if budget <= 0:
        return False
    if lower_bound(members, met) > budget:
        return False
    candidates = ext & ~banned & ~member_mask
    while candidates:
        low = candidates & -candidates
        i = low.bit_length() - 1
        # branch 1: take tile i
        if _grow(
            members + [i],
            member_mask | low,
            ext | (nbr_mask[i] >> (seed + 1) << (seed + 1)),
            banned,
            met | term_bit[i],
            size,
            seed,
            nbr_mask,
            term_bit,
            tiles,
            lower_bound,
            satisfied,
        ):
            return True
        # branch 2: ban it from this subtree
        banned |= low
        candidates &= ~low
    return False


@dataclass(frozen=True)
class ExpansionReport:
    """D_1..D_N with the certified bounds on the expansion factor."""

    rule_name: str
    deg: int
    d_values: tuple[int, ...]
    first_expanding_level: int | None
    lambda0_lower: float
    lambda0_upper: int
    alpha: float

    def d(self, n: int) -> int:
        return self.d_values[n - 1]


def expansion_report(rule: SubdivisionRule, N: int, max_tiles: int = DEFAULT_MAX_TILES) -> ExpansionReport:
    if N < 1:
        raise ValueError("need N >= 1")
    top = generate(rule, N, max_tiles)
    ds: list[int] = []
    for lc in _levels_chain(top)[1:]:
        ds.append(_dn_from_graph(TileGraph(lc)))
    for i in range(1, len(ds)):
        assert ds[i] >= ds[i - 1], "D_n must be nondecreasing"
    for a in range(1, len(ds) + 1):
        for b in range(1, len(ds) + 1 - a):
            if rule.k >= 4:
                assert ds[a + b - 1] >= ds[a - 1] * ds[b - 1], "supermultiplicativity"
            else:
                assert ds[a + b - 1] >= ds[a - 1] * (ds[b - 1] - 1) + 1, "supermultiplicativity"
    first = next((i + 1 for i, d in enumerate(ds) if d >= 2), None)
    lower = max(d ** (1.0 / (i + 1)) for i, d in enumerate(ds))
    return ExpansionReport(
        rule_name=rule.name,
        deg=rule.deg,
        d_values=tuple(ds),
        first_expanding_level=first,
        lambda0_lower=lower,
        lambda0_upper=rule.deg,
        alpha=math.log(ds[-1]) / N,
    )


# -- ancestors, m-values, chain metric --------------------------------------


def ancestor_tile(lc: LevelComplex, tid: str, j: int) -> str:
    """The level-j tile containing the given level-n tile."""
    if tid not in lc.complex.tiles:
        raise MixedLevels(f"{tid!r} is not a tile of level {lc.level}")
    if not 0 <= j <= lc.level:
        raise ValueError(f"ancestor level {j} out of range 0..{lc.level}")
    cur = tid
    level = lc.level
    node = lc
    while level > j:
        cur = node.parent_of[cur]
        node = node.previous
        level -= 1
    return cur


def m_value(lc: LevelComplex, x: str, y: str) -> int:
    """Largest j such that the level-j ancestors of x and y intersect."""
    for t in (x, y):
        if t not in lc.complex.tiles:
            raise MixedLevels(f"{t!r} is not a tile of level {lc.level}")
    chain = _levels_chain(lc)
    a, b = x, y
    for j in range(lc.level, -1, -1):
        node = chain[j]
        if a == b or set(node.complex.tile_vertices(a)) & set(node.complex.tile_vertices(b)):
            return j
        a = node.parent_of[a] if j > 0 else a
        b = node.parent_of[b] if j > 0 else b
    raise AssertionError("the two 0-tiles share every corner")


def _host_cell_at_level(chain: list[LevelComplex], cell: str, born: int, j: int) -> str:
    """Minimal level-j cell containing the given cell born at level `born`."""
    cur = cell
    for level in range(born, j, -1):
        cur = chain[level].parent_of[cur]
    return cur


def _birth_level(chain: list[LevelComplex], vid: str) -> int:
    for lc in chain:
        if vid in lc.vertex_label:
            return lc.level
    raise UnknownVertex(vid)


def _tiles_containing_vertex(chain: list[LevelComplex], vid: str, j: int) -> frozenset[str]:
    """Level-j tiles whose closure contains the level-n vertex vid."""
    born = _birth_level(chain, vid)
    if born <= j:
        return frozenset(chain[j].complex.vertex_cycle(vid).tiles)
    host = _host_cell_at_level(chain, vid, born, j)
    node = chain[j]
    if host in node.complex.tiles:
        return frozenset((host,))
    if host in node.complex.edges:
        return frozenset(node.complex.edge_tiles(host))
    return frozenset(node.complex.vertex_cycle(host).tiles)


def vertex_m_value(lc: LevelComplex, u: str, v: str) -> int:
    """Largest j admitting intersecting level-j tiles containing u and v."""
    for w in (u, v):
        if w not in lc.vertex_label:
            raise UnknownVertex(w)
    chain = _levels_chain(lc)
    for j in range(lc.level, -1, -1):
        us = _tiles_containing_vertex(chain, u, j)
        vs = _tiles_containing_vertex(chain, v, j)
        node = chain[j]
        for a in us:
            averts = set(node.complex.tile_vertices(a))
            for b in vs:
                if a == b or averts & set(node.complex.tile_vertices(b)):
                    return j
    return 0


def _descendant_vertex_sets(chain: list[LevelComplex]) -> dict[tuple[int, str], frozenset[str]]:
    """For every tile of every level, the top-level vertices in its closure."""
    out: dict[tuple[int, str], frozenset[str]] = {}
    top = chain[-1]
    n = top.level
    for tid in top.complex.tiles:
        out[(n, tid)] = frozenset(top.complex.tile_vertices(tid))
    for j in range(n - 1, -1, -1):
        node = chain[j + 1]
        acc: dict[str, set[str]] = {t: set() for t in chain[j].complex.tiles}
        for tid in node.complex.tiles:
            acc[node.parent_of[tid]].update(out[(j + 1, tid)])
        for tid, vs in acc.items():
            out[(j, tid)] = frozenset(vs)
    return out


def _chain_graph(lc: LevelComplex, lam):
    """Shared setup for chain distances: node weights and vertex index.

    Nodes are (level, tile) over all levels 0..n; a chain may hop between
    any two nodes whose vertex closures meet. Weights are exact Fractions
    when lam is an int or Fraction, floats otherwise.
    """
    if not lam > 1:
        raise BadLambda(f"chain weights need lam > 1, got {lam!r}")
    exact = isinstance(lam, (int, Fraction))
    lamf = Fraction(lam) if exact else float(lam)
    chain = _levels_chain(lc)
    vsets = _descendant_vertex_sets(chain)
    if exact:
        weight = {key: Fraction(1) / lamf ** key[0] for key in vsets}
    else:
        weight = {key: lamf ** (-float(key[0])) for key in vsets}
    by_vertex: dict[str, list[tuple[int, str]]] = {}
    for key, vs in vsets.items():
        for w in vs:
            by_vertex.setdefault(w, []).append(key)
    return vsets, weight, by_vertex, exact


def _dijkstra_from(vsets, weight, by_vertex, u, stop_at=None):
    """Cheapest chain weights from vertex u to every node.

    With stop_at (a set of nodes) the search returns the distance of the
    first target popped; otherwise the full distance map.
    """
    dist: dict[tuple[int, str], Fraction | float] = {}
    heap = []
    for node_key in by_vertex[u]:
        d = weight[node_key]
        if node_key not in dist or d < dist[node_key]:
            dist[node_key] = d
            heappush(heap, (d, node_key))
    while heap:
        d, node_key = heappop(heap)
        if d > dist.get(node_key, d):
            continue
        if stop_at is not None and node_key in stop_at:
            return d
        for w in vsets[node_key]:
            for other in by_vertex[w]:
                nd = d + weight[other]
                if other not in dist or nd < dist[other]:
                    dist[other] = nd
                    heappush(heap, (nd, other))
    if stop_at is not None:
        raise UnknownVertex("no tile chain reaches the target")  # unreachable
    return dist


def chain_distance(lc: LevelComplex, u: str, v: str, lam) -> Fraction | float:
    """Least total weight of a tile chain from u to v.

    Tiles of order j weigh lam^(-j); a chain is a sequence of tiles of any
    orders 0..n whose consecutive closures intersect, the first containing
    u and the last containing v. Exact rationals when lam is an int or
    Fraction, floats otherwise.
    """
    for w in (u, v):
        if w not in lc.vertex_label:
            raise UnknownVertex(w)
    if u == v:
        if not lam > 1:
            raise BadLambda(f"chain weights need lam > 1, got {lam!r}")
        return Fraction(0) if isinstance(lam, (int, Fraction)) else 0.0
    vsets, weight, by_vertex, _ = _chain_graph(lc, lam)
    return _dijkstra_from(vsets, weight, by_vertex, u, stop_at=set(by_vertex[v]))


def chain_distances_from(lc: LevelComplex, u: str, lam) -> dict:
    """Chain distances from u to every vertex of the level, in one sweep.

    Equivalent to chain_distance(lc, u, v, lam) for each v but the node
    graph is built and searched once, which is what makes all-pairs
    checks affordable.
    """
    if u not in lc.vertex_label:
        raise UnknownVertex(u)
    vsets, weight, by_vertex, exact = _chain_graph(lc, lam)
    dist = _dijkstra_from(vsets, weight, by_vertex, u)
    zero = Fraction(0) if exact else 0.0
    out = {}
    for v in lc.vertex_label:
        if v == u:
            out[v] = zero
        else:
            out[v] = min(dist[key] for key in by_vertex[v])
    return out


# -- flowers -----------------------------------------------------------------


def flower(lc: LevelComplex, vid: str) -> frozenset[str]:
    """All cells of the level whose closure contains the vertex."""
    if vid not in lc.vertex_label:
        raise UnknownCell(f"no vertex {vid!r} at level {lc.level}")
    cyc = lc.complex.vertex_cycle(vid)
    return frozenset({vid, *cyc.edges, *cyc.tiles})


def edge_flower(lc: LevelComplex, eid: str) -> frozenset[str]:
    """All cells whose closure meets the closed edge."""
    if eid not in lc.complex.edges:
        raise UnknownCell(f"no edge {eid!r} at level {lc.level}")
    tail, head = lc.complex.edges[eid]
    return flower(lc, tail) | flower(lc, head)


# -- orbits of vertices ------------------------------------------------------


@dataclass(frozen=True)
class OrbitReport:
    """Orbit structure of the level-1 vertices under the realizing map."""

    rule_name: str
    deg: int
    orbit: dict[str, str]
    local_degree: dict[str, int]
    critical: frozenset[str]
    fiber_degree_sum: dict[str, int]
    has_periodic_critical: bool
    doubling: bool

    def q_exponent(self, lam) -> float:
        if not lam > 1:
            raise BadLambda(f"Q exponent needs lam > 1, got {lam!r}")
        return math.log(self.deg) / math.log(lam)


def orbit_report(rule: SubdivisionRule) -> OrbitReport:
    cx = rule.d1
    orbit = {v: rule.base_vertices[rule.vertex_label[v]] for v in cx.vertex_ids}
    local_degree = {v: cx.vertex_cycle(v).length // 2 for v in cx.vertex_ids}
    critical = frozenset(v for v, d in local_degree.items() if d >= 2)
    fiber = {b: 0 for b in rule.base_vertices}
    for v in cx.vertex_ids:
        fiber[orbit[v]] += local_degree[v]

    # cycles of the orbit map live among the base vertices
    has = False
    for start in rule.base_vertices:
        seen: list[str] = []
        cur = start
        while cur not in seen:
            seen.append(cur)
            cur = orbit[cur]
        cycle = seen[seen.index(cur):]
        if any(c in critical for c in cycle):
            has = True
            break
    return OrbitReport(
        rule_name=rule.name,
        deg=rule.deg,
        orbit=orbit,
        local_degree=local_degree,
        critical=critical,
        fiber_degree_sum=fiber,
        has_periodic_critical=has,
        doubling=not has,
    )
