"""Invariant-curve candidates and the edge-replacement tower.

A curve here is a simple closed walk in the 1-skeleton of some level
passing through all k corner vertices. Candidates are enumerated by
backtracking; towers C^0, C^1, ... are built by replacing every edge of
C^n, per its label, with a copy of a fixed replacement path instantiated
one level deeper. Cell ids of deeper levels are resolved syntactically
from the parent/template naming scheme, so no level complex has to be
materialized to iterate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cells import DirectedEdgeRef, OrientedComplex
from .diagnostics import (
    Diagnostic,
    InvalidSpec,
    LevelMismatch,
    ResourceLimit,
    WrongRule,
)
from .rules import (
    BLACK,
    WHITE,
    BoundaryEdge,
    Corner,
    LabeledSkeleton,
    SubdivisionRule,
    TileInterior,
    other_color,
)
from .subdivision import DEFAULT_MAX_TILES, LevelComplex, base_level, subdivide

ON_BOUNDARY = "boundary"


@dataclass(frozen=True)
class Curve:
    """Simple closed walk in a level's 1-skeleton.

    vertices[i] is the tail of walk[i]; the walk is cyclic. rule is kept
    for tower bookkeeping and is None for curves found in bare skeletons.
    """

    level: int
    walk: tuple[DirectedEdgeRef, ...]
    vertices: tuple[str, ...]
    rule: SubdivisionRule | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.walk)

    def edge_ids(self) -> frozenset[str]:
        return frozenset(r.edge_id for r in self.walk)

    def cells(self) -> frozenset[str]:
        return frozenset(self.vertices) | self.edge_ids()


def _canonical_cycle_key(walk) -> tuple[str, ...]:
    # minimum over rotations of both orientations; curves are unoriented
    fwd = [r.signed() for r in walk]
    rev = [r.reverse().signed() for r in reversed(walk)]
    best = None
    for seq in (fwd, rev):
        for s in range(len(seq)):
            cand = tuple(seq[s:] + seq[:s])
            if best is None or cand < best:
                best = cand
    return best


# -- replacement specs -------------------------------------------------------


@dataclass(frozen=True)
class ReplacementSpec:
    """One directed replacement path per 0-edge label.

    hosts[l] is "w", "b" or "boundary"; betas[l] runs from corner l to
    corner l+1 in the subdivision complex. "boundary" means the path is
    the subdivision chain of the 0-edge itself (identity replacement).
    """

    rule: SubdivisionRule
    hosts: tuple[str, ...]
    betas: tuple[tuple[DirectedEdgeRef, ...], ...]


def _path_vertices(cx: OrientedComplex, darts) -> list[str]:
    verts = []
    at = None
    for r in darts:
        tail, head = cx.edges[r.edge_id]
        if not r.forward:
            tail, head = head, tail
        if at is not None and tail != at:
            raise InvalidSpec(f"path breaks at {r.signed()}: {tail} != {at}")
        if at is None:
            verts.append(tail)
        at = head
        verts.append(head)
    return verts


def make_replacement_spec(rule: SubdivisionRule, hosts, betas) -> ReplacementSpec:
    k = rule.k
    hosts = tuple(hosts)
    betas = tuple(tuple(b) for b in betas)
    if len(hosts) != k or len(betas) != k:
        raise InvalidSpec(f"need {k} hosts and {k} paths")
    cx = rule.d1
    interior_all: list[str] = []
    for l in range(k):
        host = hosts[l]
        if host not in (WHITE, BLACK, ON_BOUNDARY):
            raise InvalidSpec(f"host {host!r} for label {l}")
        beta = betas[l]
        if not beta:
            raise InvalidSpec(f"empty path for label {l}")
        for r in beta:
            if r.edge_id not in cx.edges:
                raise InvalidSpec(f"unknown edge {r.edge_id!r} in path {l}")
        verts = _path_vertices(cx, beta)
        if verts[0] != rule.base_vertices[l] or verts[-1] != rule.base_vertices[(l + 1) % k]:
            raise InvalidSpec(
                f"path {l} must run corner {l} -> corner {(l + 1) % k}"
            )
        if len(set(verts)) != len(verts):
            raise InvalidSpec(f"path {l} repeats a vertex")
        if host == ON_BOUNDARY:
            if beta != rule.boundary_chain(l):
                raise InvalidSpec(
                    f"boundary host for label {l} requires the chain of the 0-edge"
                )
        else:
            for r in beta:
                loc = rule.edge_loc[r.edge_id]
                if isinstance(loc, TileInterior) and loc.color != host:
                    raise InvalidSpec(
                        f"edge {r.edge_id!r} of path {l} is interior to the other 0-tile"
                    )
            for v in verts[1:-1]:
                loc = rule.vertex_loc[v]
                if isinstance(loc, TileInterior) and loc.color != host:
                    raise InvalidSpec(
                        f"vertex {v!r} of path {l} is interior to the other 0-tile"
                    )
                if isinstance(loc, Corner):
                    raise InvalidSpec(f"path {l} passes through corner vertex {v!r}")
        interior_all.extend(verts[:-1])
    if len(set(interior_all)) != len(interior_all):
        raise InvalidSpec("concatenated paths are not a simple closed walk")
    return ReplacementSpec(rule=rule, hosts=hosts, betas=betas)


def identity_spec(rule: SubdivisionRule) -> ReplacementSpec:
    k = rule.k
    return make_replacement_spec(
        rule, (ON_BOUNDARY,) * k, tuple(rule.boundary_chain(l) for l in range(k))
    )


def serialize_replacement_spec(spec: ReplacementSpec) -> str:
    lines = []
    for l in range(spec.rule.k):
        path = " ".join(r.signed() for r in spec.betas[l])
        lines.append(f"beta {l} host {spec.hosts[l]} path {path}")
    return "\n".join(lines) + "\n"


def parse_replacement_spec(rule: SubdivisionRule, text: str) -> ReplacementSpec:
    from .cells import parse_signed

    hosts: dict[int, str] = {}
    betas: dict[int, tuple] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 5 or parts[0] != "beta" or parts[2] != "host" or parts[4] != "path":
            raise InvalidSpec(f"expected 'beta <l> host <h> path ...': {line!r}")
        try:
            l = int(parts[1])
        except ValueError:
            raise InvalidSpec(f"bad label {parts[1]!r}") from None
        if not 0 <= l < rule.k:
            raise InvalidSpec(f"label {l} out of range for k={rule.k}")
        if l in hosts:
            raise InvalidSpec(f"duplicate line for label {l}")
        hosts[l] = parts[3]
        betas[l] = tuple(parse_signed(tok) for tok in parts[5:])
    missing = [l for l in range(rule.k) if l not in hosts]
    if missing:
        raise InvalidSpec(f"missing labels {missing}")
    return make_replacement_spec(
        rule, tuple(hosts[l] for l in range(rule.k)), tuple(betas[l] for l in range(rule.k))
    )


# -- syntactic cell resolution -----------------------------------------------


class _Resolver:
    """Resolves cell ids of arbitrary levels from the naming scheme.

    Level-n cells are named parent-id/template-id, so colors, labels,
    side tiles and boundary edges can be read off recursively without
    building the complex. Base cells: tiles w|b, edges s<l>, vertices p<i>.
    """

    def __init__(self, rule: SubdivisionRule):
        self.rule = rule
        self._side_cache: dict[str, dict[str, str]] = {}
        self._bedge_cache: dict[tuple[str, int], str] = {}
        # boundary edge of a subdivision tile by label, from its walk
        self._tile_bedge: dict[tuple[str, int], DirectedEdgeRef] = {}
        for tid, walk in rule.d1.tiles.items():
            for r in walk:
                self._tile_bedge[(tid, rule.edge_label[r.edge_id])] = r
        self._orbit = tuple(
            rule.vertex_label[rule.base_vertices[i]] for i in range(rule.k)
        )

    def tile_color(self, tile_path: str) -> str:
        last = tile_path.rsplit("/", 1)[-1]
        if last in (WHITE, BLACK):
            return last
        return self.rule.tile_color[last]

    def edge_label(self, edge_path: str) -> int:
        last = edge_path.rsplit("/", 1)[-1]
        if "/" not in edge_path and last.startswith("s"):
            return int(last[1:])
        return self.rule.edge_label[last]

    def vertex_label(self, vertex_path: str, level: int) -> int:
        parts = vertex_path.split("/")
        born = len(parts) - 1
        if born == 0:
            lab = int(parts[0][1:])  # p<i>
        else:
            lab = self.rule.vertex_label[parts[-1]]
        for _ in range(level - born):
            lab = self._orbit[lab]
        return lab

    def side_tiles(self, edge_path: str) -> dict[str, str]:
        """The two tiles flanking a level-n edge, keyed by color."""
        cached = self._side_cache.get(edge_path)
        if cached is not None:
            return cached
        if "/" not in edge_path:
            out = {WHITE: WHITE, BLACK: BLACK}
        else:
            parent, e = edge_path.rsplit("/", 1)
            cx = self.rule.d1
            t1 = cx.side_tile[(e, True)]
            t2 = cx.side_tile[(e, False)]
            if isinstance(self.rule.edge_loc[e], TileInterior):
                out = {
                    self.rule.tile_color[t1]: f"{parent}/{t1}",
                    self.rule.tile_color[t2]: f"{parent}/{t2}",
                }
            else:
                # chain edge: each side tile sits inside the parent edge's
                # side tile of the matching host color
                sides = self.side_tiles(parent)
                out = {}
                for t in (t1, t2):
                    host = self.rule.tile_host[t]
                    out[self.rule.tile_color[t]] = f"{sides[host]}/{t}"
        if len(out) != 2:
            raise AssertionError(f"edge {edge_path} must have one side of each color")
        self._side_cache[edge_path] = out
        return out

    def boundary_edge(self, tile_path: str, label: int) -> str:
        """The boundary edge of a tile carrying the given label."""
        key = (tile_path, label)
        cached = self._bedge_cache.get(key)
        if cached is not None:
            return cached
        if "/" not in tile_path:
            out = f"s{label}"
        else:
            parent, t = tile_path.rsplit("/", 1)
            e = self._tile_bedge[(t, label)].edge_id
            out = self._instance_edge(parent, e)
        self._bedge_cache[key] = out
        return out

    def _instance_edge(self, parent_tile: str, template_edge: str) -> str:
        loc = self.rule.edge_loc[template_edge]
        if isinstance(loc, TileInterior):
            return f"{parent_tile}/{template_edge}"
        return f"{self.boundary_edge(parent_tile, loc.label)}/{template_edge}"

    def _instance_vertex(self, parent_tile: str, template_vertex: str) -> str:
        loc = self.rule.vertex_loc[template_vertex]
        if isinstance(loc, TileInterior):
            return f"{parent_tile}/{template_vertex}"
        if isinstance(loc, BoundaryEdge):
            return f"{self.boundary_edge(parent_tile, loc.label)}/{template_vertex}"
        return self.corner_vertex(parent_tile, loc.index)

    def corner_vertex(self, tile_path: str, index: int) -> str:
        if "/" not in tile_path:
            return f"p{index}"
        parent, t = tile_path.rsplit("/", 1)
        # boundary vertices of a subdivision tile carry each label once
        for v in self.rule.d1.tile_vertices(t):
            if self.rule.vertex_label[v] == index:
                return self._instance_vertex(parent, v)
        raise AssertionError(f"tile {tile_path} has no corner labeled {index}")


# -- the tower ---------------------------------------------------------------


@dataclass(frozen=True)
class StepReport:
    new_level: int
    jordan: bool
    containment_ok: bool
    diagnostics: tuple[Diagnostic, ...] = ()


@dataclass(frozen=True)
class CurveTower:
    curves: tuple[Curve, ...]
    steps: tuple[StepReport, ...]
    completed: bool


def boundary_curve(rule: SubdivisionRule) -> Curve:
    """C^0: the common boundary of the two 0-tiles."""
    k = rule.k
    walk = tuple(DirectedEdgeRef(f"s{l}", True) for l in range(k))
    vertices = tuple(f"p{l}" for l in range(k))
    return Curve(level=0, walk=walk, vertices=vertices, rule=rule)


def _replace_dart(
    res: _Resolver,
    spec: ReplacementSpec,
    dart: DirectedEdgeRef,
    tail: str,
    level: int,
):
    """One step of edge replacement: new darts and the vertices they add.

    Returns (darts, interior_vertices) with interior_vertices[i] the tail
    of darts[i+1]; the new path keeps the dart's direction, one level
    deeper.
    """
    rule = res.rule
    l = res.edge_label(dart.edge_id)
    tail_label = res.vertex_label(tail, level)
    at_l_end = tail_label == l
    host = spec.hosts[l]
    beta = spec.betas[l]
    if host == ON_BOUNDARY:
        ids = [(f"{dart.edge_id}/{r.edge_id}", r.forward) for r in beta]
        inner_templates = _path_vertices(rule.d1, beta)[1:-1]
        inner = [f"{dart.edge_id}/{v}" for v in inner_templates]
    else:
        sides = res.side_tiles(dart.edge_id)
        x = sides[host]
        ids = [(res._instance_edge(x, r.edge_id), r.forward) for r in beta]
        inner_templates = _path_vertices(rule.d1, beta)[1:-1]
        inner = [res._instance_vertex(x, v) for v in inner_templates]
    darts = [DirectedEdgeRef(e, f) for e, f in ids]
    if not at_l_end:
        darts = [r.reverse() for r in reversed(darts)]
        inner = list(reversed(inner))
    return darts, inner


def iterate_curve(
    rule: SubdivisionRule,
    spec: ReplacementSpec,
    N: int,
    max_edges: int = 1_000_000,
) -> CurveTower:
    """Build C^0..C^N by repeated edge replacement.

    Stops early with a NonJordanStep report if a step produces a walk
    that revisits a vertex; the offending walk is not added to the tower.
    """
    if spec.rule != rule:
        raise WrongRule("spec was built for a different rule")
    res = _Resolver(rule)
    curves = [boundary_curve(rule)]
    steps: list[StepReport] = []
    for n in range(N):
        cur = curves[-1]
        new_walk: list[DirectedEdgeRef] = []
        new_vertices: list[str] = []
        m = len(cur.walk)
        grow = sum(len(spec.betas[res.edge_label(r.edge_id)]) for r in cur.walk)
        if grow > max_edges:
            raise ResourceLimit(f"curve would reach {grow} edges at level {n + 1}")
        for i, dart in enumerate(cur.walk):
            tail = cur.vertices[i]
            darts, inner = _replace_dart(res, spec, dart, tail, n)
            new_walk.extend(darts)
            new_vertices.append(tail)
            new_vertices.extend(inner)
        jordan = len(set(new_vertices)) == len(new_vertices)
        containment = _covered_by_touching_tiles(res, new_walk, cur.cells())
        if not jordan:
            seen: set[str] = set()
            dup = next(v for v in new_vertices if v in seen or seen.add(v))
            steps.append(
                StepReport(
                    new_level=n + 1,
                    jordan=False,
                    containment_ok=containment,
                    diagnostics=(
                        Diagnostic(
                            "NonJordanStep",
                            f"level-{n + 1} walk revisits vertex {dup!r}",
                        ),
                    ),
                )
            )
            return CurveTower(tuple(curves), tuple(steps), completed=False)
        steps.append(StepReport(new_level=n + 1, jordan=True, containment_ok=containment))
        curves.append(
            Curve(
                level=n + 1,
                walk=tuple(new_walk),
                vertices=tuple(new_vertices),
                rule=rule,
            )
        )
    return CurveTower(tuple(curves), tuple(steps), completed=True)


# -- joining and the expansion criterion -------------------------------------


def _arc_split(curve: Curve, marked) -> list[set[str]]:
    """Cells of each arc of the curve between consecutive marked vertices.

    Arc i runs from the i-th marked vertex hit in walk order to the next;
    both endpoint vertices belong to the arc.
    """
    positions = [i for i, v in enumerate(curve.vertices) if v in set(marked)]
    if len(positions) != len(marked):
        raise ValueError("curve must pass each marked vertex exactly once")
    m = len(curve.walk)
    arcs: list[set[str]] = []
    for a in range(len(positions)):
        start = positions[a]
        stop = positions[(a + 1) % len(positions)]
        cells: set[str] = set()
        i = start
        cells.add(curve.vertices[i])
        while i != stop:
            cells.add(curve.walk[i].edge_id)
            i = (i + 1) % m
            cells.add(curve.vertices[i])
        arcs.append(cells)
    return arcs


def _tile_cells(cx: OrientedComplex, tid: str) -> set[str]:
    cells = {tid}
    for r in cx.tiles[tid]:
        cells.add(r.edge_id)
    cells.update(cx.tile_vertices(tid))
    return cells


def _joins_arcs(contacts: set[int], k: int) -> bool:
    if k == 3:
        return len(contacts) == 3
    for i in contacts:
        for j in contacts:
            if i < j and j - i >= 2 and (i, j) != (0, k - 1):
                return True
    return False


def tile_joins_curve_sides(cx: OrientedComplex, tid: str, arcs, k: int) -> bool:
    cells = _tile_cells(cx, tid)
    contacts = {i for i, arc in enumerate(arcs) if cells & arc}
    return _joins_arcs(contacts, k)


def expansion_for_spec(
    rule: SubdivisionRule,
    spec: ReplacementSpec,
    N: int,
    max_tiles: int = DEFAULT_MAX_TILES,
) -> int | None:
    """Smallest n <= N with no n-tile joining opposite sides of C^n.

    Levels are materialized one at a time and only as far as needed, so
    an early hit stays cheap even when N is large.
    """
    tower = iterate_curve(rule, spec, N)
    marked = [f"p{i}" for i in range(rule.k)]
    lc = base_level(rule)
    for n in range(1, len(tower.curves)):
        if 2 * rule.deg**n > max_tiles:
            raise ResourceLimit(f"level {n} exceeds {max_tiles} tiles")
        lc = subdivide(lc, rule)
        curve = tower.curves[n]
        arcs = _arc_split(curve, marked)
        if not any(
            tile_joins_curve_sides(lc.complex, t, arcs, rule.k)
            for t in lc.complex.tiles
        ):
            return n
    return None


def _virtual_tile_closure(res: _Resolver, tile_path: str) -> set[str]:
    """All cells of a tile's closure, resolved syntactically."""
    cells = {tile_path}
    if "/" not in tile_path:
        for l in range(res.rule.k):
            cells.add(f"s{l}")
            cells.add(f"p{l}")
        return cells
    parent, t = tile_path.rsplit("/", 1)
    for r in res.rule.d1.tiles[t]:
        cells.add(res._instance_edge(parent, r.edge_id))
    for v in res.rule.d1.tile_vertices(t):
        cells.add(res._instance_vertex(parent, v))
    return cells


def _witness_tiles(res: _Resolver, edge_path: str) -> tuple[str, ...]:
    """Previous-level tiles whose closure contains the edge."""
    parent = edge_path.rsplit("/", 1)[0]
    if parent in (WHITE, BLACK) or parent.rsplit("/", 1)[-1] in res.rule.d1.tiles:
        return (parent,)
    return tuple(res.side_tiles(parent).values())


def _covered_by_touching_tiles(res: _Resolver, new_walk, prev_cells) -> bool:
    """Every edge of the new walk sits in a previous-level tile meeting
    the previous curve (vertices are covered by their edges' tiles)."""
    for r in new_walk:
        if not any(
            _virtual_tile_closure(res, t) & prev_cells
            for t in _witness_tiles(res, r.edge_id)
        ):
            return False
    return True


def curve_hausdorff_proxy(cn: Curve, cn1: Curve) -> int:
    """One-tile Hausdorff bound between consecutive tower curves.

    Verifies that every edge of C^{n+1} lies in a level-n tile meeting
    C^n (vertices lie in the closures of their edges' tiles), and that
    conversely every edge of C^n meets the union of those tiles. Returns
    the level n at which the bound holds.
    """
    if cn.rule is None or cn1.rule is None or cn.rule != cn1.rule:
        raise LevelMismatch("curves must come from one tower")
    if cn1.level != cn.level + 1:
        raise LevelMismatch(f"levels {cn.level} and {cn1.level} are not consecutive")
    res = _Resolver(cn.rule)
    cn_cells = cn.cells()
    tiles_touching: set[str] = set()
    for r in cn1.walk:
        hit = {
            t
            for t in _witness_tiles(res, r.edge_id)
            if _virtual_tile_closure(res, t) & cn_cells
        }
        if not hit:
            raise AssertionError(
                f"edge {r.edge_id!r} has no witness tile meeting C^{cn.level}"
            )
        tiles_touching.update(hit)
    covered: set[str] = set()
    for t in tiles_touching:
        covered.update(_virtual_tile_closure(res, t))
    for r in cn.walk:
        if r.edge_id not in covered:
            raise AssertionError(f"edge {r.edge_id!r} of C^{cn.level} left uncovered")
    return cn.level


# -- candidate enumeration ---------------------------------------------------


class _EnoughCurves(Exception):
    """Internal unwind once max_curves distinct curves are collected."""


def _subject(subject, marked):
    if isinstance(subject, LabeledSkeleton):
        return subject.complex, tuple(subject.marked)
    if isinstance(subject, SubdivisionRule):
        return subject.d1, tuple(subject.base_vertices)
    if isinstance(subject, LevelComplex):
        return subject.complex, tuple(f"p{i}" for i in range(subject.rule.k))
    if isinstance(subject, OrientedComplex):
        if not marked:
            raise ValueError("marked vertices required with a bare complex")
        return subject, tuple(marked)
    raise TypeError(f"cannot search {type(subject).__name__}")


def find_candidate_curves(
    subject,
    require_no_tile_joins: bool = False,
    marked=None,
    max_steps: int = 2_000_000,
    max_curves: int | None = None,
    level: int = 1,
) -> list[Curve]:
    """All simple closed walks through every marked vertex.

    Deduped as unoriented cycles. With require_no_tile_joins, only curves
    where no tile of the complex meets two non-adjacent arcs (k >= 4) or
    all three arcs (k = 3) are kept; the arc-contact test also prunes the
    search, together with corridor checks that abandon a branch as soon
    as some future arc has no unblocked route left.

    The filtered family grows superexponentially with skeleton size (29
    curves on the doubled 3x3 grid, 25797 on 4x4), so past roughly 4x4
    full enumeration exceeds any step budget. max_curves stops after that
    many distinct curves; the result is then the prefix of the canonical
    depth-first order, which is deterministic.
    """
    cx, marked = _subject(subject, marked)
    k = len(marked)
    vertex_set = set(cx.vertex_ids)
    for v in marked:
        if v not in vertex_set:
            raise ValueError(f"marked vertex {v!r} not in complex")
    start = marked[0]
    marked_set = set(marked)
    if isinstance(subject, SubdivisionRule):
        rule_ref = subject
    elif isinstance(subject, LevelComplex):
        rule_ref = subject.rule
    else:
        rule_ref = None

    out_darts: dict[str, list[tuple[str, bool, str]]] = {v: [] for v in cx.vertex_ids}
    for eid, (tail, head) in sorted(cx.edges.items()):
        out_darts[tail].append((eid, True, head))
        out_darts[head].append((eid, False, tail))
    for v in out_darts:
        out_darts[v].sort()

    vertex_tiles = {v: tuple(cx.vertex_cycle(v).tiles) for v in cx.vertex_ids}
    edge_tiles = {eid: cx.edge_tiles(eid) for eid in cx.edges}
    neighbors: dict[str, tuple[str, ...]] = {
        v: tuple(h for _, _, h in out_darts[v]) for v in cx.vertex_ids
    }

    tile_contacts: dict[str, set[int]] = {t: set() for t in cx.tiles}
    tile_vs = {t: cx.tile_vertices(t) for t in cx.tiles}
    # arcs blocked for a vertex once an incident tile holds a non-adjacent
    # contact; counts so retraction is exact
    conflicting = {
        a: tuple(b for b in range(k) if b != a and _joins_arcs({a, b}, k))
        for a in range(k)
    }
    blocked = {v: [0] * k for v in cx.vertex_ids}

    def contact(cell_tiles, arc: int, undo: list) -> bool:
        """Record arc contact; False if some tile now joins."""
        ok = True
        for t in cell_tiles:
            s = tile_contacts[t]
            if arc not in s:
                s.add(arc)
                undo.append((t, arc))
                for w in tile_vs[t]:
                    bw = blocked[w]
                    for b in conflicting[arc]:
                        bw[b] += 1
                if _joins_arcs(s, k):
                    ok = False
        return ok

    def retract(undo: list):
        for t, arc in undo:
            tile_contacts[t].discard(arc)
            for w in tile_vs[t]:
                bw = blocked[w]
                for b in conflicting[arc]:
                    bw[b] -= 1

    def _linked(sources, targets, arc: int) -> bool:
        # some target reachable from some source through unvisited
        # vertices still open to this arc
        frontier = [s for s in sources]
        seen = set(frontier)
        while frontier:
            nxt = []
            for u in frontier:
                for w in neighbors[u]:
                    if w in seen or blocked[w][arc]:
                        continue
                    if w in targets:
                        return True
                    if w in visited:
                        continue
                    seen.add(w)
                    nxt.append(w)
            frontier = nxt
        return False

    def corridors_alive(head: str, arc: int) -> bool:
        """Necessary conditions for the partial curve to complete.

        Every future arc still needs a corridor of unvisited vertices
        that no placed contact has blocked; checking each slot kills a
        branch as soon as one side of the sphere is walled off."""
        remaining = marked_set - visited
        if remaining:
            if not _linked([head], remaining, arc):
                return False
            for slot in range(arc + 1, k - 1):
                hit = False
                for u in remaining:
                    if blocked[u][slot]:
                        continue
                    if _linked([u], remaining - {u}, slot):
                        hit = True
                        break
                if not hit:
                    return False
            return _linked([start], remaining, k - 1)
        if arc == k - 1:
            return _linked([start], {head}, k - 1)
        return True

    found: dict[tuple, Curve] = {}
    steps = 0

    path: list[DirectedEdgeRef] = []
    path_vertices = [start]
    visited = {start}
    used_edges: set[str] = set()

    init_undo: list = []
    if require_no_tile_joins:
        contact(vertex_tiles[start], 0, init_undo)
        contact(vertex_tiles[start], k - 1, init_undo)

    def dfs(at: str, arc: int):
        nonlocal steps
        steps += 1
        if steps > max_steps:
            raise ResourceLimit(f"candidate search exceeded {max_steps} steps")
        for eid, fwd, head in out_darts[at]:
            if eid in used_edges:
                continue
            if head == start:
                if len(visited & marked_set) != k or len(path) < 2:
                    continue
                undo: list = []
                ok = True
                if require_no_tile_joins:
                    ok = contact(edge_tiles[eid], k - 1, undo)
                if ok:
                    walk = tuple(path) + (DirectedEdgeRef(eid, fwd),)
                    key = _canonical_cycle_key(walk)
                    if key not in found:
                        found[key] = Curve(
                            level=level,
                            walk=walk,
                            vertices=tuple(path_vertices),
                            rule=rule_ref,
                        )
                        if max_curves is not None and len(found) >= max_curves:
                            raise _EnoughCurves
                retract(undo)
                continue
            if head in visited:
                continue
            entering = head in marked_set
            new_arc = arc + 1 if entering else arc
            if entering and new_arc > k - 1:
                continue
            undo = []
            ok = True
            if require_no_tile_joins:
                ok = contact(edge_tiles[eid], arc, undo)
                if ok:
                    ok = contact(vertex_tiles[head], arc, undo)
                if ok and entering:
                    ok = contact(vertex_tiles[head], new_arc, undo)
            if ok:
                path.append(DirectedEdgeRef(eid, fwd))
                path_vertices.append(head)
                visited.add(head)
                used_edges.add(eid)
                if corridors_alive(head, new_arc):
                    dfs(head, new_arc)
                used_edges.discard(eid)
                visited.discard(head)
                path_vertices.pop()
                path.pop()
            retract(undo)

    try:
        dfs(start, 0)
        retract(init_undo)
    except _EnoughCurves:
        pass  # contact state is dirty but dies with this call
    if require_no_tile_joins:
        # authoritative filter on the complete curves; the search pruning
        # is conservative and must agree
        kept = {}
        for key, c in found.items():
            arcs = _arc_split(c, marked)
            if not any(
                tile_joins_curve_sides(cx, t, arcs, k) for t in cx.tiles
            ):
                kept[key] = c
        assert kept.keys() == found.keys(), "arc pruning dropped or kept wrongly"
        found = kept
    return [found[key] for key in sorted(found)]


def spec_from_curve(rule: SubdivisionRule, curve: Curve) -> ReplacementSpec:
    """Split a level-1 candidate at the corner vertices into a spec.

    The curve must pass the corners in cyclic label order (either
    orientation); each arc becomes a replacement path with its host
    deduced from the cells it crosses.
    """
    base = list(rule.base_vertices)
    verts = list(curve.vertices)
    walk = list(curve.walk)
    if any(r.edge_id not in rule.d1.edges for r in walk):
        raise WrongRule("curve walks edges outside this rule's subdivision")
    if set(base) - set(verts):
        raise InvalidSpec("curve misses a corner vertex")
    i0 = verts.index(base[0])
    verts = verts[i0:] + verts[:i0]
    walk = walk[i0:] + walk[:i0]
    order = [v for v in verts if v in set(base)]
    if order != [base[i] for i in range(rule.k)]:
        rev_walk = [r.reverse() for r in reversed(walk)]
        rev_verts = [verts[0]] + verts[:0:-1]
        order = [v for v in rev_verts if v in set(base)]
        if order != [base[i] for i in range(rule.k)]:
            raise InvalidSpec("curve does not pass corners in cyclic order")
        verts, walk = rev_verts, rev_walk
    # split at corners
    positions = [i for i, v in enumerate(verts) if v in set(base)]
    betas = []
    hosts = []
    m = len(walk)
    for a in range(rule.k):
        i = positions[a]
        stop = positions[(a + 1) % rule.k] if a + 1 < rule.k else m
        beta = tuple(walk[i:stop])
        betas.append(beta)
        if beta == rule.boundary_chain(a):
            hosts.append(ON_BOUNDARY)
            continue
        colors = set()
        for r in beta:
            loc = rule.edge_loc[r.edge_id]
            if isinstance(loc, TileInterior):
                colors.add(loc.color)
        for v in _path_vertices(rule.d1, beta)[1:-1]:
            loc = rule.vertex_loc[v]
            if isinstance(loc, TileInterior):
                colors.add(loc.color)
        if len(colors) > 1:
            raise InvalidSpec(f"arc {a} crosses both 0-tile interiors")
        if not colors:
            raise InvalidSpec(
                f"arc {a} runs along the boundary but is not the 0-edge chain"
            )
        hosts.append(colors.pop())
    return make_replacement_spec(rule, tuple(hosts), tuple(betas))
