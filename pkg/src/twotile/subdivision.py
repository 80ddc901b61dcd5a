"""Generate the tower of cell decompositions induced by a subdivision rule.

Level n+1 is built from level n one tile at a time: an n-tile of color c is
subdivided the way the 0-tile of color c is subdivided by the rule, because
the n-th iterate of the realizing map carries the tile onto that 0-tile
homeomorphically. Cells on a shared n-edge are instantiated once, keyed by
the parent edge, so the two adjacent tiles agree by construction.

Identifiers are derived: the child of cell c with template cell t is
"c/t". Level-0 ids are fixed ("w", "b", s0.., p0..), so a tile id spells
out its address and generation is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cells import DirectedEdgeRef, OrientedComplex, build_complex
from .diagnostics import (
    BoundaryMatchFailure,
    Diagnostic,
    InadmissibleAddress,
    InvalidComplex,
    LengthMismatch,
    ResourceLimit,
    WrongRule,
)
from .rules import (
    BoundaryEdge,
    Corner,
    Location,
    SubdivisionRule,
    TileInterior,
    label_axiom_diagnostics,
)

DEFAULT_MAX_TILES = 1_000_000


@dataclass(frozen=True)
class Address:
    """SFT word for a tile: starting color and level-1 tile letters."""

    c0: str
    letters: tuple[str, ...] = ()

    @property
    def level(self) -> int:
        return len(self.letters)

    def tile_id(self) -> str:
        return "/".join((self.c0,) + self.letters)


@dataclass
class LevelComplex:
    """One level of the tower, with labels, locations and parent links.

    loc0 is the minimal 0-cell whose closure contains the cell: which open
    0-tile, which open 0-edge, or which corner. parent_of maps each cell to
    the minimal containing cell one level down (surviving vertices map to
    themselves). edge_children lists, for each edge of the PREVIOUS level,
    the darts of its subdivision, running from the endpoint whose old label
    was the edge's label.
    """

    rule: SubdivisionRule
    level: int
    complex: OrientedComplex
    vertex_label: dict[str, int]
    edge_label: dict[str, int]
    tile_color: dict[str, str]
    vertex_loc0: dict[str, Location]
    edge_loc0: dict[str, Location]
    tile_loc0: dict[str, TileInterior]
    parent_of: dict[str, str] = field(default_factory=dict)
    edge_children: dict[str, tuple[DirectedEdgeRef, ...]] = field(default_factory=dict)
    previous: "LevelComplex | None" = None

    def tile_vertex_with_label(self, tid: str, label: int) -> str:
        for v in self.complex.tile_vertices(tid):
            if self.vertex_label[v] == label:
                return v
        raise BoundaryMatchFailure(f"tile {tid!r} has no boundary vertex labeled {label}")

    def tile_edge_with_label(self, tid: str, label: int) -> str:
        for ref in self.complex.tiles[tid]:
            if self.edge_label[ref.edge_id] == label:
                return ref.edge_id
        raise BoundaryMatchFailure(f"tile {tid!r} has no boundary edge labeled {label}")


def base_level(rule: SubdivisionRule) -> LevelComplex:
    """The pillow itself: two tiles, k edges s0..s(k-1), k corners p0.."""
    k = rule.k
    vertex_ids = [f"p{i}" for i in range(k)]
    edges = [(f"s{l}", f"p{l}", f"p{(l + 1) % k}") for l in range(k)]
    white = tuple(DirectedEdgeRef(f"s{l}", True) for l in range(k))
    black = tuple(DirectedEdgeRef(f"s{(k - 1 - j) % k}", False) for j in range(k))
    cx = build_complex(vertex_ids, edges, [("w", white), ("b", black)])
    lc = LevelComplex(
        rule=rule,
        level=0,
        complex=cx,
        vertex_label={f"p{i}": i for i in range(k)},
        edge_label={f"s{l}": l for l in range(k)},
        tile_color={"w": "w", "b": "b"},
        vertex_loc0={f"p{i}": Corner(i) for i in range(k)},
        edge_loc0={f"s{l}": BoundaryEdge(l) for l in range(k)},
        tile_loc0={"w": TileInterior("w"), "b": TileInterior("b")},
    )
    check_level(lc)
    return lc


@dataclass(frozen=True)
class _Template:
    """The sub-complex of the rule hosted in one 0-tile, split into the
    interior part (instantiated per tile) and the chains s_l (instantiated
    per edge, shared between the two templates)."""

    tiles: tuple[str, ...]
    interior_vertices: tuple[str, ...]
    interior_edges: tuple[str, ...]


def _template(rule: SubdivisionRule, color: str) -> _Template:
    cache = getattr(rule, "_template_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(rule, "_template_cache", cache)
    if color not in cache:
        cache[color] = _Template(
            tiles=rule.tiles_hosted(color),
            interior_vertices=tuple(
                v for v in rule.d1.vertex_ids
                if isinstance(rule.vertex_loc[v], TileInterior) and rule.vertex_loc[v].color == color
            ),
            interior_edges=tuple(
                e for e in rule.d1.edges
                if isinstance(rule.edge_loc[e], TileInterior) and rule.edge_loc[e].color == color
            ),
        )
    return cache[color]


def subdivide(lc: LevelComplex, rule: SubdivisionRule) -> LevelComplex:
    """One refinement step; the result is self-checked before returning."""
    if rule is not lc.rule and rule != lc.rule:
        raise WrongRule("level complex was generated from a different rule")
    k = rule.k
    cx = lc.complex

    vertex_ids: list[str] = []
    vertex_label: dict[str, int] = {}
    vertex_loc0: dict[str, Location] = {}
    edge_records: list[tuple[str, str, str]] = []
    edge_label: dict[str, int] = {}
    edge_loc0: dict[str, Location] = {}
    tile_records: list[tuple[str, tuple[DirectedEdgeRef, ...]]] = []
    tile_color: dict[str, str] = {}
    tile_loc0: dict[str, TileInterior] = {}
    parent_of: dict[str, str] = {}
    edge_children: dict[str, tuple[DirectedEdgeRef, ...]] = {}

    # Surviving vertices: same id and position, relabeled by one more
    # application of the map (old label j now maps to the image of 0-vertex j).
    for vid in cx.vertex_ids:
        vertex_ids.append(vid)
        vertex_label[vid] = rule.corner_image(lc.vertex_label[vid])
        vertex_loc0[vid] = lc.vertex_loc0[vid]
        parent_of[vid] = vid

    # Subdivide every edge by the chain of the 0-edge it maps onto,
    # anchored at the endpoint whose label equals the edge's label.
    chain_vertex_ids: dict[tuple[str, str], str] = {}
    for eid in cx.edges:
        l = lc.edge_label[eid]
        tail, head = cx.edges[eid]
        if lc.vertex_label[tail] == l:
            start, end = tail, head
        elif lc.vertex_label[head] == l:
            start, end = head, tail
        else:
            raise BoundaryMatchFailure(f"edge {eid!r} labeled {l} has no endpoint labeled {l}")
        vmap = {rule.base_vertices[l]: start, rule.base_vertices[(l + 1) % k]: end}
        chain = rule.boundary_chain(l)
        for dart in chain:
            for tv in (rule.d1.edge_tail(dart.edge_id), rule.d1.edge_head(dart.edge_id)):
                if tv in vmap:
                    continue
                nid = f"{eid}/{tv}"
                vmap[tv] = nid
                chain_vertex_ids[(eid, tv)] = nid
                vertex_ids.append(nid)
                vertex_label[nid] = rule.vertex_label[tv]
                vertex_loc0[nid] = lc.edge_loc0[eid]
                parent_of[nid] = eid
        darts = []
        for dart in chain:
            nid = f"{eid}/{dart.edge_id}"
            t_tail, t_head = rule.d1.edges[dart.edge_id]
            edge_records.append((nid, vmap[t_tail], vmap[t_head]))
            edge_label[nid] = rule.edge_label[dart.edge_id]
            edge_loc0[nid] = lc.edge_loc0[eid]
            parent_of[nid] = eid
            darts.append(DirectedEdgeRef(nid, dart.forward))
        edge_children[eid] = tuple(darts)

    # Instantiate each tile's interior copy of its color's template and
    # assemble the child boundary walks.
    for tid in cx.tiles:
        color = lc.tile_color[tid]
        tpl = _template(rule, color)
        loc0 = lc.tile_loc0[tid]

        vmap = {}
        for i in range(k):
            vmap[rule.base_vertices[i]] = lc.tile_vertex_with_label(tid, i)
        edge_by_label = {l: lc.tile_edge_with_label(tid, l) for l in range(k)}
        for l in range(k):
            host_edge = edge_by_label[l]
            for dart in rule.boundary_chain(l):
                for tv in (rule.d1.edge_tail(dart.edge_id), rule.d1.edge_head(dart.edge_id)):
                    if tv not in vmap:
                        vmap[tv] = chain_vertex_ids[(host_edge, tv)]
        for tv in tpl.interior_vertices:
            nid = f"{tid}/{tv}"
            vmap[tv] = nid
            vertex_ids.append(nid)
            vertex_label[nid] = rule.vertex_label[tv]
            vertex_loc0[nid] = loc0
            parent_of[nid] = tid

        interior_edge_ids = {}
        for te in tpl.interior_edges:
            nid = f"{tid}/{te}"
            t_tail, t_head = rule.d1.edges[te]
            edge_records.append((nid, vmap[t_tail], vmap[t_head]))
            edge_label[nid] = rule.edge_label[te]
            edge_loc0[nid] = loc0
            parent_of[nid] = tid
            interior_edge_ids[te] = nid

        for template_tile in tpl.tiles:
            nid = f"{tid}/{template_tile}"
            walk = []
            for ref in rule.d1.tiles[template_tile]:
                te = ref.edge_id
                if te in interior_edge_ids:
                    walk.append(DirectedEdgeRef(interior_edge_ids[te], ref.forward))
                else:
                    loc = rule.edge_loc[te]
                    if not isinstance(loc, BoundaryEdge):
                        raise BoundaryMatchFailure(
                            f"template edge {te!r} of tile {template_tile!r} is neither interior nor on a chain"
                        )
                    walk.append(DirectedEdgeRef(f"{edge_by_label[loc.label]}/{te}", ref.forward))
            tile_records.append((nid, tuple(walk)))
            tile_color[nid] = rule.tile_color[template_tile]
            tile_loc0[nid] = loc0
            parent_of[nid] = tid

    known_edges = {r[0] for r in edge_records}
    for _, walk in tile_records:
        for ref in walk:
            if ref.edge_id not in known_edges:
                raise BoundaryMatchFailure(f"child walk references missing edge {ref.edge_id!r}")

    new_cx = build_complex(vertex_ids, edge_records, tile_records)
    out = LevelComplex(
        rule=rule,
        level=lc.level + 1,
        complex=new_cx,
        vertex_label=vertex_label,
        edge_label=edge_label,
        tile_color=tile_color,
        vertex_loc0=vertex_loc0,
        edge_loc0=edge_loc0,
        tile_loc0=tile_loc0,
        parent_of=parent_of,
        edge_children=edge_children,
        previous=lc,
    )
    check_level(out)
    return out


def check_level(lc: LevelComplex) -> None:
    """Self-check: count formulas, label axioms, loc0/parent consistency."""
    rule, cx, n = lc.rule, lc.complex, lc.level
    k, deg = rule.k, rule.deg
    diags: list[Diagnostic] = []
    want = (2 * deg**n, k * deg**n, (k - 2) * deg**n + 2)
    got = (cx.num_tiles, cx.num_edges, cx.num_vertices)
    if got != want:
        diags.append(Diagnostic("CountMismatch", f"level {n}: (tiles, edges, vertices) = {got}, expected {want}"))
    diags.extend(
        label_axiom_diagnostics(k, cx, lc.vertex_label, lc.edge_label, lc.tile_color)
    )
    if lc.previous is not None:
        prev = lc.previous
        for vid in cx.vertex_ids:
            parent = lc.parent_of[vid]
            if parent == vid:
                if lc.vertex_loc0[vid] != prev.vertex_loc0[vid]:
                    diags.append(Diagnostic("LocationConflict", f"vertex {vid!r} changed loc0"))
            elif parent in prev.complex.edges:
                if lc.vertex_loc0[vid] != prev.edge_loc0[parent]:
                    diags.append(
                        Diagnostic("LocationConflict", f"vertex {vid!r} does not inherit loc0 of edge {parent!r}")
                    )
            elif parent in prev.complex.tiles:
                if lc.vertex_loc0[vid] != prev.tile_loc0[parent]:
                    diags.append(
                        Diagnostic("LocationConflict", f"vertex {vid!r} does not inherit loc0 of tile {parent!r}")
                    )
            else:
                diags.append(Diagnostic("LocationConflict", f"vertex {vid!r} has unknown parent {parent!r}"))
        for eid in cx.edges:
            parent = lc.parent_of[eid]
            want_loc = (
                prev.edge_loc0.get(parent) if parent in prev.complex.edges else prev.tile_loc0.get(parent)
            )
            if lc.edge_loc0[eid] != want_loc:
                diags.append(Diagnostic("LocationConflict", f"edge {eid!r} does not inherit loc0 of {parent!r}"))
        for tid in cx.tiles:
            parent = lc.parent_of[tid]
            if parent not in prev.complex.tiles or lc.tile_loc0[tid] != prev.tile_loc0[parent]:
                diags.append(Diagnostic("LocationConflict", f"tile {tid!r} inconsistent with parent {parent!r}"))
    if diags:
        raise InvalidComplex(diags)


def generate(rule: SubdivisionRule, n: int, max_tiles: int = DEFAULT_MAX_TILES) -> LevelComplex:
    """D^n from the pillow by n subdivision steps."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    if 2 * rule.deg**n > max_tiles:
        raise ResourceLimit(
            f"level {n} of {rule.name} has {2 * rule.deg ** n} tiles, over the cap of {max_tiles}"
        )
    lc = base_level(rule)
    for _ in range(n):
        lc = subdivide(lc, rule)
    return lc


# -- addresses -------------------------------------------------------------


def address_of(lc: LevelComplex, tile_id: str) -> Address:
    if tile_id not in lc.complex.tiles:
        raise InadmissibleAddress(f"no tile {tile_id!r} at level {lc.level}")
    parts = tile_id.split("/")
    return Address(parts[0], tuple(parts[1:]))


def tile_at(lc: LevelComplex, address: Address) -> str:
    if address.level != lc.level:
        raise LengthMismatch(f"address has {address.level} letters, level is {lc.level}")
    if address.c0 not in ("w", "b"):
        raise InadmissibleAddress(f"starting color {address.c0!r} is not a 0-tile")
    rule = lc.rule
    prev_color = address.c0
    for letter in address.letters:
        host = rule.tile_host.get(letter)
        if host is None:
            raise InadmissibleAddress(f"{letter!r} is not a level-1 tile of {rule.name}")
        if host != prev_color:
            raise InadmissibleAddress(
                f"letter {letter!r} is hosted in {host}, but the previous tile has color {prev_color}"
            )
        prev_color = rule.tile_color[letter]
    tid = address.tile_id()
    if tid not in lc.complex.tiles:
        raise BoundaryMatchFailure(f"admissible address {tid!r} has no tile")
    return tid


# -- subshift of finite type -----------------------------------------------


@dataclass(frozen=True)
class SftMatrix:
    """Transition structure on level-1 tiles: sigma -> tau allowed when tau
    is hosted in the 0-tile sigma maps onto."""

    alphabet: tuple[str, ...]
    matrix: tuple[tuple[bool, ...], ...]
    strongly_connected: bool
    periodic_letters: dict[str, bool]

    def row_sum(self, letter: str) -> int:
        return sum(self.matrix[self.alphabet.index(letter)])


def sft_matrix(rule: SubdivisionRule) -> SftMatrix:
    alphabet = tuple(sorted(rule.d1.tiles))
    index = {a: i for i, a in enumerate(alphabet)}
    matrix = tuple(
        tuple(rule.tile_host[tau] == rule.tile_color[sigma] for tau in alphabet)
        for sigma in alphabet
    )

    def reachable(start: int) -> set[int]:
        # nodes reachable in one or more steps; start itself only if on a cycle
        seen: set[int] = set()
        stack = [j for j in range(len(alphabet)) if matrix[start][j]]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(j for j in range(len(alphabet)) if matrix[cur][j] and j not in seen)
        return seen

    reach_from_0 = reachable(0) | {0}
    transpose_reach: set[int] = {0}
    stack = [0]
    while stack:
        cur = stack.pop()
        for j in range(len(alphabet)):
            if matrix[j][cur] and j not in transpose_reach:
                transpose_reach.add(j)
                stack.append(j)
    strongly = len(reach_from_0) == len(alphabet) == len(transpose_reach)
    periodic = {a: index[a] in reachable(index[a]) for a in alphabet}
    return SftMatrix(alphabet, matrix, strongly, periodic)


def count_paths(rule: SubdivisionRule, n: int) -> int:
    """Admissible words of length n over both starting colors."""
    counts = {"w": 1, "b": 1}
    for _ in range(n):
        nxt = {"w": 0, "b": 0}
        for tid in rule.d1.tiles:
            nxt[rule.tile_color[tid]] += counts[rule.tile_host[tid]]
        counts = nxt
    return counts["w"] + counts["b"]
