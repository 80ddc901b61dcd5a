"""Two-tile subdivision rules: the level-1 complex plus labels and locations.

A rule consists of an oriented complex refining the k-gon pillow, a color,
a host and a boundary walk per tile, and a label and a location per vertex
and edge. Labels say where a cell maps under the realizing map (a residue
mod k for vertices and edges, a color for tiles); locations say where the
cell sits inside the pillow (interior of a 0-tile, interior of a 0-edge,
or a corner). Conflating the two is the classic mistake: a vertex sitting
on 0-edge 0 may well map to corner 2.

Validation is rejection only, never repair; rules are ground truth for the
subdivision engine, so every axiom gets its own named diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .cells import DirectedEdgeRef, OrientedComplex, build_complex, parse_signed, validate_complex
from .diagnostics import Diagnostic, InvalidRule

WHITE = "w"
BLACK = "b"


def other_color(color: str) -> str:
    return BLACK if color == WHITE else WHITE


# -- locations -------------------------------------------------------------


@dataclass(frozen=True)
class TileInterior:
    """Cell sits in the open 0-tile of the given color."""

    color: str


@dataclass(frozen=True)
class BoundaryEdge:
    """Cell sits in the interior of the 0-edge joining corners l, l+1."""

    label: int


@dataclass(frozen=True)
class Corner:
    """Cell is the copy of 0-vertex i."""

    index: int


Location = TileInterior | BoundaryEdge | Corner


def loc_token(loc: Location) -> str:
    if isinstance(loc, TileInterior):
        return f"tileint {loc.color}"
    if isinstance(loc, BoundaryEdge):
        return f"bedge {loc.label}"
    return f"corner {loc.index}"


@dataclass(frozen=True)
class BaseFlag:
    """The positively-oriented flag fixing the label normalization."""

    vertex: str
    dart: DirectedEdgeRef
    tile: str


class TileCounts(NamedTuple):
    """Tile counts by (host, color): ww, wb, bw, bb; deg = #tiles / 2.

    ww counts white tiles inside the white 0-tile, wb black tiles inside
    the white 0-tile, and so on. ww + bw = wb + bb = deg always holds for
    a valid rule (each 0-tile is covered by deg preimage tiles).
    """

    ww: int
    wb: int
    bw: int
    bb: int
    deg: int


@dataclass(frozen=True)
class LabeledSkeleton:
    """A labeled complex without host data.

    Not a subdivision rule: nothing says the complex refines the pillow on
    its marked vertices. Used for curve searches on counterexamples where
    no invariant curve exists. marked[i] is the copy of 0-vertex i.
    """

    name: str
    k: int
    complex: OrientedComplex
    marked: tuple[str, ...]
    vertex_label: dict[str, int]
    edge_label: dict[str, int]
    tile_color: dict[str, str]


class SubdivisionRule:
    """Validated two-tile subdivision rule. Immutable after construction.

    Use make_rule or parse_rule; the constructor trusts its arguments.
    Derived data: base_vertices[i] is the unique corner(i) vertex, and
    boundary_chain(l) is the directed subdivision path of 0-edge l running
    from base_vertices[l] to base_vertices[l+1].
    """

    def __init__(
        self,
        name: str,
        k: int,
        d1: OrientedComplex,
        vertex_label: dict[str, int],
        vertex_loc: dict[str, Location],
        edge_label: dict[str, int],
        edge_loc: dict[str, Location],
        tile_color: dict[str, str],
        tile_host: dict[str, str],
        base_flag: BaseFlag,
        base_vertices: tuple[str, ...],
        boundary_chains: dict[int, tuple[DirectedEdgeRef, ...]],
    ):
        self.name = name
        self.k = k
        self.d1 = d1
        self.vertex_label = vertex_label
        self.vertex_loc = vertex_loc
        self.edge_label = edge_label
        self.edge_loc = edge_loc
        self.tile_color = tile_color
        self.tile_host = tile_host
        self.base_flag = base_flag
        self.base_vertices = base_vertices
        self._boundary_chains = boundary_chains

    @property
    def deg(self) -> int:
        return self.d1.num_tiles // 2

    def boundary_chain(self, l: int) -> tuple[DirectedEdgeRef, ...]:
        return self._boundary_chains[l % self.k]

    def tiles_hosted(self, color: str) -> tuple[str, ...]:
        return tuple(sorted(t for t, h in self.tile_host.items() if h == color))

    def counts(self) -> TileCounts:
        n = {("w", "w"): 0, ("w", "b"): 0, ("b", "w"): 0, ("b", "b"): 0}
        for tid in self.d1.tiles:
            n[(self.tile_host[tid], self.tile_color[tid])] += 1
        c = TileCounts(n[("w", "w")], n[("w", "b")], n[("b", "w")], n[("b", "b")], self.deg)
        assert c.ww + c.bw == c.wb + c.bb == c.deg
        return c

    def corner_image(self, i: int) -> int:
        """Index of the 0-vertex that corner i maps to."""
        return self.vertex_label[self.base_vertices[i % self.k]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubdivisionRule):
            return NotImplemented
        return (
            self.name == other.name
            and self.k == other.k
            and self.d1 == other.d1
            and self.vertex_label == other.vertex_label
            and self.vertex_loc == other.vertex_loc
            and self.edge_label == other.edge_label
            and self.edge_loc == other.edge_loc
            and self.tile_color == other.tile_color
            and self.tile_host == other.tile_host
            and self.base_flag == other.base_flag
        )

    def __repr__(self) -> str:
        return f"SubdivisionRule({self.name!r}, k={self.k}, deg={self.deg})"


def counts(rule: SubdivisionRule) -> TileCounts:
    return rule.counts()


# -- validation ------------------------------------------------------------


def _diag(diags, lines, kind, ident, code, message):
    line = lines.get((kind, ident)) if lines else None
    diags.append(Diagnostic(code, message, line))


def _check_base_flag(cx: OrientedComplex, flag: BaseFlag) -> str | None:
    if flag.vertex not in set(cx.vertex_ids):
        return f"base flag vertex {flag.vertex!r} unknown"
    if flag.dart.edge_id not in cx.edges:
        return f"base flag edge {flag.dart.edge_id!r} unknown"
    if flag.tile not in cx.tiles:
        return f"base flag tile {flag.tile!r} unknown"
    if cx.dart_tail(flag.dart) != flag.vertex:
        return "base flag edge does not start at the flag vertex"
    if cx.side_tile.get((flag.dart.edge_id, flag.dart.forward)) != flag.tile:
        return "base flag is not positively oriented (tile is not left of the directed edge)"
    return None


def _walk_boundary_path(
    cx: OrientedComplex,
    path_edges: set[str],
    interior: set[str],
    start: str,
    end: str,
) -> tuple[tuple[DirectedEdgeRef, ...] | None, str | None]:
    """Chain the given edges into a simple directed path start -> end.

    The path must use every edge in path_edges exactly once and visit
    exactly the vertices in interior strictly between the endpoints.
    Returns (darts, None) on success, (None, reason) otherwise.
    """
    by_vertex: dict[str, list[DirectedEdgeRef]] = {}
    for eid in path_edges:
        tail, head = cx.edges[eid]
        by_vertex.setdefault(tail, []).append(DirectedEdgeRef(eid, True))
        by_vertex.setdefault(head, []).append(DirectedEdgeRef(eid, False))
    darts: list[DirectedEdgeRef] = []
    seen_interior: set[str] = set()
    used: set[str] = set()
    at = start
    while True:
        options = [d for d in by_vertex.get(at, []) if d.edge_id not in used]
        if len(options) != 1:
            word = "no" if not options else "multiple"
            return None, f"{word} continuation at vertex {at!r}"
        dart = options[0]
        used.add(dart.edge_id)
        darts.append(dart)
        at = cx.dart_head(dart)
        if at == end:
            if used != path_edges:
                return None, "path reached its endpoint before using every edge"
            break
        if at == start or at in seen_interior:
            return None, f"path revisits vertex {at!r}"
        if at not in interior:
            return None, f"path passes through vertex {at!r} not located on this 0-edge"
        seen_interior.add(at)
    if seen_interior != interior:
        missing = sorted(interior - seen_interior)
        return None, f"vertices {missing} located on this 0-edge are not on the path"
    return tuple(darts), None


def label_axiom_diagnostics(
    k: int,
    cx: OrientedComplex,
    vertex_label: dict[str, int],
    edge_label: dict[str, int],
    tile_color: dict[str, str],
    lines: dict | None = None,
) -> list[Diagnostic]:
    """Checks shared by rules and generated levels: k-gons, even vertex
    cycles, checkerboard colors, edge endpoint labels, cyclic boundary
    label order, and the flag condition."""
    diags: list[Diagnostic] = []

    for tid, walk in cx.tiles.items():
        if len(walk) != k:
            _diag(diags, lines, "tile", tid, "NotKGon", f"tile {tid!r} has {len(walk)} sides, expected {k}")
    for vid in cx.vertex_ids:
        d = cx.vertex_cycle(vid).length
        if d % 2 != 0:
            _diag(diags, lines, "vertex", vid, "OddVertexCycle", f"vertex {vid!r} has cycle length {d}")

    n_white = sum(1 for c in tile_color.values() if c == WHITE)
    n_black = cx.num_tiles - n_white
    if n_white != n_black:
        diags.append(
            Diagnostic("ColorCountImbalance", f"{n_white} white vs {n_black} black tiles")
        )
    for eid in sorted(cx.edges):
        a, b = cx.edge_tiles(eid)
        if tile_color[a] == tile_color[b]:
            _diag(
                diags, lines, "edge", eid, "AdjacentSameColor",
                f"tiles {a!r} and {b!r} share edge {eid!r} but are both {tile_color[a]}",
            )

    for eid, (tail, head) in cx.edges.items():
        l = edge_label[eid]
        got = {vertex_label[tail], vertex_label[head]}
        want = {l, (l + 1) % k}
        if got != want:
            _diag(
                diags, lines, "edge", eid, "EdgeEndpointLabelMismatch",
                f"edge {eid!r} labeled {l} has endpoint labels {sorted(got)}, expected {sorted(want)}",
            )

    for tid, walk in cx.tiles.items():
        if len(walk) != k:
            continue
        step = 1 if tile_color[tid] == WHITE else -1
        vlabels = [vertex_label[v] for v in cx.tile_vertices(tid)]
        ok = all(vlabels[(j + 1) % k] == (vlabels[j] + step) % k for j in range(k))
        if not ok:
            order = "cyclic" if step == 1 else "anti-cyclic"
            _diag(
                diags, lines, "tile", tid, "CyclicLabelOrder",
                f"boundary vertex labels of {tile_color[tid]} tile {tid!r} are {vlabels}, not in {order} order",
            )

    for tid, walk in cx.tiles.items():
        for ref in walk:
            v = cx.dart_tail(ref)
            lv, le = vertex_label[v], edge_label[ref.edge_id]
            expect = lv if tile_color[tid] == WHITE else (lv - 1) % k
            if le != expect:
                _diag(
                    diags, lines, "tile", tid, "FlagCondition",
                    f"positive flag ({v!r}, {ref.edge_id!r}, {tid!r}) carries labels "
                    f"({lv}, {le}, {tile_color[tid]}), expected edge label {expect}",
                )
    return diags


def _rule_diagnostics(
    k: int,
    cx: OrientedComplex,
    vertex_label: dict[str, int],
    vertex_loc: dict[str, Location],
    edge_label: dict[str, int],
    edge_loc: dict[str, Location],
    tile_color: dict[str, str],
    tile_host: dict[str, str],
    base_flag: BaseFlag,
    lines: dict | None,
) -> tuple[list[Diagnostic], tuple[str, ...], dict[int, tuple[DirectedEdgeRef, ...]]]:
    diags: list[Diagnostic] = []
    base_vertices: tuple[str, ...] = ()
    chains: dict[int, tuple[DirectedEdgeRef, ...]] = {}

    if cx.num_tiles <= 2:
        diags.append(
            Diagnostic("TooFewTiles", f"{cx.num_tiles} tiles; a subdivision rule needs more than two")
        )

    diags.extend(label_axiom_diagnostics(k, cx, vertex_label, edge_label, tile_color, lines))

    n = {("w", "w"): 0, ("w", "b"): 0, ("b", "w"): 0, ("b", "b"): 0}
    for tid in cx.tiles:
        n[(tile_host[tid], tile_color[tid])] += 1
    if n[("w", "b")] == 0:
        diags.append(Diagnostic("HostCountZero", "no black tile inside the white 0-tile"))
    if n[("b", "w")] == 0:
        diags.append(Diagnostic("HostCountZero", "no white tile inside the black 0-tile"))

    reason = _check_base_flag(cx, base_flag)
    if reason is None:
        lv = vertex_label[base_flag.vertex]
        le = edge_label[base_flag.dart.edge_id]
        lc = tile_color[base_flag.tile]
        if (lv, le, lc) != (0, 0, WHITE):
            reason = f"base flag carries labels ({lv}, {le}, {lc}), expected (0, 0, w)"
    if reason is not None:
        diags.append(Diagnostic("BaseFlagInvalid", reason))

    # Location consistency: corners, boundary paths, hosts.
    corner_owner: dict[int, list[str]] = {i: [] for i in range(k)}
    for vid in cx.vertex_ids:
        loc = vertex_loc[vid]
        if isinstance(loc, Corner):
            corner_owner[loc.index].append(vid)
    bv: list[str] = []
    for i in range(k):
        owners = corner_owner[i]
        if len(owners) != 1:
            diags.append(
                Diagnostic("LocationConflict", f"{len(owners)} vertices located at corner {i}, expected exactly one")
            )
        else:
            bv.append(owners[0])
    if len(bv) == k:
        base_vertices = tuple(bv)
        for l in range(k):
            path_edges = {e for e, loc in edge_loc.items() if isinstance(loc, BoundaryEdge) and loc.label == l}
            interior = {
                v for v, loc in vertex_loc.items() if isinstance(loc, BoundaryEdge) and loc.label == l
            }
            if not path_edges:
                diags.append(
                    Diagnostic("LocationConflict", f"no edges located on 0-edge {l}; its subdivision path is empty")
                )
                continue
            darts, reason = _walk_boundary_path(cx, path_edges, interior, bv[l], bv[(l + 1) % k])
            if darts is None:
                diags.append(Diagnostic("LocationConflict", f"subdivision path of 0-edge {l}: {reason}"))
            else:
                chains[l] = darts

    for tid in cx.tiles:
        host = tile_host[tid]
        cells: list[tuple[str, Location]] = [
            (v, vertex_loc[v]) for v in cx.tile_vertices(tid)
        ] + [(r.edge_id, edge_loc[r.edge_id]) for r in cx.tiles[tid]]
        for cid, loc in cells:
            if isinstance(loc, TileInterior) and loc.color != host:
                _diag(
                    diags, lines, "tile", tid, "LocationConflict",
                    f"tile {tid!r} hosted {host} has boundary cell {cid!r} located in the {loc.color} 0-tile",
                )
    for eid in sorted(cx.edges):
        a, b = cx.edge_tiles(eid)
        loc = edge_loc[eid]
        if isinstance(loc, TileInterior) and tile_host[a] != tile_host[b]:
            _diag(
                diags, lines, "edge", eid, "LocationConflict",
                f"edge {eid!r} located in a 0-tile interior separates hosts {tile_host[a]} and {tile_host[b]}",
            )
        if isinstance(loc, BoundaryEdge) and tile_host[a] == tile_host[b]:
            _diag(
                diags, lines, "edge", eid, "LocationConflict",
                f"edge {eid!r} located on a 0-edge has both sides hosted {tile_host[a]}",
            )
        if isinstance(loc, Corner):
            _diag(diags, lines, "edge", eid, "LocationConflict", f"edge {eid!r} located at a corner")

    return diags, base_vertices, chains


def make_rule(
    name: str,
    k: int,
    vertex_records: Iterable[tuple[str, int, Location]],
    edge_records: Iterable[tuple[str, str, str, int, Location]],
    tile_records: Iterable[tuple[str, str, str, Iterable[DirectedEdgeRef]]],
    base_flag: BaseFlag,
    _lines: dict | None = None,
) -> SubdivisionRule:
    """Validate records and assemble a rule; raises InvalidRule on findings."""
    vertex_records = list(vertex_records)
    edge_records = list(edge_records)
    tile_records = [(tid, c, h, tuple(b)) for tid, c, h, b in tile_records]

    diags: list[Diagnostic] = []
    for kind, ident in (
        [("vertex", r[0]) for r in vertex_records]
        + [("edge", r[0]) for r in edge_records]
        + [("tile", r[0]) for r in tile_records]
    ):
        if "/" in ident:
            line = _lines.get((kind, ident)) if _lines else None
            diags.append(
                Diagnostic("BadIdentifier", f"{kind} id {ident!r} contains '/', reserved for derived cells", line)
            )
    if diags:
        raise InvalidRule(diags)

    structural = validate_complex(
        [r[0] for r in vertex_records],
        [(r[0], r[1], r[2]) for r in edge_records],
        [(r[0], r[3]) for r in tile_records],
    )
    if structural:
        raise InvalidRule(structural)
    cx = build_complex(
        [r[0] for r in vertex_records],
        [(r[0], r[1], r[2]) for r in edge_records],
        [(r[0], r[3]) for r in tile_records],
    )

    if k < 3:
        raise InvalidRule([Diagnostic("KTooSmall", f"k = {k}, need at least 3 marked points")])

    vertex_label = {r[0]: r[1] % k for r in vertex_records}
    vertex_loc = {r[0]: _reduce_loc(r[2], k) for r in vertex_records}
    edge_label = {r[0]: r[3] % k for r in edge_records}
    edge_loc = {r[0]: _reduce_loc(r[4], k) for r in edge_records}
    tile_color = {r[0]: r[1] for r in tile_records}
    tile_host = {r[0]: r[2] for r in tile_records}

    diags, base_vertices, chains = _rule_diagnostics(
        k, cx, vertex_label, vertex_loc, edge_label, edge_loc, tile_color, tile_host, base_flag, _lines
    )
    if diags:
        raise InvalidRule(diags)
    return SubdivisionRule(
        name, k, cx, vertex_label, vertex_loc, edge_label, edge_loc,
        tile_color, tile_host, base_flag, base_vertices, chains,
    )


def _reduce_loc(loc: Location, k: int) -> Location:
    if isinstance(loc, BoundaryEdge):
        return BoundaryEdge(loc.label % k)
    if isinstance(loc, Corner):
        return Corner(loc.index % k)
    return loc


# -- labeling derivation ---------------------------------------------------


def derive_labeling(
    cx: OrientedComplex,
    tile_hosts: dict[str, str],
    base_flag: BaseFlag,
) -> tuple[dict[str, int], dict[str, int], dict[str, str]]:
    """The unique labeling normalized at base_flag.

    Colors come from parity along chains of edge-adjacent tiles (the flag
    tile is white); vertex labels from summing +-1 increments along edges
    (+1 when the tile left of the forward traversal is white); edge labels
    are then forced by their endpoints. Hosts do not influence labels; the
    argument is accepted so callers can hand over a rule's data unchanged.

    Raises InvalidRule with one of NotKGon, OddVertexCycle,
    ColorParityConflict, LabelHolonomy.
    """
    del tile_hosts
    sizes = {len(walk) for walk in cx.tiles.values()}
    if len(sizes) != 1:
        raise InvalidRule([Diagnostic("NotKGon", f"tiles have boundary sizes {sorted(sizes)}")])
    k = sizes.pop()
    for vid in cx.vertex_ids:
        d = cx.vertex_cycle(vid).length
        if d % 2 != 0:
            raise InvalidRule([Diagnostic("OddVertexCycle", f"vertex {vid!r} has cycle length {d}")])

    reason = _check_base_flag(cx, base_flag)
    if reason is not None:
        raise InvalidRule([Diagnostic("BaseFlagInvalid", reason)])

    tile_color: dict[str, str] = {base_flag.tile: WHITE}
    stack = [base_flag.tile]
    while stack:
        cur = stack.pop()
        for ref in cx.tiles[cur]:
            neighbor = cx.side_tile[(ref.edge_id, not ref.forward)]
            want = other_color(tile_color[cur])
            have = tile_color.get(neighbor)
            if have is None:
                tile_color[neighbor] = want
                stack.append(neighbor)
            elif have != want:
                raise InvalidRule(
                    [Diagnostic("ColorParityConflict", f"tiles {cur!r} and {neighbor!r} force conflicting colors")]
                )

    def alpha(eid: str) -> int:
        return 1 if tile_color[cx.side_tile[(eid, True)]] == WHITE else -1

    vertex_label: dict[str, int] = {base_flag.vertex: 0}
    stack2 = [base_flag.vertex]
    while stack2:
        cur = stack2.pop()
        for eid in cx.incident_edges(cur):
            tail, head = cx.edges[eid]
            a = alpha(eid)
            for src, dst, delta in ((tail, head, a), (head, tail, -a)):
                if src != cur:
                    continue
                want = (vertex_label[cur] + delta) % k
                have = vertex_label.get(dst)
                if have is None:
                    vertex_label[dst] = want
                    stack2.append(dst)
                elif have != want:
                    raise InvalidRule(
                        [
                            Diagnostic(
                                "LabelHolonomy",
                                f"edge {eid!r} forces label {want} on vertex {dst!r}, already labeled {have}",
                            )
                        ]
                    )

    edge_label: dict[str, int] = {}
    for eid, (tail, head) in cx.edges.items():
        lt = vertex_label[tail]
        edge_label[eid] = lt if alpha(eid) == 1 else (lt - 1) % k
    return vertex_label, edge_label, tile_color


# -- file format -----------------------------------------------------------


def _fmt_loc(loc: Location) -> str:
    return loc_token(loc)


def serialize_rule(rule: SubdivisionRule) -> str:
    """Canonical text form; stable byte-for-byte for equal rules."""
    out = [f"rule {rule.name}", f"k {rule.k}"]
    for vid in sorted(rule.d1.vertex_ids):
        out.append(f"vertex {vid} label {rule.vertex_label[vid]} loc {_fmt_loc(rule.vertex_loc[vid])}")
    for eid in sorted(rule.d1.edges):
        tail, head = rule.d1.edges[eid]
        out.append(
            f"edge {eid} tail {tail} head {head} label {rule.edge_label[eid]} loc {_fmt_loc(rule.edge_loc[eid])}"
        )
    for tid in sorted(rule.d1.tiles):
        walk = " ".join(r.signed() for r in rule.d1.tiles[tid])
        out.append(
            f"tile {tid} color {rule.tile_color[tid]} host {rule.tile_host[tid]} boundary {walk}"
        )
    bf = rule.base_flag
    out.append(f"baseflag {bf.vertex} {bf.dart.signed()} {bf.tile}")
    return "\n".join(out) + "\n"


def _parse_loc_tokens(tokens: list[str], lineno: int, diags: list[Diagnostic], edge_ok_corner: bool) -> Location | None:
    if not tokens:
        diags.append(Diagnostic("SyntaxError", "missing location", lineno))
        return None
    kind = tokens[0]
    if kind == "tileint":
        if len(tokens) != 2 or tokens[1] not in (WHITE, BLACK):
            diags.append(Diagnostic("SyntaxError", "tileint needs color w or b", lineno))
            return None
        return TileInterior(tokens[1])
    if kind in ("bedge", "corner"):
        if kind == "corner" and not edge_ok_corner:
            diags.append(Diagnostic("SyntaxError", "edges cannot be located at corners", lineno))
            return None
        if len(tokens) != 2:
            diags.append(Diagnostic("SyntaxError", f"{kind} needs one integer", lineno))
            return None
        try:
            value = int(tokens[1])
        except ValueError:
            diags.append(Diagnostic("SyntaxError", f"{kind} index {tokens[1]!r} is not an integer", lineno))
            return None
        return BoundaryEdge(value) if kind == "bedge" else Corner(value)
    diags.append(Diagnostic("SyntaxError", f"unknown location kind {kind!r}", lineno))
    return None


def parse_rule(text: str) -> SubdivisionRule:
    """Parse the line-oriented rule format; raises InvalidRule on findings."""
    diags: list[Diagnostic] = []
    name: str | None = None
    k: int | None = None
    vertex_records: list[tuple[str, int, Location]] = []
    edge_records: list[tuple[str, str, str, int, Location]] = []
    tile_records: list[tuple[str, str, str, tuple[DirectedEdgeRef, ...]]] = []
    base_flag: BaseFlag | None = None
    lines_map: dict[tuple[str, str], int] = {}

    def fail(lineno: int, message: str) -> None:
        diags.append(Diagnostic("SyntaxError", message, lineno))

    def want_int(tok: str, lineno: int, what: str) -> int | None:
        try:
            return int(tok)
        except ValueError:
            fail(lineno, f"{what} {tok!r} is not an integer")
            return None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head, rest = tok[0], tok[1:]
        if head == "rule":
            if len(rest) != 1:
                fail(lineno, "rule line needs exactly one name")
            elif name is not None:
                fail(lineno, "duplicate rule line")
            else:
                name = rest[0]
        elif head == "k":
            if len(rest) != 1:
                fail(lineno, "k line needs exactly one integer")
            elif k is not None:
                fail(lineno, "duplicate k line")
            else:
                k = want_int(rest[0], lineno, "k")
        elif head == "vertex":
            if len(rest) < 4 or rest[1] != "label" or rest[3] != "loc":
                fail(lineno, "vertex line is 'vertex <id> label <int> loc <...>'")
                continue
            label = want_int(rest[2], lineno, "vertex label")
            loc = _parse_loc_tokens(rest[4:], lineno, diags, edge_ok_corner=True)
            if label is None or loc is None:
                continue
            vertex_records.append((rest[0], label, loc))
            lines_map[("vertex", rest[0])] = lineno
        elif head == "edge":
            if (
                len(rest) < 8
                or rest[1] != "tail"
                or rest[3] != "head"
                or rest[5] != "label"
                or rest[7] != "loc"
            ):
                fail(lineno, "edge line is 'edge <id> tail <vid> head <vid> label <int> loc <...>'")
                continue
            label = want_int(rest[6], lineno, "edge label")
            loc = _parse_loc_tokens(rest[8:], lineno, diags, edge_ok_corner=False)
            if label is None or loc is None:
                continue
            edge_records.append((rest[0], rest[2], rest[4], label, loc))
            lines_map[("edge", rest[0])] = lineno
        elif head == "tile":
            if (
                len(rest) < 7
                or rest[1] != "color"
                or rest[3] != "host"
                or rest[5] != "boundary"
                or rest[2] not in (WHITE, BLACK)
                or rest[4] not in (WHITE, BLACK)
            ):
                fail(lineno, "tile line is 'tile <id> color (w|b) host (w|b) boundary <+-eid ...>'")
                continue
            boundary = tuple(parse_signed(t) for t in rest[6:])
            tile_records.append((rest[0], rest[2], rest[4], boundary))
            lines_map[("tile", rest[0])] = lineno
        elif head == "baseflag":
            if len(rest) != 3:
                fail(lineno, "baseflag line is 'baseflag <vid> <+-eid> <tid>'")
            elif base_flag is not None:
                fail(lineno, "duplicate baseflag line")
            else:
                base_flag = BaseFlag(rest[0], parse_signed(rest[1]), rest[2])
        else:
            fail(lineno, f"unknown directive {head!r}")

    if name is None:
        diags.append(Diagnostic("SyntaxError", "missing rule line"))
    if k is None:
        diags.append(Diagnostic("SyntaxError", "missing k line"))
    if base_flag is None:
        diags.append(Diagnostic("SyntaxError", "missing baseflag line"))
    for kind, ident in list(lines_map):
        if "/" in ident:
            diags.append(
                Diagnostic(
                    "SyntaxError",
                    f"{kind} id {ident!r} contains '/', reserved for derived cells",
                    lines_map[(kind, ident)],
                )
            )
    if diags:
        raise InvalidRule(diags)
    assert name is not None and k is not None and base_flag is not None
    return make_rule(name, k, vertex_records, edge_records, tile_records, base_flag, _lines=lines_map)
