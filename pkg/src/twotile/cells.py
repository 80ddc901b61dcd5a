"""Oriented cell decompositions of the 2-sphere as pure combinatorics.

A complex is given by vertex ids, edges (id, tail, head) and tiles whose
boundary is a cyclic list of directed edge references, positively oriented
so that the tile lies on the left of every directed edge. Everything else
(which tile sits on which side of an edge, vertex cycles, flags) is derived
from that single source of truth.

Multi-edges and tiles meeting along several edges are allowed; the pillow
made of two k-gons glued along their boundary is the motivating example.
Only spheres are accepted: Euler characteristic 2, connected incidence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import Diagnostic, InvalidComplex, UnknownCell, UnknownVertex


@dataclass(frozen=True)
class DirectedEdgeRef:
    """One traversal of an edge: forward means tail -> head."""

    edge_id: str
    forward: bool

    def reverse(self) -> "DirectedEdgeRef":
        return DirectedEdgeRef(self.edge_id, not self.forward)

    def signed(self) -> str:
        return ("+" if self.forward else "-") + self.edge_id


def parse_signed(token: str) -> DirectedEdgeRef:
    """Read '+eid' / '-eid' (a bare id counts as forward)."""
    if token.startswith("+"):
        return DirectedEdgeRef(token[1:], True)
    if token.startswith("-"):
        return DirectedEdgeRef(token[1:], False)
    return DirectedEdgeRef(token, True)


@dataclass(frozen=True)
class Flag:
    """A vertex-edge-tile incidence triple with its orientation sign."""

    vertex: str
    edge: str
    tile: str
    positive: bool


@dataclass(frozen=True)
class VertexCycle:
    """The alternating cycle e_1, X_1, ..., e_d, X_d around a vertex.

    Indexing follows the convention that e_j lies on the boundary of both
    X_j and X_{j+1} and the flag (v, e_j, X_{j+1}) is positively oriented.
    The starting edge is the incident edge with the smallest id.
    """

    vertex: str
    edges: tuple[str, ...]
    tiles: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    def alternating(self) -> tuple[str, ...]:
        out: list[str] = []
        for e, t in zip(self.edges, self.tiles):
            out.append(e)
            out.append(t)
        return tuple(out)


def _canonical_rotation(boundary: tuple[DirectedEdgeRef, ...]) -> tuple[DirectedEdgeRef, ...]:
    # Deterministic representative of the cyclic list: start at the smallest
    # (edge_id, direction) pair, forward ordered before backward.
    key = lambda r: (r.edge_id, 0 if r.forward else 1)
    start = min(range(len(boundary)), key=lambda i: key(boundary[i]))
    return boundary[start:] + boundary[:start]


class OrientedComplex:
    """Validated oriented cell decomposition. Immutable after build.

    Do not call directly; use build_complex, which validates and raises
    InvalidComplex with the full diagnostic list on bad input.
    """

    def __init__(
        self,
        vertex_ids: tuple[str, ...],
        edges: dict[str, tuple[str, str]],
        tiles: dict[str, tuple[DirectedEdgeRef, ...]],
    ):
        self.vertex_ids = vertex_ids
        self.edges = edges
        self.tiles = tiles
        # side_tile[(edge, forward)] = the tile whose positive walk traverses
        # the edge in that direction; total on valid complexes.
        self.side_tile: dict[tuple[str, bool], str] = {}
        for tid, walk in tiles.items():
            for ref in walk:
                self.side_tile[(ref.edge_id, ref.forward)] = tid
        self._vertex_set = set(vertex_ids)
        self._walk_vertices: dict[str, tuple[str, ...]] = {
            tid: tuple(self.dart_tail(ref) for ref in walk) for tid, walk in tiles.items()
        }
        incident: dict[str, list[str]] = {v: [] for v in vertex_ids}
        for eid, (tail, head) in edges.items():
            incident[tail].append(eid)
            if head != tail:
                incident[head].append(eid)
        self._incident_edges = {v: tuple(es) for v, es in incident.items()}

    # -- basic queries ----------------------------------------------------

    def edge_tail(self, eid: str) -> str:
        return self.edges[eid][0]

    def edge_head(self, eid: str) -> str:
        return self.edges[eid][1]

    def dart_tail(self, ref: DirectedEdgeRef) -> str:
        t, h = self.edges[ref.edge_id]
        return t if ref.forward else h

    def dart_head(self, ref: DirectedEdgeRef) -> str:
        t, h = self.edges[ref.edge_id]
        return h if ref.forward else t

    def tile_vertices(self, tid: str) -> tuple[str, ...]:
        """Vertices in positive walk order (tails of the directed edges)."""
        return self._walk_vertices[tid]

    def incident_edges(self, vid: str) -> tuple[str, ...]:
        if vid not in self._vertex_set:
            raise UnknownVertex(vid)
        return self._incident_edges[vid]

    def edge_tiles(self, eid: str) -> tuple[str, str]:
        """The tiles left of the forward and backward traversals."""
        if eid not in self.edges:
            raise UnknownCell(f"no edge {eid!r}")
        return self.side_tile[(eid, True)], self.side_tile[(eid, False)]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_ids)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_tiles(self) -> int:
        return len(self.tiles)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrientedComplex):
            return NotImplemented
        return (
            set(self.vertex_ids) == set(other.vertex_ids)
            and self.edges == other.edges
            and self.tiles == other.tiles
        )

    def __repr__(self) -> str:
        return f"OrientedComplex(V={self.num_vertices}, E={self.num_edges}, F={self.num_tiles})"

    # -- derived structure ------------------------------------------------

    def _tile_visit(self, tid: str, vid: str) -> tuple[DirectedEdgeRef, DirectedEdgeRef]:
        """(incoming, outgoing) directed edges of the walk of tid at vid."""
        walk = self.tiles[tid]
        n = len(walk)
        for i, ref in enumerate(walk):
            if self.dart_tail(ref) == vid:
                return walk[i - 1], ref
        raise UnknownCell(f"tile {tid} does not visit vertex {vid}")

    def vertex_cycle(self, vid: str) -> VertexCycle:
        """Walk the flags around vid; see VertexCycle for the convention."""
        if vid not in self._vertex_set:
            raise UnknownVertex(vid)
        darts = []
        for eid in self._incident_edges[vid]:
            tail, head = self.edges[eid]
            if tail == vid:
                darts.append(DirectedEdgeRef(eid, True))
            if head == vid:
                darts.append(DirectedEdgeRef(eid, False))
        start = min(darts, key=lambda r: (r.edge_id, 0 if r.forward else 1))
        order: list[DirectedEdgeRef] = []
        tiles: list[str] = []
        dart = start
        while True:
            tile = self.side_tile[(dart.edge_id, dart.forward)]
            order.append(dart)
            tiles.append(tile)
            incoming, _ = self._tile_visit(tile, vid)
            dart = incoming.reverse()
            if dart == start:
                break
        edges = tuple(r.edge_id for r in order)
        # tiles[j] above is the positive-flag partner of edges[j]; shift so
        # that the emitted X_j precedes e_j, i.e. X_j = partner(e_{j-1}).
        shifted = tuple([tiles[-1]] + tiles[:-1])
        return VertexCycle(vertex=vid, edges=edges, tiles=shifted)

    def flags(self) -> list[Flag]:
        """All (vertex, edge, tile) triples, each once, with its sign."""
        out: list[Flag] = []
        for tid, walk in self.tiles.items():
            for ref in walk:
                out.append(Flag(self.dart_tail(ref), ref.edge_id, tid, True))
                out.append(Flag(self.dart_head(ref), ref.edge_id, tid, False))
        return out

    def flag_is_positive(self, vid: str, ref: DirectedEdgeRef, tid: str) -> bool:
        """Is (v, e, X) positive with e directed away from v into tile X?

        ref must be the traversal starting at vid; positive means X lies on
        the left, i.e. X's walk contains exactly this directed edge.
        """
        return self.dart_tail(ref) == vid and self.side_tile.get((ref.edge_id, ref.forward)) == tid


def validate_complex(
    vertex_ids,
    edge_records,
    tile_records,
) -> list[Diagnostic]:
    """Structural checks; returns all findings (empty means valid)."""
    diags: list[Diagnostic] = []
    # ids are unique across kinds, not just within one: parent links and
    # exports refer to cells by bare id.
    taken: set[str] = set()
    seen_v: set[str] = set()
    for v in vertex_ids:
        if v in taken:
            diags.append(Diagnostic("DuplicateId", f"id {v!r} declared twice"))
        taken.add(v)
        seen_v.add(v)
    edges: dict[str, tuple[str, str]] = {}
    for eid, tail, head in edge_records:
        if eid in taken:
            diags.append(Diagnostic("DuplicateId", f"id {eid!r} declared twice"))
            continue
        taken.add(eid)
        edges[eid] = (tail, head)
        for endpoint in (tail, head):
            if endpoint not in seen_v:
                diags.append(
                    Diagnostic("DanglingReference", f"edge {eid!r} endpoint {endpoint!r} is not a vertex")
                )
    tiles: dict[str, tuple[DirectedEdgeRef, ...]] = {}
    for tid, boundary in tile_records:
        if tid in taken:
            diags.append(Diagnostic("DuplicateId", f"id {tid!r} declared twice"))
            continue
        taken.add(tid)
        refs = tuple(boundary)
        tiles[tid] = refs
        for ref in refs:
            if ref.edge_id not in edges:
                diags.append(
                    Diagnostic("DanglingReference", f"tile {tid!r} references unknown edge {ref.edge_id!r}")
                )
    if diags:
        return diags

    usage: dict[tuple[str, bool], list[str]] = {}
    for tid, refs in tiles.items():
        for ref in refs:
            usage.setdefault((ref.edge_id, ref.forward), []).append(tid)
    for (eid, forward), users in sorted(usage.items()):
        if len(users) > 1:
            word = "forward" if forward else "backward"
            diags.append(
                Diagnostic(
                    "EdgeUsedTwiceSameDirection",
                    f"edge {eid!r} traversed {word} by tiles {', '.join(sorted(users))}",
                )
            )
    for eid in edges:
        count = len(usage.get((eid, True), [])) + len(usage.get((eid, False), []))
        if count != 2:
            diags.append(
                Diagnostic("EdgeUsageCountNot2", f"edge {eid!r} used {count} times across tile boundaries")
            )

    def dart_tail(ref: DirectedEdgeRef) -> str:
        t, h = edges[ref.edge_id]
        return t if ref.forward else h

    def dart_head(ref: DirectedEdgeRef) -> str:
        t, h = edges[ref.edge_id]
        return h if ref.forward else t

    for tid, refs in tiles.items():
        if not refs:
            diags.append(Diagnostic("NonSimpleBoundaryWalk", f"tile {tid!r} has an empty boundary"))
            continue
        chained = all(
            dart_head(refs[i]) == dart_tail(refs[(i + 1) % len(refs)]) for i in range(len(refs))
        )
        if not chained:
            diags.append(Diagnostic("NonSimpleBoundaryWalk", f"tile {tid!r} boundary does not chain head to tail"))
            continue
        visited = [dart_tail(ref) for ref in refs]
        if len(set(visited)) != len(visited):
            diags.append(Diagnostic("NonSimpleBoundaryWalk", f"tile {tid!r} boundary revisits a vertex"))

    euler = len(seen_v) - len(edges) + len(tiles)
    if euler != 2:
        diags.append(
            Diagnostic("EulerMismatch", f"V - E + F = {euler}, expected 2 for a sphere complex")
        )

    # Connectivity of the whole incidence structure (vertices via edges,
    # tiles via their boundary edges).
    if seen_v:
        reached: set[tuple[str, str]] = set()
        adj: dict[tuple[str, str], list[tuple[str, str]]] = {}

        def link(a, b):
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)

        for eid, (tail, head) in edges.items():
            link(("e", eid), ("v", tail))
            link(("e", eid), ("v", head))
        for tid, refs in tiles.items():
            for ref in refs:
                link(("t", tid), ("e", ref.edge_id))
        all_cells = (
            [("v", v) for v in seen_v] + [("e", e) for e in edges] + [("t", t) for t in tiles]
        )
        stack = [all_cells[0]]
        reached.add(all_cells[0])
        while stack:
            cur = stack.pop()
            for nxt in adj.get(cur, []):
                if nxt not in reached:
                    reached.add(nxt)
                    stack.append(nxt)
        if len(reached) != len(all_cells):
            diags.append(
                Diagnostic(
                    "Disconnected",
                    f"incidence structure has {len(all_cells) - len(reached)} unreachable cells",
                )
            )
    return diags


def build_complex(vertex_ids, edge_records, tile_records) -> OrientedComplex:
    """Validate and assemble; boundaries are stored canonically rotated."""
    vertex_ids = tuple(vertex_ids)
    edge_records = [tuple(r) for r in edge_records]
    tile_records = [(tid, tuple(b)) for tid, b in tile_records]
    diags = validate_complex(vertex_ids, edge_records, tile_records)
    if diags:
        raise InvalidComplex(diags)
    edges = {eid: (tail, head) for eid, tail, head in edge_records}
    tiles = {tid: _canonical_rotation(b) for tid, b in tile_records}
    return OrientedComplex(vertex_ids, edges, tiles)
