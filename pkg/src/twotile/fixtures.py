"""Built-in rules: a Lattès-style checkerboard, pillow grids, barycentric
subdivision, the quadrant rule of z^2 - 1, and a ray skeleton with no
invariant curve.

Each constructor builds records explicitly and runs them through make_rule,
so fixtures exercise the full validator on every call. Conventions shared
by all fixtures: 0-vertex copies are located corner(i), the subdivision of
0-edge l runs from corner l to corner l+1, and the base flag sits at a
vertex labeled 0 on an edge labeled 0 inside a white tile.
"""

from __future__ import annotations

from .cells import DirectedEdgeRef, build_complex
from .diagnostics import BadGridParams, UnknownFixture
from .rules import (
    BaseFlag,
    BoundaryEdge,
    Corner,
    LabeledSkeleton,
    SubdivisionRule,
    TileInterior,
    derive_labeling,
    make_rule,
)


def _fwd(eid: str) -> DirectedEdgeRef:
    return DirectedEdgeRef(eid, True)


def _bwd(eid: str) -> DirectedEdgeRef:
    return DirectedEdgeRef(eid, False)


def lattes2x2() -> SubdivisionRule:
    """Square pillow, each face cut into a 2-by-2 checkerboard; degree 4.

    Corners all map to corner 0, edge midpoints alternately to corners 1
    and 3, the two face centers to corner 2.
    """
    k = 4
    vertices = []
    for i in range(4):
        vertices.append((f"p{i}", 0, Corner(i)))
    for l, label in zip(range(4), (1, 3, 1, 3)):
        vertices.append((f"m{l}", label, BoundaryEdge(l)))
    vertices.append(("cw", 2, TileInterior("w")))
    vertices.append(("cb", 2, TileInterior("b")))

    edges = []
    for l, label in zip(range(4), (0, 3, 0, 3)):
        edges.append((f"s{l}a", f"p{l}", f"m{l}", label, BoundaryEdge(l)))
        edges.append((f"s{l}b", f"m{l}", f"p{(l + 1) % 4}", label, BoundaryEdge(l)))
    for l, label in zip(range(4), (1, 2, 1, 2)):
        edges.append((f"wr{l}", f"m{l}", "cw", label, TileInterior("w")))
        edges.append((f"br{l}", f"m{l}", "cb", label, TileInterior("b")))

    tiles = []
    for l in range(4):
        color = "w" if l % 2 == 0 else "b"
        walk = (_fwd(f"s{l}a"), _fwd(f"wr{l}"), _bwd(f"wr{(l - 1) % 4}"), _fwd(f"s{(l - 1) % 4}b"))
        tiles.append((f"wt{l}", color, "w", walk))
    for l in range(4):
        color = "b" if l % 2 == 0 else "w"
        walk = (
            _bwd(f"s{(l - 1) % 4}b"),
            _fwd(f"br{(l - 1) % 4}"),
            _bwd(f"br{l}"),
            _bwd(f"s{l}a"),
        )
        tiles.append((f"bt{l}", color, "b", walk))
    return make_rule("lattes2x2", k, vertices, edges, tiles, BaseFlag("p0", _fwd("s0a"), "wt0"))


def z2m1() -> SubdivisionRule:
    """The quadrant rule of z -> z^2 - 1 on the triangle pillow; degree 2.

    Marked points -1, 0, infinity sit at corners 0, 1, 2. The four closed
    quadrants of the plane are the 1-tiles; the vertex 1 subdivides the
    0-edge from corner 1 to corner 2.
    """
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
        ("q1", "w", "w", (_fwd("re1"), _fwd("re2"), _fwd("imu"))),
        ("q2", "b", "w", (_fwd("re3"), _fwd("re0"), _bwd("imu"))),
        ("q3", "w", "b", (_bwd("re0"), _bwd("re3"), _bwd("iml"))),
        ("q4", "b", "b", (_bwd("re2"), _bwd("re1"), _fwd("iml"))),
    ]
    return make_rule("z2m1", 3, vertices, edges, tiles, BaseFlag("zero", _fwd("re1"), "q1"))


def barycentric() -> SubdivisionRule:
    """Barycentric subdivision of the triangle pillow; degree 6.

    Corners map to corner 1, edge midpoints to corner 0, the two face
    centroids to corner 2; each face splits into six alternating triangles.
    """
    vertices = []
    for i in range(3):
        vertices.append((f"c{i}", 1, Corner(i)))
    for l in range(3):
        vertices.append((f"m{l}", 0, BoundaryEdge(l)))
    vertices.append(("gw", 2, TileInterior("w")))
    vertices.append(("gb", 2, TileInterior("b")))

    edges = []
    for l in range(3):
        edges.append((f"s{l}a", f"c{l}", f"m{l}", 0, BoundaryEdge(l)))
        edges.append((f"s{l}b", f"m{l}", f"c{(l + 1) % 3}", 0, BoundaryEdge(l)))
    for i in range(3):
        edges.append((f"wc{i}", f"c{i}", "gw", 1, TileInterior("w")))
        edges.append((f"bc{i}", f"c{i}", "gb", 1, TileInterior("b")))
    for l in range(3):
        edges.append((f"wm{l}", f"m{l}", "gw", 2, TileInterior("w")))
        edges.append((f"bm{l}", f"m{l}", "gb", 2, TileInterior("b")))

    tiles = []
    for l in range(3):
        tiles.append(
            (f"wt{2 * l}", "b", "w", (_fwd(f"s{l}a"), _fwd(f"wm{l}"), _bwd(f"wc{l}")))
        )
        tiles.append(
            (f"wt{2 * l + 1}", "w", "w", (_fwd(f"s{l}b"), _fwd(f"wc{(l + 1) % 3}"), _bwd(f"wm{l}")))
        )
        tiles.append(
            (f"bt{2 * l}", "w", "b", (_bwd(f"s{l}a"), _fwd(f"bc{l}"), _bwd(f"bm{l}")))
        )
        tiles.append(
            (f"bt{2 * l + 1}", "b", "b", (_bwd(f"s{l}b"), _fwd(f"bm{l}"), _bwd(f"bc{(l + 1) % 3}")))
        )
    return make_rule("barycentric", 3, vertices, edges, tiles, BaseFlag("m0", _fwd("s0b"), "wt1"))


def grid(p: int, q: int) -> SubdivisionRule:
    """Square pillow with each face cut into a p-by-q grid; degree p*q.

    Labels are not hand-assigned: they are derived from the base flag at
    corner 0. Checkerboard colors are anchored so the white-face tile at
    corner 0 is white; the black face then starts black, which keeps the
    two colors balanced for odd p*q as well.
    """
    if not (isinstance(p, int) and isinstance(q, int)) or p < 2 or q < 2:
        raise BadGridParams(f"grid needs integers p, q >= 2, got ({p!r}, {q!r})")

    def vertex_at(face: str, i: int, j: int) -> str:
        if (i, j) == (0, 0):
            return "p0"
        if (i, j) == (p, 0):
            return "p1"
        if (i, j) == (p, q):
            return "p2"
        if (i, j) == (0, q):
            return "p3"
        if j == 0:
            return f"s0v{i}"
        if i == p:
            return f"s1v{j}"
        if j == q:
            return f"s2v{p - i}"
        if i == 0:
            return f"s3v{q - j}"
        return f"{face}v{i}_{j}"

    def h_edge(face: str, i: int, j: int) -> DirectedEdgeRef:
        # traversal (i, j) -> (i+1, j)
        if j == 0:
            return _fwd(f"s0e{i}")
        if j == q:
            return _bwd(f"s2e{p - 1 - i}")
        return _fwd(f"{face}h{i}_{j}")

    def v_edge(face: str, i: int, j: int) -> DirectedEdgeRef:
        # traversal (i, j) -> (i, j+1)
        if i == p:
            return _fwd(f"s1e{j}")
        if i == 0:
            return _bwd(f"s3e{q - 1 - j}")
        return _fwd(f"{face}ve{i}_{j}")

    vertex_records = []
    for i in range(4):
        vertex_records.append((f"p{i}", 0, Corner(i)))
    for i in range(1, p):
        vertex_records.append((f"s0v{i}", 0, BoundaryEdge(0)))
        vertex_records.append((f"s2v{i}", 0, BoundaryEdge(2)))
    for j in range(1, q):
        vertex_records.append((f"s1v{j}", 0, BoundaryEdge(1)))
        vertex_records.append((f"s3v{j}", 0, BoundaryEdge(3)))
    for face in ("w", "b"):
        for i in range(1, p):
            for j in range(1, q):
                vertex_records.append((f"{face}v{i}_{j}", 0, TileInterior(face)))

    edge_records = []
    for i in range(p):
        edge_records.append((f"s0e{i}", vertex_at("w", i, 0), vertex_at("w", i + 1, 0), 0, BoundaryEdge(0)))
        edge_records.append((f"s2e{i}", vertex_at("w", p - i, q), vertex_at("w", p - i - 1, q), 0, BoundaryEdge(2)))
    for j in range(q):
        edge_records.append((f"s1e{j}", vertex_at("w", p, j), vertex_at("w", p, j + 1), 0, BoundaryEdge(1)))
        edge_records.append((f"s3e{j}", vertex_at("w", 0, q - j), vertex_at("w", 0, q - j - 1), 0, BoundaryEdge(3)))
    for face in ("w", "b"):
        loc = TileInterior(face)
        for j in range(1, q):
            for i in range(p):
                edge_records.append(
                    (f"{face}h{i}_{j}", vertex_at(face, i, j), vertex_at(face, i + 1, j), 0, loc)
                )
        for i in range(1, p):
            for j in range(q):
                edge_records.append(
                    (f"{face}ve{i}_{j}", vertex_at(face, i, j), vertex_at(face, i, j + 1), 0, loc)
                )

    tile_records = []
    for i in range(p):
        for j in range(q):
            color = "w" if (i + j) % 2 == 0 else "b"
            walk = (
                h_edge("w", i, j),
                v_edge("w", i + 1, j),
                h_edge("w", i, j + 1).reverse(),
                v_edge("w", i, j).reverse(),
            )
            tile_records.append((f"wt{i}_{j}", color, "w", walk))
    for i in range(p):
        for j in range(q):
            color = "b" if (i + j) % 2 == 0 else "w"
            walk = (
                v_edge("b", i, j),
                h_edge("b", i, j + 1),
                v_edge("b", i + 1, j).reverse(),
                h_edge("b", i, j).reverse(),
            )
            tile_records.append((f"bt{i}_{j}", color, "b", walk))

    # Labels are derived, not declared: rebuild the bare complex, run the
    # derivation from the base flag, then feed everything to make_rule.
    cx = build_complex(
        [r[0] for r in vertex_records],
        [(r[0], r[1], r[2]) for r in edge_records],
        [(r[0], r[3]) for r in tile_records],
    )
    flag = BaseFlag("p0", _fwd("s0e0"), "wt0_0")
    hosts = {r[0]: r[2] for r in tile_records}
    vertex_label, edge_label, tile_color = derive_labeling(cx, hosts, flag)
    assert all(tile_color[r[0]] == r[1] for r in tile_records)

    vertex_records = [(vid, vertex_label[vid], loc) for vid, _, loc in vertex_records]
    edge_records = [
        (eid, tail, head, edge_label[eid], loc) for eid, tail, head, _, loc in edge_records
    ]
    return make_rule(f"grid_{p}_{q}", 4, vertex_records, edge_records, tile_records, flag)


def z4rays_skeleton() -> LabeledSkeleton:
    """Eight sectors around 0 bounded by rays; not a subdivision rule.

    The marked points are the roots -i, 1, i (corners 0, 1, 2). The rays
    through the four roots are split at the root; the four diagonal rays
    are single edges from infinity to 0. The skeleton has labels but no
    hosts: the sector complex does not refine the pillow on the marked
    points, which is exactly why no candidate curve survives the search.
    """
    roots = ("r1", "ri", "rm1", "rmi")
    vertex_ids = ["zero", "inf", *roots]
    edge_records = []
    for j, r in enumerate(roots):
        edge_records.append((f"a{j}", "zero", r))
        edge_records.append((f"b{j}", r, "inf"))
    for j in range(4):
        edge_records.append((f"d{j}", "inf", "zero"))
    tile_records = []
    for j in range(4):
        tile_records.append((f"sec{2 * j}", (_fwd(f"a{j}"), _fwd(f"b{j}"), _fwd(f"d{j}"))))
        tile_records.append(
            (
                f"sec{2 * j + 1}",
                (_bwd(f"d{j}"), _bwd(f"b{(j + 1) % 4}"), _bwd(f"a{(j + 1) % 4}")),
            )
        )
    cx = build_complex(vertex_ids, edge_records, tile_records)
    vertex_label, edge_label, tile_color = derive_labeling(
        cx, {}, BaseFlag("zero", _fwd("a0"), "sec0")
    )
    assert vertex_label == {"zero": 0, "inf": 2, "r1": 1, "ri": 1, "rm1": 1, "rmi": 1}
    return LabeledSkeleton(
        name="z4rays_skeleton",
        k=3,
        complex=cx,
        marked=("rmi", "r1", "ri"),
        vertex_label=vertex_label,
        edge_label=edge_label,
        tile_color=tile_color,
    )


def fixture(name: str) -> SubdivisionRule | LabeledSkeleton:
    """Catalog lookup; grid rules as 'grid:p:q'."""
    if name == "lattes2x2":
        return lattes2x2()
    if name == "barycentric":
        return barycentric()
    if name == "z2m1":
        return z2m1()
    if name in ("z4rays_skeleton", "z4rays"):
        return z4rays_skeleton()
    if name.startswith("grid:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise BadGridParams(f"grid fixture is 'grid:p:q', got {name!r}")
        try:
            p, q = int(parts[1]), int(parts[2])
        except ValueError:
            raise BadGridParams(f"grid fixture is 'grid:p:q' with integers, got {name!r}") from None
        return grid(p, q)
    raise UnknownFixture(
        f"unknown fixture {name!r}; available: lattes2x2, barycentric, z2m1, z4rays_skeleton, grid:p:q"
    )


RULE_FIXTURES = ("lattes2x2", "barycentric", "z2m1", "grid:2:3", "grid:5:5")
