"""JSON and DOT serialization of generated levels.

The JSON layout mirrors the in-memory complex closely enough to load back
and revalidate: cells keep their deterministic ids, labels and locations,
and each tile carries its address word. Exact rationals elsewhere in the
package are serialized as "p/q" strings; nothing in this module emits
floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .cells import DirectedEdgeRef, OrientedComplex, build_complex
from .diagnostics import Diagnostic, InvalidComplex
from .rules import BoundaryEdge, Corner, Location, TileInterior
from .subdivision import Address, LevelComplex, SftMatrix, address_of


def loc_to_json(loc: Location) -> dict:
    if isinstance(loc, TileInterior):
        return {"t": "tile", "c": loc.color}
    if isinstance(loc, BoundaryEdge):
        return {"t": "edge", "l": loc.label}
    if isinstance(loc, Corner):
        return {"t": "corner", "i": loc.index}
    raise TypeError(f"not a location: {loc!r}")


def loc_from_json(obj: dict) -> Location:
    def bad() -> InvalidComplex:
        return InvalidComplex(
            [Diagnostic("BadLocation", f"bad location encoding {obj!r}")]
        )

    kind = obj.get("t")
    if kind == "tile":
        if obj.get("c") not in ("w", "b"):
            raise bad()
        return TileInterior(obj["c"])
    if kind == "edge":
        if not isinstance(obj.get("l"), int):
            raise bad()
        return BoundaryEdge(obj["l"])
    if kind == "corner":
        if not isinstance(obj.get("i"), int):
            raise bad()
        return Corner(obj["i"])
    raise bad()


def rational_str(value: Fraction | int) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def complex_export(lc: LevelComplex) -> dict:
    """Plain-dict form of one level, canonically ordered."""
    vertices = [
        {
            "id": v,
            "label": lc.vertex_label[v],
            "loc": loc_to_json(lc.vertex_loc0[v]),
        }
        for v in sorted(lc.complex.vertex_ids)
    ]
    edges = [
        {
            "id": e,
            "tail": tail,
            "head": head,
            "label": lc.edge_label[e],
            "loc": loc_to_json(lc.edge_loc0[e]),
        }
        for e, (tail, head) in sorted(lc.complex.edges.items())
    ]
    tiles = []
    for t in sorted(lc.complex.tiles):
        addr = address_of(lc, t)
        tiles.append(
            {
                "id": t,
                "color": lc.tile_color[t],
                "loc0": loc_to_json(lc.tile_loc0[t]),
                "boundary": [r.signed() for r in lc.complex.tiles[t]],
                "address": [addr.c0, *addr.letters],
            }
        )
    return {
        "level": lc.level,
        "k": lc.rule.k,
        "deg": lc.rule.deg,
        "vertices": vertices,
        "edges": edges,
        "tiles": tiles,
    }


def dump_complex(lc: LevelComplex) -> str:
    return json.dumps(complex_export(lc), indent=2) + "\n"


@dataclass
class LoadedComplex:
    """A level read back from JSON: the cells and their decorations.

    The parent chain is not serialized, so this is one floor of the tower
    without stairs; addresses still pin every tile to its word.
    """

    level: int
    k: int
    deg: int
    complex: OrientedComplex
    vertex_label: dict[str, int]
    edge_label: dict[str, int]
    tile_color: dict[str, str]
    vertex_loc0: dict[str, Location]
    edge_loc0: dict[str, Location]
    tile_loc0: dict[str, Location]
    addresses: dict[str, Address]


def load_complex(text: str) -> LoadedComplex:
    obj = json.loads(text)
    edge_records = [(e["id"], e["tail"], e["head"]) for e in obj["edges"]]
    tile_records = []
    for t in obj["tiles"]:
        walk = tuple(
            DirectedEdgeRef(tok[1:], tok[0] == "+") for tok in t["boundary"]
        )
        tile_records.append((t["id"], walk))
    # build_complex validates structure and raises InvalidComplex itself
    cx = build_complex([v["id"] for v in obj["vertices"]], edge_records, tile_records)
    return LoadedComplex(
        level=obj["level"],
        k=obj["k"],
        deg=obj["deg"],
        complex=cx,
        vertex_label={v["id"]: v["label"] for v in obj["vertices"]},
        edge_label={e["id"]: e["label"] for e in obj["edges"]},
        tile_color={t["id"]: t["color"] for t in obj["tiles"]},
        vertex_loc0={v["id"]: loc_from_json(v["loc"]) for v in obj["vertices"]},
        edge_loc0={e["id"]: loc_from_json(e["loc"]) for e in obj["edges"]},
        tile_loc0={t["id"]: loc_from_json(t["loc0"]) for t in obj["tiles"]},
        addresses={
            t["id"]: Address(t["address"][0], tuple(t["address"][1:]))
            for t in obj["tiles"]
        },
    )


def sft_to_json(m: SftMatrix) -> dict:
    return {
        "alphabet": list(m.alphabet),
        "matrix": [[1 if cell else 0 for cell in row] for row in m.matrix],
        "strongly_connected": m.strongly_connected,
        "periodic_letters": {a: m.periodic_letters[a] for a in m.alphabet},
    }


def sft_to_dot(m: SftMatrix) -> str:
    lines = ["digraph sft {", "  rankdir=LR;", "  node [shape=box];"]
    for a in m.alphabet:
        lines.append(f'  "{a}";')
    for i, a in enumerate(m.alphabet):
        for j, b in enumerate(m.alphabet):
            if m.matrix[i][j]:
                lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
