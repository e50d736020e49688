"""Instance files: canonical JSON, DIMACS and DOT."""
from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .grid import GridConstruction, GridParams, build_grid
from .poset import Graph, LabeledUnionGraph, StrictOrder, transitive_closure, union_graphs
from .ranked import RankedConstruction, RankedParams, build_ranked

FORMAT_VERSION = 1
KINDS = ("grid", "ranked", "generic")


class MalformedInstance(ValueError):
    pass


@dataclass
class InstanceFile:
    kind: str
    n: int
    r: int
    edges: list[tuple[int, int, tuple[int, ...]]]
    construction: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    orders: list[list[tuple[int, int]]] | None = None
    format_version: int = FORMAT_VERSION

    def to_dict(self, deterministic: bool = False) -> dict:
        meta = dict(self.meta)
        if deterministic:
            meta.pop("created", None)
        out: dict[str, Any] = {
            "format_version": self.format_version,
            "kind": self.kind,
            "n": self.n,
            "r": self.r,
            "edges": [[u, v, list(ls)] for u, v, ls in sorted(self.edges)],
            "construction": self.construction,
            "meta": meta,
        }
        if self.orders is not None:
            out["orders"] = [[list(p) for p in sorted(o)] for o in self.orders]
        return out

    def dumps(self, deterministic: bool = False) -> str:
        return json.dumps(self.to_dict(deterministic), sort_keys=True, separators=(",", ":")) + "\n"

    def canonical(self) -> str:
        """Serialization with the creation timestamp stripped."""
        return self.dumps(deterministic=True)

    def graph(self) -> LabeledUnionGraph:
        bits = np.zeros((self.n, self.n), dtype=np.uint32)
        for u, v, ls in self.edges:
            for s in ls:
                bits[u, v] |= np.uint32(1 << (s - 1))
        return LabeledUnionGraph(bits, self.r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InstanceFile):
            return NotImplemented
        return self.canonical() == other.canonical()


def _meta() -> dict:
    return {
        "tool": "compunion",
        "tool_version": __version__,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def edges_of(g: LabeledUnionGraph) -> list[tuple[int, int, tuple[int, ...]]]:
    return [(u, v, tuple(sorted(ls))) for (u, v), ls in sorted(g.edges_labeled.items())]


def from_grid(gc: GridConstruction, requested_n: int | None = None) -> InstanceFile:
    p = gc.params
    construction = {"a": p.a, "b": p.b, "seed": p.seed, "n": p.n, "requested_n": requested_n}
    return InstanceFile("grid", gc.n, 2, edges_of(gc.graph), construction, _meta())


def ranked_edges(rc: RankedConstruction) -> list[tuple[int, int, tuple[int, ...]]]:
    """Edge list assembled cell pair by cell pair, without n x n matrices."""
    a = rc.a
    rels = [rc.cell_relation(s) for s in range(1, rc.r + 1)]
    dist = rc.cell_distance
    out = []
    for x in range(rc.cells):
        for y in range(x + 1, rc.cells):
            labels = tuple(s for s, R in enumerate(rels, 1) if R[x, y] or R[y, x])
            if not labels:
                continue
            ball = rc.powers[int(dist[x, y])].adj
            for p in range(a):
                u = x * a + p
                for q in sorted(ball[p]):
                    out.append((u, y * a + q, labels))
    out.sort()
    return out


def from_ranked(rc: RankedConstruction, requested_n: int | None = None,
                explicit: bool = True) -> InstanceFile:
    p = rc.params
    construction = {
        "r": p.r, "b": p.b, "a": p.a, "d": p.d, "seed": p.seed, "variant": p.variant,
        "epsilon": p.epsilon, "n": p.n, "requested_n": requested_n,
    }
    edges = edges_of(rc.graph) if explicit else ranked_edges(rc)
    return InstanceFile("ranked", rc.n, p.r, edges, construction, _meta())


def from_orders(orders: list[StrictOrder], n: int | None = None) -> InstanceFile:
    g = union_graphs(orders, n)
    return InstanceFile(
        "generic", g.n, len(orders), edges_of(g), {}, _meta(), [o.pairs() for o in orders]
    )


def from_graph(g: Graph) -> InstanceFile:
    return InstanceFile("generic", g.n, 1, [(u, v, (1,)) for u, v in g.edges()], {}, _meta())


def _need(d: dict, key: str, typ):
    if key not in d:
        raise MalformedInstance(f"missing field {key!r}")
    val = d[key]
    if typ is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise MalformedInstance(f"field {key!r} must be an integer")
    if typ is not int and not isinstance(val, typ):
        raise MalformedInstance(f"field {key!r} has wrong type")
    return val


def loads(text: str) -> InstanceFile:
    """Parse an instance; schema problems raise MalformedInstance.

    Semantic problems (unsorted edges, bad labels) load fine and are left
    for verification to report.
    """
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInstance(f"invalid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise MalformedInstance("top level must be an object")
    version = _need(d, "format_version", int)
    if version != FORMAT_VERSION:
        raise MalformedInstance(f"unsupported format_version {version}")
    kind = _need(d, "kind", str)
    if kind not in KINDS:
        raise MalformedInstance(f"unknown kind {kind!r}")
    n = _need(d, "n", int)
    r = _need(d, "r", int)
    if n < 0 or r < 0:
        raise MalformedInstance("n and r must be non-negative")
    edges = []
    for e in _need(d, "edges", list):
        if (
            not isinstance(e, list) or len(e) != 3 or not isinstance(e[2], list)
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in [e[0], e[1], *e[2]])
        ):
            raise MalformedInstance(f"bad edge record {e!r}")
        if not (0 <= e[0] < n and 0 <= e[1] < n) or e[0] == e[1]:
            raise MalformedInstance(f"edge {e[:2]} out of range")
        edges.append((e[0], e[1], tuple(e[2])))
    construction = d.get("construction", {})
    meta = d.get("meta", {})
    if not isinstance(construction, dict) or not isinstance(meta, dict):
        raise MalformedInstance("construction and meta must be objects")
    orders = d.get("orders")
    if orders is not None:
        try:
            orders = [[(int(u), int(v)) for u, v in o] for o in orders]
        except (TypeError, ValueError) as exc:
            raise MalformedInstance("bad orders field") from exc
    return InstanceFile(kind, n, r, edges, construction, meta, orders, version)


def load(path) -> InstanceFile:
    with open(path) as fh:
        return loads(fh.read())


def rebuild(inst: InstanceFile) -> GridConstruction | RankedConstruction | None:
    """Regenerate the construction an instance claims to come from."""
    c = inst.construction
    try:
        if inst.kind == "grid":
            return build_grid(GridParams(int(c["a"]), int(c["b"]), int(c["seed"])))
        if inst.kind == "ranked":
            return build_ranked(RankedParams(
                r=int(c["r"]), b=int(c["b"]), a=int(c["a"]), d=int(c.get("d", 3)),
                seed=int(c["seed"]), variant=c.get("variant", "overlapping"),
                epsilon=c.get("epsilon"),
            ))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInstance(f"bad construction record: {exc}") from exc
    return None


def orders_of(inst: InstanceFile) -> list[StrictOrder] | None:
    built = rebuild(inst)
    if built is not None:
        return list(built.orders)
    if inst.orders is None:
        return None
    return [transitive_closure(o, inst.n) for o in inst.orders]


# exports


def _export_edges(inst: InstanceFile, complement: bool):
    if not complement:
        return [(u, v, ls) for u, v, ls in sorted(inst.edges)]
    present = {(min(u, v), max(u, v)) for u, v, _ in inst.edges}
    return [
        (u, v, ())
        for u in range(inst.n)
        for v in range(u + 1, inst.n)
        if (u, v) not in present
    ]


def to_dimacs(inst: InstanceFile, complement: bool = False) -> str:
    edges = _export_edges(inst, complement)
    lines = [f"c compunion {inst.kind} instance{' (complement)' if complement else ''}",
             f"p edge {inst.n} {len(edges)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v, _ in edges]
    return "\n".join(lines) + "\n"


def to_dot(inst: InstanceFile, complement: bool = False) -> str:
    edges = _export_edges(inst, complement)
    lines = ["graph G {"]
    lines += [f"  {v};" for v in range(inst.n)]
    for u, v, ls in edges:
        if ls:
            lines.append(f'  {u} -- {v} [label="{",".join(map(str, ls))}"];')
        else:
            lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
