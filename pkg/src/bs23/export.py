"""Finite graph patches: Cayley balls, Bass-Serre tree balls, the same-height
forest and the phi-quotient graph, as DOT, JSON or a CSV summary."""

from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .britton import normal_form
from .endo import PHI, apply_endo
from .tree import TreeVertex, height_forest_component, tree_ball_vertices
from .words import Word, multiply, rho

CAYLEY_RADIUS_CAP = 6
TREE_RADIUS_CAP = 8

COLOURS = {"a": "red", "b": "blue", "aTilde": "green"}
GENERATORS = {"a": Word.a(), "A": Word.a(-1), "b": Word.b(), "B": Word.b(-1)}


class RadiusCapExceeded(ValueError):
    def __init__(self, what: str, radius: int, cap: int):
        super().__init__(f"{what} radius {radius} exceeds the cap {cap}")
        self.radius = radius
        self.cap = cap


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str  # group-element, coset or quotient-class
    height: int
    colour: Optional[str] = None

    def to_json(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "height": self.height}
        if self.colour is not None:
            out["colour"] = self.colour
        return out


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    label: str

    def to_json(self) -> dict:
        return {"from": self.source, "to": self.target, "label": self.label}


@dataclass
class GraphDoc:
    name: str = "G"
    vertices: list[Vertex] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)

    def __post_init__(self):
        self.vertices = sorted(set(self.vertices), key=lambda v: (v.height, v.id))
        self.edges = sorted(set(self.edges), key=lambda e: (e.source, e.target, e.label))
        ids = [v.id for v in self.vertices]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate vertex ids")
        known = set(ids)
        for e in self.edges:
            if e.source not in known or e.target not in known:
                raise ValueError(f"edge {e} has an endpoint outside the document")

    def vertex(self, vid: str) -> Vertex:
        return next(v for v in self.vertices if v.id == vid)

    def degree(self, vid: str) -> int:
        return sum((e.source == vid) + (e.target == vid) for e in self.edges)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "vertices": [v.to_json() for v in self.vertices],
            "edges": [e.to_json() for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GraphDoc":
        vs = [Vertex(v["id"], v["kind"], v["height"], v.get("colour")) for v in data["vertices"]]
        es = [Edge(e["from"], e["to"], e["label"]) for e in data["edges"]]
        return cls(data.get("name", "G"), vs, es)


def _check(what: str, radius: int, cap: int):
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if radius > cap:
        raise RadiusCapExceeded(what, radius, cap)


def _element_id(u: Word) -> str:
    return str(normal_form(u))


def cayley_elements(radius: int, cap: int = CAYLEY_RADIUS_CAP) -> dict[str, Word]:
    """Normal-form id -> word for the elements at word distance <= radius."""
    _check("cayley", radius, cap)
    one = Word.identity()
    found = {_element_id(one): one}
    dist = {_element_id(one): 0}
    queue = deque([one])
    while queue:
        g = queue.popleft()
        gid = _element_id(g)
        if dist[gid] == radius:
            continue
        for x in GENERATORS.values():
            h = normal_form(multiply(g, x)).to_word()
            hid = str(h)
            if hid not in found:
                found[hid] = h
                dist[hid] = dist[gid] + 1
                queue.append(h)
    return found


def cayley_ball(radius: int, cap: int = CAYLEY_RADIUS_CAP) -> GraphDoc:
    elements = cayley_elements(radius, cap)
    vertices = [Vertex(vid, "group-element", rho(g)) for vid, g in elements.items()]
    edges = []
    for vid, g in elements.items():
        for label in ("a", "b"):
            hid = _element_id(multiply(g, GENERATORS[label]))
            if hid in elements:
                edges.append(Edge(vid, hid, label))
    return GraphDoc(f"cayley_{radius}", vertices, edges)


def tree_ball(radius: int, cap: int = TREE_RADIUS_CAP) -> GraphDoc:
    """Edges point upward (from the lower to the higher coset)."""
    _check("tree", radius, cap)
    dist = tree_ball_vertices(radius)
    vertices = [Vertex(str(v), "coset", v.height) for v in dist]
    edges = []
    for v in dist:
        for w in v.up_neighbors():
            if w in dist:
                edges.append(Edge(str(v), str(w), "b"))
    return GraphDoc(f"tree_{radius}", vertices, edges)


def height_forest_doc(radius: int, center: Optional[TreeVertex] = None, cap: int = TREE_RADIUS_CAP) -> GraphDoc:
    _check("forest", radius, cap)
    ball = height_forest_component(center or TreeVertex.base(), radius)
    vertices = [Vertex(str(v), "coset", v.height, ball.colour(v)) for v in ball.vertices]
    edges = []
    for x, y in ball.edges:
        # orient from the plus side
        if ball.colour(x) == "minus":
            x, y = y, x
        edges.append(Edge(str(x), str(y), "aTilde"))
    return GraphDoc(f"forest_{radius}", vertices, edges)


def quotient_class(g: Word) -> str:
    return str(normal_form(apply_endo(g, PHI)))


def quotient_ball(radius: int, cap: int = CAYLEY_RADIUS_CAP) -> GraphDoc:
    """Image of the Cayley ball under phi; classes named by normal forms of phi-images."""
    elements = cayley_elements(radius, cap)
    images = {vid: normal_form(apply_endo(g, PHI)).to_word() for vid, g in elements.items()}
    classes = {str(w): w for w in images.values()}
    vertices = [Vertex(cid, "quotient-class", rho(w)) for cid, w in classes.items()]
    edges = []
    for vid, g in elements.items():
        for label in ("a", "b"):
            hid = _element_id(multiply(g, GENERATORS[label]))
            if hid in elements:
                edges.append(Edge(str(images[vid]), str(images[hid]), label))
    for cid, w in classes.items():
        target = _element_id(multiply(w, Word.a()))
        if target in classes:
            edges.append(Edge(cid, target, "aTilde"))
    return GraphDoc(f"quotient_{radius}", vertices, edges)


def _quote(s: str) -> str:
    return json.dumps(s)


def emit_dot(doc: GraphDoc) -> str:
    lines = [f"digraph {_quote(doc.name)} {{"]
    for v in doc.vertices:
        attrs = [f"height={v.height}"]
        if v.colour:
            attrs.append(f"colour={_quote(v.colour)}")
        lines.append(f"  {_quote(v.id)} [{', '.join(attrs)}];")
    for e in doc.edges:
        lines.append(f"  {_quote(e.source)} -> {_quote(e.target)} [label={_quote(e.label)}, color={COLOURS[e.label]}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_json(doc: GraphDoc) -> str:
    return json.dumps(doc.to_json(), indent=2, sort_keys=True) + "\n"


def emit_csv(doc: GraphDoc) -> str:
    """Vertex and edge counts per height; an edge counts at its source's height."""
    heights = {v.id: v.height for v in doc.vertices}
    vcount: dict[int, int] = {}
    ecount: dict[int, int] = {}
    for v in doc.vertices:
        vcount[v.height] = vcount.get(v.height, 0) + 1
    for e in doc.edges:
        h = heights[e.source]
        ecount[h] = ecount.get(h, 0) + 1
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["height", "vertices", "edges"])
    for h in sorted(set(vcount) | set(ecount)):
        writer.writerow([h, vcount.get(h, 0), ecount.get(h, 0)])
    return buf.getvalue()
