"""Bass-Serre tree of BS(2,3): cosets of <a> named by normal-form letter sequences.

A vertex address is the letter part of a normal form, ``((s1, e1), ..., (sk, ek))``,
read as the coset ``a^s1 b^e1 ... a^sk b^ek <a>``.  From any vertex there are three
up-edges (``a^r b``, r = 0, 1, 2) and two down-edges (``a^r b^-1``, r = 0, 1).

Paths starting at the base vertex are stored as steps ``(direction, branch)``;
a geodesic path and its endpoint address carry the same data.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .britton import BS23, DOWN, UP, GroupParams, NormalForm, normal_form
from .words import A, B, Word, as_word, product, rho_a

Letter = tuple[int, int]  # (residue, direction)

_C = Word([(B, 1), (A, 1), (B, -1)])  # a^b


def _dir_char(e: int) -> str:
    return "u" if e == UP else "d"


@dataclass(frozen=True, order=True)
class TreeVertex:
    address: tuple[Letter, ...] = ()

    @classmethod
    def base(cls) -> "TreeVertex":
        return cls(())

    @classmethod
    def of(cls, u: Word) -> "TreeVertex":
        """The coset ``u <a>``."""
        return cls(normal_form(as_word(u)).letters)

    @classmethod
    def parse(cls, text: str) -> "TreeVertex":
        letters = []
        for tok in text.split():
            if tok[0] not in "ud" or not tok[1:].isdigit():
                raise ValueError(f"bad vertex token {tok!r}")
            letters.append((int(tok[1:]), UP if tok[0] == "u" else DOWN))
        v = cls(tuple(letters))
        if not v.is_valid():
            raise ValueError(f"{text!r} is not a reduced address")
        return v

    def __str__(self):
        return " ".join(f"{_dir_char(e)}{s}" for s, e in self.address) or "base"

    def is_valid(self, params: GroupParams = BS23) -> bool:
        prev = None
        for s, e in self.address:
            if e not in (UP, DOWN) or not 0 <= s < (params.m if e == UP else params.n):
                return False
            if prev is not None and s == 0 and prev != e:
                return False
            prev = e
        return True

    @property
    def height(self) -> int:
        return sum(e for _, e in self.address)

    def representative(self) -> Word:
        return NormalForm(self.address, 0).prefix_word()

    def step(self, direction: int, branch: int) -> "TreeVertex":
        """Neighbour along the edge ``a^branch b^direction``."""
        if self.address and branch == 0 and self.address[-1][1] == -direction:
            return TreeVertex(self.address[:-1])
        return TreeVertex(self.address + ((branch, direction),))

    def up_neighbors(self) -> list["TreeVertex"]:
        return [self.step(UP, r) for r in range(BS23.m)]

    def down_neighbors(self) -> list["TreeVertex"]:
        return [self.step(DOWN, r) for r in range(BS23.n)]

    def neighbors(self) -> list["TreeVertex"]:
        return self.up_neighbors() + self.down_neighbors()


@dataclass(frozen=True)
class TreePath:
    """Edge walk from the base vertex.  ``tail`` is the final position inside the last coset."""

    steps: tuple[tuple[int, int], ...] = ()
    tail: int = 0

    @property
    def directions(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.steps)

    def backtracks(self) -> list[int]:
        """Indices of steps that walk straight back along the previous edge."""
        out = []
        stack: list[int] = []
        for i, (d, r) in enumerate(self.steps):
            if r == 0 and stack and stack[-1] == -d:
                stack.pop()
                out.append(i)
            else:
                stack.append(d)
        return out

    @property
    def is_geodesic(self) -> bool:
        return not self.backtracks()

    @property
    def endpoint(self) -> TreeVertex:
        v = TreeVertex.base()
        for d, r in self.steps:
            v = v.step(d, r)
        return v

    def geodesic(self) -> "TreePath":
        return path_to(self.endpoint)

    def __len__(self):
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "steps": [{"dir": "up" if d == UP else "down", "branch": r} for d, r in self.steps],
            "tail": self.tail,
        }

    @classmethod
    def from_json(cls, data: dict) -> "TreePath":
        steps = tuple((UP if s["dir"] == "up" else DOWN, s["branch"]) for s in data["steps"])
        return cls(steps, data.get("tail", 0))


def path_to(v: TreeVertex, tail: int = 0) -> TreePath:
    """The geodesic from the base vertex to ``v``."""
    return TreePath(tuple((e, s) for s, e in v.address), tail)


def project_to_tree(u: Word, params: GroupParams = BS23) -> TreePath:
    """Follow ``u`` letter by letter through the tree, keeping backtracking steps."""
    n, m = params.n, params.m
    steps = []
    stack: list[Letter] = []
    tail = 0
    for base, exp in as_word(u).syllables:
        if base == A:
            tail += exp
            continue
        d = UP if exp > 0 else DOWN
        for _ in range(abs(exp)):
            q, r = divmod(tail, m if d == UP else n)
            steps.append((d, r))
            tail = q * (n if d == UP else m)
            if r == 0 and stack and stack[-1][1] == -d:
                tail += stack.pop()[0]
            else:
                stack.append((r, d))
    return TreePath(tuple(steps), tail)


def good_representative(p: TreePath) -> Word:
    if not p.is_geodesic:
        raise ValueError("good representatives exist only for geodesic paths")
    return NormalForm(tuple((r, d) for d, r in p.steps), 0).prefix_word()


# -- taxonomy -------------------------------------------------------------------


@dataclass(frozen=True)
class PathClass:
    tips: tuple[int, ...]
    valleys: tuple[int, ...]
    swiss: bool
    end_essential: bool

    @property
    def c(self) -> int:
        return len(self.tips) + len(self.valleys)

    @property
    def nepalese(self) -> bool:
        return not self.swiss

    def to_json(self) -> dict:
        return {
            "tips": list(self.tips),
            "valleys": list(self.valleys),
            "c": self.c,
            "swiss": self.swiss,
            "nepalese": self.nepalese,
            "end_essential": self.end_essential,
        }


def classify_directions(dirs: Iterable[int]) -> PathClass:
    d = tuple(dirs)
    tips = tuple(i for i in range(len(d) - 1) if d[i] == UP and d[i + 1] == DOWN)
    valleys = tuple(i for i in range(len(d) - 1) if d[i] == DOWN and d[i + 1] == UP)
    swiss = any(d[i] == d[i + 2] != d[i + 1] for i in range(len(d) - 2))
    end_essential = len(d) < 2 or not (d[-2] == UP and d[-1] == DOWN)
    return PathClass(tips, valleys, swiss, end_essential)


def classify_path(p) -> PathClass:
    if isinstance(p, TreePath):
        if not p.is_geodesic:
            raise ValueError("classification needs a geodesic path")
        return classify_directions(p.directions)
    if isinstance(p, TreeVertex):
        return classify_directions(e for _, e in p.address)
    return classify_directions(p)


def path_class_of(u: Word) -> PathClass:
    """Classification of the geodesic path to the coset ``u <a>``."""
    return classify_path(TreeVertex.of(u))


# -- sibling moves --------------------------------------------------------------


def _split(u: Word, index: int) -> tuple[NormalForm, Word, Word, Word]:
    """``u = w1 X w2`` where ``X`` covers steps ``index`` and ``index + 1`` of u's path."""
    nf = normal_form(as_word(u))
    letters = nf.letters
    if not 0 <= index < len(letters) - 1:
        raise ValueError(f"no tip or valley at index {index}")
    (s0, e0), (s1, e1) = letters[index], letters[index + 1]
    w1 = product(NormalForm(letters[:index], 0).prefix_word(), Word([(A, s0)]))
    x = Word([(B, e0), (A, s1), (B, e1)])
    w2 = product(NormalForm(letters[index + 2:], 0).prefix_word(), Word([(A, nf.tail)]))
    return nf, w1, x, w2


def _tip_parts(u: Word, index: int):
    nf, w1, tip, w2 = _split(u, index)
    if not (nf.letters[index][1] == UP and nf.letters[index + 1][1] == DOWN):
        raise ValueError(f"no tip at index {index}")
    return w1, tip, w2


def _valley_parts(u: Word, index: int):
    nf, w1, valley, w2 = _split(u, index)
    if not (nf.letters[index][1] == DOWN and nf.letters[index + 1][1] == UP):
        raise ValueError(f"no valley at index {index}")
    return w1, valley, w2


def triplet_words(u: Word, index: int) -> tuple[Word, Word]:
    """``(w1 a B a^-1 w2, w1 a^-1 B a w2)`` for the tip ``B`` at ``index``; not renormalised."""
    w1, tip, w2 = _tip_parts(u, index)
    a, ai = Word.a(), Word.a(-1)
    return product(w1, a, tip, ai, w2), product(w1, ai, tip, a, w2)


def twin_word(u: Word, index: int) -> Word:
    """``w1 a^-1 V a w2`` for the valley ``V`` at ``index``; not renormalised."""
    w1, valley, w2 = _valley_parts(u, index)
    return product(w1, Word.a(-1), valley, Word.a(), w2)


def triplet_moves(u: Word, index: int) -> tuple[Word, Word]:
    """Good representatives of the two other triplets at the tip starting at step ``index``."""
    x, y = triplet_words(u, index)
    return TreeVertex.of(x).representative(), TreeVertex.of(y).representative()


def twin_move(u: Word, index: int) -> Word:
    return TreeVertex.of(twin_word(u, index)).representative()


@dataclass(frozen=True)
class Move:
    kind: str  # "triplet+", "triplet-", "twin" or "flip"
    index: int

    def word(self, u: Word) -> Word:
        if self.kind == "twin":
            return twin_word(u, self.index)
        if self.kind == "flip":
            return flip_word(u)
        plus, minus = triplet_words(u, self.index)
        return plus if self.kind == "triplet+" else minus


def flip_index(v: TreeVertex) -> Optional[int]:
    """Position of a final down step that follows another down step (or starts the path)."""
    addr = v.address
    if addr and addr[-1][1] == DOWN and (len(addr) == 1 or addr[-2][1] == DOWN):
        return len(addr) - 1
    return None


def flip_word(u: Word) -> Word:
    """Swap the residue (0 or 1) in front of the final ``b^-1``.

    Since ``a b^-1 = b^-1 a^b``, both paths give the same conjugate of any
    subgroup normalised by ``a^b``.
    """
    v = TreeVertex.of(u)
    if flip_index(v) is None:
        raise ValueError(f"{v} does not end in two down steps")
    s, e = v.address[-1]
    return TreeVertex(v.address[:-1] + ((1 - s, e),)).representative()


def moves_at(v: TreeVertex, flips: bool = False) -> list[Move]:
    cls = classify_path(v)
    out = []
    for i in cls.tips:
        out += [Move("triplet+", i), Move("triplet-", i)]
    out += [Move("twin", i) for i in cls.valleys]
    if flips and flip_index(v) is not None:
        out.append(Move("flip", flip_index(v)))
    return out


class SiblingCapExceeded(RuntimeError):
    def __init__(self, start: TreeVertex, cap: int):
        super().__init__(f"sibling component of {start} has more than {cap} paths")
        self.start = start
        self.cap = cap


@dataclass
class ComponentReport:
    start: TreeVertex
    members: list[TreeVertex]
    canonical: Optional[TreeVertex]
    truncated: bool
    parents: dict = field(default_factory=dict, repr=False)

    @property
    def canonical_word(self) -> Optional[Word]:
        return None if self.canonical is None else self.canonical.representative()

    def route(self) -> list[tuple[TreeVertex, Move]]:
        """Moves leading from the start path to the canonical one, as ``(from, move)``."""
        if self.truncated or self.canonical is None:
            raise SiblingCapExceeded(self.start, len(self.members))
        out = []
        v = self.canonical
        while v != self.start:
            prev, move = self.parents[v]
            out.append((prev, move))
            v = prev
        return out[::-1]

    def to_json(self) -> dict:
        return {
            "start": str(self.start),
            "members": [str(v) for v in self.members],
            "canonical": None if self.canonical is None else str(self.canonical_word),
            "truncated": self.truncated,
        }


def canonical_key(v: TreeVertex) -> tuple[int, str]:
    return len(str(v.representative())), str(v)


def sibling_component(u, cap: int = 10_000, flips: bool = False) -> ComponentReport:
    """Breadth-first closure of ``u``'s path under triplet and twin moves.

    The moves keep the direction sequence, so every path reached is again
    end-essential and nepalese.  With ``flips`` the final-residue flip is
    allowed too, which merges components giving the same conjugate fiber.
    """
    start = u if isinstance(u, TreeVertex) else TreeVertex.of(u)
    cls = classify_path(start)
    if cls.swiss or not cls.end_essential:
        raise ValueError(f"{start} is not an end-essential nepalese path")
    parents: dict[TreeVertex, tuple[TreeVertex, Move]] = {}
    seen = {start}
    order = [start]
    queue = deque([start])
    truncated = False
    while queue:
        v = queue.popleft()
        rep = v.representative()
        for move in moves_at(v, flips):
            w = TreeVertex.of(move.word(rep))
            if w in seen:
                continue
            if len(seen) >= cap:
                truncated = True
                queue.clear()
                break
            seen.add(w)
            parents[w] = (v, move)
            order.append(w)
            queue.append(w)
    canonical = None if truncated else min(order, key=canonical_key)
    return ComponentReport(start, sorted(order, key=canonical_key), canonical, truncated, parents)


# -- same-height neighbours ------------------------------------------------------


def same_height_neighbors(v: TreeVertex) -> list[TreeVertex]:
    """The cosets ``l a^k a^b <a>`` for k = 0, 1, 2, with ``l`` representing ``v``."""
    rep = v.representative()
    return [TreeVertex.of(product(rep, Word.a(k), _C)) for k in range(3)]


@dataclass
class ForestBall:
    center: TreeVertex
    radius: int
    vertices: list[TreeVertex]
    edges: list[tuple[TreeVertex, TreeVertex]]
    depth: dict

    @property
    def plus(self) -> list[TreeVertex]:
        return [v for v in self.vertices if self.depth[v] % 2 == 0]

    @property
    def minus(self) -> list[TreeVertex]:
        return [v for v in self.vertices if self.depth[v] % 2 == 1]

    def colour(self, v: TreeVertex) -> str:
        return "plus" if self.depth[v] % 2 == 0 else "minus"

    @property
    def acyclic(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1

    @property
    def bipartite(self) -> bool:
        return all(self.depth[x] % 2 != self.depth[y] % 2 for x, y in self.edges)

    def interior_regular(self, degree: int = 3) -> bool:
        count = {v: 0 for v in self.vertices}
        for x, y in self.edges:
            count[x] += 1
            count[y] += 1
        return all(count[v] == degree for v in self.vertices if self.depth[v] < self.radius)


def height_forest_component(v: TreeVertex, radius: int) -> ForestBall:
    """Ball of the same-height-neighbour graph around ``v`` with its 2-colouring."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    depth = {v: 0}
    order = [v]
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if depth[x] == radius:
            continue
        for y in same_height_neighbors(x):
            if y not in depth:
                depth[y] = depth[x] + 1
                order.append(y)
                queue.append(y)
    members = set(order)
    edges = set()
    for x in order:
        for y in same_height_neighbors(x):
            if y in members:
                edges.add(tuple(sorted((x, y), key=str)))
    return ForestBall(v, radius, order, sorted(edges, key=lambda e: (str(e[0]), str(e[1]))), depth)


def tree_ball_vertices(radius: int) -> dict[TreeVertex, int]:
    """Vertices within ``radius`` of the base vertex, with their distances."""
    dist = {TreeVertex.base(): 0}
    queue = deque([TreeVertex.base()])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for w in v.neighbors():
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def path_length(u: Word) -> int:
    return len(TreeVertex.of(u).address)


def minimal_rho_a(u: Word) -> bool:
    """True when ``u`` is a good representative of its own path (no wasted stable letters)."""
    return rho_a(as_word(u)) == path_length(u)


def to_json(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)
