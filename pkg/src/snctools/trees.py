"""Weighted trees of rational curves and exact intersection calculus.

A boundary configuration is stored as a graph whose vertices are smooth
rational curves carrying integer self-intersection weights and whose edges
are transversal crossing points.  Away from the distinguished curve tagged
``E`` the graph must be a forest; ``E`` itself may meet the rest of the
configuration twice (possibly twice on one component), which is the single
cycle the model allows.  All arithmetic is exact: weights and matrix
entries are Python integers, never floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Sequence


class Tag(str, Enum):
    E = "E"
    LINE_AT_INFINITY = "LineAtInfinity"
    D_COMPONENT = "DComponent"


class BlowKind(str, Enum):
    SPROUTING = "Sprouting"          # centre on one component
    SUBDIVISIONAL = "Subdivisional"  # centre on a crossing of two components
    FREE_POINT = "FreePoint"         # centre off the configuration


class InvalidSubsetError(ValueError):
    """A vertex id does not belong to the tree."""


class NotContractibleError(ValueError):
    """Blow-down preconditions violated (weight, degree, or double contact)."""


def _canon_edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class WeightedTree:
    """Immutable weighted configuration graph.

    ``vertices`` is a tuple of ``(id, weight)`` pairs, ``edges`` a tuple of
    unordered id pairs (duplicates allowed only on pairs containing the
    E-vertex), ``tags`` a partial map ``id -> Tag`` stored as pairs.
    """

    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[int, int], ...] = ()
    tags: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        verts = tuple(sorted((int(v), int(w)) for v, w in self.vertices))
        edges = tuple(sorted(_canon_edge(int(a), int(b)) for a, b in self.edges))
        tags = tuple(sorted((int(v), Tag(t).value) for v, t in self.tags))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "tags", tags)
        self._validate()

    def _validate(self) -> None:
        ids = [v for v, _ in self.vertices]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate vertex ids")
        idset = set(ids)
        tag_map = dict(self.tags)
        if len(tag_map) != len(self.tags):
            raise ValueError("duplicate tag entries")
        for v in tag_map:
            if v not in idset:
                raise ValueError(f"tag on unknown vertex {v}")
        e_ids = [v for v, t in self.tags if t == Tag.E.value]
        if len(e_ids) > 1:
            raise ValueError("at most one vertex may be tagged E")
        e_id = e_ids[0] if e_ids else None

        seen: set[tuple[int, int]] = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError("self-loops are not allowed")
            if a not in idset or b not in idset:
                raise ValueError(f"edge ({a},{b}) references unknown vertex")
            if (a, b) in seen and e_id not in (a, b):
                raise ValueError(f"duplicate edge ({a},{b}) away from E")
            seen.add((a, b))

        # the non-E part must be a forest
        parent = {v: v for v in idset}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            if e_id in (a, b):
                continue
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ValueError("cycle among non-E components")
            parent[ra] = rb

    # -- basic accessors ---------------------------------------------------

    @cached_property
    def _weight(self) -> dict[int, int]:
        return dict(self.vertices)

    @cached_property
    def _tags(self) -> dict[int, str]:
        return dict(self.tags)

    @cached_property
    def _adj(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v, _ in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.vertices)

    @property
    def e_id(self) -> Optional[int]:
        for v, t in self.tags:
            if t == Tag.E.value:
                return v
        return None

    def d_ids(self) -> tuple[int, ...]:
        e = self.e_id
        return tuple(v for v, _ in self.vertices if v != e)

    def has_vertex(self, v: int) -> bool:
        return v in self._weight

    def weight(self, v: int) -> int:
        try:
            return self._weight[v]
        except KeyError:
            raise InvalidSubsetError(f"unknown vertex {v}") from None

    def tag(self, v: int) -> Optional[Tag]:
        t = self._tags.get(v)
        return Tag(t) if t is not None else None

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbours with multiplicity (a double contact appears twice)."""
        if v not in self._weight:
            raise InvalidSubsetError(f"unknown vertex {v}")
        return self._adj.get(v, ())

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def edge_multiplicity(self, a: int, b: int) -> int:
        e = _canon_edge(a, b)
        return sum(1 for x in self.edges if x == e)

    # -- subsets -----------------------------------------------------------

    def check_subset(self, subset: Iterable[int]) -> tuple[int, ...]:
        sub = tuple(sorted(set(subset)))
        for v in sub:
            if v not in self._weight:
                raise InvalidSubsetError(f"unknown vertex {v}")
        return sub

    def induced_degree(self, v: int, subset: frozenset[int] | set[int]) -> int:
        return sum(1 for u in self.neighbors(v) if u in subset)

    def connected_components(self, subset: Iterable[int]) -> list[frozenset[int]]:
        sub = set(self.check_subset(subset))
        comps: list[frozenset[int]] = []
        left = set(sub)
        while left:
            start = min(left)
            stack, comp = [start], {start}
            while stack:
                x = stack.pop()
                for u in self.neighbors(x):
                    if u in sub and u not in comp:
                        comp.add(u)
                        stack.append(u)
            comps.append(frozenset(comp))
            left -= comp
        return comps

    def is_connected(self, subset: Iterable[int]) -> bool:
        sub = self.check_subset(subset)
        if not sub:
            return True
        return len(self.connected_components(sub)) == 1

    def is_chain(self, subset: Iterable[int]) -> bool:
        """Connected with every induced degree at most 2 and no double contact."""
        sub = set(self.check_subset(subset))
        if not sub:
            return False
        if not self.is_connected(sub):
            return False
        for v in sub:
            if self.induced_degree(v, sub) > 2:
                return False
        # a double edge inside the subset would close a cycle
        pairs = [e for e in self.edges if e[0] in sub and e[1] in sub]
        return len(pairs) == len(sub) - 1

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        verts = []
        for v, w in self.vertices:
            entry: dict = {"id": v, "weight": w}
            t = self._tags.get(v)
            if t is not None:
                entry["tag"] = t
            verts.append(entry)
        return {"vertices": verts, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "WeightedTree":
        verts = tuple((v["id"], v["weight"]) for v in data["vertices"])
        tags = tuple((v["id"], v["tag"]) for v in data["vertices"] if "tag" in v)
        edges = tuple((a, b) for a, b in data.get("edges", ()))
        return cls(verts, edges, tags)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "WeightedTree":
        return cls.from_json_dict(json.loads(text))

    def to_dot(self) -> str:
        lines = ["graph configuration {"]
        for v, w in self.vertices:
            t = self._tags.get(v)
            label = f"{v} ({w})" if t is None else f"{v} ({w}) {t}"
            lines.append(f'  v{v} [label="{label}"];')
        for a, b in self.edges:
            lines.append(f"  v{a} -- v{b};")
        lines.append("}")
        return "\n".join(lines)

    # -- derived copies ----------------------------------------------------

    def with_weight_deltas(self, deltas: Mapping[int, int]) -> "WeightedTree":
        verts = tuple((v, w + deltas.get(v, 0)) for v, w in self.vertices)
        return WeightedTree(verts, self.edges, self.tags)

    def replaced(
        self,
        *,
        add_vertices: Sequence[tuple[int, int]] = (),
        drop_vertices: Iterable[int] = (),
        add_edges: Sequence[tuple[int, int]] = (),
        drop_edges: Sequence[tuple[int, int]] = (),
        weight_deltas: Optional[Mapping[int, int]] = None,
        add_tags: Sequence[tuple[int, Tag]] = (),
    ) -> "WeightedTree":
        """Build a modified copy.  ``drop_edges`` removes one occurrence each."""
        drop = set(drop_vertices)
        deltas = weight_deltas or {}
        verts = [(v, w + deltas.get(v, 0)) for v, w in self.vertices if v not in drop]
        verts.extend(add_vertices)
        edges = list(self.edges)
        for e in drop_edges:
            edges.remove(_canon_edge(*e))
        edges = [e for e in edges if e[0] not in drop and e[1] not in drop]
        edges.extend(_canon_edge(*e) for e in add_edges)
        tags = [(v, t) for v, t in self.tags if v not in drop]
        tags.extend((v, t.value) for v, t in add_tags)
        return WeightedTree(tuple(verts), tuple(edges), tuple(tags))


def build_tree(
    weights: Mapping[int, int],
    edges: Iterable[tuple[int, int]] = (),
    tags: Optional[Mapping[int, Tag]] = None,
) -> WeightedTree:
    return WeightedTree(
        tuple(weights.items()),
        tuple(edges),
        tuple((v, t.value) for v, t in (tags or {}).items()),
    )


def chain_tree(weights: Sequence[int], start_id: int = 0) -> WeightedTree:
    """A chain with consecutive ids ``start_id, start_id+1, ...``."""
    ids = range(start_id, start_id + len(weights))
    return build_tree(
        dict(zip(ids, weights)),
        [(i, i + 1) for i in list(ids)[:-1]],
    )


# -- intersection matrices and determinants --------------------------------


def intersection_matrix(tree: WeightedTree, subset: Iterable[int]) -> list[list[int]]:
    """Symmetric matrix: weights on the diagonal, contact counts off it."""
    sub = tree.check_subset(subset)
    index = {v: i for i, v in enumerate(sub)}
    n = len(sub)
    mat = [[0] * n for _ in range(n)]
    for i, v in enumerate(sub):
        mat[i][i] = tree.weight(v)
    for a, b in tree.edges:
        if a in index and b in index:
            mat[index[a]][index[b]] += 1
            mat[index[b]][index[a]] += 1
    return mat


def _det_bareiss(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def determinant(tree: WeightedTree, subset: Iterable[int]) -> int:
    """det(-Q) of the subset's intersection matrix; 1 for the empty set."""
    sub = tree.check_subset(subset)
    if not sub:
        return 1
    q = intersection_matrix(tree, sub)
    neg = [[-x for x in row] for row in q]
    return _det_bareiss(neg)


def negative_definite(tree: WeightedTree, subset: Iterable[int]) -> bool:
    """Sylvester test: every leading principal minor of -Q is positive."""
    sub = tree.check_subset(subset)
    if not sub:
        return True
    q = intersection_matrix(tree, sub)
    neg = [[-x for x in row] for row in q]
    for k in range(1, len(sub) + 1):
        minor = [row[:k] for row in neg[:k]]
        if _det_bareiss(minor) <= 0:
            return False
    return True


# -- blowing up and down ----------------------------------------------------


def blow_up(
    tree: WeightedTree,
    *,
    edge: Optional[tuple[int, int]] = None,
    vertex: Optional[int] = None,
    free: bool = False,
    new_id: Optional[int] = None,
) -> tuple[WeightedTree, BlowKind, int]:
    """Insert a new (-1)-vertex at the given site.

    Exactly one of ``edge`` (subdivisional), ``vertex`` (sprouting) or
    ``free`` (isolated centre) must be given.  Returns the new tree, the
    kind label and the id of the created vertex.
    """
    if sum(x is not None and x is not False for x in (edge, vertex, free)) != 1:
        raise ValueError("specify exactly one of edge, vertex, free")
    nid = new_id if new_id is not None else (max(tree.ids, default=-1) + 1)
    if tree.has_vertex(nid):
        raise ValueError(f"new id {nid} already in use")
    if edge is not None:
        a, b = edge
        if tree.edge_multiplicity(a, b) == 0:
            raise InvalidSubsetError(f"no edge between {a} and {b}")
        out = tree.replaced(
            add_vertices=[(nid, -1)],
            add_edges=[(nid, a), (nid, b)],
            drop_edges=[(a, b)],
            weight_deltas={a: -1, b: -1},
        )
        return out, BlowKind.SUBDIVISIONAL, nid
    if vertex is not None:
        if not tree.has_vertex(vertex):
            raise InvalidSubsetError(f"unknown vertex {vertex}")
        out = tree.replaced(
            add_vertices=[(nid, -1)],
            add_edges=[(nid, vertex)],
            weight_deltas={vertex: -1},
        )
        return out, BlowKind.SPROUTING, nid
    out = tree.replaced(add_vertices=[(nid, -1)])
    return out, BlowKind.FREE_POINT, nid


def blow_down(tree: WeightedTree, vertex: int) -> tuple[WeightedTree, BlowKind]:
    """Contract a (-1)-vertex of degree <= 2; neighbours gain weight 1.

    The kind is subdivisional exactly when the degree is 2.  A vertex
    meeting one neighbour twice cannot be contracted (the image would
    acquire a non-normal crossing).
    """
    w = tree.weight(vertex)
    if w != -1:
        raise NotContractibleError(f"vertex {vertex} has weight {w}, not -1")
    ns = tree.neighbors(vertex)
    if len(ns) > 2:
        raise NotContractibleError(f"vertex {vertex} has degree {len(ns)}")
    if len(ns) == 2 and ns[0] == ns[1]:
        raise NotContractibleError(f"vertex {vertex} meets {ns[0]} twice")
    deltas = {}
    for u in ns:
        deltas[u] = deltas.get(u, 0) + 1
    add_edges = [tuple(ns)] if len(ns) == 2 else []
    out = tree.replaced(
        drop_vertices=[vertex],
        add_edges=add_edges,
        weight_deltas=deltas,
    )
    kind = BlowKind.SUBDIVISIONAL if len(ns) == 2 else (
        BlowKind.SPROUTING if len(ns) == 1 else BlowKind.FREE_POINT
    )
    return out, kind


_KK_BLOWDOWN_DELTA = {
    BlowKind.SPROUTING: 1,
    BlowKind.SUBDIVISIONAL: 0,
    BlowKind.FREE_POINT: 2,
}


def kk_blow_down_delta(kind: BlowKind) -> int:
    """Change of K.(K+T) under a blow-down, for T containing the centre."""
    return _KK_BLOWDOWN_DELTA[kind]


def kk_blow_up_delta(kind: BlowKind) -> int:
    return -_KK_BLOWDOWN_DELTA[kind]


def kk_plus_t(tree: WeightedTree, subset: Iterable[int]) -> int:
    """From-scratch value of K.(K+T) for the reduced divisor T = subset.

    K^2 of the ambient rational surface is pinned by the configuration:
    the non-E components together generate the lattice next to E, so
    K^2 = 10 - #(non-E vertices).  Adjunction gives K.v = -2 - weight(v)
    for each rational component.
    """
    sub = tree.check_subset(subset)
    k_sq = 10 - len(tree.d_ids())
    return k_sq + sum(-2 - tree.weight(v) for v in sub)


# -- NC-minimalization -------------------------------------------------------


@dataclass(frozen=True)
class MinimalizeResult:
    tree: WeightedTree
    sprouting_contractions: int
    e_touched: bool
    contracted: tuple[int, ...]


def _nc_eligible(tree: WeightedTree) -> list[int]:
    e = tree.e_id
    d_ids = tree.d_ids()
    out = []
    for v in d_ids:
        if tree.weight(v) != -1:
            continue
        ns = tree.neighbors(v)
        if len(ns) > 2:
            continue
        if len(ns) == 2 and ns[0] == ns[1]:
            continue  # double contact with E: contraction would pinch E
        if len(d_ids) == 1:
            continue  # never contract the last boundary component
        out.append(v)
    return out


def nc_minimalize(
    tree: WeightedTree,
    choose: Optional[Callable[[Sequence[int]], int]] = None,
) -> MinimalizeResult:
    """Contract non-branching (-1)-components of the non-E part until every
    remaining (-1)-component branches in the whole configuration.

    Ties are broken by contracting the lowest id (the result does not
    depend on the order).  Contractions are classified as sprouting or
    subdivisional with respect to the non-E part only.
    """
    pick = choose or min
    cur = tree
    sprout = 0
    touched = False
    contracted: list[int] = []
    while True:
        eligible = _nc_eligible(cur)
        if not eligible:
            break
        v = pick(eligible)
        e = cur.e_id
        ns = cur.neighbors(v)
        d_degree = sum(1 for u in ns if u != e)
        if e is not None and e in ns:
            touched = True
        cur, _ = blow_down(cur, v)
        if d_degree <= 1:
            sprout += 1
        contracted.append(v)
    return MinimalizeResult(cur, sprout, touched, tuple(contracted))
