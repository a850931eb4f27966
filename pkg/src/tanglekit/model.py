"""Rooted binary trees, tanglegrams, induced substructures and scars.

Trees follow the convention that the root is a degree-1 vertex sitting above
the topmost branching node, so every tree with ``n`` leaves has ``2n`` nodes
and ``2n - 1`` edges.  Node ids are dense integers assigned in preorder with
the root as node 0; an edge is named by its lower endpoint.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .errors import TanglegramError

LABEL_RE = re.compile(r"[A-Za-z0-9_]+")

#: A matching edge, written as ``(left leaf label, right leaf label)``.
Edge = tuple[str, str]

#: Nested tuple description of a tree below its root: a label or a pair.
Nested = Union[str, tuple["Nested", "Nested"]]


class RootedBinaryTree:
    """Immutable rooted binary tree with a degree-1 root.

    ``children[v]`` is an ordered pair for branching nodes and empty for
    leaves; the order is only a default drawing hint, nothing else in the
    toolkit depends on it.
    """

    __slots__ = (
        "parent",
        "children",
        "labels",
        "root",
        "depth",
        "_node_of",
        "_leaf_sets",
        "_size",
    )

    def __init__(
        self,
        parent: Sequence[int],
        children: Sequence[Sequence[int]],
        labels: Sequence[str | None],
        root: int = 0,
    ):
        n = len(parent)
        if n < 2:
            raise TanglegramError("a rooted tree needs at least two nodes")
        if len(children) != n or len(labels) != n:
            raise TanglegramError("parent, children and labels must have equal length")
        if not 0 <= root < n or parent[root] != -1:
            raise TanglegramError("root must be a node without parent")
        self.parent = tuple(int(p) for p in parent)
        self.children = tuple(tuple(int(c) for c in cs) for cs in children)
        self.labels = tuple(labels)
        self.root = root

        if len(self.children[root]) != 1:
            raise TanglegramError("the root must have exactly one child")
        node_of: dict[str, int] = {}
        for v in range(n):
            cs = self.children[v]
            if v != root:
                if self.parent[v] == -1:
                    raise TanglegramError(f"node {v} has no parent")
                if len(cs) not in (0, 2):
                    raise TanglegramError(f"node {v} has {len(cs)} children; the tree must be binary")
            for c in cs:
                if not 0 <= c < n or self.parent[c] != v:
                    raise TanglegramError(f"parent/children maps disagree at node {v}")
            lab = self.labels[v]
            if cs:
                if lab is not None:
                    raise TanglegramError(f"internal node {v} carries a label")
            elif v != root:
                if not isinstance(lab, str) or not LABEL_RE.fullmatch(lab):
                    raise TanglegramError(f"invalid leaf label {lab!r}")
                if lab in node_of:
                    raise TanglegramError(f"duplicate leaf label {lab!r}")
                node_of[lab] = v
        self._node_of = node_of

        # depth by BFS from the root; also detects unreachable nodes/cycles
        depth = [-1] * n
        depth[root] = 0
        stack = [root]
        seen = 1
        while stack:
            v = stack.pop()
            for c in self.children[v]:
                if depth[c] != -1:
                    raise TanglegramError("the parent map contains a cycle")
                depth[c] = depth[v] + 1
                seen += 1
                stack.append(c)
        if seen != n:
            raise TanglegramError("some nodes are unreachable from the root")
        self.depth = tuple(depth)

        leaf_sets: list[frozenset[str]] = [frozenset()] * n
        for v in sorted(range(n), key=depth.__getitem__, reverse=True):
            cs = self.children[v]
            if not cs:
                leaf_sets[v] = frozenset((self.labels[v],))
            else:
                leaf_sets[v] = frozenset().union(*(leaf_sets[c] for c in cs))
        self._leaf_sets = tuple(leaf_sets)
        self._size = len(node_of)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_nested(cls, nested: Nested) -> RootedBinaryTree:
        """Build a tree from nested pairs, e.g. ``(("a", "b"), "c")``.

        Node ids follow preorder with the root stub as node 0.
        """
        parent: list[int] = [-1]
        children: list[list[int]] = [[]]
        labels: list[str | None] = [None]

        def add(item: Nested, par: int) -> None:
            v = len(parent)
            parent.append(par)
            children.append([])
            children[par].append(v)
            if isinstance(item, str):
                labels.append(item)
                return
            labels.append(None)
            if not isinstance(item, tuple) or len(item) != 2:
                raise TanglegramError(f"every branching node needs exactly two children, got {item!r}")
            add(item[0], v)
            add(item[1], v)

        add(nested, 0)
        return cls(parent, children, labels, 0)

    def to_nested(self, v: int | None = None) -> Nested:
        if v is None:
            v = self.children[self.root][0]
        cs = self.children[v]
        if not cs:
            return self.labels[v]
        return (self.to_nested(cs[0]), self.to_nested(cs[1]))

    # -- basic queries ----------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.parent)

    @property
    def n_leaves(self) -> int:
        return self._size

    @property
    def top(self) -> int:
        """The root's unique child."""
        return self.children[self.root][0]

    @property
    def leaf_labels(self) -> frozenset[str]:
        return self._leaf_sets[self.root]

    def is_leaf(self, v: int) -> bool:
        return v != self.root and not self.children[v]

    def node_of(self, label: str) -> int:
        try:
            return self._node_of[label]
        except KeyError:
            raise TanglegramError(f"unknown leaf label {label!r}") from None

    def leaves_below(self, v: int) -> frozenset[str]:
        return self._leaf_sets[v]

    def internal_nodes(self) -> list[int]:
        """Branching nodes (degree 3) in preorder."""
        return [v for v in self._preorder() if self.children[v] and v != self.root]

    def edges(self) -> list[int]:
        """All edges, named by their lower endpoint, in preorder."""
        return [v for v in self._preorder() if v != self.root]

    def is_root_edge(self, v: int) -> bool:
        return self.parent[v] == self.root

    def default_order(self) -> tuple[str, ...]:
        """Leaf labels in the order given by the stored child order."""
        return tuple(self.labels[v] for v in self._preorder() if self.is_leaf(v))

    def _preorder(self) -> list[int]:
        out: list[int] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.children[v]))
        return out

    def check_node(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < len(self.parent):
            raise TanglegramError(f"unknown node id {v!r}")

    def is_ancestor(self, u: int, v: int) -> bool:
        """``u`` lies on the root-``v`` path (``u`` precedes ``v`` in the tree order)."""
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        return u == v

    def orders(self, v: int | None = None) -> Iterator[tuple[str, ...]]:
        """Every leaf order consistent with the tree (``2**(n-1)`` of them)."""
        if v is None:
            v = self.top
        cs = self.children[v]
        if not cs:
            yield (self.labels[v],)
            return
        firsts = list(self.orders(cs[0]))
        seconds = list(self.orders(cs[1]))
        for a in firsts:
            for b in seconds:
                yield a + b
                yield b + a

    def canonical(self, v: int | None = None) -> str:
        """Order-independent shape string; equal strings mean isomorphic trees."""
        if v is None:
            v = self.top
        cs = self.children[v]
        if not cs:
            return "*"
        a, b = sorted(self.canonical(c) for c in cs)
        return f"({a},{b})"

    def __repr__(self) -> str:
        return f"RootedBinaryTree({self.to_nested()!r})"


def meet(tree: RootedBinaryTree, u: int, v: int) -> int:
    """Largest common lower bound of ``u`` and ``v`` in the tree order."""
    tree.check_node(u)
    tree.check_node(v)
    depth, parent = tree.depth, tree.parent
    while depth[u] > depth[v]:
        u = parent[u]
    while depth[v] > depth[u]:
        v = parent[v]
    while u != v:
        u, v = parent[u], parent[v]
    return u


def meet_leaves(tree: RootedBinaryTree, a: str, b: str) -> int:
    return meet(tree, tree.node_of(a), tree.node_of(b))


def trees_isomorphic(a: RootedBinaryTree, b: RootedBinaryTree) -> bool:
    return a.canonical() == b.canonical()


class Tanglegram:
    """Two rooted binary trees joined by a perfect matching of their leaves."""

    __slots__ = ("left", "right", "sigma", "right_of", "left_of", "edges")

    def __init__(self, left: RootedBinaryTree, right: RootedBinaryTree, sigma: Iterable[Edge]):
        self.left = left
        self.right = right
        pairs = [tuple(p) for p in sigma]
        right_of: dict[str, str] = {}
        left_of: dict[str, str] = {}
        for p in pairs:
            if len(p) != 2:
                raise TanglegramError(f"matching edge {p!r} is not a pair")
            a, b = p
            if a not in left.leaf_labels:
                raise TanglegramError(f"{a!r} is not a leaf of the left tree")
            if b not in right.leaf_labels:
                raise TanglegramError(f"{b!r} is not a leaf of the right tree")
            if a in right_of or b in left_of:
                raise TanglegramError(f"matching edge {a}-{b} reuses a leaf")
            right_of[a] = b
            left_of[b] = a
        if len(right_of) != left.n_leaves or len(left_of) != right.n_leaves:
            raise TanglegramError("the matching is not perfect")
        self.right_of = right_of
        self.left_of = left_of
        self.sigma: frozenset[Edge] = frozenset((a, b) for a, b in right_of.items())
        self.edges: tuple[Edge, ...] = tuple((a, right_of[a]) for a in left.default_order())

    @classmethod
    def from_nested(cls, left: Nested, right: Nested, sigma: Iterable[Edge]) -> Tanglegram:
        return cls(RootedBinaryTree.from_nested(left), RootedBinaryTree.from_nested(right), sigma)

    @property
    def size(self) -> int:
        return len(self.sigma)

    def mirror(self) -> Tanglegram:
        """Swap the roles of the two trees."""
        return Tanglegram(self.right, self.left, [(b, a) for a, b in self.sigma])

    def check_edges(self, edges: Iterable[Edge]) -> frozenset[Edge]:
        out = frozenset(tuple(e) for e in edges)
        bad = out - self.sigma
        if bad:
            raise TanglegramError(f"not matching edges of this tanglegram: {sorted(bad)}")
        return out

    def __repr__(self) -> str:
        pairs = ",".join(f"{a}-{b}" for a, b in self.edges)
        return f"Tanglegram({self.left.to_nested()!r}, {self.right.to_nested()!r}, {pairs})"


# -- induced binary subtrees and scars ---------------------------------------


@dataclass(frozen=True)
class InducedSubtree:
    """``T[S]`` together with the Steiner tree it was contracted from.

    ``vertex_map`` sends contracted node ids to host node ids.  ``rep_paths``
    maps each contracted edge (by its lower endpoint, a contracted id) to the
    host path from the upper to the lower endpoint; the interior nodes of that
    path are exactly the suppressed degree-2 Steiner nodes.
    """

    host: RootedBinaryTree
    selected: frozenset[str]
    steiner: frozenset[int]
    contracted: RootedBinaryTree
    vertex_map: dict[int, int]
    rep_paths: dict[int, tuple[int, ...]]

    def host_node(self, v: int) -> int:
        return self.vertex_map[v]

    def kept(self) -> frozenset[int]:
        return frozenset(self.vertex_map.values())

    def contracted_edge_below(self, host_node: int) -> int:
        """Host id of the lower endpoint of the contracted edge whose
        representative path contains ``host_node``."""
        if host_node not in self.steiner:
            raise TanglegramError(f"host node {host_node} is not in the Steiner tree")
        kept = self.kept()
        v = host_node
        children = self.host.children
        while v not in kept or v == self.host.root:
            (v,) = [c for c in children[v] if c in self.steiner]
        return v

    def attach_point(self, label: str) -> int:
        """First Steiner node on the path from leaf ``label`` to the root."""
        if label in self.selected:
            raise TanglegramError(f"{label!r} is one of the selected leaves")
        v = self.host.node_of(label)
        while v not in self.steiner:
            v = self.host.parent[v]
        return v

    def is_root_edge(self, host_lower: int) -> bool:
        return host_lower == self.vertex_map[self.contracted.top]


def induce_subtree(tree: RootedBinaryTree, selected: Iterable[str]) -> InducedSubtree:
    """Contract the union of root-to-leaf paths of ``selected`` into ``T[S]``."""
    S = frozenset(selected)
    if not S:
        raise TanglegramError("cannot induce a subtree on an empty leaf set")
    unknown = S - tree.leaf_labels
    if unknown:
        raise TanglegramError(f"not leaves of the tree: {sorted(unknown)}")

    steiner: set[int] = set()
    for lab in S:
        v = tree.node_of(lab)
        while v != -1 and v not in steiner:
            steiner.add(v)
            v = tree.parent[v]

    hosts: list[int] = [tree.root]
    paths: list[tuple[int, ...]] = [()]

    def build(upper: int, start: int) -> Nested:
        path = [upper, start]
        v = start
        while True:
            inside = [c for c in tree.children[v] if c in steiner]
            if len(inside) != 1:
                break
            v = inside[0]
            path.append(v)
        hosts.append(v)
        paths.append(tuple(path))
        if not inside:
            return tree.labels[v]
        return (build(v, inside[0]), build(v, inside[1]))

    nested = build(tree.root, tree.top)
    contracted = RootedBinaryTree.from_nested(nested)
    vertex_map = dict(enumerate(hosts))
    rep_paths = {i: paths[i] for i in range(1, len(hosts))}
    return InducedSubtree(tree, S, frozenset(steiner), contracted, vertex_map, rep_paths)


def _sides(tg: Tanglegram, Z: Iterable[Edge]) -> tuple[frozenset[Edge], InducedSubtree, InducedSubtree]:
    Zs = tg.check_edges(Z)
    if not Zs:
        raise TanglegramError("the edge subset must be nonempty")
    left = induce_subtree(tg.left, (a for a, _ in Zs))
    right = induce_subtree(tg.right, (b for _, b in Zs))
    return Zs, left, right


def induce_subtanglegram(tg: Tanglegram, Z: Iterable[Edge]) -> Tanglegram:
    """``T[Z]``: induced subtrees on the endpoints of ``Z`` joined by ``Z``."""
    Zs, left, right = _sides(tg, Z)
    return Tanglegram(left.contracted, right.contracted, Zs)


@dataclass(frozen=True)
class ScarRecord:
    """Where an edge outside ``Z`` leaves its marks on ``T[Z]``.

    ``left_scar``/``right_scar`` name edges of the induced trees by the host
    node id of their lower endpoint.
    """

    edge: Edge
    left_scar: int
    right_scar: int
    left_outside: bool
    right_outside: bool
    left_attach: int
    right_attach: int


def _scar(side: InducedSubtree, label: str) -> tuple[int, int, bool]:
    attach = side.attach_point(label)
    lower = side.contracted_edge_below(attach)
    return lower, attach, side.is_root_edge(lower)


def scars(tg: Tanglegram, Z: Iterable[Edge]) -> dict[Edge, ScarRecord]:
    """Scar records of every edge of ``sigma - Z`` on ``T[Z]``."""
    Zs, left, right = _sides(tg, Z)
    out = {}
    for m in tg.edges:
        if m in Zs:
            continue
        lo, la, lout = _scar(left, m[0])
        ro, ra, rout = _scar(right, m[1])
        out[m] = ScarRecord(m, lo, ro, lout, rout, la, ra)
    return out


def scar_of(tg: Tanglegram, Z: Iterable[Edge], m: Edge) -> ScarRecord:
    Zs = tg.check_edges(Z)
    m = tuple(m)
    if m in Zs:
        raise TanglegramError(f"edge {m} belongs to the subset itself")
    tg.check_edges([m])
    return scars(tg, Zs)[m]


# -- tanglegram isomorphism ---------------------------------------------------


def _code(i: int) -> str:
    return f"{i:03d}"


def _shape_in_order(tree: RootedBinaryTree, order: Sequence[str]) -> str:
    pos = {lab: i for i, lab in enumerate(order)}

    def rec(v: int) -> tuple[str, int]:
        cs = tree.children[v]
        if not cs:
            return "*", pos[tree.labels[v]]
        (sa, ka), (sb, kb) = rec(cs[0]), rec(cs[1])
        if kb < ka:
            sa, sb = sb, sa
        return f"({sa},{sb})", min(ka, kb)

    return rec(tree.top)[0]


def _min_coded(tree: RootedBinaryTree, code: dict[str, str], v: int | None = None) -> str:
    if v is None:
        v = tree.top
    cs = tree.children[v]
    if not cs:
        return code[tree.labels[v]]
    a, b = sorted(_min_coded(tree, code, c) for c in cs)
    return f"({a},{b})"


def _reps(tg: Tanglegram) -> Iterator[tuple[tuple[str, str], tuple[str, ...]]]:
    for order in tg.left.orders():
        code = {tg.right_of[lab]: _code(i) for i, lab in enumerate(order)}
        yield (_shape_in_order(tg.left, order), _min_coded(tg.right, code)), order


def canonical_form(tg: Tanglegram) -> tuple[str, str]:
    """Minimum representation over all consistent left orders; exponential,
    meant for small tanglegrams."""
    return min(rep for rep, _ in _reps(tg))


def tanglegram_isomorphisms(a: Tanglegram, b: Tanglegram) -> list[dict[Edge, Edge]]:
    """All tanglegram isomorphisms from ``a`` to ``b`` as maps on matching edges."""
    if a.size != b.size or a.left.canonical() != b.left.canonical() or a.right.canonical() != b.right.canonical():
        return []
    target, b_order = min(_reps(b))
    found: list[dict[Edge, Edge]] = []
    seen: set[tuple[Edge, ...]] = set()
    for rep, order in _reps(a):
        if rep != target:
            continue
        mapping = {(x, a.right_of[x]): (y, b.right_of[y]) for x, y in zip(order, b_order)}
        key = tuple(sorted(mapping.items()))
        if key not in seen:
            seen.add(key)
            found.append(mapping)
    return found


def tanglegram_isomorphic(a: Tanglegram, b: Tanglegram) -> dict[Edge, Edge] | None:
    """A root- and matching-preserving isomorphism ``a -> b``, or ``None``."""
    if a.size != b.size or a.left.canonical() != b.left.canonical() or a.right.canonical() != b.right.canonical():
        return None
    ca, oa = min(_reps(a))
    cb, ob = min(_reps(b))
    if ca != cb:
        return None
    return {(x, a.right_of[x]): (y, b.right_of[y]) for x, y in zip(oa, ob)}

