"""Cross-responsible sets, their standard labelings, scars and safe pairs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import networkx as nx

from .errors import TanglegramError
from .layout import exact_crt
from .model import (
    Edge,
    RootedBinaryTree,
    Tanglegram,
    induce_subtanglegram,
    meet,
    meet_leaves,
    scars,
)

K1 = "K1"
K2 = "K2"

#: Scar types an outside edge may have on a unique K2 copy.
K2_ALLOWED_SCAR_TYPES = frozenset(
    {
        ("a1", "a2"),
        ("a1", "b2"),
        ("b1", "a2"),
        ("a1", "c2"),
        ("c1", "a2"),
        ("b1", "c2"),
        ("c1", "b2"),
        ("d1", "f2"),
        ("f1", "d2"),
    }
)


class TreeEdge(NamedTuple):
    """An edge of the left (``"L"``) or right (``"R"``) host tree, named by
    its lower endpoint."""

    side: str
    node: int


@dataclass(frozen=True)
class CrossResponsibleSet:
    """A 4-set of matching edges inducing K1 or K2, with standard names.

    ``names`` maps each standard label to a matching edge (K2: ``u1 u2 x y``;
    K1: ``e1..e4``) or to a ``TreeEdge`` of the copy (K2: ``a1..g2``; K1:
    ``f1..f8`` for leaf edges, ``r1``/``r2`` for the root edges and
    ``x1..x4`` for the edges above the cherry parents).  Tree edges are named
    by the host node at the lower end of the contracted edge.
    """

    edges: frozenset[Edge]
    kind: str
    names: dict[str, object] = field(compare=False)

    def __getitem__(self, label: str):
        return self.names[label]

    def label_of(self, element) -> str:
        for k, v in self.names.items():
            if v == element:
                return k
        raise KeyError(element)


@dataclass(frozen=True)
class ScarType:
    left: str
    right: str

    def as_tuple(self) -> tuple[str, str]:
        return (self.left, self.right)


# -- quartet classification -----------------------------------------------------


class _MeetTable:
    """Depths of pairwise meets of leaves, for fast quartet shapes."""

    def __init__(self, tree: RootedBinaryTree):
        self.tree = tree
        self._cache: dict[tuple[str, str], int] = {}

    def depth(self, a: str, b: str) -> int:
        key = (a, b) if a < b else (b, a)
        d = self._cache.get(key)
        if d is None:
            d = self.tree.depth[meet_leaves(self.tree, a, b)]
            self._cache[key] = d
        return d


def _quartet_shape(table: _MeetTable, leaves: tuple[str, str, str, str]):
    """Topology of the tree induced on four leaves, over local indices 0..3.

    Returns ``("B", pairing)`` for two cherries or ``("C", outer, second,
    cherry)`` for a caterpillar.
    """
    best = None
    for i, j in itertools.combinations(range(4), 2):
        d = table.depth(leaves[i], leaves[j])
        if best is None or d > best[0]:
            best = (d, i, j)
    _, i, j = best
    k, l = (t for t in range(4) if t not in (i, j))
    top = table.depth(leaves[i], leaves[k])
    if table.depth(leaves[k], leaves[l]) > top:
        return ("B", frozenset((frozenset((i, j)), frozenset((k, l)))))
    # caterpillar: the outer leaf meets the cherry at the quartet's top
    if table.depth(leaves[i], leaves[k]) <= table.depth(leaves[i], leaves[l]):
        outer, second = k, l
    else:
        outer, second = l, k
    return ("C", outer, second, frozenset((i, j)))


def _nested_from_shape(shape, names: tuple[str, ...]):
    if shape[0] == "B":
        (p, q) = sorted(sorted(pair) for pair in shape[1])
        return ((names[p[0]], names[p[1]]), (names[q[0]], names[q[1]]))
    _, outer, second, cherry = shape
    c = sorted(cherry)
    return (names[outer], (names[second], (names[c[0]], names[c[1]])))


@lru_cache(maxsize=None)
def _quartet_kind(left_shape, right_shape) -> str | None:
    """K1/K2 if the quartet has crossing number 1, else None."""
    if left_shape[0] != right_shape[0]:
        return None
    ls = tuple(f"a{i}" for i in range(4))
    rs = tuple(f"b{i}" for i in range(4))
    tg = Tanglegram.from_nested(
        _nested_from_shape(left_shape, ls),
        _nested_from_shape(right_shape, rs),
        list(zip(ls, rs)),
    )
    if exact_crt(tg).value != 1:
        return None
    return K1 if left_shape[0] == "B" else K2


def _label_k2(tg: Tanglegram, quartet: tuple[Edge, ...], lshape, rshape) -> dict[str, object]:
    _, outer_l, second_l, _ = lshape
    _, outer_r, second_r, _ = rshape
    if second_l != second_r:
        raise AssertionError("K2 copy without a shared middle edge")
    u2, u1, x = quartet[outer_l], quartet[outer_r], quartet[second_l]
    (y,) = [e for e in quartet if e not in (u1, u2, x)]
    L, R = tg.left, tg.right
    lnode = lambda e: L.node_of(e[0])  # noqa: E731
    rnode = lambda e: R.node_of(e[1])  # noqa: E731
    names: dict[str, object] = {"u1": u1, "u2": u2, "x": x, "y": y}
    names.update(
        a1=TreeEdge("L", meet(L, lnode(u2), lnode(x))),
        b1=TreeEdge("L", meet(L, lnode(x), lnode(y))),
        c1=TreeEdge("L", lnode(u2)),
        d1=TreeEdge("L", lnode(x)),
        e1=TreeEdge("L", meet(L, lnode(y), lnode(u1))),
        f1=TreeEdge("L", lnode(y)),
        g1=TreeEdge("L", lnode(u1)),
        a2=TreeEdge("R", meet(R, rnode(u1), rnode(x))),
        b2=TreeEdge("R", meet(R, rnode(x), rnode(y))),
        c2=TreeEdge("R", rnode(u1)),
        d2=TreeEdge("R", rnode(x)),
        e2=TreeEdge("R", meet(R, rnode(y), rnode(u2))),
        f2=TreeEdge("R", rnode(y)),
        g2=TreeEdge("R", rnode(u2)),
    )
    return names


def _label_k1(tg: Tanglegram, quartet: tuple[Edge, ...], lshape, rshape) -> dict[str, object]:
    lpairs = [tuple(sorted(p)) for p in lshape[1]]
    rpairs = [tuple(sorted(p)) for p in rshape[1]]

    def mate(pairs, i):
        for p in pairs:
            if i in p:
                return p[0] if p[1] == i else p[1]
        raise AssertionError

    candidates = []
    for i in range(4):
        j = mate(lpairs, i)
        k = next(t for t in range(4) if t not in (i, j, mate(rpairs, i)))
        (m,) = [t for t in range(4) if t not in (i, j, k)]
        candidates.append(tuple(quartet[t] for t in (i, j, k, m)))
    e1, e2, e3, e4 = min(candidates)
    L, R = tg.left, tg.right
    lam = [L.node_of(e[0]) for e in (e1, e2, e3, e4)] + [R.node_of(e[1]) for e in (e1, e2, e3, e4)]
    names: dict[str, object] = {"e1": e1, "e2": e2, "e3": e3, "e4": e4}
    for i in range(8):
        names[f"f{i + 1}"] = TreeEdge("L" if i < 4 else "R", lam[i])
    # cherry parents: x1 = meet(l1, l2), x2 = meet(l3, l4), x3 = meet(l5, l8), x4 = meet(l6, l7)
    names["x1"] = TreeEdge("L", meet(L, lam[0], lam[1]))
    names["x2"] = TreeEdge("L", meet(L, lam[2], lam[3]))
    names["x3"] = TreeEdge("R", meet(R, lam[4], lam[7]))
    names["x4"] = TreeEdge("R", meet(R, lam[5], lam[6]))
    names["r1"] = TreeEdge("L", meet(L, lam[0], lam[2]))
    names["r2"] = TreeEdge("R", meet(R, lam[4], lam[5]))
    return names


def _classify(tg: Tanglegram, quartet: tuple[Edge, ...], lt: _MeetTable, rt: _MeetTable):
    lshape = _quartet_shape(lt, tuple(e[0] for e in quartet))
    rshape = _quartet_shape(rt, tuple(e[1] for e in quartet))
    return _quartet_kind(lshape, rshape), lshape, rshape


def cross_responsible_sets(tg: Tanglegram) -> list[CrossResponsibleSet]:
    """Every 4-subset of the matching inducing K1 or K2, in combination order."""
    if tg.size < 4:
        return []
    lt, rt = _MeetTable(tg.left), _MeetTable(tg.right)
    out = []
    for quartet in itertools.combinations(tg.edges, 4):
        kind, lshape, rshape = _classify(tg, quartet, lt, rt)
        if kind is None:
            continue
        label = _label_k1 if kind == K1 else _label_k2
        out.append(CrossResponsibleSet(frozenset(quartet), kind, label(tg, quartet, lshape, rshape)))
    return out


def count_cross_responsible(tg: Tanglegram, stop_after: int | None = None) -> int:
    """Size of the collection of cross-responsible sets, optionally capped."""
    if tg.size < 4:
        return 0
    lt, rt = _MeetTable(tg.left), _MeetTable(tg.right)
    count = 0
    for quartet in itertools.combinations(tg.edges, 4):
        if _classify(tg, quartet, lt, rt)[0] is not None:
            count += 1
            if stop_after is not None and count >= stop_after:
                break
    return count


def classify_quartet(tg: Tanglegram, quartet) -> str | None:
    """Kind of the subtanglegram induced by four matching edges, or None."""
    q = tuple(sorted(tg.check_edges(quartet), key=tg.edges.index))
    if len(q) != 4:
        raise TanglegramError("a quartet needs four distinct matching edges")
    return _classify(tg, q, _MeetTable(tg.left), _MeetTable(tg.right))[0]


# -- scars against the standard labeling -------------------------------------------


def scar_types(tg: Tanglegram, X: CrossResponsibleSet) -> dict[Edge, ScarType]:
    """Scar type of every edge outside ``X``."""
    inverse = {v: k for k, v in X.names.items() if isinstance(v, TreeEdge)}
    out = {}
    for m, rec in scars(tg, X.edges).items():
        out[m] = ScarType(inverse[TreeEdge("L", rec.left_scar)], inverse[TreeEdge("R", rec.right_scar)])
    return out


def scar_type(tg: Tanglegram, X: CrossResponsibleSet, m: Edge) -> ScarType:
    m = tuple(m)
    if m in X.edges:
        raise TanglegramError(f"edge {m} belongs to the cross-responsible set")
    tg.check_edges([m])
    return scar_types(tg, X)[m]


# -- safe pairs ------------------------------------------------------------------------


def _cherry(tree: RootedBinaryTree, a: str, b: str) -> bool:
    return tree.parent[tree.node_of(a)] == tree.parent[tree.node_of(b)]


def is_safe_pair(tg: Tanglegram, e: Edge, f: Edge) -> bool:
    """Whether the two edges' leaves form a cherry in at least one tree."""
    e, f = tuple(e), tuple(f)
    tg.check_edges([e, f])
    if e == f:
        raise TanglegramError("a safe pair needs two distinct edges")
    return _cherry(tg.left, e[0], f[0]) or _cherry(tg.right, e[1], f[1])


def unsafe_pairs(tg: Tanglegram) -> list[tuple[Edge, Edge]]:
    return [(e, f) for e, f in itertools.combinations(tg.edges, 2) if not is_safe_pair(tg, e, f)]


# -- associated graph ----------------------------------------------------------------------


def associated_graph(tg: Tanglegram) -> nx.Graph:
    """The tanglegram as a graph plus one edge joining the two roots.

    Vertices are ``("L", node)`` and ``("R", node)``.
    """
    g = nx.Graph()
    for side, tree in (("L", tg.left), ("R", tg.right)):
        g.add_nodes_from((side, v) for v in range(tree.n_nodes))
        g.add_edges_from(((side, tree.parent[v]), (side, v)) for v in tree.edges())
    for a, b in tg.sigma:
        g.add_edge(("L", tg.left.node_of(a)), ("R", tg.right.node_of(b)))
    g.add_edge(("L", tg.left.root), ("R", tg.right.root))
    return g


def is_planar_graph(g: nx.Graph) -> bool:
    planar, _ = nx.check_planarity(g)
    return planar


# -- structural diagnostics ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    check: str
    edge: Edge | None
    detail: str


ROOT_EDGES = {"r1", "r2"}
K1_LEAF_EDGES = {f"f{i}" for i in range(1, 9)}


def validate_unique(tg: Tanglegram, X: CrossResponsibleSet) -> list[Violation]:
    """Check the scar structure forced when ``X`` is the only cross-responsible set.

    An empty list means every outside edge behaves as required.  Any entry
    means either ``X`` is not unique or something upstream is broken.
    """
    types = scar_types(tg, X)
    out: list[Violation] = []
    if X.kind == K1:
        for m, st in types.items():
            if st.left not in ROOT_EDGES and st.right not in ROOT_EDGES:
                out.append(Violation("K1_OUTSIDE_SCAR", m, f"no scar on a root edge: {st.as_tuple()}"))
            if st.left in K1_LEAF_EDGES or st.right in K1_LEAF_EDGES:
                out.append(Violation("K1_NO_LEAF_EDGE_SCAR", m, f"scar on a leaf edge: {st.as_tuple()}"))
        return out

    m1, m2 = [], []
    for m, st in types.items():
        if st.as_tuple() not in K2_ALLOWED_SCAR_TYPES:
            out.append(Violation("K2_SCAR_TYPE", m, f"scar type {st.as_tuple()} not allowed"))
        for lab in (st.left, st.right):
            if lab in ("e1", "e2", "g1", "g2"):
                out.append(Violation("K2_CLEAN_EDGES", m, f"scar on {lab}"))
        for j in (1, 2):
            on_d = f"d{j}" in (st.left, st.right)
            on_f = f"f{3 - j}" in (st.left, st.right)
            if on_d != on_f:
                out.append(Violation("K2_D_F_PAIRING", m, f"d{j}/f{3 - j} scars unpaired: {st.as_tuple()}"))
        if st.left == "d1":
            m1.append(m)
        if st.right == "d2":
            m2.append(m)
    if m1 and m2:
        out.append(Violation("K2_ONE_D_SIDE", None, f"edges scar both d1 {m1} and d2 {m2}"))
    return out


def definitional_sets(tg: Tanglegram) -> list[tuple[frozenset[Edge], str]]:
    """Slow reference enumeration: isomorphism test of every 4-subset against
    the two obstruction fixtures."""
    from .gen import build_family
    from .model import tanglegram_isomorphic

    k1, k2 = build_family("K1"), build_family("K2")
    out = []
    for quartet in itertools.combinations(tg.edges, 4):
        sub = induce_subtanglegram(tg, quartet)
        if tanglegram_isomorphic(sub, k1) is not None:
            out.append((frozenset(quartet), K1))
        elif tanglegram_isomorphic(sub, k2) is not None:
            out.append((frozenset(quartet), K2))
    return out
