"""Layouts of tanglegrams and exact tangle crossing numbers.

Both leaf orders are stored top-to-bottom as a viewer sees them, so two
matching edges cross exactly when their left endpoints and their right
endpoints compare in opposite directions.
"""

from __future__ import annotations

import bisect
import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BudgetExhausted, RefusalError, TanglegramError
from .model import Edge, RootedBinaryTree, Tanglegram, meet

DEFAULT_CAP = 18
DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class LayoutRep:
    """A layout up to equivalence: one leaf order per tree."""

    left_order: tuple[str, ...]
    right_order: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "left_order", tuple(self.left_order))
        object.__setattr__(self, "right_order", tuple(self.right_order))

    def mirrored(self) -> LayoutRep:
        """Reflect the drawing top-to-bottom."""
        return LayoutRep(self.left_order[::-1], self.right_order[::-1])

    def swapped(self) -> LayoutRep:
        """Exchange the two trees' orders (matches ``Tanglegram.mirror``)."""
        return LayoutRep(self.right_order, self.left_order)


@dataclass(frozen=True)
class CrtResult:
    value: int
    witness: LayoutRep
    explored: int
    optimal: bool


def default_budget() -> int:
    env = os.environ.get("TGL_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# -- consistency and counting -------------------------------------------------


def _check_permutation(labels: frozenset[str], order: Sequence[str], what: str) -> None:
    if len(order) != len(labels) or set(order) != labels:
        raise TanglegramError(f"{what} is not a permutation of the tree's leaves")


def is_consistent(tree: RootedBinaryTree, order: Sequence[str]) -> bool:
    """True iff every branching node's leaves occupy a contiguous block."""
    _check_permutation(tree.leaf_labels, order, "order")
    pos = {lab: i for i, lab in enumerate(order)}
    lo = [0] * tree.n_nodes
    hi = [0] * tree.n_nodes
    count = [0] * tree.n_nodes
    # preorder ids: reversed range visits children before parents
    for v in range(tree.n_nodes - 1, 0, -1):
        cs = tree.children[v]
        if not cs:
            lo[v] = hi[v] = pos[tree.labels[v]]
            count[v] = 1
            continue
        a, b = cs
        lo[v] = min(lo[a], lo[b])
        hi[v] = max(hi[a], hi[b])
        count[v] = count[a] + count[b]
        if hi[v] - lo[v] + 1 != count[v]:
            return False
    return True


def check_rep(tg: Tanglegram, rep: LayoutRep, *, consistent: bool = False) -> None:
    _check_permutation(tg.left.leaf_labels, rep.left_order, "left order")
    _check_permutation(tg.right.leaf_labels, rep.right_order, "right order")
    if consistent:
        if not is_consistent(tg.left, rep.left_order):
            raise TanglegramError("left order is not consistent with the left tree")
        if not is_consistent(tg.right, rep.right_order):
            raise TanglegramError("right order is not consistent with the right tree")


def _inversions(seq: list[int]) -> int:
    """Number of pairs i < j with seq[i] > seq[j] (merge sort)."""
    if len(seq) < 2:
        return 0
    width = 1
    buf = list(seq)
    total = 0
    n = len(buf)
    while width < n:
        out = []
        for start in range(0, n, 2 * width):
            a = buf[start : start + width]
            b = buf[start + width : start + 2 * width]
            i = j = 0
            while i < len(a) and j < len(b):
                if b[j] < a[i]:
                    out.append(b[j])
                    total += len(a) - i
                    j += 1
                else:
                    out.append(a[i])
                    i += 1
            out.extend(a[i:])
            out.extend(b[j:])
        buf = out
        width *= 2
    return total


def crossing_count(tg: Tanglegram, rep: LayoutRep) -> int:
    """Number of unordered pairs of matching edges that cross."""
    check_rep(tg, rep)
    pos_r = {lab: i for i, lab in enumerate(rep.right_order)}
    return _inversions([pos_r[tg.right_of[lab]] for lab in rep.left_order])


def crossing_pairs(tg: Tanglegram, rep: LayoutRep) -> list[tuple[Edge, Edge]]:
    """All crossing pairs by direct pairwise comparison, in left-order order."""
    check_rep(tg, rep)
    pos_l = {lab: i for i, lab in enumerate(rep.left_order)}
    pos_r = {lab: i for i, lab in enumerate(rep.right_order)}
    edges = sorted(tg.sigma, key=lambda e: pos_l[e[0]])
    out = []
    for e, f in itertools.combinations(edges, 2):
        if (pos_l[e[0]] - pos_l[f[0]]) * (pos_r[e[1]] - pos_r[f[1]]) < 0:
            out.append((e, f))
    return out


def restrict_layout(tg: Tanglegram, rep: LayoutRep, Z: Iterable[Edge]) -> LayoutRep:
    """The sublayout a layout induces on ``T[Z]``."""
    Zs = tg.check_edges(Z)
    check_rep(tg, rep)
    left = {a for a, _ in Zs}
    right = {b for _, b in Zs}
    return LayoutRep(
        tuple(x for x in rep.left_order if x in left),
        tuple(x for x in rep.right_order if x in right),
    )


# -- one-sided optimisation ---------------------------------------------------


def _count_greater(pa: list[int], pb: list[int]) -> int:
    """#{(a, b): a in pa, b in pb, a > b}; both lists sorted."""
    total = 0
    na = len(pa)
    for b in pb:
        total += na - bisect.bisect_right(pa, b)
    return total


def _one_side(tree: RootedBinaryTree, pos: dict[str, int]) -> tuple[tuple[str, ...], int]:
    """Best order of ``tree`` when each leaf's partner sits at ``pos[leaf]``.

    The relative order of two edges on the free side is decided only at
    their meet, so every branching node is chosen independently.
    """
    n = tree.n_nodes
    orders: list[tuple[str, ...]] = [()] * n
    sorted_pos: list[list[int]] = [[]] * n
    total = 0
    for v in range(n - 1, 0, -1):
        cs = tree.children[v]
        if not cs:
            lab = tree.labels[v]
            orders[v] = (lab,)
            sorted_pos[v] = [pos[lab]]
            continue
        a, b = cs
        pa, pb = sorted_pos[a], sorted_pos[b]
        ab = _count_greater(pa, pb)  # crossings with a's block above b's
        ba = len(pa) * len(pb) - ab
        if ab <= ba:
            orders[v] = orders[a] + orders[b]
            total += ab
        else:
            orders[v] = orders[b] + orders[a]
            total += ba
        sorted_pos[v] = sorted(pa + pb)
        orders[a] = orders[b] = ()
        sorted_pos[a] = sorted_pos[b] = []
    return orders[tree.top], total


def optimize_one_side(tg: Tanglegram, fixed_left: Sequence[str]) -> tuple[tuple[str, ...], int]:
    """Right order minimising crossings against a fixed consistent left order."""
    if not is_consistent(tg.left, fixed_left):
        raise TanglegramError("fixed left order is not consistent with the left tree")
    pos = {tg.right_of[lab]: i for i, lab in enumerate(fixed_left)}
    return _one_side(tg.right, pos)


# -- exact search -------------------------------------------------------------


def _depth_sum(tree: RootedBinaryTree) -> int:
    return sum(tree.depth[tree.node_of(lab)] for lab in tree.leaf_labels)


class _Search:
    """Branch and bound over orientations of one tree, DP on the other.

    A pair of edges has its relative order on the enumerated tree fixed by
    the flip at its meet there, and on the other tree by the choice at its
    meet there.  For every branching node ``v`` of the DP tree we track how
    many already-decided pairs would cross under each child order; the sum of
    the per-node minima is a lower bound that is exact once all flips are set.
    """

    def __init__(self, tg: Tanglegram):
        self.tg = tg
        self.swap = _depth_sum(tg.right) < _depth_sum(tg.left)
        if self.swap:
            enum, dp = tg.right, tg.left
            partner = tg.left_of
        else:
            enum, dp = tg.left, tg.right
            partner = tg.right_of
        self.enum, self.dp, self.partner = enum, dp, partner

        self.nodes = enum.internal_nodes()  # preorder, top first
        dp_internal = dp.internal_nodes()
        dp_index = {v: i for i, v in enumerate(dp_internal)}
        self.n_dp = len(dp_internal)

        first_child_leaves = {v: dp.leaves_below(dp.children[v][0]) for v in dp_internal}
        contrib: list[list[tuple[int, int, int]]] = []
        for u in self.nodes:
            c1, c2 = enum.children[u]
            acc: dict[int, list[int]] = {}
            for a in enum.leaves_below(c1):
                pa = dp.node_of(partner[a])
                for b in enum.leaves_below(c2):
                    pb = dp.node_of(partner[b])
                    v = meet(dp, pa, pb)
                    slot = acc.setdefault(dp_index[v], [0, 0])
                    # with u unflipped, a is above b on the enumerated side
                    if partner[a] in first_child_leaves[v]:
                        slot[1] += 1  # crosses only if v puts its second block first
                    else:
                        slot[0] += 1  # crosses if v keeps its natural order
            contrib.append([(v, ab, ba) for v, (ab, ba) in sorted(acc.items())])
        self.contrib = contrib

    def order_for(self, bits: Sequence[int]) -> tuple[str, ...]:
        flip = dict(zip(self.nodes, bits))
        tree = self.enum

        def rec(v: int) -> tuple[str, ...]:
            cs = tree.children[v]
            if not cs:
                return (tree.labels[v],)
            a, b = rec(cs[0]), rec(cs[1])
            return b + a if flip.get(v) else a + b

        return rec(tree.top)

    def witness(self, bits: Sequence[int]) -> tuple[LayoutRep, int]:
        enum_order = self.order_for(bits)
        pos = {self.partner[lab]: i for i, lab in enumerate(enum_order)}
        dp_order, value = _one_side(self.dp, pos)
        if self.swap:
            return LayoutRep(dp_order, enum_order), value
        return LayoutRep(enum_order, dp_order), value

    def run(self, budget: int, below: int | None, stop_at: int = 0):
        """Search for orientations with value < ``below``.

        Returns ``(value, bits, explored, complete)``; ``bits`` is ``None``
        when nothing below the bound was found.
        """
        k = len(self.nodes)
        if k == 0:
            _, value = self.witness([])
            if below is not None and value >= below:
                return below, None, 0, True
            return value, [], 0, True
        if below is None:
            bits0 = [0] * k
            _, best = self.witness(bits0)
            best_bits: list[int] | None = bits0
        else:
            best, best_bits = below, None
        if best <= stop_at:
            return best, best_bits, 0, True

        ab = [0] * self.n_dp
        ba = [0] * self.n_dp
        bits = [0] * k
        lb = 0
        explored = 0
        truncated = False
        done = False
        contrib = self.contrib

        def delta(i: int, flip: int) -> int:
            d = 0
            for v, x, y in contrib[i]:
                if flip:
                    x, y = y, x
                d += min(ab[v] + x, ba[v] + y) - min(ab[v], ba[v])
            return d

        def apply(i: int, flip: int, sign: int) -> None:
            for v, x, y in contrib[i]:
                if flip:
                    x, y = y, x
                ab[v] += sign * x
                ba[v] += sign * y

        def dfs(i: int) -> None:
            nonlocal lb, best, best_bits, explored, truncated, done
            explored += 1
            if explored > budget:
                truncated = done = True
                return
            if i == k:
                best = lb
                best_bits = list(bits)
                if best <= stop_at:
                    done = True
                return
            # mirror symmetry: the top node's flip can stay fixed
            flips = (0,) if i == 0 else (0, 1)
            options = sorted((delta(i, f), f) for f in flips)
            for d, f in options:
                if lb + d >= best:
                    continue
                apply(i, f, 1)
                bits[i] = f
                lb += d
                dfs(i + 1)
                lb -= d
                apply(i, f, -1)
                bits[i] = 0
                if done:
                    return

        dfs(0)
        return best, best_bits, explored, not truncated


def exact_crt(tg: Tanglegram, budget: int | None = None, *, cap: int | None = DEFAULT_CAP) -> CrtResult:
    """Minimum crossing number over all layouts, with an optimal witness.

    ``optimal`` is False only when the node budget ran out; the value is then
    the best layout found so far.
    """
    if cap is not None and tg.size > cap:
        raise RefusalError(f"size {tg.size} exceeds the exact-search cap {cap}; pass cap=None to override")
    if budget is None:
        budget = default_budget()
    search = _Search(tg)
    value, bits, explored, complete = search.run(budget, None)
    rep, check = search.witness(bits)
    if check != value or crossing_count(tg, rep) != value:
        raise AssertionError("exact search witness does not reproduce its value")
    return CrtResult(value, rep, explored, complete)


def planar_layout(tg: Tanglegram, budget: int | None = None) -> LayoutRep | None:
    """A crossing-free layout, or ``None`` if the tanglegram has none."""
    if budget is None:
        budget = default_budget()
    search = _Search(tg)
    value, bits, _, complete = search.run(budget, below=1, stop_at=0)
    if bits is None:
        if not complete:
            raise BudgetExhausted("planarity search exhausted its budget")
        return None
    rep, check = search.witness(bits)
    if check != 0 or crossing_count(tg, rep) != 0:
        raise AssertionError("planar search witness has crossings")
    return rep


def brute_force_crt(tg: Tanglegram) -> tuple[int, LayoutRep]:
    """Minimum over the full product of consistent orders, pairwise counting."""
    best: tuple[int, LayoutRep] | None = None
    rights = list(tg.right.orders())
    for lo in tg.left.orders():
        for ro in rights:
            rep = LayoutRep(lo, ro)
            c = len(crossing_pairs(tg, rep))
            if best is None or c < best[0]:
                best = (c, rep)
    assert best is not None
    return best
