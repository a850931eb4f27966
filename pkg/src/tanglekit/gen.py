"""Seeded random tanglegrams, exhaustive small-size enumeration, named families.

Randomness comes from numpy's PCG64 bit generator.  Only its raw 64-bit
output stream is used; bounded integers are drawn by rejection sampling
here, so the sequence of instances for a seed does not depend on numpy's
higher-level sampling routines.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import RefusalError, TanglegramError
from .model import Nested, RootedBinaryTree, Tanglegram

MAX_ENUM_SIZE = 6
FAMILIES = ("K1", "K2", "T1", "T2")

_MASK = (1 << 64) - 1


class Rng:
    """Portable integer source on top of PCG64's raw output."""

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(int(seed) & _MASK)

    def next64(self) -> int:
        return int(self._bits.random_raw())

    def below(self, k: int) -> int:
        """Uniform integer in ``[0, k)``."""
        if k <= 0:
            raise ValueError("k must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = self.next64()
            if x < limit:
                return x % k

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def _random_nested(n: int, labels: list[str], rng: Rng) -> Nested:
    # node 0 is the root stub; each step subdivides a uniformly chosen edge
    parent = [-1, 0]
    children: list[list[int]] = [[1], []]
    label = {1: labels[0]}
    for i in range(1, n):
        v = 1 + rng.below(len(parent) - 1)
        p = parent[v]
        w, leaf = len(parent), len(parent) + 1
        parent += [p, w]
        children += [[v, leaf], []]
        children[p][children[p].index(v)] = w
        parent[v] = w
        label[leaf] = labels[i]

    def nest(v: int) -> Nested:
        if not children[v]:
            return label[v]
        a, b = children[v]
        return (nest(a), nest(b))

    return nest(children[0][0])


def random_tree(n: int, seed: int, prefix: str = "t") -> RootedBinaryTree:
    if n < 1:
        raise TanglegramError("a tree needs at least one leaf")
    rng = Rng(seed)
    return RootedBinaryTree.from_nested(_random_nested(n, [f"{prefix}{i + 1}" for i in range(n)], rng))


def random_tanglegram(n: int, seed: int) -> Tanglegram:
    """Random tanglegram with leaves ``l1..ln`` and ``r1..rn``.

    Each tree grows by attaching leaves to uniformly chosen edges; the
    matching is a uniform permutation.
    """
    if n < 1:
        raise TanglegramError("a tanglegram needs at least one matching edge")
    rng = Rng(seed)
    left = _random_nested(n, [f"l{i + 1}" for i in range(n)], rng)
    right = _random_nested(n, [f"r{i + 1}" for i in range(n)], rng)
    perm = rng.shuffle(list(range(n)))
    sigma = [(f"l{i + 1}", f"r{perm[i] + 1}") for i in range(n)]
    return Tanglegram.from_nested(left, right, sigma)


def seed_stream(seed: int) -> Iterator[int]:
    """Deterministic sequence of child seeds derived from one master seed."""
    rng = Rng(seed)
    while True:
        yield rng.next64()


# -- exhaustive enumeration ----------------------------------------------------


@lru_cache(maxsize=None)
def tree_shapes(n: int) -> tuple[Nested, ...]:
    """All unlabeled rooted binary shapes with ``n`` leaves, leaves written ``*``."""
    if n == 1:
        return ("*",)
    out: list[Nested] = []
    for a in range(1, n // 2 + 1):
        b = n - a
        sa, sb = tree_shapes(a), tree_shapes(b)
        if a == b:
            out.extend((sa[i], sa[j]) for i in range(len(sa)) for j in range(i, len(sa)))
        else:
            out.extend((x, y) for x in sa for y in sb)
    return tuple(out)


def _label_shape(shape: Nested, prefix: str) -> Nested:
    counter = itertools.count(1)

    def rec(s: Nested) -> Nested:
        if s == "*":
            return f"{prefix}{next(counter)}"
        return (rec(s[0]), rec(s[1]))

    return rec(shape)


def enumerate_tanglegrams(n: int) -> Iterator[Tanglegram]:
    """Every (left shape, right shape, matching) triple of size ``n``.

    No isomorphism reduction is applied, so the count is
    ``len(tree_shapes(n)) ** 2 * n!``.
    """
    if n < 1:
        raise TanglegramError("size must be at least 1")
    if n > MAX_ENUM_SIZE:
        raise RefusalError(f"exhaustive enumeration is limited to size {MAX_ENUM_SIZE}")
    lefts = [_label_shape(s, "l") for s in tree_shapes(n)]
    rights = [_label_shape(s, "r") for s in tree_shapes(n)]
    for left in lefts:
        lt = RootedBinaryTree.from_nested(left)
        for right in rights:
            rt = RootedBinaryTree.from_nested(right)
            for perm in itertools.permutations(range(1, n + 1)):
                yield Tanglegram(lt, rt, [(f"l{i + 1}", f"r{p}") for i, p in enumerate(perm)])


def enumerate_up_to(n: int) -> Iterator[Tanglegram]:
    for k in range(1, n + 1):
        yield from enumerate_tanglegrams(k)


# -- named families ------------------------------------------------------------

K1_TEXT = "((l1,l2),(l3,l4));\n((r1,r2),(r3,r4));\nl1-r1,l2-r3,l3-r2,l4-r4\n"
K2_TEXT = "(l1,(l2,(l3,l4)));\n(r1,(r2,(r3,r4)));\nl1-r4,l2-r2,l3-r3,l4-r1\n"


def _caterpillar(labels: list[str]) -> Nested:
    nested: Nested = labels[-1]
    for lab in reversed(labels[:-1]):
        nested = (lab, nested)
    return nested


def planar_block(m: int, tag: str) -> tuple[Nested, Nested, list[tuple[str, str]]]:
    """An ``m``-edge planar piece: caterpillars on both sides, identity matching.

    Drawn with both caterpillars in their default order, no edges cross.
    """
    ls = [f"{tag}l{i + 1}" for i in range(m)]
    rs = [f"{tag}r{i + 1}" for i in range(m)]
    return _caterpillar(ls), _caterpillar(rs), list(zip(ls, rs))


def build_family(name: str, m: int = 1) -> Tanglegram:
    """Named fixtures.

    ``K1`` and ``K2`` are the two one-crossing obstructions.  ``T1`` puts a
    planar ``m``-edge block next to a copy of K1 (size ``m + 4``).  ``T2``
    is K1 with every matching edge replaced by a planar ``m``-edge block, so
    each crossing of K1 becomes ``m * m`` crossings.
    """
    if name == "K1":
        return Tanglegram.from_nested(
            (("l1", "l2"), ("l3", "l4")),
            (("r1", "r2"), ("r3", "r4")),
            [("l1", "r1"), ("l2", "r3"), ("l3", "r2"), ("l4", "r4")],
        )
    if name == "K2":
        return Tanglegram.from_nested(
            ("l1", ("l2", ("l3", "l4"))),
            ("r1", ("r2", ("r3", "r4"))),
            [("l1", "r4"), ("l2", "r2"), ("l3", "r3"), ("l4", "r1")],
        )
    if name not in FAMILIES:
        raise TanglegramError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    if m < 1:
        raise TanglegramError("block size m must be at least 1")
    if name == "T1":
        fl, fr, fs = planar_block(m, "f")
        left = (fl, (("l1", "l2"), ("l3", "l4")))
        right = (fr, (("r1", "r2"), ("r3", "r4")))
        return Tanglegram.from_nested(left, right, fs + [("l1", "r1"), ("l2", "r3"), ("l3", "r2"), ("l4", "r4")])
    # T2: block i on the left is matched to block k1[i] on the right
    wiring = {1: 1, 2: 3, 3: 2, 4: 4}
    lb, rb, sigma = {}, {}, []
    for i, j in wiring.items():
        tag = f"b{i}"
        fl, fr, fs = planar_block(m, tag)
        lb[i] = fl
        rb[j] = _rename_right(fr, tag, f"b{j}")
        sigma += [(a, b.replace(tag, f"b{j}", 1)) for a, b in fs]
    left = ((lb[1], lb[2]), (lb[3], lb[4]))
    right = ((rb[1], rb[2]), (rb[3], rb[4]))
    return Tanglegram.from_nested(left, right, sigma)


def _rename_right(nested: Nested, old: str, new: str) -> Nested:
    if isinstance(nested, str):
        return nested.replace(old, new, 1)
    return (_rename_right(nested[0], old, new), _rename_right(nested[1], old, new))

