"""One-crossing layouts for tanglegrams with a unique cross-responsible set.

All orders are top-to-bottom on both sides, so a planar layout lists the
matched leaves in the same relative order on the left and on the right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .detect import K1, CrossResponsibleSet, cross_responsible_sets, scar_types, validate_unique
from .errors import ConsistencyError, PreconditionError
from .layout import LayoutRep, crossing_pairs, is_consistent, planar_layout
from .model import Edge, RootedBinaryTree, Tanglegram, induce_subtanglegram

CASES = ("K1", "K2-M-empty", "K2-M-on-d1", "K2-M-on-d2")


@dataclass(frozen=True)
class OneCrossCertificate:
    layout: LayoutRep
    crossing_pair: tuple[Edge, Edge]
    case: str
    trace: tuple[str, ...]
    crs: CrossResponsibleSet


# -- order surgery -------------------------------------------------------------


def insert_leaf_order(
    base: Sequence[str],
    new: str | Sequence[str],
    after: str,
    before: str,
    tree: RootedBinaryTree | None = None,
) -> tuple[str, ...]:
    """Insert a leaf, or a run of leaves, between two adjacent entries.

    ``after`` must immediately precede ``before`` in ``base``.  When ``tree``
    is given the result is checked for consistency with it.
    """
    seq = list(base)
    try:
        i = seq.index(after)
    except ValueError:
        raise ValueError(f"{after!r} is not in the order") from None
    if i + 1 >= len(seq) or seq[i + 1] != before:
        raise ValueError(f"{after!r} and {before!r} are not adjacent in that order")
    block = [new] if isinstance(new, str) else list(new)
    out = tuple(seq[: i + 1] + block + seq[i + 1 :])
    if tree is not None and not is_consistent(tree, out):
        raise ConsistencyError("SPLICE", f"inserting {block} between {after} and {before} broke consistency")
    return out


def replace_segment(base: Sequence[str], old: Sequence[str], new: Sequence[str]) -> tuple[str, ...]:
    """Replace the contiguous run ``old`` in ``base`` by ``new``."""
    seq, old = list(base), list(old)
    k = len(old)
    for i in range(len(seq) - k + 1):
        if seq[i : i + k] == old:
            return tuple(seq[:i] + list(new) + seq[i + k :])
    raise ValueError(f"{old} is not a contiguous run of the order")


def _contiguous(order: Sequence[str], run: Sequence[str]) -> bool:
    try:
        replace_segment(order, run, run)
    except ValueError:
        return False
    return True


def _below(order: Sequence[str], a: str, b: str) -> bool:
    """Whether ``a`` is drawn below ``b``."""
    return order.index(a) > order.index(b)


def _planar(tg: Tanglegram, what: str) -> LayoutRep:
    rep = planar_layout(tg)
    if rep is None:
        raise ConsistencyError("PLANAR_SUBLAYOUT", f"{what} is expected to be planar but is not")
    return rep


# -- the two obstruction kinds -------------------------------------------------


def _k1(tg: Tanglegram, X: CrossResponsibleSet, trace: list[str]) -> tuple[LayoutRep, tuple[Edge, Edge]]:
    e1, e2, e3, e4 = (X[k] for k in ("e1", "e2", "e3", "e4"))
    l1, l2, l3, l4 = (e[0] for e in (e1, e2, e3, e4))
    l5, l6, l7, l8 = (e[1] for e in (e1, e2, e3, e4))
    rest = tg.sigma - {e1}
    sub = induce_subtanglegram(tg, rest)
    rep = _planar(sub, "the tanglegram without e1")
    trace.append(f"planar layout of T minus {e1[0]}-{e1[1]}")
    if _below(rep.left_order, l4, l2):
        rep = rep.mirrored()
        trace.append("mirrored so that e2 lies below e4")
    left, right = rep.left_order, rep.right_order
    if not _contiguous(left, (l4, l3, l2)) or not _contiguous(right, (l8, l7, l6)):
        raise ConsistencyError("K1_BLOCKS", "leaves of e2, e3, e4 are not contiguous in the planar sublayout")
    left = insert_leaf_order(left, l1, l3, l2, tg.left)
    right = insert_leaf_order(right, l5, l8, l7, tg.right)
    trace.append(f"left: inserted {l1} between {l3} and {l2}")
    trace.append(f"right: inserted {l5} between {l8} and {l7}")
    return LayoutRep(left, right), (e1, e3)


def _k2_empty(tg: Tanglegram, X: CrossResponsibleSet, trace: list[str]):
    u1, u2, x, y = (X[k] for k in ("u1", "u2", "x", "y"))
    sub = induce_subtanglegram(tg, tg.sigma - {x})
    rep = _planar(sub, "the tanglegram without x")
    trace.append(f"planar layout of T minus {x[0]}-{x[1]}")
    if not _below(rep.left_order, u1[0], u2[0]):
        rep = rep.mirrored()
        trace.append("mirrored so that u1 lies below u2")
    left, right = rep.left_order, rep.right_order
    if not _contiguous(left, (u2[0], y[0], u1[0])) or not _contiguous(right, (u2[1], y[1], u1[1])):
        raise ConsistencyError("K2_BLOCKS", "leaves of u2, y, u1 are not contiguous in the planar sublayout")
    left = insert_leaf_order(left, x[0], u2[0], y[0], tg.left)
    right = insert_leaf_order(right, x[1], y[1], u1[1], tg.right)
    trace.append(f"left: inserted {x[0]} between {u2[0]} and {y[0]}")
    trace.append(f"right: inserted {x[1]} between {y[1]} and {u1[1]}")
    return LayoutRep(left, right), (x, y)


def _k2_on_d1(tg: Tanglegram, X: CrossResponsibleSet, M: list[Edge], trace: list[str]):
    u1, u2, x, y = (X[k] for k in ("u1", "u2", "x", "y"))
    rest = tg.sigma - set(M) - {x}
    prime = _planar(induce_subtanglegram(tg, rest), "the tanglegram without M and x")
    trace.append(f"planar layout D' of T minus x and {len(M)} edge(s) scarring d1")
    if not _below(prime.left_order, u1[0], u2[0]):
        prime = prime.mirrored()
        trace.append("mirrored D' so that u1 lies below u2")
    if not _contiguous(prime.left_order, (u2[0], y[0], u1[0])) or not _contiguous(
        prime.right_order, (u2[1], y[1], u1[1])
    ):
        raise ConsistencyError("K2_BLOCKS", "leaves of u2, y, u1 are not contiguous in D'")

    star = _planar(induce_subtanglegram(tg, {x, y, u1, *M}), "the tanglegram on x, y, u1 and M")
    trace.append("planar layout D* of x, y, u1 and M")
    if not _below(star.left_order, u1[0], x[0]):
        star = star.mirrored()
        trace.append("mirrored D* so that u1 lies below x")
    sl, sr = star.left_order, star.right_order
    if sl[0] != x[0] or sl[-2:] != (y[0], u1[0]) or sr[0] != x[1] or sr[-2:] != (y[1], u1[1]):
        raise ConsistencyError("K2_STAR_SHAPE", f"unexpected shape of D*: {sl} / {sr}")
    k5, k6 = sl[1:-2], sr[1:-2]

    left = insert_leaf_order(prime.left_order, (x[0], *k5), u2[0], y[0], tg.left)
    right = replace_segment(prime.right_order, (u2[1], y[1], u1[1]), (x[1], u2[1], *k6, y[1], u1[1]))
    if not is_consistent(tg.right, right):
        raise ConsistencyError("SPLICE", "right splice broke consistency")
    trace.append(f"left: inserted {[x[0], *k5]} between {u2[0]} and {y[0]}")
    trace.append(f"right: placed {x[1]} above {u2[1]} and {list(k6)} below it")
    return LayoutRep(left, right), (x, u2)


# -- entry point ---------------------------------------------------------------------------


def one_crossing_layout(tg: Tanglegram, *, validate: bool = True) -> OneCrossCertificate:
    """Build a layout with exactly one crossing.

    Requires exactly one cross-responsible set; raises ``PreconditionError``
    with the actual count otherwise.
    """
    sets = cross_responsible_sets(tg)
    if len(sets) != 1:
        raise PreconditionError(len(sets))
    (X,) = sets
    if validate:
        bad = validate_unique(tg, X)
        if bad:
            v = bad[0]
            raise ConsistencyError(v.check, f"{v.detail} (edge {v.edge})")
    trace: list[str] = [f"kind {X.kind} on {sorted(X.edges)}"]

    if X.kind == K1:
        case = "K1"
        rep, pair = _k1(tg, X, trace)
    else:
        types = scar_types(tg, X)
        on_d1 = sorted(m for m, st in types.items() if st.left == "d1")
        on_d2 = sorted(m for m, st in types.items() if st.right == "d2")
        if on_d1 and on_d2:
            raise ConsistencyError("K2_ONE_D_SIDE", "edges scar both d1 and d2")
        if not on_d1 and not on_d2:
            case = "K2-M-empty"
            rep, pair = _k2_empty(tg, X, trace)
        elif on_d1:
            case = "K2-M-on-d1"
            rep, pair = _k2_on_d1(tg, X, on_d1, trace)
        else:
            case = "K2-M-on-d2"
            mirror = tg.mirror()
            (MX,) = cross_responsible_sets(mirror)
            M = sorted((b, a) for a, b in on_d2)
            trace.append("swapped the two trees")
            rep, (p, q) = _k2_on_d1(mirror, MX, M, trace)
            rep = rep.swapped()
            pair = ((p[1], p[0]), (q[1], q[0]))
            trace.append("swapped the trees back")

    if not (is_consistent(tg.left, rep.left_order) and is_consistent(tg.right, rep.right_order)):
        raise ConsistencyError("LAYOUT_CONSISTENT", "constructed orders are not consistent with the trees")
    crossing = crossing_pairs(tg, rep)
    if len(crossing) != 1 or set(crossing[0]) != set(pair):
        raise ConsistencyError("ONE_CROSSING", f"expected only {pair} to cross, found {crossing}")
    return OneCrossCertificate(rep, pair, case, tuple(trace), X)
