"""Lower/upper limit trees, uniqueness preprocessing, and solved-state checks.

The lower (upper) limit tree is the MST when every open interval is priced at
its lower (upper) endpoint plus (minus) an infinitesimal.  Keys are exact
lexicographic pairs (base, eps) with eps in {-1, 0, +1}, so the perturbation
never needs a concrete epsilon.  Kruskal with (key, edge id) ordering makes
every tree deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

from .graphcore import Interval, PreconditionViolated, QueryRun, UnknownEdge


class WrongSide(ValueError):
    """cycle_of called on a tree edge, or cut_of on a non-tree edge."""


class LimitValue(NamedTuple):
    """Exact weight plus infinitesimal offset; tuple order is the total order."""

    base: Fraction
    eps: int


def lower_key(interval: Interval) -> LimitValue:
    base, eps = interval.lower_key()
    return LimitValue(base, eps)


def upper_key(interval: Interval) -> LimitValue:
    base, eps = interval.upper_key()
    return LimitValue(base, eps)


def _kruskal(run: QueryRun, key_fn: Callable[[Interval], LimitValue]) -> set[int]:
    ids = run.present_ids()
    order = sorted(ids, key=lambda e: (key_fn(run.interval(e)), e))
    vertices = {v for eid in ids for v in run.endpoints(eid)}
    parent = {v: v for v in vertices}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree: set[int] = set()
    for eid in order:
        a, b = run.endpoints(eid)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree.add(eid)
    if vertices and len(tree) != len(vertices) - 1:
        raise PreconditionViolated("graph is disconnected; no spanning tree exists")
    return tree


def lower_limit_tree(run: QueryRun) -> set[int]:
    return _kruskal(run, lower_key)


def upper_limit_tree(run: QueryRun) -> set[int]:
    return _kruskal(run, upper_key)


def _tree_adjacency(run: QueryRun, tree: set[int]) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {}
    for eid in tree:
        a, b = run.endpoints(eid)
        adj.setdefault(a, []).append((b, eid))
        adj.setdefault(b, []).append((a, eid))
    return adj

def _tree_path(adj, start: int, goal: int) -> list[int]:
    """Edge ids along the unique tree path from start to goal."""
    if start == goal:
        return []
    prev: dict[int, tuple[int, int]] = {start: (-1, -1)}
    stack = [start]
    while stack:
        node = stack.pop()
        if node == goal:
            break
        for nbr, eid in adj.get(node, ()):
            if nbr not in prev:
                prev[nbr] = (node, eid)
                stack.append(nbr)
    path = []
    node = goal
    while node != start:
        node, eid = prev[node]
        path.append(eid)
    return path


def tree_cycle(run: QueryRun, tree: set[int], eid: int) -> list[int]:
    """Edges of the unique cycle closed by non-tree edge eid, including eid."""
    a, b = run.endpoints(eid)
    return [eid] + _tree_path(_tree_adjacency(run, tree), a, b)


def tree_cut(run: QueryRun, tree: set[int], eid: int) -> list[int]:
    """Edges crossing the cut split off by removing tree edge eid, including eid."""
    adj = _tree_adjacency(run, tree)
    a, _ = run.endpoints(eid)
    side = {a}
    stack = [a]
    while stack:
        node = stack.pop()
        for nbr, other in adj.get(node, ()):
            if other != eid and nbr not in side:
                side.add(nbr)
                stack.append(nbr)
    cut = []
    for other in run.present_ids():
        x, y = run.endpoints(other)
        if (x in side) != (y in side):
            cut.append(other)
    return cut


@dataclass
class LimitTrees:
    """Normal form of an instance with unique coinciding limit trees."""

    tree: set[int]                      # the common lower = upper limit tree
    nontree_order: list[int]            # non-tree edges by non-decreasing lower limit
    cycles: dict[int, list[int]]        # non-tree edge -> its cycle (incl. itself)
    cuts: dict[int, list[int]]          # tree edge -> its cut (incl. itself)

    def cycle_of(self, eid: int) -> list[int]:
        if eid in self.tree:
            raise WrongSide(f"edge {eid} is a tree edge; it closes no cycle")
        if eid not in self.cycles:
            raise UnknownEdge(eid)
        return list(self.cycles[eid])

    def cut_of(self, eid: int) -> list[int]:
        if eid not in self.tree:
            raise WrongSide(f"edge {eid} is not a tree edge; it defines no cut")
        return list(self.cuts[eid])


def _uniqueness_gap(run: QueryRun, t_lower: set[int], t_upper: set[int]):
    """First strictness violation, or None if both trees are unique.

    Ties between two point intervals cannot be separated by queries and are
    resolved by edge id, so they do not count as violations.
    """
    for f in sorted(set(run.present_ids()) - t_upper):
        kf = upper_key(run.interval(f))
        for e in tree_cycle(run, t_upper, f):
            if e == f:
                continue
            ke = upper_key(run.interval(e))
            if ke > kf:
                raise PreconditionViolated("upper limit tree violates the cycle rule")
            if ke == kf and not (run.is_trivial(e) and run.is_trivial(f)):
                return ("upper", f, e)
    for l in sorted(t_lower):
        kl = lower_key(run.interval(l))
        for x in tree_cut(run, t_lower, l):
            if x == l:
                continue
            kx = lower_key(run.interval(x))
            if kx < kl:
                raise PreconditionViolated("lower limit tree violates the cut rule")
            if kx == kl and not (run.is_trivial(x) and run.is_trivial(l)):
                return ("lower", l, x)
    return None


def limit_trees_unique(run: QueryRun) -> bool:
    t_lower = lower_limit_tree(run)
    t_upper = upper_limit_tree(run)
    return t_lower == t_upper and _uniqueness_gap(run, t_lower, t_upper) is None


def compute_limit_trees(run: QueryRun) -> LimitTrees:
    """Cycle/cut structure of the current instance.

    Requires unique coinciding limit trees (establish with
    :func:`ensure_unique_limit_trees` first).
    """
    t_lower = lower_limit_tree(run)
    t_upper = upper_limit_tree(run)
    if t_lower != t_upper:
        raise PreconditionViolated("limit trees differ; preprocessing required")
    if _uniqueness_gap(run, t_lower, t_upper) is not None:
        raise PreconditionViolated("limit trees are not unique; preprocessing required")
    nontree = sorted(
        (e for e in run.present_ids() if e not in t_lower),
        key=lambda e: (lower_key(run.interval(e)), e),
    )
    cycles = {f: tree_cycle(run, t_lower, f) for f in nontree}
    cuts = {l: tree_cut(run, t_lower, l) for l in sorted(t_lower)}
    return LimitTrees(tree=t_lower, nontree_order=nontree, cycles=cycles, cuts=cuts)


def is_solved(run: QueryRun) -> Optional[set[int]]:
    """Verified spanning tree of the current instance, or None.

    A tree T is verified when every non-tree edge f dominates its cycle:
    sup*(e) <= inf*(f) for every cycle edge e, where sup*/inf* are the
    endpoint (or known value) of the respective interval.  Equality is
    admitted because open intervals exclude their endpoints.  Checking the
    lower limit tree alone is complete: any verified tree differs from it
    only by swaps of equal known values.
    """
    tree = lower_limit_tree(run)
    adj = _tree_adjacency(run, tree)
    for f in run.present_ids():
        if f in tree:
            continue
        inf_f = run.interval(f).inf_star()
        a, b = run.endpoints(f)
        for e in _tree_path(adj, a, b):
            if run.interval(e).sup_star() > inf_f:
                return None
    return tree


def verified_tree_of_original(run: QueryRun) -> Optional[set[int]]:
    """Verified MST of the original instance: contracted edges plus the
    verified tree of the current minor, or None if unsolved."""
    remnant = is_solved(run)
    if remnant is None:
        return None
    return set(run.contracted_ids()) | remnant


def reduce_once(run: QueryRun) -> bool:
    """Remove one verified edge: delete a non-tree edge that dominates its
    cycle, or contract a tree edge that is no larger than its whole cut.
    Both moves are safe for every realization of the remaining intervals.
    Returns True if the minor changed."""
    tree = lower_limit_tree(run)
    adj = _tree_adjacency(run, tree)
    for f in run.present_ids():
        if f in tree:
            continue
        inf_f = run.interval(f).inf_star()
        a, b = run.endpoints(f)
        if all(run.interval(e).sup_star() <= inf_f for e in _tree_path(adj, a, b)):
            run.delete(f)
            return True
    for l in sorted(tree):
        sup_l = run.interval(l).sup_star()
        if all(run.interval(x).inf_star() >= sup_l for x in tree_cut(run, tree, l) if x != l):
            run.contract(l)
            return True
    return False


def reduce_verified(run: QueryRun) -> int:
    count = 0
    while reduce_once(run):
        count += 1
    return count


def ensure_unique_limit_trees(run: QueryRun, reduce: bool = True) -> list[int]:
    """Query mandatory edges until the limit trees coincide and are unique.

    First requeries non-trivial edges of the lower-minus-upper difference,
    then repeatedly resolves upper-side ties (an equal-upper-limit swap makes
    the tied tree edge mandatory) and lower-side ties (symmetrically, the
    tied non-tree edge), to a fixpoint.  With reduce=True, verified edges are
    contracted/deleted eagerly along the way.  Returns the queried edge ids.
    """
    queried: list[int] = []
    cap = 4 * (len(run.present_ids()) + 1) ** 2 + 8
    for _ in range(cap):
        if reduce and reduce_once(run):
            continue
        t_lower = lower_limit_tree(run)
        t_upper = upper_limit_tree(run)
        if t_lower != t_upper:
            diff = sorted(e for e in t_lower - t_upper if not run.is_trivial(e))
            if not diff:
                raise PreconditionViolated(
                    "limit trees differ only in trivial edges; cannot requery"
                )
            run.reveal(diff[0])
            queried.append(diff[0])
            continue
        gap = _uniqueness_gap(run, t_lower, t_upper)
        if gap is None:
            return queried
        # upper-side tie: swapping the tied tree edge out of the upper tree
        # yields a tree pair whose difference is exactly that edge, so it is
        # mandatory; lower-side tie: symmetrically the tied cut edge is.
        _, _, partner = gap
        run.reveal(partner)
        queried.append(partner)
    raise RuntimeError("ensure_unique_limit_trees exceeded its iteration cap")
