"""Element ordering, labels and union-find shared by every module.

Elements of finite sets are hashable values built from strings, ints and
nested tuples.  ``ekey`` gives them a total deterministic order and
``label`` a printable string form.
"""

from __future__ import annotations

from typing import Any, Hashable, Iterable


def ekey(e: Any):
    if isinstance(e, str):
        return (0, e)
    if isinstance(e, bool):
        return (1, int(e))
    if isinstance(e, int):
        return (1, e)
    if isinstance(e, tuple):
        return (2, tuple(ekey(x) for x in e))
    if e is None:
        return (-1,)
    return (3, repr(e))


def esorted(items: Iterable[Any]) -> tuple:
    return tuple(sorted(items, key=ekey))


def emin(items: Iterable[Any]):
    return min(items, key=ekey)


def label(e: Any) -> str:
    if isinstance(e, str):
        return e
    if isinstance(e, tuple):
        return "(" + ",".join(label(x) for x in e) + ")"
    return str(e)


class UnionFind:
    """Disjoint sets with path compression; the root of a class is its least member."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: dict = {}
        for x in items:
            self.parent[x] = x

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if ekey(rx) <= ekey(ry):
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry

    def classes(self) -> dict:
        """Map every member to its class representative."""
        return {x: self.find(x) for x in self.parent}

    def representatives(self) -> tuple:
        return esorted({self.find(x) for x in self.parent})
