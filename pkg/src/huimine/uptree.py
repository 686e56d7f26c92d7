"""UP-Tree: prefix tree over reorganized transactions with discounted node utilities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .dataset import TransactionDatabase


class TreeOrderError(ValueError):
    pass


@dataclass(frozen=True)
class ReorganizedTransaction:
    items: tuple[tuple[int, int], ...]   # (item, item utility) in header order
    rtu: int


@dataclass(frozen=True)
class PathEntry:
    prefix_items: tuple[int, ...]        # root-to-leaf, excluding the source item
    path_utility: int
    path_count: int


class UpNode:
    __slots__ = ("item", "count", "utility", "parent", "children", "link")

    def __init__(self, item: int | None, parent: "UpNode | None"):
        self.item = item
        self.count = 0
        self.utility = 0
        self.parent = parent
        self.children: dict[int, UpNode] = {}
        self.link: UpNode | None = None

    def __repr__(self):
        return f"UpNode({self.item}, count={self.count}, nu={self.utility})"


class HeaderEntry:
    __slots__ = ("item", "twu", "utility", "head", "tail")

    def __init__(self, item: int, twu: int):
        self.item = item
        self.twu = twu
        self.utility = 0          # accumulated node utility over the link chain
        self.head: UpNode | None = None
        self.tail: UpNode | None = None

    def nodes(self):
        node = self.head
        while node is not None:
            yield node
            node = node.link


def rank_items(twu: Mapping[int, int]) -> list[int]:
    """Header order: descending TWU, ties by ascending item id."""
    return sorted(twu, key=lambda i: (-twu[i], i))


class UpTree:
    def __init__(self, twu: Mapping[int, int]):
        self.root = UpNode(None, None)
        order = rank_items(twu)
        self.rank = {item: k for k, item in enumerate(order)}
        self.header: dict[int, HeaderEntry] = {item: HeaderEntry(item, twu[item]) for item in order}
        self.node_count = 0

    @property
    def order(self) -> list[int]:
        """Header items from highest to lowest rank."""
        return list(self.header)

    def is_empty(self) -> bool:
        return not self.root.children

    def insert(self, items: Iterable[int], increments: Iterable[int], count: int = 1) -> None:
        """Insert one path; ``increments[k]`` is added to the k-th node's utility."""
        node = self.root
        last = -1
        for item, inc in zip(items, increments):
            r = self.rank.get(item)
            if r is None or r <= last:
                raise TreeOrderError(f"item {item} out of header order")
            last = r
            child = node.children.get(item)
            if child is None:
                child = UpNode(item, node)
                node.children[item] = child
                entry = self.header[item]
                if entry.tail is None:
                    entry.head = child
                else:
                    entry.tail.link = child
                entry.tail = child
                self.node_count += 1
            child.count += count
            child.utility += inc
            self.header[item].utility += inc
            node = child

    def prune_header(self) -> None:
        """Drop header entries that never received a node."""
        for item in [i for i, e in self.header.items() if e.head is None]:
            del self.header[item]

    def dump(self) -> str:
        """Preorder ``depth item count node_utility`` lines, root omitted."""
        lines: list[str] = []

        def walk(node: UpNode, depth: int):
            for item in sorted(node.children, key=self.rank.__getitem__):
                child = node.children[item]
                lines.append(f"{depth} {item} {child.count} {child.utility}")
                walk(child, depth + 1)

        walk(self.root, 1)
        return "".join(line + "\n" for line in lines)

    def dump_header(self) -> str:
        return "".join(f"{e.item} {e.twu} {e.utility}\n" for e in self.header.values())


def reorganize(db: TransactionDatabase, twu: Mapping[int, int],
               min_util: int) -> list[ReorganizedTransaction]:
    """Drop unpromising items (TWU below ``min_util``) and sort by header order."""
    rank = {item: k for k, item in enumerate(rank_items(twu)) if twu[item] >= min_util}
    out = []
    for t in db:
        kept = sorted(
            ((item, qty * db.utilities[item]) for item, qty in t.entries if item in rank),
            key=lambda iu: rank[iu[0]],
        )
        if kept:
            out.append(ReorganizedTransaction(tuple(kept), sum(u for _, u in kept)))
    return out


def build_global_tree(reorg: Iterable[ReorganizedTransaction],
                      twu_promising: Mapping[int, int]) -> UpTree:
    """Insert reorganized transactions; a node gains the utility of its path prefix."""
    tree = UpTree(twu_promising)
    for rt in reorg:
        running = 0
        increments = []
        for _, u in rt.items:
            running += u
            increments.append(running)
        tree.insert([i for i, _ in rt.items], increments)
    tree.prune_header()
    return tree


def extract_cpb(tree: UpTree, item: int) -> list[PathEntry]:
    try:
        entry = tree.header[item]
    except KeyError:
        raise KeyError(f"item {item} not in header") from None
    paths = []
    for node in entry.nodes():
        prefix = []
        p = node.parent
        while p is not None and p.item is not None:
            prefix.append(p.item)
            p = p.parent
        prefix.reverse()
        paths.append(PathEntry(tuple(prefix), node.utility, node.count))
    return paths
