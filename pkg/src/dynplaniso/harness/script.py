"""Change scripts: parsing, rendering and seeded generation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import ParseError, RangeError
from ..graph import DynamicGraph, edge_key, is_planar

ARITY = {"+": 2, "-": 2, "?": 2, "?c": 2, "?b": 4, "?t": 8}
CHANGES = ("+", "-")


@dataclass(frozen=True)
class Item:
    line: int
    kind: str
    args: tuple[int, ...]

    @property
    def is_change(self) -> bool:
        return self.kind in CHANGES

    def render(self) -> str:
        return " ".join([self.kind, *map(str, self.args)])


@dataclass
class Script:
    n: int
    items: list[Item] = field(default_factory=list)

    @property
    def events(self) -> list[Item]:
        return [it for it in self.items if it.is_change]

    @property
    def queries(self) -> list[Item]:
        return [it for it in self.items if not it.is_change]

    def render(self) -> str:
        return "\n".join([f"n {self.n}"] + [it.render() for it in self.items]) + "\n"


def parse_script(text: str) -> Script:
    n: int | None = None
    items: list[Item] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        kind, rest = body[0], body[1:]
        try:
            nums = [int(x) for x in rest]
        except ValueError:
            raise ParseError(lineno, f"expected integers after {kind!r}") from None
        if kind == "n":
            if n is not None or items:
                raise ParseError(lineno, "the header 'n <int>' must come first and only once")
            if len(nums) != 1 or nums[0] < 1:
                raise ParseError(lineno, "header needs one positive integer")
            n = nums[0]
            continue
        if kind not in ARITY:
            raise ParseError(lineno, f"unknown item {kind!r}")
        if len(nums) != ARITY[kind]:
            raise ParseError(lineno, f"{kind!r} takes {ARITY[kind]} vertices, got {len(nums)}")
        if kind in CHANGES and nums[0] == nums[1]:
            raise ParseError(lineno, f"self-loop at {nums[0]}")
        if n is None:
            raise ParseError(lineno, "missing header 'n <int>'")
        bad = [v for v in nums if not 0 <= v < n]
        if bad:
            raise RangeError(lineno, f"vertex {bad[0]} outside 0..{n - 1}")
        items.append(Item(lineno, kind, tuple(nums)))
    if n is None:
        raise ParseError(1, "missing header 'n <int>'")
    return Script(n, items)


def gen_sequence(
    seed: int,
    n: int,
    steps: int,
    p_delete: float = 0.3,
    query_rate: float = 1.0,
) -> Script:
    """Random planarity-preserving changes, each followed (at ``query_rate``) by a ``?`` query."""
    if n < 2:
        raise ValueError("need at least two vertices")
    rng = random.Random(seed)
    g = DynamicGraph(n)
    items: list[Item] = []
    line = 2
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for _ in range(steps):
        edges = sorted(g.edges())
        pick = None
        if not (edges and rng.random() < p_delete):
            cands = [e for e in pairs if not g.has_edge(*e)]
            rng.shuffle(cands)
            snap = g.snapshot()
            pick = next((e for e in cands if is_planar(snap.with_edges(add=[edge_key(*e)]))), None)
        if pick is not None:
            u, v = pick
            g.add_edge(u, v)
            kind = "+"
        elif edges:
            # deletion drawn, or the graph is maximal planar
            u, v = rng.choice(edges)
            g.remove_edge(u, v)
            kind = "-"
        else:
            break  # a single vertex: nothing to do
        items.append(Item(line, kind, (u, v)))
        line += 1
        if rng.random() < query_rate:
            a, b = rng.sample(range(n), 2)
            items.append(Item(line, "?", (a, b)))
            line += 1
    return Script(n, items)
