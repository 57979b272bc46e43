"""Combinatorial faces and embeddings of 3-connected planar graphs.

A face is stored as one of its two boundary orders; the reversed order is a
different ``CombFace``. Rotations of the same cyclic sequence compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import networkx as nx

from .errors import NotAFace, Not3Connected
from .graph import DynamicGraph, StaticGraph, is_triconnected


def _rotate_min(seq: tuple[int, ...]) -> tuple[int, ...]:
    if not seq:
        return seq
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


@dataclass(frozen=True)
class CombFace:
    cycle: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cycle", _rotate_min(tuple(self.cycle)))

    def __len__(self) -> int:
        return len(self.cycle)

    def __iter__(self):
        return iter(self.cycle)

    def __contains__(self, v: object) -> bool:
        return v in self.cycle

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.cycle)

    @cached_property
    def darts(self) -> frozenset[tuple[int, int]]:
        c = self.cycle
        return frozenset((c[i], c[(i + 1) % len(c)]) for i in range(len(c)))

    def reversed(self) -> "CombFace":
        return CombFace(tuple(reversed(self.cycle)))

    def position(self, v: int) -> int:
        return self.cycle.index(v)

    def walk_from(self, v: int) -> tuple[int, ...]:
        i = self.cycle.index(v)
        return self.cycle[i:] + self.cycle[:i]


@dataclass(frozen=True)
class Embedding:
    faces: frozenset[CombFace]
    outer: CombFace

    def faces_with(self, *vs: int) -> list[CombFace]:
        return sorted((f for f in self.faces if all(v in f for v in vs)), key=lambda f: f.cycle)

    def face_of_dart(self, u: int, v: int) -> CombFace:
        for f in self.faces:
            if (u, v) in f.darts:
                return f
        raise NotAFace(f"dart ({u}, {v}) is on no face")

    def mirrored(self) -> "Embedding":
        return Embedding(frozenset(f.reversed() for f in self.faces), self.outer.reversed())


def _as_static(c: DynamicGraph | StaticGraph) -> StaticGraph:
    return c.snapshot() if isinstance(c, DynamicGraph) else c


def trace_faces(g: StaticGraph) -> frozenset[CombFace]:
    """Faces of some planar embedding of a connected planar graph."""
    planar, emb = nx.check_planarity(g.to_networkx())
    if not planar:
        raise ValueError("graph is not planar")
    seen: set[tuple[int, int]] = set()
    faces = []
    for u, v in sorted(emb.edges()):
        if (u, v) in seen:
            continue
        faces.append(CombFace(tuple(emb.traverse_face(u, v, mark_half_edges=seen))))
    return frozenset(faces)


_EMBED_CACHE: dict[tuple[frozenset, CombFace], Embedding] = {}


def embed_3connected(c: DynamicGraph | StaticGraph, f: CombFace | Iterable[int]) -> Embedding:
    """The unique embedding of a 3-connected planar graph with outer face ``f``."""
    g = _as_static(c)
    if not isinstance(f, CombFace):
        f = CombFace(tuple(f))
    key = (g.edges, f)
    hit = _EMBED_CACHE.get(key)
    if hit is not None:
        return hit
    if not is_triconnected(g):
        raise Not3Connected("graph is not 3-connected")
    faces = trace_faces(g)
    if f not in faces:
        faces = frozenset(x.reversed() for x in faces)
        if f not in faces:
            raise NotAFace(f"{f.cycle} is not a face")
    out = Embedding(faces, f)
    if len(_EMBED_CACHE) > 50000:
        _EMBED_CACHE.clear()
    _EMBED_CACHE[key] = out
    return out


def some_face(g: StaticGraph) -> CombFace:
    """Deterministic face choice: the lexicographically smallest traced face."""
    return min(trace_faces(g), key=lambda f: (len(f), f.cycle))


def canonical_faces(g: StaticGraph) -> frozenset[CombFace]:
    """Face set of a 3-connected planar graph in a fixed reflection.

    The reflection is the one in which the lexicographically smallest
    oriented face appears.
    """
    faces = trace_faces(g)
    mirrored = frozenset(x.reversed() for x in faces)
    lo = min(f.cycle for f in faces)
    lo_m = min(f.cycle for f in mirrored)
    return faces if lo <= lo_m else mirrored
