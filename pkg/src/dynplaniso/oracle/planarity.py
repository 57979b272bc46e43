"""Path-addition planarity check (Demoucron, Malgrange and Pertuiset).

Quadratic and simple; used only to cross-check the main-path predicate.
"""

from __future__ import annotations

from ._common import adjacency, reach


def _blocks(adj: dict[int, set[int]]) -> list[set[tuple[int, int]]]:
    # Two edges at x share a block iff their far ends stay connected without x.
    edges = sorted({(min(u, v), max(u, v)) for u in adj for v in adj[u]})
    parent = {e: e for e in edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in adj:
        nbrs = sorted(adj[x])
        for i, a in enumerate(nbrs):
            ra = reach(adj, a, [x])
            for b in nbrs[i + 1:]:
                if b in ra:
                    parent[find((min(x, a), max(x, a)))] = find((min(x, b), max(x, b)))
    groups: dict = {}
    for e in edges:
        groups.setdefault(find(e), set()).add(e)
    return list(groups.values())


def _find_cycle(adj: dict[int, set[int]]) -> list[int]:
    start = min(adj)
    parent = {start: None}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                stack.append(y)
            elif parent[x] != y:
                # back/cross edge closes a cycle through the tree paths
                px, py = [x], [y]
                while px[-1] is not None:
                    px.append(parent[px[-1]])
                while py[-1] is not None:
                    py.append(parent[py[-1]])
                px.pop()
                py.pop()
                common = set(px) & set(py)
                i = next(k for k, v in enumerate(px) if v in common)
                j = py.index(px[i])
                return px[: i + 1] + py[:j][::-1]
    raise ValueError("acyclic block")


def _block_planar(es: set[tuple[int, int]]) -> bool:
    adj: dict[int, set[int]] = {}
    for u, v in es:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    n, m = len(adj), len(es)
    if m <= 2 or n <= 4:
        return True
    if m > 3 * n - 6:
        return False
    cycle = _find_cycle(adj)
    faces = [list(cycle), list(cycle)]
    emb_v = set(cycle)
    emb_e = {(min(cycle[i], cycle[i - 1]), max(cycle[i], cycle[i - 1])) for i in range(len(cycle))}
    while len(emb_e) < m:
        frags = []
        for u, v in sorted(es - emb_e):
            if u in emb_v and v in emb_v:
                frags.append(({u, v}, [u, v]))
        rest = set(adj) - emb_v
        seen: set[int] = set()
        for s in sorted(rest):
            if s in seen:
                continue
            comp = reach(adj, s, emb_v)
            seen |= comp
            att = {y for x in comp for y in adj[x] if y in emb_v}
            frags.append((att, comp))
        choice = None
        for att, body in frags:
            ok = [i for i, f in enumerate(faces) if att <= set(f)]
            if not ok:
                return False
            if choice is None or len(ok) == 1:
                choice = (att, body, ok[0])
                if len(ok) == 1:
                    break
        att, body, fi = choice
        if isinstance(body, list):
            path = body
        else:
            # path through the fragment body between two distinct attachments
            a = min(att)
            start = min(x for x in body if a in adj[x])
            prev = {start: a}
            stack = [start]
            end = None
            while stack and end is None:
                x = stack.pop()
                for y in sorted(adj[x]):
                    if y in emb_v and y != a:
                        end = (x, y)
                        break
                    if y in body and y not in prev:
                        prev[y] = x
                        stack.append(y)
            x, b = end
            path = [b, x]
            while path[-1] != a:
                path.append(prev[path[-1]])
            path.reverse()
        face = faces.pop(fi)
        a, b = path[0], path[-1]
        ia = face.index(a)
        rot = face[ia:] + face[:ia]
        jb = rot.index(b)
        inner = path[1:-1]
        faces.append(rot[: jb + 1] + inner[::-1])
        faces.append(rot[jb:] + [a] + inner)
        for i in range(len(path) - 1):
            emb_e.add((min(path[i], path[i + 1]), max(path[i], path[i + 1])))
        emb_v.update(path)
    return True


def oracle_is_planar(g) -> bool:
    adj = adjacency(g)
    adj = {v: s for v, s in adj.items() if s}
    if not adj:
        return True
    return all(_block_planar(b) for b in _blocks(adj))
