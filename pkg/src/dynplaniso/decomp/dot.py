"""Graphviz DOT rendering of the maintained block and tri-trees."""

from __future__ import annotations


def _name(vs) -> str:
    return "_".join(str(v) for v in sorted(vs))


def state_to_dot(state) -> str:
    lines = ["graph decomposition {", "  node [fontname=Helvetica];"]
    for key in sorted(state.blocks, key=sorted):
        b = state.blocks[key]
        bid = f"B{_name(key)}"
        lines.append(f'  {bid} [shape=box, label="block {sorted(key)}"];')
        for v in sorted(key):
            if state.is_cut_vertex(v):
                lines.append(f'  c{v} [shape=circle, label="{v}"];')
                lines.append(f"  {bid} -- c{v};")
        if b.tri is None:
            continue
        for kind, k in b.tri.nodes():
            nid = f"{kind}{_name(k)}_{bid}"
            if kind == "C":
                comp = b.tri.components[k]
                lines.append(f'  {nid} [shape=ellipse, label="{comp.kind} {sorted(k)}"];')
                lines.append(f"  {bid} -- {nid} [style=dotted];")
            else:
                lines.append(f'  {nid} [shape=diamond, label="{sorted(k)}"];')
                for _, k2 in b.tri.neighbours((kind, k)):
                    lines.append(f"  {nid} -- C{_name(k2)}_{bid};")
    lines.append("}")
    return "\n".join(dict.fromkeys(lines)) + "\n"
