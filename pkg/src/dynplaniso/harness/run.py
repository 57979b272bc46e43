"""Replaying scripts through a session, optionally against the oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..decomp.state import from_scratch_canonical
from ..engine import Session
from ..errors import DynPlanIsoError
from ..graph import ChangeEvent, StaticGraph
from ..iso3 import verify_iso
from ..modarith.primes import DEFAULT_WINDOW
from ..modarith.tutte import set_fault
from ..oracle import oracle_block, oracle_iso, oracle_spqr
from .script import Item, Script

YES, NO = "YES", "NO"


@dataclass
class Options:
    strict: bool = True
    witness: bool = False
    seed: int = 0
    pool_size: int = 8
    low_water: int = 4
    prime_window: tuple[int, int] = DEFAULT_WINDOW


@dataclass
class Report:
    entries: list[dict[str, Any]] = field(default_factory=list)
    diffs: list[dict[str, Any]] = field(default_factory=list)
    drops: int = 0
    refreshes: int = 0
    drops_since_refresh: int = 0
    aborted_at: int | None = None

    @property
    def answers(self) -> list[str]:
        return [e["answer"] for e in self.entries if e["change_type"] is None]

    def to_json(self) -> dict[str, Any]:
        return {
            "entries": self.entries,
            "diffs": self.diffs,
            "drops": self.drops,
            "refreshes": self.refreshes,
            "aborted_at": self.aborted_at,
        }

    def to_text(self) -> str:
        out = []
        for e in self.entries:
            what = e["change_type"] if e["change_type"] is not None else e["answer"]
            line = f"{e['line']}: {e['kind']} -> {what}"
            if e.get("error"):
                line += f" ({e['error']})"
            out.append(line)
            if e.get("witness"):
                out.append("   witness: " + " ".join(f"{a}->{b}" for a, b in e["witness"]))
        for d in self.diffs:
            out.append(f"DIFF line {d['line']}: {d['what']}")
        out.append(f"drops={self.drops} refreshes={self.refreshes}")
        if self.aborted_at is not None:
            out.append(f"aborted at line {self.aborted_at}")
        return "\n".join(out)


def _answer(session: Session, it: Item, witness: bool) -> tuple[str, list | None]:
    a = it.args
    if it.kind == "?":
        return (YES if session.components_isomorphic(*a) else NO), None
    if it.kind == "?c":
        return (YES if session.iso1_query(*a) else NO), None
    if it.kind == "?b":
        return (YES if session.iso2_query(*a) else NO), None
    ok, m = session.iso3_query(a[:4], a[4:])
    w = sorted(m.items()) if (ok and witness and m is not None) else None
    return (YES if ok else NO), w


def replay(script: Script, opts: Options | None = None, session: Session | None = None, checker=None) -> Report:
    """Apply every change in order and answer every query from the current state."""
    opts = opts or Options()
    s = session or Session(
        script.n, seed=opts.seed, pool_size=opts.pool_size, low_water=opts.low_water, prime_window=opts.prime_window
    )
    rep = Report()
    for it in script.items:
        entry: dict[str, Any] = {"line": it.line, "kind": it.render(), "answer": None, "change_type": None}
        try:
            if it.is_change:
                e = ChangeEvent.insert(*it.args) if it.kind == "+" else ChangeEvent.delete(*it.args)
                entry["change_type"] = s.apply(e).code
            else:
                entry["answer"], w = _answer(s, it, opts.witness)
                if w is not None:
                    entry["witness"] = w
        except DynPlanIsoError as exc:
            if opts.strict:
                rep.aborted_at = it.line
                entry["error"] = str(exc)
                entry["answer"] = "ABORT"
                rep.entries.append(entry)
                break
            entry["error"] = f"{type(exc).__name__}: {exc}"
            if it.is_change:
                entry["change_type"] = "skipped"
            else:
                entry["answer"] = "INVALID"
        entry["drops"] = s.drops
        entry["refreshes"] = s.refreshes
        rep.entries.append(entry)
        if checker is not None:
            checker(s, it, entry, rep)
    rep.drops, rep.refreshes = s.drops, s.refreshes
    rep.drops_since_refresh = s.family.pool.drops_since_refresh
    return rep


# ---------------------------------------------------------------------------
# Oracle cross-check
# ---------------------------------------------------------------------------


def oracle_answer(s: Session, it: Item) -> str:
    g = s.graph.snapshot()
    comp = s.graph.component_of
    a = it.args
    if it.kind == "?":
        return YES if oracle_iso(g.induced(comp(a[0])), g.induced(comp(a[1]))) is not None else NO
    if it.kind == "?c":
        return YES if oracle_iso(g.induced(comp(a[0])), g.induced(comp(a[1])), {a[0]: a[1]}) is not None else NO
    if it.kind == "?b":
        b1, b2 = oracle_block(g, a[0], a[1]), oracle_block(g, a[2], a[3])
        if b1 is None or b2 is None:
            return "INVALID"
        return YES if oracle_iso(b1, b2, {a[0]: a[2], a[1]: a[3]}) is not None else NO
    c1, c2 = _oracle_tricomp(g, a[:4]), _oracle_tricomp(g, a[4:])
    if c1 is None or c2 is None or len(set(a[:3])) < 3 or len(set(a[4:7])) < 3:
        return "INVALID"
    if (c1.kind == "cycle") != (c2.kind == "cycle"):
        return NO
    cons = dict(zip(a[:4], a[4:]))
    if len(cons) != len(set(a[:4])) or any(cons[x] != y for x, y in zip(a[:4], a[4:])):
        return NO
    return YES if oracle_iso(c1.graph, c2.graph, cons) is not None else NO


def _oracle_tricomp(g: StaticGraph, q):
    blk = oracle_block(g, q[0], q[1])
    if blk is None:
        return None
    verts, es = blk
    if len(es) < 3:
        return None
    tree = oracle_spqr((verts, es))
    hits = [c for c in tree.components.values() if set(q) <= c.vertices]
    return hits[0] if hits else None


def check(script: Script, opts: Options | None = None, fault: str | None = None, bundles: bool = True) -> Report:
    """Replay with oracle answers, from-scratch decompositions and (optionally) bundle checks after every step."""
    opts = opts or Options(strict=False)

    def checker(s: Session, it: Item, entry: dict, rep: Report) -> None:
        if it.is_change:
            if entry["change_type"] == "skipped":
                return
            if s.state.canonical() != from_scratch_canonical(s.graph):
                rep.diffs.append({"line": it.line, "what": "decomposition differs from a fresh build"})
            for msg in s.verify_bundles() if bundles else ():
                rep.diffs.append({"line": it.line, "what": msg})
            return
        want = oracle_answer(s, it)
        entry["oracle"] = want
        if want != entry["answer"]:
            rep.diffs.append({"line": it.line, "what": f"{it.render()}: engine {entry['answer']}, oracle {want}"})
        if entry.get("witness"):
            c1 = s.component_of(*it.args[:4]).graph
            c2 = s.component_of(*it.args[4:]).graph
            if not verify_iso(c1, c2, dict(entry["witness"])):
                rep.diffs.append({"line": it.line, "what": "witness is not an isomorphism"})

    if fault:
        set_fault(fault, True)
    try:
        return replay(script, opts, checker=checker)
    finally:
        if fault:
            set_fault(fault, False)
