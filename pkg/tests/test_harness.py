from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from conftest import PRISM_EDGES, static
from dynplaniso.errors import ParseError, RangeError
from dynplaniso.graph import DynamicGraph
from dynplaniso.harness import Options, check, gen_sequence, parse_script, replay
from dynplaniso.harness.cli import main
from dynplaniso.iso3 import verify_iso
from dynplaniso.oracle import oracle_is_planar

TWO_TRIANGLES = """n 6
+ 0 1
+ 1 2
+ 0 2   # first triangle
+ 3 4
+ 4 5
+ 3 5
? 0 3
? 0 4
"""

K5 = "n 5\n" + "".join(f"+ {a} {b}\n" for a in range(5) for b in range(a + 1, 5))

PRISM = "n 6\n" + "".join(f"+ {a - 1} {b - 1}\n" for a, b in PRISM_EDGES)


# -- parsing ------------------------------------------------------------------------


def test_parse_counts_items():
    sc = parse_script("n 6\n+ 0 1\n? 0 3")
    assert sc.n == 6 and len(sc.events) == 1 and len(sc.queries) == 1


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError):
        parse_script("n 6\n+ 0 0")
    with pytest.raises(RangeError) as err:
        parse_script("n 6\n\n? 0 99")
    assert err.value.line == 3
    with pytest.raises(ParseError):
        parse_script("+ 0 1")
    with pytest.raises(ParseError):
        parse_script("n 4\nn 4")
    with pytest.raises(ParseError):
        parse_script("n 4\n?b 0 1 2")
    with pytest.raises(ParseError):
        parse_script("n 4\n* 0 1")


def test_render_round_trip():
    sc = parse_script(TWO_TRIANGLES)
    assert parse_script(sc.render()).items == [
        type(it)(i + 2, it.kind, it.args) for i, it in enumerate(sc.items)
    ]


# -- generation ----------------------------------------------------------------------


def test_generation_is_deterministic():
    assert gen_sequence(5, 10, 40).render() == gen_sequence(5, 10, 40).render()
    assert gen_sequence(5, 10, 40).render() != gen_sequence(6, 10, 40).render()


def test_every_prefix_is_planar():
    sc = gen_sequence(3, 9, 50, p_delete=0.2)
    g = DynamicGraph(sc.n)
    for it in sc.events:
        (g.add_edge if it.kind == "+" else g.remove_edge)(*it.args)
        assert oracle_is_planar(g.snapshot())


def test_no_deletions_gives_monotone_script():
    # 18 = 3n - 6 edges make a maximal planar graph on 8 vertices
    sc = gen_sequence(1, 8, 18, p_delete=0.0)
    assert all(it.kind == "+" for it in sc.events)


def test_maximal_planar_forces_a_deletion():
    sc = gen_sequence(1, 5, 12, p_delete=0.0)
    kinds = [it.kind for it in sc.events]
    assert len(kinds) == 12 and kinds[:9] == ["+"] * 9 and kinds[9] == "-"


def test_query_rate_zero():
    assert not gen_sequence(1, 8, 20, query_rate=0.0).queries


# -- replay --------------------------------------------------------------------------


def test_two_triangles_answer_yes():
    rep = replay(parse_script(TWO_TRIANGLES))
    assert rep.answers == ["YES", "YES"]
    assert [e["change_type"] for e in rep.entries[:3]] == ["+0,2", "+0,2", "+1,2"]


def test_strict_mode_aborts_on_k5():
    rep = replay(parse_script(K5))
    assert rep.aborted_at == 11
    assert rep.entries[-1]["answer"] == "ABORT"


def test_lenient_mode_skips():
    rep = replay(parse_script(K5 + "? 0 1\n"), Options(strict=False))
    assert rep.aborted_at is None
    assert rep.entries[9]["change_type"] == "skipped"
    assert rep.answers == ["YES"]


def test_witness_is_an_isomorphism():
    text = PRISM + "?t 0 1 2 3 3 4 5 0\n"
    rep = replay(parse_script(text), Options(witness=True))
    entry = rep.entries[-1]
    assert entry["answer"] == "YES"
    m = dict(entry["witness"])
    prism = static([(a - 1, b - 1) for a, b in PRISM_EDGES])
    assert verify_iso(prism, prism, m)


def test_report_json_fields():
    rep = replay(parse_script(TWO_TRIANGLES))
    data = rep.to_json()
    for e in data["entries"]:
        assert {"line", "kind", "answer", "change_type", "drops", "refreshes"} <= set(e)
    json.dumps(data)


def test_replay_is_deterministic():
    sc = gen_sequence(9, 10, 40)
    assert replay(sc, Options(seed=3)).to_json() == replay(sc, Options(seed=3)).to_json()


# -- check -------------------------------------------------------------------------------


def test_check_has_no_diffs():
    rep = check(gen_sequence(2, 10, 40), Options(strict=False, seed=2))
    assert rep.diffs == []


def test_injected_fault_is_caught():
    # (0, 4) is a chord of a prism square; removing it again is a -3,3 edge update
    text = PRISM + "+ 0 4\n- 0 4\n+ 0 4\n"
    rep = check(parse_script(text), Options(strict=False), fault="smw_sign")
    assert rep.diffs
    assert check(parse_script(text), Options(strict=False)).diffs == []


def test_drop_accounting_with_tiny_window():
    sc = gen_sequence(4, 12, 60)
    rep = check(sc, Options(strict=False, seed=4, pool_size=4, low_water=3, prime_window=(5, 60)))
    assert rep.diffs == []
    assert rep.drops > 0 and rep.refreshes > 0
    assert rep.drops_since_refresh < 4


# -- command line --------------------------------------------------------------------------


def test_cli_gen_replay_check(tmp_path):
    runner = CliRunner()
    path = tmp_path / "s.txt"
    res = runner.invoke(main, ["gen", "--seed", "3", "-n", "8", "--steps", "15", "-o", str(path)])
    assert res.exit_code == 0 and path.read_text().startswith("n 8\n")
    res = runner.invoke(main, ["replay", str(path), "--json"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["aborted_at"] is None and data["entries"]
    res = runner.invoke(main, ["check", str(path)])
    assert res.exit_code == 0 and "0 difference(s)" in res.output


def test_cli_strict_abort_and_parse_error(tmp_path):
    runner = CliRunner()
    k5 = tmp_path / "k5.txt"
    k5.write_text(K5)
    assert runner.invoke(main, ["replay", str(k5)]).exit_code == 1
    assert runner.invoke(main, ["replay", "--lenient", str(k5)]).exit_code == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("n 3\n+ 0 0\n")
    assert runner.invoke(main, ["replay", str(bad)]).exit_code == 2


def test_cli_fault_and_dot(tmp_path):
    runner = CliRunner()
    sc = tmp_path / "p.txt"
    sc.write_text(PRISM + "+ 0 4\n- 0 4\n- 1 4\n")
    assert runner.invoke(main, ["check", "--inject-fault", "smw_sign", str(sc)]).exit_code == 1
    dot = tmp_path / "out.dot"
    res = runner.invoke(main, ["replay", str(sc), "--dot", str(dot), "--prime-window", "5:60", "--pool-size", "4"])
    assert res.exit_code == 0 and dot.read_text().strip()
    assert runner.invoke(main, ["replay", str(sc), "--prime-window", "9"]).exit_code != 0
