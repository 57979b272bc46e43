"""Command line entry point."""

from __future__ import annotations

import json
import sys

import click

from ..decomp.dot import state_to_dot
from ..engine import Session
from ..errors import ScriptError
from .run import Options, check as run_check, replay as run_replay
from .script import gen_sequence, parse_script


def _window(value: str | None) -> tuple[int, int] | None:
    if value is None:
        return None
    try:
        lo, hi = (int(x) for x in value.replace(",", ":").split(":"))
    except ValueError:
        raise click.BadParameter("expected LO:HI") from None
    if not 2 < lo < hi:
        raise click.BadParameter("need 2 < LO < HI")
    return lo, hi


def _options(strict: bool, witness: bool, seed: int, pool_size: int, prime_window: str | None) -> Options:
    opts = Options(strict=strict, witness=witness, seed=seed, pool_size=pool_size, low_water=max(1, pool_size // 2))
    win = _window(prime_window)
    if win is not None:
        opts.prime_window = win
    return opts


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_script(text)
    except ScriptError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def _common(f):
    f = click.option("--seed", type=int, default=0, show_default=True, help="Seed for prime generation.")(f)
    f = click.option("--pool-size", type=click.IntRange(1, 64), default=8, show_default=True)(f)
    f = click.option("--prime-window", default=None, metavar="LO:HI", help="Prime window (default 2^20:2^21).")(f)
    f = click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")(f)
    return f


@click.group()
def main() -> None:
    """Dynamic planar graph isomorphism: replay, generate and check change scripts."""


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--strict/--lenient", default=True, show_default=True, help="Abort on an illegal change or skip it.")
@click.option("--witness", is_flag=True, help="Print vertex bijections for successful ?t queries.")
@click.option("--dot", type=click.Path(dir_okay=False, writable=True), default=None, help="Write the final decomposition as DOT.")
@_common
def replay(script, strict, witness, dot, seed, pool_size, prime_window, as_json) -> None:
    """Apply SCRIPT and answer its queries."""
    sc = _load(script)
    opts = _options(strict, witness, seed, pool_size, prime_window)
    session = Session(sc.n, seed=opts.seed, pool_size=opts.pool_size, low_water=opts.low_water, prime_window=opts.prime_window)
    rep = run_replay(sc, opts, session=session)
    click.echo(json.dumps(rep.to_json(), indent=1) if as_json else rep.to_text())
    if dot:
        with open(dot, "w", encoding="utf-8") as fh:
            fh.write(state_to_dot(session.state))
    if rep.aborted_at is not None:
        sys.exit(1)


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-n", "--n", "n", type=click.IntRange(min=2), default=12, show_default=True)
@click.option("--steps", type=click.IntRange(min=0), default=60, show_default=True)
@click.option("--p-delete", type=click.FloatRange(0, 1), default=0.3, show_default=True)
@click.option("--query-rate", type=click.FloatRange(0, 1), default=1.0, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, writable=True), default=None)
def gen(seed, n, steps, p_delete, query_rate, output) -> None:
    """Generate a random planarity-preserving script."""
    text = gen_sequence(seed, n, steps, p_delete, query_rate).render()
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--inject-fault", default=None, hidden=True)
@_common
def check(script, inject_fault, seed, pool_size, prime_window, as_json) -> None:
    """Replay SCRIPT against the brute-force references; exit 1 on any difference."""
    sc = _load(script)
    opts = _options(False, True, seed, pool_size, prime_window)
    rep = run_check(sc, opts, fault=inject_fault)
    if as_json:
        click.echo(json.dumps(rep.to_json(), indent=1))
    else:
        click.echo(rep.to_text())
        click.echo(f"{len(rep.diffs)} difference(s)")
    if rep.diffs:
        sys.exit(1)


if __name__ == "__main__":
    main()
