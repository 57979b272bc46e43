"""Script replay, generation and oracle cross-checking."""

from __future__ import annotations

from .run import Options, Report, check, oracle_answer, replay
from .script import Item, Script, gen_sequence, parse_script

__all__ = ["Item", "Options", "Report", "Script", "check", "gen_sequence", "oracle_answer", "parse_script", "replay"]
