"""Python bindings for the talkdoc spoken-command editor."""

from ._core import FormatError, ScriptParseError, Session, render, run_script, tokenize, verbalize

__all__ = ["FormatError", "ScriptParseError", "Session", "render", "run_script", "tokenize", "verbalize"]
