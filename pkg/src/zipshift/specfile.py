"""JSON spec files.

    {"label": "...", "s_plus": ["0", "1"], "s_minus": ["a"],
     "phi": {"0": "a", "1": "a"}, "p_plus": ["1/3", "2/3"]}

Weights are ``"num/den"`` strings so the exact values survive the round trip.
"""
from __future__ import annotations

import json
from pathlib import Path

from .spec import ParseError, SpecError, ZipShiftSpec, validate_spec

__all__ = ["load_spec", "loads_spec", "dumps_spec"]


def _line_of(text: str, symbol: str | None) -> int | None:
    if symbol is None:
        return None
    needle = json.dumps(symbol)
    for n, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return n
    return None


def loads_spec(text: str, source: str = "<string>") -> ZipShiftSpec:
    """Parse and validate; errors keep their class and gain ``source:line``."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}:{e.lineno}: invalid JSON: {e.msg}") from None
    try:
        return validate_spec(raw)
    except SpecError as e:
        line = _line_of(text, e.symbol)
        where = f"{source}:{line}" if line is not None else source
        raise type(e)(f"{where}: {e}", symbol=e.symbol) from None


def load_spec(path: str | Path) -> ZipShiftSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"{path}: cannot read: {e.strerror}") from None
    return loads_spec(text, str(path))


def dumps_spec(spec: ZipShiftSpec) -> str:
    return json.dumps(spec.to_raw(), indent=2) + "\n"
