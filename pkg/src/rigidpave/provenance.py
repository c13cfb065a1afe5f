"""Header lines stamped on every CSV the tool writes."""

from __future__ import annotations

import hashlib
import json

from . import __version__


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()[:16]


def header_lines(kind: str, config: dict, units: str) -> list[str]:
    return [
        f"# rigidpave {__version__} {kind}",
        f"# config-hash {config_hash(config)} {json.dumps(config, sort_keys=True)}",
        f"# units {units}",
    ]


def strip_comments(fh) -> list[str]:
    """Lines of an open text file that are not '#' comments."""
    return [line for line in fh if not line.startswith("#")]
