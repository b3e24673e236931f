"""Bundled presentation files and hand-built axiom tables."""

from pathlib import Path

HERE = Path(__file__).parent


def path(name):
    """Absolute path of a bundled fixture file."""
    p = HERE / name
    if not p.exists():
        raise FileNotFoundError(name)
    return str(p)


def names(suffix=None):
    out = sorted(p.name for p in HERE.iterdir() if p.suffix in (".2pres", ".2frag"))
    return [n for n in out if suffix is None or n.endswith(suffix)]
