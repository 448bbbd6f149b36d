"""Bands shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Tuple

from .band import (
    Band,
    DClassDecomposition,
    build_strong_semilattice,
    component_names,
    decompose,
    parse_band,
    parse_strong_semilattice,
)

BUNDLED = ("y3", "band4", "normal5", "nonnormal5", "normal10", "rect1")


def _data_file(name: str):
    root = resources.files("igband") / "data"
    for suffix in (".band", ".ss"):
        f = root / (name + suffix)
        if f.is_file():
            return f
    raise KeyError(f"no bundled band named {name!r}")


def bundled_text(name: str) -> str:
    return _data_file(name).read_text(encoding="utf-8")


def load_text(text: str) -> Tuple[Band, DClassDecomposition]:
    """Parse a band file or strong-semilattice file; labels classes when possible."""
    first = next(
        (ln.split("#")[0].strip() for ln in text.splitlines() if ln.split("#")[0].strip()),
        "",
    )
    if first.startswith("elements:"):
        b = parse_band(text)
        return b, decompose(b)
    spec = parse_strong_semilattice(text)
    b = build_strong_semilattice(spec)
    return b, component_names(b, decompose(b), spec)


def load(name_or_path: str) -> Tuple[Band, DClassDecomposition]:
    """Load a bundled band by name, or a band file by path."""
    p = Path(name_or_path)
    if p.is_file():
        return load_text(p.read_text(encoding="utf-8"))
    stem = p.name.removesuffix(".band").removesuffix(".ss")
    return load_text(bundled_text(stem))


def band(name: str) -> Band:
    return load(name)[0]
