"""Reading the two JSON input formats and locating shipped fixtures."""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import InputError
from .simplicial import closure
from .stratified import CohomologyPackage, StratifiedSpace, assemble_package_ranks, assemble_package_simplicial, build_stratified

FIXTURE_ENV = "STRINGYCOH_FIXTURE_DIR"
MODES = ("simplicial", "ranks")


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("stringycoh") / "fixtures"))


def fixture_path(name: str) -> Path:
    """Shipped fixture by file name, with or without the ``.json`` suffix."""
    base = fixture_dir()
    for cand in (name, name + ".json", name + ".simp.json", name + ".ranks.json"):
        p = base / cand
        if p.is_file():
            return p
    available = sorted(p.name for p in base.glob("*.json")) if base.is_dir() else []
    raise InputError(f"no fixture {name!r} in {base} (available: {', '.join(available) or 'none'})")


def list_fixtures() -> list[str]:
    base = fixture_dir()
    return sorted(p.name for p in base.glob("*.json")) if base.is_dir() else []


def load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return doc


def guess_mode(path) -> Optional[str]:
    name = Path(path).name
    if name.endswith(".simp.json"):
        return "simplicial"
    if name.endswith(".ranks.json"):
        return "ranks"
    return None


def parse_simplicial_document(doc: dict) -> StratifiedSpace:
    if str(doc.get("format_version")) != "1":
        raise InputError(f"unsupported format_version {doc.get('format_version')!r}")
    verts = doc.get("vertices")
    facets = doc.get("facets")
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise InputError("'vertices' must be a list of strings")
    if len(set(verts)) != len(verts):
        raise InputError("'vertices' has duplicates")
    if not isinstance(facets, list) or not facets:
        raise InputError("'facets' must be a nonempty list of vertex lists")
    known = set(verts)
    for f in facets:
        if not isinstance(f, list) or not f:
            raise InputError(f"facet {f!r} must be a nonempty list")
        unknown = [v for v in f if v not in known]
        if unknown:
            raise InputError(f"facet {f!r} uses unknown vertices {unknown}")
    y = doc.get("singular_vertex")
    if y not in known:
        raise InputError(f"singular_vertex {y!r} is not a listed vertex")
    n = doc.get("half_dim")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("'half_dim' must be an integer >= 1")
    k = closure(facets, verts)
    return build_stratified(k, y, n)


def package_from_document(doc: dict, mode: str) -> CohomologyPackage:
    if mode == "simplicial":
        return assemble_package_simplicial(parse_simplicial_document(doc))
    if mode == "ranks":
        return assemble_package_ranks(doc)
    raise InputError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
