"""JSON documents and the on-disk presentation cache."""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path

from .errors import IntegrityError
from .generators import validate_pair
from .lattice import AbGroupStructure, IntMatrix
from .presentations import Presentation, build

FORMAT_VERSION = 1
CACHE_ENV = "TAUTPIC_CACHE"
_SAFE_INT = 2**53 - 1


def encode_int(x: int):
    """Plain JSON number when exactly representable as a double, else a decimal string."""
    return str(x) if abs(x) > _SAFE_INT else x


def decode_int(x) -> int:
    if isinstance(x, bool):
        raise ValueError("booleans are not integers here")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x)
    raise ValueError(f"expected an integer, got {x!r}")


def structure_to_json(st: AbGroupStructure) -> dict:
    return {
        "free_rank": encode_int(st.free_rank),
        "invariant_factors": [encode_int(d) for d in st.invariant_factors],
    }


def structure_from_json(doc) -> AbGroupStructure:
    return AbGroupStructure(
        decode_int(doc["free_rank"]), tuple(decode_int(d) for d in doc["invariant_factors"])
    )


def presentation_to_document(pres: Presentation) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "g": pres.g,
        "n": pres.n,
        "variant": pres.variant,
        "generators": list(pres.generators),
        "relations": [[encode_int(x) for x in row] for row in pres.relations.rows],
        "structure": structure_to_json(pres.structure),
    }


def presentation_from_document(doc: dict) -> Presentation:
    if doc.get("format_version") != FORMAT_VERSION:
        raise IntegrityError(f"unsupported format_version {doc.get('format_version')!r}")
    pair = validate_pair(doc["g"], doc["n"], doc["variant"])
    gens = tuple(doc["generators"])
    rows = [[decode_int(x) for x in row] for row in doc["relations"]]
    pres = Presentation(pair, doc["variant"], gens, IntMatrix(rows, ncols=len(gens)))
    stated = structure_from_json(doc["structure"])
    if stated != pres.structure:
        raise IntegrityError(f"document states {stated} but its relations give {pres.structure}")
    return pres


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


class PresentationCache:
    """Directory of presentation documents keyed by (format_version, g, n, variant).

    Files are written to a temporary name and renamed into place, so readers
    only ever see complete documents; a lock serialises writers in-process.
    """

    _lock = threading.Lock()

    def __init__(self, directory):
        self.directory = Path(directory)

    def path(self, g: int, n: int, variant: str) -> Path:
        return self.directory / f"v{FORMAT_VERSION}_g{g}_n{n}_{variant}.json"

    def get(self, g, n, variant) -> Presentation | None:
        p = self.path(g, n, variant)
        try:
            text = p.read_text()
        except FileNotFoundError:
            return None
        try:
            return presentation_from_document(json.loads(text))
        except (ValueError, KeyError, IntegrityError):
            return None

    def put(self, pres: Presentation):
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.path(pres.g, pres.n, pres.variant)
        with self._lock:
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
            try:
                with os.fdopen(fd, "w") as fh:
                    fh.write(dumps(presentation_to_document(pres)))
                os.replace(tmp, target)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise


def resolve_cache_dir(flag=None):
    if flag:
        return flag
    return os.environ.get(CACHE_ENV) or None


def load_presentation(g: int, n: int, variant: str = "stable", cache_dir=None) -> Presentation:
    validate_pair(g, n, variant)
    if cache_dir is None:
        return build(g, n, variant)
    cache = PresentationCache(cache_dir)
    pres = cache.get(g, n, variant)
    if pres is None:
        pres = build(g, n, variant)
        cache.put(pres)
    return pres


def cl_result_to_json(result) -> dict:
    doc = {
        "g": result.pair.g,
        "n": result.pair.n,
        "generators": list(result.generators),
        "subgroup_basis": [[encode_int(x) for x in row] for row in result.subgroup_basis.rows],
        "quotient": structure_to_json(result.quotient),
        "method": result.method,
    }
    if result.warning:
        doc["warning"] = result.warning
    return doc
