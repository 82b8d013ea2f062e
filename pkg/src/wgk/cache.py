"""
Content-addressed on-disk cache for computed tables.

The key is the SHA-256 of the canonical JSON of (schema, group, weights,
instance).  Files are written to a temporary name and renamed into place, so a
reader never sees a partial file.  Every load re-checks one identity, chosen at
random, before the tables are trusted.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import tempfile
from pathlib import Path

from .klpoly import PolyMatrix
from .laurent import poly_from_json, poly_to_json

__all__ = ["SCHEMA_VERSION", "canonical", "content_key", "tables_to_json", "tables_from_json",
           "revalidate", "TableCache", "IDENTITIES"]

SCHEMA_VERSION = 1


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_key(config: dict) -> str:
    return hashlib.sha256(canonical({"schema": SCHEMA_VERSION, **config}).encode()).hexdigest()


def tables_to_json(t, config: dict) -> dict:
    W = t.W
    lab = W.word_str
    return {
        "schema": SCHEMA_VERSION,
        "config": config,
        "E": [lab(w) for w in t.M.E],
        "rank": t.H.rank,
        "tables": {k: m.to_json(lab) for k, m in t.matrices().items()},
        "mu": [{"s": W.gens[s], "x": lab(x), "y": lab(y), "poly": poly_to_json(a)}
               for (s, x, y), a in sorted(t.mu.items(), key=lambda kv: (kv[0][0], t.M.ideal.pos[kv[0][1]],
                                                                        t.M.ideal.pos[kv[0][2]]))]
        if t.mu is not None else None,
    }


def tables_from_json(data: dict, W) -> dict:
    """PolyMatrix tables (and mu when present) from :func:`tables_to_json` output."""
    if data.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"cache schema {data.get('schema')} != {SCHEMA_VERSION}")
    index = [W.parse_word(x) for x in data["E"]]
    rank = data["rank"]
    out = {k: PolyMatrix.from_json(v, index, rank, W.parse_word)
           for k, v in data["tables"].items()}
    if data.get("mu") is not None:
        gens = {g: s for s, g in enumerate(W.gens)}
        out["mu"] = {(gens[e["s"]], W.parse_word(e["x"]), W.parse_word(e["y"])):
                     poly_from_json(e["poly"], rank) for e in data["mu"]}
    return out


def _ident_diff(A, B):
    d = (A @ B).diff(PolyMatrix.identity("I", A.index, A.rank))
    return d


IDENTITIES = {
    "P Q = I": lambda m: _ident_diff(m["P"], m["Q"]),
    "Q P = I": lambda m: _ident_diff(m["Q"], m["P"]),
    "P~ Q~ = I": lambda m: _ident_diff(m["Pt"], m["Qt"]),
    "bar(R) R = I": lambda m: _ident_diff(m["R"].bar(), m["R"]),
    "bar(R~) R~ = I": lambda m: _ident_diff(m["Rt"].bar(), m["Rt"]),
    "bar(P) = bar(R) P": lambda m: m["P"].bar().diff(m["R"].bar() @ m["P"]),
}


def revalidate(tables: dict, rng: random.Random | None = None) -> tuple[str, object]:
    """Check one randomly chosen identity; returns (name, first difference or None)."""
    rng = rng or random.Random()
    name = rng.choice(sorted(IDENTITIES))
    return name, IDENTITIES[name](tables)


class TableCache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def load(self, key: str) -> dict | None:
        p = self.path(key)
        if not p.exists():
            return None
        with p.open() as fh:
            return json.load(fh)

    def store(self, key: str, data: dict) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.path(key)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(data, fh, indent=1, sort_keys=True)
                fh.write("\n")
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return p
